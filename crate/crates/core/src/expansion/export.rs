use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansion::index::TruncationSpec;
use crate::expansion::spectrum::{Spectrum, SpectrumLine};
use crate::scalar::Scalar;

pub const SPECTRUM_CSV_HEADER: [&str; 7] = ["k", "frequency", "alpha", "A", "B", "c_re", "c_im"];

/// Writes `k;frequency;alpha;A;B;c_re;c_im`, one row per line, `k` comma-joined.
pub fn write_spectrum_csv<T: Scalar, W: Write>(spectrum: &Spectrum<T>, sink: W) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().delimiter(b';').from_writer(sink);
    writer.write_record(SPECTRUM_CSV_HEADER)?;
    for line in &spectrum.lines {
        writer.write_record([
            line.index.to_string(),
            line.frequency.to_string(),
            line.amplitude.to_string(),
            line.cos_amp.to_string(),
            line.sin_amp.to_string(),
            line.complex_coeff.re.to_string(),
            line.complex_coeff.im.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn spectrum_csv_string<T: Scalar>(spectrum: &Spectrum<T>) -> Result<String> {
    let mut buffer = Vec::new();
    write_spectrum_csv(spectrum, &mut buffer)?;
    String::from_utf8(buffer).map_err(|e| Error::Validation(e.to_string()))
}

#[derive(Serialize)]
struct JsonLine<'a, T> {
    k: &'a crate::expansion::index::MultiIndex,
    frequency: T,
    alpha: T,
    #[serde(rename = "A")]
    cos_amp: T,
    #[serde(rename = "B")]
    sin_amp: T,
    c_re: T,
    c_im: T,
}

#[derive(Serialize)]
struct JsonSpectrum<'a, T> {
    truncation: &'a TruncationSpec<T>,
    tail_bound: T,
    constant: T,
    form: crate::expansion::spectrum::SpectrumForm,
    lines: Vec<JsonLine<'a, T>>,
}

fn json_line<T: Scalar>(line: &SpectrumLine<T>) -> JsonLine<'_, T> {
    JsonLine {
        k: &line.index,
        frequency: line.frequency,
        alpha: line.amplitude,
        cos_amp: line.cos_amp,
        sin_amp: line.sin_amp,
        c_re: line.complex_coeff.re,
        c_im: line.complex_coeff.im,
    }
}

/// JSON document with the lines plus truncation, tail bound and constant.
pub fn spectrum_json<T: Scalar>(spectrum: &Spectrum<T>) -> Result<String> {
    let doc = JsonSpectrum {
        truncation: &spectrum.truncation,
        tail_bound: spectrum.tail_bound,
        constant: spectrum.constant,
        form: spectrum.form,
        lines: spectrum.lines.iter().map(json_line).collect(),
    };
    serde_json::to_string_pretty(&doc).map_err(Error::from_json)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::spectrum::expand_neuron;

    #[test]
    fn csv_layout() {
        let s = expand_neuron(&[1.0], &[1.0], &[0.0], 0.0, &TruncationSpec::new(2)).unwrap();
        let text = spectrum_csv_string(&s).unwrap();
        let mut rows = text.lines();
        assert_eq!(rows.next(), Some("k;frequency;alpha;A;B;c_re;c_im"));
        let first: Vec<&str> = rows.next().unwrap().split(';').collect();
        assert_eq!(first[0], "0");
        assert_eq!(text.lines().count(), 6);
    }

    #[test]
    fn csv_multi_index_column() {
        let s = expand_neuron(
            &[0.5, 0.2],
            &[1.0, 2.0],
            &[0.0, 0.0],
            0.1,
            &TruncationSpec::new(1),
        )
        .unwrap();
        let text = spectrum_csv_string(&s).unwrap();
        let mut reader = csv::ReaderBuilder::new()
            .delimiter(b';')
            .from_reader(text.as_bytes());
        let ks: Vec<String> = reader.records().map(|r| r.unwrap()[0].to_owned()).collect();
        assert_eq!(ks[0], "0,0");
        assert!(ks.contains(&"-1,1".to_owned()));
        assert_eq!(ks.len(), 9);
    }

    #[test]
    fn json_metadata() {
        let s = expand_neuron(&[1.0], &[1.0], &[0.0], 0.0, &TruncationSpec::new(3)).unwrap();
        let value: serde_json::Value = serde_json::from_str(&spectrum_json(&s).unwrap()).unwrap();
        assert_eq!(value["truncation"]["box_bound"], 3);
        assert_eq!(value["tail_bound"].as_f64().unwrap(), s.tail_bound);
        assert_eq!(value["lines"].as_array().unwrap().len(), 7);
        assert_eq!(value["lines"][1]["k"], serde_json::json!([-1]));
    }
}
