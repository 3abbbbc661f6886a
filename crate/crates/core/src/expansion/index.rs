use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::scalar::Scalar;

/// Default cap on `(2B+1)^n` enumerated indices.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Integer vector `k ∈ ℤⁿ` selecting the harmonic with frequency `⟨k, ω⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<i32>);

impl MultiIndex {
    pub fn new(entries: Vec<i32>) -> Self {
        Self(entries)
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// `(0, …, 0, value, 0, …)` with `value` at `position`.
    pub fn axis(n: usize, position: usize, value: i32) -> Self {
        let mut k = vec![0; n];
        k[position] = value;
        Self(k)
    }

    pub fn entries(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    pub fn l1(&self) -> u64 {
        self.0.iter().map(|k| u64::from(k.unsigned_abs())).sum()
    }

    pub fn linf(&self) -> u32 {
        self.0.iter().map(|k| k.unsigned_abs()).max().unwrap_or(0)
    }

    /// `Σ k_i`.
    pub fn sum(&self) -> i64 {
        self.0.iter().map(|&k| i64::from(k)).sum()
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|k| -k).collect())
    }

    /// Representative of the `{k, -k}` class: zero, or first nonzero entry positive.
    pub fn is_canonical(&self) -> bool {
        self.0.iter().find(|&&k| k != 0).is_none_or(|&k| k > 0)
    }

    pub fn canonical(&self) -> Self {
        if self.is_canonical() {
            self.clone()
        } else {
            self.negated()
        }
    }

    /// `⟨k, v⟩`, accumulated in index order.
    pub fn dot<T: Scalar>(&self, v: &[T]) -> T {
        self.0
            .iter()
            .zip(v)
            .fold(T::zero(), |acc, (&k, &x)| acc + T::of(f64::from(k)) * x)
    }

    /// Enumeration order: `‖k‖₁` first, then lexicographic.
    pub fn importance_cmp(&self, other: &Self) -> Ordering {
        self.l1()
            .cmp(&other.l1())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|p| {
                p.trim().parse::<i32>().map_err(|e| Error::Parse {
                    field: "k".into(),
                    message: format!("`{p}`: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

/// Truncation of an expansion to the box `‖k‖_∞ <= B`, optionally dropping small amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationSpec<T> {
    pub box_bound: u32,
    /// Applied after box enumeration; dropped amplitudes are added to the tail bound.
    pub amplitude_floor: Option<T>,
}

impl<T: Scalar> TruncationSpec<T> {
    pub fn new(box_bound: u32) -> Self {
        Self {
            box_bound,
            amplitude_floor: None,
        }
    }

    pub fn with_amplitude_floor(mut self, floor: T) -> Result<Self> {
        if !(floor >= T::zero()) {
            return Err(Error::Validation(
                "amplitude floor must be nonnegative".into(),
            ));
        }
        self.amplitude_floor = Some(floor);
        Ok(self)
    }
}

/// `(2B+1)^n`, or `None` on overflow.
pub fn box_size(n: usize, box_bound: u32) -> Option<u64> {
    let side = 2 * u64::from(box_bound) + 1;
    side.checked_pow(u32::try_from(n).ok()?)
}

/// Number of `±k` classes with `k ≠ 0` inside the box: `((2B+1)^n - 1) / 2`.
pub fn nonzero_class_count(n: usize, box_bound: u32) -> Option<u64> {
    box_size(n, box_bound).map(|s| (s - 1) / 2)
}

/// All `k` with `‖k‖_∞ <= B`, sorted by `‖k‖₁` then lexicographically.
pub fn enumerate_indices<T: Scalar>(n: usize, spec: &TruncationSpec<T>) -> Result<Vec<MultiIndex>> {
    enumerate_indices_with_cap(n, spec.box_bound, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_indices_with_cap(n: usize, box_bound: u32, cap: u64) -> Result<Vec<MultiIndex>> {
    if n == 0 {
        return Err(Error::Validation("index dimension must be positive".into()));
    }
    let count = box_size(n, box_bound)
        .filter(|&c| c <= cap)
        .ok_or_else(|| {
            Error::Resource(format!(
                "(2B+1)^n with B={box_bound}, n={n} exceeds the enumeration cap of {cap} indices; \
             lower the box bound or the width"
            ))
        })?;
    let b = box_bound as i32;
    let mut out = Vec::with_capacity(count as usize);
    let mut current = vec![-b; n];
    loop {
        out.push(MultiIndex(current.clone()));
        // odometer increment
        let mut pos = n;
        loop {
            if pos == 0 {
                out.sort_by(MultiIndex::importance_cmp);
                return Ok(out);
            }
            pos -= 1;
            if current[pos] < b {
                current[pos] += 1;
                break;
            }
            current[pos] = -b;
        }
    }
}

/// The zero index followed by one representative per nonzero `±k` class, in enumeration order.
pub fn canonical_classes<T: Scalar>(n: usize, spec: &TruncationSpec<T>) -> Result<Vec<MultiIndex>> {
    Ok(enumerate_indices(n, spec)?
        .into_iter()
        .filter(MultiIndex::is_canonical)
        .collect())
}

/// Amplitude comparison guaranteed by componentwise domination of `|k|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmplitudeOrder {
    /// `|α_k(a)| > |α_l(a)|` whenever `0 < |a_i| <= 1`.
    Greater,
    Lesser,
    /// `|k_i| = |l_i|` for all `i`, so `|α_k(a)| = |α_l(a)|` for every `a`.
    Equal,
    Incomparable,
}

pub fn amplitude_order(k: &MultiIndex, l: &MultiIndex) -> Result<AmplitudeOrder> {
    check_len("index l", k.len(), l.len())?;
    let pairs = || {
        k.0.iter()
            .zip(&l.0)
            .map(|(a, b)| (a.unsigned_abs(), b.unsigned_abs()))
    };
    let k_below = pairs().all(|(a, b)| a <= b);
    let l_below = pairs().all(|(a, b)| b <= a);
    Ok(match (k_below, l_below) {
        (true, true) => AmplitudeOrder::Equal,
        (true, false) => AmplitudeOrder::Greater,
        (false, true) => AmplitudeOrder::Lesser,
        (false, false) => AmplitudeOrder::Incomparable,
    })
}

/// Weights for which [`amplitude_order`] is a proven guarantee: `0 < |a_i| <= 1`.
pub fn ordering_guaranteed<T: Scalar>(a: &[T]) -> bool {
    a.iter().all(|&x| x != T::zero() && x.abs() <= T::one())
}

/// Wider, numerically observed range `0 < |a_i| < 1.4347…` (the `J_0 = J_1` crossing).
/// Advisory only.
pub fn ordering_advisory<T: Scalar>(a: &[T]) -> bool {
    let limit = T::of(crate::special_functions::J0_J1_CROSSING);
    a.iter().all(|&x| x != T::zero() && x.abs() < limit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(b: u32) -> TruncationSpec<f64> {
        TruncationSpec::new(b)
    }

    #[test]
    fn counts_match_formula() {
        let idx = enumerate_indices(2, &spec(2)).unwrap();
        assert_eq!(idx.len(), 25);
        let classes = canonical_classes(2, &spec(2)).unwrap();
        assert_eq!(classes.len() - 1, 12);
        assert_eq!(nonzero_class_count(2, 2), Some(12));

        assert_eq!(
            enumerate_indices(3, &spec(0)).unwrap(),
            vec![MultiIndex::zero(3)]
        );

        assert_eq!(enumerate_indices(1, &spec(3)).unwrap().len(), 7);
        assert_eq!(canonical_classes(1, &spec(3)).unwrap().len() - 1, 3);
    }

    #[test]
    fn order_is_l1_then_lexicographic() {
        let idx = enumerate_indices(2, &spec(1)).unwrap();
        let as_vec: Vec<Vec<i32>> = idx.iter().map(|k| k.entries().to_vec()).collect();
        assert_eq!(
            as_vec,
            vec![
                vec![0, 0],
                vec![-1, 0],
                vec![0, -1],
                vec![0, 1],
                vec![1, 0],
                vec![-1, -1],
                vec![-1, 1],
                vec![1, -1],
                vec![1, 1],
            ]
        );
        let classes = canonical_classes(2, &spec(1)).unwrap();
        assert_eq!(classes[0], MultiIndex::zero(2));
        assert!(classes.iter().all(MultiIndex::is_canonical));
        assert_eq!(classes[1], MultiIndex::new(vec![0, 1]));
    }

    #[test]
    fn cap_is_enforced() {
        match enumerate_indices_with_cap(8, 10, DEFAULT_ENUMERATION_CAP) {
            Err(Error::Resource(msg)) => assert!(msg.contains("lower the box bound")),
            other => panic!("expected resource error, got {other:?}"),
        }
        assert!(enumerate_indices_with_cap(200, 10, u64::MAX).is_err());
        assert!(enumerate_indices_with_cap(2, 2, 24).is_err());
        assert!(enumerate_indices_with_cap(2, 2, 25).is_ok());
    }

    #[test]
    fn ordering_predicate() {
        let k = |v: &[i32]| MultiIndex::new(v.to_vec());
        assert_eq!(
            amplitude_order(&k(&[1, 0]), &k(&[2, 0])).unwrap(),
            AmplitudeOrder::Greater
        );
        assert_eq!(
            amplitude_order(&k(&[0, 0]), &k(&[1, 0])).unwrap(),
            AmplitudeOrder::Greater
        );
        assert_eq!(
            amplitude_order(&k(&[2, 0]), &k(&[0, 2])).unwrap(),
            AmplitudeOrder::Incomparable
        );
        assert_eq!(
            amplitude_order(&k(&[3, -1]), &k(&[1, 1])).unwrap(),
            AmplitudeOrder::Lesser
        );
        assert_eq!(
            amplitude_order(&k(&[1, -2]), &k(&[-1, 2])).unwrap(),
            AmplitudeOrder::Equal
        );
        assert!(amplitude_order(&k(&[1]), &k(&[1, 0])).is_err());
    }

    #[test]
    fn ordering_ranges() {
        assert!(ordering_guaranteed(&[0.5, -1.0]));
        assert!(!ordering_guaranteed(&[0.0, 0.5]));
        assert!(!ordering_guaranteed(&[1.2]));
        assert!(ordering_advisory(&[1.2, -1.4]));
        assert!(!ordering_advisory(&[1.45]));
    }

    #[test]
    fn display_and_parse() {
        let k = MultiIndex::new(vec![3, -1, 0]);
        assert_eq!(k.to_string(), "3,-1,0");
        assert_eq!("3,-1,0".parse::<MultiIndex>().unwrap(), k);
        assert!("3,x".parse::<MultiIndex>().is_err());
        assert_eq!(k.canonical(), k);
        assert_eq!(k.negated().canonical(), k);
    }
}
