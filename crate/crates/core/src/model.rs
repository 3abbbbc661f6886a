//! Single-hidden-layer sinusoidal network `f(x) = Σ_i c_i sin(Σ_j a_ij sin(ω_j x + φ_j) + b_i) + d`.
//!
//! Row `i` of the hidden matrix feeds hidden neuron `i`. Parameters are also
//! addressable as one flat vector (see [`ParameterLayout`]) which is what the
//! optimiser works on.

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::scalar::Scalar;

/// Parameter groups of a network, in flat-vector order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParameterGroup {
    Omega,
    Phi,
    HiddenMatrix,
    HiddenBias,
    LinearWeights,
    LinearBias,
}

impl ParameterGroup {
    pub const ALL: [ParameterGroup; 6] = [
        ParameterGroup::Omega,
        ParameterGroup::Phi,
        ParameterGroup::HiddenMatrix,
        ParameterGroup::HiddenBias,
        ParameterGroup::LinearWeights,
        ParameterGroup::LinearBias,
    ];
}

/// Offsets of each parameter group inside the flat parameter vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParameterLayout {
    width: usize,
}

impl ParameterLayout {
    pub fn new(width: usize) -> Self {
        Self { width }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// `n² + 4n + 1`.
    pub fn len(&self) -> usize {
        let n = self.width;
        n * n + 4 * n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn range(&self, group: ParameterGroup) -> std::ops::Range<usize> {
        let n = self.width;
        match group {
            ParameterGroup::Omega => 0..n,
            ParameterGroup::Phi => n..2 * n,
            ParameterGroup::HiddenMatrix => 2 * n..2 * n + n * n,
            ParameterGroup::HiddenBias => 2 * n + n * n..3 * n + n * n,
            ParameterGroup::LinearWeights => 3 * n + n * n..4 * n + n * n,
            ParameterGroup::LinearBias => 4 * n + n * n..4 * n + n * n + 1,
        }
    }

    pub fn hidden(&self, row: usize, col: usize) -> usize {
        2 * self.width + row * self.width + col
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SinusoidalNetwork<T> {
    omega: Vec<T>,
    phi: Vec<T>,
    /// row-major `n × n`
    hidden: Vec<T>,
    hidden_bias: Vec<T>,
    linear_weights: Vec<T>,
    linear_bias: T,
}

impl<T: Scalar> SinusoidalNetwork<T> {
    pub fn new(
        omega: Vec<T>,
        phi: Vec<T>,
        hidden_matrix: Vec<Vec<T>>,
        hidden_bias: Vec<T>,
        linear_weights: Vec<T>,
        linear_bias: T,
    ) -> Result<Self> {
        let n = omega.len();
        check_len("hidden_matrix", n, hidden_matrix.len())?;
        for row in &hidden_matrix {
            check_len("hidden_matrix row", n, row.len())?;
        }
        let hidden = hidden_matrix.into_iter().flatten().collect();
        Self::from_parts(omega, phi, hidden, hidden_bias, linear_weights, linear_bias)
    }

    fn from_parts(
        omega: Vec<T>,
        phi: Vec<T>,
        hidden: Vec<T>,
        hidden_bias: Vec<T>,
        linear_weights: Vec<T>,
        linear_bias: T,
    ) -> Result<Self> {
        let n = omega.len();
        if n == 0 {
            return Err(Error::Validation("network width must be positive".into()));
        }
        check_len("phi", n, phi.len())?;
        check_len("hidden_matrix", n * n, hidden.len())?;
        check_len("hidden_bias", n, hidden_bias.len())?;
        check_len("linear_weights", n, linear_weights.len())?;
        let net = Self {
            omega,
            phi,
            hidden,
            hidden_bias,
            linear_weights,
            linear_bias,
        };
        if !net.to_flat().iter().all(|v| v.is_finite()) {
            return Err(Error::Validation(
                "network parameters must be finite".into(),
            ));
        }
        Ok(net)
    }

    /// All-zero network of the given width.
    pub fn zeros(width: usize) -> Result<Self> {
        let z = vec![T::zero(); width];
        Self::from_parts(
            z.clone(),
            z.clone(),
            vec![T::zero(); width * width],
            z.clone(),
            z,
            T::zero(),
        )
    }

    pub fn from_flat(width: usize, params: &[T]) -> Result<Self> {
        let layout = ParameterLayout::new(width);
        check_len("parameter vector", layout.len(), params.len())?;
        let take = |g| params[layout.range(g)].to_vec();
        Self::from_parts(
            take(ParameterGroup::Omega),
            take(ParameterGroup::Phi),
            take(ParameterGroup::HiddenMatrix),
            take(ParameterGroup::HiddenBias),
            take(ParameterGroup::LinearWeights),
            params[layout.range(ParameterGroup::LinearBias).start],
        )
    }

    pub fn to_flat(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.layout().len());
        out.extend_from_slice(&self.omega);
        out.extend_from_slice(&self.phi);
        out.extend_from_slice(&self.hidden);
        out.extend_from_slice(&self.hidden_bias);
        out.extend_from_slice(&self.linear_weights);
        out.push(self.linear_bias);
        out
    }

    pub fn layout(&self) -> ParameterLayout {
        ParameterLayout::new(self.width())
    }

    pub fn width(&self) -> usize {
        self.omega.len()
    }

    pub fn omega(&self) -> &[T] {
        &self.omega
    }

    pub fn phi(&self) -> &[T] {
        &self.phi
    }

    pub fn hidden_row(&self, i: usize) -> &[T] {
        let n = self.width();
        &self.hidden[i * n..(i + 1) * n]
    }

    pub fn hidden_rows(&self) -> impl Iterator<Item = &[T]> {
        self.hidden.chunks(self.width())
    }

    pub fn hidden_bias(&self) -> &[T] {
        &self.hidden_bias
    }

    pub fn linear_weights(&self) -> &[T] {
        &self.linear_weights
    }

    pub fn linear_bias(&self) -> T {
        self.linear_bias
    }

    pub fn with_omega(mut self, omega: Vec<T>) -> Result<Self> {
        check_len("omega", self.width(), omega.len())?;
        self.omega = omega;
        self.revalidate()
    }

    pub fn with_phi(mut self, phi: Vec<T>) -> Result<Self> {
        check_len("phi", self.width(), phi.len())?;
        self.phi = phi;
        self.revalidate()
    }

    pub fn with_hidden_bias(mut self, bias: Vec<T>) -> Result<Self> {
        check_len("hidden_bias", self.width(), bias.len())?;
        self.hidden_bias = bias;
        self.revalidate()
    }

    pub fn with_linear_weights(mut self, weights: Vec<T>) -> Result<Self> {
        check_len("linear_weights", self.width(), weights.len())?;
        self.linear_weights = weights;
        self.revalidate()
    }

    pub fn with_linear_bias(mut self, bias: T) -> Result<Self> {
        self.linear_bias = bias;
        self.revalidate()
    }

    fn revalidate(self) -> Result<Self> {
        Self::from_parts(
            self.omega,
            self.phi,
            self.hidden,
            self.hidden_bias,
            self.linear_weights,
            self.linear_bias,
        )
    }

    /// Input neurons `s_j(x) = sin(ω_j x + φ_j)`.
    pub fn input_neurons(&self, x: T) -> Vec<T> {
        self.omega
            .iter()
            .zip(&self.phi)
            .map(|(&w, &p)| (w * x + p).sin())
            .collect()
    }

    fn pre_activation(&self, i: usize, inputs: &[T]) -> T {
        self.hidden_row(i)
            .iter()
            .zip(inputs)
            .fold(self.hidden_bias[i], |acc, (&a, &s)| acc + a * s)
    }

    /// Hidden neuron `h_i(x)`.
    pub fn hidden_neuron(&self, i: usize, x: T) -> T {
        self.pre_activation(i, &self.input_neurons(x)).sin()
    }

    pub fn evaluate(&self, x: T) -> T {
        let inputs = self.input_neurons(x);
        (0..self.width()).fold(self.linear_bias, |acc, i| {
            acc + self.linear_weights[i] * self.pre_activation(i, &inputs).sin()
        })
    }

    /// `df/dx`.
    pub fn derivative(&self, x: T) -> T {
        let n = self.width();
        let inputs = self.input_neurons(x);
        let slopes: Vec<T> = (0..n)
            .map(|j| self.omega[j] * (self.omega[j] * x + self.phi[j]).cos())
            .collect();
        (0..n).fold(T::zero(), |acc, i| {
            let inner = self
                .hidden_row(i)
                .iter()
                .zip(&slopes)
                .fold(T::zero(), |s, (&a, &d)| s + a * d);
            acc + self.linear_weights[i] * self.pre_activation(i, &inputs).cos() * inner
        })
    }

    /// Gradient of `f(x)` with respect to every parameter.
    pub fn gradient(&self, x: T) -> ParameterGradient<T> {
        let mut flat = vec![T::zero(); self.layout().len()];
        self.accumulate_gradient(x, T::one(), &mut flat);
        ParameterGradient {
            layout: self.layout(),
            values: flat,
        }
    }

    /// Adds `scale · ∂f(x)/∂θ` into `out` (flat layout) and returns `f(x)`.
    pub(crate) fn accumulate_gradient(&self, x: T, scale: T, out: &mut [T]) -> T {
        let n = self.width();
        let layout = self.layout();
        let mut sines = Vec::with_capacity(n);
        let mut cosines = Vec::with_capacity(n);
        for j in 0..n {
            let (s, c) = (self.omega[j] * x + self.phi[j]).sin_cos();
            sines.push(s);
            cosines.push(c);
        }
        let mut value = self.linear_bias;
        let mut phase_grad = vec![T::zero(); n];
        let hidden_base = layout.range(ParameterGroup::HiddenMatrix).start;
        let bias_base = layout.range(ParameterGroup::HiddenBias).start;
        let weight_base = layout.range(ParameterGroup::LinearWeights).start;
        for i in 0..n {
            let (sz, cz) = self.pre_activation(i, &sines).sin_cos();
            let c_i = self.linear_weights[i];
            value += c_i * sz;
            out[weight_base + i] += scale * sz;
            let upstream = c_i * cz;
            out[bias_base + i] += scale * upstream;
            let row = self.hidden_row(i);
            for j in 0..n {
                out[hidden_base + i * n + j] += scale * upstream * sines[j];
                phase_grad[j] += upstream * row[j] * cosines[j];
            }
        }
        for j in 0..n {
            out[j] += scale * x * phase_grad[j];
            out[n + j] += scale * phase_grad[j];
        }
        out[layout.len() - 1] += scale;
        value
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(&NetworkFile::from(self)).map_err(Error::from_json)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: NetworkFile<T> = serde_json::from_str(text).map_err(Error::from_json)?;
        file.try_into()
    }
}

/// `∂f(x)/∂θ` for every parameter, shape-congruent with the network.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterGradient<T> {
    layout: ParameterLayout,
    values: Vec<T>,
}

impl<T: Scalar> ParameterGradient<T> {
    pub fn layout(&self) -> ParameterLayout {
        self.layout
    }

    pub fn group(&self, group: ParameterGroup) -> &[T] {
        &self.values[self.layout.range(group)]
    }

    pub fn omega(&self) -> &[T] {
        self.group(ParameterGroup::Omega)
    }

    pub fn phi(&self) -> &[T] {
        self.group(ParameterGroup::Phi)
    }

    pub fn hidden(&self, row: usize, col: usize) -> T {
        self.values[self.layout.hidden(row, col)]
    }

    pub fn hidden_bias(&self) -> &[T] {
        self.group(ParameterGroup::HiddenBias)
    }

    pub fn linear_weights(&self) -> &[T] {
        self.group(ParameterGroup::LinearWeights)
    }

    pub fn linear_bias(&self) -> T {
        self.values[self.layout.len() - 1]
    }

    pub fn as_flat(&self) -> &[T] {
        &self.values
    }
}

/// Which parameters the optimiser must leave untouched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreezeMask {
    layout: ParameterLayout,
    frozen: Vec<bool>,
}

impl FreezeMask {
    pub fn none(width: usize) -> Self {
        let layout = ParameterLayout::new(width);
        Self {
            layout,
            frozen: vec![false; layout.len()],
        }
    }

    pub fn with_group(mut self, group: ParameterGroup) -> Self {
        for i in self.layout.range(group) {
            self.frozen[i] = true;
        }
        self
    }

    pub fn with_entry(mut self, flat_index: usize) -> Self {
        self.frozen[flat_index] = true;
        self
    }

    pub fn width(&self) -> usize {
        self.layout.width()
    }

    pub fn is_frozen(&self, flat_index: usize) -> bool {
        self.frozen[flat_index]
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.frozen
    }
}

/// On-disk JSON representation of a network.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar"))]
pub struct NetworkFile<T> {
    pub width: usize,
    pub omega: Vec<T>,
    pub phi: Vec<T>,
    pub hidden_matrix: Vec<Vec<T>>,
    pub hidden_bias: Vec<T>,
    pub linear_weights: Vec<T>,
    pub linear_bias: T,
}

impl<T: Scalar> From<&SinusoidalNetwork<T>> for NetworkFile<T> {
    fn from(net: &SinusoidalNetwork<T>) -> Self {
        Self {
            width: net.width(),
            omega: net.omega.clone(),
            phi: net.phi.clone(),
            hidden_matrix: net.hidden_rows().map(<[T]>::to_vec).collect(),
            hidden_bias: net.hidden_bias.clone(),
            linear_weights: net.linear_weights.clone(),
            linear_bias: net.linear_bias,
        }
    }
}

impl<T: Scalar> TryFrom<NetworkFile<T>> for SinusoidalNetwork<T> {
    type Error = Error;

    fn try_from(file: NetworkFile<T>) -> Result<Self> {
        let n = file.width;
        let mismatch = |field: &str, found: usize| {
            Error::Validation(format!("width is {n} but `{field}` has {found} entries"))
        };
        for (field, len) in [
            ("omega", file.omega.len()),
            ("phi", file.phi.len()),
            ("hidden_matrix", file.hidden_matrix.len()),
            ("hidden_bias", file.hidden_bias.len()),
            ("linear_weights", file.linear_weights.len()),
        ] {
            if len != n {
                return Err(mismatch(field, len));
            }
        }
        if let Some(row) = file.hidden_matrix.iter().find(|r| r.len() != n) {
            return Err(mismatch("hidden_matrix row", row.len()));
        }
        SinusoidalNetwork::new(
            file.omega,
            file.phi,
            file.hidden_matrix,
            file.hidden_bias,
            file.linear_weights,
            file.linear_bias,
        )
    }
}
