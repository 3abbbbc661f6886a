//! Dense least squares by Householder QR with column pivoting.
//!
//! Rank is read off the pivoted diagonal with threshold `max(m, n) · ε · |R_00|`.
//! Rank-deficient systems are completed to a minimum-norm solution by an LQ
//! factorization of the leading `r` rows of `R`.

use serde::Serialize;

use crate::error::{check_len, Error, Result};
use crate::expansion::{canonical_classes, MultiIndex, TruncationSpec};
use crate::initialization::TargetSpectrum;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolveStatus {
    FullRank,
    /// Minimum-norm solution among all minimizers.
    RankDeficient {
        rank: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquaresSolution<T> {
    pub solution: Vec<T>,
    /// `‖A x − b‖₂`
    pub residual_norm: T,
    pub rank: usize,
    pub status: SolveStatus,
}

/// Householder reflector `I − 2 v vᵀ / (vᵀv)` mapping `x` onto `alpha · e_0`.
struct Reflector<T> {
    v: Vec<T>,
    scale: T,
    alpha: T,
}

impl<T: Scalar> Reflector<T> {
    fn new(x: &[T]) -> Option<Self> {
        let norm = x.iter().fold(T::zero(), |acc, &v| acc.hypot(v));
        if norm == T::zero() {
            return None;
        }
        let alpha = if x[0] > T::zero() { -norm } else { norm };
        let mut v = x.to_vec();
        v[0] -= alpha;
        let vv: T = v.iter().map(|&e| e * e).sum();
        Some(Self {
            v,
            scale: T::of(2.0) / vv,
            alpha,
        })
    }

    /// Applies the reflector to `y` (same length as `v`) in place.
    fn apply(&self, y: &mut [T]) {
        let dot: T = self.v.iter().zip(y.iter()).map(|(&a, &b)| a * b).sum();
        let f = dot * self.scale;
        for (yi, &vi) in y.iter_mut().zip(&self.v) {
            *yi -= f * vi;
        }
    }
}

/// Minimizes `‖A x − b‖₂` for a dense `m × n` matrix given by rows.
pub fn solve_least_squares<T: Scalar>(
    rows: &[Vec<T>],
    rhs: &[T],
) -> Result<LeastSquaresSolution<T>> {
    let m = rows.len();
    check_len("right-hand side", m, rhs.len())?;
    if m == 0 {
        return Err(Error::EmptyData);
    }
    let n = rows[0].len();
    if n == 0 {
        return Err(Error::Validation(
            "least-squares system has no unknowns".into(),
        ));
    }
    for row in rows {
        check_len("matrix row", n, row.len())?;
    }
    if !rows.iter().flatten().chain(rhs).all(|v| v.is_finite()) {
        return Err(Error::Validation(
            "least-squares input must be finite".into(),
        ));
    }

    // column-major working copy
    let mut cols: Vec<Vec<T>> = (0..n)
        .map(|j| rows.iter().map(|r| r[j]).collect())
        .collect();
    let mut c = rhs.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let steps = m.min(n);
    let mut diag = Vec::with_capacity(steps);

    for k in 0..steps {
        let tail_norm = |col: &Vec<T>| col[k..].iter().map(|&v| v * v).sum::<T>();
        let pivot = (k..n)
            .max_by(|&i, &j| {
                tail_norm(&cols[i])
                    .partial_cmp(&tail_norm(&cols[j]))
                    .expect("finite entries")
                    .then(j.cmp(&i))
            })
            .expect("nonempty range");
        cols.swap(k, pivot);
        perm.swap(k, pivot);
        let Some(h) = Reflector::new(&cols[k][k..]) else {
            diag.push(T::zero());
            continue;
        };
        for col in cols.iter_mut().skip(k + 1) {
            h.apply(&mut col[k..]);
        }
        h.apply(&mut c[k..]);
        cols[k][k] = h.alpha;
        for v in &mut cols[k][k + 1..] {
            *v = T::zero();
        }
        diag.push(h.alpha);
    }

    let lead = diag.first().map_or(T::zero(), |d| d.abs());
    let threshold = T::of_usize(m.max(n)) * T::epsilon() * lead;
    let rank = diag.iter().take_while(|d| d.abs() > threshold).count();

    let mut y = vec![T::zero(); n];
    if rank == n {
        for i in (0..n).rev() {
            let s = ((i + 1)..n).fold(c[i], |acc, j| acc - cols[j][i] * y[j]);
            y[i] = s / cols[i][i];
        }
    } else if rank > 0 {
        // leading rows R_top (rank × n); factor R_topᵀ = Z [L; 0]
        let mut t: Vec<Vec<T>> = (0..rank)
            .map(|i| (0..n).map(|j| cols[j][i]).collect())
            .collect();
        let mut reflectors = Vec::with_capacity(rank);
        for k in 0..rank {
            let h = Reflector::new(&t[k][k..]);
            if let Some(h) = &h {
                for row in t.iter_mut().skip(k + 1) {
                    h.apply(&mut row[k..]);
                }
                t[k][k] = h.alpha;
                for v in &mut t[k][k + 1..] {
                    *v = T::zero();
                }
            }
            reflectors.push(h);
        }
        // R_top = L Zᵀ with L lower triangular (L[i][j] = t[i][j]); solve L z = c_top
        for i in 0..rank {
            let s = (0..i).fold(c[i], |acc, j| acc - t[i][j] * y[j]);
            y[i] = s / t[i][i];
        }
        for (k, h) in reflectors.iter().enumerate().rev() {
            if let Some(h) = h {
                h.apply(&mut y[k..]);
            }
        }
    }

    let mut solution = vec![T::zero(); n];
    for (j, &p) in perm.iter().enumerate() {
        solution[p] = y[j];
    }
    let residual_norm = rows.iter().zip(rhs).fold(T::zero(), |acc, (row, &b)| {
        let ax: T = row.iter().zip(&solution).map(|(&a, &x)| a * x).sum();
        acc.hypot(ax - b)
    });
    let status = if rank == n {
        SolveStatus::FullRank
    } else {
        SolveStatus::RankDeficient { rank }
    };
    Ok(LeastSquaresSolution {
        solution,
        residual_norm,
        rank,
        status,
    })
}

/// Least-squares first layer (and phases, when the target has them).
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyFit<T> {
    pub rows: Vec<MultiIndex>,
    pub omega: Vec<T>,
    pub residual_norm: T,
    pub status: SolveStatus,
    /// `(φ, residual)` from the same rows against the target phases; `b` is excluded.
    pub phases: Option<(Vec<T>, T)>,
}

/// Solves `min_ω Σ_i (τ_i − ⟨k^i, ω⟩)²` for explicitly given integer rows.
pub fn fit_frequencies_to_rows<T: Scalar>(
    rows: &[MultiIndex],
    frequencies: &[T],
    phases: Option<&[T]>,
) -> Result<FrequencyFit<T>> {
    let matrix: Vec<Vec<T>> = rows
        .iter()
        .map(|k| {
            k.entries()
                .iter()
                .map(|&e| T::of_int(i64::from(e)))
                .collect()
        })
        .collect();
    let fit = solve_least_squares(&matrix, frequencies)?;
    let phases = match phases {
        Some(p) => {
            let phase_fit = solve_least_squares(&matrix, p)?;
            Some((phase_fit.solution, phase_fit.residual_norm))
        }
        None => None,
    };
    Ok(FrequencyFit {
        rows: rows.to_vec(),
        omega: fit.solution,
        residual_norm: fit.residual_norm,
        status: fit.status,
        phases,
    })
}

/// Pairs the `i`-th most important nonzero index class (enumeration order) with the
/// `i`-th largest target amplitude and fits `ω`.
pub fn least_squares_frequencies<T: Scalar>(
    target: &TargetSpectrum<T>,
    n: usize,
    box_bound: u32,
) -> Result<FrequencyFit<T>> {
    let k = target.len();
    if k < n {
        return Err(Error::Validation(format!(
            "{k} target frequencies cannot determine width {n}; need at least as many as the width"
        )));
    }
    let classes: Vec<MultiIndex> = canonical_classes(n, &TruncationSpec::<T>::new(box_bound))?
        .into_iter()
        .filter(|c| !c.is_zero())
        .collect();
    if classes.len() < k {
        return Err(Error::Validation(format!(
            "width {n} with box bound {box_bound} offers {} frequency classes, fewer than the {k} targets",
            classes.len()
        )));
    }
    fit_frequencies_to_rows(&classes[..k], target.frequencies(), target.phases())
}
