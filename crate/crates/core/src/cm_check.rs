//! Empirical complete-monotonicity checks for weight sequences.
//!
//! A sequence is completely monotone when every alternating difference
//! `(I − S)^k w_j = Σ_{n=0}^{k} (−1)^n C(k,n) w_{n+j}` is nonnegative, `S`
//! being the shift `S w_j = w_{j+1}`. `Index_k` is the minimum of the k-th
//! difference over the available range of `j`.

use rayon::prelude::*;

use crate::compensated::CompensatedSum;
use crate::cq_weights::{CqWeights, Scheme};
use crate::error::{Error, Result};

/// Absolute tolerance below which a negative index is treated as roundoff.
pub const DEFAULT_NEG_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SumMode {
    #[default]
    Plain,
    Compensated,
}

fn binomial_row(k: usize) -> Vec<f64> {
    let mut row = vec![1.0; k + 1];
    for n in 1..k {
        row[n] = row[n - 1] * (k - n + 1) as f64 / n as f64;
    }
    row
}

/// `(I − S)^k w_j`.
pub fn alternating_diff(w: &[f64], k: usize, j: usize, mode: SumMode) -> Result<f64> {
    if j + k >= w.len() {
        return Err(Error::OutOfRange(format!(
            "difference of order {k} at j = {j} needs {} weights, have {}",
            j + k + 1,
            w.len()
        )));
    }
    Ok(diff_unchecked(w, &binomial_row(k), j, mode))
}

fn diff_unchecked(w: &[f64], binom: &[f64], j: usize, mode: SumMode) -> f64 {
    let terms = binom.iter().enumerate().map(|(n, c)| {
        let t = c * w[n + j];
        if n % 2 == 0 {
            t
        } else {
            -t
        }
    });
    match mode {
        SumMode::Plain => terms.sum(),
        SumMode::Compensated => {
            let mut acc = CompensatedSum::new();
            acc.extend(terms);
            acc.value()
        }
    }
}

/// `min_{0 ≤ j ≤ J−k} (I − S)^k w_j` and the minimising `j`.
///
/// The upper end is clipped to `J − k` so every difference stays inside
/// `w_0 … w_J`.
pub fn index_k_with_argmin(w: &[f64], k: usize, j_max: usize, mode: SumMode) -> Result<(f64, usize)> {
    if j_max >= w.len() {
        return Err(Error::OutOfRange(format!("J = {j_max} needs at least {} weights, have {}", j_max + 1, w.len())));
    }
    if k > j_max {
        return Err(Error::OutOfRange(format!("order {k} exceeds J = {j_max}")));
    }
    let binom = binomial_row(k);
    let (mut best, mut arg) = (f64::INFINITY, 0);
    for j in 0..=(j_max - k) {
        let d = diff_unchecked(w, &binom, j, mode);
        if d < best {
            best = d;
            arg = j;
        }
    }
    Ok((best, arg))
}

pub fn index_k(w: &[f64], k: usize, j_max: usize) -> Result<f64> {
    index_k_with_argmin(w, k, j_max, SumMode::Plain).map(|(v, _)| v)
}

/// Heaviside indicator: 1 for `x ≥ 0`, 0 otherwise.
pub fn indicator_rho(x: f64) -> u8 {
    u8::from(x >= 0.0)
}

/// `Index_0 … Index_{k_max}` of one sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexReport {
    pub k_max: usize,
    pub j_max: usize,
    pub indices: Vec<f64>,
    pub argmin: Vec<usize>,
}

impl IndexReport {
    pub fn compute(w: &[f64], k_max: usize, j_max: usize, mode: SumMode) -> Result<Self> {
        let (indices, argmin) = (0..=k_max)
            .map(|k| index_k_with_argmin(w, k, j_max, mode))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .unzip();
        Ok(Self { k_max, j_max, indices, argmin })
    }

    /// True when every index is at least `-tol`.
    pub fn passes(&self, tol: f64) -> bool {
        self.indices.iter().all(|&v| v >= -tol)
    }
}

/// One `(α, β)` cell of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCell {
    pub alpha: f64,
    pub beta: f64,
    pub report: IndexReport,
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub scheme: Scheme,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub tau: f64,
    pub j_max: usize,
    pub k_max: usize,
    pub mode: SumMode,
}

/// `step, 2·step, …` strictly inside `(0, 1)`.
pub fn default_grid(step: f64) -> Vec<f64> {
    assert!(step > 0.0 && step < 1.0, "grid step must lie in (0, 1)");
    let n = (1.0 / step - 1e-9).floor() as usize;
    (1..=n).map(|i| i as f64 * step).filter(|&x| x < 1.0 - 1e-12).collect()
}

/// Index reports for every `(α, β)` pair, row-major with α outermost.
/// Cells are computed in parallel; output order is deterministic.
pub fn sweep_grid(spec: &SweepSpec) -> Result<Vec<GridCell>> {
    if spec.alphas.is_empty() || spec.betas.is_empty() {
        return Err(Error::Config { field: "grid".into(), reason: "alpha and beta grids must be nonempty".into() });
    }
    let cells: Vec<(f64, f64)> = spec
        .alphas
        .iter()
        .flat_map(|&a| spec.betas.iter().map(move |&b| (a, b)))
        .collect();
    cells
        .into_par_iter()
        .map(|(alpha, beta)| {
            let w = CqWeights::generate(spec.scheme, alpha, beta, spec.tau, spec.j_max)?;
            let report = IndexReport::compute(&w.weights, spec.k_max, spec.j_max, spec.mode)?;
            Ok(GridCell { alpha, beta, report })
        })
        .collect()
}

/// Long-format CSV: `alpha,beta,k,index,rho_index`, where `rho_index` is
/// `ρ(index + tol)`.
pub fn sweep_csv(cells: &[GridCell], tol: f64) -> String {
    let mut out = String::from("alpha,beta,k,index,rho_index\n");
    for cell in cells {
        for (k, v) in cell.report.indices.iter().enumerate() {
            out.push_str(&format!(
                "{:.4},{:.4},{k},{v:.17e},{}\n",
                cell.alpha,
                cell.beta,
                indicator_rho(v + tol)
            ));
        }
    }
    out
}

/// Number of cells whose `Index_k` falls below `threshold`, per `k`.
pub fn failing_counts(cells: &[GridCell], threshold: f64) -> Vec<usize> {
    let k_max = cells.first().map_or(0, |c| c.report.k_max);
    (0..=k_max)
        .map(|k| cells.iter().filter(|c| c.report.indices[k] < threshold).count())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cq_weights::cm2_weights;

    #[test]
    fn low_order_differences() {
        let w = [3.0, 2.0, 1.0];
        assert_eq!(alternating_diff(&w, 0, 1, SumMode::Plain).unwrap(), 2.0);
        assert_eq!(alternating_diff(&w, 1, 0, SumMode::Plain).unwrap(), 1.0);
        assert_eq!(alternating_diff(&w, 2, 0, SumMode::Compensated).unwrap(), 0.0);
        assert!(alternating_diff(&w, 2, 1, SumMode::Plain).is_err());
    }

    #[test]
    fn third_difference_of_cm2_weights() {
        let w = cm2_weights(0.5, 0.5, 0.01, 10).unwrap().weights;
        // four-term sum at 50 digits
        let expect = 0.127_994_375_142_175_735_8;
        for mode in [SumMode::Plain, SumMode::Compensated] {
            let d = alternating_diff(&w, 3, 0, mode).unwrap();
            assert!(d >= 0.0);
            assert!((d - expect).abs() < 1e-14, "{d}");
        }
    }

    #[test]
    fn index_of_constant_sequence() {
        let w = vec![1.0; 20];
        assert_eq!(index_k(&w, 0, 19).unwrap(), 1.0);
        assert_eq!(index_k(&w, 1, 19).unwrap(), 0.0);
        assert!(index_k(&w, 1, 20).is_err());
        assert!(index_k(&w, 5, 4).is_err());
    }

    #[test]
    fn index_finds_minimum() {
        let w = [1.0, 0.5, 0.6, 0.1];
        let (v, j) = index_k_with_argmin(&w, 1, 3, SumMode::Plain).unwrap();
        assert!((v + 0.1).abs() < 1e-15);
        assert_eq!(j, 1);
    }

    #[test]
    fn rho_threshold() {
        assert_eq!(indicator_rho(1.0), 1);
        assert_eq!(indicator_rho(0.0), 1);
        assert_eq!(indicator_rho(-1e-300), 0);
    }

    #[test]
    fn recursive_consistency() {
        let w = cm2_weights(0.3, 0.7, 0.05, 60).unwrap().weights;
        let dw: Vec<f64> = w.windows(2).map(|p| p[0] - p[1]).collect();
        for k in 1..5 {
            for j in 0..40 {
                let a = alternating_diff(&w, k, j, SumMode::Compensated).unwrap();
                let b = alternating_diff(&dw, k - 1, j, SumMode::Compensated).unwrap();
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn grid_defaults() {
        let g = default_grid(0.05);
        assert_eq!(g.len(), 19);
        assert!((g[0] - 0.05).abs() < 1e-15 && (g[18] - 0.95).abs() < 1e-12);
        assert_eq!(default_grid(0.1).len(), 9);
    }

    #[test]
    fn single_cell_sweep_matches_direct_index() {
        let spec = SweepSpec {
            scheme: Scheme::Cm2,
            alphas: vec![0.5],
            betas: vec![0.5],
            tau: 0.01,
            j_max: 200,
            k_max: 3,
            mode: SumMode::Plain,
        };
        let cells = sweep_grid(&spec).unwrap();
        assert_eq!(cells.len(), 1);
        let w = cm2_weights(0.5, 0.5, 0.01, 200).unwrap().weights;
        for k in 0..=3 {
            assert_eq!(cells[0].report.indices[k], index_k(&w, k, 200).unwrap());
        }
        let csv = sweep_csv(&cells, DEFAULT_NEG_TOL);
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.lines().skip(1).all(|l| l.ends_with(",1")));
    }

    #[test]
    fn empty_grid_rejected() {
        let spec = SweepSpec {
            scheme: Scheme::Cm2,
            alphas: vec![],
            betas: vec![0.5],
            tau: 0.01,
            j_max: 10,
            k_max: 3,
            mode: SumMode::Plain,
        };
        assert!(sweep_grid(&spec).is_err());
    }
}
