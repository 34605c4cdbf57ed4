use nalgebra::DMatrix;
use serde::Serialize;

use crate::chain::{detailed_balance_residual, Distribution, StochasticMatrix, BALANCE_TOL};
use crate::error::{Error, Result};

/// Eigenvalues of a reversible chain and the derived relaxation time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSummary {
    /// Sorted in decreasing order; the first is the Perron eigenvalue 1.
    pub eigenvalues: Vec<f64>,
    /// Largest modulus among the non-Perron eigenvalues.
    pub lambda_star: f64,
    /// `1 / (1 - lambda_star)`; infinite for periodic chains.
    pub t_rel: f64,
}

/// Spectrum of a chain reversible with respect to `pi`, using the default
/// detailed-balance tolerance.
pub fn spectrum(p: &StochasticMatrix, pi: &Distribution) -> Result<SpectrumSummary> {
    spectrum_with_tol(p, pi, BALANCE_TOL)
}

/// Diagonalizes `S = D^{1/2} P D^{-1/2}`, `D = diag(pi)`, which is symmetric
/// exactly when `P` is reversible and shares its eigenvalues with `P`.
pub fn spectrum_with_tol(
    p: &StochasticMatrix,
    pi: &Distribution,
    tol: f64,
) -> Result<SpectrumSummary> {
    let n = p.n();
    if pi.n() != n {
        return Err(Error::DimensionMismatch {
            left: pi.n(),
            right: n,
        });
    }
    if let Some(state) = pi.probs().iter().position(|&v| !(v > 0.0)) {
        return Err(Error::ZeroStationaryMass { state });
    }
    let residual = detailed_balance_residual(p, pi);
    if residual > tol {
        return Err(Error::NotReversible { residual, tol });
    }
    let root: Vec<f64> = pi.probs().iter().map(|v| v.sqrt()).collect();
    let s = DMatrix::from_fn(n, n, |i, j| {
        let a = root[i] * p.get(i, j) / root[j];
        let b = root[j] * p.get(j, i) / root[i];
        0.5 * (a + b)
    });
    let mut eigenvalues: Vec<f64> = s.symmetric_eigenvalues().iter().copied().collect();
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    let lambda_star = eigenvalues[1..]
        .iter()
        .map(|v| v.abs())
        .fold(0.0, f64::max)
        .min(1.0);
    let t_rel = if lambda_star >= 1.0 - 1e-12 {
        f64::INFINITY
    } else {
        1.0 / (1.0 - lambda_star)
    };
    Ok(SpectrumSummary {
        eigenvalues,
        lambda_star,
        t_rel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::lazify;
    use crate::families::{cgb_stationary, complete_graph_bijection, winning_streak_reversal, wsr_stationary};

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn two_state_spectra() {
        let pi = Distribution::uniform(2).unwrap();
        let p = StochasticMatrix::from_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let s = spectrum(&p, &pi).unwrap();
        assert!(close(&s.eigenvalues, &[1.0, 0.0]));
        assert!((s.t_rel - 1.0).abs() < 1e-12);

        let p = StochasticMatrix::from_rows(&[vec![0.75, 0.25], vec![0.25, 0.75]]).unwrap();
        let s = spectrum(&p, &pi).unwrap();
        assert!(close(&s.eigenvalues, &[1.0, 0.5]));
        assert!((s.t_rel - 2.0).abs() < 1e-12);
    }

    #[test]
    fn lazify_maps_spectrum_affinely() {
        let p = complete_graph_bijection(9).unwrap();
        let pi = cgb_stationary(9).unwrap();
        let base = spectrum(&p, &pi).unwrap();
        let lazy = spectrum(&lazify(&p), &pi).unwrap();
        let mapped: Vec<f64> = base.eigenvalues.iter().map(|v| 0.5 * (1.0 + v)).collect();
        assert!(close(&lazy.eigenvalues, &mapped));
    }

    #[test]
    fn periodic_chain_has_infinite_relaxation() {
        let p = StochasticMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let s = spectrum(&p, &Distribution::uniform(2).unwrap()).unwrap();
        assert!(s.t_rel.is_infinite());
    }

    #[test]
    fn rejects_irreversible_and_zero_mass() {
        let p = winning_streak_reversal(6).unwrap();
        let pi = wsr_stationary(6).unwrap();
        assert!(matches!(spectrum(&p, &pi), Err(Error::NotReversible { .. })));
        let id = StochasticMatrix::identity(2).unwrap();
        let pi = Distribution::from_vec(vec![1.0, 0.0]).unwrap();
        assert!(matches!(
            spectrum(&id, &pi),
            Err(Error::ZeroStationaryMass { state: 1 })
        ));
    }
}
