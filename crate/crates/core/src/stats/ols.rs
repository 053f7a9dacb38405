use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::DataMatrix;
use crate::{Error, NodeSet, Result};

/// Exposure coefficient from a regression of the outcome on the exposure and
/// an adjustment set, with its conventional standard error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectEstimate {
    pub beta: f64,
    pub se: f64,
    pub adjust_set: NodeSet,
}

/// OLS of `outcome` on intercept, `exposure` and `adjust` via Householder QR.
///
/// Columns are rejected as rank deficient when a diagonal entry of R falls
/// below `1e-10` times the largest column norm.
pub fn ols_effect(
    x: &DataMatrix,
    exposure: usize,
    outcome: usize,
    adjust: NodeSet,
) -> Result<EffectEstimate> {
    let d = x.n_vars();
    for v in [exposure, outcome].into_iter().chain(adjust.iter()) {
        if v >= d {
            return Err(Error::NodeOutOfRange { index: v, d });
        }
    }
    if exposure == outcome || adjust.contains(exposure) || adjust.contains(outcome) {
        return Err(Error::Precondition(
            "exposure and outcome must differ and lie outside the adjustment set".into(),
        ));
    }
    let n = x.n_samples();
    let p = 2 + adjust.len();
    if n <= p {
        return Err(Error::InsufficientDf {
            n,
            cond_size: adjust.len(),
        });
    }
    let cols: Vec<&[f64]> = [exposure]
        .into_iter()
        .chain(adjust.iter())
        .map(|v| x.column(v))
        .collect();
    let design = DMatrix::from_fn(n, p, |r, c| if c == 0 { 1.0 } else { cols[c - 1][r] });
    let y = DVector::from_column_slice(x.column(outcome));

    let max_norm = (0..p).map(|c| design.column(c).norm()).fold(0.0, f64::max);
    let qr = design.clone().qr();
    let r = qr.r();
    let diag: Vec<f64> = (0..p).map(|k| r[(k, k)].abs()).collect();
    let min_diag = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_diag < 1e-10 * max_norm {
        let max_diag = diag.iter().cloned().fold(0.0, f64::max);
        return Err(Error::Singular {
            condition: max_diag / min_diag.max(f64::MIN_POSITIVE),
        });
    }
    let qty = qr.q().transpose() * &y;
    let coef = r
        .solve_upper_triangular(&qty)
        .ok_or(Error::Singular { condition: f64::INFINITY })?;
    let resid = &y - &design * &coef;
    let sigma2 = resid.norm_squared() / (n - p) as f64;
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(p, p))
        .ok_or(Error::Singular { condition: f64::INFINITY })?;
    // (X'X)^{-1} = R^{-1} R^{-T}; the exposure sits in column 1
    let v11: f64 = r_inv.row(1).iter().map(|v| v * v).sum();
    Ok(EffectEstimate {
        beta: coef[1],
        se: (sigma2 * v11).sqrt(),
        adjust_set: adjust,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_outcome() {
        let e: Vec<f64> = (0..20).map(|k| (k as f64 * 0.37).sin()).collect();
        let y: Vec<f64> = e.iter().map(|v| 2.0 * v).collect();
        let x = DataMatrix::from_columns(vec![e, y]).unwrap();
        let est = ols_effect(&x, 0, 1, NodeSet::EMPTY).unwrap();
        assert!((est.beta - 2.0).abs() < 1e-12);
        assert!(est.se < 1e-12);
    }

    #[test]
    fn collinear_adjustment_is_singular() {
        let e: Vec<f64> = (0..20).map(|k| (k as f64 * 0.37).sin()).collect();
        let y: Vec<f64> = (0..20).map(|k| (k as f64 * 1.1).cos()).collect();
        let x = DataMatrix::from_columns(vec![e.clone(), y, e]).unwrap();
        assert!(matches!(
            ols_effect(&x, 0, 1, NodeSet::singleton(2)),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn exposure_in_adjustment_set_is_rejected() {
        let a: Vec<f64> = (0..10).map(|k| k as f64).collect();
        let b: Vec<f64> = (0..10).map(|k| (k * k) as f64).collect();
        let x = DataMatrix::from_columns(vec![a, b]).unwrap();
        assert!(matches!(
            ols_effect(&x, 0, 1, NodeSet::singleton(0)),
            Err(Error::Precondition(_))
        ));
    }
}
