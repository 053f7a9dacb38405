use crate::{Error, Result};

/// Partial correlations are clamped to `±(1 - RHO_CLAMP_EPS)` before the
/// Fisher transform so the statistic stays finite.
pub const RHO_CLAMP_EPS: f64 = 1e-12;

/// Fisher-z statistic `sqrt(n - |S| - 3) * (1/2) * ln((1 + ρ) / (1 - ρ))`.
///
/// With `half_factor = false` the `1/2` is dropped, doubling the statistic.
/// Fewer than one residual degree of freedom yields
/// [`Error::InsufficientDf`], which callers treat as "cannot test".
pub fn fisher_z(rho: f64, n: usize, cond_size: usize, half_factor: bool) -> Result<f64> {
    if n < cond_size + 4 {
        return Err(Error::InsufficientDf { n, cond_size });
    }
    if !(rho.abs() < 1.0) {
        return Err(Error::Precondition(format!("|rho| = {} is not below 1", rho.abs())));
    }
    let df = (n - cond_size - 3) as f64;
    // odd by construction, so Z(-r) == -Z(r) exactly
    let z = (df.sqrt() * rho.abs().atanh()).copysign(rho);
    Ok(if half_factor { z } else { 2.0 * z })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_correlation_gives_zero() {
        for n in [4, 10, 1000] {
            assert_eq!(fisher_z(0.0, n, 0, true).unwrap(), 0.0);
        }
    }

    #[test]
    fn worked_value() {
        // sqrt(100) * 0.5 * ln(3)
        let z = fisher_z(0.5, 103, 0, true).unwrap();
        assert!((z - 5.493061443340549).abs() < 1e-12);
        let lit = fisher_z(0.5, 103, 0, false).unwrap();
        assert!((lit - 2.0 * z).abs() < 1e-12);
    }

    #[test]
    fn antisymmetric() {
        for r in [0.01, 0.3, 0.9, 0.999999] {
            assert_eq!(fisher_z(-r, 50, 2, true).unwrap(), -fisher_z(r, 50, 2, true).unwrap());
        }
    }

    #[test]
    fn too_few_degrees_of_freedom() {
        assert_eq!(
            fisher_z(0.2, 5, 2, true),
            Err(Error::InsufficientDf { n: 5, cond_size: 2 })
        );
        assert!(fisher_z(0.2, 6, 2, true).is_ok());
        assert!(fisher_z(1.0, 60, 2, true).is_err());
    }
}
