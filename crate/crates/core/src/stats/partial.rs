use super::{GaussianSuffStats, RHO_CLAMP_EPS};
use crate::{Error, NodeSet, Result};

/// Largest accepted condition-number estimate for the conditioning block.
pub const MAX_CONDITION: f64 = 1e12;

fn check_args(s: &GaussianSuffStats, i: usize, j: usize, cond: NodeSet) -> Result<()> {
    let d = s.n_vars();
    for v in [i, j].into_iter().chain(cond.iter()) {
        if v >= d {
            return Err(Error::NodeOutOfRange { index: v, d });
        }
    }
    if i == j || cond.contains(i) || cond.contains(j) {
        return Err(Error::Precondition(
            "partial correlation needs i != j and both outside S".into(),
        ));
    }
    Ok(())
}

/// `ρ_{ij|S}` without clamping; may be exactly ±1.
///
/// Cholesky-factors the correlation submatrix ordered `(S, i, j)`. The
/// trailing 2x2 block of the factor carries the conditional covariance of
/// `(i, j)` given `S`, which equals `-P_ij / sqrt(P_ii P_jj)` for the inverse
/// `P` of the submatrix. The `(S, i)` block must be well conditioned and `j`
/// must not be a linear function of `S`.
pub fn partial_correlation_unclamped(
    s: &GaussianSuffStats,
    i: usize,
    j: usize,
    cond: NodeSet,
) -> Result<f64> {
    check_args(s, i, j, cond)?;
    let order: Vec<usize> = cond.iter().chain([i, j]).collect();
    let m = order.len();
    let mut l = vec![0.0f64; m * m];
    let mut min_piv = f64::INFINITY;
    let mut max_piv: f64 = 0.0;
    for r in 0..m {
        for c in 0..=r {
            let mut acc = s.corr(order[r], order[c]);
            for k in 0..c {
                acc -= l[r * m + k] * l[c * m + k];
            }
            if r == c {
                if r == m - 1 {
                    // i and j perfectly dependent given S is allowed: rho = ±1
                    l[r * m + r] = acc.max(0.0).sqrt();
                } else {
                    if acc <= 0.0 {
                        return Err(Error::Singular {
                            condition: f64::INFINITY,
                        });
                    }
                    let p = acc.sqrt();
                    min_piv = min_piv.min(p);
                    max_piv = max_piv.max(p);
                    l[r * m + r] = p;
                }
            } else {
                l[r * m + c] = acc / l[c * m + c];
            }
        }
    }
    let condition = (max_piv / min_piv).powi(2);
    if condition > MAX_CONDITION {
        return Err(Error::Singular { condition });
    }
    let b = l[(m - 1) * m + (m - 2)];
    let c = l[(m - 1) * m + (m - 1)];
    let resid = (b * b + c * c).sqrt();
    if resid * resid < 1.0 / MAX_CONDITION {
        return Err(Error::Singular {
            condition: 1.0 / (resid * resid),
        });
    }
    Ok((b / resid).clamp(-1.0, 1.0))
}

/// `ρ_{ij|S}` clamped to `[-1 + ε, 1 - ε]` with `ε = RHO_CLAMP_EPS`.
pub fn partial_correlation(s: &GaussianSuffStats, i: usize, j: usize, cond: NodeSet) -> Result<f64> {
    let r = partial_correlation_unclamped(s, i, j, cond)?;
    Ok(r.clamp(-1.0 + RHO_CLAMP_EPS, 1.0 - RHO_CLAMP_EPS))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stats3(r12: f64, r13: f64, r23: f64) -> GaussianSuffStats {
        GaussianSuffStats::new(
            vec![1.0, r12, r13, r12, 1.0, r23, r13, r23, 1.0],
            3,
            100,
        )
        .unwrap()
    }

    #[test]
    fn identity_gives_zero() {
        let mut id = vec![0.0; 16];
        for k in 0..4 {
            id[k * 4 + k] = 1.0;
        }
        let s = GaussianSuffStats::new(id, 4, 50).unwrap();
        for cond in [NodeSet::EMPTY, NodeSet::singleton(2), [2, 3].into_iter().collect()] {
            assert_eq!(partial_correlation(&s, 0, 1, cond).unwrap(), 0.0);
        }
    }

    #[test]
    fn first_order_worked_example() {
        // (0.5 - 0.36) / (1 - 0.36) = 0.21875
        let s = stats3(0.5, 0.6, 0.6);
        let r = partial_correlation(&s, 0, 1, NodeSet::singleton(2)).unwrap();
        assert!((r - 0.21875).abs() < 1e-14);
        let r = partial_correlation(&s, 1, 0, NodeSet::singleton(2)).unwrap();
        assert!((r - 0.21875).abs() < 1e-14);
    }

    #[test]
    fn perfect_dependence_is_clamped() {
        let s = stats3(1.0, 0.2, 0.2);
        let r = partial_correlation(&s, 0, 1, NodeSet::EMPTY).unwrap();
        assert_eq!(r, 1.0 - RHO_CLAMP_EPS);
    }

    #[test]
    fn collinear_conditioning_set_is_singular() {
        // variable 2 duplicates variable 0
        let s = stats3(0.3, 1.0, 0.3);
        assert!(matches!(
            partial_correlation(&s, 0, 1, NodeSet::singleton(2)),
            Err(Error::Singular { .. })
        ));
    }
}
