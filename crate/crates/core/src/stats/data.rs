use serde::{Deserialize, Serialize};

use crate::{Error, Result, MAX_NODES};

/// `n` samples of `d` variables, stored column by column.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DataMatrix {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
}

impl DataMatrix {
    pub fn new(names: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self> {
        if names.len() != columns.len() {
            return Err(Error::InvalidData(format!(
                "{} names for {} columns",
                names.len(),
                columns.len()
            )));
        }
        let d = columns.len();
        if d < 2 {
            return Err(Error::InvalidData(format!("need at least 2 variables, got {d}")));
        }
        if d > MAX_NODES {
            return Err(Error::TooManyNodes(d));
        }
        let n = columns[0].len();
        if n < 2 {
            return Err(Error::InvalidData(format!("need at least 2 samples, got {n}")));
        }
        for (j, c) in columns.iter().enumerate() {
            if c.len() != n {
                return Err(Error::InvalidData(format!("column {j} has {} rows, expected {n}", c.len())));
            }
            if let Some(r) = c.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidData(format!("non-finite value at row {r}, column {j}")));
            }
        }
        Ok(DataMatrix { names, columns })
    }

    /// Columns named `X1..Xd`.
    pub fn from_columns(columns: Vec<Vec<f64>>) -> Result<Self> {
        let names = (1..=columns.len()).map(|k| format!("X{k}")).collect();
        Self::new(names, columns)
    }

    pub fn n_samples(&self) -> usize {
        self.columns[0].len()
    }

    pub fn n_vars(&self) -> usize {
        self.columns.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Sample correlation matrix plus sample size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianSuffStats {
    d: usize,
    n: usize,
    corr: Vec<f64>,
}

impl GaussianSuffStats {
    /// From a correlation matrix given row-major. Checked for symmetry, unit
    /// diagonal and entries in [-1, 1].
    pub fn new(corr: Vec<f64>, d: usize, n: usize) -> Result<Self> {
        if corr.len() != d * d {
            return Err(Error::InvalidData("correlation matrix has wrong size".into()));
        }
        if d > MAX_NODES {
            return Err(Error::TooManyNodes(d));
        }
        for i in 0..d {
            if (corr[i * d + i] - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidData(format!("diagonal entry {i} is not 1")));
            }
            for j in 0..i {
                let (a, b) = (corr[i * d + j], corr[j * d + i]);
                if (a - b).abs() > 1e-12 || !(-1.0 - 1e-12..=1.0 + 1e-12).contains(&a) {
                    return Err(Error::InvalidData(format!("bad correlation entry ({i}, {j})")));
                }
            }
        }
        Ok(GaussianSuffStats { d, n, corr })
    }

    pub fn n_vars(&self) -> usize {
        self.d
    }

    pub fn n_samples(&self) -> usize {
        self.n
    }

    pub fn corr(&self, i: usize, j: usize) -> f64 {
        self.corr[i * self.d + j]
    }
}

/// Pearson correlation matrix of `x`.
pub fn correlation_from_data(x: &DataMatrix) -> Result<GaussianSuffStats> {
    let d = x.n_vars();
    let n = x.n_samples();
    let mut centred = Vec::with_capacity(d);
    for j in 0..d {
        let c = x.column(j);
        let mean = c.iter().sum::<f64>() / n as f64;
        let dev: Vec<f64> = c.iter().map(|v| v - mean).collect();
        let ss: f64 = dev.iter().map(|v| v * v).sum();
        if ss <= f64::EPSILON * mean.abs().max(1.0) * n as f64 {
            return Err(Error::InvalidData(format!("column `{}` is constant", x.names()[j])));
        }
        let scale = ss.sqrt();
        centred.push(dev.into_iter().map(|v| v / scale).collect::<Vec<f64>>());
    }
    let mut corr = vec![0.0; d * d];
    for i in 0..d {
        corr[i * d + i] = 1.0;
        for j in 0..i {
            let r: f64 = centred[i].iter().zip(&centred[j]).map(|(a, b)| a * b).sum();
            let r = r.clamp(-1.0, 1.0);
            corr[i * d + j] = r;
            corr[j * d + i] = r;
        }
    }
    Ok(GaussianSuffStats { d, n, corr })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_columns_correlate_perfectly() {
        let c = vec![1.0, 2.0, 4.0, 3.0];
        let x = DataMatrix::from_columns(vec![c.clone(), c]).unwrap();
        let s = correlation_from_data(&x).unwrap();
        assert!((s.corr(0, 1) - 1.0).abs() < 1e-15);
        assert_eq!(s.n_samples(), 4);
    }

    #[test]
    fn degenerate_inputs_rejected() {
        assert!(DataMatrix::from_columns(vec![vec![1.0, 2.0]]).is_err());
        assert!(DataMatrix::from_columns(vec![vec![1.0], vec![2.0]]).is_err());
        let x = DataMatrix::from_columns(vec![vec![1.0, 1.0, 1.0], vec![1.0, 2.0, 3.0]]).unwrap();
        assert!(matches!(correlation_from_data(&x), Err(Error::InvalidData(_))));
    }
}
