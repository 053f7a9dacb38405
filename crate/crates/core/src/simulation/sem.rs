use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::graph::Dag;
use crate::stats::DataMatrix;
use crate::{Error, NodeSet, Result};

/// Random DAG over the fixed order `0 < 1 < ... < d-1`; each forward pair is
/// an edge independently with probability `expected_neighbors / (d - 1)`.
pub fn random_dag<R: Rng + ?Sized>(d: usize, expected_neighbors: f64, rng: &mut R) -> Result<Dag> {
    if !(2..=crate::MAX_NODES).contains(&d) {
        return Err(Error::Config(format!("d = {d} out of range")));
    }
    let p = expected_neighbors / (d - 1) as f64;
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Config(format!(
            "expected neighbours {expected_neighbors} not in (0, {}]",
            d - 1
        )));
    }
    let mut parents = vec![NodeSet::EMPTY; d];
    for (j, pa) in parents.iter_mut().enumerate() {
        for i in 0..j {
            if rng.gen_bool(p) {
                pa.insert(i);
            }
        }
    }
    Dag::from_parents(parents)
}

/// DAG with a weight on every edge; `weights[k * d + j]` is the weight of
/// `k -> j` and zero for non-edges.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedDag {
    pub dag: Dag,
    weights: Vec<f64>,
}

impl WeightedDag {
    pub fn new(dag: Dag, weights: Vec<f64>) -> Result<Self> {
        let d = dag.n_nodes();
        if weights.len() != d * d {
            return Err(Error::InvalidData(format!(
                "{} weights for {d} nodes",
                weights.len()
            )));
        }
        for k in 0..d {
            for j in 0..d {
                let w = weights[k * d + j];
                if dag.has_edge(k, j) != (w != 0.0) || !w.is_finite() {
                    return Err(Error::InvalidData(format!("weight {w} on pair {k} -> {j}")));
                }
            }
        }
        Ok(WeightedDag { dag, weights })
    }

    /// Builds from `(from, to, weight)` triples.
    pub fn from_edges(d: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = edges.iter().map(|&(a, b, _)| (a, b)).collect();
        let dag = Dag::new(d, &pairs)?;
        let mut weights = vec![0.0; d * d];
        for &(a, b, w) in edges {
            weights[a * d + b] = w;
        }
        WeightedDag::new(dag, weights)
    }

    pub fn n_nodes(&self) -> usize {
        self.dag.n_nodes()
    }

    pub fn weight(&self, from: usize, to: usize) -> f64 {
        self.weights[from * self.n_nodes() + to]
    }

    /// Weighted adjacency matrix, `A[(k, j)] = w_kj`.
    pub fn adjacency(&self) -> DMatrix<f64> {
        let d = self.n_nodes();
        DMatrix::from_fn(d, d, |k, j| self.weights[k * d + j])
    }

    /// Covariance implied by unit-variance independent noise.
    pub fn implied_covariance(&self) -> DMatrix<f64> {
        let t = self.total_effects();
        t.transpose() * t
    }

    /// `sum_{p >= 0} A^p`; finite because `A` is nilpotent.
    pub fn total_effects(&self) -> DMatrix<f64> {
        let d = self.n_nodes();
        let a = self.adjacency();
        let mut total = DMatrix::identity(d, d);
        let mut power = DMatrix::identity(d, d);
        for _ in 1..d {
            power = &power * &a;
            total += &power;
        }
        total
    }
}

fn draw_raw_weight<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let mag: f64 = rng.gen_range(0.5..1.0);
    if rng.gen_bool(0.5) {
        -mag
    } else {
        mag
    }
}

/// Draws `w~` uniform on `(-1, -0.5) ∪ (0.5, 1)` per edge and divides the
/// weights into each node by `sqrt(1 + sum of squared raw weights)`, so a
/// node has unit variance when its parents are independent standard normals.
pub fn draw_and_scale_weights<R: Rng + ?Sized>(dag: &Dag, rng: &mut R) -> WeightedDag {
    let d = dag.n_nodes();
    let mut weights = vec![0.0; d * d];
    for (k, j) in dag.edges() {
        weights[k * d + j] = draw_raw_weight(rng);
    }
    scale_weights(d, &mut weights);
    WeightedDag {
        dag: dag.clone(),
        weights,
    }
}

pub(crate) fn scale_weights(d: usize, weights: &mut [f64]) {
    for j in 0..d {
        let ss: f64 = (0..d).map(|k| weights[k * d + j].powi(2)).sum();
        let scale = (ss + 1.0).sqrt();
        for k in 0..d {
            weights[k * d + j] /= scale;
        }
    }
}

/// `n` draws from the linear SEM with standard normal noise.
pub fn sample_sem<R: Rng + ?Sized>(wd: &WeightedDag, n: usize, rng: &mut R) -> Result<DataMatrix> {
    let d = wd.n_nodes();
    let mut columns = vec![vec![0.0; n]; d];
    for j in wd.dag.topological_order() {
        let pa: Vec<(usize, f64)> = wd.dag.parents(j).iter().map(|k| (k, wd.weight(k, j))).collect();
        for r in 0..n {
            let noise: f64 = rng.sample(StandardNormal);
            columns[j][r] = pa.iter().map(|&(k, w)| w * columns[k][r]).sum::<f64>() + noise;
        }
    }
    DataMatrix::from_columns(columns)
}

/// Total causal effect of `exposure` on `outcome`: the sum over directed
/// paths of the products of edge weights.
pub fn true_effect(wd: &WeightedDag, exposure: usize, outcome: usize) -> Result<f64> {
    let d = wd.n_nodes();
    for v in [exposure, outcome] {
        if v >= d {
            return Err(Error::NodeOutOfRange { index: v, d });
        }
    }
    Ok(wd.total_effects()[(exposure, outcome)])
}

/// Population coefficient of `exposure` in the regression of `outcome` on
/// `exposure` and the exposure's parents, from the implied covariance.
pub fn population_regression_effect(wd: &WeightedDag, exposure: usize, outcome: usize) -> Result<f64> {
    let d = wd.n_nodes();
    for v in [exposure, outcome] {
        if v >= d {
            return Err(Error::NodeOutOfRange { index: v, d });
        }
    }
    let pa = wd.dag.parents(exposure);
    if pa.contains(outcome) {
        return Ok(0.0);
    }
    let sigma = wd.implied_covariance();
    let z: Vec<usize> = std::iter::once(exposure).chain(pa.iter()).collect();
    let szz = DMatrix::from_fn(z.len(), z.len(), |a, b| sigma[(z[a], z[b])]);
    let szy = DVector::from_fn(z.len(), |a, _| sigma[(z[a], outcome)]);
    let coef = szz
        .cholesky()
        .ok_or(Error::Singular {
            condition: f64::INFINITY,
        })?
        .solve(&szy);
    Ok(coef[0])
}
