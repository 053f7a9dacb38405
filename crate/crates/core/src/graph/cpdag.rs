use serde::{Deserialize, Serialize};

use super::{apply_meek_rules, find_extension, Dag, EdgeMark, Knowledge, MixedGraph};

/// v-structures `a -> k <- b` of a DAG as `(a, k, b)` with `a < b`.
pub fn v_structures(dag: &Dag) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for k in 0..dag.n_nodes() {
        let ps: Vec<usize> = dag.parents(k).iter().collect();
        for (x, &a) in ps.iter().enumerate() {
            for &b in &ps[x + 1..] {
                if !dag.is_adjacent(a, b) {
                    out.push((a, k, b));
                }
            }
        }
    }
    out
}

/// Maximally oriented graph implied by the skeleton and v-structures of
/// `dag` together with `knowledge`.
pub fn maximal_pdag(dag: &Dag, knowledge: &Knowledge) -> MixedGraph {
    let mut g = dag.to_mixed().skeleton();
    for (a, k, b) in v_structures(dag) {
        g.add_directed(a, k);
        g.add_directed(b, k);
    }
    apply_meek_rules(&g, knowledge).graph
}

/// The CPDAG of `dag`'s Markov equivalence class.
pub fn cpdag_from_dag(dag: &Dag) -> MixedGraph {
    maximal_pdag(dag, &Knowledge::trivial(dag.n_nodes()))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValidityLevel {
    /// No bidirected edges and an acyclic directed part.
    Basic,
    /// Basic, plus a consistent extension exists and re-deriving the
    /// maximally oriented graph from it reproduces the input.
    #[default]
    Strict,
}

/// Why a graph failed screening.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Invalidity {
    Bidirected { a: usize, b: usize },
    Cycle,
    NotExtendable,
    NotMaximal,
    MissingRequiredAdjacency { a: usize, b: usize },
}

fn check_graph(g: &MixedGraph, level: ValidityLevel, knowledge: &Knowledge) -> Result<(), Invalidity> {
    if let Some((a, b, _)) = g.edges().find(|&(_, _, m)| m == EdgeMark::Bidirected) {
        return Err(Invalidity::Bidirected { a, b });
    }
    if !g.is_acyclic() {
        return Err(Invalidity::Cycle);
    }
    if level == ValidityLevel::Basic {
        return Ok(());
    }
    let ext = find_extension(g).ok_or(Invalidity::NotExtendable)?;
    if maximal_pdag(&ext, knowledge) != *g {
        return Err(Invalidity::NotMaximal);
    }
    Ok(())
}

/// Screening check. With a validity scope in `knowledge`, structure is only
/// checked on the induced subgraph over the scope; required adjacencies are
/// always checked on the whole graph.
pub fn check_validity(
    g: &MixedGraph,
    level: ValidityLevel,
    knowledge: &Knowledge,
) -> Result<(), Invalidity> {
    let bk = &knowledge.background;
    for &(a, b) in &bk.required_adjacencies {
        if !g.is_adjacent(a, b) {
            return Err(Invalidity::MissingRequiredAdjacency {
                a: a.min(b),
                b: a.max(b),
            });
        }
    }
    match bk.validity_scope {
        None => check_graph(g, level, knowledge),
        Some(scope) => {
            let (h, map) = g.induced(scope);
            check_graph(&h, level, &knowledge.restrict(&map)).map_err(|e| match e {
                Invalidity::Bidirected { a, b } => Invalidity::Bidirected {
                    a: map[a],
                    b: map[b],
                },
                other => other,
            })
        }
    }
}

pub fn is_valid_cpdag(g: &MixedGraph, level: ValidityLevel, knowledge: &Knowledge) -> bool {
    check_validity(g, level, knowledge).is_ok()
}
