//! Consistent extensions of partially directed graphs.

use rustc_hash::FxHashSet;

use super::{apply_meek_rules, Dag, EdgeMark, Knowledge, MixedGraph};
use crate::{Error, NodeSet, Result};

pub const DEFAULT_ENUMERATION_CAP: usize = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub struct Enumeration {
    pub dags: Vec<Dag>,
    /// More than `cap` extensions exist; `dags` holds the first `cap`.
    pub overflow: bool,
}

impl Enumeration {
    pub fn len(&self) -> usize {
        self.dags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dags.is_empty()
    }
}

/// One consistent extension of `g`, or `None` if there is none.
///
/// Dor-Tarsi: repeatedly remove a node with no children whose undirected
/// neighbours are adjacent to all its other neighbours, directing those
/// undirected edges into it.
pub fn find_extension(g: &MixedGraph) -> Option<Dag> {
    if g.has_bidirected() {
        return None;
    }
    let d = g.n_nodes();
    let mut parents = vec![NodeSet::EMPTY; d];
    let mut alive = NodeSet::full(d);
    let adj: Vec<NodeSet> = (0..d).map(|v| g.adjacent(v)).collect();
    let ch: Vec<NodeSet> = (0..d).map(|v| g.children(v)).collect();
    let und: Vec<NodeSet> = (0..d).map(|v| g.undirected_neighbours(v)).collect();
    while !alive.is_empty() {
        let sink = alive.iter().find(|&x| {
            if !ch[x].intersection(alive).is_empty() {
                return false;
            }
            let nb = adj[x].intersection(alive);
            und[x]
                .intersection(alive)
                .iter()
                .all(|y| nb.without(y).is_subset(adj[y]))
        })?;
        parents[sink] = adj[sink].intersection(alive);
        alive.remove(sink);
    }
    Dag::from_parents(parents).ok()
}

fn has_new_v_structure(g: &MixedGraph, original: &MixedGraph) -> bool {
    for k in 0..g.n_nodes() {
        let ps: Vec<usize> = g.parents(k).iter().collect();
        for (x, &a) in ps.iter().enumerate() {
            for &b in &ps[x + 1..] {
                if !g.is_adjacent(a, b)
                    && !(original.mark(a, k) == EdgeMark::Out && original.mark(b, k) == EdgeMark::Out)
                {
                    return true;
                }
            }
        }
    }
    false
}

struct Search<'a> {
    original: &'a MixedGraph,
    trivial: Knowledge,
    seen: FxHashSet<Vec<NodeSet>>,
    out: Vec<Dag>,
    cap: usize,
    overflow: bool,
}

impl Search<'_> {
    fn visit(&mut self, g: MixedGraph) {
        if self.overflow {
            return;
        }
        let g = apply_meek_rules(&g, &self.trivial).graph;
        if !g.is_acyclic() || has_new_v_structure(&g, self.original) || find_extension(&g).is_none()
        {
            return;
        }
        let Some((a, b, _)) = g.edges().find(|&(_, _, m)| m == EdgeMark::Undirected) else {
            let dag = g.to_dag().expect("fully directed and acyclic");
            if self.seen.insert(dag.parent_sets().to_vec()) {
                if self.out.len() == self.cap {
                    self.overflow = true;
                } else {
                    self.out.push(dag);
                }
            }
            return;
        };
        for (from, to) in [(a, b), (b, a)] {
            let mut next = g.clone();
            next.add_directed(from, to);
            self.visit(next);
        }
    }
}

/// All DAGs with the skeleton of `c` that keep every directed edge of `c`
/// and add no cycle and no v-structure.
///
/// Stops after `cap` DAGs; if more exist the result has `overflow` set.
pub fn enumerate_dags(c: &MixedGraph, cap: usize) -> Result<Enumeration> {
    if cap == 0 {
        return Err(Error::Config("enumeration cap must be positive".into()));
    }
    if c.has_bidirected() {
        return Err(Error::InvalidGraph("bidirected edge".into()));
    }
    if !c.is_acyclic() {
        return Err(Error::Cyclic);
    }
    let mut search = Search {
        original: c,
        trivial: Knowledge::trivial(c.n_nodes()),
        seen: FxHashSet::default(),
        out: Vec::new(),
        cap,
        overflow: false,
    };
    search.visit(c.clone());
    Ok(Enumeration {
        dags: search.out,
        overflow: search.overflow,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn undirected_chain_has_three_members() {
        let mut g = MixedGraph::empty(3);
        g.add_undirected(0, 1);
        g.add_undirected(1, 2);
        let e = enumerate_dags(&g, 100).unwrap();
        assert!(!e.overflow);
        let mut edges: Vec<_> = e.dags.iter().map(|d| d.edges()).collect();
        edges.sort();
        let mut expect = vec![
            vec![(0, 1), (1, 2)],
            vec![(1, 0), (2, 1)],
            vec![(1, 0), (1, 2)],
        ];
        expect.sort();
        assert_eq!(edges, expect);
    }

    #[test]
    fn complete_three_has_six_members() {
        let e = enumerate_dags(&MixedGraph::complete_undirected(3), 100).unwrap();
        assert_eq!(e.len(), 6);
    }

    #[test]
    fn directed_graph_is_its_own_class() {
        let dag = Dag::new(3, &[(0, 1), (2, 1)]).unwrap();
        let e = enumerate_dags(&dag.to_mixed(), 10).unwrap();
        assert_eq!(e.dags, vec![dag]);
    }

    #[test]
    fn overflow_is_signalled_with_partial_list() {
        let e = enumerate_dags(&MixedGraph::complete_undirected(4), 5).unwrap();
        assert!(e.overflow);
        assert_eq!(e.len(), 5);
    }

    #[test]
    fn rejects_invalid_input() {
        let mut g = MixedGraph::empty(2);
        g.set_mark(0, 1, EdgeMark::Bidirected);
        assert!(enumerate_dags(&g, 10).is_err());
        assert!(enumerate_dags(&MixedGraph::empty(2), 0).is_err());
    }

    #[test]
    fn non_extendable_pdag_has_no_extension() {
        // an undirected 4-cycle cannot be oriented without a new v-structure
        let mut g = MixedGraph::empty(4);
        g.add_undirected(0, 1);
        g.add_undirected(1, 2);
        g.add_undirected(2, 3);
        g.add_undirected(3, 0);
        assert!(find_extension(&g).is_none());
        assert!(enumerate_dags(&g, 10).unwrap().is_empty());
    }
}
