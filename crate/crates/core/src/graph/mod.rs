//! Graph data structures and structural algorithms.
//!
//! [`MixedGraph`] stores one mark per unordered node pair in a flat
//! upper-triangular array. [`Dag`] stores parent sets and is acyclic by
//! construction.

mod cpdag;
mod dsep;
mod enumerate;
mod io;
mod knowledge;
mod orient;

pub use cpdag::{
    cpdag_from_dag, check_validity, is_valid_cpdag, maximal_pdag, v_structures, Invalidity,
    ValidityLevel,
};
pub use dsep::d_separated;
pub use enumerate::{enumerate_dags, find_extension, Enumeration, DEFAULT_ENUMERATION_CAP};
pub use io::{parse_dot, parse_edge_list, to_dot, to_edge_list};
pub use knowledge::{BackgroundKnowledge, Knowledge, TierOrder};
pub use orient::{
    apply_forced_orientations, apply_meek_rules, orient_v_structures, Conflict, MeekOutcome,
    OrientMode, Oriented,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{Error, NodeSet, Result, MAX_NODES};

/// Stored mark for the pair `(lo, hi)` with `lo < hi`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
enum RawMark {
    #[default]
    None,
    Undirected,
    /// lo -> hi
    Forward,
    /// hi -> lo
    Backward,
    Bidirected,
}

/// Edge mark between `i` and `j`, read from the point of view of `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeMark {
    None,
    Undirected,
    /// `i -> j`
    Out,
    /// `j -> i`
    In,
    Bidirected,
}

impl EdgeMark {
    pub fn is_adjacent(self) -> bool {
        self != EdgeMark::None
    }

    pub fn reversed(self) -> EdgeMark {
        match self {
            EdgeMark::Out => EdgeMark::In,
            EdgeMark::In => EdgeMark::Out,
            m => m,
        }
    }
}

fn check_size(d: usize) -> Result<()> {
    if d > MAX_NODES {
        Err(Error::TooManyNodes(d))
    } else {
        Ok(())
    }
}

/// A graph with undirected, directed and bidirected edges; at most one edge
/// per unordered pair and no self-loops.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MixedGraph {
    d: usize,
    marks: Vec<RawMark>,
}

impl std::fmt::Debug for MixedGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MixedGraph{{d={}; ", self.d)?;
        for (i, j, m) in self.edges() {
            let s = match m {
                EdgeMark::Undirected => "--",
                EdgeMark::Out => "->",
                EdgeMark::In => "<-",
                EdgeMark::Bidirected => "<->",
                EdgeMark::None => unreachable!(),
            };
            write!(f, "{i}{s}{j} ")?;
        }
        write!(f, "}}")
    }
}

impl MixedGraph {
    /// Graph on `d` nodes with no edges.
    ///
    /// Panics if `d > MAX_NODES`; use [`MixedGraph::try_empty`] for untrusted sizes.
    pub fn empty(d: usize) -> Self {
        Self::try_empty(d).expect("node count exceeds MAX_NODES")
    }

    pub fn try_empty(d: usize) -> Result<Self> {
        check_size(d)?;
        Ok(MixedGraph {
            d,
            marks: vec![RawMark::None; d * d.saturating_sub(1) / 2],
        })
    }

    /// Complete graph with every pair joined by an undirected edge.
    pub fn complete_undirected(d: usize) -> Self {
        let mut g = Self::empty(d);
        g.marks.fill(RawMark::Undirected);
        g
    }

    pub fn n_nodes(&self) -> usize {
        self.d
    }

    fn slot(&self, i: usize, j: usize) -> (usize, bool) {
        debug_assert!(i != j && i < self.d && j < self.d);
        let (lo, hi, flipped) = if i < j { (i, j, false) } else { (j, i, true) };
        let idx = lo * (2 * self.d - lo - 1) / 2 + (hi - lo - 1);
        (idx, flipped)
    }

    pub fn check_node(&self, i: usize) -> Result<()> {
        if i < self.d {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange { index: i, d: self.d })
        }
    }

    /// Mark between `i` and `j` as seen from `i`.
    pub fn mark(&self, i: usize, j: usize) -> EdgeMark {
        if i == j {
            return EdgeMark::None;
        }
        let (idx, flipped) = self.slot(i, j);
        let m = match self.marks[idx] {
            RawMark::None => EdgeMark::None,
            RawMark::Undirected => EdgeMark::Undirected,
            RawMark::Forward => EdgeMark::Out,
            RawMark::Backward => EdgeMark::In,
            RawMark::Bidirected => EdgeMark::Bidirected,
        };
        if flipped {
            m.reversed()
        } else {
            m
        }
    }

    /// Set the mark between `i` and `j`, given from the point of view of `i`.
    pub fn set_mark(&mut self, i: usize, j: usize, mark: EdgeMark) {
        assert!(i != j, "self-loops are not allowed");
        let (idx, flipped) = self.slot(i, j);
        let m = if flipped { mark.reversed() } else { mark };
        self.marks[idx] = match m {
            EdgeMark::None => RawMark::None,
            EdgeMark::Undirected => RawMark::Undirected,
            EdgeMark::Out => RawMark::Forward,
            EdgeMark::In => RawMark::Backward,
            EdgeMark::Bidirected => RawMark::Bidirected,
        };
    }

    pub fn add_directed(&mut self, from: usize, to: usize) {
        self.set_mark(from, to, EdgeMark::Out);
    }

    pub fn add_undirected(&mut self, a: usize, b: usize) {
        self.set_mark(a, b, EdgeMark::Undirected);
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) {
        self.set_mark(a, b, EdgeMark::None);
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.mark(i, j).is_adjacent()
    }

    fn neighbours_where(&self, i: usize, pred: impl Fn(EdgeMark) -> bool) -> NodeSet {
        (0..self.d).filter(|&k| k != i && pred(self.mark(i, k))).collect()
    }

    /// All nodes adjacent to `i`, whatever the mark.
    pub fn adjacent(&self, i: usize) -> NodeSet {
        self.neighbours_where(i, EdgeMark::is_adjacent)
    }

    /// All `k` with `k -> i`.
    pub fn parents(&self, i: usize) -> NodeSet {
        self.neighbours_where(i, |m| m == EdgeMark::In)
    }

    pub fn children(&self, i: usize) -> NodeSet {
        self.neighbours_where(i, |m| m == EdgeMark::Out)
    }

    pub fn undirected_neighbours(&self, i: usize) -> NodeSet {
        self.neighbours_where(i, |m| m == EdgeMark::Undirected)
    }

    pub fn bidirected_neighbours(&self, i: usize) -> NodeSet {
        self.neighbours_where(i, |m| m == EdgeMark::Bidirected)
    }

    /// Every edge once as `(i, j, mark)` with `i < j`, in index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, EdgeMark)> + '_ {
        (0..self.d).flat_map(move |i| {
            (i + 1..self.d).filter_map(move |j| {
                let m = self.mark(i, j);
                m.is_adjacent().then_some((i, j, m))
            })
        })
    }

    pub fn n_edges(&self) -> usize {
        self.marks.iter().filter(|m| **m != RawMark::None).count()
    }

    pub fn has_bidirected(&self) -> bool {
        self.marks.contains(&RawMark::Bidirected)
    }

    pub fn has_undirected(&self) -> bool {
        self.marks.contains(&RawMark::Undirected)
    }

    /// Per-node parent sets of the directed part.
    pub fn directed_parents(&self) -> Vec<NodeSet> {
        (0..self.d).map(|i| self.parents(i)).collect()
    }

    /// True iff the directed part has no directed cycle.
    pub fn is_acyclic(&self) -> bool {
        is_acyclic(&self.directed_parents())
    }

    /// Same adjacencies, all undirected.
    pub fn skeleton(&self) -> MixedGraph {
        let mut g = self.clone();
        for m in g.marks.iter_mut() {
            if *m != RawMark::None {
                *m = RawMark::Undirected;
            }
        }
        g
    }

    pub fn same_skeleton(&self, other: &MixedGraph) -> bool {
        self.d == other.d
            && self
                .marks
                .iter()
                .zip(&other.marks)
                .all(|(a, b)| (*a == RawMark::None) == (*b == RawMark::None))
    }

    /// Subgraph induced by `nodes`; node `k` of the result is the `k`-th
    /// smallest member of `nodes`. Returns the graph and that index map.
    pub fn induced(&self, nodes: NodeSet) -> (MixedGraph, Vec<usize>) {
        let map: Vec<usize> = nodes.iter().filter(|&v| v < self.d).collect();
        let mut g = MixedGraph::empty(map.len());
        for (a, &u) in map.iter().enumerate() {
            for (b, &v) in map.iter().enumerate().skip(a + 1) {
                g.set_mark(a, b, self.mark(u, v));
            }
        }
        (g, map)
    }

    /// The DAG this graph represents, if every edge is directed and there is no cycle.
    pub fn to_dag(&self) -> Result<Dag> {
        if self.marks.iter().any(|m| matches!(m, RawMark::Undirected | RawMark::Bidirected)) {
            return Err(Error::InvalidGraph("graph has non-directed edges".into()));
        }
        Dag::from_parents(self.directed_parents())
    }
}

/// Kahn-style check on parent sets.
pub fn is_acyclic(parents: &[NodeSet]) -> bool {
    let d = parents.len();
    let mut remaining = parents.to_vec();
    let mut done = NodeSet::EMPTY;
    loop {
        let mut progressed = false;
        for v in 0..d {
            if !done.contains(v) && remaining[v].is_empty() {
                done.insert(v);
                progressed = true;
                for r in remaining.iter_mut() {
                    r.remove(v);
                }
            }
        }
        if done.len() == d {
            return true;
        }
        if !progressed {
            return false;
        }
    }
}

/// A directed acyclic graph over nodes `0..d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dag {
    parents: Vec<NodeSet>,
}

impl Dag {
    /// Build from `(parent, child)` pairs. Rejects self-loops, duplicate or
    /// antiparallel pairs, out-of-range nodes and cycles.
    pub fn new(d: usize, edges: &[(usize, usize)]) -> Result<Self> {
        check_size(d)?;
        let mut parents = vec![NodeSet::EMPTY; d];
        for &(p, c) in edges {
            for v in [p, c] {
                if v >= d {
                    return Err(Error::NodeOutOfRange { index: v, d });
                }
            }
            if p == c {
                return Err(Error::InvalidGraph(format!("self-loop at {p}")));
            }
            if parents[c].contains(p) || parents[p].contains(c) {
                return Err(Error::InvalidGraph(format!("more than one edge between {p} and {c}")));
            }
            parents[c].insert(p);
        }
        Self::from_parents(parents)
    }

    pub fn from_parents(parents: Vec<NodeSet>) -> Result<Self> {
        let d = parents.len();
        check_size(d)?;
        for (c, ps) in parents.iter().enumerate() {
            if ps.contains(c) || ps.iter().any(|p| p >= d) {
                return Err(Error::InvalidGraph(format!("bad parent set for node {c}")));
            }
        }
        if !is_acyclic(&parents) {
            return Err(Error::Cyclic);
        }
        Ok(Dag { parents })
    }

    pub fn empty(d: usize) -> Self {
        Dag {
            parents: vec![NodeSet::EMPTY; d],
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.parents.len()
    }

    pub fn parents(&self, i: usize) -> NodeSet {
        self.parents[i]
    }

    pub fn parent_sets(&self) -> &[NodeSet] {
        &self.parents
    }

    pub fn children(&self, i: usize) -> NodeSet {
        (0..self.n_nodes()).filter(|&c| self.parents[c].contains(i)).collect()
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.parents[to].contains(from)
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.has_edge(a, b) || self.has_edge(b, a)
    }

    /// All edges as `(parent, child)`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .parents
            .iter()
            .enumerate()
            .flat_map(|(c, ps)| ps.iter().map(move |p| (p, c)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn n_edges(&self) -> usize {
        self.parents.iter().map(|p| p.len()).sum()
    }

    /// A topological order (parents before children), smallest index first among ties.
    pub fn topological_order(&self) -> Vec<usize> {
        let d = self.n_nodes();
        let mut order = Vec::with_capacity(d);
        let mut placed = NodeSet::EMPTY;
        while order.len() < d {
            let v = (0..d)
                .find(|&v| !placed.contains(v) && self.parents[v].is_subset(placed))
                .expect("Dag is acyclic");
            placed.insert(v);
            order.push(v);
        }
        order
    }

    /// Proper descendants of `i`.
    pub fn descendants(&self, i: usize) -> NodeSet {
        let mut out = NodeSet::EMPTY;
        let mut stack = vec![i];
        while let Some(v) = stack.pop() {
            for c in self.children(v) {
                if !out.contains(c) {
                    out.insert(c);
                    stack.push(c);
                }
            }
        }
        out
    }

    pub fn to_mixed(&self) -> MixedGraph {
        let mut g = MixedGraph::empty(self.n_nodes());
        for (p, c) in self.edges() {
            g.add_directed(p, c);
        }
        g
    }
}

/// `k` with `k -> i`.
pub fn parents(g: &MixedGraph, i: usize) -> NodeSet {
    g.parents(i)
}

/// Separating sets recorded when an edge is deleted, keyed by unordered pair.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SepsetTable {
    #[serde(with = "pair_map")]
    sets: BTreeMap<(usize, usize), NodeSet>,
}

impl SepsetTable {
    fn key(i: usize, j: usize) -> (usize, usize) {
        if i < j {
            (i, j)
        } else {
            (j, i)
        }
    }

    pub fn insert(&mut self, i: usize, j: usize, s: NodeSet) {
        debug_assert!(!s.contains(i) && !s.contains(j));
        self.sets.insert(Self::key(i, j), s);
    }

    pub fn get(&self, i: usize, j: usize) -> Option<NodeSet> {
        self.sets.get(&Self::key(i, j)).copied()
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), NodeSet)> + '_ {
        self.sets.iter().map(|(k, v)| (*k, *v))
    }
}

mod pair_map {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::NodeSet;

    #[derive(Serialize, Deserialize)]
    struct Entry {
        i: usize,
        j: usize,
        sepset: NodeSet,
    }

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<(usize, usize), NodeSet>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        s.collect_seq(map.iter().map(|(&(i, j), &sepset)| Entry { i, j, sepset }))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<(usize, usize), NodeSet>, D::Error> {
        let entries = Vec::<Entry>::deserialize(d)?;
        Ok(entries.into_iter().map(|e| ((e.i, e.j), e.sepset)).collect())
    }
}
