//! Edge orientation: background-knowledge forcing, the collider rule (plain
//! and majority variants) and Meek's rules R1-R4.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{EdgeMark, Knowledge, MixedGraph, SepsetTable};
use crate::{Error, NodeSet, Result};

/// How unshielded triples are turned into colliders.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrientMode {
    /// Collider iff the middle node is not in the recorded sepset.
    #[default]
    Standard,
    /// Recount all separating subsets of the endpoint adjacencies, up to the
    /// given size, and vote.
    Majority { max_cond_size: usize },
}

/// Something that went wrong during orientation. None of these abort the
/// algorithm; they are carried so screening can report why a graph failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Conflict {
    /// Colliders were found at both ends of an edge.
    Bidirected { a: usize, b: usize },
    /// A collider needed an arrowhead that tiers or a forbidden edge rule out;
    /// the collider was dropped and the background orientation kept.
    BackgroundCollider { from: usize, to: usize },
    /// A Meek rule asked for an orientation background knowledge rules out.
    BackgroundMeek { from: usize, to: usize },
    /// Majority rule: the middle node sits in exactly half of the separating sets.
    Ambiguous { i: usize, k: usize, j: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Oriented {
    pub graph: MixedGraph,
    pub conflicts: Vec<Conflict>,
}

/// Orient every undirected edge whose direction is forced by tiers or by a
/// one-way forbidden edge. Existing orientations are left alone.
pub fn apply_forced_orientations(g: &mut MixedGraph, knowledge: &Knowledge) {
    let d = g.n_nodes();
    for a in 0..d {
        for b in a + 1..d {
            if g.mark(a, b) == EdgeMark::Undirected {
                if let Some((from, to)) = knowledge.forced_direction(a, b) {
                    g.add_directed(from, to);
                }
            }
        }
    }
}

/// Put an arrowhead at `to` on the edge `from - to`.
fn add_arrowhead(g: &mut MixedGraph, from: usize, to: usize, conflicts: &mut Vec<Conflict>) {
    match g.mark(from, to) {
        EdgeMark::Undirected => g.add_directed(from, to),
        EdgeMark::In => {
            g.set_mark(from, to, EdgeMark::Bidirected);
            conflicts.push(Conflict::Bidirected {
                a: from.min(to),
                b: from.max(to),
            });
        }
        EdgeMark::Out | EdgeMark::Bidirected | EdgeMark::None => {}
    }
}

/// Unshielded triples `(i, k, j)` with `i < j`, in index order.
fn unshielded_triples(g: &MixedGraph) -> Vec<(usize, usize, usize)> {
    let d = g.n_nodes();
    let mut out = Vec::new();
    for k in 0..d {
        let adj: Vec<usize> = g.adjacent(k).iter().collect();
        for (x, &i) in adj.iter().enumerate() {
            for &j in &adj[x + 1..] {
                if !g.is_adjacent(i, j) {
                    out.push((i, k, j));
                }
            }
        }
    }
    out
}

/// Separating sets of `(i, j)` among subsets of either endpoint's current
/// adjacency (minus the other endpoint and the common future), up to `max_size`.
fn all_separating_sets(
    g: &MixedGraph,
    i: usize,
    j: usize,
    knowledge: &Knowledge,
    max_size: usize,
    separates: &dyn Fn(usize, usize, NodeSet) -> bool,
) -> Vec<NodeSet> {
    let future = knowledge.tiers.later_than_both(i, j);
    let pools = [
        g.adjacent(i).without(j).difference(future),
        g.adjacent(j).without(i).difference(future),
    ];
    let mut found: Vec<NodeSet> = Vec::new();
    let mut seen = HashSet::new();
    for pool in pools {
        for s in 0..=max_size.min(pool.len()) {
            for cand in pool.subsets_of_size(s) {
                if seen.insert(cand) && separates(i, j, cand) {
                    found.push(cand);
                }
            }
        }
    }
    found
}

/// Orient colliders on the skeleton.
///
/// Forced orientations are applied first. In `Majority` mode `separates`
/// must be supplied; it should report whether `i` and `j` test independent
/// given `S`.
pub fn orient_v_structures(
    skeleton: &MixedGraph,
    sepsets: &SepsetTable,
    knowledge: &Knowledge,
    mode: OrientMode,
    separates: Option<&dyn Fn(usize, usize, NodeSet) -> bool>,
) -> Result<Oriented> {
    if matches!(mode, OrientMode::Majority { .. }) && separates.is_none() {
        return Err(Error::MissingTest);
    }
    let mut g = skeleton.clone();
    apply_forced_orientations(&mut g, knowledge);
    let mut conflicts = Vec::new();
    // Triples are a property of the skeleton; collect them before any
    // arrowheads are added.
    let triples = unshielded_triples(skeleton);
    let mut sep_cache: HashMap<(usize, usize), Vec<NodeSet>> = HashMap::new();
    for (i, k, j) in triples {
        let collider = match mode {
            OrientMode::Standard => match sepsets.get(i, j) {
                Some(s) => !s.contains(k),
                None => false,
            },
            OrientMode::Majority { max_cond_size } => {
                let sep_fn = separates.expect("checked above");
                let sets = sep_cache.entry((i, j)).or_insert_with(|| {
                    all_separating_sets(skeleton, i, j, knowledge, max_cond_size, sep_fn)
                });
                if sets.is_empty() {
                    // nothing re-found; fall back to the recorded sepset
                    match sepsets.get(i, j) {
                        Some(s) => !s.contains(k),
                        None => false,
                    }
                } else {
                    let with_k = sets.iter().filter(|s| s.contains(k)).count();
                    if 2 * with_k == sets.len() {
                        conflicts.push(Conflict::Ambiguous { i, k, j });
                        false
                    } else {
                        2 * with_k < sets.len()
                    }
                }
            }
        };
        if !collider {
            continue;
        }
        // Background knowledge rules the whole v-structure out, so neither
        // arrowhead is added.
        if let Some(from) = [i, j].into_iter().find(|&a| !knowledge.allows(a, k)) {
            conflicts.push(Conflict::BackgroundCollider { from, to: k });
            continue;
        }
        add_arrowhead(&mut g, i, k, &mut conflicts);
        add_arrowhead(&mut g, j, k, &mut conflicts);
    }
    Ok(Oriented {
        graph: g,
        conflicts,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeekOutcome {
    pub graph: MixedGraph,
    /// The input had bidirected edges; they were treated as plain adjacencies.
    pub bidirected_present: bool,
    pub conflicts: Vec<Conflict>,
}

/// Working copy of a mixed graph as per-node bit masks.
struct Masks {
    par: Vec<u64>,
    ch: Vec<u64>,
    und: Vec<u64>,
    adj: Vec<u64>,
}

impl Masks {
    fn of(g: &MixedGraph) -> Self {
        let d = g.n_nodes();
        let mut m = Masks {
            par: vec![0; d],
            ch: vec![0; d],
            und: vec![0; d],
            adj: vec![0; d],
        };
        for (a, b, mark) in g.edges() {
            m.adj[a] |= 1 << b;
            m.adj[b] |= 1 << a;
            match mark {
                EdgeMark::Undirected => {
                    m.und[a] |= 1 << b;
                    m.und[b] |= 1 << a;
                }
                EdgeMark::Out => {
                    m.par[b] |= 1 << a;
                    m.ch[a] |= 1 << b;
                }
                EdgeMark::In => {
                    m.par[a] |= 1 << b;
                    m.ch[b] |= 1 << a;
                }
                EdgeMark::Bidirected | EdgeMark::None => {}
            }
        }
        m
    }

    fn orient(&mut self, a: usize, b: usize) {
        self.und[a] &= !(1 << b);
        self.und[b] &= !(1 << a);
        self.par[b] |= 1 << a;
        self.ch[a] |= 1 << b;
    }

    /// Whether any of R1-R4 orients the undirected edge `a - b` as `a -> b`.
    fn rule_fires(&self, a: usize, b: usize) -> bool {
        let bbit = 1u64 << b;
        // R1: c -> a - b, c and b nonadjacent
        if self.par[a] & !self.adj[b] & !bbit != 0 {
            return true;
        }
        // R2: a -> c -> b
        if self.ch[a] & self.par[b] != 0 {
            return true;
        }
        // R3: a - c -> b, a - e -> b, c and e nonadjacent
        let mid = self.und[a] & self.par[b];
        if mid.count_ones() >= 2 {
            let mut rest = mid;
            while rest != 0 {
                let c = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if rest & !self.adj[c] != 0 {
                    return true;
                }
            }
        }
        // R4: a - e -> c -> b with a adjacent to c and e, b nonadjacent
        let mut cs = self.par[b] & self.adj[a];
        while cs != 0 {
            let c = cs.trailing_zeros() as usize;
            cs &= cs - 1;
            let es = self.par[c] & (self.und[a] | self.ch[a]) & !self.adj[b] & !bbit;
            if es != 0 {
                return true;
            }
        }
        false
    }
}

/// Close `g` under Meek's rules R1-R4.
///
/// Undirected edges with a forced direction (tiers or one-way forbidden
/// edges) are oriented first. Existing orientations are never changed. If
/// `g` has bidirected edges they only count as adjacencies and the outcome
/// is flagged.
pub fn apply_meek_rules(g: &MixedGraph, knowledge: &Knowledge) -> MeekOutcome {
    let mut g = g.clone();
    apply_forced_orientations(&mut g, knowledge);
    let d = g.n_nodes();
    let mut m = Masks::of(&g);
    let mut conflicts = Vec::new();
    loop {
        let mut changed = false;
        for a in 0..d {
            let mut nb = m.und[a];
            while nb != 0 {
                let b = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                if m.und[a] & (1 << b) == 0 || !m.rule_fires(a, b) {
                    continue;
                }
                if knowledge.allows(a, b) {
                    m.orient(a, b);
                    g.add_directed(a, b);
                    changed = true;
                } else {
                    let c = Conflict::BackgroundMeek { from: a, to: b };
                    if !conflicts.contains(&c) {
                        conflicts.push(c);
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    MeekOutcome {
        bidirected_present: g.has_bidirected(),
        graph: g,
        conflicts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TierOrder;

    fn chain_skeleton() -> MixedGraph {
        let mut g = MixedGraph::empty(3);
        g.add_undirected(0, 1);
        g.add_undirected(1, 2);
        g
    }

    #[test]
    fn collider_when_middle_not_in_sepset() {
        let mut seps = SepsetTable::default();
        seps.insert(0, 2, NodeSet::EMPTY);
        let out = orient_v_structures(
            &chain_skeleton(),
            &seps,
            &Knowledge::trivial(3),
            OrientMode::Standard,
            None,
        )
        .unwrap();
        assert_eq!(out.graph.mark(0, 1), EdgeMark::Out);
        assert_eq!(out.graph.mark(2, 1), EdgeMark::Out);
        assert!(out.conflicts.is_empty());
    }

    #[test]
    fn no_collider_when_middle_in_sepset() {
        let mut seps = SepsetTable::default();
        seps.insert(0, 2, NodeSet::singleton(1));
        let out = orient_v_structures(
            &chain_skeleton(),
            &seps,
            &Knowledge::trivial(3),
            OrientMode::Standard,
            None,
        )
        .unwrap();
        assert_eq!(out.graph, chain_skeleton());
    }

    #[test]
    fn colliders_at_both_ends_make_bidirected_edge() {
        // 0 - 1 - 2 - 3 with 0,2 / 1,3 / 0,3 nonadjacent, all sepsets empty:
        // triple (0,1,2) wants 2 -> 1, triple (1,2,3) wants 1 -> 2.
        let mut g = MixedGraph::empty(4);
        g.add_undirected(0, 1);
        g.add_undirected(1, 2);
        g.add_undirected(2, 3);
        let mut seps = SepsetTable::default();
        seps.insert(0, 2, NodeSet::EMPTY);
        seps.insert(1, 3, NodeSet::EMPTY);
        seps.insert(0, 3, NodeSet::EMPTY);
        let out =
            orient_v_structures(&g, &seps, &Knowledge::trivial(4), OrientMode::Standard, None)
                .unwrap();
        assert_eq!(out.graph.mark(1, 2), EdgeMark::Bidirected);
        assert!(out.conflicts.contains(&Conflict::Bidirected { a: 1, b: 2 }));
        assert!(out.graph.has_bidirected());
    }

    #[test]
    fn tier_direction_survives_collider() {
        // tiers: 1 is earlier than 0, so collider 0 -> 1 <- 2 cannot put an
        // arrowhead at 1 from 0.
        let k = Knowledge::from_tiers(TierOrder::new(vec![2, 1, 2]).unwrap());
        let mut seps = SepsetTable::default();
        seps.insert(0, 2, NodeSet::EMPTY);
        let out =
            orient_v_structures(&chain_skeleton(), &seps, &k, OrientMode::Standard, None).unwrap();
        assert_eq!(out.graph.mark(1, 0), EdgeMark::Out);
        assert_eq!(out.graph.mark(1, 2), EdgeMark::Out);
        assert!(out.conflicts.contains(&Conflict::BackgroundCollider { from: 0, to: 1 }));
    }

    #[test]
    fn impossible_collider_adds_no_arrowhead() {
        let k = Knowledge::from_tiers(TierOrder::new(vec![2, 1, 1]).unwrap());
        let mut seps = SepsetTable::default();
        seps.insert(0, 2, NodeSet::EMPTY);
        let out =
            orient_v_structures(&chain_skeleton(), &seps, &k, OrientMode::Standard, None).unwrap();
        assert_eq!(out.graph.mark(1, 0), EdgeMark::Out);
        assert_eq!(out.graph.mark(1, 2), EdgeMark::Undirected);
    }

    #[test]
    fn majority_mode_needs_a_test() {
        let r = orient_v_structures(
            &chain_skeleton(),
            &SepsetTable::default(),
            &Knowledge::trivial(3),
            OrientMode::Majority { max_cond_size: 1 },
            None,
        );
        assert_eq!(r, Err(Error::MissingTest));
    }

    #[test]
    fn majority_mode_votes() {
        // 0 and 2 separated by {} only -> collider
        let sep = |_: usize, _: usize, s: NodeSet| s.is_empty();
        let out = orient_v_structures(
            &chain_skeleton(),
            &SepsetTable::default(),
            &Knowledge::trivial(3),
            OrientMode::Majority { max_cond_size: 1 },
            Some(&sep),
        )
        .unwrap();
        assert_eq!(out.graph.mark(0, 1), EdgeMark::Out);
        // separated by {} and {1}: exactly half -> ambiguous, left alone
        let sep = |_: usize, _: usize, _: NodeSet| true;
        let out = orient_v_structures(
            &chain_skeleton(),
            &SepsetTable::default(),
            &Knowledge::trivial(3),
            OrientMode::Majority { max_cond_size: 1 },
            Some(&sep),
        )
        .unwrap();
        assert_eq!(out.graph, chain_skeleton());
        assert_eq!(out.conflicts, vec![Conflict::Ambiguous { i: 0, k: 1, j: 2 }]);
    }

    #[test]
    fn meek_r1() {
        let mut g = MixedGraph::empty(3);
        g.add_directed(0, 1);
        g.add_undirected(1, 2);
        let out = apply_meek_rules(&g, &Knowledge::trivial(3));
        assert_eq!(out.graph.mark(1, 2), EdgeMark::Out);
    }

    #[test]
    fn meek_r2() {
        let mut g = MixedGraph::empty(3);
        g.add_directed(0, 1);
        g.add_directed(1, 2);
        g.add_undirected(0, 2);
        let out = apply_meek_rules(&g, &Knowledge::trivial(3));
        assert_eq!(out.graph.mark(0, 2), EdgeMark::Out);
    }

    #[test]
    fn meek_r3() {
        // a - c -> b, a - e -> b, c, e nonadjacent, a - b
        let (a, b, c, e) = (0, 1, 2, 3);
        let mut g = MixedGraph::empty(4);
        g.add_undirected(a, c);
        g.add_undirected(a, e);
        g.add_directed(c, b);
        g.add_directed(e, b);
        g.add_undirected(a, b);
        let out = apply_meek_rules(&g, &Knowledge::trivial(4));
        assert_eq!(out.graph.mark(a, b), EdgeMark::Out);
        assert_eq!(out.graph.mark(a, c), EdgeMark::Undirected);
    }

    #[test]
    fn meek_r4() {
        // a - e -> c -> b, a - c, a - b, e and b nonadjacent
        let (a, b, c, e) = (0, 1, 2, 3);
        let mut g = MixedGraph::empty(4);
        g.add_undirected(a, e);
        g.add_directed(e, c);
        g.add_directed(c, b);
        g.add_undirected(a, c);
        g.add_undirected(a, b);
        let out = apply_meek_rules(&g, &Knowledge::trivial(4));
        assert_eq!(out.graph.mark(a, b), EdgeMark::Out);
    }

    #[test]
    fn tiers_orient_cross_tier_edges() {
        let mut g = MixedGraph::empty(2);
        g.add_undirected(0, 1);
        let k = Knowledge::from_tiers(TierOrder::new(vec![1, 2]).unwrap());
        let out = apply_meek_rules(&g, &k);
        assert_eq!(out.graph.mark(0, 1), EdgeMark::Out);
    }

    #[test]
    fn meek_ignores_bidirected_edges_but_flags_them() {
        let mut g = MixedGraph::empty(3);
        g.set_mark(0, 1, EdgeMark::Bidirected);
        g.add_undirected(1, 2);
        let out = apply_meek_rules(&g, &Knowledge::trivial(3));
        assert!(out.bidirected_present);
        assert_eq!(out.graph, g);
    }
}
