#![allow(dead_code)]

use pcsel::graph::{Dag, MixedGraph, TierOrder};
use pcsel::NodeSet;
use rand::seq::SliceRandom;
use rand::Rng;

/// DAG over a random permutation of the nodes, each forward pair an edge
/// with probability `p`.
pub fn random_dag<R: Rng>(d: usize, p: f64, rng: &mut R) -> Dag {
    let mut order: Vec<usize> = (0..d).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for a in 0..d {
        for b in a + 1..d {
            if rng.gen_bool(p) {
                edges.push((order[a], order[b]));
            }
        }
    }
    Dag::new(d, &edges).unwrap()
}

/// Random tiers consistent with `dag`: tiers never decrease along a
/// topological order.
pub fn consistent_tiers<R: Rng>(dag: &Dag, rng: &mut R) -> TierOrder {
    let d = dag.n_nodes();
    let mut tiers = vec![1u32; d];
    let mut current = 1;
    for v in dag.topological_order() {
        if rng.gen_bool(0.3) {
            current += 1;
        }
        tiers[v] = current;
    }
    // a node must not be in an earlier tier than any parent
    for v in dag.topological_order() {
        for p in dag.parents(v) {
            tiers[v] = tiers[v].max(tiers[p]);
        }
    }
    TierOrder::new(tiers).unwrap()
}

/// d-separation by enumerating every simple path between `i` and `j`.
pub fn dsep_by_paths(dag: &Dag, i: usize, j: usize, s: NodeSet) -> bool {
    let d = dag.n_nodes();
    let desc_or_self: Vec<NodeSet> = (0..d).map(|v| dag.descendants(v).with(v)).collect();
    let mut path = vec![i];
    !active_path_exists(dag, j, s, &desc_or_self, &mut path)
}

fn active_path_exists(
    dag: &Dag,
    target: usize,
    s: NodeSet,
    desc_or_self: &[NodeSet],
    path: &mut Vec<usize>,
) -> bool {
    let last = *path.last().unwrap();
    if last == target {
        return path_is_active(dag, path, s, desc_or_self);
    }
    for next in 0..dag.n_nodes() {
        if dag.is_adjacent(last, next) && !path.contains(&next) {
            path.push(next);
            let found = active_path_exists(dag, target, s, desc_or_self, path);
            path.pop();
            if found {
                return true;
            }
        }
    }
    false
}

fn path_is_active(dag: &Dag, path: &[usize], s: NodeSet, desc_or_self: &[NodeSet]) -> bool {
    for w in path.windows(3) {
        let (a, b, c) = (w[0], w[1], w[2]);
        let collider = dag.has_edge(a, b) && dag.has_edge(c, b);
        if collider {
            if desc_or_self[b].intersection(s).is_empty() {
                return false;
            }
        } else if s.contains(b) {
            return false;
        }
    }
    true
}

/// All DAGs with the skeleton and v-structures of `c`'s representative
/// class, found by trying every orientation of the undirected edges.
pub fn brute_force_class(c: &MixedGraph) -> Vec<Dag> {
    use pcsel::graph::{v_structures, EdgeMark};
    let d = c.n_nodes();
    let mut fixed = Vec::new();
    let mut free = Vec::new();
    for (a, b, m) in c.edges() {
        match m {
            EdgeMark::Out => fixed.push((a, b)),
            EdgeMark::In => fixed.push((b, a)),
            EdgeMark::Undirected => free.push((a, b)),
            _ => panic!("unexpected mark"),
        }
    }
    let reference = pcsel::graph::find_extension(c).expect("extendable");
    let target = v_structures(&reference);
    let mut out = Vec::new();
    for mask in 0u64..(1 << free.len()) {
        let mut edges = fixed.clone();
        for (k, &(a, b)) in free.iter().enumerate() {
            edges.push(if mask >> k & 1 == 1 { (b, a) } else { (a, b) });
        }
        if let Ok(dag) = Dag::new(d, &edges) {
            if v_structures(&dag) == target {
                out.push(dag);
            }
        }
    }
    out
}
