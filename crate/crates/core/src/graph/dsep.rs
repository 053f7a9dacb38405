use super::Dag;
use crate::{Error, NodeSet, Result};

fn ancestors_of_set(dag: &Dag, set: NodeSet) -> NodeSet {
    let mut out = set;
    let mut stack: Vec<usize> = set.iter().collect();
    while let Some(v) = stack.pop() {
        for p in dag.parents(v) {
            if !out.contains(p) {
                out.insert(p);
                stack.push(p);
            }
        }
    }
    out
}

/// Whether `i` and `j` are d-separated by `s` in `dag` (reachability /
/// Bayes-ball search over (node, direction) states).
pub fn d_separated(dag: &Dag, i: usize, j: usize, s: NodeSet) -> Result<bool> {
    let d = dag.n_nodes();
    for v in [i, j].into_iter().chain(s.iter()) {
        if v >= d {
            return Err(Error::NodeOutOfRange { index: v, d });
        }
    }
    if i == j || s.contains(i) || s.contains(j) {
        return Err(Error::Precondition(
            "d-separation needs distinct endpoints outside the conditioning set".into(),
        ));
    }
    let anc = ancestors_of_set(dag, s);
    // visited[v][0]: reached travelling up (from a child); [1]: down (from a parent)
    let mut visited = vec![[false; 2]; d];
    let mut stack = vec![(i, 0usize)];
    while let Some((v, dir)) = stack.pop() {
        if visited[v][dir] {
            continue;
        }
        visited[v][dir] = true;
        if v == j {
            return Ok(false);
        }
        let observed = s.contains(v);
        if dir == 0 {
            if !observed {
                stack.extend(dag.parents(v).iter().map(|p| (p, 0)));
                stack.extend(dag.children(v).iter().map(|c| (c, 1)));
            }
        } else {
            if !observed {
                stack.extend(dag.children(v).iter().map(|c| (c, 1)));
            }
            if anc.contains(v) {
                stack.extend(dag.parents(v).iter().map(|p| (p, 0)));
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_blocked_by_middle() {
        let g = Dag::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(d_separated(&g, 0, 2, NodeSet::singleton(1)).unwrap());
        assert!(!d_separated(&g, 0, 2, NodeSet::EMPTY).unwrap());
    }

    #[test]
    fn collider_blocks_until_conditioned() {
        let g = Dag::new(3, &[(0, 1), (2, 1)]).unwrap();
        assert!(d_separated(&g, 0, 2, NodeSet::EMPTY).unwrap());
        assert!(!d_separated(&g, 0, 2, NodeSet::singleton(1)).unwrap());
    }

    #[test]
    fn descendant_of_collider_opens_path() {
        let g = Dag::new(4, &[(0, 1), (2, 1), (1, 3)]).unwrap();
        assert!(!d_separated(&g, 0, 2, NodeSet::singleton(3)).unwrap());
    }

    #[test]
    fn bad_arguments() {
        let g = Dag::new(3, &[(0, 1)]).unwrap();
        assert!(d_separated(&g, 0, 5, NodeSet::EMPTY).is_err());
        assert!(d_separated(&g, 0, 1, NodeSet::singleton(0)).is_err());
    }
}
