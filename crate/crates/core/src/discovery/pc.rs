use serde::{Deserialize, Serialize};

use super::{CiTest, Decision};
use crate::graph::{
    apply_meek_rules, orient_v_structures, Conflict, Knowledge, MixedGraph, OrientMode,
    SepsetTable,
};
use crate::{Error, NodeSet, Result};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PcOptions {
    /// Largest conditioning set tried; unlimited when `None`.
    pub max_cond_size: Option<usize>,
    pub orient_mode: OrientMode,
    /// Keep every adjacency-search test in the diagnostics.
    #[serde(default)]
    pub record_trace: bool,
}

/// One adjacency-search test as performed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestRecord {
    pub i: usize,
    pub j: usize,
    pub s: NodeSet,
    pub statistic: Option<f64>,
    pub decision: Decision,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub tests_performed: usize,
    /// Tests that could not be carried out; the edge was kept.
    pub cannot_test: usize,
    /// Largest conditioning-set size at which tests ran.
    pub max_level: usize,
    pub conflicts: Vec<Conflict>,
    pub bidirected_present: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TestRecord>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscoveryResult {
    #[serde(with = "edge_list_serde")]
    pub graph: MixedGraph,
    pub sepsets: SepsetTable,
    pub diagnostics: Diagnostics,
}

mod edge_list_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::graph::{parse_edge_list, to_edge_list, MixedGraph};

    pub fn serialize<S: Serializer>(g: &MixedGraph, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_edge_list(g))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<MixedGraph, D::Error> {
        let text = String::deserialize(d)?;
        parse_edge_list(&text).map_err(serde::de::Error::custom)
    }
}

/// Adjacency pool for testing `i - j`: the level snapshot of `i`'s
/// neighbours minus `j` and minus nodes later than both endpoints.
fn eligible(snapshot: NodeSet, i: usize, j: usize, knowledge: &Knowledge) -> NodeSet {
    snapshot
        .without(j)
        .difference(knowledge.tiers.later_than_both(i, j))
}

/// Tiered PC-stable.
///
/// Starts from the complete undirected graph (minus pairs whose adjacency is
/// forbidden in both directions). At each level `s` the adjacency sets are
/// frozen before any test; for every still-adjacent ordered pair `(i, j)`,
/// subsets `S` of size `s` of the frozen `Adj(i) \ {j}` with no node later
/// than both `i` and `j` are tested until one shows independence, which
/// deletes the edge and records `S`. The search stops once no adjacent pair
/// has `s` eligible neighbours, or `s` exceeds `max_cond_size`. Colliders
/// and Meek's rules then orient the skeleton without ever contradicting
/// tiers or forbidden edges.
///
/// A test that cannot be carried out keeps the edge.
pub fn pc_stable_tiered(
    test: &dyn CiTest,
    knowledge: &Knowledge,
    opts: &PcOptions,
) -> Result<DiscoveryResult> {
    let d = test.n_vars();
    if knowledge.n_nodes() != d {
        return Err(Error::Config(format!(
            "tier vector has {} entries for {d} variables",
            knowledge.n_nodes()
        )));
    }
    knowledge.background.validate(d)?;

    let mut g = MixedGraph::try_empty(d)?;
    for a in 0..d {
        for b in a + 1..d {
            if !knowledge.background.adjacency_forbidden(a, b) {
                g.add_undirected(a, b);
            }
        }
    }
    let mut sepsets = SepsetTable::default();
    let mut diag = Diagnostics {
        trace: opts.record_trace.then(Vec::new),
        ..Default::default()
    };

    let mut level = 0usize;
    loop {
        if opts.max_cond_size.is_some_and(|m| level > m) {
            break;
        }
        let snapshot: Vec<NodeSet> = (0..d).map(|v| g.adjacent(v)).collect();
        for i in 0..d {
            for j in snapshot[i] {
                if !g.is_adjacent(i, j) {
                    continue;
                }
                let pool = eligible(snapshot[i], i, j, knowledge);
                if pool.len() < level {
                    continue;
                }
                diag.max_level = level;
                for cand in pool.subsets_of_size(level) {
                    let out = test.test(i, j, cand);
                    diag.tests_performed += 1;
                    if let Some(trace) = diag.trace.as_mut() {
                        trace.push(TestRecord {
                            i,
                            j,
                            s: cand,
                            statistic: out.statistic,
                            decision: out.decision,
                        });
                    }
                    match out.decision {
                        Decision::Independent => {
                            g.remove_edge(i, j);
                            sepsets.insert(i, j, cand);
                            break;
                        }
                        Decision::CannotTest => diag.cannot_test += 1,
                        Decision::Dependent => {}
                    }
                }
            }
        }
        level += 1;
        let more = (0..d).any(|i| {
            let adj = g.adjacent(i);
            adj.iter()
                .any(|j| eligible(adj, i, j, knowledge).len() >= level)
        });
        if !more {
            break;
        }
    }

    let separates = |i: usize, j: usize, s: NodeSet| test.test(i, j, s).decision == Decision::Independent;
    let oriented = orient_v_structures(&g, &sepsets, knowledge, opts.orient_mode, Some(&separates))?;
    let meek = apply_meek_rules(&oriented.graph, knowledge);
    diag.conflicts = oriented.conflicts;
    diag.conflicts.extend(meek.conflicts);
    diag.bidirected_present = meek.bidirected_present;
    Ok(DiscoveryResult {
        graph: meek.graph,
        sepsets,
        diagnostics: diag,
    })
}
