use serde::{Deserialize, Serialize};

use crate::{Error, NodeSet, Result};

/// Partial temporal order: one positive tier per node. Edges may never point
/// from a later tier to an earlier one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct TierOrder {
    tiers: Vec<u32>,
}

impl TryFrom<Vec<u32>> for TierOrder {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        TierOrder::new(v)
    }
}

impl From<TierOrder> for Vec<u32> {
    fn from(t: TierOrder) -> Vec<u32> {
        t.tiers
    }
}

impl TierOrder {
    pub fn new(tiers: Vec<u32>) -> Result<Self> {
        if tiers.is_empty() {
            return Err(Error::Config("tier vector is empty".into()));
        }
        if tiers.contains(&0) {
            return Err(Error::Config("tiers must be positive integers".into()));
        }
        Ok(TierOrder { tiers })
    }

    /// Every node in tier 1.
    pub fn trivial(d: usize) -> Self {
        TierOrder { tiers: vec![1; d] }
    }

    pub fn len(&self) -> usize {
        self.tiers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiers.is_empty()
    }

    pub fn tier(&self, i: usize) -> u32 {
        self.tiers[i]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.tiers
    }

    pub fn is_trivial(&self) -> bool {
        self.tiers.windows(2).all(|w| w[0] == w[1])
    }

    /// Nodes in a strictly later tier than both `i` and `j`.
    pub fn later_than_both(&self, i: usize, j: usize) -> NodeSet {
        let t = self.tiers[i].max(self.tiers[j]);
        self.where_tier(|x| x > t)
    }

    /// Nodes in a strictly earlier tier than `i`.
    pub fn earlier_than(&self, i: usize) -> NodeSet {
        let t = self.tiers[i];
        self.where_tier(|x| x < t)
    }

    fn where_tier(&self, pred: impl Fn(u32) -> bool) -> NodeSet {
        self.tiers
            .iter()
            .enumerate()
            .filter(|(_, &x)| pred(x))
            .map(|(k, _)| k)
            .collect()
    }

    /// Tiers restricted to `map` (new index -> old index).
    pub fn restrict(&self, map: &[usize]) -> TierOrder {
        TierOrder {
            tiers: map.iter().map(|&v| self.tiers[v]).collect(),
        }
    }
}

/// User-supplied structural constraints beyond the tier order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackgroundKnowledge {
    /// Directed edges `(from, to)` that may never appear. When both
    /// directions of a pair are listed the adjacency itself is forbidden.
    #[serde(default)]
    pub forbidden_edges: Vec<(usize, usize)>,
    /// Unordered pairs that must be adjacent for a graph to pass screening.
    #[serde(default)]
    pub required_adjacencies: Vec<(usize, usize)>,
    /// If set, CPDAG validity is only checked on the subgraph induced by these nodes.
    #[serde(default)]
    pub validity_scope: Option<NodeSet>,
}

impl BackgroundKnowledge {
    pub fn validate(&self, d: usize) -> Result<()> {
        let check = |v: usize| {
            if v < d {
                Ok(())
            } else {
                Err(Error::NodeOutOfRange { index: v, d })
            }
        };
        for &(a, b) in self.forbidden_edges.iter().chain(&self.required_adjacencies) {
            check(a)?;
            check(b)?;
            if a == b {
                return Err(Error::Config(format!("edge constraint on a single node {a}")));
            }
        }
        if let Some(scope) = self.validity_scope {
            if let Some(v) = scope.iter().find(|&v| v >= d) {
                return Err(Error::NodeOutOfRange { index: v, d });
            }
        }
        Ok(())
    }

    pub fn is_forbidden(&self, from: usize, to: usize) -> bool {
        self.forbidden_edges.contains(&(from, to))
    }

    /// Both directions forbidden, so the pair may not be adjacent at all.
    pub fn adjacency_forbidden(&self, a: usize, b: usize) -> bool {
        self.is_forbidden(a, b) && self.is_forbidden(b, a)
    }
}

/// Tier order plus background knowledge; everything orientation and
/// screening need to know beyond the data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Knowledge {
    pub tiers: TierOrder,
    #[serde(default)]
    pub background: BackgroundKnowledge,
}

impl Knowledge {
    pub fn new(tiers: TierOrder, background: BackgroundKnowledge) -> Result<Self> {
        background.validate(tiers.len())?;
        Ok(Knowledge { tiers, background })
    }

    pub fn trivial(d: usize) -> Self {
        Knowledge {
            tiers: TierOrder::trivial(d),
            background: BackgroundKnowledge::default(),
        }
    }

    pub fn from_tiers(tiers: TierOrder) -> Self {
        Knowledge {
            tiers,
            background: BackgroundKnowledge::default(),
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.tiers.len()
    }

    /// Direction `(from, to)` that background knowledge forces on an edge
    /// between `a` and `b`, if any. Tiers take precedence over forbidden edges.
    pub fn forced_direction(&self, a: usize, b: usize) -> Option<(usize, usize)> {
        let (ta, tb) = (self.tiers.tier(a), self.tiers.tier(b));
        if ta < tb {
            return Some((a, b));
        }
        if tb < ta {
            return Some((b, a));
        }
        let bk = &self.background;
        match (bk.is_forbidden(a, b), bk.is_forbidden(b, a)) {
            (true, false) => Some((b, a)),
            (false, true) => Some((a, b)),
            _ => None,
        }
    }

    /// Whether an arrowhead `from -> to` is permitted.
    pub fn allows(&self, from: usize, to: usize) -> bool {
        self.tiers.tier(from) <= self.tiers.tier(to) && !self.background.is_forbidden(from, to)
    }

    /// Knowledge restricted to the nodes in `map` (new index -> old index).
    /// Validity scope and required adjacencies are dropped.
    pub fn restrict(&self, map: &[usize]) -> Knowledge {
        let pos = |v: usize| map.iter().position(|&m| m == v);
        let forbidden_edges = self
            .background
            .forbidden_edges
            .iter()
            .filter_map(|&(a, b)| Some((pos(a)?, pos(b)?)))
            .collect();
        Knowledge {
            tiers: self.tiers.restrict(map),
            background: BackgroundKnowledge {
                forbidden_edges,
                ..Default::default()
            },
        }
    }
}
