//! Parsing of tier, forbidden-edge, required-adjacency and scope flags
//! against the variable names of a dataset.

use pcsel::graph::{BackgroundKnowledge, Knowledge, TierOrder};
use pcsel::NodeSet;

use crate::error::{CliError, CliResult};

pub fn resolve(names: &[String], name: &str) -> CliResult<usize> {
    names
        .iter()
        .position(|n| n == name.trim())
        .ok_or_else(|| CliError::Config(format!("unknown variable `{}`", name.trim())))
}

/// `"A,B,C:1;D,E:2"`. Every variable must be assigned exactly once.
pub fn parse_tiers(spec: &str, names: &[String]) -> CliResult<TierOrder> {
    let mut tiers: Vec<Option<u32>> = vec![None; names.len()];
    for group in spec.split(';').map(str::trim).filter(|g| !g.is_empty()) {
        let (vars, tier) = group
            .rsplit_once(':')
            .ok_or_else(|| CliError::Config(format!("tier group `{group}` lacks `:tier`")))?;
        let tier: u32 = tier
            .trim()
            .parse()
            .ok()
            .filter(|&t| t >= 1)
            .ok_or_else(|| CliError::Config(format!("bad tier number in `{group}`")))?;
        for v in vars.split(',') {
            let k = resolve(names, v)?;
            if tiers[k].replace(tier).is_some() {
                return Err(CliError::Config(format!("variable `{}` given two tiers", names[k])));
            }
        }
    }
    let missing: Vec<&str> = tiers
        .iter()
        .zip(names)
        .filter(|(t, _)| t.is_none())
        .map(|(_, n)| n.as_str())
        .collect();
    if !missing.is_empty() {
        return Err(CliError::Config(format!("no tier for {}", missing.join(", "))));
    }
    Ok(TierOrder::new(tiers.into_iter().map(Option::unwrap).collect())?)
}

fn parse_pair(spec: &str, sep: &str, names: &[String]) -> CliResult<(usize, usize)> {
    let (a, b) = spec
        .split_once(sep)
        .ok_or_else(|| CliError::Config(format!("`{spec}` is not of the form X{sep}Y")))?;
    Ok((resolve(names, a)?, resolve(names, b)?))
}

/// Everything the flags say about structure.
#[derive(Clone, Debug, Default)]
pub struct KnowledgeSpec<'a> {
    pub tiers: Option<&'a str>,
    pub forbid: &'a [String],
    pub require: &'a [String],
    pub scope: Option<&'a str>,
}

impl KnowledgeSpec<'_> {
    pub fn build(&self, names: &[String]) -> CliResult<Knowledge> {
        let tiers = match self.tiers {
            Some(t) => parse_tiers(t, names)?,
            None => TierOrder::trivial(names.len()),
        };
        let forbidden_edges = self
            .forbid
            .iter()
            .map(|s| parse_pair(s, "->", names))
            .collect::<CliResult<_>>()?;
        let required_adjacencies = self
            .require
            .iter()
            .map(|s| parse_pair(s, "-", names))
            .collect::<CliResult<_>>()?;
        let validity_scope = match self.scope {
            Some(s) => Some(
                s.split(',')
                    .map(|v| resolve(names, v))
                    .collect::<CliResult<NodeSet>>()?,
            ),
            None => None,
        };
        Ok(Knowledge::new(
            tiers,
            BackgroundKnowledge {
                forbidden_edges,
                required_adjacencies,
                validity_scope,
            },
        )?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        ["A", "B", "C", "D"].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn tier_syntax() {
        let t = parse_tiers("A,B:1; C:2;D:3", &names()).unwrap();
        assert_eq!(t.as_slice(), &[1, 1, 2, 3]);
        assert!(parse_tiers("A,B:1;C:2", &names()).is_err());
        assert!(parse_tiers("A,B:1;C,D,A:2", &names()).is_err());
        assert!(parse_tiers("A,B:1;C,E:2;D:2", &names()).is_err());
        assert!(parse_tiers("A,B,C,D", &names()).is_err());
    }

    #[test]
    fn constraints() {
        let forbid = vec!["D->C".to_string()];
        let require = vec!["A-B".to_string()];
        let k = KnowledgeSpec {
            tiers: None,
            forbid: &forbid,
            require: &require,
            scope: Some("B,C,D"),
        }
        .build(&names())
        .unwrap();
        assert_eq!(k.background.forbidden_edges, vec![(3, 2)]);
        assert_eq!(k.background.required_adjacencies, vec![(0, 1)]);
        assert_eq!(k.background.validity_scope, Some(NodeSet::from_iter([1, 2, 3])));
        let bad = vec!["D=>C".to_string()];
        let err = KnowledgeSpec { forbid: &bad, ..Default::default() }.build(&names()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
