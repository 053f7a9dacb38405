//! Text formats for mixed graphs.
//!
//! Edge list:
//!
//! ```text
//! nodes 3
//! 0 -> 1
//! 1 -- 2
//! ```
//!
//! one edge per line (`->`, `--` or `<->`), ordered by node pair. DOT output
//! uses `dir=none` for undirected and `dir=both` for bidirected edges.

use std::fmt::Write;

use super::{EdgeMark, MixedGraph};
use crate::{Error, Result, MAX_NODES};

fn edge_line(i: usize, j: usize, m: EdgeMark) -> (usize, &'static str, usize) {
    match m {
        EdgeMark::Out => (i, "->", j),
        EdgeMark::In => (j, "->", i),
        EdgeMark::Undirected => (i, "--", j),
        EdgeMark::Bidirected => (i, "<->", j),
        EdgeMark::None => unreachable!("edges() skips absent pairs"),
    }
}

pub fn to_edge_list(g: &MixedGraph) -> String {
    let mut out = format!("nodes {}\n", g.n_nodes());
    for (i, j, m) in g.edges() {
        let (a, op, b) = edge_line(i, j, m);
        writeln!(out, "{a} {op} {b}").unwrap();
    }
    out
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_node(tok: &str, d: usize, line: usize) -> Result<usize> {
    let v: usize = tok
        .parse()
        .map_err(|_| parse_err(line, format!("bad node index `{tok}`")))?;
    if v >= d {
        return Err(parse_err(line, format!("node {v} out of range (nodes {d})")));
    }
    Ok(v)
}

fn apply_edge(g: &mut MixedGraph, a: usize, op: &str, b: usize, line: usize) -> Result<()> {
    if a == b {
        return Err(parse_err(line, "self-loop"));
    }
    if g.is_adjacent(a, b) {
        return Err(parse_err(line, format!("second edge between {a} and {b}")));
    }
    let mark = match op {
        "->" => EdgeMark::Out,
        "--" => EdgeMark::Undirected,
        "<->" => EdgeMark::Bidirected,
        _ => return Err(parse_err(line, format!("unknown edge operator `{op}`"))),
    };
    g.set_mark(a, b, mark);
    Ok(())
}

pub fn parse_edge_list(text: &str) -> Result<MixedGraph> {
    let mut g: Option<MixedGraph> = None;
    for (no, raw) in text.lines().enumerate() {
        let line = no + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = s.split_whitespace().collect();
        match (&mut g, toks.as_slice()) {
            (None, ["nodes", n]) => {
                let d: usize = n.parse().map_err(|_| parse_err(line, "bad node count"))?;
                if d > MAX_NODES {
                    return Err(parse_err(line, format!("at most {MAX_NODES} nodes supported")));
                }
                g = Some(MixedGraph::empty(d));
            }
            (None, _) => return Err(parse_err(line, "expected `nodes <count>` header")),
            (Some(g), [a, op, b]) => {
                let d = g.n_nodes();
                let (a, b) = (parse_node(a, d, line)?, parse_node(b, d, line)?);
                apply_edge(g, a, op, b, line)?;
            }
            (Some(_), _) => return Err(parse_err(line, format!("cannot parse `{s}`"))),
        }
    }
    g.ok_or_else(|| parse_err(0, "missing `nodes <count>` header"))
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT digraph; `names` become node labels.
pub fn to_dot(g: &MixedGraph, names: Option<&[String]>) -> String {
    let mut out = String::from("digraph {\n");
    for v in 0..g.n_nodes() {
        match names.and_then(|n| n.get(v)) {
            Some(name) => writeln!(out, "  {v} [label=\"{}\"];", escape(name)).unwrap(),
            None => writeln!(out, "  {v};").unwrap(),
        }
    }
    for (i, j, m) in g.edges() {
        let (a, op, b) = edge_line(i, j, m);
        let attr = match op {
            "--" => " [dir=none]",
            "<->" => " [dir=both]",
            _ => "",
        };
        writeln!(out, "  {a} -> {b}{attr};").unwrap();
    }
    out.push_str("}\n");
    out
}

fn unescape(s: &str) -> String {
    let mut out = String::new();
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            if let Some(n) = chars.next() {
                out.push(n);
            }
        } else {
            out.push(c);
        }
    }
    out
}

/// Parse the DOT subset written by [`to_dot`]. Returns the graph and the
/// node labels, if every node had one.
pub fn parse_dot(text: &str) -> Result<(MixedGraph, Option<Vec<String>>)> {
    let mut nodes: Vec<(usize, Option<String>)> = Vec::new();
    let mut edges: Vec<(usize, usize, &str, usize)> = Vec::new();
    let mut opened = false;
    for (no, raw) in text.lines().enumerate() {
        let line = no + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with("//") {
            continue;
        }
        if !opened {
            if s.starts_with("digraph") && s.ends_with('{') {
                opened = true;
                continue;
            }
            return Err(parse_err(line, "expected `digraph {`"));
        }
        if s == "}" {
            break;
        }
        let body = s
            .strip_suffix(';')
            .ok_or_else(|| parse_err(line, "missing `;`"))?;
        if let Some((lhs, rhs)) = body.split_once(" -> ") {
            let (target, attr) = match rhs.split_once(' ') {
                Some((t, a)) => (t, a.trim()),
                None => (rhs, ""),
            };
            let op = match attr {
                "" => "->",
                "[dir=none]" => "--",
                "[dir=both]" => "<->",
                other => return Err(parse_err(line, format!("unsupported attribute {other}"))),
            };
            let a = lhs.trim().parse().map_err(|_| parse_err(line, "bad node"))?;
            let b = target.parse().map_err(|_| parse_err(line, "bad node"))?;
            edges.push((line, a, op, b));
        } else {
            let (id, label) = match body.split_once(' ') {
                Some((id, attr)) => {
                    let label = attr
                        .strip_prefix("[label=\"")
                        .and_then(|r| r.strip_suffix("\"]"))
                        .ok_or_else(|| parse_err(line, "unsupported node attribute"))?;
                    (id, Some(unescape(label)))
                }
                None => (body, None),
            };
            let id: usize = id.parse().map_err(|_| parse_err(line, "bad node id"))?;
            if id != nodes.len() {
                return Err(parse_err(line, "nodes must be listed in order"));
            }
            nodes.push((id, label));
        }
    }
    let d = nodes.len();
    if d > MAX_NODES {
        return Err(parse_err(0, format!("at most {MAX_NODES} nodes supported")));
    }
    let mut g = MixedGraph::empty(d);
    for (line, a, op, b) in edges {
        if a >= d || b >= d {
            return Err(parse_err(line, "edge references unknown node"));
        }
        apply_edge(&mut g, a, op, b, line)?;
    }
    let labels: Option<Vec<String>> = nodes.into_iter().map(|(_, l)| l).collect();
    Ok((g, labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> MixedGraph {
        let mut g = MixedGraph::empty(4);
        g.add_directed(2, 0);
        g.add_undirected(1, 2);
        g.set_mark(1, 3, EdgeMark::Bidirected);
        g.add_directed(0, 3);
        g
    }

    #[test]
    fn edge_list_golden() {
        let text = to_edge_list(&sample());
        assert_eq!(text, "nodes 4\n2 -> 0\n0 -> 3\n1 -- 2\n1 <-> 3\n");
        let back = parse_edge_list(&text).unwrap();
        assert_eq!(back, sample());
        assert_eq!(to_edge_list(&back), text);
    }

    #[test]
    fn dot_round_trip_with_labels() {
        let names: Vec<String> = ["Raf", "Mek", "E\"rk", "Akt"].iter().map(|s| s.to_string()).collect();
        let text = to_dot(&sample(), Some(&names));
        let (g, labels) = parse_dot(&text).unwrap();
        assert_eq!(g, sample());
        assert_eq!(labels.as_deref(), Some(names.as_slice()));
        assert_eq!(to_dot(&g, labels.as_deref()), text);
        let plain = to_dot(&sample(), None);
        assert!(plain.contains("  1 -> 2 [dir=none];\n"));
        assert_eq!(parse_dot(&plain).unwrap().1, None);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_edge_list("nodes 3\n0 -> 1\n1 => 2\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 3, msg: "unknown edge operator `=>`".into() });
        assert!(matches!(parse_edge_list("0 -> 1"), Err(Error::Parse { line: 1, .. })));
        assert!(parse_edge_list("nodes 2\n0 -> 1\n1 -> 0\n").is_err());
    }
}
