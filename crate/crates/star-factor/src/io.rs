//! Graph and packing file formats.
//!
//! Graph files are UTF-8 text: a `graph <n>` header, then one `e <u> <v>`
//! line per edge with `0 <= u < v < n`, LF-terminated; `#` starts a comment.
//! Duplicate edge lines are a parse error. Packing files use the format in
//! [`crate::packing`].

use std::collections::BTreeSet;
use std::path::Path;

use crate::graph::Graph;
use crate::packing::StarPacking;
use crate::{Error, Result};

/// Parses the graph text format.
pub fn graph_from_text(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        match tokens.next() {
            Some("graph") => {
                if n.is_some() {
                    return Err(Error::Parse {
                        line,
                        msg: "duplicate graph header".into(),
                    });
                }
                let v = tokens.next().ok_or_else(|| Error::Parse {
                    line,
                    msg: "missing vertex count".into(),
                })?;
                n = Some(v.parse().map_err(|_| Error::Parse {
                    line,
                    msg: format!("bad vertex count '{v}'"),
                })?);
                if tokens.next().is_some() {
                    return Err(Error::Parse {
                        line,
                        msg: "trailing tokens after header".into(),
                    });
                }
            }
            Some("e") => {
                let n = n.ok_or_else(|| Error::Parse {
                    line,
                    msg: "edge before graph header".into(),
                })?;
                let mut parse = |name: &str| -> Result<usize> {
                    tokens
                        .next()
                        .ok_or_else(|| Error::Parse {
                            line,
                            msg: format!("missing {name}"),
                        })?
                        .parse()
                        .map_err(|_| Error::Parse {
                            line,
                            msg: format!("bad {name}"),
                        })
                };
                let u = parse("endpoint u")?;
                let v = parse("endpoint v")?;
                if tokens.next().is_some() {
                    return Err(Error::Parse {
                        line,
                        msg: "trailing tokens after edge".into(),
                    });
                }
                if u >= v {
                    return Err(Error::Parse {
                        line,
                        msg: format!("edge must satisfy u < v, got ({u},{v})"),
                    });
                }
                if v >= n {
                    return Err(Error::Parse {
                        line,
                        msg: format!("endpoint {v} out of range for n={n}"),
                    });
                }
                if !seen.insert((u, v)) {
                    return Err(Error::Parse {
                        line,
                        msg: format!("duplicate edge ({u},{v})"),
                    });
                }
                edges.push((u, v));
            }
            Some(other) => {
                return Err(Error::Parse {
                    line,
                    msg: format!("unknown directive '{other}'"),
                })
            }
            None => unreachable!(),
        }
    }
    let n = n.ok_or_else(|| Error::Parse {
        line: 0,
        msg: "missing graph header".into(),
    })?;
    Graph::from_edges(n, &edges)
}

/// Canonical text rendering: header, then edges in lexicographic order.
pub fn graph_to_text(g: &Graph) -> String {
    let mut out = format!("graph {}\n", g.vertex_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    out
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    graph_from_text(&std::fs::read_to_string(path)?)
}

pub fn write_graph(path: &Path, g: &Graph) -> Result<()> {
    Ok(std::fs::write(path, graph_to_text(g))?)
}

pub fn read_packing(path: &Path) -> Result<StarPacking> {
    crate::packing::from_text(&std::fs::read_to_string(path)?)
}

pub fn write_packing(path: &Path, p: &StarPacking) -> Result<()> {
    Ok(std::fs::write(path, crate::packing::to_text(p))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 4)]).unwrap();
        let text = graph_to_text(&g);
        assert_eq!(text, "graph 5\ne 0 1\ne 0 4\ne 1 2\n");
        assert_eq!(graph_from_text(&text).unwrap(), g);
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let text = "# a graph\ngraph 3\n\ne 0 1 # first\ne 1 2\n";
        assert_eq!(graph_from_text(text).unwrap().edge_count(), 2);
    }

    #[test]
    fn parse_errors() {
        assert!(graph_from_text("e 0 1\n").is_err()); // edge before header
        assert!(graph_from_text("graph 3\ne 1 0\n").is_err()); // u >= v
        assert!(graph_from_text("graph 3\ne 0 3\n").is_err()); // out of range
        assert!(graph_from_text("graph 3\ne 0 1\ne 0 1\n").is_err()); // duplicate
        assert!(graph_from_text("graph 3\ne 0 0\n").is_err()); // loop
        assert!(graph_from_text("graph x\n").is_err());
        assert!(graph_from_text("").is_err());
    }
}
