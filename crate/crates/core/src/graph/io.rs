//! DIMACS-style edge lists plus a JSON metadata sidecar.
//!
//! ```text
//! p edge <N> <M>
//! e <u> <v>        (1-based, u < v, sorted)
//! ```
//!
//! The sidecar lives at `<path>.meta.json`.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

pub const GENERATOR_VERSION: &str = concat!("capforge ", env!("CARGO_PKG_VERSION"));

/// Sidecar metadata describing how a graph file was produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphMeta {
    pub construction: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu_list: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(rename = "N")]
    pub vertex_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none", rename = "N1")]
    pub first_size: Option<usize>,
    /// 0-based `[u, v]` pairs with `u < v`.
    #[serde(default)]
    pub removed_edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<GraphMeta>,
    pub generator_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<serde_json::Value>,
}

impl GraphMeta {
    pub fn plain(vertex_count: usize) -> Self {
        GraphMeta {
            construction: "plain".into(),
            nu: None,
            nu_list: None,
            n: None,
            vertex_count,
            seed: None,
            seeds: None,
            alpha: None,
            first_size: None,
            removed_edges: Vec::new(),
            factors: Vec::new(),
            generator_version: GENERATOR_VERSION.into(),
            config: None,
        }
    }

    pub fn sidecar_path(graph_path: &Path) -> PathBuf {
        let mut s = graph_path.as_os_str().to_owned();
        s.push(".meta.json");
        PathBuf::from(s)
    }
}

pub fn write_dimacs<W: Write>(g: &Graph, out: W) -> std::io::Result<()> {
    let mut out = BufWriter::new(out);
    writeln!(out, "p edge {} {}", g.vertex_count(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1)?;
    }
    out.flush()
}

/// Parses the edge-list format. `origin` is only used in error messages.
pub fn read_dimacs<R: Read>(input: R, origin: &Path) -> Result<Graph> {
    let reader = BufReader::new(input);
    let parse_err = |line: usize, message: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(origin, e))?;
        let mut fields = line.split_whitespace();
        match fields.next() {
            None | Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(parse_err(lineno, "duplicate header".into()));
                }
                let kind = fields.next();
                if !matches!(kind, Some("edge") | Some("col")) {
                    return Err(parse_err(
                        lineno,
                        format!("unsupported problem kind {kind:?}"),
                    ));
                }
                let n = parse_field(fields.next(), lineno, "vertex count", &parse_err)?;
                let m = parse_field(fields.next(), lineno, "edge count", &parse_err)?;
                if n == 0 {
                    return Err(parse_err(lineno, "vertex count must be positive".into()));
                }
                header = Some((n, m));
            }
            Some("e") => {
                let Some((n, _)) = header else {
                    return Err(parse_err(lineno, "edge line before header".into()));
                };
                let u = parse_field(fields.next(), lineno, "endpoint", &parse_err)?;
                let v = parse_field(fields.next(), lineno, "endpoint", &parse_err)?;
                for x in [u, v] {
                    if x == 0 || x > n {
                        return Err(parse_err(lineno, format!("endpoint {x} outside 1..={n}")));
                    }
                }
                if u == v {
                    return Err(parse_err(lineno, format!("self-loop on {u}")));
                }
                edges.push((u - 1, v - 1));
            }
            Some(other) => return Err(parse_err(lineno, format!("unknown line type {other:?}"))),
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err(0, "missing `p edge` header".into()))?;
    if edges.len() != m {
        return Err(parse_err(
            0,
            format!("header declares {m} edges but file lists {}", edges.len()),
        ));
    }
    let g = Graph::from_edges(n, &edges)?;
    if g.edge_count() != m {
        return Err(parse_err(0, "duplicate edge lines".into()));
    }
    Ok(g)
}

fn parse_field(
    field: Option<&str>,
    line: usize,
    what: &str,
    err: &dyn Fn(usize, String) -> Error,
) -> Result<usize> {
    field
        .ok_or_else(|| err(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| err(line, format!("malformed {what}")))
}

/// Writes the graph file and, when given, its metadata sidecar.
pub fn serialize(path: &Path, g: &Graph, meta: Option<&GraphMeta>) -> Result<()> {
    if let Some(meta) = meta {
        if meta.vertex_count != g.vertex_count() {
            return Err(Error::Metadata(format!(
                "metadata N={} but graph has {} vertices",
                meta.vertex_count,
                g.vertex_count()
            )));
        }
    }
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_dimacs(g, file).map_err(|e| Error::io(path, e))?;
    if let Some(meta) = meta {
        let side = GraphMeta::sidecar_path(path);
        let mut text = serde_json::to_string_pretty(meta)?;
        text.push('\n');
        fs::write(&side, text).map_err(|e| Error::io(&side, e))?;
    }
    Ok(())
}

/// Reads a graph file and its sidecar, if one exists.
pub fn deserialize(path: &Path) -> Result<(Graph, Option<GraphMeta>)> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let g = read_dimacs(file, path)?;
    let side = GraphMeta::sidecar_path(path);
    let meta = match fs::read_to_string(&side) {
        Ok(text) => {
            let meta: GraphMeta = serde_json::from_str(&text)?;
            if meta.vertex_count != g.vertex_count() {
                return Err(Error::Metadata(format!(
                    "{}: N={} disagrees with header N={}",
                    side.display(),
                    meta.vertex_count,
                    g.vertex_count()
                )));
            }
            Some(meta)
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => None,
        Err(e) => return Err(Error::io(&side, e)),
    };
    Ok((g, meta))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Graph> {
        read_dimacs(text.as_bytes(), Path::new("mem"))
    }

    #[test]
    fn c5_text_is_sorted_and_one_based() {
        let mut buf = Vec::new();
        write_dimacs(&Graph::cycle(5).unwrap(), &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "p edge 5 5\ne 1 2\ne 1 5\ne 2 3\ne 3 4\ne 4 5\n"
        );
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(parse("p edge 3 1\ne 1 4\n").is_err());
        assert!(parse("p edge 3 1\ne 0 2\n").is_err());
        assert!(parse("p edge 3 1\ne 2 2\n").is_err());
        assert!(parse("p edge 3 2\ne 1 2\n").is_err());
        assert!(parse("e 1 2\np edge 3 1\n").is_err());
        assert!(parse("p edge 3 2\ne 1 2\ne 2 1\n").is_err());
        assert!(parse("p edge 3 1\nx 1 2\n").is_err());
        assert!(parse("").is_err());
        let g = parse("c comment\np edge 3 1\n\ne 1 3\n").unwrap();
        assert!(g.has_edge(0, 2));
    }

    #[test]
    fn round_trip_with_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c5.col");
        let g = Graph::cycle(5).unwrap();
        let mut meta = GraphMeta::plain(5);
        meta.removed_edges = vec![[0, 2]];
        serialize(&path, &g, Some(&meta)).unwrap();
        let (back, m) = deserialize(&path).unwrap();
        assert_eq!(back, g);
        assert_eq!(m, Some(meta));

        let bad = GraphMeta::plain(6);
        assert!(serialize(&path, &g, Some(&bad)).is_err());
    }

    #[test]
    fn sidecar_disagreeing_with_header_fails() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.col");
        serialize(&path, &Graph::cycle(5).unwrap(), None).unwrap();
        let side = GraphMeta::sidecar_path(&path);
        fs::write(&side, serde_json::to_string(&GraphMeta::plain(7)).unwrap()).unwrap();
        assert!(matches!(deserialize(&path), Err(Error::Metadata(_))));
        fs::write(&side, "{not json").unwrap();
        assert!(deserialize(&path).is_err());
    }
}
