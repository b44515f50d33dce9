//! Edge-list and dense-matrix text formats.
//!
//! Edge lists hold one `u v` pair of whitespace-separated node ids per line.
//! Lines starting with `#` are comments, except for two optional headers:
//!
//! * `# n=<count>` declares the node count, so isolated nodes survive. When
//!   this header is present, no `# nodes:` line is given and every id is an
//!   integer below `count`, ids are used directly as indices.
//! * `# nodes: <id> <id> ...` declares node ids in index order.
//!
//! Otherwise ids get indices in order of first appearance. Matrices are
//! written as `n` lines of `n` comma-separated decimals.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;

use super::graph::Graph;
use crate::error::{Error, Result};

/// Bidirectional map between node ids and indices `0..len`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeMap {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl NodeMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fails on duplicate names.
    pub fn from_names<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut map = Self::new();
        for name in names {
            let name = name.into();
            if map.index.contains_key(&name) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate node id {name:?}"
                )));
            }
            map.insert(name);
        }
        Ok(map)
    }

    /// Index of `name`, registering it at the end if new.
    pub fn insert(&mut self, name: String) -> usize {
        if let Some(&i) = self.index.get(&name) {
            return i;
        }
        let i = self.names.len();
        self.index.insert(name.clone(), i);
        self.names.push(name);
        i
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    fn numbered(n: usize) -> Self {
        Self::from_names((0..n).map(|i| i.to_string())).expect("distinct integers")
    }
}

/// Result of parsing an edge list, with normalization counters.
#[derive(Debug, Clone)]
pub struct EdgeListRead {
    pub graph: Graph,
    pub self_loops: usize,
    pub duplicate_edges: usize,
}

struct RawEdgeList {
    declared_n: Option<usize>,
    declared_nodes: Option<Vec<String>>,
    edges: Vec<(String, String, usize)>,
}

fn parse_raw(path: &Path, text: &str) -> Result<RawEdgeList> {
    let mut raw = RawEdgeList {
        declared_n: None,
        declared_nodes: None,
        edges: Vec::new(),
    };
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(count) = comment.strip_prefix("n=") {
                let n = count.trim().parse::<usize>().map_err(|_| Error::Parse {
                    path: path.to_path_buf(),
                    line: lineno + 1,
                    msg: format!("bad node-count header {count:?}"),
                })?;
                raw.declared_n = Some(n);
            } else if let Some(ids) = comment.strip_prefix("nodes:") {
                raw.declared_nodes = Some(ids.split_whitespace().map(str::to_owned).collect());
            }
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: lineno + 1,
                msg: format!("expected two node ids, found {} tokens", tokens.len()),
            });
        }
        raw.edges
            .push((tokens[0].to_owned(), tokens[1].to_owned(), lineno + 1));
    }
    Ok(raw)
}

/// Read an undirected simple graph from an edge-list file.
///
/// With `node_map`, ids are resolved through it (so several files can share
/// one index space) and unknown ids are an error. Self-loops are dropped and
/// counted; duplicate edges collapse.
pub fn read_edge_list(path: impl AsRef<Path>, node_map: Option<&NodeMap>) -> Result<EdgeListRead> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let raw = parse_raw(path, &text)?;

    let mut map = match (node_map, &raw.declared_nodes) {
        (Some(m), _) => m.clone(),
        (None, Some(ids)) => NodeMap::from_names(ids.iter().cloned())?,
        (None, None) => NodeMap::new(),
    };
    let integer_ids = node_map.is_none()
        && raw.declared_nodes.is_none()
        && raw.declared_n.is_some_and(|n| {
            raw.edges.iter().all(|(u, v, _)| {
                [u, v]
                    .iter()
                    .all(|id| id.parse::<usize>().is_ok_and(|i| i < n))
            })
        });
    if integer_ids {
        map = NodeMap::numbered(raw.declared_n.unwrap_or(0));
    }

    let mut pairs = Vec::with_capacity(raw.edges.len());
    for (u, v, _) in &raw.edges {
        let resolve = |map: &mut NodeMap, id: &String| -> Result<usize> {
            if node_map.is_some() || integer_ids {
                map.get(id).ok_or_else(|| Error::UnknownNode(id.clone()))
            } else {
                Ok(map.insert(id.clone()))
            }
        };
        let a = resolve(&mut map, u)?;
        let b = resolve(&mut map, v)?;
        pairs.push((a, b));
    }

    // Isolated nodes beyond the named ones get generated ids.
    if let Some(n) = raw.declared_n {
        let mut k = 0;
        while map.len() < n {
            map.insert(format!("_isolated{k}"));
            k += 1;
        }
    }

    let n = map.len();
    let mut graph = Graph::empty(n);
    let mut self_loops = 0;
    let mut duplicate_edges = 0;
    for (a, b) in pairs {
        if a == b {
            self_loops += 1;
        } else if graph.has_edge(a, b) {
            duplicate_edges += 1;
        } else {
            graph.add_edge(a, b);
        }
    }
    if self_loops > 0 {
        log::warn!("{}: dropped {self_loops} self-loop(s)", path.display());
    }
    Ok(EdgeListRead {
        graph: graph.with_labels(map),
        self_loops,
        duplicate_edges,
    })
}

/// One node id per line; blank lines and `#` comments ignored.
pub fn read_node_map(path: impl AsRef<Path>) -> Result<NodeMap> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    NodeMap::from_names(
        text.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#')),
    )
}

/// Write an edge list that [`read_edge_list`] reads back to the same graph.
pub fn write_graph(path: impl AsRef<Path>, graph: &Graph) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    let _ = writeln!(out, "# n={}", graph.n());
    match graph.labels() {
        Some(labels) => {
            let _ = writeln!(out, "# nodes: {}", labels.names().join(" "));
            for (u, v) in graph.edges() {
                let _ = writeln!(out, "{} {}", labels.name(u), labels.name(v));
            }
        }
        None => {
            for (u, v) in graph.edges() {
                let _ = writeln!(out, "{u} {v}");
            }
        }
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Dense CSV; values use the shortest representation that round-trips exactly.
pub fn write_matrix(path: impl AsRef<Path>, m: &DMatrix<f64>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| m[(i, j)].to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<DMatrix<f64>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                line: lineno + 1,
                msg: e.to_string(),
            })?;
        rows.push(row);
    }
    let n = rows.len();
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            msg: format!("row has {} entries, expected {n}", r.len()),
        });
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file_with(contents: &str) -> tempfile::NamedTempFile {
        let f = tempfile::NamedTempFile::new().unwrap();
        fs::write(f.path(), contents).unwrap();
        f
    }

    #[test]
    fn parses_first_appearance_order() {
        let f = file_with("a b\nb c\n");
        let read = read_edge_list(f.path(), None).unwrap();
        let g = &read.graph;
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(g.labels().unwrap().names(), ["a", "b", "c"]);
    }

    #[test]
    fn drops_self_loops_with_count() {
        let f = file_with("# comment\na a\na b\nb a\n");
        let read = read_edge_list(f.path(), None).unwrap();
        assert_eq!(read.self_loops, 1);
        assert_eq!(read.duplicate_edges, 1);
        assert_eq!(read.graph.edge_count(), 1);
    }

    #[test]
    fn shared_map_gives_identical_matrices() {
        let f = file_with("x y\ny z\n");
        let map = NodeMap::from_names(["z", "y", "x", "w"]).unwrap();
        let a = read_edge_list(f.path(), Some(&map)).unwrap().graph;
        let b = read_edge_list(f.path(), Some(&map)).unwrap().graph;
        assert_eq!(a, b);
        assert_eq!(a.n(), 4);
        assert!(a.has_edge(2, 1) && a.has_edge(1, 0));
    }

    #[test]
    fn unknown_node_in_map_is_an_error() {
        let f = file_with("x q\n");
        let map = NodeMap::from_names(["x", "y"]).unwrap();
        assert!(matches!(
            read_edge_list(f.path(), Some(&map)),
            Err(Error::UnknownNode(id)) if id == "q"
        ));
    }

    #[test]
    fn malformed_line_reports_location() {
        let f = file_with("a b\nc\n");
        match read_edge_list(f.path(), None) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn header_keeps_isolated_nodes() {
        let f = file_with("# n=6\n0 4\n");
        let g = read_edge_list(f.path(), None).unwrap().graph;
        assert_eq!(g.n(), 6);
        assert!(g.has_edge(0, 4));
    }

    #[test]
    fn graph_round_trip() {
        let g = Graph::from_edges(10, [(0, 3), (1, 2), (4, 9), (5, 6), (6, 7), (2, 8)]);
        let f = tempfile::NamedTempFile::new().unwrap();
        write_graph(f.path(), &g).unwrap();
        assert_eq!(read_edge_list(f.path(), None).unwrap().graph, g);
    }

    #[test]
    fn empty_graph_round_trip_keeps_n() {
        let g = Graph::empty(7);
        let f = tempfile::NamedTempFile::new().unwrap();
        write_graph(f.path(), &g).unwrap();
        assert_eq!(read_edge_list(f.path(), None).unwrap().graph.n(), 7);
    }

    #[test]
    fn labeled_round_trip_keeps_isolated_names() {
        let map = NodeMap::from_names(["u", "v", "w", "iso"]).unwrap();
        let g = Graph::from_edges(4, [(0, 2), (1, 2)]).with_labels(map.clone());
        let f = tempfile::NamedTempFile::new().unwrap();
        write_graph(f.path(), &g).unwrap();
        let back = read_edge_list(f.path(), None).unwrap().graph;
        assert_eq!(back, g);
        assert_eq!(back.labels(), Some(&map));
    }

    #[test]
    fn matrix_round_trip() {
        let m = DMatrix::from_fn(5, 5, |i, j| {
            ((i * 31 + j * 17) as f64 / 7.0).sin().abs() / 3.0
        });
        let f = tempfile::NamedTempFile::new().unwrap();
        write_matrix(f.path(), &m).unwrap();
        let back = read_matrix(f.path()).unwrap();
        assert!((back - m).abs().max() <= 1e-12);
    }
}
