//! Carpet systems: the digit-labelled multigraph, its validation, and the
//! graph-structural data derived from it.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CarpetError, Result};
use crate::graph;
use crate::matrix::IntMatrix;

/// One edge `from -> to` carrying the digit cell `(x, y)`. The affine map it
/// stands for, `(a, b) -> ((a + x) / n, (b + y) / m)`, is implied by the digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub x: u32,
    pub y: u32,
}

/// A validated graph-directed `(×m, ×n)` carpet system.
///
/// Vertices are indexed in declaration order; edges keep their input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarpetSystem {
    n: u32,
    m: u32,
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseMode {
    Strict,
    Lenient,
}

#[derive(Serialize, Deserialize)]
struct RawEdge {
    from: String,
    to: String,
    x: u32,
    y: u32,
}

#[derive(Serialize, Deserialize)]
struct RawDocument {
    n: u32,
    m: u32,
    vertices: Vec<String>,
    edges: Vec<RawEdge>,
}

const TOP_KEYS: [&str; 4] = ["n", "m", "vertices", "edges"];
const EDGE_KEYS: [&str; 4] = ["from", "to", "x", "y"];

/// Parses and validates a JSON system document in strict mode.
pub fn parse_system(text: &str) -> Result<CarpetSystem> {
    parse_system_with(text, ParseMode::Strict).map(|(sys, _)| sys)
}

/// Parses a JSON system document. In lenient mode unknown keys are returned
/// as warnings instead of errors.
pub fn parse_system_with(text: &str, mode: ParseMode) -> Result<(CarpetSystem, Vec<String>)> {
    let value: Value = serde_json::from_str(text).map_err(|e| CarpetError::Malformed(e.to_string()))?;
    let mut warnings = Vec::new();
    let top = value.as_object().ok_or_else(|| CarpetError::Malformed("top level must be an object".into()))?;
    let mut check = |key: &str, ctx: &str| -> Result<()> {
        let name = if ctx.is_empty() { key.to_string() } else { format!("{ctx}.{key}") };
        match mode {
            ParseMode::Strict => Err(CarpetError::UnknownKey(name)),
            ParseMode::Lenient => {
                warnings.push(format!("ignoring unknown key `{name}`"));
                Ok(())
            }
        }
    };
    for key in top.keys() {
        if !TOP_KEYS.contains(&key.as_str()) {
            check(key, "")?;
        }
    }
    if let Some(Value::Array(edges)) = top.get("edges") {
        for (i, e) in edges.iter().enumerate() {
            if let Some(obj) = e.as_object() {
                for key in obj.keys() {
                    if !EDGE_KEYS.contains(&key.as_str()) {
                        check(key, &format!("edges[{i}]"))?;
                    }
                }
            }
        }
    }
    let raw: RawDocument = serde_json::from_value(value).map_err(|e| CarpetError::Malformed(e.to_string()))?;
    let edges: Vec<(&str, &str, u32, u32)> =
        raw.edges.iter().map(|e| (e.from.as_str(), e.to.as_str(), e.x, e.y)).collect();
    let names: Vec<&str> = raw.vertices.iter().map(String::as_str).collect();
    CarpetSystem::new(raw.n, raw.m, &names, &edges).map(|sys| (sys, warnings))
}

impl CarpetSystem {
    /// Builds and validates a system from vertex names and
    /// `(from, to, x, y)` edge tuples.
    pub fn new(n: u32, m: u32, vertices: &[&str], edges: &[(&str, &str, u32, u32)]) -> Result<Self> {
        let index: BTreeMap<&str, usize> = vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        if index.len() != vertices.len() {
            let mut seen = HashSet::new();
            let dup = vertices.iter().find(|v| !seen.insert(**v)).expect("duplicate exists");
            return Err(CarpetError::DuplicateVertex(dup.to_string()));
        }
        let lookup = |name: &str| index.get(name).copied().ok_or_else(|| CarpetError::UnknownVertex(name.to_string()));
        let mut resolved = Vec::with_capacity(edges.len());
        for &(from, to, x, y) in edges {
            resolved.push(Edge { from: lookup(from)?, to: lookup(to)?, x, y });
        }
        Self::from_indexed(n, m, vertices.iter().map(|s| s.to_string()).collect(), resolved)
    }

    /// Builds and validates a system whose edges already use vertex indices.
    pub fn from_indexed(n: u32, m: u32, vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        if m < 2 || n <= m {
            return Err(CarpetError::BaseOrder { n, m });
        }
        if vertices.is_empty() {
            return Err(CarpetError::EmptySystem);
        }
        let mut seen = HashSet::new();
        for v in &vertices {
            if !seen.insert(v.as_str()) {
                return Err(CarpetError::DuplicateVertex(v.clone()));
            }
        }
        let mut distinct = HashSet::new();
        let mut has_out = vec![false; vertices.len()];
        for (index, e) in edges.iter().enumerate() {
            for end in [e.from, e.to] {
                if end >= vertices.len() {
                    return Err(CarpetError::UnknownVertex(format!("#{end}")));
                }
            }
            if e.x >= n || e.y >= m {
                return Err(CarpetError::DigitOutOfRange { index, x: e.x, y: e.y, n, m });
            }
            if !distinct.insert(*e) {
                return Err(CarpetError::DuplicateEdge {
                    from: vertices[e.from].clone(),
                    to: vertices[e.to].clone(),
                    x: e.x,
                    y: e.y,
                });
            }
            has_out[e.from] = true;
        }
        if let Some(v) = has_out.iter().position(|&h| !h) {
            return Err(CarpetError::DanglingVertex(vertices[v].clone()));
        }
        Ok(CarpetSystem { n, m, vertices, edges })
    }

    /// Base along the first (contracted by `1/n`) axis.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Base along the second (contracted by `1/m`) axis.
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.from == v)
    }

    /// Vertex adjacency lists (one entry per edge, parallel edges repeated).
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            adj[e.from].push(e.to);
        }
        adj
    }

    /// The subsystem on `keep` (given as original indices) with every edge
    /// whose endpoints both lie in `keep`. Vertex order is preserved.
    ///
    /// Fails with `DanglingVertex` if some kept vertex loses all its edges.
    pub fn subsystem(&self, keep: &[usize]) -> Result<CarpetSystem> {
        let mut remap = vec![usize::MAX; self.vertices.len()];
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for (new, &old) in sorted.iter().enumerate() {
            remap[old] = new;
        }
        let vertices = sorted.iter().map(|&v| self.vertices[v].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| remap[e.from] != usize::MAX && remap[e.to] != usize::MAX)
            .map(|e| Edge { from: remap[e.from], to: remap[e.to], x: e.x, y: e.y })
            .collect();
        CarpetSystem::from_indexed(self.n, self.m, vertices, edges)
    }

    /// Serializes back to the JSON input schema.
    pub fn to_json(&self) -> String {
        let doc = RawDocument {
            n: self.n,
            m: self.m,
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| RawEdge {
                    from: self.vertices[e.from].clone(),
                    to: self.vertices[e.to].clone(),
                    x: e.x,
                    y: e.y,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("system serializes")
    }
}

/// One irreducible component `H_i = (V_i, E_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Vertex indices, ascending.
    pub vertices: Vec<usize>,
    /// Indices into `CarpetSystem::edges` of the edges internal to the component.
    pub edges: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentDecomposition {
    /// Components ordered by their smallest vertex index.
    pub components: Vec<Component>,
    /// `successors[i]` lists (ascending) every component reachable from
    /// component `i`, including `i` itself.
    pub successors: Vec<Vec<usize>>,
    /// Vertices reachable from some vertex lying on a cycle.
    pub tilde_v: Vec<usize>,
    /// Component of each vertex, or `None` for transient vertices.
    pub scc_of: Vec<Option<usize>>,
}

impl ComponentDecomposition {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// Components reachable from vertex `v` (through >= 0 edges).
    pub fn reachable_components(&self, system: &CarpetSystem, v: usize) -> Vec<usize> {
        let seen = graph::reachable_from(&system.adjacency(), [v]);
        let mut out: Vec<usize> =
            (0..system.vertex_count()).filter(|&u| seen[u]).filter_map(|u| self.scc_of[u]).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn is_irreducible(&self, system: &CarpetSystem) -> bool {
        self.components.len() == 1 && self.components[0].vertices.len() == system.vertex_count()
    }
}

/// Irreducible components, their successor sets, and the set of vertices
/// that terminate arbitrarily long admissible words.
pub fn decompose(system: &CarpetSystem) -> ComponentDecomposition {
    let adj = system.adjacency();
    let mut sccs: Vec<Vec<usize>> = graph::strongly_connected_components(&adj)
        .into_iter()
        .filter(|c| c.len() > 1 || adj[c[0]].contains(&c[0]))
        .collect();
    sccs.sort_by_key(|c| c[0]);

    let mut scc_of = vec![None; system.vertex_count()];
    for (i, c) in sccs.iter().enumerate() {
        for &v in c {
            scc_of[v] = Some(i);
        }
    }
    let components: Vec<Component> = sccs
        .iter()
        .enumerate()
        .map(|(i, c)| Component {
            vertices: c.clone(),
            edges: system
                .edges()
                .iter()
                .enumerate()
                .filter(|(_, e)| scc_of[e.from] == Some(i) && scc_of[e.to] == Some(i))
                .map(|(k, _)| k)
                .collect(),
        })
        .collect();

    let successors = components
        .iter()
        .map(|c| {
            let seen = graph::reachable_from(&adj, c.vertices.iter().copied());
            let mut s: Vec<usize> = (0..adj.len()).filter(|&u| seen[u]).filter_map(|u| scc_of[u]).collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();

    let seen = graph::reachable_from(&adj, components.iter().flat_map(|c| c.vertices.iter().copied()));
    let tilde_v = (0..adj.len()).filter(|&v| seen[v]).collect();

    ComponentDecomposition { components, successors, tilde_v, scc_of }
}

/// The subsystem generated from `v`: `v` together with everything it reaches.
pub fn restrict(system: &CarpetSystem, v: usize) -> CarpetSystem {
    let seen = graph::reachable_from(&system.adjacency(), [v]);
    let keep: Vec<usize> = (0..system.vertex_count()).filter(|&u| seen[u]).collect();
    system.subsystem(&keep).expect("forward-closed subsystems keep every out-edge")
}

/// The system restricted to one irreducible component.
pub fn component_system(system: &CarpetSystem, component: &Component) -> CarpetSystem {
    system.subsystem(&component.vertices).expect("components are strongly connected")
}

/// `A` and the per-row-digit matrices `A_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitMatrices {
    pub a: IntMatrix,
    pub a_j: Vec<IntMatrix>,
}

pub fn digit_matrices(system: &CarpetSystem) -> DigitMatrices {
    let d = system.vertex_count();
    let mut a = IntMatrix::zeros(d);
    let mut a_j = vec![IntMatrix::zeros(d); system.m() as usize];
    for e in system.edges() {
        a.add_at(e.from, e.to, 1);
        a_j[e.y as usize].add_at(e.from, e.to, 1);
    }
    DigitMatrices { a, a_j }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn parses_mc_fixture() {
        let sys = fixtures::ex_mc();
        assert_eq!(sys.vertex_count(), 1);
        assert_eq!(sys.edges().len(), 3);
        assert_eq!((sys.n(), sys.m()), (3, 2));
    }

    #[test]
    fn rejects_dangling_vertex() {
        let doc = r#"{"n":3,"m":2,"vertices":["v","u"],"edges":[{"from":"v","to":"u","x":0,"y":0}]}"#;
        let err = parse_system(doc).unwrap_err();
        assert_eq!(err, CarpetError::DanglingVertex("u".into()));
        assert_eq!(err.to_string(), "dangling vertex u");
    }

    #[test]
    fn rejects_digit_out_of_range() {
        let doc = r#"{"n":4,"m":3,"vertices":["v"],"edges":[{"from":"v","to":"v","x":0,"y":5}]}"#;
        let err = parse_system(doc).unwrap_err();
        assert!(matches!(err, CarpetError::DigitOutOfRange { y: 5, .. }));
        assert!(err.to_string().starts_with("digit out of range"));
    }

    #[test]
    fn rejects_bad_bases() {
        for (n, m) in [(3, 5), (3, 3), (3, 1)] {
            let doc = format!(r#"{{"n":{n},"m":{m},"vertices":["v"],"edges":[{{"from":"v","to":"v","x":0,"y":0}}]}}"#);
            let err = parse_system(&doc).unwrap_err();
            assert_eq!(err, CarpetError::BaseOrder { n, m });
            assert!(err.to_string().contains("requires n > m"));
        }
    }

    #[test]
    fn rejects_unknown_vertex_and_duplicates() {
        let unknown = r#"{"n":3,"m":2,"vertices":["v"],"edges":[{"from":"v","to":"w","x":0,"y":0}]}"#;
        assert_eq!(parse_system(unknown).unwrap_err(), CarpetError::UnknownVertex("w".into()));
        let dup = r#"{"n":3,"m":2,"vertices":["v"],"edges":[{"from":"v","to":"v","x":0,"y":0},{"from":"v","to":"v","x":0,"y":0}]}"#;
        assert!(matches!(parse_system(dup).unwrap_err(), CarpetError::DuplicateEdge { .. }));
        let dupv = r#"{"n":3,"m":2,"vertices":["v","v"],"edges":[{"from":"v","to":"v","x":0,"y":0}]}"#;
        assert_eq!(parse_system(dupv).unwrap_err(), CarpetError::DuplicateVertex("v".into()));
        let empty = r#"{"n":3,"m":2,"vertices":[],"edges":[]}"#;
        assert_eq!(parse_system(empty).unwrap_err(), CarpetError::EmptySystem);
    }

    #[test]
    fn unknown_keys_strict_and_lenient() {
        let doc = r#"{"n":3,"m":2,"vertices":["v"],"edges":[{"from":"v","to":"v","x":0,"y":0,"w":1}],"name":"x"}"#;
        assert_eq!(parse_system(doc).unwrap_err(), CarpetError::UnknownKey("name".into()));
        let (sys, warnings) = parse_system_with(doc, ParseMode::Lenient).unwrap();
        assert_eq!(sys.edges().len(), 1);
        assert_eq!(warnings.len(), 2);
        assert!(matches!(parse_system("[1,2]").unwrap_err(), CarpetError::Malformed(_)));
        assert!(matches!(parse_system(r#"{"n":3}"#).unwrap_err(), CarpetError::Malformed(_)));
    }

    #[test]
    fn json_round_trip() {
        let sys = fixtures::ex_ab();
        assert_eq!(parse_system(&sys.to_json()).unwrap(), sys);
    }

    #[test]
    fn decompose_ab() {
        let sys = fixtures::ex_ab();
        let dec = decompose(&sys);
        assert_eq!(dec.component_count(), 2);
        assert_eq!(dec.components[0].vertices, vec![0]);
        assert_eq!(dec.components[0].edges.len(), 6);
        assert_eq!(dec.components[1].vertices, vec![1]);
        assert_eq!(dec.components[1].edges.len(), 6);
        assert_eq!(dec.successors, vec![vec![0, 1], vec![1]]);
        assert_eq!(dec.tilde_v, vec![0, 1]);
        assert!(!dec.is_irreducible(&sys));
    }

    #[test]
    fn decompose_mc_and_chain() {
        let sys = fixtures::ex_mc();
        let dec = decompose(&sys);
        assert_eq!(dec.component_count(), 1);
        assert_eq!(dec.successors, vec![vec![0]]);
        assert_eq!(dec.tilde_v, vec![0]);
        assert!(dec.is_irreducible(&sys));

        let chain = CarpetSystem::new(3, 2, &["u", "v"], &[("u", "v", 0, 0), ("v", "v", 1, 1)]).unwrap();
        let dec = decompose(&chain);
        assert_eq!(dec.component_count(), 1);
        assert_eq!(dec.components[0].vertices, vec![1]);
        assert_eq!(dec.tilde_v, vec![1]);
        assert_eq!(dec.scc_of, vec![None, Some(0)]);
    }

    #[test]
    fn restrict_examples() {
        let ab = fixtures::ex_ab();
        let b = restrict(&ab, 1);
        assert_eq!(b.vertices(), &["b".to_string()]);
        assert_eq!(b.edges().len(), 6);
        assert_eq!(restrict(&ab, 0), ab);
        let mc = fixtures::ex_mc();
        assert_eq!(restrict(&mc, 0), mc);
    }

    #[test]
    fn digit_matrix_examples() {
        let mc = digit_matrices(&fixtures::ex_mc());
        assert_eq!(mc.a.rows(), vec![vec![3]]);
        assert_eq!(mc.a_j[0].rows(), vec![vec![2]]);
        assert_eq!(mc.a_j[1].rows(), vec![vec![1]]);

        let ab = digit_matrices(&fixtures::ex_ab());
        assert_eq!(ab.a_j[0].rows(), vec![vec![2, 0], vec![0, 1]]);
        assert_eq!(ab.a.rows(), vec![vec![6, 1], vec![0, 6]]);

        let no_row_one = digit_matrices(&fixtures::ex_pt());
        assert!(no_row_one.a_j[1].is_zero());
    }
}
