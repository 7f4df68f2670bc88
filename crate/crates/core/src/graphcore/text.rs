//! Plain-text format for a graph, a self-map and an optional marking.
//!
//! ```text
//! # comment
//! vertices: R K B
//! edges:
//!   a K R          # name, initial vertex, terminal vertex
//! vertex-map:
//!   R K
//! edge-map:
//!   a cdae
//! marking: R       # basepoint
//!   a ea
//! ```
//!
//! Edge names are a lowercase letter followed by digits or underscores.
//! In words, an uppercase first letter or a trailing apostrophe marks the
//! reversed edge, so `Bab` is `b⁻¹ab` and `e2_1'` reverses `e2_1`. Letters
//! may be written adjacently or separated by spaces or dots.

use std::collections::BTreeMap;

use super::{Graph, GraphError, GraphMap, MarkedGraph, OEdge};

/// Split a word into `(lowercase name, reversed)` tokens.
pub fn tokenize_word(s: &str) -> Result<Vec<(String, bool)>, GraphError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() || c == '.' {
            i += 1;
            continue;
        }
        if !c.is_ascii_alphabetic() {
            return Err(GraphError::Parse { line: 0, msg: format!("unexpected character '{c}' in word '{s}'") });
        }
        let upper = c.is_ascii_uppercase();
        let mut name = c.to_ascii_lowercase().to_string();
        i += 1;
        while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '_') {
            name.push(chars[i]);
            i += 1;
        }
        let mut rev = upper;
        if i < chars.len() && chars[i] == '\'' {
            if upper {
                return Err(GraphError::Parse { line: 0, msg: format!("doubly reversed letter in '{s}'") });
            }
            rev = true;
            i += 1;
        }
        out.push((name, rev));
    }
    Ok(out)
}

/// Parse a word against a name table.
pub fn parse_word(s: &str, names: &[String]) -> Result<Vec<OEdge>, GraphError> {
    let lookup: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    tokenize_word(s)?
        .into_iter()
        .map(|(n, rev)| lookup.get(n.as_str()).map(|&e| OEdge { edge: e, rev }).ok_or(GraphError::UnknownEdge(n)))
        .collect()
}

fn valid_edge_name(n: &str) -> bool {
    let mut it = n.chars();
    matches!(it.next(), Some(c) if c.is_ascii_lowercase()) && it.all(|c| c.is_ascii_digit() || c == '_')
}

/// A parsed map file.
#[derive(Clone, Debug)]
pub struct MapFile {
    pub map: GraphMap,
    pub marking: Option<MarkedGraph>,
}

#[derive(PartialEq)]
enum Section {
    None,
    Edges,
    VertexMap,
    EdgeMap,
    Marking,
}

/// Parse the map file format.
pub fn parse_map_file(src: &str) -> Result<MapFile, GraphError> {
    let err = |line: usize, msg: String| GraphError::Parse { line, msg };
    let mut vertices: Vec<String> = Vec::new();
    let mut edges: Vec<(String, String, String, usize)> = Vec::new();
    let mut vmap: Vec<(String, String, usize)> = Vec::new();
    let mut emap: Vec<(String, String, usize)> = Vec::new();
    let mut marking_base: Option<(String, usize)> = None;
    let mut marking: Vec<(String, String, usize)> = Vec::new();
    let mut section = Section::None;
    for (idx, raw) in src.lines().enumerate() {
        let ln = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some((key, rest)) = line.split_once(':') {
            let rest = rest.trim();
            section = match key.trim() {
                "vertices" => {
                    vertices.extend(rest.split_whitespace().map(str::to_string));
                    Section::None
                }
                "edges" => Section::Edges,
                "vertex-map" => Section::VertexMap,
                "edge-map" => Section::EdgeMap,
                "marking" => {
                    if rest.is_empty() {
                        return Err(err(ln, "marking needs a basepoint".into()));
                    }
                    marking_base = Some((rest.to_string(), ln));
                    Section::Marking
                }
                other => return Err(err(ln, format!("unknown section '{other}'"))),
            };
            if !rest.is_empty() && matches!(section, Section::Edges | Section::VertexMap | Section::EdgeMap) {
                return Err(err(ln, "section header takes no arguments".into()));
            }
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match section {
            Section::Edges => {
                if toks.len() != 3 {
                    return Err(err(ln, "edge line is 'name init term'".into()));
                }
                if !valid_edge_name(toks[0]) {
                    return Err(err(ln, format!("invalid edge name '{}'", toks[0])));
                }
                edges.push((toks[0].into(), toks[1].into(), toks[2].into(), ln));
            }
            Section::VertexMap => {
                if toks.len() != 2 {
                    return Err(err(ln, "vertex-map line is 'vertex image'".into()));
                }
                vmap.push((toks[0].into(), toks[1].into(), ln));
            }
            Section::EdgeMap | Section::Marking => {
                if toks.len() < 2 {
                    return Err(err(ln, "expected 'name word'".into()));
                }
                let entry = (toks[0].to_string(), toks[1..].join(" "), ln);
                if section == Section::EdgeMap {
                    emap.push(entry);
                } else {
                    marking.push(entry);
                }
            }
            Section::None => return Err(err(ln, "content outside a section".into())),
        }
    }
    let vindex = |name: &str, ln: usize| {
        vertices.iter().position(|v| v == name).ok_or_else(|| err(ln, format!("unknown vertex '{name}'")))
    };
    let mut edge_triples = Vec::new();
    for (n, a, b, ln) in &edges {
        edge_triples.push((n.clone(), vindex(a, *ln)?, vindex(b, *ln)?));
    }
    let graph = Graph::new(vertices.clone(), edge_triples)?;
    graph.check_standing()?;
    let mut vm = vec![None; graph.num_vertices()];
    for (a, b, ln) in &vmap {
        let (i, j) = (vindex(a, *ln)?, vindex(b, *ln)?);
        if vm[i].replace(j).is_some() {
            return Err(err(*ln, format!("vertex '{a}' mapped twice")));
        }
    }
    let vm: Option<Vec<usize>> = vm.into_iter().collect();
    let vm = vm.ok_or_else(|| err(0, "every vertex needs an image".into()))?;
    let mut em = vec![None; graph.num_edges()];
    for (e, w, ln) in &emap {
        let i = graph.find_edge(e).ok_or_else(|| err(*ln, format!("unknown edge '{e}'")))?;
        let word = parse_word(w, graph.edge_names()).map_err(|x| err(*ln, x.to_string()))?;
        if em[i].replace(word).is_some() {
            return Err(err(*ln, format!("edge '{e}' mapped twice")));
        }
    }
    let em: Option<Vec<Vec<OEdge>>> = em.into_iter().collect();
    let em = em.ok_or_else(|| err(0, "every edge needs an image".into()))?;
    let map = GraphMap::new(graph.clone(), graph.clone(), vm, em)?;
    let marking = match marking_base {
        None => None,
        Some((base, ln)) => {
            let b = vindex(&base, ln)?;
            let mut gens = Vec::new();
            let mut words = Vec::new();
            for (g, w, ln) in &marking {
                gens.push(g.clone());
                words.push(parse_word(w, graph.edge_names()).map_err(|x| err(*ln, x.to_string()))?);
            }
            Some(MarkedGraph::new(graph, b, gens, words)?)
        }
    };
    Ok(MapFile { map, marking })
}

/// Render a map (and marking) in the map file format.
pub fn render_map_file(map: &GraphMap, marking: Option<&MarkedGraph>) -> String {
    let g = map.domain();
    let mut out = String::new();
    out.push_str(&format!("vertices: {}\n", g.vertex_names().join(" ")));
    out.push_str("edges:\n");
    for e in 0..g.num_edges() {
        let fe = OEdge::fwd(e);
        out.push_str(&format!("  {} {} {}\n", g.edge_name(e), g.vertex_name(g.init(fe)), g.vertex_name(g.term(fe))));
    }
    out.push_str("vertex-map:\n");
    for v in 0..g.num_vertices() {
        out.push_str(&format!("  {} {}\n", g.vertex_name(v), map.codomain().vertex_name(map.vertex_image(v))));
    }
    out.push_str("edge-map:\n");
    for (name, word) in map.describe() {
        out.push_str(&format!("  {name} {word}\n"));
    }
    if let Some(m) = marking {
        out.push_str(&format!("marking: {}\n", g.vertex_name(m.basepoint)));
        for (gname, w) in m.gens.iter().zip(&m.words) {
            out.push_str(&format!("  {gname} {}\n", g.path_string(w)));
        }
    }
    out
}
