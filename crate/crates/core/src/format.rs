//! The TOML instance format.
//!
//! ```toml
//! name = "O2"
//! rank = 1
//! vertices = ["v"]
//! relations = ["1 - a a* - b b*"]
//!
//! [flags]
//! full = false
//!
//! [[edges]]
//! name = "a"
//! coord = 0
//! relation = [["v", "v"]]
//! ```
//!
//! A relation pair `[u, w]` lets a path run through the edge from `u` to `w`.
//! Squares are listed as `[[squares]]` tables with `pair = ["e", "f"]` and
//! `equals = ["f'", "e'"]`, declaring `e f = f' e'`.

use std::collections::HashSet;
use std::ops::Range;

use serde::Deserialize;
use toml::Spanned;

use crate::algebra::Literal;
use crate::error::InstanceError;
use crate::semigraph::{Flags, Instance};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileInstance {
    name: Option<String>,
    rank: Spanned<usize>,
    vertices: Vec<Spanned<String>>,
    #[serde(default)]
    edges: Vec<FileEdge>,
    #[serde(default)]
    squares: Vec<FileSquare>,
    #[serde(default)]
    flags: FileFlags,
    #[serde(default)]
    relations: Vec<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileEdge {
    name: Spanned<String>,
    coord: Option<Spanned<usize>>,
    relation: Vec<(Spanned<String>, Spanned<String>)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileSquare {
    pair: (Spanned<String>, Spanned<String>),
    equals: (Spanned<String>, Spanned<String>),
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileFlags {
    #[serde(default)]
    full: bool,
}

fn located(text: &str, span: Range<usize>, message: impl Into<String>) -> InstanceError {
    let before = &text[..span.start.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    InstanceError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses an instance file. `fallback_name` is used when the file has no `name`.
pub fn parse_instance(text: &str, fallback_name: &str) -> Result<Instance, InstanceError> {
    let file: FileInstance = toml::from_str(text).map_err(|e| {
        let span = e.span().unwrap_or(0..0);
        located(text, span, e.message())
    })?;
    if *file.rank.get_ref() == 0 {
        return Err(located(text, file.rank.span(), "rank must be positive"));
    }
    let rank = *file.rank.get_ref();
    let mut vertices = HashSet::new();
    for v in &file.vertices {
        if !vertices.insert(v.get_ref().as_str()) {
            return Err(located(text, v.span(), format!("duplicate vertex `{}`", v.get_ref())));
        }
    }
    let mut edges = HashSet::new();
    let mut builder = Instance::builder(file.name.clone().unwrap_or_else(|| fallback_name.to_string()), rank);
    builder = builder.vertices(file.vertices.iter().map(|v| v.get_ref().clone()));
    for e in &file.edges {
        if !edges.insert(e.name.get_ref().as_str()) {
            return Err(located(
                text,
                e.name.span(),
                format!("duplicate edge `{}`", e.name.get_ref()),
            ));
        }
        let coord = e.coord.as_ref().map_or(0, |c| *c.get_ref());
        if let Some(c) = e.coord.as_ref().filter(|_| coord >= rank) {
            return Err(located(
                text,
                c.span(),
                format!("coordinate {coord} is out of range for rank {rank}"),
            ));
        }
        for v in e.relation.iter().flat_map(|(a, b)| [a, b]) {
            if !vertices.contains(v.get_ref().as_str()) {
                return Err(located(text, v.span(), format!("unknown vertex `{}`", v.get_ref())));
            }
        }
        let pairs = e
            .relation
            .iter()
            .map(|(a, b)| (a.get_ref().clone(), b.get_ref().clone()))
            .collect();
        builder = builder.edge(e.name.get_ref().clone(), coord, pairs);
    }
    for s in &file.squares {
        for name in [&s.pair.0, &s.pair.1, &s.equals.0, &s.equals.1] {
            if !edges.contains(name.get_ref().as_str()) {
                return Err(located(text, name.span(), format!("unknown edge `{}`", name.get_ref())));
            }
        }
        builder = builder.square(
            (s.pair.0.get_ref(), s.pair.1.get_ref()),
            (s.equals.0.get_ref(), s.equals.1.get_ref()),
        );
    }
    builder = builder.flags(Flags { full: file.flags.full });
    for r in &file.relations {
        builder = builder.relation(r.get_ref().clone());
    }
    let inst = builder.build().map_err(|e| match e {
        InstanceError::BadSquare(_) => {
            let span = file.squares.first().map_or(0..0, |s| s.pair.0.span());
            located(text, span, e.to_string())
        }
        other => located(text, 0..0, other.to_string()),
    })?;
    for r in &file.relations {
        Literal::parse(&inst, r.get_ref()).map_err(|e| {
            // The span covers the opening quote.
            let start = r.span().start + 1;
            let offset = match &e {
                crate::error::AlgebraError::Literal { offset, .. } => *offset,
                _ => 0,
            };
            located(text, start + offset..start + offset, e.to_string())
        })?;
    }
    Ok(inst)
}

fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

/// Writes an instance in the file format; parsing the output gives back the same instance.
pub fn to_toml(inst: &Instance) -> String {
    let mut out = String::new();
    out.push_str(&format!("name = {}\n", quote(inst.name())));
    out.push_str(&format!("rank = {}\n", inst.rank()));
    let vs: Vec<String> = inst.vertices().map(|v| quote(inst.vertex_name(v))).collect();
    out.push_str(&format!("vertices = [{}]\n", vs.join(", ")));
    if !inst.relations.is_empty() {
        let rs: Vec<String> = inst.relations.iter().map(|r| quote(r)).collect();
        out.push_str(&format!("relations = [{}]\n", rs.join(", ")));
    }
    if inst.flags.full {
        out.push_str("\n[flags]\nfull = true\n");
    }
    for e in inst.edges() {
        let edge = inst.edge(e);
        let pairs: Vec<String> = edge
            .relation
            .iter()
            .map(|(a, b)| format!("[{}, {}]", quote(inst.vertex_name(*a)), quote(inst.vertex_name(*b))))
            .collect();
        out.push_str(&format!(
            "\n[[edges]]\nname = {}\ncoord = {}\nrelation = [{}]\n",
            quote(&edge.name),
            edge.coord,
            pairs.join(", ")
        ));
    }
    for s in inst.squares() {
        out.push_str(&format!(
            "\n[[squares]]\npair = [{}, {}]\nequals = [{}, {}]\n",
            quote(inst.edge_name(s.pair.0)),
            quote(inst.edge_name(s.pair.1)),
            quote(inst.edge_name(s.equals.0)),
            quote(inst.edge_name(s.equals.1))
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigraph::constructors::{cuntz, product_example, square_instance, ultragraph3};

    #[test]
    fn round_trip() {
        for inst in [cuntz(2), ultragraph3(), square_instance(), product_example()] {
            let text = to_toml(&inst);
            let back = parse_instance(&text, "x").unwrap();
            assert_eq!(to_toml(&back), text);
        }
    }

    #[test]
    fn syntax_error_location() {
        let err = parse_instance("rank = 1\nvertices = [\"v\"\n", "x").unwrap_err();
        assert!(matches!(err, InstanceError::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn unknown_vertex_location() {
        let text = "rank = 1\nvertices = [\"v\"]\n\n[[edges]]\nname = \"a\"\nrelation = [[\"v\", \"w\"]]\n";
        let err = parse_instance(text, "x").unwrap_err();
        assert_eq!(
            err,
            InstanceError::Parse {
                line: 6,
                column: 19,
                message: "unknown vertex `w`".into()
            }
        );
    }

    #[test]
    fn relation_error_location() {
        let text = "rank = 1\nvertices = [\"v\"]\nrelations = [\"1 - q\"]\n\n[[edges]]\nname = \"a\"\nrelation = [[\"v\", \"v\"]]\n";
        let err = parse_instance(text, "x").unwrap_err();
        assert!(matches!(err, InstanceError::Parse { line: 3, .. }), "{err}");
    }
}
