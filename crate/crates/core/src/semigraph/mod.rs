//! Finitely aligned non-unital k-semigraphs presented by edges, vertex
//! relations and commuting squares.
//!
//! An instance is a finite set of vertices `V` and a finite set of edges.
//! Each edge has a degree `e_i` and a relation `R ⊆ V × V` read as
//! `(range-side vertex, source-side vertex)`. A finite letter sequence is an
//! element of `T₁` when the relations compose to a nonempty relation along
//! it; for rank ≥ 2 the letters are kept sorted by coordinate, and the
//! commuting-square table rewrites adjacent mixed-coordinate pairs.

mod axioms;
mod closure;
pub mod constructors;
mod ops;

pub use axioms::{AxiomReport, AxiomViolation};

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, RwLock};

use crate::degree::MultiDegree;
use crate::error::InstanceError;

/// Default element cap for saturation loops.
pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

pub type VertexSet = BTreeSet<VertexId>;

#[derive(Clone, Debug)]
pub struct Edge {
    pub name: String,
    pub coord: usize,
    pub relation: Vec<(VertexId, VertexId)>,
    /// `image[v]` lists the source-side vertices related to `v`.
    image: Vec<Vec<VertexId>>,
}

impl Edge {
    pub fn image_of(&self, v: VertexId) -> &[VertexId] {
        &self.image[v.0 as usize]
    }

    /// Range-side vertices of the relation.
    pub fn domain(&self) -> VertexSet {
        self.relation.iter().map(|(a, _)| *a).collect()
    }
}

/// A commuting square `x y = y' x'` with `coord(x) = coord(x') < coord(y) = coord(y')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Square {
    pub pair: (EdgeId, EdgeId),
    pub equals: (EdgeId, EdgeId),
}

/// An element of `T₁`: a canonical letter sequence together with its degree.
/// The empty sequence is the unit.
#[derive(Clone)]
pub struct Element {
    letters: Vec<EdgeId>,
    degree: MultiDegree,
}

impl Element {
    pub(crate) fn from_parts(letters: Vec<EdgeId>, degree: MultiDegree) -> Self {
        Self { letters, degree }
    }

    pub fn unit() -> Self {
        Self {
            letters: Vec::new(),
            degree: MultiDegree::zero(),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[EdgeId] {
        &self.letters
    }

    pub fn degree(&self) -> &MultiDegree {
        &self.degree
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters
    }
}

impl Eq for Element {}

impl Hash for Element {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.letters.hash(state);
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<u32> = self.letters.iter().map(|e| e.0).collect();
        write!(f, "Element{ids:?}")
    }
}

type ExtensionCache = RwLock<HashMap<(Element, Element), Arc<[(Element, Element)]>>>;

/// Optional instance flags.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    /// Work in the full algebra rather than the universal one.
    pub full: bool,
}

/// A concrete finitely presented k-semigraph with its projection data.
pub struct Instance {
    name: String,
    rank: usize,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    squares: Vec<Square>,
    forward: HashMap<(EdgeId, EdgeId), (EdgeId, EdgeId)>,
    backward: HashMap<(EdgeId, EdgeId), (EdgeId, EdgeId)>,
    pub flags: Flags,
    /// Quotient relations, kept as element literals.
    pub relations: Vec<String>,
    mce_cache: ExtensionCache,
}

impl fmt::Debug for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Instance")
            .field("name", &self.name)
            .field("rank", &self.rank)
            .field("vertices", &self.vertices)
            .field("edges", &self.edges.len())
            .field("squares", &self.squares.len())
            .finish()
    }
}

impl Clone for Instance {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            rank: self.rank,
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
            squares: self.squares.clone(),
            forward: self.forward.clone(),
            backward: self.backward.clone(),
            flags: self.flags.clone(),
            relations: self.relations.clone(),
            mce_cache: RwLock::new(HashMap::new()),
        }
    }
}

impl Instance {
    pub fn builder(name: impl Into<String>, rank: usize) -> InstanceBuilder {
        InstanceBuilder {
            name: name.into(),
            rank,
            vertices: Vec::new(),
            edges: Vec::new(),
            squares: Vec::new(),
            flags: Flags::default(),
            relations: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    pub fn all_vertices(&self) -> VertexSet {
        self.vertices().collect()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0 as usize]
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|n| n == name).map(|i| VertexId(i as u32))
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0 as usize]
    }

    pub fn edge_id(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name).map(|i| EdgeId(i as u32))
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edge(e).name
    }

    pub fn coord(&self, e: EdgeId) -> usize {
        self.edge(e).coord
    }

    pub fn squares(&self) -> &[Square] {
        &self.squares
    }

    /// Space-separated letter names; `1` for the unit.
    pub fn format_element(&self, x: &Element) -> String {
        if x.is_unit() {
            return "1".to_string();
        }
        x.letters
            .iter()
            .map(|e| self.edge_name(*e))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn format_vertex_set(&self, set: &VertexSet) -> String {
        let names: Vec<&str> = set.iter().map(|v| self.vertex_name(*v)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Parses a space-separated letter list (or `1`) into a canonical element.
    pub fn parse_element(&self, text: &str) -> Option<Element> {
        let text = text.trim();
        if text == "1" || text.is_empty() {
            return Some(Element::unit());
        }
        let letters: Option<Vec<EdgeId>> = text.split_whitespace().map(|n| self.edge_id(n)).collect();
        self.element_from_letters(&letters?)
    }

    /// Successively composes single letters; `None` if the product is undefined.
    pub fn element_from_letters(&self, letters: &[EdgeId]) -> Option<Element> {
        let mut acc = Element::unit();
        for &e in letters {
            acc = self.compose(&acc, &self.letter(e)?)?;
        }
        Some(acc)
    }

    /// The single-letter element for edge `e`, if its relation is nonempty.
    pub fn letter(&self, e: EdgeId) -> Option<Element> {
        if self.edge(e).relation.is_empty() {
            return None;
        }
        Some(Element::from_parts(vec![e], MultiDegree::unit(self.coord(e))))
    }

    /// Looks up a letter element by name.
    pub fn letter_named(&self, name: &str) -> Option<Element> {
        self.letter(self.edge_id(name)?)
    }

    pub(crate) fn square_forward(&self, x: EdgeId, y: EdgeId) -> Option<(EdgeId, EdgeId)> {
        self.forward.get(&(x, y)).copied()
    }

    pub(crate) fn square_backward(&self, y: EdgeId, x: EdgeId) -> Option<(EdgeId, EdgeId)> {
        self.backward.get(&(y, x)).copied()
    }
}

/// Incremental construction of an [`Instance`].
/// Edge name, coordinate and relation pairs by vertex name.
type EdgeSpec = (String, usize, Vec<(String, String)>);

#[derive(Clone, Debug)]
pub struct InstanceBuilder {
    name: String,
    rank: usize,
    vertices: Vec<String>,
    edges: Vec<EdgeSpec>,
    squares: Vec<((String, String), (String, String))>,
    flags: Flags,
    relations: Vec<String>,
}

impl InstanceBuilder {
    pub fn vertex(mut self, name: impl Into<String>) -> Self {
        self.vertices.push(name.into());
        self
    }

    pub fn vertices<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.vertices.extend(names.into_iter().map(Into::into));
        self
    }

    /// Adds an edge of degree `e_coord` with relation pairs `(range-side, source-side)`.
    pub fn edge<S: Into<String>>(mut self, name: impl Into<String>, coord: usize, relation: Vec<(S, S)>) -> Self {
        let relation = relation.into_iter().map(|(a, b)| (a.into(), b.into())).collect();
        self.edges.push((name.into(), coord, relation));
        self
    }

    /// Adds a graph edge with range vertex `range` and source vertex `source`.
    pub fn graph_edge(self, name: impl Into<String>, coord: usize, range: &str, source: &str) -> Self {
        self.edge(name, coord, vec![(range, source)])
    }

    /// Declares `x y = y' x'` where `x` has the lower coordinate.
    pub fn square(mut self, pair: (&str, &str), equals: (&str, &str)) -> Self {
        self.squares.push((
            (pair.0.to_string(), pair.1.to_string()),
            (equals.0.to_string(), equals.1.to_string()),
        ));
        self
    }

    pub fn flags(mut self, flags: Flags) -> Self {
        self.flags = flags;
        self
    }

    pub fn relation(mut self, literal: impl Into<String>) -> Self {
        self.relations.push(literal.into());
        self
    }

    pub fn build(self) -> Result<Instance, InstanceError> {
        if self.rank == 0 {
            return Err(InstanceError::ZeroRank);
        }
        let mut vertex_ids: HashMap<&str, VertexId> = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if vertex_ids.insert(v.as_str(), VertexId(i as u32)).is_some() {
                return Err(InstanceError::DuplicateVertex(v.clone()));
            }
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        let mut edge_ids: HashMap<&str, EdgeId> = HashMap::new();
        for (i, (name, coord, relation)) in self.edges.iter().enumerate() {
            if *coord >= self.rank {
                return Err(InstanceError::CoordOutOfRange {
                    edge: name.clone(),
                    coord: *coord,
                    rank: self.rank,
                });
            }
            if edge_ids.insert(name.as_str(), EdgeId(i as u32)).is_some() {
                return Err(InstanceError::DuplicateEdge(name.clone()));
            }
            let lookup = |v: &String| {
                vertex_ids
                    .get(v.as_str())
                    .copied()
                    .ok_or_else(|| InstanceError::UnknownVertex(v.clone()))
            };
            let mut pairs = Vec::with_capacity(relation.len());
            for (a, b) in relation {
                pairs.push((lookup(a)?, lookup(b)?));
            }
            pairs.sort();
            pairs.dedup();
            let mut image = vec![Vec::new(); self.vertices.len()];
            for (a, b) in &pairs {
                image[a.0 as usize].push(*b);
            }
            edges.push(Edge {
                name: name.clone(),
                coord: *coord,
                relation: pairs,
                image,
            });
        }
        let find_edge = |n: &String| {
            edge_ids
                .get(n.as_str())
                .copied()
                .ok_or_else(|| InstanceError::UnknownEdge(n.clone()))
        };
        let mut squares = Vec::new();
        let mut forward = HashMap::new();
        let mut backward = HashMap::new();
        for ((x, y), (y2, x2)) in &self.squares {
            let (x, y, y2, x2) = (find_edge(x)?, find_edge(y)?, find_edge(y2)?, find_edge(x2)?);
            let c = |e: EdgeId| edges[e.0 as usize].coord;
            if c(x) >= c(y) || c(x) != c(x2) || c(y) != c(y2) {
                return Err(InstanceError::BadSquare(format!(
                    "`{} {}` = `{} {}` does not swap a lower and a higher coordinate",
                    edges[x.0 as usize].name,
                    edges[y.0 as usize].name,
                    edges[y2.0 as usize].name,
                    edges[x2.0 as usize].name
                )));
            }
            if forward.insert((x, y), (y2, x2)).is_some() {
                return Err(InstanceError::BadSquare(format!(
                    "pair `{} {}` is rewritten twice",
                    edges[x.0 as usize].name, edges[y.0 as usize].name
                )));
            }
            // A non-injective table is accepted here and reported by the axiom checker.
            backward.entry((y2, x2)).or_insert((x, y));
            squares.push(Square {
                pair: (x, y),
                equals: (y2, x2),
            });
        }
        Ok(Instance {
            name: self.name,
            rank: self.rank,
            vertices: self.vertices,
            edges,
            squares,
            forward,
            backward,
            flags: self.flags,
            relations: self.relations,
            mce_cache: RwLock::new(HashMap::new()),
        })
    }
}
