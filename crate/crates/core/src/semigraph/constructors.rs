//! Instance constructors for the shipped classes: directed graphs,
//! ultragraphs, cartesian products of 1-graphs and Cuntz instances.

use super::{Instance, InstanceBuilder};
use crate::error::InstanceError;

/// A directed graph. Edges are `(name, range vertex, source vertex)`; a path
/// `e f` is composable when the source of `e` is the range of `f`.
#[derive(Clone, Debug, Default)]
pub struct DirectedGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String, String)>,
}

impl DirectedGraph {
    pub fn new<S: Into<String>>(vertices: impl IntoIterator<Item = S>) -> Self {
        Self {
            vertices: vertices.into_iter().map(Into::into).collect(),
            edges: Vec::new(),
        }
    }

    pub fn edge(mut self, name: &str, range: &str, source: &str) -> Self {
        self.edges.push((name.into(), range.into(), source.into()));
        self
    }
}

/// An ultragraph edge: a source vertex and a finite range set. The edge
/// relation pairs the source vertex with every vertex of the range.
#[derive(Clone, Debug)]
pub struct UltraEdge {
    pub name: String,
    pub source: String,
    pub range: Vec<String>,
}

pub fn from_directed_graph(name: &str, graph: &DirectedGraph) -> Result<Instance, InstanceError> {
    let mut b = Instance::builder(name, 1).vertices(graph.vertices.iter().cloned());
    for (e, r, s) in &graph.edges {
        b = b.graph_edge(e.clone(), 0, r, s);
    }
    b.build()
}

pub fn from_ultragraph(name: &str, vertices: &[&str], edges: &[UltraEdge]) -> Result<Instance, InstanceError> {
    let mut b = Instance::builder(name, 1).vertices(vertices.iter().copied());
    for e in edges {
        let rel: Vec<(String, String)> = e.range.iter().map(|w| (e.source.clone(), w.clone())).collect();
        b = b.edge(e.name.clone(), 0, rel);
    }
    b.build()
}

/// Cartesian product of 1-graphs; the `i`-th factor supplies coordinate `i`.
///
/// Product vertices are named `v1_v2...`; the edge `e` of factor `i` sitting
/// at the other coordinates `w` is named `e_w` with `w` the joined tuple of
/// the remaining vertices.
pub fn product_graph(name: &str, factors: &[DirectedGraph]) -> Result<Instance, InstanceError> {
    let rank = factors.len();
    if rank == 0 {
        return Err(InstanceError::ZeroRank);
    }
    let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
    for g in factors {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                (0..g.vertices.len()).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    let vname = |t: &[usize]| -> String {
        t.iter()
            .enumerate()
            .map(|(c, i)| factors[c].vertices[*i].as_str())
            .collect::<Vec<_>>()
            .join("_")
    };
    let others = |t: &[usize], skip: usize| -> String {
        t.iter()
            .enumerate()
            .filter(|(c, _)| *c != skip)
            .map(|(c, i)| factors[c].vertices[*i].as_str())
            .collect::<Vec<_>>()
            .join("_")
    };
    let index = |c: usize, v: &str| factors[c].vertices.iter().position(|n| n == v);
    let mut b: InstanceBuilder = Instance::builder(name, rank).vertices(tuples.iter().map(|t| vname(t)));
    let ename = |c: usize, e: &str, t: &[usize]| format!("{e}_{}", others(t, c));
    let mut edge_list = Vec::new();
    for t in &tuples {
        for (c, g) in factors.iter().enumerate() {
            // edges of factor c at the fixed other coordinates of t, with range t[c]
            for (e, r, s) in &g.edges {
                let (Some(ri), Some(si)) = (index(c, r), index(c, s)) else {
                    return Err(InstanceError::UnknownVertex(format!("{r} or {s}")));
                };
                if ri != t[c] {
                    continue;
                }
                let mut src = t.clone();
                src[c] = si;
                let n = ename(c, e, t);
                b = b.graph_edge(n.clone(), c, &vname(t), &vname(&src));
                edge_list.push((n, c, t.clone(), src, e.clone()));
            }
        }
    }
    // Squares: x (coord i) followed by y (coord j > i) equals y' followed by x'.
    for (xn, ci, xr, xs, xe) in &edge_list {
        for (yn, cj, yr, ys, ye) in &edge_list {
            if ci >= cj || xs != yr {
                continue;
            }
            // y' is edge ye of factor cj ranged at xr; x' is edge xe ranged at y'-source.
            let mut ymid = xr.clone();
            ymid[*cj] = ys[*cj];
            let y2 = ename(*cj, ye, xr);
            let x2 = ename(*ci, xe, &ymid);
            debug_assert_eq!(ys, &{
                let mut t = ymid.clone();
                t[*ci] = xs[*ci];
                t
            });
            b = b.square((xn, yn), (&y2, &x2));
        }
    }
    b.build()
}

fn letter_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("s{i}")
    }
}

/// The single-vertex instance with `n` loops `a, b, c, ...`; its universal
/// algebra is the Toeplitz extension of the Cuntz algebra.
pub fn cuntz(n: usize) -> Instance {
    let mut g = DirectedGraph::new(["v"]);
    for i in 0..n {
        g = g.edge(&letter_name(i), "v", "v");
    }
    from_directed_graph(&format!("O{n}"), &g).expect("valid by construction")
}

/// One vertex with one loop `l`.
pub fn single_loop() -> Instance {
    from_directed_graph("loop", &DirectedGraph::new(["v"]).edge("l", "v", "v")).expect("valid by construction")
}

/// A strongly connected 4-vertex graph without sinks.
pub fn ck4() -> Instance {
    let g = DirectedGraph::new(["v0", "v1", "v2", "v3"])
        .edge("e01", "v0", "v1")
        .edge("e02", "v0", "v2")
        .edge("e12", "v1", "v2")
        .edge("e20", "v2", "v0")
        .edge("e23", "v2", "v3")
        .edge("e30", "v3", "v0");
    from_directed_graph("CK4", &g).expect("valid by construction")
}

/// A 3-edge ultragraph on three vertices.
pub fn ultragraph3() -> Instance {
    let e = |name: &str, source: &str, range: &[&str]| UltraEdge {
        name: name.into(),
        source: source.into(),
        range: range.iter().map(|s| s.to_string()).collect(),
    };
    from_ultragraph(
        "ultra3",
        &["u", "v", "w"],
        &[
            e("e1", "u", &["v", "w"]),
            e("e2", "v", &["u", "w"]),
            e("e3", "w", &["u"]),
        ],
    )
    .expect("valid by construction")
}

/// A single-vertex 2-graph with edges `e, e'` of degree (1,0) and `f, f'` of
/// degree (0,1). The squares pair `e f' = f e'` and permute the rest.
pub fn square_instance() -> Instance {
    Instance::builder("square", 2)
        .vertex("v")
        .edge("e", 0, vec![("v", "v")])
        .edge("e'", 0, vec![("v", "v")])
        .edge("f", 1, vec![("v", "v")])
        .edge("f'", 1, vec![("v", "v")])
        .square(("e", "f'"), ("f", "e'"))
        .square(("e", "f"), ("f'", "e"))
        .square(("e'", "f"), ("f", "e"))
        .square(("e'", "f'"), ("f'", "e'"))
        .build()
        .expect("valid by construction")
}

/// The rank-2 product of a 2-cycle `x ⇄ y` (edges `c`, `d`) with a vertex
/// `u` carrying two loops `a`, `b`.
pub fn product_example() -> Instance {
    let cycle = DirectedGraph::new(["x", "y"]).edge("c", "x", "y").edge("d", "y", "x");
    let loops = DirectedGraph::new(["u"]).edge("a", "u", "u").edge("b", "u", "u");
    product_graph("product", &[cycle, loops]).expect("valid by construction")
}
