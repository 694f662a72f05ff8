use std::collections::BTreeSet;
use std::sync::Arc;

use super::{EdgeId, Element, Instance, VertexId, VertexSet};
use crate::degree::MultiDegree;
use crate::error::SemigraphError;

impl Instance {
    /// Image of a vertex set under the relation of edge `e`.
    pub fn image_of_set(&self, e: EdgeId, set: &VertexSet) -> VertexSet {
        let edge = self.edge(e);
        set.iter().flat_map(|v| edge.image_of(*v).iter().copied()).collect()
    }

    fn image_along_letters(&self, letters: &[EdgeId], start: &VertexSet) -> VertexSet {
        let mut cur = start.clone();
        for &e in letters {
            if cur.is_empty() {
                break;
            }
            cur = self.image_of_set(e, &cur);
        }
        cur
    }

    /// Image of `start` along the letters of `x`.
    pub fn image_along(&self, x: &Element, start: &VertexSet) -> VertexSet {
        self.image_along_letters(x.letters(), start)
    }

    /// The vertices in the source projection of `x`; all vertices for the unit.
    pub fn source_vertices(&self, x: &Element) -> VertexSet {
        self.image_along(x, &self.all_vertices())
    }

    /// Rewrites `letters` by adjacent commuting-square swaps so that their
    /// coordinates follow `target`.
    fn reorder(&self, letters: &[EdgeId], target: &[usize]) -> Result<Vec<EdgeId>, SemigraphError> {
        let mut w = letters.to_vec();
        for p in 0..target.len() {
            if self.coord(w[p]) == target[p] {
                continue;
            }
            let q = (p + 1..w.len())
                .find(|&q| self.coord(w[q]) == target[p])
                .expect("target is a permutation of the coordinates");
            for j in (p..q).rev() {
                let (u, v) = (w[j], w[j + 1]);
                let swapped = if self.coord(u) < self.coord(v) {
                    self.square_forward(u, v)
                } else {
                    self.square_backward(u, v)
                };
                let (a, b) = swapped.ok_or_else(|| {
                    SemigraphError::MissingSquare(self.edge_name(u).to_string(), self.edge_name(v).to_string())
                })?;
                w[j] = a;
                w[j + 1] = b;
            }
        }
        Ok(w)
    }

    fn canonical_letters(&self, letters: &[EdgeId]) -> Result<Vec<EdgeId>, SemigraphError> {
        if self.rank() == 1 {
            return Ok(letters.to_vec());
        }
        let mut target: Vec<usize> = letters.iter().map(|e| self.coord(*e)).collect();
        target.sort_unstable();
        self.reorder(letters, &target)
    }

    /// The product `xy` in canonical form, or `None` when it is undefined.
    pub fn compose(&self, x: &Element, y: &Element) -> Option<Element> {
        if x.is_unit() {
            return Some(y.clone());
        }
        if y.is_unit() {
            return Some(x.clone());
        }
        let start = self.source_vertices(x);
        if self.image_along(y, &start).is_empty() {
            return None;
        }
        let mut letters = x.letters().to_vec();
        letters.extend_from_slice(y.letters());
        let letters = self.canonical_letters(&letters).ok()?;
        Some(Element::from_parts(letters, x.degree() + y.degree()))
    }

    /// The unique `(x₁, x₂)` with `x = x₁x₂` and `d(x₁) = n1`.
    pub fn factorize(&self, x: &Element, n1: &MultiDegree) -> Result<(Element, Element), SemigraphError> {
        let rest = x.degree().checked_sub(n1).ok_or_else(|| SemigraphError::OutOfRange {
            requested: n1.to_string(),
            available: x.degree().to_string(),
        })?;
        let split = n1.total() as usize;
        let letters = if self.rank() == 1 {
            x.letters().to_vec()
        } else {
            let mut target = Vec::with_capacity(x.len());
            for part in [n1, &rest] {
                for c in 0..self.rank() {
                    target.extend(std::iter::repeat_n(c, part.get(c) as usize));
                }
            }
            self.reorder(x.letters(), &target)?
        };
        let (head, tail) = letters.split_at(split);
        Ok((
            Element::from_parts(head.to_vec(), n1.clone()),
            Element::from_parts(tail.to_vec(), rest),
        ))
    }

    /// The segment `x(n1, n2)`.
    pub fn segment(&self, x: &Element, n1: &MultiDegree, n2: &MultiDegree) -> Result<Element, SemigraphError> {
        if !n1.le(n2) {
            return Err(SemigraphError::OutOfRange {
                requested: n1.to_string(),
                available: n2.to_string(),
            });
        }
        let (head, _) = self.factorize(x, n2)?;
        let (_, mid) = self.factorize(&head, n1)?;
        Ok(mid)
    }

    /// Canonical elements `α` of degree `n` with `image_along(α, start)` nonempty,
    /// in ascending order.
    pub fn extensions_from(&self, start: &VertexSet, n: &MultiDegree) -> Vec<Element> {
        let mut coords = Vec::new();
        for c in 0..self.rank() {
            coords.extend(std::iter::repeat_n(c, n.get(c) as usize));
        }
        let by_coord: Vec<Vec<EdgeId>> = (0..self.rank())
            .map(|c| self.edges().filter(|e| self.coord(*e) == c).collect())
            .collect();
        let mut out = Vec::new();
        let mut stack: Vec<EdgeId> = Vec::with_capacity(coords.len());
        self.extend_rec(&coords, &by_coord, start, &mut stack, &mut out);
        out.into_iter()
            .map(|letters| Element::from_parts(letters, n.clone()))
            .collect()
    }

    fn extend_rec(
        &self,
        coords: &[usize],
        by_coord: &[Vec<EdgeId>],
        cur: &VertexSet,
        stack: &mut Vec<EdgeId>,
        out: &mut Vec<Vec<EdgeId>>,
    ) {
        let depth = stack.len();
        if depth == coords.len() {
            out.push(stack.clone());
            return;
        }
        for &e in &by_coord[coords[depth]] {
            let next = self.image_of_set(e, cur);
            if next.is_empty() {
                continue;
            }
            stack.push(e);
            self.extend_rec(coords, by_coord, &next, stack, out);
            stack.pop();
        }
    }

    /// `T₁^(n)`.
    pub fn elements_of_degree(&self, n: &MultiDegree) -> Vec<Element> {
        if n.is_zero() {
            return vec![Element::unit()];
        }
        self.extensions_from(&self.all_vertices(), n)
    }

    /// `T₁^(≤ bound)` in canonical order.
    pub fn elements_up_to(&self, bound: &MultiDegree) -> Vec<Element> {
        let mut out: Vec<Element> = bound
            .down_set(self.rank())
            .iter()
            .flat_map(|n| self.elements_of_degree(n))
            .collect();
        out.sort();
        out
    }

    /// `T₁^(min)(x, y)`: pairs `(α, β)` with `xα = yβ` of degree `d(x) ∨ d(y)`.
    pub fn min_common_extensions(&self, x: &Element, y: &Element) -> Arc<[(Element, Element)]> {
        let key = (x.clone(), y.clone());
        if let Some(hit) = self.mce_cache.read().expect("cache lock").get(&key) {
            return hit.clone();
        }
        let result: Arc<[(Element, Element)]> = self.compute_mce(x, y).into();
        self.mce_cache.write().expect("cache lock").insert(key, result.clone());
        result
    }

    fn compute_mce(&self, x: &Element, y: &Element) -> Vec<(Element, Element)> {
        let join = x.degree().join(y.degree());
        let ext = join.checked_sub(x.degree()).expect("join dominates");
        let start = self.source_vertices(x);
        let mut out: Vec<(Element, Element)> = Vec::new();
        let candidates = if ext.is_zero() {
            vec![Element::unit()]
        } else {
            self.extensions_from(&start, &ext)
        };
        for alpha in candidates {
            let Some(z) = self.compose(x, &alpha) else { continue };
            let Ok((head, beta)) = self.factorize(&z, y.degree()) else {
                continue;
            };
            if &head == y {
                out.push((alpha, beta));
            }
        }
        out.sort();
        out
    }

    /// Vertex transition graph: `v → w` when some edge relates them.
    pub fn successors(&self, v: VertexId) -> BTreeSet<VertexId> {
        self.edges().flat_map(|e| self.edge(e).image_of(v).to_vec()).collect()
    }

    /// True when `T₁` is a finite set, i.e. the transition graph is acyclic.
    pub fn is_finite(&self) -> bool {
        // Kahn's algorithm on the transition graph.
        let n = self.vertex_count();
        let mut indeg = vec![0usize; n];
        let succ: Vec<BTreeSet<VertexId>> = self.vertices().map(|v| self.successors(v)).collect();
        for s in &succ {
            for w in s {
                indeg[w.0 as usize] += 1;
            }
        }
        let mut queue: Vec<usize> = (0..n).filter(|i| indeg[*i] == 0).collect();
        let mut seen = 0;
        while let Some(v) = queue.pop() {
            seen += 1;
            for w in &succ[v] {
                indeg[w.0 as usize] -= 1;
                if indeg[w.0 as usize] == 0 {
                    queue.push(w.0 as usize);
                }
            }
        }
        seen == n
    }
}

#[cfg(test)]
mod tests {
    use super::super::constructors::{cuntz, single_loop, square_instance};
    use super::*;

    fn el(inst: &Instance, s: &str) -> Element {
        inst.parse_element(s).unwrap()
    }

    #[test]
    fn free_concatenation_in_cuntz() {
        let o2 = cuntz(2);
        let ab = o2.compose(&el(&o2, "a"), &el(&o2, "b")).unwrap();
        assert_eq!(o2.format_element(&ab), "a b");
        assert_eq!(ab.degree(), &MultiDegree::from_slice(&[2]));
        let a = el(&o2, "a");
        assert_eq!(o2.compose(&a, &Element::unit()).unwrap(), a);
    }

    #[test]
    fn factorize_and_segment_in_cuntz() {
        let o2 = cuntz(2);
        let ab = el(&o2, "a b");
        let (x, y) = o2.factorize(&ab, &MultiDegree::unit(0)).unwrap();
        assert_eq!((o2.format_element(&x), o2.format_element(&y)), ("a".into(), "b".into()));
        let (u, rest) = o2.factorize(&ab, &MultiDegree::zero()).unwrap();
        assert!(u.is_unit());
        assert_eq!(rest, ab);
        let abc = el(&o2, "a b a");
        let one = MultiDegree::unit(0);
        let two = MultiDegree::from_slice(&[2]);
        assert_eq!(o2.format_element(&o2.segment(&abc, &one, &two).unwrap()), "b");
        assert!(o2.segment(&abc, &two, &two).unwrap().is_unit());
        assert!(matches!(
            o2.factorize(&ab, &MultiDegree::from_slice(&[3])),
            Err(SemigraphError::OutOfRange { .. })
        ));
    }

    #[test]
    fn square_composition_is_canonical() {
        let sq = square_instance();
        let fe = sq.compose(&el(&sq, "f"), &el(&sq, "e'")).unwrap();
        assert_eq!(sq.format_element(&fe), "e f'");
        assert_eq!(fe.degree(), &MultiDegree::from_slice(&[1, 1]));
        let (a, b) = sq.factorize(&fe, &MultiDegree::unit(1)).unwrap();
        assert_eq!(
            (sq.format_element(&a), sq.format_element(&b)),
            ("f".into(), "e'".into())
        );
    }

    #[test]
    fn mixed_segment_matches_double_factorization() {
        let sq = square_instance();
        let x = el(&sq, "e e' f f'");
        let n1 = MultiDegree::from_slice(&[1, 0]);
        let n2 = MultiDegree::from_slice(&[2, 1]);
        let seg = sq.segment(&x, &n1, &n2).unwrap();
        let (head, _) = sq.factorize(&x, &n2).unwrap();
        let (_, expected) = sq.factorize(&head, &n1).unwrap();
        assert_eq!(seg, expected);
        assert_eq!(seg.degree(), &MultiDegree::from_slice(&[1, 1]));
    }

    #[test]
    fn minimal_common_extensions() {
        let o2 = cuntz(2);
        let (a, b) = (el(&o2, "a"), el(&o2, "b"));
        assert!(o2.min_common_extensions(&a, &b).is_empty());
        assert_eq!(
            &*o2.min_common_extensions(&a, &a),
            &[(Element::unit(), Element::unit())]
        );
        let ab = el(&o2, "a b");
        assert_eq!(&*o2.min_common_extensions(&a, &ab), &[(el(&o2, "b"), Element::unit())]);

        let sq = square_instance();
        let got = sq.min_common_extensions(&el(&sq, "e"), &el(&sq, "f"));
        assert_eq!(&*got, &[(el(&sq, "f'"), el(&sq, "e'"))]);
    }

    #[test]
    fn finiteness() {
        assert!(!cuntz(2).is_finite());
        assert!(!single_loop().is_finite());
        let path = Instance::builder("path", 1)
            .vertices(["u", "v"])
            .graph_edge("e", 0, "u", "v")
            .build()
            .unwrap();
        assert!(path.is_finite());
    }
}
