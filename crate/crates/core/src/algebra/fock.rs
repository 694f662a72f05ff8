//! A truncated Fock representation, used as an independent zero test.
//!
//! The space has basis `δ_{μ,x}` for paths `μ` with `d(μ) ≤ depth` and
//! `x ∈ Q_μ`. A path `s` acts by prepending, a projection `p` by keeping the
//! states with `x ∈ skip(μ, p)`, and adjoints by the conjugate transpose.
//! Only composition and skips of the semigraph are used here; the
//! multiplication of the algebra is not.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::{Algebra, AlgebraElement, FormalWord, Letter, Literal};
use crate::degree::MultiDegree;
use crate::error::AlgebraError;
use crate::projections::ProjectionSet;
use crate::scalar::Scalar;
use crate::semigraph::{Element, Instance, VertexId};

/// A sparse square matrix over exact scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    dim: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl SparseMatrix {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.entries.insert((i, i), Scalar::one());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Scalar {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Scalar)> {
        self.entries.iter()
    }

    fn add_entry(&mut self, row: usize, col: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.entries.entry((row, col)).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.entries.remove(&(row, col));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((r, c), x) in &other.entries {
            out.add_entry(*r, *c, x.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.dim);
        for ((r, k), x) in &self.entries {
            out.add_entry(*r, *k, x * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut by_row: HashMap<usize, Vec<(usize, &Scalar)>> = HashMap::new();
        for ((r, c), x) in &other.entries {
            by_row.entry(*r).or_default().push((*c, x));
        }
        let mut out = Self::zero(self.dim);
        for ((r, k), x) in &self.entries {
            for (c, y) in by_row.get(k).into_iter().flatten() {
                out.add_entry(*r, *c, x * *y);
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|((r, c), x)| ((*c, *r), x.conj())).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

/// The truncated path space `{δ_{μ,x} : d(μ) ≤ depth, x ∈ Q_μ}`.
#[derive(Clone, Debug)]
pub struct FockSpace {
    depth: MultiDegree,
    states: Vec<(Element, VertexId)>,
    index: HashMap<(Element, VertexId), usize>,
}

impl FockSpace {
    pub fn new(inst: &Instance, depth: &MultiDegree) -> Self {
        let mut states = Vec::new();
        for mu in inst.elements_up_to(depth) {
            for x in inst.source_vertices(&mu) {
                states.push((mu.clone(), x));
            }
        }
        let index = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Self {
            depth: depth.clone(),
            states,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn depth(&self) -> &MultiDegree {
        &self.depth
    }

    pub fn state(&self, i: usize) -> &(Element, VertexId) {
        &self.states[i]
    }

    /// The operator of a path `s`: `δ_{μ,x} ↦ δ_{sμ,x}`.
    pub fn path(&self, inst: &Instance, s: &Element) -> SparseMatrix {
        let mut m = SparseMatrix::zero(self.dim());
        for (i, (mu, x)) in self.states.iter().enumerate() {
            let Some(smu) = inst.compose(s, mu) else { continue };
            if let Some(&j) = self.index.get(&(smu, *x)) {
                m.add_entry(j, i, Scalar::one());
            }
        }
        m
    }

    pub fn projection(&self, inst: &Instance, p: &ProjectionSet) -> SparseMatrix {
        let mut m = SparseMatrix::zero(self.dim());
        for (i, (mu, x)) in self.states.iter().enumerate() {
            let keep = match p {
                ProjectionSet::Top => true,
                ProjectionSet::Set(set) => {
                    if mu.is_unit() {
                        set.contains(x)
                    } else {
                        inst.image_along(mu, set).contains(x)
                    }
                }
            };
            if keep {
                m.add_entry(i, i, Scalar::one());
            }
        }
        m
    }

    pub fn letter(&self, inst: &Instance, l: &Letter) -> SparseMatrix {
        match l {
            Letter::Edge { edge, star } => {
                let m = match inst.letter(*edge) {
                    Some(e) => self.path(inst, &e),
                    None => SparseMatrix::zero(self.dim()),
                };
                if *star {
                    m.adjoint()
                } else {
                    m
                }
            }
            Letter::Projection(p) => self.projection(inst, p),
        }
    }

    pub fn word(&self, inst: &Instance, w: &FormalWord) -> SparseMatrix {
        let mut acc = SparseMatrix::identity(self.dim());
        for l in w.letters() {
            acc = acc.mul(&self.letter(inst, l));
        }
        acc
    }

    /// True when every column whose path has degree at most `cols` vanishes.
    pub fn vanishes_on(&self, m: &SparseMatrix, cols: &MultiDegree) -> bool {
        m.entries().all(|((_, c), _)| !self.states[*c].0.degree().le(cols))
    }
}

fn letter_counts(w: &FormalWord, inst: &Instance) -> (MultiDegree, MultiDegree) {
    let mut stars = MultiDegree::zero();
    let mut plain = MultiDegree::zero();
    for l in w.letters() {
        if let Letter::Edge { edge, star } = l {
            let c = inst.coord(*edge);
            let target = if *star { &mut stars } else { &mut plain };
            target.set(c, target.get(c) + 1);
        }
    }
    (stars, plain)
}

impl Algebra {
    /// The Fock operator of `a` on paths of degree at most `depth`.
    pub fn fock_matrix(
        &self,
        a: &AlgebraElement,
        depth: &MultiDegree,
    ) -> Result<(FockSpace, SparseMatrix), AlgebraError> {
        if self.is_quotient() {
            return Err(AlgebraError::OracleUnavailable);
        }
        for (w, _) in a.terms() {
            for part in [&w.s, &w.t] {
                if !part.degree().le(depth) {
                    return Err(AlgebraError::DepthOverflow {
                        degree: part.degree().to_string(),
                        depth: depth.to_string(),
                    });
                }
            }
        }
        let space = FockSpace::new(&self.inst, depth);
        let mut m = SparseMatrix::zero(space.dim());
        for (w, c) in a.terms() {
            let p = ProjectionSet::Set([w.v].into());
            let op = space
                .path(&self.inst, &w.s)
                .mul(&space.projection(&self.inst, &p))
                .mul(&space.path(&self.inst, &w.t).adjoint());
            m = m.add(&op.scale(c));
        }
        Ok((space, m))
    }

    /// Decides `a = 0` through the Fock representation at a depth where it is faithful.
    pub fn fock_is_zero(&self, a: &AlgebraElement) -> Result<bool, AlgebraError> {
        let mut js = MultiDegree::zero();
        let mut jt = MultiDegree::zero();
        for (w, _) in a.terms() {
            js = js.join(w.s.degree());
            jt = jt.join(w.t.degree());
        }
        let (space, m) = self.fock_matrix(a, &(&js + &jt))?;
        Ok(space.vanishes_on(&m, &jt))
    }

    /// Decides whether a formal linear combination of words vanishes, using
    /// letter operators only.
    pub fn fock_literal_is_zero(&self, lit: &Literal) -> Result<bool, AlgebraError> {
        if self.is_quotient() {
            return Err(AlgebraError::OracleUnavailable);
        }
        let mut stars = MultiDegree::zero();
        let mut plain = MultiDegree::zero();
        for (_, w) in &lit.terms {
            let (s, p) = letter_counts(w, &self.inst);
            stars = stars.join(&s);
            plain = plain.join(&p);
        }
        let space = FockSpace::new(&self.inst, &(&stars + &plain));
        let mut m = SparseMatrix::zero(space.dim());
        for (c, w) in &lit.terms {
            m = m.add(&space.word(&self.inst, w).scale(c));
        }
        Ok(space.vanishes_on(&m, &stars))
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::semigraph::constructors::cuntz;

    #[test]
    fn truncated_shifts_on_o2() {
        let inst = Arc::new(cuntz(2));
        let alg = Algebra::new(inst.clone());
        let depth = MultiDegree::from_slice(&[2]);
        let space = FockSpace::new(&inst, &depth);
        assert_eq!(space.dim(), 7);
        let a_star_a = Literal::parse(&inst, "a* a").unwrap();
        let qa = Literal::parse(&inst, "p{v}").unwrap();
        let m1 = space.word(&inst, &a_star_a.terms[0].1);
        let m2 = space.word(&inst, &qa.terms[0].1);
        let one = MultiDegree::from_slice(&[1]);
        assert!(space.vanishes_on(&m1.add(&m2.scale(&-Scalar::one())), &one));
        let (_, p) = alg.fock_matrix(&alg.parse("p{v}").unwrap(), &depth).unwrap();
        assert_eq!(p, SparseMatrix::identity(7));
    }

    #[test]
    fn zero_tests_agree_on_examples() {
        let inst = Arc::new(cuntz(2));
        let alg = Algebra::new(inst.clone());
        for (text, zero) in [
            ("a* b", true),
            ("a b b* a* - a b p{v} b* a*", true),
            ("top - a a* - b b*", false),
        ] {
            let lit = Literal::parse(&inst, text).unwrap();
            assert_eq!(alg.fock_literal_is_zero(&lit).unwrap(), zero, "{text}");
            assert_eq!(alg.fock_is_zero(&alg.literal_to_element(&lit)).unwrap(), zero, "{text}");
        }
    }
}
