//! The graded *-algebra of an instance over exact Gaussian rationals.
//!
//! Elements are finite linear combinations of basis words `(s, v, t)`,
//! standing for `s p_v t*` with `v ∈ Q_s ∩ Q_t`. The projection part of every
//! standard word is decomposed over singleton vertex sets, so distinct basis
//! words are linearly independent and equality is syntactic. Vertex sets are
//! finite, so `Σ_v p_v` is a unit and `⊤` is identified with it.

mod fock;
mod projection;
pub(crate) mod quotient;
mod word;

pub use fock::{FockSpace, SparseMatrix};
pub use projection::HalfStandard;
pub use quotient::QuotientRules;
pub use word::{FormalWord, Letter, Literal};

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::degree::DegreeDiff;
use crate::error::AlgebraError;
use crate::projections::ProjectionSet;
use crate::scalar::{format_scalar, Scalar};
use crate::semigraph::{EdgeId, Element, Instance, VertexId};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// The standard word `s p_v t*` with a singleton projection part.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisWord {
    pub s: Element,
    pub t: Element,
    pub v: VertexId,
}

impl BasisWord {
    pub fn new(s: Element, v: VertexId, t: Element) -> Self {
        Self { s, t, v }
    }

    pub fn degree(&self) -> DegreeDiff {
        DegreeDiff::between(self.s.degree(), self.t.degree())
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.t.clone(), self.v, self.s.clone())
    }

    pub fn is_diagonal(&self) -> bool {
        self.s == self.t
    }
}

/// A finite linear combination of basis words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    tag: u64,
    terms: BTreeMap<BasisWord, Scalar>,
}

impl AlgebraElement {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisWord, &Scalar)> {
        self.terms.iter()
    }

    /// The coefficient map, as a sparse vector over basis words.
    pub fn to_vector(&self) -> BTreeMap<BasisWord, Scalar> {
        self.terms.clone()
    }

    pub fn coefficient(&self, w: &BasisWord) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// The degree when every term has the same one; `None` for zero or mixed elements.
    pub fn homogeneous_degree(&self) -> Option<DegreeDiff> {
        let mut degrees = self.terms.keys().map(BasisWord::degree);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    fn add_term(&mut self, w: BasisWord, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }
}

/// The algebra of an instance, universal or a gauge-invariant quotient.
#[derive(Clone, Debug)]
pub struct Algebra {
    id: u64,
    inst: Arc<Instance>,
    quotient: Option<Arc<QuotientRules>>,
}

impl Algebra {
    pub fn new(inst: Arc<Instance>) -> Self {
        Self {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            inst,
            quotient: None,
        }
    }

    pub(crate) fn with_quotient(inst: Arc<Instance>, rules: QuotientRules) -> Self {
        Self {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            inst,
            quotient: Some(Arc::new(rules)),
        }
    }

    pub fn instance(&self) -> &Arc<Instance> {
        &self.inst
    }

    pub fn quotient_rules(&self) -> Option<&QuotientRules> {
        self.quotient.as_deref()
    }

    pub fn is_quotient(&self) -> bool {
        self.quotient.is_some()
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            tag: self.id,
            terms: BTreeMap::new(),
        }
    }

    /// The unit `⊤ = Σ_v p_v`.
    pub fn unit(&self) -> AlgebraElement {
        self.projection(&ProjectionSet::Top)
    }

    pub fn scalar(&self, c: Scalar) -> AlgebraElement {
        self.scale(&self.unit(), &c).expect("same algebra")
    }

    /// The basis word `s p_v t*`, normalized; zero if `v ∉ Q_s ∩ Q_t`.
    pub fn basis(&self, s: &Element, v: VertexId, t: &Element) -> AlgebraElement {
        let mut out = self.zero();
        if self.is_valid(s, v, t) {
            self.push_normalized(&mut out, BasisWord::new(s.clone(), v, t.clone()), Scalar::one());
        }
        out
    }

    fn is_valid(&self, s: &Element, v: VertexId, t: &Element) -> bool {
        let ok = |x: &Element| x.is_unit() || self.inst.source_vertices(x).contains(&v);
        ok(s) && ok(t)
    }

    /// The standard word `s p t*`.
    pub fn standard(&self, s: &Element, p: &ProjectionSet, t: &Element) -> AlgebraElement {
        let mut out = self.zero();
        for v in p.members(&self.inst) {
            if self.is_valid(s, v, t) {
                self.push_normalized(&mut out, BasisWord::new(s.clone(), v, t.clone()), Scalar::one());
            }
        }
        out
    }

    /// The element `x = x Q_x`.
    pub fn element(&self, x: &Element) -> AlgebraElement {
        self.standard(x, &ProjectionSet::Top, &Element::unit())
    }

    pub fn projection(&self, p: &ProjectionSet) -> AlgebraElement {
        self.standard(&Element::unit(), p, &Element::unit())
    }

    /// The range projection `P_x = x x*`.
    pub fn range_of(&self, x: &Element) -> AlgebraElement {
        self.standard(x, &ProjectionSet::Top, x)
    }

    pub fn letter(&self, e: EdgeId) -> AlgebraElement {
        match self.inst.letter(e) {
            Some(x) => self.element(&x),
            None => self.zero(),
        }
    }

    fn check(&self, a: &AlgebraElement) -> Result<(), AlgebraError> {
        if a.tag == self.id {
            Ok(())
        } else {
            Err(AlgebraError::InstanceMismatch)
        }
    }

    fn push_normalized(&self, out: &mut AlgebraElement, w: BasisWord, c: Scalar) {
        match &self.quotient {
            None => out.add_term(w, c),
            Some(rules) => {
                for (w2, c2) in rules.normal_form(&self.inst, &w) {
                    out.add_term(w2, &c * c2);
                }
            }
        }
    }

    pub fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.check(a)?;
        self.check(b)?;
        let mut out = a.clone();
        for (w, c) in &b.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.add(a, &self.scale(b, &-Scalar::one())?)
    }

    pub fn scale(&self, a: &AlgebraElement, c: &Scalar) -> Result<AlgebraElement, AlgebraError> {
        self.check(a)?;
        let mut out = self.zero();
        for (w, x) in &a.terms {
            out.add_term(w.clone(), x * c);
        }
        Ok(out)
    }

    pub fn adjoint(&self, a: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.check(a)?;
        let mut out = self.zero();
        for (w, c) in &a.terms {
            out.add_term(w.adjoint(), c.conj());
        }
        Ok(out)
    }

    pub fn multiply(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.check(a)?;
        self.check(b)?;
        let mut out = self.zero();
        for (x, cx) in &a.terms {
            for (y, cy) in &b.terms {
                let c = cx * cy;
                for w in self.multiply_words(x, y) {
                    self.push_normalized(&mut out, w, c.clone());
                }
            }
        }
        Ok(out)
    }

    /// `(s p_v t*)(u p_w z*) = Σ (sα) p_x (zβ)*` over `(α, β) ∈ T^(min)(t, u)` and
    /// `x ∈ skip(α, v) ∩ Q_{tα} ∩ skip(β, w)`.
    fn multiply_words(&self, x: &BasisWord, y: &BasisWord) -> Vec<BasisWord> {
        let inst = &*self.inst;
        let mut out = Vec::new();
        let pv = ProjectionSet::Set([x.v].into());
        let pw = ProjectionSet::Set([y.v].into());
        for (alpha, beta) in inst.min_common_extensions(&x.t, &y.s).iter() {
            let Some(ta) = inst.compose(&x.t, alpha) else { continue };
            let q = inst
                .skip(alpha, &pv)
                .meet(&inst.source_projection(&ta))
                .meet(&inst.skip(beta, &pw));
            let ProjectionSet::Set(atoms) = q else { continue };
            if atoms.is_empty() {
                continue;
            }
            let (Some(sa), Some(zb)) = (inst.compose(&x.s, alpha), inst.compose(&y.t, beta)) else {
                continue;
            };
            for v in atoms {
                out.push(BasisWord::new(sa.clone(), v, zb.clone()));
            }
        }
        out
    }

    /// Re-expresses an element of another algebra over the same instance,
    /// applying this algebra's normal form.
    pub fn transfer(&self, a: &AlgebraElement) -> AlgebraElement {
        let mut out = self.zero();
        for (w, c) in &a.terms {
            self.push_normalized(&mut out, w.clone(), c.clone());
        }
        out
    }

    pub fn is_zero(&self, a: &AlgebraElement) -> bool {
        a.is_zero()
    }

    /// Groups the terms by degree.
    pub fn fibers(&self, a: &AlgebraElement) -> BTreeMap<DegreeDiff, AlgebraElement> {
        let mut out: BTreeMap<DegreeDiff, AlgebraElement> = BTreeMap::new();
        for (w, c) in &a.terms {
            out.entry(w.degree())
                .or_insert_with(|| self.zero())
                .add_term(w.clone(), c.clone());
        }
        out
    }

    /// `a a*`.
    pub fn range_projection(&self, a: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.multiply(a, &self.adjoint(a)?)
    }

    /// True when `a = a* = a²`.
    pub fn is_projection(&self, a: &AlgebraElement) -> Result<bool, AlgebraError> {
        Ok(self.adjoint(a)? == *a && self.multiply(a, a)? == *a)
    }

    /// Canonical text: terms sorted by degree, then `s`, `t` and atom; each
    /// basis word printed as the re-parseable literal `s p{v} t*`.
    pub fn format(&self, a: &AlgebraElement) -> String {
        let mut parts: Vec<(Scalar, String)> = Vec::new();
        let mut terms: Vec<(&BasisWord, &Scalar)> = a.terms.iter().collect();
        terms.sort_by(|(x, _), (y, _)| x.degree().cmp(&y.degree()).then_with(|| x.cmp(y)));
        for (w, c) in terms {
            parts.push((c.clone(), self.format_word(w)));
        }
        if parts.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (c, body)) in parts.iter().enumerate() {
            let negative = c.im.is_zero() && c.re.is_negative();
            let mag = if negative { -c.clone() } else { c.clone() };
            match (i, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if !mag.is_one() {
                out.push_str(&format_scalar(&mag));
                out.push(' ');
            }
            out.push_str(body);
        }
        out
    }

    pub fn format_word(&self, w: &BasisWord) -> String {
        let inst = &*self.inst;
        let mut parts: Vec<String> = w.s.letters().iter().map(|e| inst.edge_name(*e).to_string()).collect();
        parts.push(format!("p{{{}}}", inst.vertex_name(w.v)));
        parts.extend(w.t.letters().iter().rev().map(|e| format!("{}*", inst.edge_name(*e))));
        parts.join(" ")
    }
}
