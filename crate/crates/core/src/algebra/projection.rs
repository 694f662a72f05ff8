//! Range projections of half-standard words and their products.

use std::collections::BTreeMap;

use num_traits::One;

use super::{Algebra, AlgebraElement};
use crate::error::AlgebraError;
use crate::projections::ProjectionSet;
use crate::semigraph::{Element, Instance, VertexSet};

/// The half-standard word `x p`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfStandard {
    pub x: Element,
    pub p: ProjectionSet,
}

impl HalfStandard {
    pub fn new(x: Element, p: ProjectionSet) -> Self {
        Self { x, p }
    }

    /// `x Q_x`, which equals `x`.
    pub fn of(inst: &Instance, x: Element) -> Self {
        let p = inst.source_projection(&x);
        Self { x, p }
    }

    /// Cuts `p` down to `Q_x`; `None` when the word is zero.
    pub fn normalized(&self, inst: &Instance) -> Option<Self> {
        let p = self.p.meet(&inst.source_projection(&self.x));
        (!p.is_zero()).then(|| Self::new(self.x.clone(), p))
    }

    pub fn display(&self, inst: &Instance) -> String {
        let p = match &self.p {
            ProjectionSet::Top => "top".to_string(),
            ProjectionSet::Set(s) => {
                let names: Vec<&str> = s.iter().map(|v| inst.vertex_name(*v)).collect();
                format!("p{{{}}}", names.join(","))
            }
        };
        if self.x.is_unit() {
            p
        } else {
            format!("{} {p}", inst.format_element(&self.x))
        }
    }
}

impl Algebra {
    pub fn half_standard(&self, h: &HalfStandard) -> AlgebraElement {
        self.standard(&h.x, &h.p, &Element::unit())
    }

    /// `P_h = x p x*`.
    pub fn range_of_half(&self, h: &HalfStandard) -> AlgebraElement {
        self.standard(&h.x, &h.p, &h.x)
    }

    /// Writes `P_{v₁} ⋯ P_{vₙ}` as a sum of mutually orthogonal range projections
    /// of half-standard words of one degree; the empty list is the zero projection.
    pub fn projection_product(&self, vs: &[HalfStandard]) -> Result<Vec<HalfStandard>, AlgebraError> {
        let Some(first) = vs.first() else {
            return Ok(Vec::new());
        };
        let mut acc = self.range_of_half(first);
        for v in &vs[1..] {
            acc = self.multiply(&acc, &self.range_of_half(v))?;
        }
        let mut grouped: BTreeMap<Element, VertexSet> = BTreeMap::new();
        for (w, c) in acc.terms() {
            if !w.is_diagonal() || !c.is_one() {
                return Err(AlgebraError::NotHalfStandard(self.format_word(w)));
            }
            grouped.entry(w.s.clone()).or_default().insert(w.v);
        }
        let out: Vec<HalfStandard> = grouped
            .into_iter()
            .map(|(x, set)| HalfStandard::new(x, ProjectionSet::Set(set)))
            .collect();
        if let Some(d) = out.first().map(|h| h.x.degree().clone()) {
            if let Some(bad) = out.iter().find(|h| *h.x.degree() != d) {
                return Err(AlgebraError::NotHalfStandard(bad.display(&self.inst)));
            }
        }
        for (i, a) in out.iter().enumerate() {
            for b in &out[i + 1..] {
                let prod = self.multiply(&self.range_of_half(a), &self.range_of_half(b))?;
                if !prod.is_zero() {
                    return Err(AlgebraError::NotHalfStandard(b.display(&self.inst)));
                }
            }
        }
        Ok(out)
    }

    /// `P_x (1 − P_{y₁}) ⋯ (1 − P_{yₘ})`, expanded in the unitization.
    pub fn standard_projection(&self, x: &HalfStandard, ys: &[HalfStandard]) -> AlgebraElement {
        let mut acc = self.range_of_half(x);
        for y in ys {
            if acc.is_zero() {
                break;
            }
            let gap = self.sub(&self.unit(), &self.range_of_half(y)).expect("same algebra");
            acc = self.multiply(&acc, &gap).expect("same algebra");
        }
        acc
    }
}
