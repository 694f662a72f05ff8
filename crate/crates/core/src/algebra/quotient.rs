//! Rewriting rules of a gauge-invariant quotient of a rank-1 instance.
//!
//! A quotient is described by a set `D` of vertices whose projections are
//! killed and a set `Ex` of vertices whose gap projection
//! `p_v − Σ P_a p_v` is killed. Each `v ∈ Ex` has a special pair `(a_v, w_v)`
//! (the first surviving edge/target pair), and the rule
//! `(s a_v) p_{w_v} (t a_v)* → s p_v t* − Σ (s a) p_w (t a)*` removes it.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use super::BasisWord;
use crate::error::ConditionError;
use crate::scalar::Scalar;
use crate::semigraph::{EdgeId, Element, Instance, VertexId, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientRules {
    dead: VertexSet,
    expandable: VertexSet,
    /// For each `v ∈ Ex`: its surviving `(edge, target)` pairs, special pair first.
    pairs: BTreeMap<VertexId, Vec<(EdgeId, VertexId)>>,
}

impl QuotientRules {
    /// Validates `(D, Ex)` against `inst` and derives the special pairs.
    pub fn new(inst: &Instance, dead: VertexSet, expandable: VertexSet) -> Result<Self, ConditionError> {
        if inst.rank() != 1 {
            return Err(ConditionError::UnsupportedRank);
        }
        let mut pairs = BTreeMap::new();
        for &v in &expandable {
            let list = surviving_pairs(inst, v, &dead)?;
            if list.is_empty() || dead.contains(&v) {
                return Err(ConditionError::UnsupportedRelation(format!(
                    "vertex `{}` cannot carry a gap relation",
                    inst.vertex_name(v)
                )));
            }
            pairs.insert(v, list);
        }
        Ok(Self {
            dead,
            expandable,
            pairs,
        })
    }

    pub fn dead(&self) -> &VertexSet {
        &self.dead
    }

    pub fn expandable(&self) -> &VertexSet {
        &self.expandable
    }

    pub fn is_trivial(&self) -> bool {
        self.dead.is_empty() && self.expandable.is_empty()
    }

    /// The normal form of a basis word as a linear combination of normal words.
    pub fn normal_form(&self, inst: &Instance, w: &BasisWord) -> Vec<(BasisWord, Scalar)> {
        let mut acc: BTreeMap<BasisWord, Scalar> = BTreeMap::new();
        self.reduce(inst, w, Scalar::one(), &mut acc);
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    fn reduce(&self, inst: &Instance, w: &BasisWord, c: Scalar, acc: &mut BTreeMap<BasisWord, Scalar>) {
        if self.dead.contains(&w.v) {
            return;
        }
        if let (Some(&a), Some(&b)) = (w.s.letters().last(), w.t.letters().last()) {
            if a == b {
                let found = single_domain(inst, a).and_then(|u| self.pairs.get(&u).map(|l| (u, l)));
                if let Some((u, list)) = found {
                    if list[0] == (a, w.v) {
                        let s0 = drop_last(inst, &w.s);
                        let t0 = drop_last(inst, &w.t);
                        self.reduce(inst, &BasisWord::new(s0.clone(), u, t0.clone()), c.clone(), acc);
                        for &(e, x) in &list[1..] {
                            let letter = inst.letter(e).expect("surviving edge");
                            let (Some(se), Some(te)) = (inst.compose(&s0, &letter), inst.compose(&t0, &letter)) else {
                                continue;
                            };
                            self.reduce(inst, &BasisWord::new(se, x, te), -c.clone(), acc);
                        }
                        return;
                    }
                }
            }
        }
        let slot = acc.entry(w.clone()).or_insert_with(Scalar::zero);
        *slot += c;
    }

    /// Whether a half-standard or semigraph element survives: some atom of `Q_x` is alive.
    pub fn survives(&self, inst: &Instance, x: &Element) -> bool {
        inst.source_vertices(x).iter().any(|v| !self.dead.contains(v))
    }
}

/// The surviving `(edge, target)` pairs at `v`, in canonical order.
pub(crate) fn surviving_pairs(
    inst: &Instance,
    v: VertexId,
    dead: &VertexSet,
) -> Result<Vec<(EdgeId, VertexId)>, ConditionError> {
    let mut out = Vec::new();
    for e in inst.edges() {
        let dom: BTreeSet<VertexId> = inst.edge(e).domain();
        if !dom.contains(&v) {
            continue;
        }
        if dom.len() != 1 {
            return Err(ConditionError::NonGraphEdge(inst.edge_name(e).to_string()));
        }
        for &w in inst.edge(e).image_of(v) {
            if !dead.contains(&w) {
                out.push((e, w));
            }
        }
    }
    Ok(out)
}

fn single_domain(inst: &Instance, e: EdgeId) -> Option<VertexId> {
    let dom = inst.edge(e).domain();
    (dom.len() == 1).then(|| *dom.iter().next().expect("nonempty"))
}

fn drop_last(inst: &Instance, x: &Element) -> Element {
    let letters = &x.letters()[..x.len() - 1];
    inst.element_from_letters(letters).expect("prefix of an element")
}
