use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::algebra::{Algebra, AlgebraElement, BasisWord, QuotientRules};
use crate::degree::MultiDegree;
use crate::error::ConditionError;
use crate::linalg::{EchelonBasis, SparseVector};
use crate::projections::ProjectionSet;
use crate::scalar::Scalar;
use crate::semigraph::{Element, Instance, VertexId, VertexSet};

/// Largest vertex count for which candidate ideals are enumerated.
const MAX_VERTICES: usize = 10;

fn kills(inst: &Instance, rules: &QuotientRules, r: &AlgebraElement) -> bool {
    let mut acc: BTreeMap<BasisWord, Scalar> = BTreeMap::new();
    for (w, c) in r.terms() {
        for (w2, c2) in rules.normal_form(inst, w) {
            let slot = acc.entry(w2).or_insert_with(Scalar::zero);
            *slot += c * c2;
        }
    }
    acc.values().all(Zero::is_zero)
}

fn subsets(items: &[VertexId]) -> impl Iterator<Item = VertexSet> + '_ {
    (0u32..1 << items.len()).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, v)| *v)
            .collect()
    })
}

/// The quotient of `alg` by the ideal generated by homogeneous `relations`.
///
/// Supported ideals are those generated by vertex projections and gap
/// projections. The smallest such ideal containing the relations is found by
/// enumeration, and each of its generators is then shown to lie in the ideal
/// generated by the relations, so the two ideals coincide.
pub fn quotient_by(alg: &Algebra, relations: &[AlgebraElement]) -> Result<Algebra, ConditionError> {
    let relations: Vec<AlgebraElement> = relations.iter().filter(|r| !r.is_zero()).cloned().collect();
    for r in &relations {
        if alg.fibers(r).len() > 1 {
            return Err(ConditionError::NotHomogeneous(alg.format(r)));
        }
    }
    if relations.is_empty() {
        return Ok(alg.clone());
    }
    let inst = alg.instance();
    if inst.rank() != 1 {
        return Err(ConditionError::UnsupportedRank);
    }
    if inst.vertex_count() > MAX_VERTICES {
        return Err(ConditionError::UnsupportedRelation(format!(
            "{} (quotients are searched on at most {MAX_VERTICES} vertices)",
            alg.format(&relations[0])
        )));
    }
    let (dead0, ex0) = match alg.quotient_rules() {
        Some(q) => (q.dead().clone(), q.expandable().clone()),
        None => (VertexSet::new(), VertexSet::new()),
    };

    let free: Vec<VertexId> = inst.vertices().filter(|v| !dead0.contains(v)).collect();
    let mut meet: Option<(VertexSet, VertexSet)> = None;
    for extra in subsets(&free) {
        let dead: VertexSet = dead0.union(&extra).copied().collect();
        if dead
            .iter()
            .any(|v| inst.successors(*v).iter().any(|w| !dead.contains(w)))
        {
            continue;
        }
        let open: Vec<VertexId> = inst
            .vertices()
            .filter(|v| !dead.contains(v) && !ex0.contains(v))
            .filter(|v| inst.successors(*v).iter().any(|w| !dead.contains(w)))
            .collect();
        let forced: VertexSet = ex0.difference(&dead).copied().collect();
        for more in subsets(&open) {
            let ex: VertexSet = forced.union(&more).copied().collect();
            let Ok(rules) = QuotientRules::new(inst, dead.clone(), ex.clone()) else {
                continue;
            };
            if !relations.iter().all(|r| kills(inst, &rules, r)) {
                continue;
            }
            meet = Some(match meet {
                None => (dead.clone(), ex),
                Some((d, e)) => {
                    let d2: VertexSet = d.intersection(&dead).copied().collect();
                    let wide: VertexSet = e.union(&d).copied().collect();
                    let wide2: VertexSet = ex.union(&dead).copied().collect();
                    let e2 = wide.intersection(&wide2).filter(|v| !d2.contains(v)).copied().collect();
                    (d2, e2)
                }
            });
        }
    }
    let (dead, ex) = meet.expect("killing every vertex is admissible");
    let unsupported = || ConditionError::UnsupportedRelation(alg.format(&relations[0]));
    let rules = QuotientRules::new(inst, dead.clone(), ex.clone()).map_err(|_| unsupported())?;
    if !relations.iter().all(|r| kills(inst, &rules, r)) {
        return Err(unsupported());
    }
    certify(alg, &relations, &dead0, &ex0, &dead, &ex)?;

    let quotient = Algebra::with_quotient(inst.clone(), rules);
    check_identifications(&quotient)?;
    Ok(quotient)
}

/// Shows that every new generator `p_v` (`v ∈ D`) and gap projection
/// (`v ∈ Ex`) lies in the ideal generated by the relations, using products
/// `x r y` with `x, y` standard words of length at most one.
fn certify(
    alg: &Algebra,
    relations: &[AlgebraElement],
    dead0: &VertexSet,
    ex0: &VertexSet,
    dead: &VertexSet,
    ex: &VertexSet,
) -> Result<(), ConditionError> {
    let inst = alg.instance();
    let short = inst.elements_up_to(&MultiDegree::from_slice(&[1]));
    let mut words = Vec::new();
    for s in &short {
        for t in &short {
            for v in inst.vertices() {
                let w = alg.basis(s, v, t);
                if !w.is_zero() {
                    words.push(w);
                }
            }
        }
    }
    let mut products = Vec::new();
    for x in &words {
        for r in relations {
            let xr = alg.multiply(x, r)?;
            if xr.is_zero() {
                continue;
            }
            for y in &words {
                let p = alg.multiply(&xr, y)?;
                if !p.is_zero() {
                    products.push(p);
                }
            }
        }
    }
    let modulo = |a: &AlgebraElement, c: &VertexSet| -> SparseVector<BasisWord> {
        a.terms()
            .filter(|(w, _)| !c.contains(&w.v))
            .map(|(w, k)| (w.clone(), k.clone()))
            .collect()
    };
    let gap = |v: VertexId, c: &VertexSet| -> Result<AlgebraElement, ConditionError> {
        let mut g = alg.projection(&ProjectionSet::Set([v].into()));
        for e in inst.edges() {
            for &w in inst.edge(e).image_of(v) {
                if c.contains(&w) {
                    continue;
                }
                let x = inst.letter(e).expect("edge letter");
                g = alg.sub(&g, &alg.basis(&x, w, &x))?;
            }
        }
        Ok(g)
    };

    let mut cdead = dead0.clone();
    let mut cex: VertexSet = ex0.clone();
    loop {
        let mut span = EchelonBasis::new();
        for p in &products {
            span.insert(&modulo(p, &cdead));
        }
        let mut changed = false;
        for &v in dead.difference(&cdead.clone()) {
            let inherited = inst
                .vertices()
                .any(|u| cdead.contains(&u) && inst.successors(u).contains(&v));
            let expanded = cex.contains(&v) && inst.successors(v).iter().all(|w| cdead.contains(w));
            let pv = alg.projection(&ProjectionSet::Set([v].into()));
            if inherited || expanded || span.contains(&modulo(&pv, &cdead)) {
                cdead.insert(v);
                changed = true;
            }
        }
        for &v in ex.difference(&cex.clone()) {
            if span.contains(&modulo(&gap(v, &cdead)?, &cdead)) {
                cex.insert(v);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let missing: Vec<String> = dead
        .difference(&cdead)
        .map(|v| format!("p{{{}}}", inst.vertex_name(*v)))
        .chain(
            ex.difference(&cex)
                .filter(|v| !cdead.contains(v))
                .map(|v| format!("the gap projection at {}", inst.vertex_name(*v))),
        )
        .collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(ConditionError::UnsupportedRelation(format!(
            "{} (could not show that {} lies in the generated ideal)",
            alg.format(&relations[0]),
            missing.join(", ")
        )))
    }
}

/// Checks that distinct surviving elements of degree at most 3 stay distinct.
fn check_identifications(alg: &Algebra) -> Result<(), ConditionError> {
    let inst = alg.instance();
    let mut seen: HashMap<Vec<(BasisWord, Scalar)>, Element> = HashMap::new();
    for x in inst.elements_up_to(&MultiDegree::uniform(inst.rank(), 3)) {
        let a = alg.element(&x);
        if a.is_zero() {
            continue;
        }
        let key: Vec<(BasisWord, Scalar)> = a.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
        if let Some(y) = seen.insert(key, x.clone()) {
            return Err(ConditionError::Identification(
                inst.format_element(&y),
                inst.format_element(&x),
            ));
        }
    }
    Ok(())
}

/// `T^(min)(x, y)` of the quotient: the pairs whose common extension survives.
pub fn quotient_min_common_extensions(alg: &Algebra, x: &Element, y: &Element) -> Vec<(Element, Element)> {
    let inst = alg.instance();
    inst.min_common_extensions(x, y)
        .iter()
        .filter(|(alpha, _)| inst.compose(x, alpha).is_some_and(|z| !alg.element(&z).is_zero()))
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::conditions::make_full;
    use crate::semigraph::constructors::{ck4, cuntz};

    #[test]
    fn empty_relations_keep_the_algebra() {
        let alg = Algebra::new(Arc::new(cuntz(2)));
        let q = quotient_by(&alg, &[]).unwrap();
        assert!(!q.is_quotient());
    }

    #[test]
    fn toeplitz_to_cuntz() {
        let alg = Algebra::new(Arc::new(cuntz(2)));
        let q = quotient_by(&alg, &[alg.parse("1 - a a* - b b*").unwrap()]).unwrap();
        let full = make_full(&alg).unwrap();
        assert_eq!(q.quotient_rules(), full.quotient_rules());
    }

    #[test]
    fn mixed_degrees_are_rejected() {
        let alg = Algebra::new(Arc::new(cuntz(2)));
        let r = alg.parse("a + a a*").unwrap();
        assert!(matches!(
            quotient_by(&alg, &[r]),
            Err(ConditionError::NotHomogeneous(_))
        ));
    }

    #[test]
    fn killing_a_letter_kills_everything() {
        let alg = Algebra::new(Arc::new(cuntz(2)));
        let q = quotient_by(&alg, &[alg.parse("a").unwrap()]).unwrap();
        assert!(q.unit().is_zero());
    }

    #[test]
    fn vertex_relation_on_a_graph() {
        let inst = Arc::new(ck4());
        let alg = Algebra::new(inst.clone());
        let v = inst.vertex_name(crate::semigraph::VertexId(0)).to_string();
        let q = quotient_by(&alg, &[alg.parse(&format!("p{{{v}}}")).unwrap()]).unwrap();
        let dead = q.quotient_rules().unwrap().dead();
        assert!(dead.contains(&crate::semigraph::VertexId(0)));
        for d in dead {
            assert!(inst.successors(*d).iter().all(|w| dead.contains(w)));
        }
    }

    #[test]
    fn filtered_extensions() {
        let inst = Arc::new(cuntz(2));
        let alg = Algebra::new(inst.clone());
        let a = inst.letter_named("a").unwrap();
        let b = inst.letter_named("b").unwrap();
        assert_eq!(quotient_min_common_extensions(&alg, &a, &a).len(), 1);
        assert!(quotient_min_common_extensions(&alg, &a, &b).is_empty());
    }
}
