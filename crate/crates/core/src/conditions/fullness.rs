use std::collections::BTreeMap;

use super::{fmt_degree, infinite_walk_vertices, ConditionReport, Verdict, Witness};
use crate::algebra::{Algebra, AlgebraElement, QuotientRules};
use crate::degree::MultiDegree;
use crate::error::ConditionError;
use crate::projections::ProjectionSet;
use crate::semigraph::{EdgeId, Element, Instance, VertexId, VertexSet};

/// The vertices `u` with `x* p x = Σ c_u p_u`, `c_u ≠ 0`.
fn survivors(alg: &Algebra, p: &AlgebraElement, x: &Element) -> Result<VertexSet, ConditionError> {
    let ex = alg.element(x);
    let c = alg.multiply(&alg.multiply(&alg.adjoint(&ex)?, p)?, &ex)?;
    let mut out = VertexSet::new();
    for (w, _) in c.terms() {
        if !w.s.is_unit() || !w.t.is_unit() {
            return Err(ConditionError::NotProjection(alg.format(p)));
        }
        out.insert(w.v);
    }
    Ok(out)
}

/// Decides whether `p x_n = 0` eventually along every infinite path, i.e.
/// whether `p` lies in the kernel of the full quotient. `Holds` means it does.
pub fn in_fullness_kernel(
    alg: &Algebra,
    p: &AlgebraElement,
    depth: &MultiDegree,
) -> Result<ConditionReport, ConditionError> {
    let inst = alg.instance();
    if p.is_zero() {
        return Ok(ConditionReport::new(
            Verdict::Holds,
            vec![Witness::KillingDepth(MultiDegree::zero())],
            fmt_degree(inst, depth),
        ));
    }
    if !alg.is_projection(p)? {
        return Err(ConditionError::NotProjection(alg.format(p)));
    }
    let mut reach = MultiDegree::zero();
    for (w, _) in p.terms() {
        reach = reach.join(&w.s.degree().join(w.t.degree()));
    }
    if inst.rank() == 1 {
        return exact_rank_one(alg, p, reach.get(0));
    }
    let mut level = reach.join(depth);
    if inst.is_finite() {
        level = level.join(&MultiDegree::uniform(inst.rank(), inst.vertex_count() as u32));
    }
    let bound = fmt_degree(inst, &level);
    for x in inst.elements_of_degree(&level) {
        if !survivors(alg, p, &x)?.is_empty() {
            return Ok(ConditionReport::new(
                Verdict::UnknownAtBound,
                vec![Witness::Unresolved(format!(
                    "p survives along {} of degree {bound}",
                    inst.format_element(&x)
                ))],
                bound,
            ));
        }
    }
    Ok(ConditionReport::new(
        Verdict::Holds,
        vec![Witness::KillingDepth(level)],
        bound,
    ))
}

fn exact_rank_one(alg: &Algebra, p: &AlgebraElement, reach: u32) -> Result<ConditionReport, ConditionError> {
    let inst = alg.instance();
    let dead = alg.quotient_rules().map(|r| r.dead().clone()).unwrap_or_default();
    let cyclic = infinite_walk_vertices(inst, &dead);
    let level = MultiDegree::from_slice(&[reach]);
    let mut longest = None;
    let mut memo = BTreeMap::new();
    for x in inst.elements_of_degree(&level) {
        for u in survivors(alg, p, &x)? {
            if cyclic.contains(&u) {
                let (walk, cycle) = lasso(inst, u, &cyclic);
                let prefix = inst.compose(&x, &walk).expect("walk starts at a source vertex of x");
                return Ok(ConditionReport::new(
                    Verdict::Fails,
                    vec![Witness::AlivePath { prefix, cycle }],
                    "exact".to_string(),
                ));
            }
            longest = longest.max(Some(longest_walk(inst, u, &dead, &mut memo)));
        }
    }
    Ok(ConditionReport::new(
        Verdict::Holds,
        vec![Witness::KillingDepth(MultiDegree::from_slice(&[
            longest.map_or(reach, |l| reach + l + 1)
        ]))],
        "exact".to_string(),
    ))
}

/// Number of edges of the longest walk from `u` avoiding `dead`; `u` must not
/// reach a cycle.
fn longest_walk(inst: &Instance, u: VertexId, dead: &VertexSet, memo: &mut BTreeMap<VertexId, u32>) -> u32 {
    if let Some(&l) = memo.get(&u) {
        return l;
    }
    let l = inst
        .successors(u)
        .into_iter()
        .filter(|w| !dead.contains(w))
        .map(|w| 1 + longest_walk(inst, w, dead, memo))
        .max()
        .unwrap_or(0);
    memo.insert(u, l);
    l
}

/// A walk from `u` into a cycle, both inside `cyclic`, as elements.
fn lasso(inst: &Instance, u: VertexId, cyclic: &VertexSet) -> (Element, Element) {
    let step = |v: VertexId| -> (EdgeId, VertexId) {
        inst.edges()
            .flat_map(|e| inst.edge(e).image_of(v).iter().map(move |w| (e, *w)))
            .find(|(_, w)| cyclic.contains(w))
            .expect("cyclic vertices have a cyclic successor")
    };
    let mut order: Vec<(VertexId, EdgeId)> = Vec::new();
    let mut position: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut v = u;
    while !position.contains_key(&v) {
        position.insert(v, order.len());
        let (e, w) = step(v);
        order.push((v, e));
        v = w;
    }
    let start = position[&v];
    let letters: Vec<EdgeId> = order.iter().map(|(_, e)| *e).collect();
    let walk = inst.element_from_letters(&letters[..start]).expect("walk");
    let cycle = inst.element_from_letters(&letters[start..]).expect("cycle");
    (walk, cycle)
}

/// The full quotient: vertices without an infinite surviving walk die and
/// every other vertex satisfies its gap relation `p_v = Σ a p_w a*` over the
/// surviving pairs `(a, w)`.
pub fn make_full(alg: &Algebra) -> Result<Algebra, ConditionError> {
    let inst = alg.instance();
    if inst.rank() != 1 {
        return Err(ConditionError::UnsupportedRank);
    }
    let mut dead = VertexSet::new();
    for v in inst.vertices() {
        let pv = alg.projection(&ProjectionSet::Set([v].into()));
        let r = in_fullness_kernel(alg, &pv, &MultiDegree::zero())?;
        if r.verdict == Verdict::Holds {
            dead.insert(v);
        }
    }
    let expandable: VertexSet = inst.vertices().filter(|v| !dead.contains(v)).collect();
    let rules = QuotientRules::new(inst, dead, expandable)?;
    Ok(Algebra::with_quotient(inst.clone(), rules))
}

/// Whether taking the full quotient changes nothing.
pub fn is_full(alg: &Algebra) -> Result<bool, ConditionError> {
    let full = make_full(alg)?;
    let current = alg.quotient_rules();
    let next = full.quotient_rules().expect("make_full builds a quotient");
    Ok(match current {
        Some(rules) => rules == next,
        None => next.is_trivial(),
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::semigraph::constructors::{cuntz, from_directed_graph, DirectedGraph};

    #[test]
    fn toeplitz_vacuum_is_killed() {
        let alg = Algebra::new(Arc::new(cuntz(2)));
        let p = alg.parse("1 - a a* - b b*").unwrap();
        let r = in_fullness_kernel(&alg, &p, &MultiDegree::zero()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.witnesses, vec![Witness::KillingDepth(MultiDegree::from_slice(&[1]))]);
    }

    #[test]
    fn range_of_a_survives() {
        let inst = Arc::new(cuntz(2));
        let alg = Algebra::new(inst.clone());
        let r = in_fullness_kernel(&alg, &alg.parse("a a*").unwrap(), &MultiDegree::zero()).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert_eq!(r.witnesses[0].describe(&inst), "p survives along a (a)^inf");
    }

    #[test]
    fn make_full_o2() {
        let alg = Algebra::new(Arc::new(cuntz(2)));
        let full = make_full(&alg).unwrap();
        assert!(full.parse("1 - a a* - b b*").unwrap().is_zero());
        assert!(!full.parse("a a*").unwrap().is_zero());
        assert!(is_full(&full).unwrap());
        assert!(!is_full(&alg).unwrap());
    }

    #[test]
    fn sink_paths_vanish() {
        let g = DirectedGraph::new(["u", "s"]).edge("l", "u", "u").edge("e", "u", "s");
        let inst = Arc::new(from_directed_graph("sink", &g).unwrap());
        let alg = Algebra::new(inst.clone());
        let full = make_full(&alg).unwrap();
        for e in inst.edges() {
            let x = inst.letter(e).unwrap();
            let killed = in_fullness_kernel(&alg, &alg.range_of(&x), &MultiDegree::zero())
                .unwrap()
                .verdict
                == Verdict::Holds;
            assert_eq!(full.letter(e).is_zero(), killed, "{}", inst.edge_name(e));
        }
        assert!(full.parse("e").unwrap().is_zero());
        assert!(!full.parse("l").unwrap().is_zero());
        assert!(is_full(&full).unwrap());
    }
}
