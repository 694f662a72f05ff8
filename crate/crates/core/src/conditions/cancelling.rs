use super::{fmt_degree, ConditionReport, Verdict, Witness};
use crate::algebra::{Algebra, AlgebraElement, HalfStandard};
use crate::degree::MultiDegree;
use crate::error::ConditionError;
use crate::projections::ProjectionSet;

/// Looks for a nonzero standard projection `q ≤ p` with `q w q = 0`, trying
/// `p` itself and then the projections `μ p_v μ*` with `d(μ) ≤ depth`.
pub fn check_cancelling(
    alg: &Algebra,
    w: &AlgebraElement,
    p: &AlgebraElement,
    depth: &MultiDegree,
) -> Result<ConditionReport, ConditionError> {
    let inst = alg.instance();
    if p.is_zero() {
        return Err(ConditionError::ZeroProjection);
    }
    if !alg.is_projection(p)? {
        return Err(ConditionError::NotProjection(alg.format(p)));
    }
    let degree = w
        .homogeneous_degree()
        .ok_or_else(|| ConditionError::NotHomogeneous(alg.format(w)))?;
    if degree.is_zero() {
        return Err(ConditionError::ZeroDegree);
    }
    let bound = fmt_degree(inst, depth);
    let cancels =
        |q: &AlgebraElement| -> Result<bool, ConditionError> { Ok(alg.multiply(&alg.multiply(q, w)?, q)?.is_zero()) };
    if cancels(p)? {
        return Ok(ConditionReport::new(
            Verdict::Holds,
            vec![Witness::Cancelling { q: None }],
            bound,
        ));
    }
    for mu in inst.elements_up_to(depth) {
        for v in inst.source_vertices(&mu) {
            let h = HalfStandard::new(mu.clone(), ProjectionSet::Set([v].into()));
            let q = alg.range_of_half(&h);
            if q.is_zero() || alg.multiply(p, &q)? != q {
                continue;
            }
            if cancels(&q)? {
                return Ok(ConditionReport::new(
                    Verdict::Holds,
                    vec![Witness::Cancelling { q: Some(h) }],
                    bound,
                ));
            }
        }
    }
    Ok(ConditionReport::new(
        Verdict::UnknownAtBound,
        vec![Witness::Unresolved(format!(
            "no P[mu p{{v}}] below p with d(mu) <= {bound} cancels the word"
        ))],
        bound,
    ))
}
