use std::collections::HashSet;

use super::{fmt_degree, ConditionReport, Verdict, Witness};
use crate::degree::MultiDegree;
use crate::semigraph::{EdgeId, Element, Instance, VertexId, VertexSet};

/// Searches, for every vertex `v`, every `x` with `x p_v ≠ 0` and
/// `d(x) ≤ bound`, and every pair of distinct cuts `m, n ≤ d(x)`, a
/// continuation `y` whose tails `(xy)(m, ·)` and `(xy)(n, ·)` have no common
/// extension.
pub fn check_aperiodicity(inst: &Instance, bound: &MultiDegree) -> ConditionReport {
    let bound_text = fmt_degree(inst, bound);
    let finite = inst.is_finite();
    // For finite instances every element is below this degree.
    let search = if finite {
        bound.join(&MultiDegree::uniform(inst.rank(), inst.vertex_count() as u32))
    } else {
        bound.clone()
    };
    let xs: Vec<Element> = inst
        .elements_up_to(bound)
        .into_iter()
        .filter(|x| !x.is_unit())
        .collect();
    let mut witnesses = Vec::new();
    let mut unresolved = Vec::new();
    for v in inst.vertices() {
        let start: VertexSet = [v].into();
        let ys = continuations(inst, &start, &search);
        for x in &xs {
            if !inst.source_vertices(x).contains(&v) {
                continue;
            }
            let cuts = x.degree().down_set(inst.rank());
            for (i, m) in cuts.iter().enumerate() {
                for n in &cuts[i + 1..] {
                    if let Some(y) = ys.iter().find(|y| separates(inst, x, y, m, n)) {
                        witnesses.push(Witness::Aperiodic {
                            vertex: v,
                            x: x.clone(),
                            m: m.clone(),
                            n: n.clone(),
                            y: y.clone(),
                        });
                        continue;
                    }
                    if inst.rank() == 1 {
                        match cycle_analysis(inst, v, x, m.get(0), n.get(0)) {
                            Ok(y) => {
                                debug_assert!(separates(inst, x, &y, m, n));
                                witnesses.push(Witness::Aperiodic {
                                    vertex: v,
                                    x: x.clone(),
                                    m: m.clone(),
                                    n: n.clone(),
                                    y,
                                });
                            }
                            Err(reason) => {
                                return ConditionReport::new(
                                    Verdict::Fails,
                                    vec![Witness::Periodic {
                                        vertex: v,
                                        x: x.clone(),
                                        m: m.clone(),
                                        n: n.clone(),
                                        reason,
                                    }],
                                    bound_text,
                                );
                            }
                        }
                    } else if finite {
                        return ConditionReport::new(
                            Verdict::Fails,
                            vec![Witness::Periodic {
                                vertex: v,
                                x: x.clone(),
                                m: m.clone(),
                                n: n.clone(),
                                reason: "every continuation of the finite instance was tried".to_string(),
                            }],
                            bound_text,
                        );
                    } else {
                        unresolved.push(Witness::Unresolved(format!(
                            "e=p{{{}}} x={} m={} n={}: no y with d(y) <= {}",
                            inst.vertex_name(v),
                            inst.format_element(x),
                            fmt_degree(inst, m),
                            fmt_degree(inst, n),
                            bound_text
                        )));
                    }
                }
            }
        }
    }
    if unresolved.is_empty() {
        ConditionReport::new(Verdict::Holds, witnesses, bound_text)
    } else {
        ConditionReport::new(Verdict::UnknownAtBound, unresolved, bound_text)
    }
}

/// `y` with `image_along(y, start) ≠ ∅` and `d(y) ≤ bound`, in canonical order.
fn continuations(inst: &Instance, start: &VertexSet, bound: &MultiDegree) -> Vec<Element> {
    let mut out: Vec<Element> = bound
        .down_set(inst.rank())
        .iter()
        .flat_map(|n| {
            if n.is_zero() {
                vec![Element::unit()]
            } else {
                inst.extensions_from(start, n)
            }
        })
        .collect();
    out.sort();
    out
}

/// Whether the tails of `xy` at `m` and `n` have no common extension.
pub(crate) fn separates(inst: &Instance, x: &Element, y: &Element, m: &MultiDegree, n: &MultiDegree) -> bool {
    let Some(z) = inst.compose(x, y) else { return false };
    let (Ok(t1), Ok(t2)) = (inst.segment(&z, m, z.degree()), inst.segment(&z, n, z.degree())) else {
        return false;
    };
    inst.min_common_extensions(&t1, &t2).is_empty()
}

/// Rank 1: the tails at `m < n` have a common extension exactly when the
/// letters of `(xy)(m, ·)` repeat with period `n − m`. Once the period is
/// established every further letter is forced, so following the forced
/// letters through the finitely many (vertex set, window) states either
/// finds a letter breaking the period or proves that none exists.
fn cycle_analysis(inst: &Instance, v: VertexId, x: &Element, m: u32, n: u32) -> Result<Element, String> {
    let (m, n) = (m.min(n) as usize, m.max(n) as usize);
    let period = n - m;
    let tail = &x.letters()[m..];
    let mut window: Vec<EdgeId> = tail[tail.len() - period..].to_vec();
    let mut set: VertexSet = [v].into();
    let mut y: Vec<EdgeId> = Vec::new();
    let mut seen: HashSet<(VertexSet, Vec<EdgeId>)> = HashSet::new();
    loop {
        if !seen.insert((set.clone(), window.clone())) {
            return Err(format!(
                "every continuation repeats with period {period} (cycle after {} forced letters)",
                y.len()
            ));
        }
        let forced = window[0];
        for e in inst.edges() {
            if e != forced && !inst.image_of_set(e, &set).is_empty() {
                y.push(e);
                return Ok(inst.element_from_letters(&y).expect("live continuation"));
            }
        }
        let next = inst.image_of_set(forced, &set);
        if next.is_empty() {
            return Err(format!(
                "every continuation repeats with period {period} (dead end after {} forced letters)",
                y.len()
            ));
        }
        y.push(forced);
        set = next;
        window.remove(0);
        window.push(forced);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigraph::constructors::{cuntz, single_loop, square_instance};

    #[test]
    fn o2_holds() {
        let inst = cuntz(2);
        let r = check_aperiodicity(&inst, &MultiDegree::from_slice(&[3]));
        assert_eq!(r.verdict, Verdict::Holds);
        for w in &r.witnesses {
            let Witness::Aperiodic { x, m, n, y, .. } = w else {
                panic!()
            };
            assert!(separates(&inst, x, y, m, n));
        }
    }

    #[test]
    fn loop_fails() {
        let inst = single_loop();
        let r = check_aperiodicity(&inst, &MultiDegree::from_slice(&[3]));
        assert_eq!(r.verdict, Verdict::Fails);
        assert_eq!(r.witnesses.len(), 1);
    }

    #[test]
    fn square_holds() {
        let inst = square_instance();
        let r = check_aperiodicity(&inst, &MultiDegree::from_slice(&[2, 2]));
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn no_edges_is_vacuous() {
        let inst = Instance::builder("points", 1).vertices(["u", "v"]).build().unwrap();
        let r = check_aperiodicity(&inst, &MultiDegree::from_slice(&[3]));
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(r.witnesses.is_empty());
    }
}
