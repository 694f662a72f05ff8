#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use semigraph_core::algebra::{FormalWord, Letter, Literal};
use semigraph_core::scalar::{from_int, Scalar};
use semigraph_core::semigraph::constructors::{ck4, cuntz, product_example, square_instance, ultragraph3};
use semigraph_core::{DegreeDiff, Instance, ProjectionSet};

pub fn shipped() -> Vec<(&'static str, Arc<Instance>)> {
    vec![
        ("O2", Arc::new(cuntz(2))),
        ("O3", Arc::new(cuntz(3))),
        ("CK4", Arc::new(ck4())),
        ("ultra3", Arc::new(ultragraph3())),
        ("square", Arc::new(square_instance())),
        ("product", Arc::new(product_example())),
    ]
}

pub fn random_letter<R: Rng>(rng: &mut R, inst: &Instance) -> Letter {
    let edges: Vec<_> = inst.edges().collect();
    if rng.gen_bool(0.15) || edges.is_empty() {
        let verts: Vec<_> = inst.vertices().collect();
        let k = rng.gen_range(1..=verts.len());
        let set: BTreeSet<_> = verts.choose_multiple(rng, k).copied().collect();
        return Letter::Projection(ProjectionSet::Set(set));
    }
    Letter::Edge {
        edge: *edges.choose(rng).expect("nonempty"),
        star: rng.gen_bool(0.5),
    }
}

pub fn random_word<R: Rng>(rng: &mut R, inst: &Instance, max_len: usize) -> FormalWord {
    let len = rng.gen_range(1..=max_len);
    FormalWord::new((0..len).map(|_| random_letter(rng, inst)).collect())
}

/// Plain minus starred letter degrees.
pub fn word_degree(inst: &Instance, w: &FormalWord) -> DegreeDiff {
    let mut d = DegreeDiff::zero();
    for l in w.letters() {
        if let Letter::Edge { edge, star } = l {
            let mut v = vec![0i64; inst.rank()];
            v[inst.coord(*edge)] = if *star { -1 } else { 1 };
            d = &d + &DegreeDiff::from_slice(&v);
        }
    }
    d
}

/// Rewrites a word into one equal to it in the algebra: a letter `e` becomes
/// `e e* e`, or `e*` becomes `e* e e*`.
pub fn equal_variant<R: Rng>(rng: &mut R, w: &FormalWord) -> FormalWord {
    let letters = w.letters();
    let i = rng.gen_range(0..letters.len());
    let mut out = letters[..i].to_vec();
    match &letters[i] {
        l @ Letter::Edge { .. } => {
            out.push(l.clone());
            out.push(l.adjoint());
            out.push(l.clone());
        }
        l @ Letter::Projection(_) => {
            out.push(l.clone());
            out.push(l.clone());
        }
    }
    out.extend_from_slice(&letters[i + 1..]);
    FormalWord::new(out)
}

fn small_scalar<R: Rng>(rng: &mut R) -> Scalar {
    from_int(rng.gen_range(1..=3)) * if rng.gen_bool(0.5) { from_int(1) } else { from_int(-1) }
}

/// A random linear combination of words of letter-length at most `max_len`;
/// about a third are built to vanish.
pub fn random_literal<R: Rng>(rng: &mut R, inst: &Instance, max_len: usize) -> Literal {
    match rng.gen_range(0..3) {
        0 => Literal {
            terms: vec![(small_scalar(rng), random_word(rng, inst, max_len))],
        },
        1 => {
            let w = random_word(rng, inst, max_len.saturating_sub(2).max(1));
            let c = small_scalar(rng);
            let v = equal_variant(rng, &w);
            Literal {
                terms: vec![(c.clone(), w), (-c, v)],
            }
        }
        _ => Literal {
            terms: (0..rng.gen_range(2..=3))
                .map(|_| (small_scalar(rng), random_word(rng, inst, max_len)))
                .collect(),
        },
    }
}
