mod common;

use std::sync::{Arc, OnceLock};

use num_traits::One;
use proptest::prelude::*;
use proptest::sample::Index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use semigraph_core::{Algebra, HalfStandard, Instance, MultiDegree, ProjectionSet};

fn algebras() -> &'static [(&'static str, Arc<Instance>, Algebra)] {
    static A: OnceLock<Vec<(&'static str, Arc<Instance>, Algebra)>> = OnceLock::new();
    A.get_or_init(|| {
        common::shipped()
            .into_iter()
            .map(|(n, inst)| (n, inst.clone(), Algebra::new(inst)))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn inverse_semigroup_law(k in 0..6usize, seed: u64) {
        let (name, inst, alg) = &algebras()[k];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = common::random_word(&mut rng, inst, 6);
        let x = alg.word_to_standard(&w);
        let xs = alg.adjoint(&x).unwrap();
        prop_assert_eq!(alg.multiply(&alg.multiply(&x, &xs).unwrap(), &x).unwrap(), x, "{}: {}", name, w.display(inst));
    }

    #[test]
    fn range_projections_commute(k in 0..6usize, seed: u64) {
        let (_, inst, alg) = &algebras()[k];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let range = |rng: &mut ChaCha8Rng| {
            let x = alg.word_to_standard(&common::random_word(rng, inst, 4));
            alg.multiply(&x, &alg.adjoint(&x).unwrap()).unwrap()
        };
        let (p, q) = (range(&mut rng), range(&mut rng));
        prop_assert_eq!(alg.multiply(&p, &q).unwrap(), alg.multiply(&q, &p).unwrap());
    }

    #[test]
    fn words_normalize_in_their_degree(k in 0..6usize, seed: u64) {
        let (_, inst, alg) = &algebras()[k];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = common::random_word(&mut rng, inst, 6);
        let d = common::word_degree(inst, &w);
        let x = alg.word_to_standard(&w);
        prop_assert!(x.terms().all(|(b, _)| b.degree() == d));
        let xs = alg.adjoint(&x).unwrap();
        prop_assert!(xs.terms().all(|(b, _)| b.degree() == -&d));
    }

    #[test]
    fn multiplication_is_associative(k in 0..6usize, seed: u64) {
        let (_, inst, alg) = &algebras()[k];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut next = || alg.word_to_standard(&common::random_word(&mut rng, inst, 4));
        let (a, b, c) = (next(), next(), next());
        let left = alg.multiply(&alg.multiply(&a, &b).unwrap(), &c).unwrap();
        let right = alg.multiply(&a, &alg.multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn products_are_degree_additive(k in 0..6usize, seed: u64) {
        let (_, inst, alg) = &algebras()[k];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = common::random_word(&mut rng, inst, 4);
        let v = common::random_word(&mut rng, inst, 4);
        let want = &common::word_degree(inst, &u) + &common::word_degree(inst, &v);
        let p = alg.multiply(&alg.word_to_standard(&u), &alg.word_to_standard(&v)).unwrap();
        prop_assert!(p.terms().all(|(b, _)| b.degree() == want));
    }

    #[test]
    fn fibers_sum_to_input(k in 0..6usize, seed: u64) {
        let (_, inst, alg) = &algebras()[k];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = alg.literal_to_element(&common::random_literal(&mut rng, inst, 4));
        let fibers = alg.fibers(&a);
        let sum = fibers.values().fold(alg.zero(), |acc, f| alg.add(&acc, f).unwrap());
        prop_assert_eq!(sum, a);
        for (d, f) in &fibers {
            prop_assert_eq!(f.homogeneous_degree(), Some(d.clone()));
        }
    }

    #[test]
    fn fock_oracle_agrees(k in 0..6usize, seed: u64) {
        let (name, inst, alg) = &algebras()[k];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lit = common::random_literal(&mut rng, inst, 4);
        let a = alg.literal_to_element(&lit);
        prop_assert_eq!(a.is_zero(), alg.fock_literal_is_zero(&lit).unwrap(), "{}: {}", name, lit.display(inst));
        prop_assert_eq!(a.is_zero(), alg.fock_is_zero(&a).unwrap());
    }

    #[test]
    fn source_of_half_standard_word_is_a_vertex_projection(k in 0..6usize, i: Index, mask: u8) {
        let (_, inst, alg) = &algebras()[k];
        let xs = inst.elements_up_to(&MultiDegree::uniform(inst.rank(), 2));
        let x = i.get(&xs).clone();
        let set = inst.vertices().filter(|v| mask & (1 << v.0) != 0).collect();
        let h = alg.half_standard(&HalfStandard::new(x, ProjectionSet::Set(set)));
        let src = alg.multiply(&alg.adjoint(&h).unwrap(), &h).unwrap();
        for (w, c) in src.terms() {
            prop_assert!(w.s.is_unit() && w.t.is_unit() && c.is_one(), "{}", alg.format(&src));
        }
        prop_assert!(alg.is_projection(&src).unwrap());
    }
}
