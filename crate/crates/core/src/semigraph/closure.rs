use std::collections::{BTreeSet, HashMap};

use super::{Element, Instance};
use crate::degree::MultiDegree;
use crate::error::SemigraphError;

impl Instance {
    /// The least superset `F ⊇ E` closed under the extension rule: for
    /// `x₁, x₂, y₁, y₂ ∈ F` with `d(x₁) = d(x₂)`, `d(y₁) = d(y₂)` and
    /// `(α, β) ∈ T^(min)(x₁, y₁)`, both `x₂α` and `y₂β` lie in `F` whenever defined.
    pub fn closure(&self, seed: &BTreeSet<Element>, cap: usize) -> Result<BTreeSet<Element>, SemigraphError> {
        let mut set = seed.clone();
        if set.len() > cap {
            return Err(SemigraphError::CapExceeded { cap });
        }
        loop {
            let by_degree = group_by_degree(&set);
            let mut fresh: BTreeSet<Element> = BTreeSet::new();
            let items: Vec<&Element> = set.iter().collect();
            for x1 in &items {
                for y1 in &items {
                    for (alpha, beta) in self.min_common_extensions(x1, y1).iter() {
                        for x2 in &by_degree[x1.degree()] {
                            if let Some(z) = self.compose(x2, alpha) {
                                if !set.contains(&z) {
                                    fresh.insert(z);
                                }
                            }
                        }
                        for y2 in &by_degree[y1.degree()] {
                            if let Some(z) = self.compose(y2, beta) {
                                if !set.contains(&z) {
                                    fresh.insert(z);
                                }
                            }
                        }
                    }
                }
            }
            if fresh.is_empty() {
                return Ok(set);
            }
            set.extend(fresh);
            if set.len() > cap {
                return Err(SemigraphError::CapExceeded { cap });
            }
        }
    }

    /// Brute-force re-check of the closure condition; returns the first failure.
    pub fn closure_violation(&self, set: &BTreeSet<Element>) -> Option<(Element, Element, Element)> {
        let by_degree = group_by_degree(set);
        for x1 in set {
            for y1 in set {
                for (alpha, beta) in self.min_common_extensions(x1, y1).iter() {
                    for x2 in &by_degree[x1.degree()] {
                        if let Some(z) = self.compose(x2, alpha) {
                            if !set.contains(&z) {
                                return Some((x2.clone(), alpha.clone(), z));
                            }
                        }
                    }
                    for y2 in &by_degree[y1.degree()] {
                        if let Some(z) = self.compose(y2, beta) {
                            if !set.contains(&z) {
                                return Some((y2.clone(), beta.clone(), z));
                            }
                        }
                    }
                }
            }
        }
        None
    }
}

fn group_by_degree(set: &BTreeSet<Element>) -> HashMap<MultiDegree, Vec<Element>> {
    let mut map: HashMap<MultiDegree, Vec<Element>> = HashMap::new();
    for x in set {
        map.entry(x.degree().clone()).or_default().push(x.clone());
    }
    map
}

#[cfg(test)]
mod tests {
    use super::super::constructors::{cuntz, square_instance};
    use super::*;
    use crate::semigraph::DEFAULT_CAP;

    fn set(inst: &Instance, words: &[&str]) -> BTreeSet<Element> {
        words.iter().map(|w| inst.parse_element(w).unwrap()).collect()
    }

    #[test]
    fn cuntz_generators_are_closed() {
        let o2 = cuntz(2);
        let e = set(&o2, &["a", "b"]);
        assert_eq!(o2.closure(&e, DEFAULT_CAP).unwrap(), e);
    }

    #[test]
    fn square_closure_adds_the_common_extension() {
        let sq = square_instance();
        let f = sq.closure(&set(&sq, &["e", "f"]), DEFAULT_CAP).unwrap();
        assert_eq!(f, set(&sq, &["e", "f", "e f'"]));
        assert!(sq.closure_violation(&f).is_none());
    }

    #[test]
    fn empty_closure_and_cap() {
        let o2 = cuntz(2);
        assert!(o2.closure(&BTreeSet::new(), DEFAULT_CAP).unwrap().is_empty());
        let sq = square_instance();
        assert_eq!(
            sq.closure(&set(&sq, &["e", "f"]), 2),
            Err(SemigraphError::CapExceeded { cap: 2 })
        );
    }
}
