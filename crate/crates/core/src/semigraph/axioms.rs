use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use super::{EdgeId, Element, Instance, VertexId};
use crate::degree::MultiDegree;

/// One failed axiom instance, with the elements witnessing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    DegreeAdditivity {
        x: String,
        y: String,
    },
    Associativity {
        x: String,
        y: String,
        z: String,
    },
    /// `z` has `count` factorizations with first factor of degree `n1`.
    Factorization {
        z: String,
        n1: String,
        count: usize,
    },
    /// `factorize(z, n1) = (x, y)` but `x y ≠ z`.
    FactorizationRoundTrip {
        z: String,
        n1: String,
        x: String,
        y: String,
    },
    /// A composable mixed-coordinate letter pair without a commuting square.
    MissingSquare {
        x: String,
        y: String,
    },
    /// Two different pairs are rewritten to the same pair.
    NonInjectiveSquare {
        first: (String, String),
        second: (String, String),
        image: (String, String),
    },
    /// The two sides of a square induce different vertex relations.
    SquareRelation {
        pair: (String, String),
        equals: (String, String),
    },
    /// `(α, β) ∈ T^(min)(x, y)` without `(β, α) ∈ T^(min)(y, x)`.
    MinimalExtensionSymmetry {
        x: String,
        y: String,
        alpha: String,
        beta: String,
    },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DegreeAdditivity { x, y } => write!(f, "degree not additive on [{x}]·[{y}]"),
            Self::Associativity { x, y, z } => write!(f, "composition not associative on [{x}], [{y}], [{z}]"),
            Self::Factorization { z, n1, count } => {
                write!(f, "[{z}] has {count} factorizations with head degree {n1}")
            }
            Self::FactorizationRoundTrip { z, n1, x, y } => {
                write!(f, "factorize([{z}], {n1}) = ([{x}], [{y}]) does not recompose")
            }
            Self::MissingSquare { x, y } => write!(f, "no commuting square for composable pair [{x} {y}]"),
            Self::NonInjectiveSquare { first, second, image } => write!(
                f,
                "squares [{} {}] and [{} {}] both rewrite to [{} {}]",
                first.0, first.1, second.0, second.1, image.0, image.1
            ),
            Self::SquareRelation { pair, equals } => write!(
                f,
                "square [{} {}] = [{} {}] relates different vertices",
                pair.0, pair.1, equals.0, equals.1
            ),
            Self::MinimalExtensionSymmetry { x, y, alpha, beta } => {
                write!(
                    f,
                    "([{alpha}], [{beta}]) is minimal for ([{x}], [{y}]) but not conversely"
                )
            }
        }
    }
}

/// Result of [`Instance::check_axioms`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub bound: MultiDegree,
    /// The instance is finite and every element was enumerated.
    pub exact: bool,
    pub elements: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Instance {
    /// Checks the k-semigraph axioms on all elements of degree at most `bound`,
    /// or on all elements when the instance is finite.
    pub fn check_axioms(&self, bound: &MultiDegree) -> AxiomReport {
        let exact = self.is_finite();
        let bound = if exact {
            MultiDegree::uniform(self.rank(), self.vertex_count() as u32)
        } else {
            bound.clone()
        };
        let mut violations = self.square_violations();
        let elements = self.elements_up_to(&bound);
        let fmt = |x: &Element| self.format_element(x);
        let mut by_degree: HashMap<MultiDegree, Vec<&Element>> = HashMap::new();
        for x in &elements {
            by_degree.entry(x.degree().clone()).or_default().push(x);
        }

        // z ↦ number of factorizations per head degree
        let mut factor_count: HashMap<(Element, MultiDegree), usize> = HashMap::new();
        for x in &elements {
            for y in &elements {
                if !(x.degree() + y.degree()).le(&bound) {
                    continue;
                }
                let Some(xy) = self.compose(x, y) else { continue };
                if letter_degree(self, xy.letters()) != *xy.degree() || *xy.degree() != x.degree() + y.degree() {
                    violations.push(AxiomViolation::DegreeAdditivity { x: fmt(x), y: fmt(y) });
                }
                *factor_count.entry((xy, x.degree().clone())).or_default() += 1;
            }
        }
        for z in &elements {
            for n1 in z.degree().down_set(self.rank()) {
                let count = factor_count.get(&(z.clone(), n1.clone())).copied().unwrap_or(0);
                if count != 1 {
                    violations.push(AxiomViolation::Factorization {
                        z: fmt(z),
                        n1: n1.to_string(),
                        count,
                    });
                }
                if let Ok((x, y)) = self.factorize(z, &n1) {
                    if self.compose(&x, &y).as_ref() != Some(z) {
                        violations.push(AxiomViolation::FactorizationRoundTrip {
                            z: fmt(z),
                            n1: n1.to_string(),
                            x: fmt(&x),
                            y: fmt(&y),
                        });
                    }
                }
            }
        }

        for x in &elements {
            for y in &elements {
                let xy_deg = x.degree() + y.degree();
                if !xy_deg.le(&bound) {
                    continue;
                }
                let Some(xy) = self.compose(x, y) else { continue };
                let Some(rest) = bound.checked_sub(&xy_deg) else {
                    continue;
                };
                for n in rest.down_set(self.rank()) {
                    for z in by_degree.get(&n).into_iter().flatten() {
                        let left = self.compose(&xy, z);
                        let right = self.compose(y, z).and_then(|yz| self.compose(x, &yz));
                        if left != right {
                            violations.push(AxiomViolation::Associativity {
                                x: fmt(x),
                                y: fmt(y),
                                z: fmt(z),
                            });
                        }
                    }
                }
            }
        }

        for x in &elements {
            for y in &elements {
                if !x.degree().join(y.degree()).le(&bound) {
                    continue;
                }
                let forward = self.min_common_extensions(x, y);
                let backward: BTreeSet<(Element, Element)> = self.min_common_extensions(y, x).iter().cloned().collect();
                for (alpha, beta) in forward.iter() {
                    if !backward.contains(&(beta.clone(), alpha.clone())) {
                        violations.push(AxiomViolation::MinimalExtensionSymmetry {
                            x: fmt(x),
                            y: fmt(y),
                            alpha: fmt(alpha),
                            beta: fmt(beta),
                        });
                    }
                }
            }
        }

        AxiomReport {
            bound,
            exact,
            elements: elements.len(),
            violations,
        }
    }

    fn square_violations(&self) -> Vec<AxiomViolation> {
        let name = |e: EdgeId| self.edge_name(e).to_string();
        let mut out = Vec::new();
        let mut images: BTreeMap<(EdgeId, EdgeId), (EdgeId, EdgeId)> = BTreeMap::new();
        for sq in self.squares() {
            if let Some(prev) = images.insert(sq.equals, sq.pair) {
                out.push(AxiomViolation::NonInjectiveSquare {
                    first: (name(prev.0), name(prev.1)),
                    second: (name(sq.pair.0), name(sq.pair.1)),
                    image: (name(sq.equals.0), name(sq.equals.1)),
                });
            }
            let lhs = self.pair_relation(sq.pair.0, sq.pair.1);
            let rhs = self.pair_relation(sq.equals.0, sq.equals.1);
            if lhs != rhs {
                out.push(AxiomViolation::SquareRelation {
                    pair: (name(sq.pair.0), name(sq.pair.1)),
                    equals: (name(sq.equals.0), name(sq.equals.1)),
                });
            }
        }
        for u in self.edges() {
            for v in self.edges() {
                let (cu, cv) = (self.coord(u), self.coord(v));
                if cu == cv || self.pair_relation(u, v).is_empty() {
                    continue;
                }
                let found = if cu < cv {
                    self.square_forward(u, v).is_some()
                } else {
                    self.square_backward(u, v).is_some()
                };
                if !found {
                    out.push(AxiomViolation::MissingSquare { x: name(u), y: name(v) });
                }
            }
        }
        out
    }

    /// The composed relation of the letter pair `u v`.
    fn pair_relation(&self, u: EdgeId, v: EdgeId) -> BTreeSet<(VertexId, VertexId)> {
        let mut out = BTreeSet::new();
        for &(a, b) in &self.edge(u).relation {
            for &c in self.edge(v).image_of(b) {
                out.insert((a, c));
            }
        }
        out
    }
}

fn letter_degree(inst: &Instance, letters: &[EdgeId]) -> MultiDegree {
    let mut d = MultiDegree::zero();
    for &e in letters {
        let c = inst.coord(e);
        d.set(c, d.get(c) + 1);
    }
    d
}
