//! Aperiodicity, cancelling, fullness and gauge-invariant quotients.

mod aperiodic;
mod cancelling;
mod fullness;
mod quotient;

use std::fmt;
use std::sync::Arc;

pub use aperiodic::check_aperiodicity;
pub use cancelling::check_cancelling;
pub use fullness::{in_fullness_kernel, is_full, make_full};
pub use quotient::{quotient_by, quotient_min_common_extensions};

use crate::algebra::{Algebra, HalfStandard};
use crate::degree::MultiDegree;
use crate::error::ConditionError;
use crate::semigraph::{Element, Instance, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Holds,
    Fails,
    UnknownAtBound,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Holds => "holds",
            Self::Fails => "fails",
            Self::UnknownAtBound => "unknown-at-bound",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A replayable certificate or counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `x p_v y ≠ 0` and the tails of `xy` at `m` and `n` have no common extension.
    Aperiodic {
        vertex: VertexId,
        x: Element,
        m: MultiDegree,
        n: MultiDegree,
        y: Element,
    },
    /// No `y` separates the tails of `x` at `m` and `n`.
    Periodic {
        vertex: VertexId,
        x: Element,
        m: MultiDegree,
        n: MultiDegree,
        reason: String,
    },
    /// `q ≤ p` and `q w q = 0`; `None` stands for `q = p`.
    Cancelling { q: Option<HalfStandard> },
    /// `x* p x = 0` for every `x` of this degree.
    KillingDepth(MultiDegree),
    /// `p` survives along `prefix cycle cycle …`.
    AlivePath { prefix: Element, cycle: Element },
    /// A search that ended without a decision.
    Unresolved(String),
}

impl Witness {
    pub fn describe(&self, inst: &Instance) -> String {
        let el = |x: &Element| inst.format_element(x);
        match self {
            Self::Aperiodic { vertex, x, m, n, y } => format!(
                "e=p{{{}}} x={} m={} n={} y={}",
                inst.vertex_name(*vertex),
                el(x),
                fmt_degree(inst, m),
                fmt_degree(inst, n),
                el(y)
            ),
            Self::Periodic {
                vertex,
                x,
                m,
                n,
                reason,
            } => format!(
                "e=p{{{}}} x={} m={} n={}: {}",
                inst.vertex_name(*vertex),
                el(x),
                fmt_degree(inst, m),
                fmt_degree(inst, n),
                reason
            ),
            Self::Cancelling { q: None } => "q=p".to_string(),
            Self::Cancelling { q: Some(h) } => format!("q=P[{}]", h.display(inst)),
            Self::KillingDepth(d) => format!("every path of degree {} kills p", fmt_degree(inst, d)),
            Self::AlivePath { prefix, cycle } => {
                format!("p survives along {} ({})^inf", el(prefix), el(cycle))
            }
            Self::Unresolved(s) => s.clone(),
        }
    }
}

pub(crate) fn fmt_degree(inst: &Instance, d: &MultiDegree) -> String {
    d.to_vec(inst.rank())
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    /// The search bound, as text.
    pub bound: String,
}

impl ConditionReport {
    fn new(verdict: Verdict, witnesses: Vec<Witness>, bound: String) -> Self {
        Self {
            verdict,
            witnesses,
            bound,
        }
    }
}

/// The algebra an instance file describes: its relations are divided out,
/// then the full quotient is taken when the `full` flag is set.
pub fn instance_algebra(inst: Arc<Instance>) -> Result<Algebra, ConditionError> {
    let base = Algebra::new(inst.clone());
    let relations = inst
        .relations
        .iter()
        .map(|r| base.parse(r))
        .collect::<Result<Vec<_>, _>>()?;
    let mut alg = quotient_by(&base, &relations)?;
    if inst.flags.full {
        alg = make_full(&alg)?;
    }
    Ok(alg)
}

/// Vertices with an infinite walk that avoids `dead`.
pub(crate) fn infinite_walk_vertices(
    inst: &Instance,
    dead: &crate::semigraph::VertexSet,
) -> crate::semigraph::VertexSet {
    // Repeatedly drop vertices without a live successor.
    let mut live: crate::semigraph::VertexSet = inst.vertices().filter(|v| !dead.contains(v)).collect();
    loop {
        let next: crate::semigraph::VertexSet = live
            .iter()
            .copied()
            .filter(|v| inst.successors(*v).iter().any(|w| live.contains(w)))
            .collect();
        if next == live {
            return live;
        }
        live = next;
    }
}
