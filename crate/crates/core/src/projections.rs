//! The projection lattice: vertex subsets plus the adjoined unit `⊤`.

use std::fmt;

use crate::error::SemigraphError;
use crate::semigraph::{Element, Instance, VertexSet};

/// A projection of the instance: `⊤` or a (possibly empty) vertex set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProjectionSet {
    Top,
    Set(VertexSet),
}

impl ProjectionSet {
    pub fn empty() -> Self {
        Self::Set(VertexSet::new())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Set(s) if s.is_empty())
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Self::Top)
    }

    pub fn meet(&self, other: &Self) -> Self {
        match (self, other) {
            (Self::Top, p) | (p, Self::Top) => p.clone(),
            (Self::Set(a), Self::Set(b)) => Self::Set(a.intersection(b).copied().collect()),
        }
    }

    /// The members, with `⊤` resolved to all vertices of `inst`.
    pub fn members(&self, inst: &Instance) -> VertexSet {
        match self {
            Self::Top => inst.all_vertices(),
            Self::Set(s) => s.clone(),
        }
    }

    /// `p ≤ q` in the lattice.
    pub fn le(&self, other: &Self) -> bool {
        match (self, other) {
            (_, Self::Top) => true,
            (Self::Top, Self::Set(_)) => false,
            (Self::Set(a), Self::Set(b)) => a.is_subset(b),
        }
    }

    pub fn display<'a>(&'a self, inst: &'a Instance) -> impl fmt::Display + 'a {
        DisplayProjection { p: self, inst }
    }
}

struct DisplayProjection<'a> {
    p: &'a ProjectionSet,
    inst: &'a Instance,
}

impl fmt::Display for DisplayProjection<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.p {
            ProjectionSet::Top => f.write_str("top"),
            ProjectionSet::Set(s) => f.write_str(&self.inst.format_vertex_set(s)),
        }
    }
}

impl Instance {
    /// The projection `Q` with `p x = x Q`.
    pub fn skip(&self, x: &Element, p: &ProjectionSet) -> ProjectionSet {
        if x.is_unit() {
            return p.clone();
        }
        ProjectionSet::Set(self.image_along(x, &p.members(self)))
    }

    /// `Q_x = x* x`; `⊤` for the unit.
    pub fn source_projection(&self, x: &Element) -> ProjectionSet {
        self.skip(x, &ProjectionSet::Top)
    }

    /// The projection `q_{x,y,α,β} = Q_{xα}` of the expansion of `x* y`.
    pub fn q_data(
        &self,
        x: &Element,
        y: &Element,
        alpha: &Element,
        beta: &Element,
    ) -> Result<ProjectionSet, SemigraphError> {
        let pair = (alpha.clone(), beta.clone());
        if !self.min_common_extensions(x, y).contains(&pair) {
            return Err(SemigraphError::NotMinimalExtension);
        }
        let xa = self.compose(x, alpha).ok_or(SemigraphError::NotMinimalExtension)?;
        Ok(self.source_projection(&xa))
    }
}
