//! Finite-dimensional approximants of the core with explicit matrix units.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraElement, BasisWord, HalfStandard};
use crate::degree::MultiDegree;
use crate::error::{AlgebraError, SemigraphError};
use crate::linalg::{rank, SparseVector};
use crate::projections::ProjectionSet;
use crate::scalar::Scalar;
use crate::semigraph::{EdgeId, Element, Instance};

/// `P_x (1 − P_{y₁}) ⋯ (1 − P_{yₘ})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardProjection {
    pub x: HalfStandard,
    pub ys: Vec<HalfStandard>,
}

impl StandardProjection {
    pub fn display(&self, inst: &Instance) -> String {
        let mut out = format!("P[{}]", self.x.display(inst));
        for y in &self.ys {
            out.push_str(&format!("(1-P[{}])", y.display(inst)));
        }
        out
    }
}

/// A minimal projection of `Z` with its decomposition into orthogonal
/// standard projections.
#[derive(Clone, Debug)]
pub struct Atom {
    pub projection: AlgebraElement,
    pub pieces: Vec<StandardProjection>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Hypothesis {
    SelfAdjoint,
    CommutingRanges,
    FiniteM,
    AlsoInZ,
    Assumption1,
    UnitIndependence,
    MatrixUnitLaws,
    AtomExpansion,
    Faithfulness,
    Membership,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Self::SelfAdjoint => "self-adjointness of G",
            Self::CommutingRanges => "commuting range projections",
            Self::FiniteM => "finiteM",
            Self::AlsoInZ => "alsoInZ",
            Self::Assumption1 => "assumption1",
            Self::UnitIndependence => "independence of e_xy from i",
            Self::MatrixUnitLaws => "matrix-unit laws",
            Self::AtomExpansion => "atom expansion into standard projections",
            Self::Faithfulness => "faithfulness",
            Self::Membership => "membership in span(G)",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisViolation {
    pub hypothesis: Hypothesis,
    pub detail: String,
}

impl fmt::Display for HypothesisViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.hypothesis, self.detail)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("{} hypothesis violation(s), first: {}", .0.len(), .0[0])]
    Hypotheses(Vec<HypothesisViolation>),
    #[error(transparent)]
    Semigraph(#[from] SemigraphError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl CoreError {
    pub fn violations(&self) -> &[HypothesisViolation] {
        match self {
            Self::Hypotheses(v) => v,
            _ => &[],
        }
    }
}

/// The finite-dimensional algebra `span(G)` with its matrix units.
#[derive(Clone, Debug)]
pub struct CoreApproximant {
    pub h: Vec<HalfStandard>,
    pub g: Vec<AlgebraElement>,
    pub atoms: Vec<Atom>,
    /// Nonzero matrix units `e_{xy}` keyed by atom indices.
    pub units: BTreeMap<(usize, usize), AlgebraElement>,
    /// Atom indices of each block, largest block first.
    pub blocks: Vec<Vec<usize>>,
}

impl CoreApproximant {
    pub fn profile(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn unit(&self, x: usize, y: usize) -> Option<&AlgebraElement> {
        self.units.get(&(x, y))
    }

    fn block_of(&self, x: usize) -> (usize, usize) {
        for (b, members) in self.blocks.iter().enumerate() {
            if let Some(i) = members.iter().position(|m| *m == x) {
                return (b, i);
            }
        }
        unreachable!("every atom lies in a block")
    }
}

/// Coordinates of an element in the matrix units, one dense matrix per block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMatrix {
    pub blocks: Vec<Vec<Vec<Scalar>>>,
}

impl BlockMatrix {
    pub fn is_zero(&self) -> bool {
        self.blocks.iter().flatten().flatten().all(Zero::is_zero)
    }

    fn to_vector(&self) -> SparseVector<(usize, usize, usize)> {
        let mut v = SparseVector::new();
        for (b, m) in self.blocks.iter().enumerate() {
            for (i, row) in m.iter().enumerate() {
                for (j, c) in row.iter().enumerate() {
                    if !c.is_zero() {
                        v.insert((b, i, j), c.clone());
                    }
                }
            }
        }
        v
    }
}

/// The level-`n` generators: `α Q_α` for `α ≠ 1` with `d(α) ≤ n`, and every
/// vertex projection.
pub fn level_generators(inst: &Instance, level: &MultiDegree) -> Vec<HalfStandard> {
    let mut out: Vec<HalfStandard> = inst
        .vertices()
        .map(|v| HalfStandard::new(Element::unit(), ProjectionSet::Set([v].into())))
        .collect();
    for x in inst.elements_up_to(level) {
        if !x.is_unit() {
            out.push(HalfStandard::of(inst, x));
        }
    }
    out
}

/// A finite set `H ⊇ D` of half-standard words whose equal-degree products
/// `x y*` satisfy the hypotheses of the matrix-unit construction.
pub fn closed_generating_set(
    alg: &Algebra,
    d: &[HalfStandard],
    cap: usize,
) -> Result<Vec<HalfStandard>, SemigraphError> {
    let inst = alg.instance();
    let seed: BTreeSet<Element> = d.iter().map(|h| h.x.clone()).filter(|x| !x.is_unit()).collect();
    let mut f = inst.closure(&seed, cap)?;
    f.insert(Element::unit());

    let mut l0: BTreeSet<ProjectionSet> = BTreeSet::from([ProjectionSet::Top]);
    l0.extend(d.iter().map(|h| h.p.clone()));
    for x in &f {
        for y in &f {
            for (alpha, beta) in inst.min_common_extensions(x, y).iter() {
                l0.insert(inst.q_data(x, y, alpha, beta)?);
            }
        }
    }
    let letters: BTreeSet<EdgeId> = f.iter().flat_map(|x| x.letters().iter().copied()).collect();
    let budget = f.iter().fold(MultiDegree::zero(), |acc, x| acc.join(x.degree()));

    // Every projection reachable from L₀ by skipping letters of A, with the
    // minimal letter degrees needed to reach it.
    let mut reached: BTreeMap<ProjectionSet, Vec<MultiDegree>> = BTreeMap::new();
    let mut queue: Vec<(ProjectionSet, MultiDegree)> = Vec::new();
    for q in &l0 {
        reached.insert(q.clone(), vec![MultiDegree::zero()]);
        queue.push((q.clone(), MultiDegree::zero()));
    }
    while let Some((q, used)) = queue.pop() {
        for &a in &letters {
            let n = &used + &MultiDegree::unit(inst.coord(a));
            if !n.le(&budget) {
                continue;
            }
            let letter = inst.letter(a).expect("letter of an element");
            let next = inst.skip(&letter, &q);
            let known = reached.entry(next.clone()).or_default();
            if known.iter().any(|m| m.le(&n)) {
                continue;
            }
            known.retain(|m| !n.le(m));
            known.push(n.clone());
            queue.push((next, n));
        }
    }

    let mut h: BTreeSet<HalfStandard> = BTreeSet::new();
    let mut products: HashMap<MultiDegree, BTreeSet<ProjectionSet>> = HashMap::new();
    for alpha in &f {
        let n = alpha.degree().clone();
        let pi = match products.get(&n) {
            Some(pi) => pi.clone(),
            None => {
                let ln: Vec<ProjectionSet> = reached
                    .iter()
                    .filter(|(_, ms)| ms.iter().any(|m| m.le(&n)))
                    .map(|(q, _)| q.clone())
                    .collect();
                let pi = meet_closure(&ln);
                products.insert(n.clone(), pi.clone());
                pi
            }
        };
        let qa = inst.source_projection(alpha);
        for q in &pi {
            let p = q.meet(&qa);
            if p.is_zero() || (alpha.is_unit() && p.is_top()) {
                continue;
            }
            h.insert(HalfStandard::new(alpha.clone(), p));
        }
    }
    Ok(h.into_iter().collect())
}

fn meet_closure(sets: &[ProjectionSet]) -> BTreeSet<ProjectionSet> {
    let mut out: BTreeSet<ProjectionSet> = sets.iter().cloned().collect();
    loop {
        let items: Vec<ProjectionSet> = out.iter().cloned().collect();
        let mut added = false;
        for (i, a) in items.iter().enumerate() {
            for b in &items[i + 1..] {
                let m = a.meet(b);
                if !m.is_zero() && out.insert(m) {
                    added = true;
                }
            }
        }
        if !added {
            return out;
        }
    }
}

fn element_key(a: &AlgebraElement) -> Vec<(BasisWord, Scalar)> {
    a.terms().map(|(w, c)| (w.clone(), c.clone())).collect()
}

/// `G = {x y* : x, y ∈ H, d(x) = d(y)}`, without zero or repeated elements.
pub fn build_g(alg: &Algebra, h: &[HalfStandard]) -> Vec<AlgebraElement> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for x in h {
        for y in h {
            if x.x.degree() != y.x.degree() {
                continue;
            }
            let g = alg.standard(&x.x, &x.p.meet(&y.p), &y.x);
            if !g.is_zero() && seen.insert(element_key(&g)) {
                out.push(g);
            }
        }
    }
    out
}

/// Writes a diagonal projection as orthogonal range projections of half-standard words.
fn range_family(p: &AlgebraElement) -> Option<Vec<HalfStandard>> {
    let mut grouped: BTreeMap<Element, BTreeSet<crate::semigraph::VertexId>> = BTreeMap::new();
    for (w, c) in p.terms() {
        if !w.is_diagonal() || !c.is_one() {
            return None;
        }
        grouped.entry(w.s.clone()).or_default().insert(w.v);
    }
    Some(
        grouped
            .into_iter()
            .map(|(x, set)| HalfStandard::new(x, ProjectionSet::Set(set)))
            .collect(),
    )
}

/// The distinct nonzero range projections `g g*` of `G`.
fn range_projections(alg: &Algebra, g: &[AlgebraElement]) -> Result<Vec<AlgebraElement>, AlgebraError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for x in g {
        let p = alg.range_projection(x)?;
        if !p.is_zero() && seen.insert(element_key(&p)) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Minimal projections of the algebra generated by the range projections of `G`,
/// each decomposed into orthogonal standard projections.
pub fn minimal_projections(alg: &Algebra, g: &[AlgebraElement]) -> Result<Vec<Atom>, AlgebraError> {
    let mut atoms: Vec<Atom> = Vec::new();
    let mut previous: Vec<HalfStandard> = Vec::new();
    for p in range_projections(alg, g)? {
        let Some(family) = range_family(&p) else {
            return Err(AlgebraError::NotHalfStandard(alg.format(&p)));
        };
        let mut next = Vec::new();
        let mut covered = alg.zero();
        for atom in atoms {
            let inside = alg.multiply(&atom.projection, &p)?;
            let outside = alg.sub(&atom.projection, &inside)?;
            covered = alg.add(&covered, &inside)?;
            if !inside.is_zero() {
                let mut pieces = Vec::new();
                for piece in &atom.pieces {
                    for w in &family {
                        for x in alg.projection_product(&[piece.x.clone(), w.clone()])? {
                            pieces.push(StandardProjection {
                                x,
                                ys: piece.ys.clone(),
                            });
                        }
                    }
                }
                next.push(Atom {
                    projection: inside,
                    pieces: prune(alg, pieces),
                });
            }
            if !outside.is_zero() {
                let pieces = atom
                    .pieces
                    .iter()
                    .map(|piece| {
                        let mut ys = piece.ys.clone();
                        ys.extend(family.iter().cloned());
                        StandardProjection { x: piece.x.clone(), ys }
                    })
                    .collect();
                next.push(Atom {
                    projection: outside,
                    pieces: prune(alg, pieces),
                });
            }
        }
        let fresh = alg.sub(&p, &covered)?;
        if !fresh.is_zero() {
            let pieces = family
                .iter()
                .map(|w| StandardProjection {
                    x: w.clone(),
                    ys: previous.clone(),
                })
                .collect();
            next.push(Atom {
                projection: fresh,
                pieces: prune(alg, pieces),
            });
        }
        previous.extend(family);
        atoms = next;
    }
    Ok(atoms)
}

fn prune(alg: &Algebra, pieces: Vec<StandardProjection>) -> Vec<StandardProjection> {
    pieces
        .into_iter()
        .filter(|p| !alg.standard_projection(&p.x, &p.ys).is_zero())
        .collect()
}

struct Checker<'a> {
    alg: &'a Algebra,
    violations: Vec<HypothesisViolation>,
}

impl Checker<'_> {
    fn fail(&mut self, hypothesis: Hypothesis, detail: String) {
        self.violations.push(HypothesisViolation { hypothesis, detail });
    }

    fn fmt(&self, a: &AlgebraElement) -> String {
        self.alg.format(a)
    }

    fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        self.alg.multiply(a, b).expect("same algebra")
    }
}

/// Decides whether `target` is a sum of a subset of `g` (coefficients 0 or 1).
fn zero_one_combination(target: &AlgebraElement, g: &[AlgebraElement], alg: &Algebra) -> Option<bool> {
    const NODE_LIMIT: usize = 200_000;
    fn search(
        residual: &AlgebraElement,
        g: &[AlgebraElement],
        used: &mut Vec<bool>,
        alg: &Algebra,
        nodes: &mut usize,
    ) -> Option<bool> {
        *nodes += 1;
        if *nodes > NODE_LIMIT {
            return None;
        }
        let Some((w, _)) = residual.terms().next() else {
            return Some(true);
        };
        for i in 0..g.len() {
            if used[i] || g[i].coefficient(w).is_zero() {
                continue;
            }
            used[i] = true;
            let next = alg.sub(residual, &g[i]).expect("same algebra");
            let r = search(&next, g, used, alg, nodes);
            used[i] = false;
            match r {
                Some(false) => {}
                other => return other,
            }
        }
        Some(false)
    }
    let mut used = vec![false; g.len()];
    let mut nodes = 0;
    search(target, g, &mut used, alg, &mut nodes)
}

/// Whether `z` lies in the span of the atoms.
fn in_span_of_atoms(alg: &Algebra, z: &AlgebraElement, atoms: &[Atom]) -> bool {
    let mut rebuilt = alg.zero();
    for atom in atoms {
        let zp = alg.multiply(z, &atom.projection).expect("same algebra");
        if zp.is_zero() {
            continue;
        }
        let (w, c) = atom.projection.terms().next().expect("nonzero atom");
        let ratio = zp.coefficient(w) / c;
        let scaled = alg.scale(&atom.projection, &ratio).expect("same algebra");
        if scaled != zp {
            return false;
        }
        rebuilt = alg.add(&rebuilt, &scaled).expect("same algebra");
    }
    rebuilt == *z
}

/// Builds the matrix units of `span(G)` and verifies every hypothesis and law.
pub fn matrix_units(alg: &Algebra, g: &[AlgebraElement]) -> Result<CoreApproximant, CoreError> {
    let mut ck = Checker {
        alg,
        violations: Vec::new(),
    };
    let keys: HashSet<Vec<(BasisWord, Scalar)>> = g.iter().map(element_key).collect();
    for x in g {
        let adj = alg.adjoint(x)?;
        if !keys.contains(&element_key(&adj)) {
            ck.fail(Hypothesis::SelfAdjoint, format!("adjoint of {} is missing", ck.fmt(x)));
        }
    }
    let ranges = range_projections(alg, g)?;
    for (i, p) in ranges.iter().enumerate() {
        for q in &ranges[i + 1..] {
            if ck.mul(p, q) != ck.mul(q, p) {
                ck.fail(
                    Hypothesis::CommutingRanges,
                    format!("{} and {} do not commute", ck.fmt(p), ck.fmt(q)),
                );
            }
        }
    }
    for x in g {
        for y in g {
            let xy = ck.mul(x, y);
            match zero_one_combination(&xy, g, alg) {
                Some(true) => {}
                Some(false) => ck.fail(
                    Hypothesis::FiniteM,
                    format!("({})({}) is not a 0/1 combination of G", ck.fmt(x), ck.fmt(y)),
                ),
                None => ck.fail(
                    Hypothesis::FiniteM,
                    format!("search limit reached on ({})({})", ck.fmt(x), ck.fmt(y)),
                ),
            }
        }
    }
    if !ck.violations.is_empty() {
        return Err(CoreError::Hypotheses(ck.violations));
    }

    let atoms = minimal_projections(alg, g)?;
    for x in g {
        for y in g {
            let z = ck.mul(&ck.mul(x, &alg.range_projection(y)?), &alg.adjoint(x)?);
            if !in_span_of_atoms(alg, &z, &atoms) {
                ck.fail(
                    Hypothesis::AlsoInZ,
                    format!("({}) P ({})* is not in Z", ck.fmt(x), ck.fmt(x)),
                );
            }
        }
    }

    // e^i_{xy} = p_x s_i p_y
    let n = atoms.len();
    let mut candidates: BTreeMap<(usize, usize), Vec<(usize, AlgebraElement)>> = BTreeMap::new();
    for (xi, px) in atoms.iter().enumerate() {
        let left: Vec<AlgebraElement> = g.iter().map(|s| ck.mul(&px.projection, s)).collect();
        for (yi, py) in atoms.iter().enumerate() {
            for (i, ps) in left.iter().enumerate() {
                if ps.is_zero() {
                    continue;
                }
                let e = ck.mul(ps, &py.projection);
                if e.is_zero() {
                    continue;
                }
                let sp = ck.mul(&g[i], &py.projection);
                if e != *ps || e != sp {
                    ck.fail(
                        Hypothesis::UnitIndependence,
                        format!(
                            "p_{xi} s p_{yi} differs from p_{xi} s or s p_{yi} for s = {}",
                            ck.fmt(&g[i])
                        ),
                    );
                }
                candidates.entry((xi, yi)).or_default().push((i, e));
            }
        }
    }
    let mut units = BTreeMap::new();
    for ((x, y), list) in &candidates {
        let first = &list[0].1;
        for (i, e) in &list[1..] {
            if e != first {
                ck.fail(
                    Hypothesis::UnitIndependence,
                    format!("e_{x}{y} depends on the generator {}", ck.fmt(&g[*i])),
                );
            }
        }
        for (i, _) in list {
            for (j, _) in list {
                let hj = alg.adjoint(&g[*j])?;
                for other in [&g[*j], &hj] {
                    let p = ck.mul(
                        &ck.mul(&atoms[*x].projection, &ck.mul(&g[*i], other)),
                        &atoms[*x].projection,
                    );
                    if !alg.is_projection(&p)? {
                        ck.fail(
                            Hypothesis::Assumption1,
                            format!(
                                "p_{x} ({}) ({}) p_{x} is not a projection",
                                ck.fmt(&g[*i]),
                                ck.fmt(other)
                            ),
                        );
                    }
                }
            }
        }
        units.insert((*x, *y), first.clone());
    }

    // matrix-unit laws on the nonzero units
    for (&(x, y), e) in &units {
        let adj = alg.adjoint(e)?;
        if units.get(&(y, x)) != Some(&adj) {
            ck.fail(Hypothesis::MatrixUnitLaws, format!("e_{x}{y}* is not e_{y}{x}"));
        }
        if x == y && *e != atoms[x].projection {
            ck.fail(Hypothesis::MatrixUnitLaws, format!("e_{x}{x} is not p_{x}"));
        }
        for (&(x2, z), f) in &units {
            let prod = ck.mul(e, f);
            if y == x2 {
                if units.get(&(x, z)) != Some(&prod) {
                    ck.fail(Hypothesis::MatrixUnitLaws, format!("e_{x}{y} e_{y}{z} is not e_{x}{z}"));
                }
            } else if !prod.is_zero() {
                ck.fail(Hypothesis::MatrixUnitLaws, format!("e_{x}{y} e_{x2}{z} is not zero"));
            }
        }
    }
    for x in 0..n {
        if !units.contains_key(&(x, x)) {
            ck.fail(Hypothesis::MatrixUnitLaws, format!("e_{x}{x} vanishes"));
        }
    }
    let mut total = alg.zero();
    for atom in &atoms {
        total = alg.add(&total, &atom.projection)?;
    }
    for x in g {
        if ck.mul(&total, x) != *x || ck.mul(x, &total) != *x {
            ck.fail(
                Hypothesis::MatrixUnitLaws,
                format!("the atoms do not sum to a unit for {}", ck.fmt(x)),
            );
        }
    }

    for (i, atom) in atoms.iter().enumerate() {
        let mut sum = alg.zero();
        let expanded: Vec<AlgebraElement> = atom
            .pieces
            .iter()
            .map(|p| alg.standard_projection(&p.x, &p.ys))
            .collect();
        for (a, e) in expanded.iter().enumerate() {
            sum = alg.add(&sum, e)?;
            if !alg.is_projection(e)? {
                ck.fail(
                    Hypothesis::AtomExpansion,
                    format!("piece {a} of atom {i} is not a projection"),
                );
            }
            for f in &expanded[a + 1..] {
                if !ck.mul(e, f).is_zero() {
                    ck.fail(
                        Hypothesis::AtomExpansion,
                        format!("pieces of atom {i} are not orthogonal"),
                    );
                }
            }
        }
        if sum != atom.projection {
            ck.fail(
                Hypothesis::AtomExpansion,
                format!("pieces of atom {i} do not sum to it"),
            );
        }
    }

    let blocks = blocks_of(n, &units);
    let approx = CoreApproximant {
        h: Vec::new(),
        g: g.to_vec(),
        atoms,
        units,
        blocks,
    };

    if ck.violations.is_empty() {
        let dim_g = rank(&g.iter().map(AlgebraElement::to_vector).collect::<Vec<_>>());
        let mut images = Vec::new();
        for x in g {
            match represent(alg, x, &approx) {
                Ok(m) => images.push(m.to_vector()),
                Err(e) => ck.violations.extend(e.violations().iter().cloned()),
            }
        }
        let dim_image = rank(&images);
        let dim_m: usize = approx.profile().iter().map(|b| b * b).sum();
        if dim_g != dim_image || dim_g != dim_m {
            ck.fail(
                Hypothesis::Faithfulness,
                format!("dim span(G) = {dim_g}, rank of image = {dim_image}, Σ b² = {dim_m}"),
            );
        }
    }

    if ck.violations.is_empty() {
        Ok(approx)
    } else {
        Err(CoreError::Hypotheses(ck.violations))
    }
}

fn blocks_of(n: usize, units: &BTreeMap<(usize, usize), AlgebraElement>) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for &(x, y) in units.keys() {
        let (a, b) = (find(&mut parent, x), find(&mut parent, y));
        parent[a.max(b)] = a.min(b);
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in 0..n {
        let r = find(&mut parent, x);
        groups.entry(r).or_default().push(x);
    }
    let mut blocks: Vec<Vec<usize>> = groups.into_values().collect();
    blocks.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    blocks
}

/// Coordinates of `a ∈ span(G)` in the matrix units.
pub fn represent(alg: &Algebra, a: &AlgebraElement, approx: &CoreApproximant) -> Result<BlockMatrix, CoreError> {
    let mut blocks: Vec<Vec<Vec<Scalar>>> = approx
        .blocks
        .iter()
        .map(|b| vec![vec![Scalar::zero(); b.len()]; b.len()])
        .collect();
    let mut rebuilt = alg.zero();
    let mut violations = Vec::new();
    let n = approx.atoms.len();
    for x in 0..n {
        let left = alg.multiply(&approx.atoms[x].projection, a)?;
        if left.is_zero() {
            continue;
        }
        for y in 0..n {
            let m = alg.multiply(&left, &approx.atoms[y].projection)?;
            if m.is_zero() {
                continue;
            }
            let Some(e) = approx.unit(x, y) else {
                violations.push(HypothesisViolation {
                    hypothesis: Hypothesis::Membership,
                    detail: format!("p_{x} a p_{y} is nonzero but e_{x}{y} = 0"),
                });
                continue;
            };
            let (w, c) = e.terms().next().expect("nonzero unit");
            let coeff = m.coefficient(w) / c;
            let scaled = alg.scale(e, &coeff)?;
            if scaled != m {
                violations.push(HypothesisViolation {
                    hypothesis: Hypothesis::Membership,
                    detail: format!("p_{x} a p_{y} is not a multiple of e_{x}{y}"),
                });
                continue;
            }
            rebuilt = alg.add(&rebuilt, &scaled)?;
            let (bx, ix) = approx.block_of(x);
            let (by, iy) = approx.block_of(y);
            debug_assert_eq!(bx, by);
            blocks[bx][ix][iy] = coeff;
        }
    }
    if violations.is_empty() && rebuilt != *a {
        violations.push(HypothesisViolation {
            hypothesis: Hypothesis::Membership,
            detail: format!("{} is not in span(G)", alg.format(a)),
        });
    }
    if violations.is_empty() {
        Ok(BlockMatrix { blocks })
    } else {
        Err(CoreError::Hypotheses(violations))
    }
}

/// Builds the approximant generated by `d`.
///
/// In a quotient the approximant is built upstairs and pushed through the
/// quotient map: a block either survives whole or vanishes.
pub fn approximant(alg: &Algebra, d: &[HalfStandard], cap: usize) -> Result<CoreApproximant, CoreError> {
    if alg.is_quotient() {
        let upstairs = Algebra::new(alg.instance().clone());
        return descend(alg, approximant(&upstairs, d, cap)?);
    }
    let h = closed_generating_set(alg, d, cap)?;
    let g = build_g(alg, &h);
    let mut approx = matrix_units(alg, &g)?;
    approx.h = h;
    Ok(approx)
}

fn descend(alg: &Algebra, up: CoreApproximant) -> Result<CoreApproximant, CoreError> {
    let mut g: Vec<AlgebraElement> = Vec::new();
    for a in &up.g {
        let b = alg.transfer(a);
        if !b.is_zero() && !g.contains(&b) {
            g.push(b);
        }
    }
    let images: Vec<AlgebraElement> = up.atoms.iter().map(|a| alg.transfer(&a.projection)).collect();
    let mut index: BTreeMap<usize, usize> = BTreeMap::new();
    let mut atoms = Vec::new();
    for (x, (atom, image)) in up.atoms.into_iter().zip(images).enumerate() {
        if !image.is_zero() {
            index.insert(x, atoms.len());
            atoms.push(Atom {
                projection: image,
                pieces: atom.pieces,
            });
        }
    }
    let mut violations = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for block in &up.blocks {
        let alive: Vec<usize> = block.iter().filter_map(|x| index.get(x).copied()).collect();
        if !alive.is_empty() && alive.len() != block.len() {
            violations.push(HypothesisViolation {
                hypothesis: Hypothesis::Faithfulness,
                detail: format!(
                    "a block of size {} loses only some of its atoms in the quotient",
                    block.len()
                ),
            });
        }
        if !alive.is_empty() {
            blocks.push(alive);
        }
    }
    blocks.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    let mut units = BTreeMap::new();
    for ((x, y), e) in &up.units {
        if let (Some(&i), Some(&j)) = (index.get(x), index.get(y)) {
            units.insert((i, j), alg.transfer(e));
        }
    }
    let dim: usize = blocks.iter().map(|b| b.len() * b.len()).sum();
    let span = rank(&g.iter().map(AlgebraElement::to_vector).collect::<Vec<_>>());
    if span != dim {
        violations.push(HypothesisViolation {
            hypothesis: Hypothesis::Faithfulness,
            detail: format!("span(G) has dimension {span} in the quotient but the surviving blocks give {dim}"),
        });
    }
    if !violations.is_empty() {
        return Err(CoreError::Hypotheses(violations));
    }
    Ok(CoreApproximant {
        h: up.h,
        g,
        atoms,
        units,
        blocks,
    })
}

/// Block sizes of the level-`n` approximant, largest first.
pub fn core_dimension_profile(alg: &Algebra, level: &MultiDegree, cap: usize) -> Result<Vec<usize>, CoreError> {
    let d = level_generators(alg.instance(), level);
    Ok(approximant(alg, &d, cap)?.profile())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::semigraph::constructors::{cuntz, product_example, square_instance};
    use crate::semigraph::DEFAULT_CAP;

    fn o2() -> Algebra {
        Algebra::new(Arc::new(cuntz(2)))
    }

    #[test]
    fn toeplitz_profiles() {
        let alg = o2();
        for (n, expected) in [(0, vec![1]), (1, vec![2, 1]), (2, vec![4, 2, 1])] {
            let got = core_dimension_profile(&alg, &MultiDegree::from_slice(&[n]), DEFAULT_CAP).unwrap();
            assert_eq!(got, expected, "level {n}");
        }
    }

    #[test]
    fn cuntz_quotient_profiles() {
        let full = crate::conditions::make_full(&o2()).unwrap();
        for (n, expected) in [(0, vec![1]), (1, vec![2]), (2, vec![4])] {
            let got = core_dimension_profile(&full, &MultiDegree::from_slice(&[n]), DEFAULT_CAP).unwrap();
            assert_eq!(got, expected, "level {n}");
        }
    }

    #[test]
    fn single_range_projection_has_one_atom() {
        let alg = o2();
        let a = alg.instance().letter_named("a").unwrap();
        let atoms = minimal_projections(&alg, &[alg.range_of(&a)]).unwrap();
        assert_eq!(atoms.len(), 1);
        assert!(minimal_projections(&alg, &[]).unwrap().is_empty());
    }

    #[test]
    fn empty_generators() {
        let alg = o2();
        assert!(closed_generating_set(&alg, &[], DEFAULT_CAP).unwrap().is_empty());
        assert!(build_g(&alg, &[]).is_empty());
    }

    #[test]
    fn non_closed_g_reports_finite_m() {
        let alg = o2();
        let a = alg.element(&alg.instance().letter_named("a").unwrap());
        let err = matrix_units(&alg, &[a.clone(), alg.adjoint(&a).unwrap()]).unwrap_err();
        assert!(err.violations().iter().any(|v| v.hypothesis == Hypothesis::FiniteM));
    }

    #[test]
    fn square_generating_set_contains_extensions() {
        let inst = Arc::new(square_instance());
        let alg = Algebra::new(inst.clone());
        let el = |s: &str| inst.parse_element(s).unwrap();
        let d = vec![HalfStandard::of(&inst, el("e")), HalfStandard::of(&inst, el("f'"))];
        let h = closed_generating_set(&alg, &d, DEFAULT_CAP).unwrap();
        assert!(h.iter().any(|x| x.x == el("e f")));
        assert!(matrix_units(&alg, &build_g(&alg, &h)).is_ok());
    }

    #[test]
    fn o3_level_one() {
        let alg = Algebra::new(Arc::new(cuntz(3)));
        let got = core_dimension_profile(&alg, &MultiDegree::from_slice(&[1]), DEFAULT_CAP).unwrap();
        assert_eq!(got, vec![3, 1]);
    }

    #[test]
    fn product_without_common_sources() {
        let alg = Algebra::new(Arc::new(product_example()));
        let got = core_dimension_profile(&alg, &MultiDegree::from_slice(&[1, 0]), DEFAULT_CAP).unwrap();
        assert_eq!(got, vec![1, 1, 1, 1]);
    }
}
