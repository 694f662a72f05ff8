//! Multi-degrees: finitely supported maps from coordinate indices to integers.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// An element of ℕ₀^k. Zero coordinates are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct MultiDegree {
    coords: BTreeMap<usize, u32>,
}

impl MultiDegree {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The standard basis vector e_i.
    pub fn unit(coord: usize) -> Self {
        let mut coords = BTreeMap::new();
        coords.insert(coord, 1);
        Self { coords }
    }

    /// Builds a degree from a dense coordinate list.
    pub fn from_slice(values: &[u32]) -> Self {
        let coords = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v > 0)
            .map(|(i, v)| (i, *v))
            .collect();
        Self { coords }
    }

    /// The same value `n` in each of the first `rank` coordinates.
    pub fn uniform(rank: usize, n: u32) -> Self {
        Self::from_slice(&vec![n; rank])
    }

    pub fn get(&self, coord: usize) -> u32 {
        self.coords.get(&coord).copied().unwrap_or(0)
    }

    pub fn set(&mut self, coord: usize, value: u32) {
        if value == 0 {
            self.coords.remove(&coord);
        } else {
            self.coords.insert(coord, value);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    /// Sum of all coordinates.
    pub fn total(&self) -> u32 {
        self.coords.values().sum()
    }

    pub fn to_vec(&self, rank: usize) -> Vec<u32> {
        (0..rank).map(|i| self.get(i)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.coords.iter().map(|(k, v)| (*k, *v))
    }

    /// Componentwise order: `self ≤ other` in every coordinate.
    pub fn le(&self, other: &Self) -> bool {
        self.coords.iter().all(|(k, v)| *v <= other.get(*k))
    }

    /// Componentwise maximum.
    pub fn join(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in other.iter() {
            if v > out.get(k) {
                out.set(k, v);
            }
        }
        out
    }

    /// Componentwise minimum.
    pub fn meet(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (k, v) in self.iter() {
            out.set(k, v.min(other.get(k)));
        }
        out
    }

    /// `self − other`, defined when `other ≤ self`.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        if !other.le(self) {
            return None;
        }
        let mut out = self.clone();
        for (k, v) in other.iter() {
            out.set(k, out.get(k) - v);
        }
        Some(out)
    }

    /// All degrees `m` with `0 ≤ m ≤ self`, in lexicographic order of the dense vector.
    pub fn down_set(&self, rank: usize) -> Vec<MultiDegree> {
        let top = self.to_vec(rank);
        let mut out = vec![Vec::new()];
        for &t in &top {
            let mut next = Vec::with_capacity(out.len() * (t as usize + 1));
            for prefix in &out {
                for v in 0..=t {
                    let mut p: Vec<u32> = prefix.clone();
                    p.push(v);
                    next.push(p);
                }
            }
            out = next;
        }
        out.iter().map(|v| MultiDegree::from_slice(v)).collect()
    }

    pub fn to_diff(&self) -> DegreeDiff {
        DegreeDiff {
            coords: self.iter().map(|(k, v)| (k, v as i64)).collect(),
        }
    }
}

impl Add for &MultiDegree {
    type Output = MultiDegree;
    fn add(self, rhs: &MultiDegree) -> MultiDegree {
        let mut out = self.clone();
        for (k, v) in rhs.iter() {
            out.set(k, out.get(k) + v);
        }
        out
    }
}

impl Add for MultiDegree {
    type Output = MultiDegree;
    fn add(self, rhs: MultiDegree) -> MultiDegree {
        &self + &rhs
    }
}

impl PartialOrd for MultiDegree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self.le(other), other.le(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }
}

impl fmt::Debug for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.coords.keys().next_back().map_or(1, |k| k + 1);
        let parts: Vec<String> = (0..width).map(|i| self.get(i).to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// An element of ℤ^k: the degree of a word in the algebra.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegreeDiff {
    coords: BTreeMap<usize, i64>,
}

impl DegreeDiff {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_slice(values: &[i64]) -> Self {
        Self {
            coords: values
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0)
                .map(|(i, v)| (i, *v))
                .collect(),
        }
    }

    /// `plus − minus`.
    pub fn between(plus: &MultiDegree, minus: &MultiDegree) -> Self {
        &plus.to_diff() - &minus.to_diff()
    }

    pub fn get(&self, coord: usize) -> i64 {
        self.coords.get(&coord).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    fn set(&mut self, coord: usize, value: i64) {
        if value == 0 {
            self.coords.remove(&coord);
        } else {
            self.coords.insert(coord, value);
        }
    }
}

impl Add for &DegreeDiff {
    type Output = DegreeDiff;
    fn add(self, rhs: &DegreeDiff) -> DegreeDiff {
        let mut out = self.clone();
        for (k, v) in &rhs.coords {
            out.set(*k, out.get(*k) + v);
        }
        out
    }
}

impl Sub for &DegreeDiff {
    type Output = DegreeDiff;
    fn sub(self, rhs: &DegreeDiff) -> DegreeDiff {
        self + &(-rhs)
    }
}

impl Neg for &DegreeDiff {
    type Output = DegreeDiff;
    fn neg(self) -> DegreeDiff {
        DegreeDiff {
            coords: self.coords.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }
}

impl fmt::Debug for DegreeDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for DegreeDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.coords.keys().next_back().map_or(1, |k| k + 1);
        let parts: Vec<String> = (0..width).map(|i| self.get(i).to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}
