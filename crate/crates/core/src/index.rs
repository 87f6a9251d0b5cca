//! Index universes and the finite–cofinite algebra of index sets.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;

/// Either `{0, …, n−1}` or the natural numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Universe {
    Finite(u32),
    Omega,
}

impl Universe {
    pub fn contains(self, i: u32) -> bool {
        match self {
            Universe::Finite(n) => i < n,
            Universe::Omega => true,
        }
    }
}

/// A universe together with the identifiers of its indices. Over ω the
/// identifiers are the decimal numerals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexUniverse {
    universe: Universe,
    names: Vec<String>,
}

impl IndexUniverse {
    pub fn finite(names: Vec<String>) -> Result<Self, Error> {
        let mut seen = BTreeSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(Error::Malformed(format!("duplicate index identifier `{n}`")));
            }
        }
        let size = u32::try_from(names.len()).map_err(|_| Error::Malformed("too many indices".into()))?;
        Ok(Self { universe: Universe::Finite(size), names })
    }

    pub fn finite_named(names: &[&str]) -> Result<Self, Error> {
        Self::finite(names.iter().map(|s| s.to_string()).collect())
    }

    pub fn omega() -> Self {
        Self { universe: Universe::Omega, names: Vec::new() }
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn is_omega(&self) -> bool {
        self.universe == Universe::Omega
    }

    /// Identifiers of a finite universe; empty over ω.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn label(&self, i: u32) -> String {
        match self.universe {
            Universe::Omega => i.to_string(),
            Universe::Finite(_) => self.names[i as usize].clone(),
        }
    }

    pub fn index_of(&self, name: &str) -> Result<u32, Error> {
        match self.universe {
            Universe::Omega => name.parse().map_err(|_| Error::UnknownIndex(name.into())),
            Universe::Finite(_) => self
                .names
                .iter()
                .position(|n| n == name)
                .map(|i| i as u32)
                .ok_or_else(|| Error::UnknownIndex(name.into())),
        }
    }

    pub fn set_label(&self, s: &IndexSet) -> String {
        let parts: Vec<String> = s.elements().iter().map(|&i| self.label(i)).collect();
        let body = format!("{{{}}}", parts.join(","));
        if s.is_cofinite() {
            if parts.is_empty() {
                "ω".into()
            } else {
                format!("ω∖{body}")
            }
        } else {
            body
        }
    }
}

/// A finite or cofinite set of indices.
///
/// Over a finite universe every set is stored as `Fin`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    universe: Universe,
    cofinite: bool,
    elems: BTreeSet<u32>,
}

impl IndexSet {
    pub fn fin<I: IntoIterator<Item = u32>>(universe: Universe, elems: I) -> Result<Self, Error> {
        let elems: BTreeSet<u32> = elems.into_iter().collect();
        if let Some(&i) = elems.iter().find(|&&i| !universe.contains(i)) {
            return Err(Error::UnknownIndex(i.to_string()));
        }
        Ok(Self { universe, cofinite: false, elems })
    }

    /// The complement of the finite set `missing`.
    pub fn cofin<I: IntoIterator<Item = u32>>(universe: Universe, missing: I) -> Result<Self, Error> {
        Ok(Self::fin(universe, missing)?.complement())
    }

    pub fn empty(universe: Universe) -> Self {
        Self { universe, cofinite: false, elems: BTreeSet::new() }
    }

    pub fn full(universe: Universe) -> Self {
        Self::empty(universe).complement()
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn is_cofinite(&self) -> bool {
        self.cofinite
    }

    pub fn is_finite(&self) -> bool {
        !self.cofinite
    }

    /// The explicit members (`Fin`) or the explicit non-members (`CoFin`).
    pub fn elements(&self) -> &BTreeSet<u32> {
        &self.elems
    }

    pub fn is_empty(&self) -> bool {
        !self.cofinite && self.elems.is_empty()
    }

    pub fn contains(&self, i: u32) -> bool {
        self.universe.contains(i) && self.elems.contains(&i) != self.cofinite
    }

    pub fn complement(&self) -> Self {
        match self.universe {
            Universe::Finite(n) => Self {
                universe: self.universe,
                cofinite: false,
                elems: (0..n).filter(|i| !self.elems.contains(i)).collect(),
            },
            Universe::Omega => Self {
                universe: self.universe,
                cofinite: !self.cofinite,
                elems: self.elems.clone(),
            },
        }
    }

    fn same(&self, other: &Self) -> Result<(), Error> {
        if self.universe == other.universe {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }

    pub fn union(&self, other: &Self) -> Result<Self, Error> {
        self.same(other)?;
        let (cofinite, elems) = match (self.cofinite, other.cofinite) {
            (false, false) => (false, &self.elems | &other.elems),
            (true, true) => (true, &self.elems & &other.elems),
            (true, false) => (true, &self.elems - &other.elems),
            (false, true) => (true, &other.elems - &self.elems),
        };
        Ok(Self { universe: self.universe, cofinite, elems })
    }

    pub fn intersection(&self, other: &Self) -> Result<Self, Error> {
        Ok(self.complement().union(&other.complement())?.complement())
    }

    pub fn difference(&self, other: &Self) -> Result<Self, Error> {
        self.intersection(&other.complement())
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool, Error> {
        Ok(self.difference(other)?.is_empty())
    }

    /// Members of a finite set in ascending order; `None` for cofinite sets over ω.
    pub fn members(&self) -> Option<Vec<u32>> {
        if self.cofinite {
            None
        } else {
            Some(self.elems.iter().copied().collect())
        }
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elems.iter().map(|i| i.to_string()).collect();
        if self.cofinite {
            write!(f, "CoFin({{{}}})", parts.join(","))
        } else {
            write!(f, "Fin({{{}}})", parts.join(","))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersection,
    Difference,
    Complement,
}

/// Applies `op`; `Complement` ignores `t`.
pub fn indexset_ops(op: SetOp, s: &IndexSet, t: &IndexSet) -> Result<IndexSet, Error> {
    match op {
        SetOp::Union => s.union(t),
        SetOp::Intersection => s.intersection(t),
        SetOp::Difference => s.difference(t),
        SetOp::Complement => Ok(s.complement()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const W: Universe = Universe::Omega;

    fn fin(v: &[u32]) -> IndexSet {
        IndexSet::fin(W, v.iter().copied()).unwrap()
    }
    fn cofin(v: &[u32]) -> IndexSet {
        IndexSet::cofin(W, v.iter().copied()).unwrap()
    }

    #[test]
    fn worked_cases() {
        assert_eq!(cofin(&[0]).union(&fin(&[0])).unwrap(), IndexSet::full(W));
        assert_eq!(cofin(&[0, 1]).intersection(&cofin(&[1, 2])).unwrap(), cofin(&[0, 1, 2]));
        assert_eq!(fin(&[3, 4]).difference(&cofin(&[3])).unwrap(), fin(&[3]));
    }

    #[test]
    fn finite_universe_normalizes() {
        let u = Universe::Finite(3);
        let s = IndexSet::cofin(u, [1]).unwrap();
        assert!(s.is_finite());
        assert_eq!(s.members().unwrap(), alloc::vec![0, 2]);
        assert!(IndexSet::fin(u, [3]).is_err());
        assert_eq!(s.union(&fin(&[1])), Err(Error::UniverseMismatch));
    }

    #[test]
    fn labels() {
        let u = IndexUniverse::finite_named(&["i", "k"]).unwrap();
        let s = IndexSet::fin(u.universe(), [1]).unwrap();
        assert_eq!(u.set_label(&s), "{k}");
        assert_eq!(IndexUniverse::omega().set_label(&cofin(&[0])), "ω∖{0}");
        assert_eq!(u.index_of("k").unwrap(), 1);
        assert!(u.index_of("z").is_err());
    }
}
