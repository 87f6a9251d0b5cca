use alloc::vec;
use alloc::vec::Vec;

use super::{FiniteOrtholattice, OrthoOps};
use crate::error::Error;
use crate::report::{Law, Report};

/// A total element map between two finite ortholattices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthoHomomorphism<'a> {
    pub source: &'a FiniteOrtholattice,
    pub target: &'a FiniteOrtholattice,
    pub map: Vec<usize>,
}

impl<'a> OrthoHomomorphism<'a> {
    pub fn new(
        source: &'a FiniteOrtholattice,
        target: &'a FiniteOrtholattice,
        map: Vec<usize>,
    ) -> Self {
        Self { source, target, map }
    }

    pub fn identity(l: &'a FiniteOrtholattice) -> Self {
        Self::new(l, l, l.elements().collect())
    }

    /// Builds the map from `(source name, target name)` pairs.
    pub fn from_named(
        source: &'a FiniteOrtholattice,
        target: &'a FiniteOrtholattice,
        pairs: &[(&str, &str)],
    ) -> Result<Self, Error> {
        let mut map = vec![usize::MAX; source.size()];
        for (a, b) in pairs {
            map[source.index_of(a)?] = target.index_of(b)?;
        }
        if let Some(i) = map.iter().position(|&v| v == usize::MAX) {
            return Err(Error::Malformed(alloc::format!(
                "map is not total: `{}` has no image",
                source.name(i)
            )));
        }
        Ok(Self::new(source, target, map))
    }
}

pub fn check_homomorphism(h: &OrthoHomomorphism<'_>, embedding_required: bool) -> Result<Report, Error> {
    check_map(h.source, h.target, &h.map, embedding_required)
}

/// Checks that `map` preserves bounds, meet, join and ortho (and, when
/// `embedding_required`, is injective) from `source` into any
/// [`OrthoOps`] target.
pub fn check_map<S: OrthoOps + ?Sized, T: OrthoOps + ?Sized>(
    source: &S,
    target: &T,
    map: &[usize],
    embedding_required: bool,
) -> Result<Report, Error> {
    let n = source.size();
    if map.len() != n {
        return Err(Error::Malformed("map is not total on the source".into()));
    }
    if let Some(&bad) = map.iter().find(|&&v| v >= target.size()) {
        return Err(Error::OutOfRange {
            index: bad,
            size: target.size(),
        });
    }
    let s = |a: usize| source.label(a);
    let mut r = Report::new();
    if map[source.bottom()] != target.bottom() {
        r.push(Law::BottomPreserved, vec![s(source.bottom())]);
    }
    if map[source.top()] != target.top() {
        r.push(Law::TopPreserved, vec![s(source.top())]);
    }
    if let Some(a) = (0..n).find(|&a| map[source.ortho(a)] != target.ortho(map[a])) {
        r.push(Law::OrthoPreserved, vec![s(a)]);
    }
    'm: for a in 0..n {
        for b in 0..n {
            if map[source.meet(a, b)] != target.meet(map[a], map[b]) {
                r.push(Law::MeetPreserved, vec![s(a), s(b)]);
                break 'm;
            }
        }
    }
    'j: for a in 0..n {
        for b in 0..n {
            if map[source.join(a, b)] != target.join(map[a], map[b]) {
                r.push(Law::JoinPreserved, vec![s(a), s(b)]);
                break 'j;
            }
        }
    }
    if embedding_required {
        'i: for a in 0..n {
            for b in a + 1..n {
                if map[a] == map[b] {
                    r.push(Law::Injective, vec![s(a), s(b)]);
                    break 'i;
                }
            }
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ortho::library::*;
    use alloc::string::ToString;

    #[test]
    fn identity_is_embedding() {
        let o6 = benzene();
        assert!(check_homomorphism(&OrthoHomomorphism::identity(&o6), true).unwrap().is_pass());
    }

    #[test]
    fn bound_inclusion_is_embedding() {
        let (c2, b4) = (chain2(), boolean4());
        let h = OrthoHomomorphism::from_named(&c2, &b4, &[("0", "0"), ("1", "1")]).unwrap();
        assert!(check_homomorphism(&h, true).unwrap().is_pass());
    }

    #[test]
    fn collapsing_map_breaks_meet() {
        let b4 = boolean4();
        let h = OrthoHomomorphism::from_named(&b4, &b4, &[("0", "0"), ("a", "1"), ("a'", "1"), ("1", "1")]).unwrap();
        let r = check_homomorphism(&h, true).unwrap();
        assert_eq!(r.find(Law::MeetPreserved).unwrap().witness, vec!["a".to_string(), "a'".to_string()]);
        assert!(r.has(Law::Injective));
    }

    #[test]
    fn out_of_range_target() {
        let b4 = boolean4();
        let c2 = chain2();
        assert!(matches!(check_map(&c2, &b4, &[0, 7], false), Err(Error::OutOfRange { .. })));
    }
}
