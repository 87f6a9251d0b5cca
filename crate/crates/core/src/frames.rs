//! Orthoframes, bi-orthogonal closure, and MacNeille completion of finite
//! ortholattices through the frame of their non-zero elements.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use fixedbitset::FixedBitSet;

use crate::error::Error;
use crate::ortho::{check_map, Candidate, FiniteOrtholattice, OrthoOps};
use crate::report::{Law, Report};

/// Frames are stored with one `u64` mask per point.
pub const MAX_FRAME_POINTS: usize = 64;
/// Default refusal threshold for [`biclosed_sets`], which visits every subset.
pub const DEFAULT_POINT_CAP: usize = 16;

/// A finite set of points with an irreflexive, symmetric orthogonality relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthoFrame {
    points: Vec<String>,
    perp: Vec<u64>,
}

impl OrthoFrame {
    /// `perp[x]` is the mask of points orthogonal to `x`.
    pub fn new(points: Vec<String>, perp: Vec<u64>) -> Result<Self, Error> {
        let k = points.len();
        if k > MAX_FRAME_POINTS {
            return Err(Error::CapExceeded { what: "frame", size: k, cap: MAX_FRAME_POINTS });
        }
        if perp.len() != k {
            return Err(Error::Malformed("orthogonality relation is not square".into()));
        }
        let all = full_mask(k);
        for x in 0..k {
            if perp[x] & !all != 0 {
                return Err(Error::OutOfRange { index: 63 - perp[x].leading_zeros() as usize, size: k });
            }
            if perp[x] >> x & 1 == 1 {
                return Err(Error::Invalid(format!("orthogonality is not irreflexive at `{}`", points[x])));
            }
            for y in 0..k {
                if (perp[x] >> y & 1) != (perp[y] >> x & 1) {
                    return Err(Error::Invalid(format!(
                        "orthogonality is not symmetric at (`{}`, `{}`)",
                        points[x], points[y]
                    )));
                }
            }
        }
        let mut seen = alloc::collections::BTreeSet::new();
        for p in &points {
            if !seen.insert(p.as_str()) {
                return Err(Error::Malformed(format!("duplicate point identifier `{p}`")));
            }
        }
        Ok(Self { points, perp })
    }

    /// Builds a frame from unordered orthogonal pairs.
    pub fn from_edges(points: &[&str], edges: &[(&str, &str)]) -> Result<Self, Error> {
        let names: Vec<String> = points.iter().map(|s| String::from(*s)).collect();
        let mut perp = vec![0u64; points.len()];
        let idx = |s: &str| points.iter().position(|p| *p == s).ok_or_else(|| Error::UnknownElement(s.into()));
        for (a, b) in edges {
            let (i, j) = (idx(a)?, idx(b)?);
            perp[i] |= 1 << j;
            perp[j] |= 1 << i;
        }
        Self::new(names, perp)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn perp(&self, x: usize, y: usize) -> bool {
        self.perp[x] >> y & 1 == 1
    }

    pub fn all(&self) -> u64 {
        full_mask(self.len())
    }

    /// Orthogonal pairs `(x, y)` with `x < y`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.len() {
            for y in x + 1..self.len() {
                if self.perp(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// `U^⊥ = { x : x ⊥ u for all u ∈ U }`.
    pub fn perp_set(&self, u: u64) -> u64 {
        let mut acc = self.all();
        let mut rest = u;
        while rest != 0 {
            let b = rest.trailing_zeros() as usize;
            acc &= self.perp[b];
            rest &= rest - 1;
        }
        acc
    }

    pub fn closure(&self, u: u64) -> u64 {
        self.perp_set(self.perp_set(u))
    }

    pub fn mask_of(&self, names: &[&str]) -> Result<u64, Error> {
        names.iter().try_fold(0u64, |m, s| {
            let i = self
                .points
                .iter()
                .position(|p| p == s)
                .ok_or_else(|| Error::UnknownElement((*s).into()))?;
            Ok(m | 1 << i)
        })
    }

    pub fn names_of(&self, mask: u64) -> Vec<String> {
        (0..self.len()).filter(|&i| mask >> i & 1 == 1).map(|i| self.points[i].clone()).collect()
    }

    /// Set notation for a mask, e.g. `{a,b'}`.
    pub fn set_label(&self, mask: u64) -> String {
        format!("{{{}}}", self.names_of(mask).join(","))
    }

    pub fn perp_set_named(&self, names: &[&str]) -> Result<Vec<String>, Error> {
        Ok(self.names_of(self.perp_set(self.mask_of(names)?)))
    }
}

fn full_mask(k: usize) -> u64 {
    if k == 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// The frame of non-zero elements, `x ⊥ y ⇔ x ≤ y^⊥`.
pub fn frame_of(l: &FiniteOrtholattice) -> Result<OrthoFrame, Error> {
    let pts: Vec<usize> = l.elements().filter(|&a| a != l.bottom()).collect();
    if pts.len() > MAX_FRAME_POINTS {
        return Err(Error::CapExceeded { what: "frame", size: pts.len(), cap: MAX_FRAME_POINTS });
    }
    let perp = pts
        .iter()
        .map(|&x| {
            pts.iter()
                .enumerate()
                .filter(|&(_, &y)| l.leq(x, l.ortho(y)))
                .fold(0u64, |m, (j, _)| m | 1 << j)
        })
        .collect();
    OrthoFrame::new(pts.iter().map(|&a| l.name(a).into()).collect(), perp)
}

/// The ortholattice of bi-orthogonally closed sets of a frame, ordered by
/// inclusion, with `U^⊥` as complement.
#[derive(Debug, Clone)]
pub struct ClosedSets {
    pub lattice: FiniteOrtholattice,
    /// Point mask of each lattice element.
    pub sets: Vec<u64>,
}

impl ClosedSets {
    pub fn element_of(&self, mask: u64) -> Option<usize> {
        self.sets.binary_search_by_key(&(mask.count_ones(), mask), |&m| (m.count_ones(), m)).ok()
    }
}

pub fn biclosed_sets(f: &OrthoFrame, point_cap: usize) -> Result<ClosedSets, Error> {
    let k = f.len();
    if k > point_cap {
        return Err(Error::CapExceeded { what: "frame", size: k, cap: point_cap });
    }
    // every closed set is U^⊥ for some U
    let mut sets: Vec<u64> = (0..=f.all()).map(|u| f.perp_set(u)).collect();
    sets.sort_unstable_by_key(|&m| (m.count_ones(), m));
    sets.dedup();
    let n = sets.len();
    let names = sets.iter().map(|&m| f.set_label(m)).collect();
    let rows = sets
        .iter()
        .map(|&a| {
            let mut s = FixedBitSet::with_capacity(n);
            for (j, &b) in sets.iter().enumerate() {
                s.set(j, a & !b == 0);
            }
            s
        })
        .collect();
    let pos = |m: u64| sets.binary_search_by_key(&(m.count_ones(), m), |&x| (x.count_ones(), x)).expect("closed");
    let ortho = sets.iter().map(|&a| pos(f.perp_set(a))).collect();
    let lattice = FiniteOrtholattice::new(Candidate::from_rows(names, rows, ortho)?)
        .map_err(|e| Error::Internal(format!("closed sets of a frame failed the ortholattice laws: {e}")))?;
    Ok(ClosedSets { lattice, sets })
}

/// A completion of a finite ortholattice together with its embedding.
#[derive(Debug, Clone)]
pub struct Completion {
    pub source: FiniteOrtholattice,
    pub completion: FiniteOrtholattice,
    pub embed: Vec<usize>,
}

/// MacNeille completion: closed sets of [`frame_of`] with `a ↦ ↓a ∖ {0}`.
pub fn macneille(l: &FiniteOrtholattice) -> Result<Completion, Error> {
    macneille_with_cap(l, DEFAULT_POINT_CAP)
}

pub fn macneille_with_cap(l: &FiniteOrtholattice, point_cap: usize) -> Result<Completion, Error> {
    let frame = frame_of(l)?;
    let closed = biclosed_sets(&frame, point_cap)?;
    let pts: Vec<usize> = l.elements().filter(|&a| a != l.bottom()).collect();
    let embed = l
        .elements()
        .map(|a| {
            let mask = pts
                .iter()
                .enumerate()
                .filter(|&(_, &x)| l.leq(x, a))
                .fold(0u64, |m, (j, _)| m | 1 << j);
            closed
                .element_of(mask)
                .ok_or_else(|| Error::Internal(format!("down-set of `{}` is not closed", l.name(a))))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Completion {
        source: l.clone(),
        completion: closed.lattice,
        embed,
    })
}

/// Source subsets are enumerated exhaustively up to this size.
const SUBSET_CHECK_LIMIT: usize = 20;

/// Verifies the embedding laws, meet- and join-density, and preservation of
/// the meet and join of every subset of the source.
pub fn check_completion(c: &Completion) -> Report {
    let (s, t, e) = (&c.source, &c.completion, &c.embed);
    let mut r = Report::new();
    match check_map(s, t, e, true) {
        Ok(hom) => r.absorb("embed", hom),
        Err(err) => {
            r.push(Law::Injective, vec![format!("{err}")]);
            return r;
        }
    }
    if let Some(x) = t.elements().find(|&x| t.join_all(e.iter().copied().filter(|&y| t.leq(y, x))) != x) {
        r.push(Law::JoinDense, vec![t.label(x)]);
    }
    if let Some(x) = t.elements().find(|&x| t.meet_all(e.iter().copied().filter(|&y| t.leq(x, y))) != x) {
        r.push(Law::MeetDense, vec![t.label(x)]);
    }
    let n = s.size();
    if n > SUBSET_CHECK_LIMIT {
        r.note("subsets", format!("source has {n} elements; subset check limited to pairs"));
    }
    let subsets: Vec<Vec<usize>> = if n <= SUBSET_CHECK_LIMIT {
        (0u32..1 << n)
            .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
            .collect()
    } else {
        let mut v = Vec::new();
        for a in 0..n {
            for b in a..n {
                v.push(vec![a, b]);
            }
        }
        v
    };
    let label = |set: &[usize]| {
        let parts: Vec<String> = set.iter().map(|&a| s.label(a)).collect();
        format!("{{{}}}", parts.join(","))
    };
    if let Some(set) = subsets
        .iter()
        .find(|set| e[s.meet_all(set.iter().copied())] != t.meet_all(set.iter().map(|&a| e[a])))
    {
        r.push(Law::SubsetMeetPreserved, vec![label(set)]);
    }
    if let Some(set) = subsets
        .iter()
        .find(|set| e[s.join_all(set.iter().copied())] != t.join_all(set.iter().map(|&a| e[a])))
    {
        r.push(Law::SubsetJoinPreserved, vec![label(set)]);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ortho::is_isomorphic;
    use crate::ortho::library::*;
    use alloc::string::ToString;

    fn strs(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn perp_sets_over_b4() {
        let f = frame_of(&boolean4()).unwrap();
        assert_eq!(f.points(), strs(&["a", "a'", "1"]).as_slice());
        assert_eq!(f.perp_set_named(&["a"]).unwrap(), strs(&["a'"]));
        assert_eq!(f.perp_set_named(&[]).unwrap(), strs(&["a", "a'", "1"]));
        assert!(f.perp_set_named(&["1"]).unwrap().is_empty());
        assert!(matches!(f.perp_set_named(&["q"]), Err(Error::UnknownElement(_))));
    }

    #[test]
    fn frames_of_library_algebras() {
        let c2 = frame_of(&chain2()).unwrap();
        assert_eq!(c2.points(), strs(&["1"]).as_slice());
        assert!(c2.edges().is_empty());

        let b4 = frame_of(&boolean4()).unwrap();
        assert_eq!(b4.edges(), vec![(0, 1)]);

        let o6 = frame_of(&benzene()).unwrap();
        assert_eq!(o6.len(), 5);
        let named: Vec<(String, String)> = o6
            .edges()
            .into_iter()
            .map(|(x, y)| (o6.points()[x].clone(), o6.points()[y].clone()))
            .collect();
        assert_eq!(
            named,
            vec![("a".into(), "b".into()), ("a".into(), "a'".into()), ("b".into(), "b'".into())]
        );
    }

    #[test]
    fn frame_invariants_enforced() {
        assert!(OrthoFrame::new(strs(&["x"]), vec![1]).is_err());
        assert!(OrthoFrame::new(strs(&["x", "y"]), vec![2, 0]).is_err());
    }

    #[test]
    fn closed_sets_by_subset_scan() {
        // oracle: keep every subset fixed by double perp
        for (l, expected) in [(boolean4(), 4), (benzene(), 6)] {
            let f = frame_of(&l).unwrap();
            let fixed = (0..=f.all()).filter(|&u| f.closure(u) == u).count();
            assert_eq!(fixed, expected);
            assert_eq!(biclosed_sets(&f, DEFAULT_POINT_CAP).unwrap().lattice.size(), expected);
        }
    }

    #[test]
    fn edgeless_frame_is_two_element() {
        let f = OrthoFrame::from_edges(&["p", "q", "r"], &[]).unwrap();
        let c = biclosed_sets(&f, DEFAULT_POINT_CAP).unwrap();
        assert_eq!(c.sets, vec![0, 0b111]);
    }

    #[test]
    fn point_cap_refusal() {
        let names: Vec<String> = (0..17).map(|i| alloc::format!("p{i}")).collect();
        let f = OrthoFrame::new(names, vec![0; 17]).unwrap();
        assert!(matches!(biclosed_sets(&f, DEFAULT_POINT_CAP), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn completions_of_library_algebras() {
        for l in [chain2(), boolean4(), benzene(), mo2()] {
            let c = macneille(&l).unwrap();
            assert_eq!(c.completion.size(), l.size());
            assert!(is_isomorphic(&l, &c.completion).is_some());
            assert!(check_completion(&c).is_pass(), "{:?}", check_completion(&c));
        }
    }

    #[test]
    fn broken_embedding_keeps_density() {
        let b4 = boolean4();
        let ix = |s| b4.index_of(s).unwrap();
        let mut embed: Vec<usize> = b4.elements().collect();
        embed[ix("a")] = ix("1");
        embed[ix("1")] = ix("a");
        let c = Completion { source: b4.clone(), completion: b4.clone(), embed };
        let r = check_completion(&c);
        assert!(!r.has(Law::JoinDense) && !r.has(Law::MeetDense));
        assert_eq!(r.find(Law::MeetPreserved).unwrap().witness, strs(&["a", "a'"]));
    }

    #[test]
    fn chain_into_b4_is_not_join_dense() {
        let (c2, b4) = (chain2(), boolean4());
        let c = Completion { source: c2, completion: b4.clone(), embed: vec![b4.bottom(), b4.top()] };
        let r = check_completion(&c);
        assert_eq!(r.find(Law::JoinDense).unwrap().witness, strs(&["a"]));
        assert!(!r.has(Law::MeetPreserved));
    }
}
