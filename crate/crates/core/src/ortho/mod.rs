//! Finite ortholattices: raw candidates, the law checker, and the validated
//! carrier type every other module builds on.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use fixedbitset::FixedBitSet;

use crate::error::Error;
use crate::report::{Law, Report};

mod canon;
mod enumerate;
mod hom;
pub mod library;

pub use canon::{canonical_form, is_isomorphic, CanonicalForm};
pub use enumerate::{
    enumerate_ortholattices, enumerate_ortholattices_with_cap, enumerate_shard, merge_shards,
    DEFAULT_ENUMERATION_CAP,
};
pub use hom::{check_homomorphism, check_map, OrthoHomomorphism};

/// Operations of an ortholattice whose elements are `0..size()`.
///
/// Implemented by [`FiniteOrtholattice`] (dense tables) and by the function
/// algebras in [`crate::functional`] (pointwise on encoded tables), so the
/// quantifier and family checkers run on both without materializing.
pub trait OrthoOps {
    fn size(&self) -> usize;
    fn bottom(&self) -> usize;
    fn top(&self) -> usize;
    fn meet(&self, a: usize, b: usize) -> usize;
    fn join(&self, a: usize, b: usize) -> usize;
    fn ortho(&self, a: usize) -> usize;
    fn leq(&self, a: usize, b: usize) -> bool;
    fn label(&self, a: usize) -> String;
}

/// Unvalidated ortholattice data: names, a relation matrix and a unary map.
///
/// Rows are up-sets: `leq[a]` holds every `b` with `a ≤ b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    names: Vec<String>,
    leq: Vec<FixedBitSet>,
    ortho: Vec<usize>,
}

fn check_names(names: &[String]) -> Result<(), Error> {
    let mut seen = BTreeMap::new();
    for (i, n) in names.iter().enumerate() {
        if seen.insert(n.as_str(), i).is_some() {
            return Err(Error::Malformed(alloc::format!("duplicate element identifier `{n}`")));
        }
    }
    Ok(())
}

impl Candidate {
    /// Builds a candidate from an explicit relation matrix (taken as-is, no closure).
    pub fn from_matrix(
        names: Vec<String>,
        leq: &[Vec<bool>],
        ortho: Vec<usize>,
    ) -> Result<Self, Error> {
        let n = names.len();
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(Error::Malformed("order matrix is not square over the elements".into()));
        }
        let rows = leq
            .iter()
            .map(|r| {
                let mut s = FixedBitSet::with_capacity(n);
                for (j, &b) in r.iter().enumerate() {
                    s.set(j, b);
                }
                s
            })
            .collect();
        Self::from_rows(names, rows, ortho)
    }

    pub fn from_rows(
        names: Vec<String>,
        leq: Vec<FixedBitSet>,
        ortho: Vec<usize>,
    ) -> Result<Self, Error> {
        let n = names.len();
        check_names(&names)?;
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(Error::Malformed("order matrix is not square over the elements".into()));
        }
        if ortho.len() != n {
            return Err(Error::Malformed("ortho map is not total".into()));
        }
        if let Some(&bad) = ortho.iter().find(|&&o| o >= n) {
            return Err(Error::OutOfRange { index: bad, size: n });
        }
        Ok(Self { names, leq, ortho })
    }

    /// Builds a candidate from a relation given as pairs `(a, b)` meaning
    /// `a ≤ b` (covers or any generating set); the reflexive-transitive
    /// closure is taken.
    pub fn from_relation(
        names: Vec<String>,
        pairs: &[(usize, usize)],
        ortho: Vec<usize>,
    ) -> Result<Self, Error> {
        let n = names.len();
        let mut rows: Vec<FixedBitSet> = (0..n)
            .map(|i| {
                let mut s = FixedBitSet::with_capacity(n);
                s.insert(i);
                s
            })
            .collect();
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::OutOfRange { index: a.max(b), size: n });
            }
            rows[a].insert(b);
        }
        // Warshall on up-set rows.
        for k in 0..n {
            let row_k = rows[k].clone();
            for row in rows.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        Self::from_rows(names, rows, ortho)
    }

    /// Convenience constructor over string identifiers; `ortho` lists each
    /// `(a, a^⊥)` assignment and must cover every element.
    pub fn from_named(
        elements: &[&str],
        pairs: &[(&str, &str)],
        ortho: &[(&str, &str)],
    ) -> Result<Self, Error> {
        let names: Vec<String> = elements.iter().map(|s| s.to_string()).collect();
        check_names(&names)?;
        let idx = |s: &str| -> Result<usize, Error> {
            elements
                .iter()
                .position(|e| *e == s)
                .ok_or_else(|| Error::UnknownElement(s.into()))
        };
        let pairs = pairs
            .iter()
            .map(|(a, b)| Ok((idx(a)?, idx(b)?)))
            .collect::<Result<Vec<_>, Error>>()?;
        let mut map = vec![usize::MAX; elements.len()];
        for (a, b) in ortho {
            map[idx(a)?] = idx(b)?;
        }
        if let Some(i) = map.iter().position(|&v| v == usize::MAX) {
            return Err(Error::Malformed(alloc::format!(
                "ortho map is not total: `{}` has no image",
                elements[i]
            )));
        }
        Self::from_relation(names, &pairs, map)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a].contains(b)
    }

    pub fn ortho(&self, a: usize) -> usize {
        self.ortho[a]
    }

    pub fn rows(&self) -> &[FixedBitSet] {
        &self.leq
    }

    /// Flips one entry of the order relation.
    pub fn flip_leq(&mut self, a: usize, b: usize) {
        self.leq[a].toggle(b);
    }

    pub fn set_ortho(&mut self, a: usize, value: usize) {
        self.ortho[a] = value;
    }
}

const NONE: u32 = u32::MAX;

struct Analysis {
    report: Report,
    down: Vec<FixedBitSet>,
    meet: Vec<u32>,
    join: Vec<u32>,
    bottom: Option<usize>,
    top: Option<usize>,
}

fn analyze(c: &Candidate) -> Analysis {
    let n = c.len();
    let name = |i: usize| c.names[i].clone();
    let mut report = Report::new();

    let mut down: Vec<FixedBitSet> = (0..n).map(|_| FixedBitSet::with_capacity(n)).collect();
    for a in 0..n {
        for b in c.leq[a].ones() {
            down[b].insert(a);
        }
    }

    if let Some(a) = (0..n).find(|&a| !c.leq(a, a)) {
        report.push(Law::Reflexive, vec![name(a)]);
    }
    'anti: for a in 0..n {
        for b in c.leq[a].ones().filter(|&b| b > a) {
            if c.leq(b, a) {
                report.push(Law::Antisymmetric, vec![name(a), name(b)]);
                break 'anti;
            }
        }
    }
    'trans: for a in 0..n {
        for b in c.leq[a].ones() {
            if b == a {
                continue;
            }
            if let Some(z) = c.leq[b].difference(&c.leq[a]).next() {
                report.push(Law::Transitive, vec![name(a), name(b), name(z)]);
                break 'trans;
            }
        }
    }

    let bottom = (0..n).find(|&a| c.leq[a].is_full());
    let top = (0..n).find(|&a| down[a].is_full());
    if bottom.is_none() || top.is_none() {
        report.push(Law::Bounded, Vec::new());
    }

    // glb(a, b) is the element whose down-set is exactly down(a) ∩ down(b).
    let by_down: BTreeMap<&FixedBitSet, usize> =
        down.iter().enumerate().rev().map(|(i, s)| (s, i)).collect();
    let by_up: BTreeMap<&FixedBitSet, usize> =
        c.leq.iter().enumerate().rev().map(|(i, s)| (s, i)).collect();
    let mut meet = vec![NONE; n * n];
    let mut join = vec![NONE; n * n];
    let mut meet_missing = None;
    let mut join_missing = None;
    let mut scratch = FixedBitSet::with_capacity(n);
    for a in 0..n {
        for b in a..n {
            scratch.clone_from(&down[a]);
            scratch.intersect_with(&down[b]);
            match by_down.get(&scratch) {
                Some(&g) => {
                    meet[a * n + b] = g as u32;
                    meet[b * n + a] = g as u32;
                }
                None => {
                    meet_missing.get_or_insert((a, b));
                }
            }
            scratch.clone_from(&c.leq[a]);
            scratch.intersect_with(&c.leq[b]);
            match by_up.get(&scratch) {
                Some(&l) => {
                    join[a * n + b] = l as u32;
                    join[b * n + a] = l as u32;
                }
                None => {
                    join_missing.get_or_insert((a, b));
                }
            }
        }
    }
    if let Some((a, b)) = meet_missing {
        report.push(Law::MeetExists, vec![name(a), name(b)]);
    }
    if let Some((a, b)) = join_missing {
        report.push(Law::JoinExists, vec![name(a), name(b)]);
    }

    let o = &c.ortho;
    if let (Some(bot), Some(tp)) = (bottom, top) {
        if let Some(a) = (0..n).find(|&a| meet[a * n + o[a]] != bot as u32) {
            report.push(Law::ComplementMeet, vec![name(a)]);
        }
        if let Some(a) = (0..n).find(|&a| join[a * n + o[a]] != tp as u32) {
            report.push(Law::ComplementJoin, vec![name(a)]);
        }
    }
    'inv: for a in 0..n {
        for b in c.leq[a].ones() {
            if !c.leq(o[b], o[a]) {
                report.push(Law::OrderInverting, vec![name(a), name(b)]);
                break 'inv;
            }
        }
    }
    if let Some(a) = (0..n).find(|&a| o[o[a]] != a) {
        report.push(Law::Involution, vec![name(a)]);
    }
    'dm: for a in 0..n {
        for b in 0..n {
            let j = join[a * n + b];
            let m = meet[o[a] * n + o[b]];
            if j == NONE || m == NONE {
                continue;
            }
            if o[j as usize] != m as usize {
                report.push(Law::DeMorgan, vec![name(a), name(b)]);
                break 'dm;
            }
        }
    }

    Analysis {
        report,
        down,
        meet,
        join,
        bottom,
        top,
    }
}

/// Checks all ortholattice laws on arbitrary candidate data.
///
/// Reports at most one violation per law, carrying the least witness in
/// element order.
pub fn check_ortholattice(candidate: &Candidate) -> Report {
    analyze(candidate).report
}

/// A validated finite ortholattice with dense meet/join tables.
///
/// Elements are addressed by index `0..size()`; identifiers are opaque
/// strings kept for IO and reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteOrtholattice {
    names: Vec<String>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    ortho: Vec<usize>,
    meet: Vec<u32>,
    join: Vec<u32>,
    bottom: usize,
    top: usize,
}

impl FiniteOrtholattice {
    pub fn new(candidate: Candidate) -> Result<Self, Error> {
        let a = analyze(&candidate);
        if !a.report.is_pass() {
            return Err(Error::NotOrtholattice(a.report));
        }
        Ok(Self {
            names: candidate.names,
            up: candidate.leq,
            down: a.down,
            ortho: candidate.ortho,
            meet: a.meet,
            join: a.join,
            bottom: a.bottom.expect("checked"),
            top: a.top.expect("checked"),
        })
    }

    pub fn from_named(
        elements: &[&str],
        pairs: &[(&str, &str)],
        ortho: &[(&str, &str)],
    ) -> Result<Self, Error> {
        Self::new(Candidate::from_named(elements, pairs, ortho)?)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, Error> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownElement(name.into()))
    }

    pub fn up(&self, a: usize) -> &FixedBitSet {
        &self.up[a]
    }

    pub fn down(&self, a: usize) -> &FixedBitSet {
        &self.down[a]
    }

    pub fn elements(&self) -> core::ops::Range<usize> {
        0..self.names.len()
    }

    pub fn to_candidate(&self) -> Candidate {
        Candidate {
            names: self.names.clone(),
            leq: self.up.clone(),
            ortho: self.ortho.clone(),
        }
    }

    /// Same algebra with new identifiers.
    pub fn renamed(&self, names: Vec<String>) -> Result<Self, Error> {
        check_names(&names)?;
        if names.len() != self.size() {
            return Err(Error::Malformed("wrong number of identifiers".into()));
        }
        Ok(Self {
            names,
            ..self.clone()
        })
    }

    /// Covering pairs `(a, b)`: `a < b` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.up[a].ones() {
                if b == a {
                    continue;
                }
                let between = self.up[a]
                    .intersection(&self.down[b])
                    .any(|c| c != a && c != b);
                if !between {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn meet_all<I: IntoIterator<Item = usize>>(&self, items: I) -> usize {
        items.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn join_all<I: IntoIterator<Item = usize>>(&self, items: I) -> usize {
        items.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// The sub-ortholattice on `members`, with its inclusion map.
    ///
    /// Fails with the closure violations when `members` is not closed under
    /// the operations or lacks the bounds.
    pub fn subalgebra(&self, members: &[usize]) -> Result<(Self, Vec<usize>), Report> {
        let mut sorted: Vec<usize> = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut inside = FixedBitSet::with_capacity(self.size());
        for &m in &sorted {
            inside.insert(m);
        }
        let mut report = Report::new();
        if !inside.contains(self.bottom) || !inside.contains(self.top) {
            report.push(Law::ContainsBounds, Vec::new());
        }
        if let Some(&a) = sorted.iter().find(|&&a| !inside.contains(self.ortho(a))) {
            report.push(Law::ClosedUnderOrtho, vec![self.names[a].clone()]);
        }
        'm: for &a in &sorted {
            for &b in &sorted {
                if !inside.contains(self.meet(a, b)) {
                    report.push(Law::ClosedUnderMeet, vec![self.names[a].clone(), self.names[b].clone()]);
                    break 'm;
                }
            }
        }
        'j: for &a in &sorted {
            for &b in &sorted {
                if !inside.contains(self.join(a, b)) {
                    report.push(Law::ClosedUnderJoin, vec![self.names[a].clone(), self.names[b].clone()]);
                    break 'j;
                }
            }
        }
        if !report.is_pass() {
            return Err(report);
        }
        let pos = |x: usize| sorted.binary_search(&x).expect("closed");
        let names = sorted.iter().map(|&a| self.names[a].clone()).collect();
        let rows = sorted
            .iter()
            .map(|&a| {
                let mut s = FixedBitSet::with_capacity(sorted.len());
                for (j, &b) in sorted.iter().enumerate() {
                    s.set(j, self.leq(a, b));
                }
                s
            })
            .collect();
        let ortho = sorted.iter().map(|&a| pos(self.ortho(a))).collect();
        let cand = Candidate::from_rows(names, rows, ortho).map_err(|_| Report::new())?;
        let sub = Self::new(cand).map_err(|e| match e {
            Error::NotOrtholattice(r) => r,
            _ => Report::new(),
        })?;
        Ok((sub, sorted))
    }
}

impl OrthoOps for FiniteOrtholattice {
    fn size(&self) -> usize {
        self.names.len()
    }
    fn bottom(&self) -> usize {
        self.bottom
    }
    fn top(&self) -> usize {
        self.top
    }
    #[inline]
    fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.names.len() + b] as usize
    }
    #[inline]
    fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.names.len() + b] as usize
    }
    #[inline]
    fn ortho(&self, a: usize) -> usize {
        self.ortho[a]
    }
    #[inline]
    fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }
    fn label(&self, a: usize) -> String {
        self.names[a].clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeOp {
    Meet,
    Join,
    Ocomp,
    Leq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpValue {
    Element(usize),
    Truth(bool),
}

/// Evaluates one lattice operation on named elements.
pub fn lattice_op(
    l: &FiniteOrtholattice,
    op: LatticeOp,
    a: &str,
    b: Option<&str>,
) -> Result<OpValue, Error> {
    let a = l.index_of(a)?;
    let second = || -> Result<usize, Error> {
        let b = b.ok_or_else(|| Error::Malformed("binary operation needs two operands".into()))?;
        l.index_of(b)
    };
    Ok(match op {
        LatticeOp::Meet => OpValue::Element(l.meet(a, second()?)),
        LatticeOp::Join => OpValue::Element(l.join(a, second()?)),
        LatticeOp::Ocomp => OpValue::Element(l.ortho(a)),
        LatticeOp::Leq => OpValue::Truth(l.leq(a, second()?)),
    })
}

#[cfg(test)]
mod tests {
    use super::library::*;
    use super::*;

    fn el(l: &FiniteOrtholattice, s: &str) -> usize {
        l.index_of(s).unwrap()
    }

    #[test]
    fn join_in_benzene_is_top() {
        let o6 = benzene();
        // oracle: scan all common upper bounds
        let (a, b) = (el(&o6, "a"), el(&o6, "b"));
        let ubs: Vec<usize> = o6.elements().filter(|&u| o6.leq(a, u) && o6.leq(b, u)).collect();
        assert_eq!(ubs, vec![el(&o6, "1")]);
        assert_eq!(lattice_op(&o6, LatticeOp::Join, "a", Some("b")).unwrap(), OpValue::Element(el(&o6, "1")));
    }

    #[test]
    fn complement_and_identity_laws() {
        let b4 = boolean4();
        assert_eq!(lattice_op(&b4, LatticeOp::Meet, "a", Some("a'")).unwrap(), OpValue::Element(el(&b4, "0")));
        for l in [chain2(), b4, benzene(), mo2()] {
            for x in l.elements() {
                assert_eq!(l.join(l.bottom(), x), x);
            }
        }
    }

    #[test]
    fn lattice_op_errors() {
        let b4 = boolean4();
        assert_eq!(lattice_op(&b4, LatticeOp::Ocomp, "z", None), Err(Error::UnknownElement("z".into())));
        assert!(lattice_op(&b4, LatticeOp::Meet, "a", None).is_err());
        assert_eq!(lattice_op(&b4, LatticeOp::Leq, "0", Some("a")).unwrap(), OpValue::Truth(true));
    }

    #[test]
    fn benzene_and_b4_pass() {
        assert!(check_ortholattice(&benzene().to_candidate()).is_pass());
        assert!(check_ortholattice(&boolean4().to_candidate()).is_pass());
    }

    #[test]
    fn self_complement_is_reported() {
        let c = Candidate::from_named(
            &["0", "a", "a'", "1"],
            &[("0", "a"), ("0", "a'"), ("a", "1"), ("a'", "1")],
            &[("0", "1"), ("1", "0"), ("a", "a"), ("a'", "a'")],
        )
        .unwrap();
        let r = check_ortholattice(&c);
        assert_eq!(r.find(Law::ComplementMeet).unwrap().witness, vec!["a".to_string()]);
    }

    #[test]
    fn malformed_inputs_are_parse_errors() {
        let dup = Candidate::from_named(&["0", "0"], &[], &[("0", "0")]);
        assert!(matches!(dup, Err(Error::Malformed(_))));
        let nonsquare = Candidate::from_matrix(
            vec!["0".into(), "1".into()],
            &[vec![true, true], vec![true]],
            vec![1, 0],
        );
        assert!(matches!(nonsquare, Err(Error::Malformed(_))));
    }

    #[test]
    fn odd_candidates_are_legal_inputs_that_fail() {
        // three-element chain with the only order-reversing involution
        let c = Candidate::from_named(
            &["0", "m", "1"],
            &[("0", "m"), ("m", "1")],
            &[("0", "1"), ("m", "m"), ("1", "0")],
        )
        .unwrap();
        let r = check_ortholattice(&c);
        assert!(r.has(Law::ComplementMeet));
        assert!(!r.has(Law::MeetExists));
    }

    #[test]
    fn non_lattice_reports_missing_meet() {
        // 0 < a, b < c, d < 1 with a, b both below c and d: no join of a and b
        let c = Candidate::from_named(
            &["0", "a", "b", "c", "d", "1"],
            &[("0", "a"), ("0", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "1"), ("d", "1")],
            &[("0", "1"), ("1", "0"), ("a", "d"), ("d", "a"), ("b", "c"), ("c", "b")],
        )
        .unwrap();
        let r = check_ortholattice(&c);
        assert_eq!(r.find(Law::JoinExists).unwrap().witness, vec!["a".to_string(), "b".to_string()]);
        assert!(r.has(Law::MeetExists));
    }

    #[test]
    fn de_morgan_holds_in_library() {
        for l in [chain2(), boolean4(), benzene(), mo2(), boolean(3)] {
            for a in l.elements() {
                for b in l.elements() {
                    assert_eq!(l.ortho(l.meet(a, b)), l.join(l.ortho(a), l.ortho(b)));
                    assert_eq!(l.ortho(l.join(a, b)), l.meet(l.ortho(a), l.ortho(b)));
                }
            }
        }
    }

    #[test]
    fn covers_close_back_to_order() {
        let o6 = benzene();
        let covers = o6.covers();
        assert_eq!(covers.len(), 6);
        let c = Candidate::from_relation(o6.names().to_vec(), &covers, o6.elements().map(|a| o6.ortho(a)).collect()).unwrap();
        assert_eq!(FiniteOrtholattice::new(c).unwrap(), o6);
    }

    #[test]
    fn subalgebra_closure() {
        let o6 = benzene();
        let members: Vec<usize> = ["0", "a", "a'", "1"].iter().map(|s| el(&o6, s)).collect();
        let (sub, incl) = o6.subalgebra(&members).unwrap();
        assert_eq!(sub.size(), 4);
        assert_eq!(incl.len(), 4);
        let bad: Vec<usize> = ["0", "a", "b", "a'", "b'", "1"].iter().take(3).map(|s| el(&o6, s)).collect();
        let r = o6.subalgebra(&bad).unwrap_err();
        assert!(r.has(Law::ContainsBounds));
        assert!(r.has(Law::ClosedUnderOrtho));
    }
}
