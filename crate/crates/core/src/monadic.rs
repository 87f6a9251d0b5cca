//! Quantifiers on finite ortholattices, monadic ortholattices, and families
//! of quantifiers indexed by a (possibly infinite) universe.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::index::{IndexSet, IndexUniverse, Universe};
use crate::ortho::{FiniteOrtholattice, OrthoOps};
use crate::report::{Law, Report};

/// Default refusal threshold for [`enumerate_quantifiers`].
pub const DEFAULT_QUANTIFIER_CAP: usize = 8;

fn validate_map<A: OrthoOps + ?Sized>(alg: &A, map: &[usize]) -> Result<(), Error> {
    if map.len() != alg.size() {
        return Err(Error::Malformed(format!(
            "map has {} entries, carrier has {} elements",
            map.len(),
            alg.size()
        )));
    }
    if let Some(&bad) = map.iter().find(|&&v| v >= alg.size()) {
        return Err(Error::OutOfRange { index: bad, size: alg.size() });
    }
    Ok(())
}

/// Checks the quantifier axioms (and monotonicity) for `emap` on `alg`,
/// reporting the least witness of each failing axiom.
pub fn check_quantifier<A: OrthoOps + ?Sized>(alg: &A, emap: &[usize]) -> Result<Report, Error> {
    check_quantifier_on_pairs(alg, emap, None)
}

/// As [`check_quantifier`], but the two-variable laws are tested only on
/// `pairs` when given; the one-variable laws stay exhaustive.
pub fn check_quantifier_on_pairs<A: OrthoOps + ?Sized>(
    alg: &A,
    emap: &[usize],
    pairs: Option<&[(usize, usize)]>,
) -> Result<Report, Error> {
    validate_map(alg, emap)?;
    let n = alg.size();
    let all_pairs = || -> alloc::boxed::Box<dyn Iterator<Item = (usize, usize)> + '_> {
        match pairs {
            Some(p) => alloc::boxed::Box::new(p.iter().copied()),
            None => alloc::boxed::Box::new((0..n).flat_map(move |a| (0..n).map(move |b| (a, b)))),
        }
    };
    let e = |a: usize| emap[a];
    let s = |a: usize| alg.label(a);
    let mut r = Report::new();
    if let Some((a, b)) = all_pairs().find(|&(a, b)| e(alg.join(a, b)) != alg.join(e(a), e(b))) {
        r.push(Law::ExistsAdditive, vec![s(a), s(b)]);
    }
    if e(alg.bottom()) != alg.bottom() {
        r.push(Law::ExistsBottom, vec![s(alg.bottom())]);
    }
    if let Some(a) = (0..n).find(|&a| e(e(a)) != e(a)) {
        r.push(Law::ExistsIdempotent, vec![s(a)]);
    }
    if let Some(a) = (0..n).find(|&a| !alg.leq(a, e(a))) {
        r.push(Law::ExistsIncreasing, vec![s(a)]);
    }
    if let Some(a) = (0..n).find(|&a| e(alg.ortho(e(a))) != alg.ortho(e(a))) {
        r.push(Law::ExistsClosedComplement, vec![s(a)]);
    }
    if let Some((a, b)) = all_pairs().find(|&(a, b)| alg.leq(a, b) && !alg.leq(e(a), e(b))) {
        r.push(Law::ExistsMonotone, vec![s(a), s(b)]);
    }
    Ok(r)
}

/// A unary map on element indices that has passed [`check_quantifier`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quantifier {
    map: Vec<usize>,
}

impl Quantifier {
    pub fn new<A: OrthoOps + ?Sized>(alg: &A, map: Vec<usize>) -> Result<Self, Error> {
        let r = check_quantifier(alg, &map)?;
        if let Some(v) = r.violations.first() {
            return Err(Error::Invalid(format!("not a quantifier: {v}")));
        }
        Ok(Self { map })
    }

    /// Builds the map from `(element, image)` name pairs.
    pub fn from_named(l: &FiniteOrtholattice, pairs: &[(&str, &str)]) -> Result<Self, Error> {
        Self::new(l, named_map(l, pairs)?)
    }

    pub fn identity(size: usize) -> Self {
        Self { map: (0..size).collect() }
    }

    /// `∃0 = 0` and `∃x = 1` otherwise.
    pub fn simple<A: OrthoOps + ?Sized>(alg: &A) -> Self {
        let map = (0..alg.size())
            .map(|a| if a == alg.bottom() { a } else { alg.top() })
            .collect();
        Self { map }
    }

    /// The map sending each element to the least member of `closed` above it,
    /// validated as a quantifier.
    pub fn from_closed(l: &FiniteOrtholattice, closed: &[usize]) -> Result<Self, Error> {
        let map = l
            .elements()
            .map(|a| {
                let above: Vec<usize> = closed.iter().copied().filter(|&c| l.leq(a, c)).collect();
                let m = l.meet_all(above.iter().copied());
                if above.contains(&m) {
                    Ok(m)
                } else {
                    Err(Error::Invalid(format!("no least closed element above `{}`", l.name(a))))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(l, map)
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Fixed points in ascending order.
    pub fn closed(&self) -> Vec<usize> {
        (0..self.map.len()).filter(|&a| self.map[a] == a).collect()
    }
}

pub(crate) fn named_map(l: &FiniteOrtholattice, pairs: &[(&str, &str)]) -> Result<Vec<usize>, Error> {
    let mut map = vec![usize::MAX; l.size()];
    for (a, b) in pairs {
        map[l.index_of(a)?] = l.index_of(b)?;
    }
    if let Some(i) = map.iter().position(|&v| v == usize::MAX) {
        return Err(Error::Malformed(format!("map is not total: `{}` has no image", l.name(i))));
    }
    Ok(map)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonadicOrtholattice {
    carrier: FiniteOrtholattice,
    exists: Quantifier,
}

impl MonadicOrtholattice {
    pub fn new(carrier: FiniteOrtholattice, exists: Vec<usize>) -> Result<Self, Error> {
        let exists = Quantifier::new(&carrier, exists)?;
        Ok(Self { carrier, exists })
    }

    pub fn from_quantifier(carrier: FiniteOrtholattice, exists: Quantifier) -> Result<Self, Error> {
        Self::new(carrier, exists.map)
    }

    pub fn simple(carrier: FiniteOrtholattice) -> Self {
        let exists = Quantifier::simple(&carrier);
        Self { carrier, exists }
    }

    pub fn carrier(&self) -> &FiniteOrtholattice {
        &self.carrier
    }

    pub fn exists(&self) -> &Quantifier {
        &self.exists
    }
}

/// The fixed points of `∃` as a sub-ortholattice, with the inclusion map.
pub fn closed_elements(m: &MonadicOrtholattice) -> Result<(FiniteOrtholattice, Vec<usize>), Error> {
    m.carrier.subalgebra(&m.exists.closed()).map_err(|r| {
        let first = r.violations.first().map(|v| format!("{v}")).unwrap_or_default();
        Error::Internal(format!("closed elements of a valid quantifier are not a subalgebra: {first}"))
    })
}

/// `∀a = (∃a^⊥)^⊥`, with a report on the interior-operator laws and on the
/// open elements coinciding with the closed ones.
pub fn forall_of(m: &MonadicOrtholattice) -> (Vec<usize>, Report) {
    let l = &m.carrier;
    let e = &m.exists;
    let all: Vec<usize> = l.elements().map(|a| l.ortho(e.apply(l.ortho(a)))).collect();
    let f = |a: usize| all[a];
    let s = |a: usize| l.label(a);
    let mut r = Report::new();
    'mul: for a in l.elements() {
        for b in l.elements() {
            if f(l.meet(a, b)) != l.meet(f(a), f(b)) {
                r.push(Law::ForallMultiplicative, vec![s(a), s(b)]);
                break 'mul;
            }
        }
    }
    if f(l.top()) != l.top() {
        r.push(Law::ForallTop, vec![s(l.top())]);
    }
    if let Some(a) = l.elements().find(|&a| f(f(a)) != f(a)) {
        r.push(Law::ForallIdempotent, vec![s(a)]);
    }
    if let Some(a) = l.elements().find(|&a| !l.leq(f(a), a)) {
        r.push(Law::ForallDecreasing, vec![s(a)]);
    }
    if let Some(a) = l.elements().find(|&a| f(l.ortho(f(a))) != l.ortho(f(a))) {
        r.push(Law::ForallOpenComplement, vec![s(a)]);
    }
    if let Some(a) = l.elements().find(|&a| (f(a) == a) != (e.apply(a) == a)) {
        r.push(Law::OpenEqualsClosed, vec![s(a)]);
    }
    (all, r)
}

/// All quantifiers on `l` in ascending order of their maps. A quantifier is
/// determined by its closed set, which is a sub-ortholattice; each candidate
/// sub-ortholattice induces the map to least closed upper bounds, kept when
/// it passes [`check_quantifier`].
pub fn enumerate_quantifiers(l: &FiniteOrtholattice, cap: usize) -> Result<Vec<Quantifier>, Error> {
    if l.size() > cap {
        return Err(Error::CapExceeded { what: "quantifier enumeration carrier", size: l.size(), cap });
    }
    let pairs: Vec<usize> = l
        .elements()
        .filter(|&a| a != l.bottom() && a != l.top() && a < l.ortho(a))
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let mut members = vec![l.bottom(), l.top()];
        for (k, &a) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                members.push(a);
                members.push(l.ortho(a));
            }
        }
        if l.subalgebra(&members).is_err() {
            continue;
        }
        if let Ok(q) = Quantifier::from_closed(l, &members) {
            out.push(q);
        }
    }
    out.sort();
    Ok(out)
}

/// A family of quantifiers indexed by `indices`: the listed `active` ones,
/// and the identity at every other index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaFreeCylindric {
    carrier: FiniteOrtholattice,
    indices: IndexUniverse,
    active: BTreeMap<u32, Vec<usize>>,
}

impl DeltaFreeCylindric {
    /// Validates index membership and map shapes only; the quantifier and
    /// commutation laws are left to [`check_family`].
    pub fn new(
        carrier: FiniteOrtholattice,
        indices: IndexUniverse,
        active: BTreeMap<u32, Vec<usize>>,
    ) -> Result<Self, Error> {
        for (&i, map) in &active {
            if !indices.universe().contains(i) {
                return Err(Error::UnknownIndex(format!("{i}")));
            }
            validate_map(&carrier, map)?;
        }
        Ok(Self { carrier, indices, active })
    }

    pub fn carrier(&self) -> &FiniteOrtholattice {
        &self.carrier
    }

    pub fn indices(&self) -> &IndexUniverse {
        &self.indices
    }

    pub fn active(&self) -> &BTreeMap<u32, Vec<usize>> {
        &self.active
    }

    pub fn exists(&self, i: u32, a: usize) -> usize {
        self.active.get(&i).map_or(a, |m| m[a])
    }

    /// An index outside the active set, if the universe has one.
    pub fn default_representative(&self) -> Option<u32> {
        match self.indices.universe() {
            Universe::Omega => Some(self.active.keys().next_back().map_or(0, |&k| k + 1)),
            Universe::Finite(n) => (0..n).find(|i| !self.active.contains_key(i)),
        }
    }

    /// `{j : ∃_j a = a}` recomputed from the maps.
    pub fn fixing_set(&self, a: usize) -> IndexSet {
        let moved = self.active.iter().filter(|(_, m)| m[a] != a).map(|(&i, _)| i);
        IndexSet::cofin(self.indices.universe(), moved).expect("active indices lie in the universe")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylindricOrtholattice {
    pub family: DeltaFreeCylindric,
    pub diagonals: BTreeMap<(u32, u32), usize>,
}

fn family_report(f: &DeltaFreeCylindric) -> Report {
    let l = &f.carrier;
    let mut r = Report::new();
    for (&i, map) in &f.active {
        let q = check_quantifier(l, map).expect("shape validated");
        r.absorb(&format!("∃_{}", f.indices.label(i)), q);
    }
    let mut idx: Vec<u32> = f.active.keys().copied().collect();
    idx.extend(f.default_representative());
    'c: for (p, &i) in idx.iter().enumerate() {
        for &k in &idx[p + 1..] {
            if let Some(a) = l.elements().find(|&a| f.exists(i, f.exists(k, a)) != f.exists(k, f.exists(i, a))) {
                r.push(
                    Law::Commute,
                    vec![f.indices.label(i), f.indices.label(k), l.label(a)],
                );
                break 'c;
            }
        }
    }
    r
}

/// Checks every quantifier of a family and their pairwise commutation.
pub fn check_family(f: &DeltaFreeCylindric) -> Report {
    family_report(f)
}

/// As [`check_family`], plus the diagonal laws for all active index pairs.
/// The diagonal map must be defined on every pair of active indices.
pub fn check_cylindric(c: &CylindricOrtholattice) -> Result<Report, Error> {
    let f = &c.family;
    let l = &f.carrier;
    let idx: Vec<u32> = f.active.keys().copied().collect();
    let d = |i: u32, k: u32| -> Result<usize, Error> {
        c.diagonals.get(&(i, k)).copied().ok_or_else(|| {
            Error::Malformed(format!(
                "diagonal δ_{{{},{}}} missing",
                f.indices.label(i),
                f.indices.label(k)
            ))
        })
    };
    for &i in &idx {
        for &k in &idx {
            if d(i, k)? >= l.size() {
                return Err(Error::OutOfRange { index: d(i, k)?, size: l.size() });
            }
        }
    }
    let mut r = family_report(f);
    let lab = |i: u32| f.indices.label(i);
    if let Some(&i) = idx.iter().find(|&&i| d(i, i) != Ok(l.top())) {
        r.push(Law::DiagonalReflexive, vec![lab(i)]);
    }
    'sym: for &i in &idx {
        for &k in &idx {
            if d(i, k) != d(k, i) {
                r.push(Law::DiagonalSymmetric, vec![lab(i), lab(k)]);
                break 'sym;
            }
        }
    }
    'cyl: for &i in &idx {
        for &k in &idx {
            for &m in &idx {
                if i == k || m == k {
                    continue;
                }
                if f.exists(k, l.meet(d(i, k)?, d(k, m)?)) != d(i, m)? {
                    r.push(Law::DiagonalCylinder, vec![lab(i), lab(k), lab(m)]);
                    break 'cyl;
                }
            }
        }
    }
    Ok(r)
}

/// Recomputes `S_a` for every element and checks it is cofinite. The sets
/// are recorded as notes.
pub fn check_locally_finite_cyl(f: &DeltaFreeCylindric) -> Report {
    let l = &f.carrier;
    let mut r = Report::new();
    for a in l.elements() {
        let s = f.fixing_set(a);
        let cofinite = match f.indices.universe() {
            Universe::Finite(_) => true,
            Universe::Omega => s.is_cofinite(),
        };
        r.note(format!("S_{}", l.label(a)), f.indices.set_label(&s));
        if !cofinite {
            r.push(Law::LocallyFinite, vec![l.label(a)]);
        }
    }
    r
}

/// Convenience constructor from index identifiers and named maps.
pub fn family_from_named(
    carrier: FiniteOrtholattice,
    indices: IndexUniverse,
    active: &[(&str, &[(&str, &str)])],
) -> Result<DeltaFreeCylindric, Error> {
    let mut m = BTreeMap::new();
    for (i, pairs) in active {
        let idx = indices.index_of(i)?;
        m.insert(idx, named_map(&carrier, pairs)?);
    }
    DeltaFreeCylindric::new(carrier, indices, m)
}
