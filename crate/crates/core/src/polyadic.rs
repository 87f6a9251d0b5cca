//! σ-free polyadic ortholattices in generated form, supports, and the
//! correspondence with locally finite δ-free cylindric ortholattices.
//!
//! A structure is given by finitely many singleton quantifiers (the identity
//! elsewhere). `∇_J a` composes, in ascending index order, the generators in
//! `J` that move `a`; that set is finite even when `J` is cofinite.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
pub use crate::index::{indexset_ops, IndexSet, IndexUniverse, SetOp, Universe};
use crate::monadic::{check_family, check_quantifier, DeltaFreeCylindric};
use crate::ortho::{FiniteOrtholattice, OrthoOps};
use crate::report::{Law, Report};

pub const DEFAULT_SEED: u64 = 0x5eed;
pub const DEFAULT_SAMPLES: usize = 256;
/// Finite universes up to this size are checked over all pairs of subsets.
pub const EXHAUSTIVE_INDEX_LIMIT: u32 = 8;
/// Above this many active indices the structured sets are replaced by samples.
const STRUCTURED_ACTIVE_LIMIT: usize = 7;

/// Anything that evaluates `∇_J` on a finite carrier.
pub trait Nabla {
    fn carrier(&self) -> &FiniteOrtholattice;
    fn indices(&self) -> &IndexUniverse;
    fn nabla(&self, j: &IndexSet, a: usize) -> Result<usize, Error>;
    /// Indices at which `∇` may differ from the identity, ascending.
    fn relevant_indices(&self) -> Vec<u32>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaFreePolyadic {
    carrier: FiniteOrtholattice,
    indices: IndexUniverse,
    generators: BTreeMap<u32, Vec<usize>>,
}

impl SigmaFreePolyadic {
    /// Validates shapes only; the laws are left to [`check_sigma_free`].
    pub fn new(
        carrier: FiniteOrtholattice,
        indices: IndexUniverse,
        generators: BTreeMap<u32, Vec<usize>>,
    ) -> Result<Self, Error> {
        // same shape rules as a family
        let f = DeltaFreeCylindric::new(carrier, indices, generators)?;
        Ok(Self {
            carrier: f.carrier().clone(),
            indices: f.indices().clone(),
            generators: f.active().clone(),
        })
    }

    pub fn generators(&self) -> &BTreeMap<u32, Vec<usize>> {
        &self.generators
    }

    pub fn generator(&self, i: u32, a: usize) -> usize {
        self.generators.get(&i).map_or(a, |g| g[a])
    }

    /// `S_a` restricted to the generators: the active indices that move `a`.
    pub fn moving(&self, a: usize) -> Vec<u32> {
        self.generators.iter().filter(|(_, g)| g[a] != a).map(|(&i, _)| i).collect()
    }
}

impl Nabla for SigmaFreePolyadic {
    fn carrier(&self) -> &FiniteOrtholattice {
        &self.carrier
    }

    fn indices(&self) -> &IndexUniverse {
        &self.indices
    }

    fn nabla(&self, j: &IndexSet, a: usize) -> Result<usize, Error> {
        nabla_eval(self, j, a)
    }

    fn relevant_indices(&self) -> Vec<u32> {
        self.generators.keys().copied().collect()
    }
}

/// `∇_J a = ∇_{J∖S_a} a`, composed over `J∖S_a` in ascending index order.
pub fn nabla_eval(p: &SigmaFreePolyadic, j: &IndexSet, a: usize) -> Result<usize, Error> {
    if j.universe() != p.indices.universe() {
        return Err(Error::UniverseMismatch);
    }
    if a >= p.carrier.size() {
        return Err(Error::OutOfRange { index: a, size: p.carrier.size() });
    }
    // the generators are the only indices outside S_a, so J∖S_a is finite
    Ok(p.moving(a)
        .into_iter()
        .filter(|&i| j.contains(i))
        .fold(a, |x, i| p.generator(i, x)))
}

/// A `∇` table over a small finite universe, indexed by subset bitmask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitNabla {
    carrier: FiniteOrtholattice,
    indices: IndexUniverse,
    table: Vec<Vec<usize>>,
}

impl ExplicitNabla {
    /// `table[mask]` is the map `∇_J` for `J = { i : mask bit i set }`.
    pub fn new(carrier: FiniteOrtholattice, indices: IndexUniverse, table: Vec<Vec<usize>>) -> Result<Self, Error> {
        let n = match indices.universe() {
            Universe::Finite(n) => n,
            Universe::Omega => return Err(Error::Invalid("explicit ∇ tables need a finite universe".into())),
        };
        if n > EXHAUSTIVE_INDEX_LIMIT {
            return Err(Error::CapExceeded {
                what: "explicit ∇ universe",
                size: n as usize,
                cap: EXHAUSTIVE_INDEX_LIMIT as usize,
            });
        }
        if table.len() != 1 << n {
            return Err(Error::Malformed(format!("∇ table needs {} rows, got {}", 1 << n, table.len())));
        }
        for row in &table {
            if row.len() != carrier.size() {
                return Err(Error::Malformed("∇ row is not total on the carrier".into()));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= carrier.size()) {
                return Err(Error::OutOfRange { index: bad, size: carrier.size() });
            }
        }
        Ok(Self { carrier, indices, table })
    }

    /// Table computed from a generated structure.
    pub fn from_generated(p: &SigmaFreePolyadic) -> Result<Self, Error> {
        let n = match p.indices.universe() {
            Universe::Finite(n) if n <= EXHAUSTIVE_INDEX_LIMIT => n,
            _ => return Err(Error::Invalid("explicit ∇ tables need a small finite universe".into())),
        };
        let u = p.indices.universe();
        let table = (0u32..1 << n)
            .map(|mask| {
                let j = mask_set(u, mask);
                p.carrier.elements().map(|a| nabla_eval(p, &j, a)).collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(p.carrier.clone(), p.indices.clone(), table)
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn set(&mut self, mask: usize, a: usize, value: usize) {
        self.table[mask][a] = value;
    }
}

impl Nabla for ExplicitNabla {
    fn carrier(&self) -> &FiniteOrtholattice {
        &self.carrier
    }

    fn indices(&self) -> &IndexUniverse {
        &self.indices
    }

    fn nabla(&self, j: &IndexSet, a: usize) -> Result<usize, Error> {
        if j.universe() != self.indices.universe() {
            return Err(Error::UniverseMismatch);
        }
        let mask = j.elements().iter().fold(0usize, |m, &i| m | 1 << i);
        Ok(self.table[mask][a])
    }

    fn relevant_indices(&self) -> Vec<u32> {
        match self.indices.universe() {
            Universe::Finite(n) => (0..n).collect(),
            Universe::Omega => Vec::new(),
        }
    }
}

fn mask_set(u: Universe, mask: u32) -> IndexSet {
    IndexSet::fin(u, (0..32).filter(|i| mask >> i & 1 == 1)).expect("mask within universe")
}

/// Converts an explicit table to generated form, refusing tables that are
/// not determined by their singletons.
pub fn from_explicit(t: &ExplicitNabla) -> Result<SigmaFreePolyadic, Error> {
    let u = t.indices.universe();
    let Universe::Finite(n) = u else {
        return Err(Error::Invalid("explicit ∇ tables need a finite universe".into()));
    };
    let generators: BTreeMap<u32, Vec<usize>> = (0..n)
        .map(|i| (i, t.table[1 << i].clone()))
        .filter(|(_, g)| g.iter().enumerate().any(|(a, &v)| a != v))
        .collect();
    let p = SigmaFreePolyadic::new(t.carrier.clone(), t.indices.clone(), generators)?;
    for mask in 0u32..1 << n {
        let j = mask_set(u, mask);
        for a in t.carrier.elements() {
            if nabla_eval(&p, &j, a)? != t.table[mask as usize][a] {
                return Err(Error::NotGenerated {
                    set: t.indices.set_label(&j),
                    element: t.carrier.label(a),
                });
            }
        }
    }
    Ok(p)
}

/// Options for [`check_sigma_free_with`].
#[derive(Debug, Clone, Copy)]
pub struct SampleConfig {
    pub seed: u64,
    pub samples: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, samples: DEFAULT_SAMPLES }
    }
}

pub fn check_sigma_free<P: Nabla + ?Sized>(p: &P) -> Report {
    check_sigma_free_with(p, SampleConfig::default())
}

/// Checks `∇_∅ = id`, `∇_{J∪K} = ∇_J∘∇_K`, that each `∇_J` tested is a
/// quantifier, and that the singleton quantifiers commute.
///
/// Small finite universes are checked over all pairs of subsets. Otherwise
/// the test sets are every finite set over the relevant indices plus one
/// fresh index, their complements, and `samples` seeded random pairs.
pub fn check_sigma_free_with<P: Nabla + ?Sized>(p: &P, cfg: SampleConfig) -> Report {
    let l = p.carrier();
    let ix = p.indices();
    let u = ix.universe();
    let mut r = Report::new();
    let lab = |s: &IndexSet| ix.set_label(s);
    let nab = |s: &IndexSet, a: usize| p.nabla(s, a).expect("sets share the universe");

    let empty = IndexSet::empty(u);
    if let Some(a) = l.elements().find(|&a| nab(&empty, a) != a) {
        r.push(Law::NablaEmpty, vec![l.label(a)]);
    }

    let relevant = p.relevant_indices();
    let singles: Vec<IndexSet> = relevant.iter().map(|&i| IndexSet::fin(u, [i]).expect("index")).collect();
    'c: for (x, si) in singles.iter().enumerate() {
        for sk in &singles[x + 1..] {
            if let Some(a) = l.elements().find(|&a| nab(si, nab(sk, a)) != nab(sk, nab(si, a))) {
                r.push(Law::Commute, vec![lab(si), lab(sk), l.label(a)]);
                break 'c;
            }
        }
    }

    let mut sets: Vec<IndexSet> = Vec::new();
    let exhaustive = matches!(u, Universe::Finite(n) if n <= EXHAUSTIVE_INDEX_LIMIT);
    if let (true, Universe::Finite(n)) = (exhaustive, u) {
        sets.extend((0u32..1 << n).map(|m| mask_set(u, m)));
    } else if relevant.len() <= STRUCTURED_ACTIVE_LIMIT {
        let mut base = relevant.clone();
        let fresh = match u {
            Universe::Omega => Some(relevant.last().map_or(0, |&k| k + 1)),
            Universe::Finite(n) => (0..n).find(|i| !relevant.contains(i)),
        };
        base.extend(fresh);
        let mut seen = BTreeSet::new();
        for m in 0u32..1 << base.len() {
            let s = IndexSet::fin(u, base.iter().enumerate().filter(|(k, _)| m >> k & 1 == 1).map(|(_, &i)| i))
                .expect("index");
            for t in [s.complement(), s] {
                if seen.insert(t.clone()) {
                    sets.push(t);
                }
            }
        }
        sets.sort();
    }

    let mut first_union: Option<Vec<String>> = None;
    let mut test_pair = |j: &IndexSet, k: &IndexSet, r: &mut Report| {
        if first_union.is_some() {
            return;
        }
        let jk = j.union(k).expect("same universe");
        if let Some(a) = l.elements().find(|&a| nab(&jk, a) != nab(j, nab(k, a))) {
            first_union = Some(vec![lab(j), lab(k), l.label(a)]);
            r.push(Law::NablaUnion, first_union.clone().unwrap_or_default());
        }
    };
    for j in &sets {
        for k in &sets {
            test_pair(j, k, &mut r);
        }
    }
    let bound = relevant.last().map_or(4, |&k| k + 4);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let random_set = |rng: &mut ChaCha8Rng| {
        let hi = match u {
            Universe::Finite(n) => n,
            Universe::Omega => bound,
        };
        let count = rng.gen_range(0..=4);
        let elems: Vec<u32> = (0..count).map(|_| rng.gen_range(0..hi.max(1))).collect();
        let s = IndexSet::fin(u, elems.into_iter().filter(|&i| i < hi)).expect("index");
        if rng.gen_bool(0.5) {
            s.complement()
        } else {
            s
        }
    };
    let samples = if exhaustive { 0 } else { cfg.samples };
    let mut sampled = Vec::with_capacity(samples);
    for _ in 0..samples {
        let j = random_set(&mut rng);
        let k = random_set(&mut rng);
        test_pair(&j, &k, &mut r);
        sampled.push(j);
    }

    for j in sets.iter().chain(sampled.iter()) {
        let map: Vec<usize> = l.elements().map(|a| nab(j, a)).collect();
        let q = check_quantifier(l, &map).expect("total map");
        if !q.is_pass() {
            r.absorb(&format!("∇_{}", lab(j)), q);
            break;
        }
    }

    r.note("test sets", format!("{}", sets.len()));
    r.note("random samples", format!("{samples}"));
    if samples > 0 {
        r.note("seed", format!("{}", cfg.seed));
    }
    r
}

/// The least finite `J` with `∇_{I∖J} a = a`, with a report verifying the
/// equation and that no proper subset satisfies it.
pub fn support_of(p: &SigmaFreePolyadic, a: usize) -> Result<(IndexSet, Report), Error> {
    let u = p.indices.universe();
    let moving = p.moving(a);
    let support = IndexSet::fin(u, moving.iter().copied())?;
    let mut r = Report::new();
    let fixes = |j: &IndexSet| nabla_eval(p, &j.complement(), a).map(|x| x == a);
    if !fixes(&support)? {
        r.push(Law::SupportEquation, vec![p.carrier.label(a), p.indices.set_label(&support)]);
    }
    let k = moving.len();
    let proper: Vec<u64> = if k <= 16 {
        (0u64..(1 << k) - 1).collect()
    } else {
        // only the maximal proper subsets
        (0..k).map(|i| ((1u64 << k) - 1) & !(1 << i)).collect()
    };
    for m in proper {
        let sub = IndexSet::fin(u, (0..k).filter(|i| m >> i & 1 == 1).map(|i| moving[i]))?;
        if fixes(&sub)? {
            r.push(Law::SupportMinimal, vec![p.carrier.label(a), p.indices.set_label(&sub)]);
            break;
        }
    }
    Ok((support, r))
}

/// Generators are the family's active quantifiers. Refuses families whose
/// quantifiers fail the axioms or do not commute.
pub fn cyl_to_pol(c: &DeltaFreeCylindric) -> Result<SigmaFreePolyadic, Error> {
    let r = check_family(c);
    if let Some(v) = r.find(Law::Commute) {
        return Err(Error::NonCommuting {
            i: v.witness[0].clone(),
            k: v.witness[1].clone(),
            witness: v.witness[2].clone(),
        });
    }
    if let Some(v) = r.violations.first() {
        return Err(Error::Invalid(format!("{v}")));
    }
    SigmaFreePolyadic::new(c.carrier().clone(), c.indices().clone(), c.active().clone())
}

/// `∃_i = ∇_{{i}}` for every generator.
pub fn pol_to_cyl(p: &SigmaFreePolyadic) -> DeltaFreeCylindric {
    let u = p.indices.universe();
    let active = p
        .generators
        .keys()
        .map(|&i| {
            let s = IndexSet::fin(u, [i]).expect("index");
            (i, p.carrier.elements().map(|a| nabla_eval(p, &s, a).expect("universe")).collect())
        })
        .collect();
    DeltaFreeCylindric::new(p.carrier.clone(), p.indices.clone(), active).expect("shapes carried over")
}

/// Checks `∃_j a = ∇_{{j}} a = ∃̂_j a` for every active `j` and every `a`,
/// where `∃̂` is the family recovered through the correspondence.
pub fn roundtrip_check(c: &DeltaFreeCylindric) -> Result<Report, Error> {
    let p = cyl_to_pol(c)?;
    let back = pol_to_cyl(&p);
    let l = c.carrier();
    let u = c.indices().universe();
    let mut r = Report::new();
    'o: for &j in c.active().keys() {
        let s = IndexSet::fin(u, [j])?;
        for a in l.elements() {
            let e = c.exists(j, a);
            if e != nabla_eval(&p, &s, a)? || e != back.exists(j, a) {
                r.push(Law::Correspondence, vec![c.indices().label(j), l.label(a)]);
                break 'o;
            }
        }
    }
    if back.active() != c.active() {
        r.push(Law::Correspondence, vec!["family".into()]);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monadic::Quantifier;
    use crate::ortho::library::*;
    use alloc::string::ToString;

    fn b4_omega(gens: &[(u32, bool)]) -> SigmaFreePolyadic {
        let b4 = boolean4();
        let g = gens
            .iter()
            .map(|&(i, simple)| {
                let q = if simple { Quantifier::simple(&b4) } else { Quantifier::identity(4) };
                (i, q.map().to_vec())
            })
            .collect();
        SigmaFreePolyadic::new(b4, IndexUniverse::omega(), g).unwrap()
    }

    #[test]
    fn nabla_worked_cases() {
        let p = b4_omega(&[(0, true), (1, false)]);
        let a = p.carrier().index_of("a").unwrap();
        let w = Universe::Omega;
        assert_eq!(nabla_eval(&p, &IndexSet::empty(w), a).unwrap(), a);
        assert_eq!(nabla_eval(&p, &IndexSet::full(w), a).unwrap(), p.carrier().top());
        assert_eq!(nabla_eval(&p, &IndexSet::fin(w, [1]).unwrap(), a).unwrap(), a);
        let f = IndexSet::empty(Universe::Finite(2));
        assert_eq!(nabla_eval(&p, &f, a), Err(Error::UniverseMismatch));
    }

    #[test]
    fn generated_structures_pass() {
        let b4 = boolean4();
        let u = IndexUniverse::finite_named(&["i", "k"]).unwrap();
        let mut g = BTreeMap::new();
        g.insert(0, Quantifier::simple(&b4).map().to_vec());
        g.insert(1, Quantifier::simple(&b4).map().to_vec());
        let p = SigmaFreePolyadic::new(b4, u, g).unwrap();
        let r = check_sigma_free(&p);
        assert!(r.is_pass(), "{r:?}");
        assert!(check_sigma_free(&b4_omega(&[(0, true), (3, true)])).is_pass());
    }

    #[test]
    fn broken_table_is_caught() {
        let b4 = boolean4();
        let u = IndexUniverse::finite_named(&["i", "k"]).unwrap();
        let mut g = BTreeMap::new();
        g.insert(0, Quantifier::simple(&b4).map().to_vec());
        let p = SigmaFreePolyadic::new(b4.clone(), u, g).unwrap();
        let mut t = ExplicitNabla::from_generated(&p).unwrap();
        assert_eq!(from_explicit(&t).unwrap(), p);
        assert!(check_sigma_free(&t).is_pass());
        // ∇_{i,k} a := a while ∇_{i} a = 1
        let a = b4.index_of("a").unwrap();
        t.set(0b11, a, a);
        let r = check_sigma_free(&t);
        let v = r.find(Law::NablaUnion).unwrap();
        assert_eq!(v.witness[2], "a");
        assert!(matches!(from_explicit(&t), Err(Error::NotGenerated { .. })));
    }

    #[test]
    fn supports() {
        let p = b4_omega(&[(0, true)]);
        let l = p.carrier().clone();
        let a = l.index_of("a").unwrap();
        let (s, r) = support_of(&p, a).unwrap();
        assert!(r.is_pass());
        assert_eq!(s, IndexSet::fin(Universe::Omega, [0]).unwrap());
        for x in [l.bottom(), l.top()] {
            assert!(support_of(&p, x).unwrap().0.is_empty());
        }
        let id = b4_omega(&[(0, false)]);
        assert!(support_of(&id, a).unwrap().0.is_empty());
    }

    #[test]
    fn correspondence_round_trip() {
        let p = b4_omega(&[(0, true)]);
        let c = pol_to_cyl(&p);
        assert_eq!(cyl_to_pol(&c).unwrap(), p);
        assert!(roundtrip_check(&c).unwrap().is_pass());
        let both = pol_to_cyl(&b4_omega(&[(0, true), (1, true)]));
        assert!(roundtrip_check(&both).unwrap().is_pass());
        let ident = pol_to_cyl(&b4_omega(&[(0, false), (1, false)]));
        let q = cyl_to_pol(&ident).unwrap();
        let a = q.carrier().index_of("a").unwrap();
        assert_eq!(nabla_eval(&q, &IndexSet::full(Universe::Omega), a).unwrap(), a);
    }

    #[test]
    fn non_commuting_family_refused() {
        let o6 = benzene();
        let closed = |x: &str| {
            let i = o6.index_of(x).unwrap();
            Quantifier::from_closed(&o6, &[o6.bottom(), i, o6.ortho(i), o6.top()]).unwrap()
        };
        let mut active = BTreeMap::new();
        active.insert(0, closed("a").map().to_vec());
        active.insert(1, closed("b").map().to_vec());
        let u = IndexUniverse::finite_named(&["i", "k"]).unwrap();
        let c = DeltaFreeCylindric::new(o6.clone(), u, active).unwrap();
        let b = o6.index_of("b").unwrap();
        // the two composition orders disagree at b
        assert_eq!(o6.name(c.exists(0, c.exists(1, b))), "a'");
        assert_eq!(o6.name(c.exists(1, c.exists(0, b))), "1");
        match cyl_to_pol(&c) {
            Err(Error::NonCommuting { i, k, .. }) => assert_eq!((i, k), ("i".to_string(), "k".to_string())),
            other => panic!("{other:?}"),
        }
    }
}
