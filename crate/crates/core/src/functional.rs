//! Full functional algebras: all maps from a finite point set into a finite
//! ortholattice, with pointwise operations and join-over-class quantifiers.
//!
//! A table lists one base element per point. Tables are numbered in
//! lexicographic order of their value lists, so the carrier index of a table
//! is its value list read as a big-endian numeral in base `|A|`. Points of
//! `X^I` are tuples, numbered the same way in base `|X|`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::index::{IndexSet, Universe};
use crate::monadic::{check_quantifier_on_pairs, MonadicOrtholattice};
use crate::ortho::enumerate_ortholattices;
use crate::ortho::{check_map, check_ortholattice, Candidate, FiniteOrtholattice, OrthoOps};
use crate::report::{Law, Report};

pub const DEFAULT_MATERIALIZATION_CAP: usize = 20_000;
/// Carriers up to this size are re-checked as ortholattices from scratch.
const CANDIDATE_LIMIT: usize = 1500;
/// Carriers up to this size get two-variable laws checked on all pairs.
const PAIR_LIMIT: usize = 2000;
const SAMPLED_PAIRS: usize = 200_000;
/// Largest base size and point count accepted by [`embed_search`].
pub const MAX_EMBED_BASE: usize = 10;
pub const MAX_EMBED_POINTS: usize = 4;

/// Which operators act on the algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    /// `A^X` with `◇`.
    Monadic,
    /// `A^X` with `◇_i = ◇` for every index.
    DeltaFreeLiteral,
    /// `A^{X^I}` with `◇_i = ∇̂_{{i}}`.
    DeltaFreeCoordinatewise,
    /// `A^{X^I}` with `∇̂_J` for every `J ⊆ I`.
    SigmaFreePolyadic,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Monadic => "monadic",
            Kind::DeltaFreeLiteral => "delta-free-literal",
            Kind::DeltaFreeCoordinatewise => "delta-free-coordinatewise",
            Kind::SigmaFreePolyadic => "sigma-free-polyadic",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [Kind::Monadic, Kind::DeltaFreeLiteral, Kind::DeltaFreeCoordinatewise, Kind::SigmaFreePolyadic]
            .into_iter()
            .find(|k| k.name() == s)
    }

    fn tuples(self) -> bool {
        matches!(self, Kind::DeltaFreeCoordinatewise | Kind::SigmaFreePolyadic)
    }
}

/// Pointwise binary and unary operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pointwise {
    Meet,
    Join,
    Ortho,
    Zero,
    One,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullFunctionalAlgebra {
    base: FiniteOrtholattice,
    x: usize,
    dims: u32,
    kind: Kind,
    points: usize,
    size: Option<usize>,
}

/// `x` and `y` agree outside `J`.
pub fn j_star(x: &[usize], y: &[usize], j: &IndexSet) -> bool {
    x.len() == y.len() && (0..x.len()).all(|i| j.contains(i as u32) || x[i] == y[i])
}

impl FullFunctionalAlgebra {
    /// `x` points; `dims` is `|I|` (the number of operators for the literal
    /// kind, the tuple length for the coordinatewise and polyadic kinds, and
    /// ignored for the monadic kind).
    pub fn new(base: FiniteOrtholattice, x: usize, kind: Kind, dims: u32) -> Result<Self, Error> {
        if x == 0 {
            return Err(Error::Malformed("the point set must be non-empty".into()));
        }
        if kind.tuples() && dims == 0 {
            return Err(Error::Malformed("tuple kinds need a non-empty index set".into()));
        }
        let dims = if kind == Kind::Monadic { 0 } else { dims };
        let points = if kind.tuples() {
            x.checked_pow(dims)
                .filter(|&p| p <= 64)
                .ok_or(Error::CapExceeded { what: "point set", size: usize::MAX, cap: 64 })?
        } else {
            x
        };
        let size = base.size().checked_pow(points as u32);
        Ok(Self { base, x, dims, kind, points, size })
    }

    pub fn base(&self) -> &FiniteOrtholattice {
        &self.base
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn x(&self) -> usize {
        self.x
    }

    pub fn dims(&self) -> u32 {
        self.dims
    }

    /// Number of points: `|X|`, or `|X|^|I|` for tuple kinds.
    pub fn points(&self) -> usize {
        self.points
    }

    /// `|A|^points`, when it fits a `usize`.
    pub fn carrier_size(&self) -> Option<usize> {
        self.size
    }

    pub fn index_universe(&self) -> Universe {
        Universe::Finite(self.dims)
    }

    /// Coordinates of point `p` of `X^I`.
    pub fn tuple(&self, p: usize) -> Vec<usize> {
        let d = self.dims as usize;
        let mut out = vec![0; d];
        let mut rest = p;
        for i in (0..d).rev() {
            out[i] = rest % self.x;
            rest /= self.x;
        }
        out
    }

    pub fn decode(&self, f: usize) -> Vec<usize> {
        let n = self.base.size();
        let mut out = vec![0; self.points];
        let mut rest = f;
        for p in (0..self.points).rev() {
            out[p] = rest % n;
            rest /= n;
        }
        out
    }

    pub fn encode(&self, t: &[usize]) -> usize {
        t.iter().fold(0, |acc, &v| acc * self.base.size() + v)
    }

    pub fn constant(&self, e: usize) -> Vec<usize> {
        vec![e; self.points]
    }

    pub fn check_table(&self, f: &[usize]) -> Result<(), Error> {
        if f.len() != self.points {
            return Err(Error::DomainMismatch);
        }
        if let Some(&bad) = f.iter().find(|&&v| v >= self.base.size()) {
            return Err(Error::OutOfRange { index: bad, size: self.base.size() });
        }
        Ok(())
    }

    /// Applies a pointwise operation; `g` is used by the binary ones.
    pub fn pointwise(&self, op: Pointwise, f: &[usize], g: Option<&[usize]>) -> Result<Vec<usize>, Error> {
        self.check_table(f)?;
        let b = &self.base;
        let second = |g: Option<&[usize]>| -> Result<Vec<usize>, Error> {
            let g = g.ok_or_else(|| Error::Malformed("binary operation needs two tables".into()))?;
            self.check_table(g)?;
            Ok(g.to_vec())
        };
        Ok(match op {
            Pointwise::Meet => {
                let g = second(g)?;
                f.iter().zip(&g).map(|(&x, &y)| b.meet(x, y)).collect()
            }
            Pointwise::Join => {
                let g = second(g)?;
                f.iter().zip(&g).map(|(&x, &y)| b.join(x, y)).collect()
            }
            Pointwise::Ortho => f.iter().map(|&x| b.ortho(x)).collect(),
            Pointwise::Zero => self.constant(b.bottom()),
            Pointwise::One => self.constant(b.top()),
        })
    }

    /// The constant table at the join of the range of `f`.
    pub fn diamond(&self, f: &[usize]) -> Result<Vec<usize>, Error> {
        self.check_table(f)?;
        Ok(self.constant(self.base.join_all(f.iter().copied())))
    }

    /// `∇̂_J f(x) = ⋁{ f(y) : x J_* y }`.
    pub fn nabla_hat(&self, f: &[usize], j: &IndexSet) -> Result<Vec<usize>, Error> {
        self.check_table(f)?;
        if !self.kind.tuples() {
            return Err(Error::Invalid(format!("∇̂ needs a tuple domain, kind is {}", self.kind.name())));
        }
        if j.universe() != self.index_universe() {
            return Err(Error::UniverseMismatch);
        }
        let tuples: Vec<Vec<usize>> = (0..self.points).map(|p| self.tuple(p)).collect();
        Ok((0..self.points)
            .map(|p| {
                self.base.join_all(
                    (0..self.points).filter(|&q| j_star(&tuples[p], &tuples[q], j)).map(|q| f[q]),
                )
            })
            .collect())
    }

    /// `f(x) = f(y)` whenever `x J_* y`.
    pub fn is_independent(&self, f: &[usize], j: &IndexSet) -> Result<bool, Error> {
        self.check_table(f)?;
        if !self.kind.tuples() {
            return Err(Error::Invalid(format!("independence needs a tuple domain, kind is {}", self.kind.name())));
        }
        if j.universe() != self.index_universe() {
            return Err(Error::UniverseMismatch);
        }
        let tuples: Vec<Vec<usize>> = (0..self.points).map(|p| self.tuple(p)).collect();
        Ok((0..self.points).all(|p| {
            (0..self.points).all(|q| !j_star(&tuples[p], &tuples[q], j) || f[p] == f[q])
        }))
    }

    fn single(&self, i: u32) -> IndexSet {
        IndexSet::fin(self.index_universe(), [i]).expect("index in range")
    }

    fn mask_set(&self, mask: u32) -> IndexSet {
        IndexSet::fin(self.index_universe(), (0..self.dims).filter(|i| mask >> i & 1 == 1)).expect("index in range")
    }

    /// Operators of this kind as named table transformers.
    pub fn operators(&self) -> Vec<(String, Operator)> {
        match self.kind {
            Kind::Monadic => vec![("◇".into(), Operator::Diamond)],
            Kind::DeltaFreeLiteral => (0..self.dims).map(|i| (format!("◇_{i}"), Operator::Diamond)).collect(),
            Kind::DeltaFreeCoordinatewise => {
                (0..self.dims).map(|i| (format!("◇_{i}"), Operator::Nabla(self.single(i)))).collect()
            }
            Kind::SigmaFreePolyadic => (0u32..1 << self.dims)
                .map(|m| {
                    let j = self.mask_set(m);
                    let parts: Vec<String> = j.elements().iter().map(|i| format!("{i}")).collect();
                    (format!("∇̂_{{{}}}", parts.join(",")), Operator::Nabla(j))
                })
                .collect(),
        }
    }

    pub fn apply(&self, op: &Operator, f: &[usize]) -> Result<Vec<usize>, Error> {
        match op {
            Operator::Diamond => self.diamond(f),
            Operator::Nabla(j) => self.nabla_hat(f, j),
        }
    }

    fn materialized(&self, cap: usize) -> Result<usize, Error> {
        match self.size {
            Some(n) if n <= cap => Ok(n),
            _ => Err(Error::CapExceeded {
                what: "functional carrier",
                size: self.size.unwrap_or(usize::MAX),
                cap,
            }),
        }
    }

    /// An operator as a map on carrier indices.
    pub fn operator_map(&self, op: &Operator) -> Result<Vec<usize>, Error> {
        let n = self.materialized(DEFAULT_MATERIALIZATION_CAP)?;
        (0..n).map(|f| Ok(self.encode(&self.apply(op, &self.decode(f))?))).collect()
    }

    /// The materialized carrier as an ortholattice, labelled by tables.
    pub fn to_ortholattice(&self) -> Result<FiniteOrtholattice, Error> {
        let n = self.materialized(CANDIDATE_LIMIT)?;
        FiniteOrtholattice::new(self.to_candidate(n))
    }

    fn to_candidate(&self, n: usize) -> Candidate {
        let tables: Vec<Vec<usize>> = (0..n).map(|f| self.decode(f)).collect();
        let rows = tables
            .iter()
            .map(|f| {
                let mut s = FixedBitSet::with_capacity(n);
                for (j, g) in tables.iter().enumerate() {
                    s.set(j, f.iter().zip(g).all(|(&x, &y)| self.base.leq(x, y)));
                }
                s
            })
            .collect();
        let ortho = tables
            .iter()
            .map(|f| self.encode(&f.iter().map(|&x| self.base.ortho(x)).collect::<Vec<_>>()))
            .collect();
        Candidate::from_rows((0..n).map(|f| self.label(f)).collect(), rows, ortho).expect("square relation")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operator {
    Diamond,
    Nabla(IndexSet),
}

/// Pointwise operations on carrier indices; only meaningful when the carrier
/// size fits a `usize`.
impl OrthoOps for FullFunctionalAlgebra {
    fn size(&self) -> usize {
        self.size.unwrap_or(usize::MAX)
    }

    fn bottom(&self) -> usize {
        self.encode(&self.constant(self.base.bottom()))
    }

    fn top(&self) -> usize {
        self.encode(&self.constant(self.base.top()))
    }

    fn meet(&self, a: usize, b: usize) -> usize {
        let (f, g) = (self.decode(a), self.decode(b));
        self.encode(&f.iter().zip(&g).map(|(&x, &y)| self.base.meet(x, y)).collect::<Vec<_>>())
    }

    fn join(&self, a: usize, b: usize) -> usize {
        let (f, g) = (self.decode(a), self.decode(b));
        self.encode(&f.iter().zip(&g).map(|(&x, &y)| self.base.join(x, y)).collect::<Vec<_>>())
    }

    fn ortho(&self, a: usize) -> usize {
        self.encode(&self.decode(a).iter().map(|&x| self.base.ortho(x)).collect::<Vec<_>>())
    }

    fn leq(&self, a: usize, b: usize) -> bool {
        self.decode(a).iter().zip(&self.decode(b)).all(|(&x, &y)| self.base.leq(x, y))
    }

    fn label(&self, a: usize) -> String {
        let parts: Vec<&str> = self.decode(a).iter().map(|&v| self.base.name(v)).collect();
        format!("({})", parts.join(","))
    }
}

/// Materializes the algebra and verifies it; a failure is reported as an
/// internal error since the laws are theorems.
pub fn build_full_functional(
    base: FiniteOrtholattice,
    x: usize,
    kind: Kind,
    dims: u32,
    cap: usize,
) -> Result<(FullFunctionalAlgebra, Report), Error> {
    let f = FullFunctionalAlgebra::new(base, x, kind, dims)?;
    f.materialized(cap)?;
    let r = verify_full_functional(&f, 0)?;
    if let Some(v) = r.violations.first() {
        return Err(Error::Internal(format!("full functional algebra failed verification: {v}")));
    }
    Ok((f, r))
}

/// Re-checks the materialized algebra: ortholattice laws, the quantifier
/// axioms of every operator, the kind-specific identities, and local
/// finiteness. Two-variable laws on carriers above an internal size limit are
/// checked on seeded random pairs (counts recorded in the notes).
pub fn verify_full_functional(f: &FullFunctionalAlgebra, seed: u64) -> Result<Report, Error> {
    let n = f.materialized(DEFAULT_MATERIALIZATION_CAP)?;
    let mut r = Report::new();
    r.absorb("base", check_ortholattice(&f.base.to_candidate()));
    if n <= CANDIDATE_LIMIT {
        r.absorb("carrier", check_ortholattice(&f.to_candidate(n)));
    } else {
        r.note("carrier laws", "inherited pointwise from the base");
    }
    let sample: Option<Vec<(usize, usize)>> = (n > PAIR_LIMIT).then(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..SAMPLED_PAIRS).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
    });
    if let Some(s) = &sample {
        r.note("sampled pairs", format!("{}", s.len()));
        r.note("seed", format!("{seed}"));
    }
    let ops = f.operators();
    let mut maps = Vec::with_capacity(ops.len());
    for (name, op) in &ops {
        let m = f.operator_map(op)?;
        r.absorb(name, check_quantifier_on_pairs(f, &m, sample.as_deref())?);
        maps.push(m);
    }
    let label = |a: usize| f.label(a);

    if matches!(f.kind, Kind::Monadic | Kind::DeltaFreeLiteral) {
        let d = f.operator_map(&Operator::Diamond)?;
        if let Some(a) = (0..n).find(|&a| d[f.ortho(d[a])] != f.ortho(d[a])) {
            r.push(Law::DiamondComplement, vec![label(a)]);
        }
    }

    let singles: Vec<usize> = match f.kind {
        Kind::Monadic => Vec::new(),
        Kind::DeltaFreeLiteral | Kind::DeltaFreeCoordinatewise => (0..maps.len()).collect(),
        Kind::SigmaFreePolyadic => (0..f.dims).map(|i| 1usize << i).collect(),
    };
    'c: for (p, &i) in singles.iter().enumerate() {
        for &k in &singles[p + 1..] {
            if let Some(a) = (0..n).find(|&a| maps[i][maps[k][a]] != maps[k][maps[i][a]]) {
                r.push(Law::Commute, vec![ops[i].0.clone(), ops[k].0.clone(), label(a)]);
                break 'c;
            }
        }
    }

    if f.kind == Kind::SigmaFreePolyadic {
        if let Some(a) = (0..n).find(|&a| maps[0][a] != a) {
            r.push(Law::NablaEmpty, vec![label(a)]);
        }
        'u: for j in 0..maps.len() {
            for k in 0..maps.len() {
                if let Some(a) = (0..n).find(|&a| maps[j | k][a] != maps[j][maps[k][a]]) {
                    r.push(Law::NablaUnion, vec![ops[j].0.clone(), ops[k].0.clone(), label(a)]);
                    break 'u;
                }
            }
        }
        let d = f.operator_map(&Operator::Diamond)?;
        let all = &maps[maps.len() - 1];
        if let Some(a) = (0..n).find(|&a| d[a] != all[a]) {
            r.push(Law::DiamondIsNablaAll, vec![label(a)]);
        }
    }
    if f.kind.tuples() {
        let lf = check_locally_finite_fun(f)?;
        r.absorb("", lf);
    }
    Ok(r)
}

/// Every table depends on finitely many coordinates: it is independent of
/// the complement of the coordinates it depends on individually.
pub fn check_locally_finite_fun(f: &FullFunctionalAlgebra) -> Result<Report, Error> {
    let n = f.materialized(DEFAULT_MATERIALIZATION_CAP)?;
    let u = f.index_universe();
    let mut r = Report::new();
    let mut max_dep = 0;
    for a in 0..n {
        let t = f.decode(a);
        let mut dep = Vec::new();
        for i in 0..f.dims {
            if !f.is_independent(&t, &f.single(i))? {
                dep.push(i);
            }
        }
        max_dep = max_dep.max(dep.len());
        let rest = IndexSet::fin(u, dep)?.complement();
        if !f.is_independent(&t, &rest)? {
            r.push(Law::LocallyFinite, vec![f.label(a)]);
            break;
        }
    }
    r.note("largest dependence set", format!("{max_dep}"));
    Ok(r)
}

/// Checks `members` (carrier indices) is closed under the pointwise
/// operations, contains the constants `c0`, `c1`, and is closed under every
/// operator of the algebra's kind.
pub fn check_functional_subalgebra(members: &[usize], f: &FullFunctionalAlgebra) -> Result<Report, Error> {
    let n = f.materialized(DEFAULT_MATERIALIZATION_CAP)?;
    if let Some(&bad) = members.iter().find(|&&m| m >= n) {
        return Err(Error::OutOfRange { index: bad, size: n });
    }
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let inside = |x: usize| sorted.binary_search(&x).is_ok();
    let label = |a: usize| f.label(a);
    let mut r = Report::new();
    if !inside(f.bottom()) || !inside(f.top()) {
        r.push(Law::ContainsBounds, Vec::new());
    }
    if let Some(&a) = sorted.iter().find(|&&a| !inside(f.ortho(a))) {
        r.push(Law::ClosedUnderOrtho, vec![label(a)]);
    }
    let pairs = || sorted.iter().flat_map(|&a| sorted.iter().map(move |&b| (a, b)));
    if let Some((a, b)) = pairs().find(|&(a, b)| !inside(f.meet(a, b))) {
        r.push(Law::ClosedUnderMeet, vec![label(a), label(b)]);
    }
    if let Some((a, b)) = pairs().find(|&(a, b)| !inside(f.join(a, b))) {
        r.push(Law::ClosedUnderJoin, vec![label(a), label(b)]);
    }
    for (name, op) in f.operators() {
        for &a in &sorted {
            if !inside(f.encode(&f.apply(&op, &f.decode(a))?)) {
                r.push(Law::ClosedUnderQuantifier, vec![name, label(a)]);
                break;
            }
        }
    }
    Ok(r)
}

/// A functional representation: `h(a)` for each element of the monadic
/// ortholattice, as a table over `points` points into `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbedWitness {
    pub base: FiniteOrtholattice,
    pub points: usize,
    pub tables: Vec<Vec<usize>>,
}

/// `(base, point count)` pairs in search order: bases by size, then
/// canonical order, then point counts.
pub fn embed_candidates(max_base: usize, max_points: usize) -> Result<Vec<(FiniteOrtholattice, usize)>, Error> {
    if max_base > MAX_EMBED_BASE {
        return Err(Error::CapExceeded { what: "embedding base size", size: max_base, cap: MAX_EMBED_BASE });
    }
    if max_points > MAX_EMBED_POINTS {
        return Err(Error::CapExceeded { what: "embedding point count", size: max_points, cap: MAX_EMBED_POINTS });
    }
    let mut out = Vec::new();
    for size in (2..=max_base).step_by(2) {
        for base in enumerate_ortholattices(size)? {
            for k in 1..=max_points {
                out.push((base.clone(), k));
            }
        }
    }
    Ok(out)
}

struct EmbedSearch<'a> {
    m: &'a MonadicOrtholattice,
    f: &'a FullFunctionalAlgebra,
    tables: Vec<Vec<usize>>,
    /// elements whose image is chosen, in order; complements come for free
    order: Vec<usize>,
    h: Vec<Option<usize>>,
    diamond: Vec<usize>,
}

impl EmbedSearch<'_> {
    fn consistent(&self, x: usize) -> bool {
        let l = self.m.carrier();
        let e = self.m.exists();
        let f = self.f;
        let hx = self.h[x].expect("assigned");
        for y in l.elements() {
            let Some(hy) = self.h[y] else { continue };
            if (hx == hy) != (x == y) {
                return false;
            }
            if l.leq(x, y) != f.leq(hx, hy) || l.leq(y, x) != f.leq(hy, hx) {
                return false;
            }
            if let Some(hm) = self.h[l.meet(x, y)] {
                if hm != f.meet(hx, hy) {
                    return false;
                }
            }
            if let Some(hj) = self.h[l.join(x, y)] {
                if hj != f.join(hx, hy) {
                    return false;
                }
            }
        }
        for z in [x, l.ortho(x)] {
            let hz = self.h[z].expect("assigned");
            if let Some(he) = self.h[e.apply(z)] {
                if he != self.diamond[hz] {
                    return false;
                }
            }
            for w in l.elements() {
                if e.apply(w) == z {
                    if let Some(hw) = self.h[w] {
                        if hz != self.diamond[hw] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn go(&mut self, k: usize) -> bool {
        if k == self.order.len() {
            return true;
        }
        let l = self.m.carrier();
        let x = self.order[k];
        let xo = l.ortho(x);
        let closed = self.m.exists().apply(x) == x;
        for t in 0..self.tables.len() {
            if closed && self.diamond[t] != t {
                continue;
            }
            let to = self.f.ortho(t);
            self.h[x] = Some(t);
            self.h[xo] = Some(to);
            if self.consistent(x) && self.consistent(xo) && self.go(k + 1) {
                return true;
            }
            self.h[x] = None;
            self.h[xo] = None;
        }
        false
    }
}

/// Searches embeddings of `m` into the full functional monadic algebra over
/// `base` with `points` points, in lexicographic order of the image tables.
/// Any result has passed [`verify_embedding`].
pub fn embed_try(m: &MonadicOrtholattice, base: &FiniteOrtholattice, points: usize) -> Result<Option<EmbedWitness>, Error> {
    let f = FullFunctionalAlgebra::new(base.clone(), points, Kind::Monadic, 0)?;
    let n = f.materialized(DEFAULT_MATERIALIZATION_CAP)?;
    let l = m.carrier();
    let diamond = f.operator_map(&Operator::Diamond)?;
    let order: Vec<usize> = l
        .elements()
        .filter(|&a| a != l.bottom() && a != l.top() && a < l.ortho(a))
        .collect();
    let mut h = vec![None; l.size()];
    h[l.bottom()] = Some(f.bottom());
    h[l.top()] = Some(f.top());
    let mut s = EmbedSearch {
        m,
        f: &f,
        tables: (0..n).map(|t| f.decode(t)).collect(),
        order,
        h,
        diamond,
    };
    if l.size() > n || !s.go(0) {
        return Ok(None);
    }
    let tables = s.h.iter().map(|t| f.decode(t.expect("complete"))).collect();
    let w = EmbedWitness { base: base.clone(), points, tables };
    let r = verify_embedding(m, &w)?;
    if let Some(v) = r.violations.first() {
        return Err(Error::Internal(format!("embedding search produced an invalid witness: {v}")));
    }
    Ok(Some(w))
}

/// The first witness over [`embed_candidates`], or `None` when the bounds
/// are exhausted (which says nothing about existence beyond them).
pub fn embed_search(m: &MonadicOrtholattice, max_base: usize, max_points: usize) -> Result<Option<EmbedWitness>, Error> {
    for (base, k) in embed_candidates(max_base, max_points)? {
        if let Some(w) = embed_try(m, &base, k)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Independent check of a witness on the materialized algebra: the image is
/// a functional subalgebra, the map is an ortholattice embedding, and
/// `h(∃a) = ◇h(a)`.
pub fn verify_embedding(m: &MonadicOrtholattice, w: &EmbedWitness) -> Result<Report, Error> {
    let (f, _) = build_full_functional(w.base.clone(), w.points, Kind::Monadic, 0, DEFAULT_MATERIALIZATION_CAP)?;
    let l = m.carrier();
    if w.tables.len() != l.size() {
        return Err(Error::Malformed("witness is not total".into()));
    }
    let mut map = Vec::with_capacity(l.size());
    for t in &w.tables {
        f.check_table(t)?;
        map.push(f.encode(t));
    }
    let mut r = Report::new();
    r.absorb("h", check_map(l, &f, &map, true)?);
    r.absorb("image", check_functional_subalgebra(&map, &f)?);
    for a in l.elements() {
        let lhs = &w.tables[m.exists().apply(a)];
        if *lhs != f.diamond(&w.tables[a])? {
            r.push(Law::WitnessQuantifier, vec![l.label(a)]);
            break;
        }
    }
    Ok(r)
}
