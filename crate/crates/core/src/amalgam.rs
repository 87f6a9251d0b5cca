//! V-formations, (super-)amalgamation certificates, bounded certificate
//! search, and finite stages of the amalgamation chain over a monadic
//! ortholattice.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::frames::macneille;
use crate::functional::{FullFunctionalAlgebra, Kind};
use crate::monadic::{closed_elements, forall_of, MonadicOrtholattice};
use crate::ortho::library::{horizontal_sum, product};
use crate::ortho::{check_map, check_ortholattice, enumerate_ortholattices, FiniteOrtholattice, OrthoOps, DEFAULT_ENUMERATION_CAP};
use crate::report::{Law, Report};

/// Largest target size [`find_amalgam`] accepts.
pub const MAX_TARGET_SIZE: usize = 20;
/// Largest left or right algebra accepted by [`find_amalgam`].
pub const MAX_SIDE_SIZE: usize = 20;

/// Two embeddings `phi1: base → left`, `phi2: base → right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VFormation {
    pub base: FiniteOrtholattice,
    pub left: FiniteOrtholattice,
    pub right: FiniteOrtholattice,
    pub phi1: Vec<usize>,
    pub phi2: Vec<usize>,
}

impl VFormation {
    /// Checks both maps are embeddings.
    pub fn new(
        base: FiniteOrtholattice,
        left: FiniteOrtholattice,
        right: FiniteOrtholattice,
        phi1: Vec<usize>,
        phi2: Vec<usize>,
    ) -> Result<Self, Error> {
        for (name, tgt, map) in [("phi1", &left, &phi1), ("phi2", &right, &phi2)] {
            let r = check_map(&base, tgt, map, true)?;
            if let Some(v) = r.violations.first() {
                return Err(Error::Invalid(format!("{name} is not an embedding: {v}")));
            }
        }
        Ok(Self { base, left, right, phi1, phi2 })
    }

    /// `⟨A, A, A, id, id⟩`.
    pub fn trivial(a: FiniteOrtholattice) -> Self {
        let id: Vec<usize> = a.elements().collect();
        Self { base: a.clone(), left: a.clone(), right: a, phi1: id.clone(), phi2: id }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmalgamCertificate {
    pub target: FiniteOrtholattice,
    pub psi1: Vec<usize>,
    pub psi2: Vec<usize>,
    pub super_: bool,
}

/// Target is an ortholattice, both `psi` maps are embeddings, and the square
/// commutes on the base.
pub fn verify_amalgam(v: &VFormation, c: &AmalgamCertificate) -> Result<Report, Error> {
    let mut r = Report::new();
    r.absorb("target", check_ortholattice(&c.target.to_candidate()));
    r.absorb("psi1", check_map(&v.left, &c.target, &c.psi1, true)?);
    r.absorb("psi2", check_map(&v.right, &c.target, &c.psi2, true)?);
    if let Some(a) = v.base.elements().find(|&a| c.psi1[v.phi1[a]] != c.psi2[v.phi2[a]]) {
        r.push(Law::SquareCommutes, vec![v.base.label(a)]);
    }
    Ok(r)
}

fn missing_interpolant(v: &VFormation, t: &FiniteOrtholattice, psi1: &[usize], psi2: &[usize]) -> Option<(bool, usize, usize)> {
    let through: Vec<usize> = v.base.elements().map(|a| psi1[v.phi1[a]]).collect();
    for x in v.left.elements() {
        for y in v.right.elements() {
            let (p, q) = (psi1[x], psi2[y]);
            if t.leq(p, q) && !through.iter().any(|&m| t.leq(p, m) && t.leq(m, q)) {
                return Some((true, x, y));
            }
            if t.leq(q, p) && !through.iter().any(|&m| t.leq(q, m) && t.leq(m, p)) {
                return Some((false, x, y));
            }
        }
    }
    None
}

/// The interpolation condition in both orientations. Witnesses are
/// `(left element, right element)`; the scope names the orientation.
pub fn verify_super(v: &VFormation, c: &AmalgamCertificate) -> Result<Report, Error> {
    for (src, map) in [(&v.left, &c.psi1), (&v.right, &c.psi2)] {
        if map.len() != src.size() {
            return Err(Error::Malformed("map is not total on the source".into()));
        }
        if let Some(&bad) = map.iter().find(|&&x| x >= c.target.size()) {
            return Err(Error::OutOfRange { index: bad, size: c.target.size() });
        }
    }
    let t = &c.target;
    let mut r = Report::new();
    for (left_below, scope) in [(true, "ψ1 ≤ ψ2"), (false, "ψ2 ≤ ψ1")] {
        'o: for x in v.left.elements() {
            for y in v.right.elements() {
                let (p, q) = if left_below { (c.psi1[x], c.psi2[y]) } else { (c.psi2[y], c.psi1[x]) };
                if !t.leq(p, q) {
                    continue;
                }
                let ok = v.base.elements().any(|a| {
                    let m1 = c.psi1[v.phi1[a]];
                    let m2 = c.psi2[v.phi2[a]];
                    m1 == m2 && t.leq(p, m1) && t.leq(m1, q)
                });
                if !ok {
                    let mut sub = Report::new();
                    sub.push(Law::Interpolant, vec![v.left.label(x), v.right.label(y)]);
                    r.absorb(scope, sub);
                    break 'o;
                }
            }
        }
    }
    Ok(r)
}

/// Backtracking over ortholattice embeddings in lexicographic order of the
/// images, with some images fixed in advance.
struct Embeddings<'a> {
    src: &'a FiniteOrtholattice,
    tgt: &'a FiniteOrtholattice,
    order: Vec<usize>,
    h: Vec<Option<usize>>,
}

impl<'a> Embeddings<'a> {
    fn new(src: &'a FiniteOrtholattice, tgt: &'a FiniteOrtholattice, fixed: Vec<Option<usize>>) -> Option<Self> {
        let mut h = fixed;
        h[src.bottom()] = Some(tgt.bottom());
        h[src.top()] = Some(tgt.top());
        for x in src.elements() {
            if let Some(v) = h[x] {
                let xo = src.ortho(x);
                match h[xo] {
                    None => h[xo] = Some(tgt.ortho(v)),
                    Some(w) if w != tgt.ortho(v) => return None,
                    _ => {}
                }
            }
        }
        let order = src
            .elements()
            .filter(|&x| h[x].is_none() && x < src.ortho(x))
            .collect();
        let s = Self { src, tgt, order, h };
        if src.elements().filter(|&x| s.h[x].is_some()).all(|x| s.consistent(x)) {
            Some(s)
        } else {
            None
        }
    }

    fn consistent(&self, x: usize) -> bool {
        let (s, t) = (self.src, self.tgt);
        let hx = self.h[x].expect("assigned");
        s.elements().all(|y| {
            let Some(hy) = self.h[y] else { return true };
            s.leq(x, y) == t.leq(hx, hy)
                && s.leq(y, x) == t.leq(hy, hx)
                && self.h[s.meet(x, y)].is_none_or(|m| m == t.meet(hx, hy))
                && self.h[s.join(x, y)].is_none_or(|j| j == t.join(hx, hy))
        })
    }

    fn run(&mut self, k: usize, leaf: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if k == self.order.len() {
            let map: Vec<usize> = self.h.iter().map(|v| v.expect("complete")).collect();
            return leaf(&map);
        }
        let x = self.order[k];
        let xo = self.src.ortho(x);
        for v in self.tgt.elements() {
            self.h[x] = Some(v);
            self.h[xo] = Some(self.tgt.ortho(v));
            if self.consistent(x) && self.consistent(xo) && self.run(k + 1, leaf) {
                return true;
            }
        }
        self.h[x] = None;
        self.h[xo] = None;
        false
    }
}

/// Targets in search order: the two sides themselves when large enough,
/// then every enumerated ortholattice of admissible size, then the horizontal
/// sum (over a two-element base) and the two products when they exceed the
/// enumeration range.
pub fn amalgam_candidates(v: &VFormation, max_size: usize, require_super: bool) -> Result<Vec<FiniteOrtholattice>, Error> {
    if max_size > MAX_TARGET_SIZE {
        return Err(Error::CapExceeded { what: "amalgam target size", size: max_size, cap: MAX_TARGET_SIZE });
    }
    for side in [&v.left, &v.right] {
        if side.size() > MAX_SIDE_SIZE {
            return Err(Error::CapExceeded { what: "V-formation algebra", size: side.size(), cap: MAX_SIDE_SIZE });
        }
    }
    let mut lower = v.left.size().max(v.right.size());
    if require_super {
        // images meet exactly in the base image
        lower = lower.max(v.left.size() + v.right.size() - v.base.size());
    }
    let fits = |n: usize| n >= lower && n <= max_size;
    let mut out = Vec::new();
    for side in [&v.right, &v.left] {
        if fits(side.size()) && !out.contains(side) {
            out.push(side.clone());
        }
    }
    for n in (lower..=max_size.min(DEFAULT_ENUMERATION_CAP)).filter(|n| n % 2 == 0) {
        out.extend(enumerate_ortholattices(n)?);
    }
    let mut seeds = Vec::new();
    if v.base.size() == 2 {
        seeds.push(horizontal_sum(&v.left, &v.right)?.0);
    }
    if v.left.size() * v.right.size() <= max_size {
        seeds.push(product(&v.left, &v.right));
        seeds.push(product(&v.right, &v.left));
    }
    seeds.retain(|s| fits(s.size()) && s.size() > DEFAULT_ENUMERATION_CAP);
    seeds.sort_by_key(|s| s.size());
    out.extend(seeds);
    Ok(out)
}

/// The lexicographically first certificate into `target`, if any.
pub fn amalgam_try(v: &VFormation, target: &FiniteOrtholattice, require_super: bool) -> Result<Option<AmalgamCertificate>, Error> {
    let mut found: Option<(Vec<usize>, Vec<usize>)> = None;
    if let Some(mut outer) = Embeddings::new(&v.left, target, vec![None; v.left.size()]) {
        outer.run(0, &mut |psi1| {
            let mut fixed = vec![None; v.right.size()];
            for a in v.base.elements() {
                fixed[v.phi2[a]] = Some(psi1[v.phi1[a]]);
            }
            let Some(mut inner) = Embeddings::new(&v.right, target, fixed) else {
                return false;
            };
            inner.run(0, &mut |psi2| {
                if require_super && missing_interpolant(v, target, psi1, psi2).is_some() {
                    return false;
                }
                found = Some((psi1.to_vec(), psi2.to_vec()));
                true
            })
        });
    }
    let Some((psi1, psi2)) = found else { return Ok(None) };
    let cert = AmalgamCertificate { target: target.clone(), psi1, psi2, super_: require_super };
    let mut r = verify_amalgam(v, &cert)?;
    if require_super {
        r.absorb("", verify_super(v, &cert)?);
    }
    if let Some(bad) = r.violations.first() {
        return Err(Error::Internal(format!("amalgam search produced an invalid certificate: {bad}")));
    }
    Ok(Some(cert))
}

/// Bounded search; `None` means the bound was exhausted.
pub fn find_amalgam(v: &VFormation, max_size: usize, require_super: bool) -> Result<Option<AmalgamCertificate>, Error> {
    for t in amalgam_candidates(v, max_size, require_super)? {
        if let Some(c) = amalgam_try(v, &t, require_super)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Stage `n` of the chain: `A_n` with `f_n: A_{n−1} → A_n` (`A → A_0` at
/// stage 0), `g_n: A → A_n` and `h_n: B → A_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainStage {
    pub index: usize,
    pub algebra: FiniteOrtholattice,
    pub f: Vec<usize>,
    pub g: Vec<usize>,
    pub h: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub monadic: MonadicOrtholattice,
    pub stages: Vec<ChainStage>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainBuild {
    pub chain: Chain,
    /// Stage whose certificate search exhausted its bound.
    pub failed_at: Option<usize>,
}

impl Chain {
    /// The closed elements `B` and their inclusion into `A`.
    pub fn closed(&self) -> Result<(FiniteOrtholattice, Vec<usize>), Error> {
        closed_elements(&self.monadic)
    }

    /// The V-formation stage `n` amalgamates.
    pub fn formation(&self, n: usize) -> Result<VFormation, Error> {
        let (b, incl) = self.closed()?;
        let a = self.monadic.carrier().clone();
        if n == 0 {
            Ok(VFormation { base: b, left: a.clone(), right: a, phi1: incl.clone(), phi2: incl })
        } else {
            let prev = &self.stages[n - 1];
            Ok(VFormation { base: b, left: prev.algebra.clone(), right: a, phi1: prev.h.clone(), phi2: incl })
        }
    }

    /// `d_n = f_N ∘ … ∘ f_{n+1}: A_n → A_N`.
    pub fn colimit_map(&self, n: usize) -> Vec<usize> {
        let mut d: Vec<usize> = self.stages[n].algebra.elements().collect();
        for s in &self.stages[n + 1..] {
            d = d.iter().map(|&x| s.f[x]).collect();
        }
        d
    }
}

/// Builds `stages` stages, each from the given certificate finder.
pub fn build_chain_with(
    m: &MonadicOrtholattice,
    stages: usize,
    finder: &mut dyn FnMut(&VFormation) -> Result<Option<AmalgamCertificate>, Error>,
) -> Result<ChainBuild, Error> {
    if stages == 0 {
        return Err(Error::Malformed("a chain needs at least one stage".into()));
    }
    let mut chain = Chain { monadic: m.clone(), stages: Vec::new() };
    for n in 0..stages {
        let v = chain.formation(n)?;
        let Some(c) = finder(&v)? else {
            return Ok(ChainBuild { chain, failed_at: Some(n) });
        };
        let h = v.phi1.iter().map(|&x| c.psi1[x]).collect();
        chain.stages.push(ChainStage { index: n, algebra: c.target, f: c.psi1, g: c.psi2, h });
    }
    let r = check_chain(&chain)?;
    if let Some(bad) = r.violations.first() {
        return Err(Error::Internal(format!("assembled chain fails its identities: {bad}")));
    }
    Ok(ChainBuild { chain, failed_at: None })
}

/// Each stage from [`find_amalgam`] with super-amalgamation required.
pub fn build_chain(m: &MonadicOrtholattice, stages: usize, max_size: usize) -> Result<ChainBuild, Error> {
    build_chain_with(m, stages, &mut |v| find_amalgam(v, max_size, true))
}

/// Re-verifies every stage: the certificate (as an amalgam and a
/// super-amalgam of the stage's V-formation) and the identities
/// `h_n = f_n∘h_{n−1} = g_n|_B`, `h_0 = f_0|_B = g_0|_B`.
pub fn check_chain(chain: &Chain) -> Result<Report, Error> {
    let (b, incl) = chain.closed()?;
    let mut r = Report::new();
    for (n, s) in chain.stages.iter().enumerate() {
        let scope = format!("stage {n}");
        let v = chain.formation(n)?;
        if s.f.len() != v.left.size() || s.g.len() != v.right.size() || s.h.len() != b.size() {
            return Err(Error::Malformed(format!("{scope}: map sizes do not match the V-formation")));
        }
        let cert = AmalgamCertificate { target: s.algebra.clone(), psi1: s.f.clone(), psi2: s.g.clone(), super_: true };
        let mut sub = verify_amalgam(&v, &cert)?;
        sub.absorb("", verify_super(&v, &cert)?);
        let link: Vec<usize> = v.phi1.iter().map(|&x| s.f[x]).collect();
        if let Some(x) = b.elements().find(|&x| s.h[x] != link[x]) {
            sub.push(Law::ChainLink, vec![b.label(x)]);
        }
        if let Some(x) = b.elements().find(|&x| s.h[x] != s.g[incl[x]]) {
            sub.push(Law::ChainRestriction, vec![b.label(x)]);
        }
        r.absorb(&scope, sub);
    }
    Ok(r)
}

/// Finite-stage checks inside the final stage `A_N`, with `G(n, a) = d_n∘g_n(a)`:
/// (i) `G(m, b) = G(n, b)` for closed `b`; (ii) `G(k, ∃a)` bounds every
/// `G(n, a)` from above and (iii) lies below every upper bound of the form
/// `d_m(c)`; (iv) the duals for `∀`.
pub fn check_limit_lemmas(chain: &Chain) -> Result<Report, Error> {
    let count = chain.stages.len();
    if count < 2 {
        return Err(Error::Malformed("limit checks need at least two stages".into()));
    }
    let a = chain.monadic.carrier();
    let e = chain.monadic.exists();
    let (all, _) = forall_of(&chain.monadic);
    let top = &chain.stages[count - 1].algebra;
    let d: Vec<Vec<usize>> = (0..count).map(|n| chain.colimit_map(n)).collect();
    let g = |n: usize, x: usize| d[n][chain.stages[n].g[x]];
    let (_, incl) = chain.closed()?;
    let lab = |x: usize| a.label(x);
    let mut r = Report::new();

    'i: for &x in &incl {
        for m in 0..count {
            for n in 0..count {
                if g(m, x) != g(n, x) {
                    r.push(Law::Stabilization, vec![lab(x), m.to_string(), n.to_string()]);
                    break 'i;
                }
            }
        }
    }

    // candidates d_m(c) for c ∈ A_m, m ≤ N
    let images: Vec<(usize, usize, usize)> = (0..count)
        .flat_map(|m| chain.stages[m].algebra.elements().map(move |c| (m, c)))
        .map(|(m, c)| (m, c, d[m][c]))
        .collect();
    let stage_label = |m: usize, c: usize| format!("{}@{m}", chain.stages[m].algebra.label(c));

    let mut upper = false;
    let mut least = false;
    let mut lower = false;
    let mut greatest = false;
    for x in a.elements() {
        let values: Vec<usize> = (0..count).map(|n| g(n, x)).collect();
        for k in 0..count {
            let u = g(k, e.apply(x));
            if !upper {
                if let Some(n) = (0..count).find(|&n| !top.leq(values[n], u)) {
                    r.push(Law::UpperBound, vec![lab(x), k.to_string(), n.to_string()]);
                    upper = true;
                }
            }
            if !least {
                let bad = images
                    .iter()
                    .find(|&&(_, _, w)| values.iter().all(|&v| top.leq(v, w)) && !top.leq(u, w));
                if let Some(&(m, c, _)) = bad {
                    r.push(Law::LeastUpperBound, vec![lab(x), k.to_string(), stage_label(m, c)]);
                    least = true;
                }
            }
            let l = g(k, all[x]);
            if !lower {
                if let Some(n) = (0..count).find(|&n| !top.leq(l, values[n])) {
                    r.push(Law::LowerBound, vec![lab(x), k.to_string(), n.to_string()]);
                    lower = true;
                }
            }
            if !greatest {
                let bad = images
                    .iter()
                    .find(|&&(_, _, w)| values.iter().all(|&v| top.leq(w, v)) && !top.leq(w, l));
                if let Some(&(m, c, _)) = bad {
                    r.push(Law::GreatestLowerBound, vec![lab(x), k.to_string(), stage_label(m, c)]);
                    greatest = true;
                }
            }
        }
    }
    Ok(r)
}

/// Maps `a ↦ (n ↦ i∘d_n∘g_n(a))` into the full functional monadic algebra
/// over the MacNeille completion of `A_N` with the stage indices as points,
/// and checks it is an embedding with `f(∃a) = ◇f(a)`.
pub fn functional_witness_from_chain(chain: &Chain) -> Result<Report, Error> {
    let count = chain.stages.len();
    if count == 0 {
        return Err(Error::Malformed("empty chain".into()));
    }
    let a = chain.monadic.carrier();
    let e = chain.monadic.exists();
    let top = &chain.stages[count - 1].algebra;
    let comp = macneille(top)?;
    let d: Vec<Vec<usize>> = (0..count).map(|n| chain.colimit_map(n)).collect();
    let f = FullFunctionalAlgebra::new(comp.completion.clone(), count, Kind::Monadic, 0)?;
    if f.carrier_size().is_none() {
        return Err(Error::CapExceeded { what: "functional carrier", size: usize::MAX, cap: usize::MAX });
    }
    let tables: Vec<Vec<usize>> = a
        .elements()
        .map(|x| (0..count).map(|n| comp.embed[d[n][chain.stages[n].g[x]]]).collect())
        .collect();
    let map: Vec<usize> = tables.iter().map(|t| f.encode(t)).collect();
    let mut r = Report::new();
    r.absorb("f", check_map(a, &f, &map, true)?);
    for x in a.elements() {
        if tables[e.apply(x)] != f.diamond(&tables[x])? {
            r.push(Law::WitnessQuantifier, vec![a.label(x)]);
            break;
        }
    }
    let shown: Vec<String> = a.elements().map(|x| format!("{}↦{}", a.label(x), f.label(map[x]))).collect();
    r.note("f", shown.join(" "));
    Ok(r)
}
