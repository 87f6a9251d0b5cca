//! Canonical forms and isomorphism testing.
//!
//! Any isomorphism of ortholattices fixes the bounds and maps complementary
//! pairs `{x, x^⊥}` onto complementary pairs, so relabelings are searched over
//! pair permutations and orientations only, restricted to cells of equal
//! order invariants.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::library::pair_name;
use super::{Candidate, FiniteOrtholattice, OrthoHomomorphism, OrthoOps};
use crate::error::Error;

/// Largest number of complementary pairs (`(size − 2) / 2`) a canonical form is computed for.
pub const MAX_CANONICAL_PAIRS: usize = 7;

type Invariant = (usize, usize, usize, usize);

fn invariants(l: &FiniteOrtholattice) -> Vec<Invariant> {
    let n = l.size();
    let d: Vec<usize> = (0..n).map(|a| l.down(a).count_ones(..)).collect();
    let u: Vec<usize> = (0..n).map(|a| l.up(a).count_ones(..)).collect();
    (0..n)
        .map(|a| {
            let ds: usize = l.down(a).ones().map(|b| d[b]).sum();
            let us: usize = l.up(a).ones().map(|b| u[b]).sum();
            (d[a], u[a], ds, us)
        })
        .collect()
}

/// Canonical code of an ortholattice: equal codes iff isomorphic.
///
/// Ordered by size, then lexicographically by the relation bits of the
/// middle elements in canonical position order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub size: usize,
    pub code: Vec<bool>,
    /// `perm[new] = old`: canonical position to original element.
    pub perm: Vec<usize>,
}

impl CanonicalForm {
    /// The canonically labelled algebra: `0`, `a`, `a'`, `b`, `b'`, …, `1`.
    pub fn lattice(&self, l: &FiniteOrtholattice) -> FiniteOrtholattice {
        let n = self.size;
        let mut inv = vec![0; n];
        for (new, &old) in self.perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut names = vec![alloc::string::String::from("0")];
        for k in 0..(n.saturating_sub(2)) / 2 {
            let b = pair_name(k);
            names.push(b.clone());
            names.push(alloc::format!("{b}'"));
        }
        if n > 1 {
            names.push("1".into());
        }
        let rows = (0..n)
            .map(|i| {
                let mut s = fixedbitset::FixedBitSet::with_capacity(n);
                for j in 0..n {
                    s.set(j, l.leq(self.perm[i], self.perm[j]));
                }
                s
            })
            .collect();
        let ortho = (0..n).map(|i| inv[l.ortho(self.perm[i])]).collect();
        FiniteOrtholattice::new(Candidate::from_rows(names, rows, ortho).expect("relabel"))
            .expect("relabeling preserves the laws")
    }
}

struct Search<'a> {
    l: &'a FiniteOrtholattice,
    /// pairs as (first, second) in default orientation, sorted by key
    pairs: Vec<(usize, usize)>,
    ambiguous: Vec<bool>,
    cell_of: Vec<usize>,
    used: Vec<bool>,
    placed: Vec<usize>,
    code: Vec<bool>,
    best: Option<(Vec<bool>, Vec<usize>)>,
}

impl Search<'_> {
    fn chunk(&self, x: usize, y: usize) -> Vec<bool> {
        let mut out = Vec::with_capacity(self.placed.len() * 4);
        for &q in &self.placed {
            out.push(self.l.leq(q, x));
            out.push(self.l.leq(x, q));
            out.push(self.l.leq(q, y));
            out.push(self.l.leq(y, q));
        }
        out
    }

    /// `tight`: the code so far equals the best code's prefix.
    fn go(&mut self, pos: usize, tight: bool) {
        let p = self.pairs.len();
        if pos == p {
            let better = match &self.best {
                None => true,
                Some((b, _)) => self.code < *b,
            };
            if better {
                self.best = Some((self.code.clone(), self.placed.clone()));
            }
            return;
        }
        let cell = self.cell_of[pos];
        for idx in 0..p {
            if self.used[idx] || self.cell_of[idx] != cell {
                continue;
            }
            let (x, y) = self.pairs[idx];
            let orients: &[(usize, usize)] = if self.ambiguous[idx] { &[(x, y), (y, x)] } else { &[(x, y)] };
            for &(x, y) in orients {
                let chunk = self.chunk(x, y);
                let start = self.code.len();
                let mut still_tight = tight;
                if tight {
                    if let Some((best, _)) = &self.best {
                        match chunk.as_slice().cmp(&best[start..start + chunk.len()]) {
                            Ordering::Greater => continue,
                            Ordering::Less => still_tight = false,
                            Ordering::Equal => {}
                        }
                    } else {
                        still_tight = false;
                    }
                }
                self.used[idx] = true;
                self.placed.push(x);
                self.placed.push(y);
                self.code.extend_from_slice(&chunk);
                self.go(pos + 1, still_tight);
                self.code.truncate(start);
                self.placed.truncate(self.placed.len() - 2);
                self.used[idx] = false;
            }
        }
    }
}

/// Computes the canonical form; refuses algebras with more than
/// [`MAX_CANONICAL_PAIRS`] complementary pairs.
pub fn canonical_form(l: &FiniteOrtholattice) -> Result<CanonicalForm, Error> {
    let n = l.size();
    let p = n.saturating_sub(2) / 2;
    if p > MAX_CANONICAL_PAIRS {
        return Err(Error::CapExceeded {
            what: "canonical form input",
            size: n,
            cap: 2 * MAX_CANONICAL_PAIRS + 2,
        });
    }
    let inv = invariants(l);
    let mut pairs = Vec::with_capacity(p);
    for a in l.elements() {
        if a == l.bottom() || a == l.top() {
            continue;
        }
        let b = l.ortho(a);
        if a < b {
            pairs.push(if inv[a] <= inv[b] { (a, b) } else { (b, a) });
        }
    }
    pairs.sort_by_key(|&(x, y)| (inv[x], inv[y]));
    let mut cell_of = vec![0; p];
    for i in 1..p {
        let (a, b) = pairs[i - 1];
        let (c, d) = pairs[i];
        cell_of[i] = if (inv[a], inv[b]) == (inv[c], inv[d]) { cell_of[i - 1] } else { i };
    }
    let ambiguous = pairs.iter().map(|&(x, y)| inv[x] == inv[y]).collect();
    let mut s = Search {
        l,
        pairs,
        ambiguous,
        cell_of,
        used: vec![false; p],
        placed: Vec::with_capacity(2 * p),
        code: Vec::new(),
        best: None,
    };
    s.go(0, true);
    let (code, placed) = s.best.expect("at least one relabeling");
    let mut perm = Vec::with_capacity(n);
    perm.push(l.bottom());
    perm.extend(placed);
    if n > 1 {
        perm.push(l.top());
    }
    Ok(CanonicalForm { size: n, code, perm })
}

/// Finds an isomorphism `l1 → l2` if one exists.
pub fn is_isomorphic<'a>(
    l1: &'a FiniteOrtholattice,
    l2: &'a FiniteOrtholattice,
) -> Option<OrthoHomomorphism<'a>> {
    let n = l1.size();
    if n != l2.size() {
        return None;
    }
    let i1 = invariants(l1);
    let i2 = invariants(l2);
    let (mut s1, mut s2) = (i1.clone(), i2.clone());
    s1.sort_unstable();
    s2.sort_unstable();
    if s1 != s2 {
        return None;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    map[l1.bottom()] = l2.bottom();
    map[l1.top()] = l2.top();
    used[l2.bottom()] = true;
    used[l2.top()] = true;
    let order: Vec<usize> = l1
        .elements()
        .filter(|&a| a != l1.bottom() && a != l1.top() && a < l1.ortho(a))
        .collect();

    fn consistent(
        l1: &FiniteOrtholattice,
        l2: &FiniteOrtholattice,
        map: &[usize],
        x: usize,
    ) -> bool {
        let y = map[x];
        map.iter().enumerate().all(|(z, &w)| {
            w == usize::MAX || (l1.leq(x, z) == l2.leq(y, w) && l1.leq(z, x) == l2.leq(w, y))
        })
    }

    fn go(
        k: usize,
        order: &[usize],
        l1: &FiniteOrtholattice,
        l2: &FiniteOrtholattice,
        i1: &[Invariant],
        i2: &[Invariant],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let x = order[k];
        let xo = l1.ortho(x);
        for y in l2.elements() {
            let yo = l2.ortho(y);
            if used[y] || used[yo] || i1[x] != i2[y] || i1[xo] != i2[yo] {
                continue;
            }
            map[x] = y;
            map[xo] = yo;
            used[y] = true;
            used[yo] = true;
            if consistent(l1, l2, map, x) && consistent(l1, l2, map, xo)
                && go(k + 1, order, l1, l2, i1, i2, map, used)
            {
                return true;
            }
            map[x] = usize::MAX;
            map[xo] = usize::MAX;
            used[y] = false;
            used[yo] = false;
        }
        false
    }

    if go(0, &order, l1, l2, &i1, &i2, &mut map, &mut used) {
        Some(OrthoHomomorphism::new(l1, l2, map))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ortho::check_homomorphism;
    use crate::ortho::library::*;
    use alloc::string::{String, ToString};

    #[test]
    fn relabeled_benzene_is_isomorphic() {
        let o6 = benzene();
        let relabeled = o6
            .renamed(["z", "p", "q", "r", "s", "t"].iter().map(|s| s.to_string()).collect())
            .unwrap();
        let iso = is_isomorphic(&o6, &relabeled).expect("relabeling");
        assert!(check_homomorphism(&iso, true).unwrap().is_pass());
    }

    #[test]
    fn benzene_and_mo2_differ() {
        assert!(is_isomorphic(&benzene(), &mo2()).is_none());
        assert!(is_isomorphic(&chain2(), &boolean4()).is_none());
        assert_ne!(canonical_form(&benzene()).unwrap().code, canonical_form(&mo2()).unwrap().code);
    }

    #[test]
    fn benzene_iso_oracle_over_all_bijections() {
        // independent oracle: exhaust all 6! bijections O6 -> MO2
        let (o6, m) = (benzene(), mo2());
        let mut perm: Vec<usize> = (0..6).collect();
        let mut found = false;
        permutations(&mut perm, 0, &mut |p| {
            let ok = (0..6).all(|a| (0..6).all(|b| o6.leq(a, b) == m.leq(p[a], p[b])))
                && (0..6).all(|a| p[o6.ortho(a)] == m.ortho(p[a]));
            found |= ok;
        });
        assert!(!found);
    }

    fn permutations(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permutations(v, k + 1, f);
            v.swap(k, i);
        }
    }

    #[test]
    fn canonical_lattice_is_isomorphic_and_stable() {
        for l in [chain2(), boolean4(), benzene(), mo2(), boolean(3), mo(4)] {
            let cf = canonical_form(&l).unwrap();
            let c = cf.lattice(&l);
            assert!(is_isomorphic(&l, &c).is_some());
            let again = canonical_form(&c).unwrap();
            assert_eq!(cf.code, again.code);
            assert_eq!(again.lattice(&c), c);
            let names: Vec<String> = c.names().to_vec();
            assert_eq!(names.first().unwrap(), "0");
            assert_eq!(names.last().unwrap(), "1");
        }
    }

    #[test]
    fn canonical_form_cap() {
        assert!(canonical_form(&mo(8)).is_err());
    }
}
