//! Enumeration of ortholattices of a given size, one per isomorphism class.
//!
//! The complement is fixed-point free, so an ortholattice of size `n` has
//! `0`, `1` and `(n − 2) / 2` complementary pairs. We fix the pairing
//! `x ↔ x ^ 1` on the middle elements and search strict orders on them that
//! are closed under `x < y ⇒ y^⊥ < x^⊥`: each unordered pair `{x, y}` and
//! its mirror `{x^⊥, y^⊥}` take one of three states together. Transitivity
//! and the complement laws prune the search; survivors are lattice-checked
//! and deduplicated by canonical form.

use alloc::collections::{btree_map::Entry, BTreeMap};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::canon::{canonical_form, CanonicalForm};
use super::{Candidate, FiniteOrtholattice};
use crate::error::Error;

pub const DEFAULT_ENUMERATION_CAP: usize = 10;

/// Number of leading orbits whose states identify a shard branch.
const SHARD_DEPTH: usize = 3;

#[derive(Clone, Copy)]
enum State {
    Less,
    Greater,
    Incomparable,
}

const STATES: [State; 3] = [State::Less, State::Greater, State::Incomparable];

struct Dfs {
    m: usize,
    orbits: Vec<(usize, usize)>,
    decided: Vec<bool>,
    less: Vec<bool>,
    shard: usize,
    shards: usize,
    found: BTreeMap<(usize, Vec<bool>), (CanonicalForm, FiniteOrtholattice)>,
    n: usize,
}

impl Dfs {
    #[inline]
    fn lt(&self, u: usize, v: usize) -> bool {
        self.less[u * self.m + v]
    }
    #[inline]
    fn dec(&self, u: usize, v: usize) -> bool {
        self.decided[u * self.m + v]
    }

    fn set(&mut self, u: usize, v: usize, decided: bool, less: bool) {
        self.decided[u * self.m + v] = decided;
        self.less[u * self.m + v] = less;
    }

    fn ordered_pairs(x: usize, y: usize) -> [(usize, usize); 4] {
        [(x, y), (y, x), (x ^ 1, y ^ 1), (y ^ 1, x ^ 1)]
    }

    fn apply(&mut self, (x, y): (usize, usize), s: State) {
        for (u, v) in Self::ordered_pairs(x, y) {
            self.set(u, v, true, false);
        }
        match s {
            State::Less => {
                self.set(x, y, true, true);
                self.set(y ^ 1, x ^ 1, true, true);
            }
            State::Greater => {
                self.set(y, x, true, true);
                self.set(x ^ 1, y ^ 1, true, true);
            }
            State::Incomparable => {}
        }
    }

    fn undo(&mut self, (x, y): (usize, usize)) {
        for (u, v) in Self::ordered_pairs(x, y) {
            self.set(u, v, false, false);
        }
    }

    fn consistent(&self, (x, y): (usize, usize)) -> bool {
        let m = self.m;
        for (u, v) in Self::ordered_pairs(x, y) {
            if self.lt(u, v) {
                // u and u^⊥ below v, or u below v and v^⊥, breaks the complement laws
                if self.lt(u ^ 1, v) || self.lt(u, v ^ 1) {
                    return false;
                }
                for w in 0..m {
                    if self.lt(v, w) && self.dec(u, w) && !self.lt(u, w) {
                        return false;
                    }
                    if self.lt(w, u) && self.dec(w, v) && !self.lt(w, v) {
                        return false;
                    }
                }
            } else {
                for w in 0..m {
                    if self.lt(u, w) && self.lt(w, v) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn run(&mut self, k: usize, branch: usize) {
        if k == SHARD_DEPTH.min(self.orbits.len()) && branch % self.shards != self.shard {
            return;
        }
        if k == self.orbits.len() {
            self.leaf();
            return;
        }
        let orbit = self.orbits[k];
        for (i, s) in STATES.iter().enumerate() {
            self.apply(orbit, *s);
            if self.consistent(orbit) {
                let b = if k < SHARD_DEPTH { branch * 3 + i } else { branch };
                self.run(k + 1, b);
            }
            self.undo(orbit);
        }
    }

    fn leaf(&mut self) {
        let n = self.n;
        let m = self.m;
        let top = n - 1;
        // element 0 is bottom, middle x is x + 1, top is n - 1
        let mut up = vec![0u32; n];
        up[0] = (1u32 << n) - 1;
        up[top] = 1 << top;
        for x in 0..m {
            let mut row = 1 << (x + 1) | 1 << top;
            for y in 0..m {
                if self.lt(x, y) {
                    row |= 1 << (y + 1);
                }
            }
            up[x + 1] = row;
        }
        let mut down = vec![0u32; n];
        for a in 0..n {
            for b in 0..n {
                if up[a] >> b & 1 == 1 {
                    down[b] |= 1 << a;
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                let lower = down[a] & down[b];
                let upper = up[a] & up[b];
                if !down.contains(&lower) || !up.contains(&upper) {
                    return;
                }
            }
        }
        for x in 0..m {
            let (a, b) = (x + 1, (x ^ 1) + 1);
            if down[a] & down[b] != 1 || up[a] & up[b] != 1 << top {
                return;
            }
        }
        let names: Vec<String> = (0..n).map(|i| alloc::format!("{i}")).collect();
        let rows = up
            .iter()
            .map(|&r| {
                let mut s = fixedbitset::FixedBitSet::with_capacity(n);
                for j in 0..n {
                    s.set(j, r >> j & 1 == 1);
                }
                s
            })
            .collect();
        let mut ortho = vec![0; n];
        ortho[0] = top;
        ortho[top] = 0;
        for x in 0..m {
            ortho[x + 1] = (x ^ 1) + 1;
        }
        let cand = Candidate::from_rows(names, rows, ortho).expect("well-formed");
        let l = FiniteOrtholattice::new(cand).expect("checked lattice with complements");
        let cf = canonical_form(&l).expect("within canonical cap");
        let key = (cf.size, cf.code.clone());
        if let Entry::Vacant(slot) = self.found.entry(key) {
            let canon = cf.lattice(&l);
            slot.insert((cf, canon));
        }
    }
}

/// One shard of the enumeration: the classes found below the search branches
/// assigned to `shard` (out of `shards`). Merging all shards with
/// [`merge_shards`] gives the full, canonically ordered result.
pub fn enumerate_shard(
    n: usize,
    shard: usize,
    shards: usize,
    cap: usize,
) -> Result<Vec<(CanonicalForm, FiniteOrtholattice)>, Error> {
    if n < 2 {
        return Err(Error::Malformed(alloc::format!("ortholattice size must be at least 2, got {n}")));
    }
    if n > cap {
        return Err(Error::CapExceeded { what: "enumeration size", size: n, cap });
    }
    if shards == 0 || shard >= shards {
        return Err(Error::Malformed("invalid shard".into()));
    }
    if n % 2 == 1 {
        return Ok(Vec::new());
    }
    let m = n - 2;
    let mut orbits = Vec::new();
    for x in 0..m {
        for y in x + 1..m {
            if y == x ^ 1 {
                continue;
            }
            let mirror = ((x ^ 1).min(y ^ 1), (x ^ 1).max(y ^ 1));
            if (x, y) < mirror {
                orbits.push((x, y));
            }
        }
    }
    let mut dfs = Dfs {
        m,
        orbits,
        decided: vec![false; m * m],
        less: vec![false; m * m],
        shard,
        shards,
        found: BTreeMap::new(),
        n,
    };
    for x in 0..m {
        dfs.set(x, x ^ 1, true, false);
        dfs.set(x, x, true, false);
    }
    if dfs.orbits.is_empty() && shard != 0 {
        return Ok(Vec::new());
    }
    dfs.run(0, 0);
    Ok(dfs.found.into_values().collect())
}

/// Deduplicates shard outputs and orders them by canonical form.
pub fn merge_shards<I>(parts: I) -> Vec<FiniteOrtholattice>
where
    I: IntoIterator<Item = Vec<(CanonicalForm, FiniteOrtholattice)>>,
{
    let mut all = BTreeMap::new();
    for part in parts {
        for (cf, l) in part {
            all.entry((cf.size, cf.code)).or_insert(l);
        }
    }
    all.into_values().collect()
}

/// All ortholattices of size `n` up to isomorphism, canonically labelled and
/// in ascending canonical order. Sizes above `cap` are refused.
pub fn enumerate_ortholattices_with_cap(n: usize, cap: usize) -> Result<Vec<FiniteOrtholattice>, Error> {
    Ok(merge_shards([enumerate_shard(n, 0, 1, cap)?]))
}

pub fn enumerate_ortholattices(n: usize) -> Result<Vec<FiniteOrtholattice>, Error> {
    enumerate_ortholattices_with_cap(n, DEFAULT_ENUMERATION_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ortho::library::*;
    use crate::ortho::{check_ortholattice, is_isomorphic};

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_ortholattices(2).unwrap().len(), 1);
        assert_eq!(enumerate_ortholattices(3).unwrap().len(), 0);
        assert_eq!(enumerate_ortholattices(4).unwrap().len(), 1);
        let six = enumerate_ortholattices(6).unwrap();
        assert_eq!(six.len(), 2);
        assert!(six.iter().any(|l| is_isomorphic(l, &benzene()).is_some()));
        assert!(six.iter().any(|l| is_isomorphic(l, &mo2()).is_some()));
    }

    #[test]
    fn refusals() {
        assert!(matches!(enumerate_ortholattices(12), Err(Error::CapExceeded { .. })));
        assert!(enumerate_ortholattices(1).is_err());
    }

    #[test]
    fn shards_merge_to_whole() {
        let whole = enumerate_ortholattices(8).unwrap();
        let parts: Vec<_> = (0..4).map(|s| enumerate_shard(8, s, 4, 10).unwrap()).collect();
        assert_eq!(merge_shards(parts), whole);
    }

    #[test]
    fn emitted_algebras_pass_and_are_distinct() {
        for n in [2, 4, 6, 8] {
            let all = enumerate_ortholattices(n).unwrap();
            for (i, a) in all.iter().enumerate() {
                assert!(check_ortholattice(&a.to_candidate()).is_pass());
                for b in &all[i + 1..] {
                    assert!(is_isomorphic(a, b).is_none());
                }
            }
        }
    }
}
