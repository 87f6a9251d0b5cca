//! Named small ortholattices and the two standard constructions used to seed
//! amalgamation search.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Candidate, FiniteOrtholattice, OrthoOps};
use crate::error::Error;

/// The two-element chain `0 < 1`.
pub fn chain2() -> FiniteOrtholattice {
    FiniteOrtholattice::from_named(&["0", "1"], &[("0", "1")], &[("0", "1"), ("1", "0")])
        .expect("C2")
}

/// The four-element Boolean algebra on `0, a, a', 1`.
pub fn boolean4() -> FiniteOrtholattice {
    FiniteOrtholattice::from_named(
        &["0", "a", "a'", "1"],
        &[("0", "a"), ("0", "a'"), ("a", "1"), ("a'", "1")],
        &[("0", "1"), ("1", "0"), ("a", "a'"), ("a'", "a")],
    )
    .expect("B4")
}

/// The benzene ring O6: `0 < a < b' < 1` and `0 < b < a' < 1`.
pub fn benzene() -> FiniteOrtholattice {
    FiniteOrtholattice::from_named(
        &["0", "a", "b", "a'", "b'", "1"],
        &[("0", "a"), ("a", "b'"), ("b'", "1"), ("0", "b"), ("b", "a'"), ("a'", "1")],
        &[("0", "1"), ("1", "0"), ("a", "a'"), ("a'", "a"), ("b", "b'"), ("b'", "b")],
    )
    .expect("O6")
}

/// MO2: four pairwise incomparable atoms `a, a', b, b'`.
pub fn mo2() -> FiniteOrtholattice {
    mo(2)
}

/// MO_k: the horizontal sum of `k` copies of B4.
pub fn mo(k: usize) -> FiniteOrtholattice {
    let mut names: Vec<String> = Vec::with_capacity(2 * k + 2);
    names.push("0".into());
    for i in 0..k {
        let base = pair_name(i);
        names.push(base.clone());
        names.push(format!("{base}'"));
    }
    names.push("1".into());
    let top = names.len() - 1;
    let mut pairs = Vec::new();
    let mut ortho = alloc::vec![0; names.len()];
    ortho[0] = top;
    ortho[top] = 0;
    for i in 1..top {
        pairs.push((0, i));
        pairs.push((i, top));
        ortho[i] = if i % 2 == 1 { i + 1 } else { i - 1 };
    }
    FiniteOrtholattice::new(Candidate::from_relation(names, &pairs, ortho).expect("MO_k"))
        .expect("MO_k")
}

/// The Boolean algebra with `atoms` atoms; elements are named by their atom
/// sets, e.g. `{0,2}`.
pub fn boolean(atoms: usize) -> FiniteOrtholattice {
    let n = 1usize << atoms;
    let full = n - 1;
    let names: Vec<String> = (0..n)
        .map(|m| {
            let parts: Vec<String> = (0..atoms).filter(|i| m >> i & 1 == 1).map(|i| format!("{i}")).collect();
            format!("{{{}}}", parts.join(","))
        })
        .collect();
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a & b == a {
                pairs.push((a, b));
            }
        }
    }
    let ortho = (0..n).map(|m| full ^ m).collect();
    FiniteOrtholattice::new(Candidate::from_relation(names, &pairs, ortho).expect("boolean"))
        .expect("boolean")
}

/// Identifier for the `i`-th complemented pair: `a, b, …, z, x26, x27, …`.
pub fn pair_name(i: usize) -> String {
    if i < 26 {
        String::from((b'a' + i as u8) as char)
    } else {
        format!("x{i}")
    }
}

/// Direct product with componentwise operations; elements named `(x,y)` in
/// row-major order.
pub fn product(l: &FiniteOrtholattice, r: &FiniteOrtholattice) -> FiniteOrtholattice {
    let (n, m) = (l.size(), r.size());
    let names = (0..n * m)
        .map(|i| format!("({},{})", l.name(i / m), r.name(i % m)))
        .collect();
    let mut rows = Vec::with_capacity(n * m);
    for i in 0..n * m {
        let mut s = fixedbitset::FixedBitSet::with_capacity(n * m);
        for j in 0..n * m {
            s.set(j, l.leq(i / m, j / m) && r.leq(i % m, j % m));
        }
        rows.push(s);
    }
    let ortho = (0..n * m)
        .map(|i| l.ortho(i / m) * m + r.ortho(i % m))
        .collect();
    FiniteOrtholattice::new(Candidate::from_rows(names, rows, ortho).expect("product"))
        .expect("product of ortholattices")
}

/// Horizontal sum: the two algebras glued at their bounds, with every other
/// element of one incomparable to every other element of the other.
///
/// Elements: `0`, the non-bound elements of `l` as `1:x`, those of `r` as
/// `2:y`, then `1`. Returns the algebra and the two inclusions.
pub fn horizontal_sum(
    l: &FiniteOrtholattice,
    r: &FiniteOrtholattice,
) -> Result<(FiniteOrtholattice, Vec<usize>, Vec<usize>), Error> {
    let mut names: Vec<String> = alloc::vec!["0".into()];
    let mut left = alloc::vec![0; l.size()];
    let mut right = alloc::vec![0; r.size()];
    for a in l.elements().filter(|&a| a != l.bottom() && a != l.top()) {
        left[a] = names.len();
        names.push(format!("1:{}", l.name(a)));
    }
    for a in r.elements().filter(|&a| a != r.bottom() && a != r.top()) {
        right[a] = names.len();
        names.push(format!("2:{}", r.name(a)));
    }
    let top = names.len();
    names.push("1".into());
    left[l.top()] = top;
    right[r.top()] = top;
    let mut pairs = Vec::new();
    let mut ortho = alloc::vec![0; names.len()];
    ortho[0] = top;
    ortho[top] = 0;
    for i in 1..top {
        pairs.push((0, i));
        pairs.push((i, top));
    }
    for (src, map) in [(l, &left), (r, &right)] {
        for a in src.elements() {
            for b in src.elements() {
                if src.leq(a, b) {
                    pairs.push((map[a], map[b]));
                }
            }
            ortho[map[a]] = map[src.ortho(a)];
        }
    }
    let sum = FiniteOrtholattice::new(Candidate::from_relation(names, &pairs, ortho)?)?;
    Ok((sum, left, right))
}
