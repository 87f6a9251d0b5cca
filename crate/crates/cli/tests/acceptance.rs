//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the lines are always printed.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use olkit_core::amalgam::{
    build_chain, check_limit_lemmas, find_amalgam, functional_witness_from_chain, verify_amalgam, verify_super,
    AmalgamCertificate, VFormation,
};
use olkit_core::frames::{check_completion, macneille};
use olkit_core::functional::{embed_search, verify_embedding, FullFunctionalAlgebra, Kind, Operator};
use olkit_core::monadic::{
    check_family, check_quantifier, closed_elements, enumerate_quantifiers, DeltaFreeCylindric, MonadicOrtholattice,
    DEFAULT_QUANTIFIER_CAP,
};
use olkit_core::ortho::{check_ortholattice, enumerate_ortholattices, is_isomorphic, library};
use olkit_core::polyadic::{cyl_to_pol, nabla_eval, roundtrip_check, IndexSet, IndexUniverse, Universe};
use olkit_core::{Candidate, FiniteOrtholattice, OrthoOps};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lattices_up_to(n: usize) -> Vec<FiniteOrtholattice> {
    (2..=n).step_by(2).flat_map(|k| enumerate_ortholattices(k).unwrap()).collect()
}

fn names(l: &FiniteOrtholattice) -> String {
    l.names().join(" ")
}

// ---- independent oracles ----

/// Ortholattice axioms evaluated directly from the relation and the map.
fn oracle_is_ortholattice(c: &Candidate) -> bool {
    let n = c.len();
    let le = |a: usize, b: usize| c.leq(a, b);
    for a in 0..n {
        if !le(a, a) {
            return false;
        }
        for b in 0..n {
            if a != b && le(a, b) && le(b, a) {
                return false;
            }
            for d in 0..n {
                if le(a, b) && le(b, d) && !le(a, d) {
                    return false;
                }
            }
        }
    }
    let least = |set: &[usize]| set.iter().copied().find(|&u| set.iter().all(|&v| le(u, v)));
    let greatest = |set: &[usize]| set.iter().copied().find(|&u| set.iter().all(|&v| le(v, u)));
    let all: Vec<usize> = (0..n).collect();
    let (Some(bot), Some(top)) = (least(&all), greatest(&all)) else { return false };
    let join = |a: usize, b: usize| {
        let ub: Vec<usize> = (0..n).filter(|&u| le(a, u) && le(b, u)).collect();
        least(&ub)
    };
    let meet = |a: usize, b: usize| {
        let lb: Vec<usize> = (0..n).filter(|&u| le(u, a) && le(u, b)).collect();
        greatest(&lb)
    };
    for a in 0..n {
        for b in 0..n {
            if join(a, b).is_none() || meet(a, b).is_none() {
                return false;
            }
            if le(a, b) && !le(c.ortho(b), c.ortho(a)) {
                return false;
            }
        }
        let o = c.ortho(a);
        if c.ortho(o) != a || meet(a, o) != Some(bot) || join(a, o) != Some(top) {
            return false;
        }
    }
    true
}

/// Quantifier axioms on a finite ortholattice, straight from the definition.
fn oracle_is_quantifier(l: &FiniteOrtholattice, q: &[usize]) -> bool {
    let n = l.size();
    if q[l.bottom()] != l.bottom() {
        return false;
    }
    for a in 0..n {
        if !l.leq(a, q[a]) || q[q[a]] != q[a] || q[l.ortho(q[a])] != l.ortho(q[a]) {
            return false;
        }
        for b in 0..n {
            if q[l.join(a, b)] != l.join(q[a], q[b]) {
                return false;
            }
        }
    }
    true
}

/// `◇f` as the constant table of the join of all values.
fn oracle_diamond(base: &FiniteOrtholattice, f: &[usize]) -> Vec<usize> {
    let j = f.iter().fold(base.bottom(), |acc, &v| base.join(acc, v));
    vec![j; f.len()]
}

/// `∇̂_J f` at `p`: the join of `f(q)` over every `q` agreeing with `p` off `J`.
fn oracle_nabla(fa: &FullFunctionalAlgebra, f: &[usize], j: &[u32]) -> Vec<usize> {
    let base = fa.base();
    (0..f.len())
        .map(|p| {
            let tp = fa.tuple(p);
            (0..f.len())
                .filter(|&q| {
                    let tq = fa.tuple(q);
                    (0..tp.len()).all(|i| j.contains(&(i as u32)) || tp[i] == tq[i])
                })
                .fold(base.bottom(), |acc, q| base.join(acc, f[q]))
        })
        .collect()
}

// ---- criteria ----

fn criterion_1() -> Outcome {
    let all = lattices_up_to(8);
    for l in &all {
        let r = check_ortholattice(&l.to_candidate());
        ensure(r.is_pass(), || format!("enumerated lattice [{}] rejected: {:?}", names(l), r.violations.first()))?;
    }
    let mut mutations = 0;
    for l in all.iter().filter(|l| l.size() <= 6) {
        let base = l.to_candidate();
        let n = base.len();
        let mut variants = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let mut c = base.clone();
                c.flip_leq(a, b);
                variants.push((format!("leq({a},{b}) flipped"), c));
            }
            for v in (0..n).filter(|&v| v != base.ortho(a)) {
                let mut c = base.clone();
                c.set_ortho(a, v);
                variants.push((format!("ortho({a}) = {v}"), c));
            }
        }
        for (what, c) in variants {
            mutations += 1;
            let r = check_ortholattice(&c);
            ensure(!r.is_pass(), || format!("[{}] with {what} accepted", names(l)))?;
            ensure(!oracle_is_ortholattice(&c), || format!("oracle accepts [{}] with {what}", names(l)))?;
            ensure(r.violations.iter().any(|v| !v.witness.is_empty()), || {
                format!("[{}] with {what}: no violation carries a witness", names(l))
            })?;
        }
    }
    Ok(format!("{} lattices pass, {mutations} mutations rejected with witnesses", all.len()))
}

fn criterion_2() -> Outcome {
    let all = lattices_up_to(8);
    for l in &all {
        let c = macneille(l).map_err(|e| e.to_string())?;
        ensure(is_isomorphic(&c.completion, l).is_some(), || format!("completion of [{}] not isomorphic", names(l)))?;
        let r = check_completion(&c);
        ensure(r.is_pass(), || format!("completion of [{}]: {:?}", names(l), r.violations.first()))?;
    }
    Ok(format!("{} completions isomorphic, dense and regular", all.len()))
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    for base in lattices_up_to(6) {
        for x in 1..=3 {
            let f = FullFunctionalAlgebra::new(base.clone(), x, Kind::Monadic, 0).map_err(|e| e.to_string())?;
            let map = f.operator_map(&Operator::Diamond).map_err(|e| e.to_string())?;
            let n = map.len();
            let tables: Vec<Vec<usize>> = (0..n).map(|t| f.decode(t)).collect();
            for (t, table) in tables.iter().enumerate() {
                ensure(tables[map[t]] == oracle_diamond(&base, table), || format!("◇ differs on {table:?}"))?;
            }
            let r = check_quantifier(&f, &map).map_err(|e| e.to_string())?;
            ensure(r.is_pass(), || format!("[{}]^{x}: {:?}", names(&base), r.violations.first()))?;
            let ortho = |t: usize| f.encode(&tables[t].iter().map(|&v| base.ortho(v)).collect::<Vec<_>>());
            for t in 0..n {
                ensure(map[ortho(map[t])] == ortho(map[t]), || format!("◇−◇f ≠ −◇f at {:?}", tables[t]))?;
                ensure(map[map[t]] == map[t], || "◇◇f ≠ ◇f".into())?;
            }
            checked += n;
        }
    }
    Ok(format!("◇ satisfies the quantifier axioms on {checked} tables"))
}

fn criterion_4() -> Outcome {
    let subsets: [&[u32]; 4] = [&[], &[0], &[1], &[0, 1]];
    let mut checked = 0;
    for base in lattices_up_to(6) {
        let f = FullFunctionalAlgebra::new(base.clone(), 2, Kind::SigmaFreePolyadic, 2).map_err(|e| e.to_string())?;
        let set = |j: &[u32]| IndexSet::fin(Universe::Finite(2), j.iter().copied()).unwrap();
        let n = f.carrier_size().unwrap();
        for t in 0..n {
            let table = f.decode(t);
            let nab: Vec<Vec<usize>> = subsets.iter().map(|j| f.nabla_hat(&table, &set(j)).unwrap()).collect();
            ensure(nab[0] == table, || format!("∇̂_∅ moves {table:?}"))?;
            for (j, jn) in subsets.iter().zip(&nab) {
                ensure(*jn == oracle_nabla(&f, &table, j), || format!("∇̂_{j:?} differs from the oracle"))?;
            }
            for (ji, j) in subsets.iter().enumerate() {
                for (ki, k) in subsets.iter().enumerate() {
                    let union: Vec<u32> = (0..2).filter(|i| j.contains(i) || k.contains(i)).collect();
                    let lhs = f.nabla_hat(&table, &set(&union)).unwrap();
                    let rhs = f.nabla_hat(&nab[ki], &set(j)).unwrap();
                    ensure(lhs == rhs, || format!("∇̂ union law fails at J#{ji}, K#{ki}, {table:?}"))?;
                }
            }
            let ik = f.nabla_hat(&nab[2], &set(&[0])).unwrap();
            let ki = f.nabla_hat(&nab[1], &set(&[1])).unwrap();
            ensure(ik == ki, || format!("∇̂_{{0}} and ∇̂_{{1}} do not commute at {table:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("∇̂ laws hold on {checked} tables, 16 subset pairs each"))
}

fn criterion_5() -> Outcome {
    let mut pairs = 0;
    let mut skipped = 0;
    for l in lattices_up_to(6) {
        let qs = enumerate_quantifiers(&l, DEFAULT_QUANTIFIER_CAP).map_err(|e| e.to_string())?;
        for q in &qs {
            for r in &qs {
                let commute = l.elements().all(|a| q.apply(r.apply(a)) == r.apply(q.apply(a)));
                for universe in [IndexUniverse::finite_named(&["i", "k"]).unwrap(), IndexUniverse::omega()] {
                    let active = [(0, q.map().to_vec()), (1, r.map().to_vec())].into_iter().collect();
                    let c = DeltaFreeCylindric::new(l.clone(), universe, active).map_err(|e| e.to_string())?;
                    ensure(check_family(&c).is_pass() == commute, || "family check disagrees on commutation".into())?;
                    if !commute {
                        skipped += 1;
                        continue;
                    }
                    let rt = roundtrip_check(&c).map_err(|e| e.to_string())?;
                    ensure(rt.is_pass(), || format!("round trip on [{}]: {:?}", names(&l), rt.violations.first()))?;
                    let p = cyl_to_pol(&c).map_err(|e| e.to_string())?;
                    for (j, m) in [(0u32, q), (1, r)] {
                        let single = IndexSet::fin(c.indices().universe(), [j]).unwrap();
                        for a in l.elements() {
                            ensure(nabla_eval(&p, &single, a).unwrap() == m.apply(a), || "∇_{j} ≠ ∃_j".into())?;
                        }
                    }
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} commuting placements round-trip exactly ({skipped} non-commuting skipped)"))
}

fn criterion_6() -> Outcome {
    let mut census = Vec::new();
    for l in lattices_up_to(6) {
        let n = l.size();
        let mut brute = Vec::new();
        let mut map = vec![0usize; n];
        'maps: loop {
            if oracle_is_quantifier(&l, &map) {
                brute.push(map.clone());
            }
            for slot in map.iter_mut() {
                *slot += 1;
                if *slot < n {
                    continue 'maps;
                }
                *slot = 0;
            }
            break;
        }
        let mut found: Vec<Vec<usize>> = enumerate_quantifiers(&l, DEFAULT_QUANTIFIER_CAP)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|q| q.map().to_vec())
            .collect();
        brute.sort();
        found.sort();
        ensure(brute == found, || format!("census differs on [{}]: {} vs {}", names(&l), brute.len(), found.len()))?;
        census.push((l, found.len()));
    }
    let count_of = |target: &FiniteOrtholattice| {
        census.iter().find(|(l, _)| is_isomorphic(l, target).is_some()).map(|(_, c)| *c)
    };
    let pinned = [
        ("C2", library::chain2(), 1),
        ("B4", library::boolean4(), 2),
        ("MO2", library::mo2(), 4),
        ("O6", library::benzene(), 4),
    ];
    for (name, l, want) in &pinned {
        ensure(count_of(l) == Some(*want), || format!("{name}: expected {want}, got {:?}", count_of(l)))?;
    }
    Ok("census matches brute force: C2 1, B4 2, MO2 4, O6 4".into())
}

fn b4_square() -> (VFormation, AmalgamCertificate) {
    let (c2, b4) = (library::chain2(), library::boolean4());
    let incl = vec![b4.bottom(), b4.top()];
    let v = VFormation::new(c2, b4.clone(), b4.clone(), incl.clone(), incl).unwrap();
    let t = library::product(&b4, &b4);
    let at = |x: &str, y: &str| t.index_of(&format!("({x},{y})")).unwrap();
    let psi1 = ["0", "a", "a'", "1"].iter().map(|x| at(x, x)).collect();
    let psi2 = vec![at("0", "0"), at("a", "a'"), at("a'", "a"), at("1", "1")];
    (v, AmalgamCertificate { target: t, psi1, psi2, super_: true })
}

fn accepted(v: &VFormation, c: &AmalgamCertificate) -> bool {
    verify_amalgam(v, c).unwrap().is_pass() && verify_super(v, c).unwrap().is_pass()
}

fn criterion_7() -> Outcome {
    let (v, c) = b4_square();
    ensure(accepted(&v, &c), || "hand-built certificate rejected".into())?;
    let mut faults = 0;
    let size = c.target.size();
    for side in 0..2 {
        for a in 0..4 {
            for value in 0..size {
                let mut bad = c.clone();
                let map = if side == 0 { &mut bad.psi1 } else { &mut bad.psi2 };
                if map[a] == value {
                    continue;
                }
                map[a] = value;
                faults += 1;
                ensure(!accepted(&v, &bad), || format!("psi{}[{a}] = {value} accepted", side + 1))?;
            }
        }
    }
    let mut untwisted = c.clone();
    untwisted.psi2 = untwisted.psi1.clone();
    faults += 1;
    ensure(verify_amalgam(&v, &untwisted).unwrap().is_pass(), || "untwisted square is not an amalgam".into())?;
    ensure(!verify_super(&v, &untwisted).unwrap().is_pass(), || "untwisted square accepted as super".into())?;

    let mut sizes = Vec::new();
    for m in [
        MonadicOrtholattice::new(library::boolean4(), (0..4).collect()).unwrap(),
        MonadicOrtholattice::simple(library::boolean4()),
    ] {
        let (b, incl) = closed_elements(&m).map_err(|e| e.to_string())?;
        let a = m.carrier().clone();
        let v = VFormation::new(b, a.clone(), a, incl.clone(), incl).map_err(|e| e.to_string())?;
        let found = find_amalgam(&v, 16, true).map_err(|e| e.to_string())?;
        let cert = found.ok_or_else(|| "no super-amalgam within 16".to_string())?;
        ensure(accepted(&v, &cert), || "found certificate fails verification".into())?;
        sizes.push(cert.target.size());
    }
    Ok(format!("{faults} faults rejected; ⟨B,A,A⟩ super-amalgams of sizes {sizes:?}"))
}

fn criterion_8() -> Outcome {
    let m = MonadicOrtholattice::simple(library::boolean4());
    let built = build_chain(&m, 3, 16).map_err(|e| e.to_string())?;
    ensure(built.failed_at.is_none(), || format!("chain stopped at stage {:?}", built.failed_at))?;
    let r = check_limit_lemmas(&built.chain).map_err(|e| e.to_string())?;
    ensure(r.is_pass(), || format!("limit lemmas: {:?}", r.violations.first()))?;
    let w = functional_witness_from_chain(&built.chain).map_err(|e| e.to_string())?;
    ensure(w.is_pass(), || format!("functional witness: {:?}", w.violations.first()))?;
    let sizes: Vec<usize> = built.chain.stages.iter().map(|s| s.algebra.size()).collect();
    Ok(format!("stage sizes {sizes:?}, four lemma checks and f(∃a) = ◇f(a) pass"))
}

/// Order embedding plus `h(∃a) = ◇h(a)`, computed on the tables directly.
fn oracle_witness(m: &MonadicOrtholattice, base: &FiniteOrtholattice, tables: &[Vec<usize>]) -> bool {
    let l = m.carrier();
    let le = |s: &[usize], t: &[usize]| s.iter().zip(t).all(|(&x, &y)| base.leq(x, y));
    l.elements().all(|a| {
        l.elements().all(|b| l.leq(a, b) == le(&tables[a], &tables[b]))
            && tables[m.exists().apply(a)] == oracle_diamond(base, &tables[a])
            && tables[l.ortho(a)] == tables[a].iter().map(|&v| base.ortho(v)).collect::<Vec<_>>()
    })
}

fn criterion_9() -> Outcome {
    let mut found = Vec::new();
    for l in [library::chain2(), library::boolean4()] {
        for q in enumerate_quantifiers(&l, DEFAULT_QUANTIFIER_CAP).unwrap() {
            let m = MonadicOrtholattice::from_quantifier(l.clone(), q).unwrap();
            let w = embed_search(&m, 4, 3).map_err(|e| e.to_string())?;
            let w = w.ok_or_else(|| format!("no witness for a quantifier on [{}]", names(&l)))?;
            ensure(verify_embedding(&m, &w).unwrap().is_pass(), || "witness fails verification".into())?;
            ensure(oracle_witness(&m, &w.base, &w.tables), || "witness fails the direct check".into())?;
            found.push((w.base.size(), w.points));
        }
    }
    let o6 = library::benzene();
    let mut small = Vec::new();
    let mut large = Vec::new();
    for q in enumerate_quantifiers(&o6, DEFAULT_QUANTIFIER_CAP).unwrap() {
        let m = MonadicOrtholattice::from_quantifier(o6.clone(), q).unwrap();
        small.push(embed_search(&m, 4, 3).map_err(|e| e.to_string())?.is_some());
        let w = embed_search(&m, 8, 3).map_err(|e| e.to_string())?;
        let w = w.ok_or_else(|| "O6 witness within base 8 missing".to_string())?;
        ensure(verify_embedding(&m, &w).unwrap().is_pass(), || "O6 witness fails verification".into())?;
        ensure(oracle_witness(&m, &w.base, &w.tables), || "O6 witness fails the direct check".into())?;
        large.push((w.base.size(), w.points));
    }
    ensure(found == [(2, 1), (4, 1), (2, 2)], || format!("C2/B4 outcomes changed: {found:?}"))?;
    ensure(small == [false; 4], || format!("O6 within base 4 changed: {small:?}"))?;
    ensure(large == [(6, 1), (8, 2), (8, 2), (6, 2)], || format!("O6 within base 8 changed: {large:?}"))?;
    Ok(format!("C2/B4 witnesses {found:?}; O6 exhausted at base 4, witnesses {large:?} at base 8"))
}

// ---- determinism of the binary ----

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).to_str().unwrap().to_string()
}

fn olkit(args: &[String]) -> (i32, Vec<u8>) {
    let o = Command::new(env!("CARGO_BIN_EXE_olkit")).args(args).output().unwrap();
    (o.status.code().unwrap_or(-1), o.stdout)
}

fn criterion_10() -> Outcome {
    let dir: PathBuf = std::env::temp_dir().join(format!("olkit-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let scratch = |name: &str, args: &[&str]| -> Result<String, String> {
        let (code, out) = olkit(&args.iter().map(|s| s.to_string()).collect::<Vec<_>>());
        ensure(code == 0, || format!("setup `{}` exited {code}", args.join(" ")))?;
        let p = dir.join(name);
        std::fs::write(&p, out).map_err(|e| e.to_string())?;
        Ok(p.to_str().unwrap().to_string())
    };
    let cert = scratch("cert.json", &["amalgam", "find", &data("v-c2-b4-b4.json")])?;
    let chain = scratch("chain.json", &["chain", "build", &data("b4-simple.json")])?;
    let pol = scratch(
        "pol.json",
        &["functional", "build", "--base", &data("c2.json"), "--points", "2", "--index", "2", "--kind", "sigma-free-polyadic"],
    )?;
    let cyl = scratch("cyl.json", &["convert", "pol2cyl", &pol])?;
    let emb = scratch("emb.json", &["embed", &data("b4-simple.json")])?;
    let commands: Vec<Vec<String>> = [
        vec!["check".into(), data("o6.json")],
        vec!["check".into(), data("b4-bad-ortho.json")],
        vec!["check".into(), data("o6-closed-a.json")],
        vec!["check".into(), data("cyl-b4-omega.json")],
        vec!["check".into(), data("cyl-o6-noncommuting.json")],
        vec!["--format=json".into(), "check".into(), pol.clone()],
        vec!["check".into(), emb.clone()],
        vec!["check".into(), data("dangling.json")],
        vec!["fmt".into(), data("o6.json")],
        vec!["macneille".into(), data("o6.json")],
        vec!["frame".into(), data("o6.json")],
        vec!["functional".into(), "build".into(), "--base".into(), data("b4.json"), "--points".into(), "3".into()],
        vec!["convert".into(), "cyl2pol".into(), cyl.clone()],
        vec!["convert".into(), "pol2cyl".into(), pol.clone()],
        vec!["amalgam".into(), "find".into(), data("v-c2-b4-b4.json")],
        vec!["amalgam".into(), "find".into(), data("v-c2-b4-b4.json"), "--max-size".into(), "4".into()],
        vec!["amalgam".into(), "verify".into(), cert],
        vec!["chain".into(), "build".into(), data("b4-simple.json"), "--stages".into(), "4".into()],
        vec!["chain".into(), "check".into(), chain],
        vec!["embed".into(), data("o6-closed-a.json"), "--max-base".into(), "8".into()],
        vec!["enumerate".into(), "--size".into(), "8".into()],
        vec!["enumerate".into(), "--size".into(), "6".into(), "--quantifiers".into()],
    ]
    .into();
    for cmd in &commands {
        let with_jobs = |j: &str| [vec!["--jobs".to_string(), j.to_string()], cmd.clone()].concat();
        let reference = olkit(&with_jobs("1"));
        for run in 0..3 {
            let again = olkit(&with_jobs("4"));
            ensure(again == reference, || format!("`{}` differs on parallel run {run}", cmd.join(" ")))?;
        }
        let serial = olkit(&with_jobs("1"));
        ensure(serial == reference, || format!("`{}` differs between serial runs", cmd.join(" ")))?;
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{} commands byte-identical over 5 runs at 1 and 4 jobs", commands.len()))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome, Duration); 10] = [
        (1, "ortholattice checker", criterion_1, Duration::from_secs(120)),
        (2, "MacNeille completion", criterion_2, Duration::from_secs(120)),
        (3, "full functional monadic", criterion_3, Duration::from_secs(300)),
        (4, "σ-free polyadic laws", criterion_4, Duration::from_secs(300)),
        (5, "cylindric/polyadic correspondence", criterion_5, Duration::from_secs(120)),
        (6, "quantifier census", criterion_6, Duration::from_secs(300)),
        (7, "amalgamation", criterion_7, Duration::from_secs(600)),
        (8, "finite-stage limit lemmas", criterion_8, Duration::from_secs(300)),
        (9, "representation witnesses", criterion_9, Duration::from_secs(300)),
        (10, "determinism", criterion_10, Duration::from_secs(300)),
    ];
    let mut failed = 0;
    for (n, name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > limit => Err(format!("{msg}, but took {took:.1?} (limit {limit:?})")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("criterion {n:>2} PASS  {name} ({took:.2?}): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name} ({took:.2?}): {msg}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
