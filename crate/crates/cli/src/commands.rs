use std::collections::BTreeMap;

use olkit_core::amalgam::{
    amalgam_candidates, amalgam_try, build_chain_with, check_chain, check_limit_lemmas, functional_witness_from_chain,
    verify_amalgam, verify_super, AmalgamCertificate, VFormation,
};
use olkit_core::frames::{biclosed_sets, check_completion, frame_of, macneille_with_cap, DEFAULT_POINT_CAP};
use olkit_core::functional::{
    embed_candidates, embed_try, verify_embedding, verify_full_functional, EmbedWitness, FullFunctionalAlgebra, Kind,
    Operator, DEFAULT_MATERIALIZATION_CAP,
};
use olkit_core::monadic::{
    check_family, check_locally_finite_cyl, check_cylindric, check_quantifier, enumerate_quantifiers, forall_of,
    DeltaFreeCylindric, MonadicOrtholattice, DEFAULT_QUANTIFIER_CAP,
};
use olkit_core::ortho::{check_map, check_ortholattice, enumerate_shard, merge_shards, DEFAULT_ENUMERATION_CAP};
use olkit_core::polyadic::{
    check_sigma_free_with, cyl_to_pol, pol_to_cyl, support_of, IndexSet, IndexUniverse, Nabla, SampleConfig, SigmaFreePolyadic,
    DEFAULT_SAMPLES,
};
use olkit_core::{FiniteOrtholattice, OrthoOps, Report};
use rayon::prelude::*;

use crate::error::CliError;
use crate::format::{
    CertificateData, ChainData, CylindricData, Document, EmbeddingData, FrameData, LatticeData, MonadicData,
    PolyadicData, VFormationData,
};

/// Name given to quantifiers the tool creates.
pub const QUANTIFIER_NAME: &str = "∃";

/// Shard count for enumeration; fixed so output never depends on `--jobs`.
const ENUMERATION_SHARDS: usize = 16;

pub struct Settings {
    pub seed: u64,
    pub cap: Option<usize>,
}

/// What a successful command produced, and its exit code.
pub struct Outcome {
    pub report: Option<Report>,
    pub documents: Vec<Document>,
    /// Emit `documents` as an array even when there is one.
    pub many: bool,
    pub code: i32,
    pub message: Option<String>,
}

impl Outcome {
    fn report(r: Report) -> Self {
        let code = if r.is_pass() { 0 } else { 1 };
        Self { report: Some(r), documents: Vec::new(), many: false, code, message: None }
    }

    fn document(d: Document) -> Self {
        Self { report: None, documents: vec![d], many: false, code: 0, message: None }
    }

    fn with_report(mut self, r: Report) -> Self {
        self.report = Some(r);
        self
    }
}

fn fail_on(r: Report) -> Result<Report, CliError> {
    if r.is_pass() {
        Ok(r)
    } else {
        Err(CliError::Violations(r))
    }
}

fn ortholattice_of(doc: &Document, what: &str) -> Result<FiniteOrtholattice, CliError> {
    match doc {
        Document::Ortholattice(l) => l.lattice(""),
        other => Err(CliError::Input(format!("{what} expects an ortholattice document, got `{}`", other.kind()))),
    }
}

fn monadic_of(doc: &Document, what: &str) -> Result<(MonadicOrtholattice, String), CliError> {
    match doc {
        Document::Monadic(m) => Ok((m.monadic()?, m.quantifier_name().to_string())),
        other => Err(CliError::Input(format!("{what} expects a monadic document, got `{}`", other.kind()))),
    }
}

// ---- check ----

pub fn check(doc: &Document, s: &Settings) -> Result<Outcome, CliError> {
    let r = match doc {
        Document::Ortholattice(l) => check_ortholattice(&l.candidate()),
        Document::Monadic(m) => check_monadic(m)?,
        Document::Cylindric(c) => check_cylindric_doc(c)?,
        Document::Polyadic(p) => check_polyadic(&p.polyadic()?, s)?,
        Document::VFormation(v) => check_formation(v)?,
        Document::Certificate(c) => check_certificate(c)?,
        Document::Chain(c) => check_chain_doc(c)?,
        Document::Frame(f) => {
            let frame = f.frame()?;
            let mut r = Report::new();
            r.note("points", frame.len().to_string());
            r.note("orthogonal pairs", frame.edges().len().to_string());
            r
        }
        Document::Embedding(e) => {
            let (m, w) = e.witness()?;
            verify_embedding(&m, &w)?
        }
    };
    Ok(Outcome::report(r))
}

fn check_monadic(m: &MonadicData) -> Result<Report, CliError> {
    let (l, map) = m.raw()?;
    let mut r = Report::new();
    let scope = m.quantifier_name().to_string();
    let q = check_quantifier(&l, &map)?;
    let ok = q.is_pass();
    r.absorb(&scope, q);
    if ok {
        let (_, all) = forall_of(&MonadicOrtholattice::new(l, map)?);
        r.absorb("∀", all);
    }
    Ok(r)
}

fn check_cylindric_doc(c: &CylindricData) -> Result<Report, CliError> {
    let f = c.family()?;
    let mut r = match c.cylindric()? {
        Some(cyl) => check_cylindric(&cyl)?,
        None => check_family(&f),
    };
    r.absorb("", check_locally_finite_cyl(&f));
    Ok(r)
}

fn check_polyadic(p: &SigmaFreePolyadic, s: &Settings) -> Result<Report, CliError> {
    let cfg = SampleConfig { seed: s.seed, samples: s.cap.unwrap_or(DEFAULT_SAMPLES) };
    let mut r = check_sigma_free_with(p, cfg);
    if r.is_pass() {
        let l = p.carrier();
        for a in l.elements() {
            let (support, sr) = support_of(p, a)?;
            r.note(format!("support {}", l.label(a)), p.indices().set_label(&support));
            r.absorb("support", sr);
        }
    }
    Ok(r)
}

fn check_formation(v: &VFormationData) -> Result<Report, CliError> {
    let raw = v.raw()?;
    let mut r = Report::new();
    r.absorb("phi1", check_map(&raw.base, &raw.left, &raw.phi1, true)?);
    r.absorb("phi2", check_map(&raw.base, &raw.right, &raw.phi2, true)?);
    Ok(r)
}

fn check_certificate(c: &CertificateData) -> Result<Report, CliError> {
    let (raw, cert) = c.raw()?;
    let mut r = Report::new();
    r.absorb("phi1", check_map(&raw.base, &raw.left, &raw.phi1, true)?);
    r.absorb("phi2", check_map(&raw.base, &raw.right, &raw.phi2, true)?);
    if !r.is_pass() {
        return Ok(r);
    }
    let v = raw.formation();
    r.absorb("", verify_amalgam(&v, &cert)?);
    if cert.super_ {
        r.absorb("", verify_super(&v, &cert)?);
    }
    Ok(r)
}

fn check_chain_doc(c: &ChainData) -> Result<Report, CliError> {
    let chain = c.chain()?;
    if chain.stages.is_empty() {
        return Err(CliError::Input("stages: a chain needs at least one stage".into()));
    }
    let mut r = check_chain(&chain)?;
    if !r.is_pass() {
        return Ok(r);
    }
    if chain.stages.len() >= 2 {
        r.absorb("lemmas", check_limit_lemmas(&chain)?);
    }
    r.absorb("witness", functional_witness_from_chain(&chain)?);
    Ok(r)
}

pub fn fmt(doc: Document) -> Outcome {
    Outcome::document(doc)
}

// ---- completions and frames ----

pub fn macneille(doc: &Document, s: &Settings) -> Result<Outcome, CliError> {
    let cap = s.cap.unwrap_or(DEFAULT_POINT_CAP);
    match doc {
        Document::Ortholattice(l) => {
            let l = l.lattice("")?;
            let c = macneille_with_cap(&l, cap)?;
            let r = fail_on(check_completion(&c))?;
            Ok(Outcome::document(Document::Ortholattice(LatticeData::from_lattice(&c.completion))).with_report(r))
        }
        Document::Frame(f) => {
            let sets = biclosed_sets(&f.frame()?, cap)?;
            Ok(Outcome::document(Document::Ortholattice(LatticeData::from_lattice(&sets.lattice))))
        }
        other => Err(CliError::Input(format!(
            "macneille expects an ortholattice or frame document, got `{}`",
            other.kind()
        ))),
    }
}

pub fn frame(doc: &Document) -> Result<Outcome, CliError> {
    let l = ortholattice_of(doc, "frame")?;
    Ok(Outcome::document(Document::Frame(FrameData::from_frame(&frame_of(&l)?))))
}

// ---- functional algebras ----

pub fn functional_build(base: &Document, points: usize, index: u32, kind: Kind, s: &Settings) -> Result<Outcome, CliError> {
    let base = ortholattice_of(base, "functional build")?;
    let cap = s.cap.unwrap_or(DEFAULT_MATERIALIZATION_CAP);
    let f = FullFunctionalAlgebra::new(base, points, kind, index)?;
    match f.carrier_size() {
        Some(n) if n <= cap => {}
        size => {
            return Err(CliError::Exhausted(format!(
                "functional carrier of size {} exceeds the cap of {cap}",
                size.map_or("more than 2^64".to_string(), |n| n.to_string())
            )))
        }
    }
    let r = fail_on(verify_full_functional(&f, s.seed)?)?;
    let l = f.to_ortholattice()?;
    let names: Vec<String> = (0..index).map(|i| i.to_string()).collect();
    let doc = match kind {
        Kind::Monadic => {
            let m = MonadicOrtholattice::new(l, f.operator_map(&Operator::Diamond)?)?;
            Document::Monadic(MonadicData::from_monadic(&m, "◇"))
        }
        Kind::DeltaFreeLiteral | Kind::DeltaFreeCoordinatewise => {
            let u = IndexUniverse::finite(names)?;
            let ops = f.operators();
            let mut active = BTreeMap::new();
            for (i, (_, op)) in ops.iter().enumerate() {
                active.insert(i as u32, f.operator_map(op)?);
            }
            Document::Cylindric(CylindricData::from_family(&DeltaFreeCylindric::new(l, u, active)?))
        }
        Kind::SigmaFreePolyadic => {
            let u = IndexUniverse::finite(names)?;
            let mut gens = BTreeMap::new();
            for i in 0..index {
                let j = IndexSet::fin(f.index_universe(), [i])?;
                gens.insert(i, f.operator_map(&Operator::Nabla(j))?);
            }
            Document::Polyadic(PolyadicData::from_polyadic(&SigmaFreePolyadic::new(l, u, gens)?))
        }
    };
    Ok(Outcome::document(doc).with_report(r))
}

// ---- conversions ----

pub fn cyl2pol(doc: &Document) -> Result<Outcome, CliError> {
    let Document::Cylindric(c) = doc else {
        return Err(CliError::Input(format!("cyl2pol expects a cylindric document, got `{}`", doc.kind())));
    };
    let f = c.family()?;
    fail_on(check_family(&f))?;
    let p = cyl_to_pol(&f)?;
    Ok(Outcome::document(Document::Polyadic(PolyadicData::from_polyadic(&p))))
}

pub fn pol2cyl(doc: &Document, s: &Settings) -> Result<Outcome, CliError> {
    let Document::Polyadic(p) = doc else {
        return Err(CliError::Input(format!("pol2cyl expects a polyadic document, got `{}`", doc.kind())));
    };
    let p = p.polyadic()?;
    fail_on(check_polyadic(&p, s)?)?;
    Ok(Outcome::document(Document::Cylindric(CylindricData::from_family(&pol_to_cyl(&p)))))
}

// ---- amalgamation ----

/// First certificate over the candidate targets, searched in parallel; the
/// earliest candidate with a certificate wins, as in the serial search.
fn find_amalgam_par(
    v: &VFormation,
    max_size: usize,
    require_super: bool,
) -> Result<Option<AmalgamCertificate>, olkit_core::Error> {
    let targets = amalgam_candidates(v, max_size, require_super)?;
    targets
        .par_iter()
        .map(|t| amalgam_try(v, t, require_super))
        .find_map_first(|r| r.transpose())
        .transpose()
}

fn formation_of(doc: &Document) -> Result<VFormation, CliError> {
    let Document::VFormation(v) = doc else {
        return Err(CliError::Input(format!("amalgam find expects a v-formation document, got `{}`", doc.kind())));
    };
    let r = check_formation(v)?;
    fail_on(r)?;
    Ok(v.raw()?.formation())
}

pub fn amalgam_find(doc: &Document, max_size: usize, require_super: bool) -> Result<Outcome, CliError> {
    let v = formation_of(doc)?;
    match find_amalgam_par(&v, max_size, require_super)? {
        Some(c) => Ok(Outcome::document(Document::Certificate(CertificateData::from_certificate(&v, &c)))),
        None => Err(CliError::Exhausted(format!("no certificate with a target of size at most {max_size}"))),
    }
}

pub fn amalgam_verify(doc: &Document) -> Result<Outcome, CliError> {
    match doc {
        Document::Certificate(c) => Ok(Outcome::report(check_certificate(c)?)),
        other => Err(CliError::Input(format!("amalgam verify expects a certificate document, got `{}`", other.kind()))),
    }
}

// ---- chains ----

pub fn chain_build(doc: &Document, stages: usize, max_size: usize) -> Result<Outcome, CliError> {
    let (m, name) = monadic_of(doc, "chain build")?;
    let built = build_chain_with(&m, stages, &mut |v| find_amalgam_par(v, max_size, true))?;
    let doc = Document::Chain(ChainData::from_chain(&built.chain, &name)?);
    let mut out = Outcome::document(doc);
    if let Some(n) = built.failed_at {
        out.code = 2;
        out.message = Some(format!("stage {n}: no super-amalgam with a target of size at most {max_size}"));
    }
    Ok(out)
}

pub fn chain_check(doc: &Document) -> Result<Outcome, CliError> {
    match doc {
        Document::Chain(c) => Ok(Outcome::report(check_chain_doc(c)?)),
        other => Err(CliError::Input(format!("chain check expects a chain document, got `{}`", other.kind()))),
    }
}

// ---- functional witnesses ----

pub fn embed(doc: &Document, max_base: usize, max_points: usize) -> Result<Outcome, CliError> {
    let (m, name) = monadic_of(doc, "embed")?;
    let candidates = embed_candidates(max_base, max_points)?;
    let found: Option<Result<EmbedWitness, olkit_core::Error>> = candidates
        .par_iter()
        .map(|(base, k)| embed_try(&m, base, *k))
        .find_map_first(|r| r.transpose());
    match found.transpose()? {
        Some(w) => Ok(Outcome::document(Document::Embedding(EmbeddingData::from_witness(&m, &name, &w)))),
        None => Err(CliError::Exhausted(format!(
            "no functional witness with base size at most {max_base} and at most {max_points} points"
        ))),
    }
}

// ---- enumeration ----

pub fn enumerate(size: usize, quantifiers: bool, s: &Settings) -> Result<Outcome, CliError> {
    let cap = s.cap.unwrap_or(DEFAULT_ENUMERATION_CAP);
    let shards: Vec<_> = (0..ENUMERATION_SHARDS)
        .into_par_iter()
        .map(|i| enumerate_shard(size, i, ENUMERATION_SHARDS, cap))
        .collect::<Result<_, _>>()?;
    let lattices = merge_shards(shards);
    let documents = if quantifiers {
        let per: Vec<Vec<Document>> = lattices
            .par_iter()
            .map(|l| {
                let qs = enumerate_quantifiers(l, DEFAULT_QUANTIFIER_CAP)?;
                qs.into_iter()
                    .map(|q| {
                        let m = MonadicOrtholattice::from_quantifier(l.clone(), q)?;
                        Ok(Document::Monadic(MonadicData::from_monadic(&m, QUANTIFIER_NAME)))
                    })
                    .collect::<Result<Vec<_>, olkit_core::Error>>()
            })
            .collect::<Result<_, _>>()?;
        per.into_iter().flatten().collect()
    } else {
        lattices.iter().map(|l| Document::Ortholattice(LatticeData::from_lattice(l))).collect()
    };
    let mut out = Outcome { report: None, documents, many: true, code: 0, message: None };
    let mut r = Report::new();
    r.note("count", out.documents.len().to_string());
    out.report = Some(r);
    Ok(out)
}
