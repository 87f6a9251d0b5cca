//! The `olkit-v1` JSON document format.
//!
//! Parsing canonicalizes (elements sorted, pair lists sorted and
//! deduplicated), so `serialize(parse(x))` is the canonical text of `x` and
//! `parse(serialize(d)) == d`.

use std::collections::{BTreeMap, BTreeSet};

use olkit_core::amalgam::{AmalgamCertificate, Chain, ChainStage, VFormation};
use olkit_core::frames::OrthoFrame;
use olkit_core::functional::EmbedWitness;
use olkit_core::monadic::{check_quantifier, closed_elements, CylindricOrtholattice, DeltaFreeCylindric, MonadicOrtholattice};
use olkit_core::polyadic::{IndexUniverse, Nabla, SigmaFreePolyadic};
use olkit_core::{Candidate, FiniteOrtholattice, OrthoOps};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

pub const FORMAT_TAG: &str = "olkit-v1";

pub type Map = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeData {
    pub elements: Vec<String>,
    pub leq: Vec<(String, String)>,
    pub ortho: Map,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonadicData {
    pub elements: Vec<String>,
    pub leq: Vec<(String, String)>,
    pub ortho: Map,
    /// Exactly one named quantifier.
    pub quantifiers: BTreeMap<String, Map>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndicesData {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub universe: Option<Vec<String>>,
    pub active: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CylindricData {
    pub elements: Vec<String>,
    pub leq: Vec<(String, String)>,
    pub ortho: Map,
    pub indices: IndicesData,
    pub exists: BTreeMap<String, Map>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagonals: Option<BTreeMap<String, Map>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyadicData {
    pub elements: Vec<String>,
    pub leq: Vec<(String, String)>,
    pub ortho: Map,
    pub indices: IndicesData,
    pub generators: BTreeMap<String, Map>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VFormationData {
    pub base: LatticeData,
    pub left: LatticeData,
    pub right: LatticeData,
    pub phi1: Map,
    pub phi2: Map,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateData {
    pub base: LatticeData,
    pub left: LatticeData,
    pub right: LatticeData,
    pub phi1: Map,
    pub phi2: Map,
    pub target: LatticeData,
    pub psi1: Map,
    pub psi2: Map,
    #[serde(rename = "super")]
    pub super_: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageData {
    pub index: usize,
    pub algebra: LatticeData,
    pub f: Map,
    pub g: Map,
    pub h: Map,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainData {
    pub monadic: MonadicData,
    pub stages: Vec<StageData>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameData {
    pub points: Vec<String>,
    pub perp: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingData {
    pub monadic: MonadicData,
    pub base: LatticeData,
    pub points: usize,
    pub tables: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Ortholattice(LatticeData),
    Monadic(MonadicData),
    Cylindric(CylindricData),
    Polyadic(PolyadicData),
    VFormation(VFormationData),
    Certificate(CertificateData),
    Chain(ChainData),
    Frame(FrameData),
    Embedding(EmbeddingData),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Ortholattice(_) => "ortholattice",
            Document::Monadic(_) => "monadic",
            Document::Cylindric(_) => "cylindric",
            Document::Polyadic(_) => "polyadic",
            Document::VFormation(_) => "v-formation",
            Document::Certificate(_) => "certificate",
            Document::Chain(_) => "chain",
            Document::Frame(_) => "frame",
            Document::Embedding(_) => "embedding",
        }
    }
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn body<T: DeserializeOwned>(kind: &str, v: Value) -> Result<T, CliError> {
    serde_json::from_value(v).map_err(|e| input(format!("{kind} document: {e}")))
}

pub fn parse(text: &str) -> Result<Document, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| input(format!("invalid JSON: {e}")))?;
    let Value::Object(mut obj) = v else {
        return Err(input("document must be a JSON object"));
    };
    match obj.remove("format") {
        Some(Value::String(s)) if s == FORMAT_TAG => {}
        Some(Value::String(s)) => return Err(input(format!("format: unknown format tag `{s}`"))),
        Some(_) => return Err(input("format: expected a string")),
        None => return Err(input("missing field `format`")),
    }
    let kind = match obj.remove("kind") {
        Some(Value::String(s)) => s,
        Some(_) => return Err(input("kind: expected a string")),
        None => return Err(input("missing field `kind`")),
    };
    let rest = Value::Object(obj);
    let mut doc = match kind.as_str() {
        "ortholattice" => Document::Ortholattice(body(&kind, rest)?),
        "monadic" => Document::Monadic(body(&kind, rest)?),
        "cylindric" => Document::Cylindric(body(&kind, rest)?),
        "polyadic" => Document::Polyadic(body(&kind, rest)?),
        "v-formation" => Document::VFormation(body(&kind, rest)?),
        "certificate" => Document::Certificate(body(&kind, rest)?),
        "chain" => Document::Chain(body(&kind, rest)?),
        "frame" => Document::Frame(body(&kind, rest)?),
        "embedding" => Document::Embedding(body(&kind, rest)?),
        other => return Err(input(format!("kind: unknown document kind `{other}`"))),
    };
    canonicalize(&mut doc)?;
    Ok(doc)
}

#[derive(Serialize)]
struct Envelope<'a, T> {
    format: &'static str,
    kind: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

fn envelope<T: Serialize>(kind: &str, body: &T) -> Value {
    serde_json::to_value(Envelope { format: FORMAT_TAG, kind, body }).expect("documents serialize")
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

/// Pretty printing with arrays of scalars kept on one line.
pub(crate) fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize, out: &mut String| out.extend(std::iter::repeat_n(' ', n));
    match v {
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&x.to_string());
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                pad(indent + 2, out);
                write_value(x, indent + 2, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(indent, out);
            out.push(']');
        }
        Value::Object(m) if m.is_empty() => out.push_str("{}"),
        Value::Object(m) => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                pad(indent + 2, out);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(x, indent + 2, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            pad(indent, out);
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

pub fn to_value(doc: &Document) -> Value {
    let k = doc.kind();
    match doc {
        Document::Ortholattice(d) => envelope(k, d),
        Document::Monadic(d) => envelope(k, d),
        Document::Cylindric(d) => envelope(k, d),
        Document::Polyadic(d) => envelope(k, d),
        Document::VFormation(d) => envelope(k, d),
        Document::Certificate(d) => envelope(k, d),
        Document::Chain(d) => envelope(k, d),
        Document::Frame(d) => envelope(k, d),
        Document::Embedding(d) => envelope(k, d),
    }
}

pub fn serialize(doc: &Document) -> String {
    let mut s = String::new();
    write_value(&to_value(doc), 0, &mut s);
    s.push('\n');
    s
}

// ---- canonicalization and reference checks ----

fn element_set(field: &str, elements: &mut [String]) -> Result<BTreeSet<String>, CliError> {
    elements.sort();
    let mut set = BTreeSet::new();
    for e in elements.iter() {
        if !set.insert(e.clone()) {
            return Err(input(format!("{field}: duplicate identifier `{e}`")));
        }
    }
    Ok(set)
}

fn known(field: &str, set: &BTreeSet<String>, id: &str) -> Result<(), CliError> {
    if set.contains(id) {
        Ok(())
    } else {
        Err(input(format!("{field}: unknown identifier `{id}`")))
    }
}

fn pairs(field: &str, set: &BTreeSet<String>, p: &mut Vec<(String, String)>) -> Result<(), CliError> {
    for (a, b) in p.iter() {
        known(field, set, a)?;
        known(field, set, b)?;
    }
    p.sort();
    p.dedup();
    Ok(())
}

/// A total map from `dom` into `cod`.
fn total_map(field: &str, dom: &BTreeSet<String>, cod: &BTreeSet<String>, m: &Map) -> Result<(), CliError> {
    for (k, v) in m {
        known(field, dom, k)?;
        known(field, cod, v)?;
    }
    if let Some(missing) = dom.iter().find(|d| !m.contains_key(*d)) {
        return Err(input(format!("{field}: map is not total, `{missing}` has no image")));
    }
    Ok(())
}

fn lattice_parts(
    field: &str,
    elements: &mut [String],
    leq: &mut Vec<(String, String)>,
    ortho: &Map,
) -> Result<BTreeSet<String>, CliError> {
    let set = element_set(&format!("{field}elements"), elements)?;
    if set.is_empty() {
        return Err(input(format!("{field}elements: no elements")));
    }
    pairs(&format!("{field}leq"), &set, leq)?;
    total_map(&format!("{field}ortho"), &set, &set, ortho)?;
    Ok(set)
}

fn lattice(field: &str, l: &mut LatticeData) -> Result<BTreeSet<String>, CliError> {
    lattice_parts(field, &mut l.elements, &mut l.leq, &l.ortho)
}

fn monadic(field: &str, m: &mut MonadicData) -> Result<BTreeSet<String>, CliError> {
    let set = lattice_parts(field, &mut m.elements, &mut m.leq, &m.ortho)?;
    if m.quantifiers.len() != 1 {
        return Err(input(format!("{field}quantifiers: expected exactly one quantifier, got {}", m.quantifiers.len())));
    }
    for (name, q) in &m.quantifiers {
        total_map(&format!("{field}quantifiers.{name}"), &set, &set, q)?;
    }
    Ok(set)
}

fn indices(ix: &mut IndicesData) -> Result<BTreeSet<String>, CliError> {
    let active = element_set("indices.active", &mut ix.active)?;
    match (ix.kind.as_str(), &mut ix.universe) {
        ("finite", Some(u)) => {
            let universe = element_set("indices.universe", u)?;
            for a in &active {
                known("indices.active", &universe, a)?;
            }
            Ok(universe)
        }
        ("finite", None) => Err(input("indices: a finite universe needs a `universe` list")),
        ("omega", None) => {
            for a in &active {
                omega_index(a)?;
            }
            Ok(active)
        }
        ("omega", Some(_)) => Err(input("indices: an omega universe takes no `universe` list")),
        (other, _) => Err(input(format!("indices.kind: unknown index universe `{other}`"))),
    }
}

fn omega_index(s: &str) -> Result<u32, CliError> {
    match s.parse::<u32>() {
        Ok(i) if i.to_string() == s => Ok(i),
        _ => Err(input(format!("indices: `{s}` is not a natural-number index"))),
    }
}

fn family(field: &str, ix: &IndicesData, set: &BTreeSet<String>, fam: &BTreeMap<String, Map>) -> Result<(), CliError> {
    let active: BTreeSet<String> = ix.active.iter().cloned().collect();
    for (i, m) in fam {
        known(field, &active, i)?;
        total_map(&format!("{field}.{i}"), set, set, m)?;
    }
    if let Some(missing) = active.iter().find(|i| !fam.contains_key(*i)) {
        return Err(input(format!("{field}: active index `{missing}` has no map")));
    }
    Ok(())
}

fn canonicalize(doc: &mut Document) -> Result<(), CliError> {
    match doc {
        Document::Ortholattice(l) => {
            lattice("", l)?;
        }
        Document::Monadic(m) => {
            monadic("", m)?;
        }
        Document::Cylindric(c) => {
            let set = lattice_parts("", &mut c.elements, &mut c.leq, &c.ortho)?;
            let universe = indices(&mut c.indices)?;
            family("exists", &c.indices, &set, &c.exists)?;
            if let Some(d) = &c.diagonals {
                for (i, row) in d {
                    if c.indices.kind == "finite" {
                        known("diagonals", &universe, i)?;
                    } else {
                        omega_index(i)?;
                    }
                    for (k, v) in row {
                        if c.indices.kind == "finite" {
                            known("diagonals", &universe, k)?;
                        } else {
                            omega_index(k)?;
                        }
                        known(&format!("diagonals.{i}.{k}"), &set, v)?;
                    }
                }
            }
        }
        Document::Polyadic(p) => {
            let set = lattice_parts("", &mut p.elements, &mut p.leq, &p.ortho)?;
            indices(&mut p.indices)?;
            family("generators", &p.indices, &set, &p.generators)?;
        }
        Document::VFormation(v) => {
            let b = lattice("base.", &mut v.base)?;
            let l = lattice("left.", &mut v.left)?;
            let r = lattice("right.", &mut v.right)?;
            total_map("phi1", &b, &l, &v.phi1)?;
            total_map("phi2", &b, &r, &v.phi2)?;
        }
        Document::Certificate(c) => {
            let b = lattice("base.", &mut c.base)?;
            let l = lattice("left.", &mut c.left)?;
            let r = lattice("right.", &mut c.right)?;
            let t = lattice("target.", &mut c.target)?;
            total_map("phi1", &b, &l, &c.phi1)?;
            total_map("phi2", &b, &r, &c.phi2)?;
            total_map("psi1", &l, &t, &c.psi1)?;
            total_map("psi2", &r, &t, &c.psi2)?;
        }
        Document::Chain(ch) => {
            let a = monadic("monadic.", &mut ch.monadic)?;
            let q = ch.monadic.quantifiers.values().next().expect("one quantifier");
            let closed: BTreeSet<String> = q.iter().filter(|(k, v)| k == v).map(|(k, _)| k.clone()).collect();
            let mut prev = a.clone();
            for (n, s) in ch.stages.iter_mut().enumerate() {
                if s.index != n {
                    return Err(input(format!("stages[{n}].index: expected {n}, got {}", s.index)));
                }
                let t = lattice(&format!("stages[{n}].algebra."), &mut s.algebra)?;
                total_map(&format!("stages[{n}].f"), &prev, &t, &s.f)?;
                total_map(&format!("stages[{n}].g"), &a, &t, &s.g)?;
                total_map(&format!("stages[{n}].h"), &closed, &t, &s.h)?;
                prev = t;
            }
        }
        Document::Frame(f) => {
            let set = element_set("points", &mut f.points)?;
            for (a, b) in f.perp.iter_mut() {
                known("perp", &set, a)?;
                known("perp", &set, b)?;
                if a == b {
                    return Err(input(format!("perp: `{a}` is orthogonal to itself")));
                }
                if a > b {
                    std::mem::swap(a, b);
                }
            }
            f.perp.sort();
            f.perp.dedup();
        }
        Document::Embedding(e) => {
            let a = monadic("monadic.", &mut e.monadic)?;
            let b = lattice("base.", &mut e.base)?;
            if e.points == 0 {
                return Err(input("points: need at least one point"));
            }
            for (k, t) in &e.tables {
                known("tables", &a, k)?;
                if t.len() != e.points {
                    return Err(input(format!("tables.{k}: expected {} values, got {}", e.points, t.len())));
                }
                for v in t {
                    known(&format!("tables.{k}"), &b, v)?;
                }
            }
            if let Some(missing) = a.iter().find(|x| !e.tables.contains_key(*x)) {
                return Err(input(format!("tables: map is not total, `{missing}` has no image")));
            }
        }
    }
    Ok(())
}

// ---- documents to core structures ----

impl LatticeData {
    pub fn candidate(&self) -> Candidate {
        let idx = |s: &str| self.elements.binary_search_by(|e| e.as_str().cmp(s)).expect("checked at parse");
        let pairs: Vec<(usize, usize)> = self.leq.iter().map(|(a, b)| (idx(a), idx(b))).collect();
        let ortho = self.elements.iter().map(|e| idx(&self.ortho[e])).collect();
        Candidate::from_relation(self.elements.clone(), &pairs, ortho).expect("checked at parse")
    }

    /// Validated lattice; law failures are reported under `scope`.
    pub fn lattice(&self, scope: &str) -> Result<FiniteOrtholattice, CliError> {
        FiniteOrtholattice::new(self.candidate()).map_err(|e| CliError::from(e).scoped(scope))
    }

    pub fn from_lattice(l: &FiniteOrtholattice) -> Self {
        let name = |i: usize| l.name(i).to_string();
        let mut elements: Vec<String> = l.names().to_vec();
        elements.sort();
        let mut leq: Vec<(String, String)> = l.covers().into_iter().map(|(a, b)| (name(a), name(b))).collect();
        leq.sort();
        let ortho = l.elements().map(|a| (name(a), name(l.ortho(a)))).collect();
        Self { elements, leq, ortho }
    }
}

/// A name→name map as an index map from `dom` into `cod`.
fn index_map(dom: &FiniteOrtholattice, cod: &FiniteOrtholattice, m: &Map) -> Vec<usize> {
    dom.names().iter().map(|n| cod.index_of(&m[n]).expect("checked at parse")).collect()
}

fn named_map(dom: &FiniteOrtholattice, cod: &FiniteOrtholattice, m: &[usize]) -> Map {
    dom.elements().map(|a| (dom.name(a).to_string(), cod.name(m[a]).to_string())).collect()
}

fn lattice_data(elements: &[String], leq: &[(String, String)], ortho: &Map) -> LatticeData {
    LatticeData { elements: elements.to_vec(), leq: leq.to_vec(), ortho: ortho.clone() }
}

impl MonadicData {
    pub fn carrier_data(&self) -> LatticeData {
        lattice_data(&self.elements, &self.leq, &self.ortho)
    }

    pub fn quantifier_name(&self) -> &str {
        self.quantifiers.keys().next().expect("one quantifier")
    }

    pub fn carrier(&self) -> Result<FiniteOrtholattice, CliError> {
        self.carrier_data().lattice("carrier")
    }

    /// The carrier and the raw ∃ map, before the quantifier laws are checked.
    pub fn raw(&self) -> Result<(FiniteOrtholattice, Vec<usize>), CliError> {
        let l = self.carrier()?;
        let q = self.quantifiers.values().next().expect("one quantifier");
        let map = index_map(&l, &l, q);
        Ok((l, map))
    }

    pub fn monadic(&self) -> Result<MonadicOrtholattice, CliError> {
        let (l, map) = self.raw()?;
        let scope = self.quantifier_name().to_string();
        let r = check_quantifier(&l, &map)?;
        if !r.is_pass() {
            return Err(CliError::Violations(r).scoped(&scope));
        }
        Ok(MonadicOrtholattice::new(l, map)?)
    }

    pub fn from_monadic(m: &MonadicOrtholattice, name: &str) -> Self {
        let l = m.carrier();
        let LatticeData { elements, leq, ortho } = LatticeData::from_lattice(l);
        let mut quantifiers = BTreeMap::new();
        quantifiers.insert(name.to_string(), named_map(l, l, m.exists().map()));
        Self { elements, leq, ortho, quantifiers }
    }
}

impl IndicesData {
    pub fn universe(&self) -> IndexUniverse {
        match &self.universe {
            Some(u) => IndexUniverse::finite(u.clone()).expect("checked at parse"),
            None => IndexUniverse::omega(),
        }
    }

    fn from_universe(u: &IndexUniverse, active: impl Iterator<Item = u32>) -> Self {
        let mut active: Vec<String> = active.map(|i| u.label(i)).collect();
        active.sort();
        if u.is_omega() {
            Self { kind: "omega".into(), universe: None, active }
        } else {
            let mut names = u.names().to_vec();
            names.sort();
            Self { kind: "finite".into(), universe: Some(names), active }
        }
    }
}

fn index_family(
    l: &FiniteOrtholattice,
    u: &IndexUniverse,
    fam: &BTreeMap<String, Map>,
) -> BTreeMap<u32, Vec<usize>> {
    fam.iter().map(|(i, m)| (u.index_of(i).expect("checked at parse"), index_map(l, l, m))).collect()
}

fn named_family(l: &FiniteOrtholattice, u: &IndexUniverse, fam: &BTreeMap<u32, Vec<usize>>) -> BTreeMap<String, Map> {
    fam.iter().map(|(&i, m)| (u.label(i), named_map(l, l, m))).collect()
}

impl CylindricData {
    pub fn carrier_data(&self) -> LatticeData {
        lattice_data(&self.elements, &self.leq, &self.ortho)
    }

    pub fn family(&self) -> Result<DeltaFreeCylindric, CliError> {
        let l = self.carrier_data().lattice("carrier")?;
        let u = self.indices.universe();
        let active = index_family(&l, &u, &self.exists);
        Ok(DeltaFreeCylindric::new(l, u, active)?)
    }

    pub fn cylindric(&self) -> Result<Option<CylindricOrtholattice>, CliError> {
        let Some(d) = &self.diagonals else { return Ok(None) };
        let family = self.family()?;
        let (l, u) = (family.carrier(), family.indices());
        let mut diagonals = BTreeMap::new();
        for (i, row) in d {
            for (k, v) in row {
                let key = (u.index_of(i)?, u.index_of(k)?);
                diagonals.insert(key, l.index_of(v).expect("checked at parse"));
            }
        }
        Ok(Some(CylindricOrtholattice { family, diagonals }))
    }

    pub fn from_family(c: &DeltaFreeCylindric) -> Self {
        let (l, u) = (c.carrier(), c.indices());
        let LatticeData { elements, leq, ortho } = LatticeData::from_lattice(l);
        Self {
            elements,
            leq,
            ortho,
            indices: IndicesData::from_universe(u, c.active().keys().copied()),
            exists: named_family(l, u, c.active()),
            diagonals: None,
        }
    }
}

impl PolyadicData {
    pub fn polyadic(&self) -> Result<SigmaFreePolyadic, CliError> {
        let l = lattice_data(&self.elements, &self.leq, &self.ortho).lattice("carrier")?;
        let u = self.indices.universe();
        let gens = index_family(&l, &u, &self.generators);
        Ok(SigmaFreePolyadic::new(l, u, gens)?)
    }

    pub fn from_polyadic(p: &SigmaFreePolyadic) -> Self {
        let (l, u) = (p.carrier(), p.indices());
        let LatticeData { elements, leq, ortho } = LatticeData::from_lattice(l);
        Self {
            elements,
            leq,
            ortho,
            indices: IndicesData::from_universe(u, p.generators().keys().copied()),
            generators: named_family(l, u, p.generators()),
        }
    }
}

/// The three lattices of a V-formation plus its raw maps.
pub struct RawFormation {
    pub base: FiniteOrtholattice,
    pub left: FiniteOrtholattice,
    pub right: FiniteOrtholattice,
    pub phi1: Vec<usize>,
    pub phi2: Vec<usize>,
}

fn raw_formation(
    base: &LatticeData,
    left: &LatticeData,
    right: &LatticeData,
    phi1: &Map,
    phi2: &Map,
) -> Result<RawFormation, CliError> {
    let base = base.lattice("base")?;
    let left = left.lattice("left")?;
    let right = right.lattice("right")?;
    let phi1 = index_map(&base, &left, phi1);
    let phi2 = index_map(&base, &right, phi2);
    Ok(RawFormation { base, left, right, phi1, phi2 })
}

impl RawFormation {
    pub fn formation(self) -> VFormation {
        VFormation { base: self.base, left: self.left, right: self.right, phi1: self.phi1, phi2: self.phi2 }
    }
}

impl VFormationData {
    pub fn raw(&self) -> Result<RawFormation, CliError> {
        raw_formation(&self.base, &self.left, &self.right, &self.phi1, &self.phi2)
    }

    pub fn from_formation(v: &VFormation) -> Self {
        Self {
            base: LatticeData::from_lattice(&v.base),
            left: LatticeData::from_lattice(&v.left),
            right: LatticeData::from_lattice(&v.right),
            phi1: named_map(&v.base, &v.left, &v.phi1),
            phi2: named_map(&v.base, &v.right, &v.phi2),
        }
    }
}

impl CertificateData {
    pub fn raw(&self) -> Result<(RawFormation, AmalgamCertificate), CliError> {
        let v = raw_formation(&self.base, &self.left, &self.right, &self.phi1, &self.phi2)?;
        let target = self.target.lattice("target")?;
        let psi1 = index_map(&v.left, &target, &self.psi1);
        let psi2 = index_map(&v.right, &target, &self.psi2);
        Ok((v, AmalgamCertificate { target, psi1, psi2, super_: self.super_ }))
    }

    pub fn from_certificate(v: &VFormation, c: &AmalgamCertificate) -> Self {
        let VFormationData { base, left, right, phi1, phi2 } = VFormationData::from_formation(v);
        Self {
            base,
            left,
            right,
            phi1,
            phi2,
            target: LatticeData::from_lattice(&c.target),
            psi1: named_map(&v.left, &c.target, &c.psi1),
            psi2: named_map(&v.right, &c.target, &c.psi2),
            super_: c.super_,
        }
    }
}

impl ChainData {
    pub fn chain(&self) -> Result<Chain, CliError> {
        let monadic = self.monadic.monadic()?;
        let (b, _) = closed_elements(&monadic)?;
        let a = monadic.carrier().clone();
        let mut stages: Vec<ChainStage> = Vec::with_capacity(self.stages.len());
        for (n, s) in self.stages.iter().enumerate() {
            let algebra = s.algebra.lattice(&format!("stage {n}"))?;
            let prev = if n == 0 { &a } else { &stages[n - 1].algebra };
            let f = index_map(prev, &algebra, &s.f);
            let g = index_map(&a, &algebra, &s.g);
            let h = index_map(&b, &algebra, &s.h);
            stages.push(ChainStage { index: n, algebra, f, g, h });
        }
        Ok(Chain { monadic, stages })
    }

    pub fn from_chain(c: &Chain, name: &str) -> Result<Self, CliError> {
        let (b, _) = closed_elements(&c.monadic)?;
        let a = c.monadic.carrier();
        let mut stages = Vec::new();
        for (n, s) in c.stages.iter().enumerate() {
            let prev = if n == 0 { a } else { &c.stages[n - 1].algebra };
            stages.push(StageData {
                index: s.index,
                algebra: LatticeData::from_lattice(&s.algebra),
                f: named_map(prev, &s.algebra, &s.f),
                g: named_map(a, &s.algebra, &s.g),
                h: named_map(&b, &s.algebra, &s.h),
            });
        }
        Ok(Self { monadic: MonadicData::from_monadic(&c.monadic, name), stages })
    }
}

impl FrameData {
    pub fn frame(&self) -> Result<OrthoFrame, CliError> {
        let idx = |s: &str| self.points.binary_search_by(|e| e.as_str().cmp(s)).expect("checked at parse");
        let mut perp = vec![0u64; self.points.len()];
        if self.points.len() > olkit_core::frames::MAX_FRAME_POINTS {
            return Err(CliError::Exhausted(format!(
                "frame has {} points, more than the supported {}",
                self.points.len(),
                olkit_core::frames::MAX_FRAME_POINTS
            )));
        }
        for (a, b) in &self.perp {
            let (x, y) = (idx(a), idx(b));
            perp[x] |= 1 << y;
            perp[y] |= 1 << x;
        }
        Ok(OrthoFrame::new(self.points.clone(), perp)?)
    }

    pub fn from_frame(f: &OrthoFrame) -> Self {
        let mut points = f.points().to_vec();
        points.sort();
        let mut perp: Vec<(String, String)> = f
            .edges()
            .into_iter()
            .map(|(x, y)| {
                let (a, b) = (f.points()[x].clone(), f.points()[y].clone());
                if a < b { (a, b) } else { (b, a) }
            })
            .collect();
        perp.sort();
        Self { points, perp }
    }
}

impl EmbeddingData {
    pub fn witness(&self) -> Result<(MonadicOrtholattice, EmbedWitness), CliError> {
        let m = self.monadic.monadic()?;
        let base = self.base.lattice("base")?;
        let tables = m
            .carrier()
            .names()
            .iter()
            .map(|n| self.tables[n].iter().map(|v| base.index_of(v).expect("checked at parse")).collect())
            .collect();
        Ok((m, EmbedWitness { base, points: self.points, tables }))
    }

    pub fn from_witness(m: &MonadicOrtholattice, name: &str, w: &EmbedWitness) -> Self {
        let l = m.carrier();
        let tables = l
            .elements()
            .map(|a| (l.name(a).to_string(), w.tables[a].iter().map(|&v| w.base.name(v).to_string()).collect()))
            .collect();
        Self {
            monadic: MonadicData::from_monadic(m, name),
            base: LatticeData::from_lattice(&w.base),
            points: w.points,
            tables,
        }
    }
}
