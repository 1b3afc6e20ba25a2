//! Instance files, format version 1.
//!
//! Every file is a JSON object with `"version": 1`, a `"category"` tag and
//! the category's fields. Sets are `{"labels": [...]}` or
//! `{"factors": [set, ...]}`; product elements are labelled `(a,b,...)`.
//! An optional `"expect"` object maps definition ids to
//! `holds | fails | undecided | not-applicable`.

use std::collections::BTreeMap;
use std::str::FromStr;

use disentangle_core::algact::{EquivariantMap, MagmaTable, MonoidAction, MonoidTable, OpTable, ProductScheme, SchemeModel};
use disentangle_core::checker::{ActionInstance, Instance, Verdict};
use disentangle_core::finrel::FinRel;
use disentangle_core::finset::{FinFn, FinSet};
use disentangle_core::finstoch::{Rational, StochMap};
use disentangle_core::multiset::{MultiFn, TimedSystem};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const FORMAT_VERSION: u64 = 1;

/// Largest denominator kept when a decimal is read as an exact rational.
pub const MAX_DENOMINATOR: u64 = 1_000_000;

#[derive(Debug, thiserror::Error)]
pub enum SchemaError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] disentangle_core::Error),
}

fn invalid(msg: impl Into<String>) -> SchemaError {
    SchemaError::Invalid(msg.into())
}

type Result<T> = std::result::Result<T, SchemaError>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum SetSpec {
    Labels { labels: Vec<String> },
    Factors { factors: Vec<SetSpec> },
}

impl SetSpec {
    pub fn build(&self) -> Result<FinSet> {
        match self {
            SetSpec::Labels { labels } => Ok(FinSet::new(labels.iter().cloned())?),
            SetSpec::Factors { factors } => {
                let parts = factors.iter().map(SetSpec::build).collect::<Result<Vec<_>>>()?;
                Ok(FinSet::product(&parts)?)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expected {
    Holds,
    Fails,
    Undecided,
    NotApplicable,
}

impl Expected {
    /// Undecided verdicts match regardless of their budget note.
    pub fn matches(self, v: &Verdict) -> bool {
        matches!(
            (self, v),
            (Expected::Holds, Verdict::Holds)
                | (Expected::Fails, Verdict::Fails)
                | (Expected::Undecided, Verdict::Undecided(_))
                | (Expected::NotApplicable, Verdict::NotApplicable)
        )
    }
}

/// A weight written as `"p/q"`, a decimal string or a JSON number.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightSpec {
    Text(String),
    Number(serde_json::Number),
}

impl WeightSpec {
    fn text(&self) -> String {
        match self {
            WeightSpec::Text(s) => s.trim().to_string(),
            WeightSpec::Number(n) => n.to_string(),
        }
    }

    pub fn exact(&self) -> Result<Rational> {
        let s = self.text();
        if s.contains('/') {
            return Rational::from_str(&s).map_err(|_| invalid(format!("bad rational {s:?}")));
        }
        let q = parse_decimal(&s).ok_or_else(|| invalid(format!("bad number {s:?}")))?;
        Ok(limit_denominator(&q, &BigInt::from(MAX_DENOMINATOR)))
    }

    pub fn float(&self) -> Result<f64> {
        let s = self.text();
        if let Some((p, q)) = s.split_once('/') {
            let p: f64 = p.trim().parse().map_err(|_| invalid(format!("bad rational {s:?}")))?;
            let q: f64 = q.trim().parse().map_err(|_| invalid(format!("bad rational {s:?}")))?;
            if q == 0.0 {
                return Err(invalid(format!("zero denominator in {s:?}")));
            }
            return Ok(p / q);
        }
        s.parse().map_err(|_| invalid(format!("bad number {s:?}")))
    }
}

/// Exact value of a decimal literal such as `-1.25e-3`.
fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.trim_start_matches(['-', '+']).is_empty() && frac.is_empty() {
        return None;
    }
    if !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let ten = BigInt::from(10);
    let shift = exp - frac.len() as i32;
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    Some(if shift >= 0 {
        Rational::from_integer(digits * scale)
    } else {
        Rational::new(digits, scale)
    })
}

/// The closest rational to `x` with denominator at most `max_den`.
pub fn limit_denominator(x: &Rational, max_den: &BigInt) -> Rational {
    if x.denom() <= max_den {
        return x.clone();
    }
    // convergents p0/q0, p1/q1 of the continued fraction of |x|
    let (neg, mut n, mut d) = (x.is_negative(), x.numer().abs(), x.denom().clone());
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    loop {
        let a = &n / &d;
        let q2 = &q0 + &a * &q1;
        if &q2 > max_den {
            break;
        }
        let p2 = &p0 + &a * &p1;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let r = &n - &a * &d;
        (n, d) = (d, r);
        if d.is_zero() {
            break;
        }
    }
    let k = (max_den - &q0) / &q1;
    let semi = Rational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let conv = Rational::new(p1, q1);
    let target = x.abs();
    let best = if (&semi - &target).abs() <= (&conv - &target).abs() { semi } else { conv };
    if neg {
        -best
    } else {
        best
    }
}

fn lookup(set: &FinSet, label: &str, what: &str) -> Result<usize> {
    set.index_of(label)
        .ok_or_else(|| invalid(format!("{what}: unknown label {label:?}")))
}

fn build_fn(dom: &FinSet, cod: &FinSet, map: &BTreeMap<String, String>, what: &str) -> Result<FinFn> {
    if map.len() != dom.len() {
        return Err(invalid(format!("{what}: {} entries for a domain of {}", map.len(), dom.len())));
    }
    let mut table = vec![0; dom.len()];
    for (a, b) in map {
        table[lookup(dom, a, what)?] = lookup(cod, b, what)?;
    }
    Ok(FinFn::new(dom.clone(), cod.clone(), table)?)
}

fn build_rel(dom: &FinSet, cod: &FinSet, pairs: &[[String; 2]], what: &str) -> Result<FinRel> {
    let idx = pairs
        .iter()
        .map(|[a, b]| Ok((lookup(dom, a, what)?, lookup(cod, b, what)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(FinRel::from_pairs(dom.clone(), cod.clone(), &idx)?)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PipelineFile<M> {
    #[serde(rename = "Y")]
    y: SetSpec,
    #[serde(rename = "X")]
    x: Option<SetSpec>,
    #[serde(rename = "Z")]
    z: SetSpec,
    g: Option<M>,
    f: M,
}

struct Carriers {
    y: FinSet,
    x: FinSet,
    z: FinSet,
}

impl<M> PipelineFile<M> {
    /// `g` may be omitted only together with `X`, meaning `X = Y`, `g = id`.
    fn carriers(&self) -> Result<Carriers> {
        let y = self.y.build()?;
        let x = match (&self.x, &self.g) {
            (Some(x), Some(_)) => x.build()?,
            (None, None) => y.clone(),
            _ => return Err(invalid("give both X and g, or neither")),
        };
        Ok(Carriers { y, x, z: self.z.build()? })
    }
}

type RowsSpec = Vec<Vec<WeightSpec>>;

fn build_kernel<W: disentangle_core::finstoch::Weight>(
    dom: &FinSet,
    cod: &FinSet,
    rows: &RowsSpec,
    eps: f64,
    weight: impl Fn(&WeightSpec) -> Result<W>,
) -> Result<StochMap<W>> {
    let rows = rows
        .iter()
        .map(|r| r.iter().map(&weight).collect::<Result<Vec<W>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(StochMap::new(dom.clone(), cod.clone(), rows, eps)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidSpec {
    pub elements: Vec<String>,
    pub table: Vec<Vec<String>>,
    pub unit: String,
}

impl MonoidSpec {
    fn op_table(&self) -> Result<OpTable> {
        let elements = FinSet::new(self.elements.iter().cloned())?;
        let table = self
            .table
            .iter()
            .map(|row| row.iter().map(|l| lookup(&elements, l, "table")).collect())
            .collect::<Result<_>>()?;
        Ok(OpTable {
            elements: self.elements.clone(),
            table,
            unit: lookup(&elements, &self.unit, "unit")?,
        })
    }

    pub fn monoid(&self) -> Result<MonoidTable> {
        Ok(MonoidTable::new(self.op_table()?)?)
    }

    pub fn magma(&self) -> Result<MagmaTable> {
        Ok(MagmaTable::new(self.op_table()?)?)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionSpec {
    carrier: SetSpec,
    /// One endofunction per monoid element, keyed by element label.
    act: BTreeMap<String, BTreeMap<String, String>>,
}

impl ActionSpec {
    fn build(&self, m: &MonoidTable, what: &str) -> Result<MonoidAction> {
        let carrier = self.carrier.build()?;
        action_from_maps(m, &carrier, &self.act, what)
    }
}

fn action_from_maps(
    m: &MonoidTable,
    carrier: &FinSet,
    act: &BTreeMap<String, BTreeMap<String, String>>,
    what: &str,
) -> Result<MonoidAction> {
    if act.len() != m.len() {
        return Err(invalid(format!("{what}: {} maps for a monoid of {}", act.len(), m.len())));
    }
    let mut maps = vec![None; m.len()];
    for (elem, map) in act {
        let i = m
            .elements()
            .iter()
            .position(|e| e == elem)
            .ok_or_else(|| invalid(format!("{what}: unknown monoid element {elem:?}")))?;
        maps[i] = Some(build_fn(carrier, carrier, map, what)?);
    }
    Ok(MonoidAction {
        carrier: carrier.clone(),
        maps: maps.into_iter().map(|f| f.expect("every element present")).collect(),
    })
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum JointSpec {
    /// `"product"`: `F(s12) = F(s1) x F(s2)` acting componentwise.
    Keyword(String),
    Explicit(ActionSpec),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelSpec {
    s1: ActionSpec,
    s2: ActionSpec,
    s12: JointSpec,
    p1: Option<BTreeMap<String, String>>,
    p2: Option<BTreeMap<String, String>>,
}

impl ModelSpec {
    fn build(&self, s: &ProductScheme, name: &str) -> Result<SchemeModel> {
        let f1 = self.s1.build(&s.m1, &format!("{name}.s1"))?;
        let f2 = self.s2.build(&s.m2, &format!("{name}.s2"))?;
        match &self.s12 {
            JointSpec::Keyword(k) if k == "product" => {
                if self.p1.is_some() || self.p2.is_some() {
                    return Err(invalid(format!("{name}: projections are implied by s12 = \"product\"")));
                }
                Ok(SchemeModel::componentwise(s, f1, f2)?)
            }
            JointSpec::Keyword(k) => Err(invalid(format!("{name}.s12: expected \"product\" or an action, got {k:?}"))),
            JointSpec::Explicit(spec) => {
                let f12 = spec.build(s.joint(), &format!("{name}.s12"))?;
                let (Some(p1), Some(p2)) = (&self.p1, &self.p2) else {
                    return Err(invalid(format!("{name}: an explicit s12 needs p1 and p2")));
                };
                let q1 = build_fn(&f12.carrier, &f1.carrier, p1, &format!("{name}.p1"))?;
                let q2 = build_fn(&f12.carrier, &f2.carrier, p2, &format!("{name}.p2"))?;
                Ok(SchemeModel::product(f1, f2, f12, q1, q2))
            }
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MonoidPair {
    #[serde(rename = "M1")]
    m1: MonoidSpec,
    #[serde(rename = "M2")]
    m2: MonoidSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MuSpec {
    s1: BTreeMap<String, String>,
    s2: BTreeMap<String, String>,
    s12: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionFile {
    monoids: MonoidPair,
    #[serde(rename = "FY")]
    fy: ModelSpec,
    #[serde(rename = "FZ")]
    fz: ModelSpec,
    mu: MuSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CounterFile {
    states: SetSpec,
    step: BTreeMap<String, String>,
    codomain: SetSpec,
    /// Count vector per state, in codomain order.
    counts: BTreeMap<String, Vec<u64>>,
}

/// How stochastic weights are read.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Arithmetic {
    Exact,
    Float { eps: f64 },
}

#[derive(Debug)]
pub struct InstanceFile {
    pub instance: Instance,
    pub expect: BTreeMap<String, Expected>,
}

struct Header {
    category: String,
    body: serde_json::Map<String, Value>,
    expect: BTreeMap<String, Expected>,
}

fn split_header(text: &str) -> Result<Header> {
    let value: Value = serde_json::from_str(text)?;
    let Value::Object(mut obj) = value else {
        return Err(invalid("an instance file is a JSON object"));
    };
    match obj.remove("version") {
        Some(Value::Number(n)) if n.as_u64() == Some(FORMAT_VERSION) => {}
        Some(v) => return Err(invalid(format!("unsupported format version {v}"))),
        None => return Err(invalid("missing \"version\"")),
    }
    let category = match obj.remove("category") {
        Some(Value::String(s)) => s,
        _ => return Err(invalid("missing \"category\" string")),
    };
    let expect = match obj.remove("expect") {
        Some(v) => serde_json::from_value(v)?,
        None => BTreeMap::new(),
    };
    Ok(Header {
        category,
        body: obj,
        expect,
    })
}

pub fn parse_instance(text: &str, arithmetic: Arithmetic) -> Result<InstanceFile> {
    let Header { category, body, expect } = split_header(text)?;
    let body = Value::Object(body);
    let instance = match category.as_str() {
        "set" => {
            let file: PipelineFile<BTreeMap<String, String>> = serde_json::from_value(body)?;
            let c = file.carriers()?;
            let g = match &file.g {
                Some(g) => build_fn(&c.y, &c.x, g, "g")?,
                None => FinFn::identity(&c.y),
            };
            Instance::set(g, build_fn(&c.x, &c.z, &file.f, "f")?)?
        }
        "rel" => {
            let file: PipelineFile<Vec<[String; 2]>> = serde_json::from_value(body)?;
            let c = file.carriers()?;
            let g = match &file.g {
                Some(g) => build_rel(&c.y, &c.x, g, "g")?,
                None => FinRel::identity(&c.y),
            };
            Instance::rel(g, build_rel(&c.x, &c.z, &file.f, "f")?)?
        }
        "stoch" => {
            let file: PipelineFile<RowsSpec> = serde_json::from_value(body)?;
            let c = file.carriers()?;
            match arithmetic {
                Arithmetic::Exact => {
                    let g = match &file.g {
                        Some(g) => build_kernel(&c.y, &c.x, g, 0.0, WeightSpec::exact)?,
                        None => StochMap::identity(&c.y),
                    };
                    Instance::stoch(g, build_kernel(&c.x, &c.z, &file.f, 0.0, WeightSpec::exact)?)?
                }
                Arithmetic::Float { eps } => {
                    let g = match &file.g {
                        Some(g) => build_kernel(&c.y, &c.x, g, eps, WeightSpec::float)?,
                        None => StochMap::identity(&c.y),
                    };
                    Instance::stoch_float(g, build_kernel(&c.x, &c.z, &file.f, eps, WeightSpec::float)?, eps)?
                }
            }
        }
        "action" => {
            let file: ActionFile = serde_json::from_value(body)?;
            let scheme = ProductScheme::new(file.monoids.m1.monoid()?, file.monoids.m2.monoid()?);
            let fy = file.fy.build(&scheme, "FY")?;
            let fz = file.fz.build(&scheme, "FZ")?;
            let components = [&file.mu.s1, &file.mu.s2, &file.mu.s12]
                .iter()
                .zip(["mu.s1", "mu.s2", "mu.s12"])
                .enumerate()
                .map(|(o, (map, what))| build_fn(&fy.objects[o].carrier, &fz.objects[o].carrier, map, what))
                .collect::<Result<Vec<_>>>()?;
            Instance::action(ActionInstance {
                scheme,
                fy,
                fz,
                mu: EquivariantMap { components },
            })?
        }
        "counter" => {
            let file: CounterFile = serde_json::from_value(body)?;
            let states = file.states.build()?;
            let codomain = file.codomain.build()?;
            let step = build_fn(&states, &states, &file.step, "step")?;
            if file.counts.len() != states.len() {
                return Err(invalid(format!("counts: {} rows for {} states", file.counts.len(), states.len())));
            }
            let mut rows = vec![Vec::new(); states.len()];
            for (state, row) in &file.counts {
                rows[lookup(&states, state, "counts")?] = row.clone();
            }
            Instance::counter(TimedSystem::new(step)?, MultiFn::new(states, codomain, rows)?)?
        }
        other => return Err(invalid(format!("unknown category {other:?}"))),
    };
    Ok(InstanceFile { instance, expect })
}

/// A magma file: an [`MonoidSpec`] object, optionally with `"version"`.
pub fn parse_magma(text: &str) -> Result<MagmaTable> {
    let mut value: Value = serde_json::from_str(text)?;
    if let Value::Object(obj) = &mut value {
        match obj.remove("version") {
            None => {}
            Some(Value::Number(n)) if n.as_u64() == Some(FORMAT_VERSION) => {}
            Some(v) => return Err(invalid(format!("unsupported format version {v}"))),
        }
    }
    let spec: MonoidSpec = serde_json::from_value(value)?;
    spec.magma()
}
