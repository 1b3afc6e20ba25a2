//! Finite sets, total functions and the cartesian structure of the category
//! of finite sets, together with the modularity and explicitness predicates
//! for a code generating process `m: Y -> Z`.
//!
//! Elements are addressed by index. A product set stores its factors and
//! enumerates elements in mixed-radix order with the first factor most
//! significant, so `(A x B) x C` and `A x (B x C)` share one flat indexing
//! and the associator is the identity on indices.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Error, Result};
use crate::search::{self, SearchOutcome};

/// Upper bound on the size of a materialized exponential set.
pub const MAX_EXPONENTIAL: usize = 1 << 20;

#[derive(Clone)]
pub struct FinSet {
    labels: Arc<[String]>,
    factors: Option<Arc<[FinSet]>>,
}

impl FinSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut seen = HashSet::with_capacity(labels.len());
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidSet(format!("duplicate label {l:?}")));
            }
        }
        Ok(FinSet {
            labels: labels.into(),
            factors: None,
        })
    }

    /// The set `{0, 1, ..., n-1}` labeled by decimal numerals.
    pub fn range(n: usize) -> Self {
        FinSet {
            labels: (0..n).map(|i| i.to_string()).collect::<Vec<_>>().into(),
            factors: None,
        }
    }

    /// The one-point set, the terminal object.
    pub fn one() -> Self {
        FinSet::new(["*"]).expect("single label")
    }

    /// Cartesian product in mixed-radix order. Element labels are `(a,b,...)`.
    pub fn product(factors: &[FinSet]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidSet("product of no factors".into()));
        }
        if let Some(i) = factors.iter().position(FinSet::is_empty) {
            return Err(Error::InvalidSet(format!("factor {i} is empty")));
        }
        let labels = if factors.len() == 1 {
            factors[0].labels.clone()
        } else {
            let size: usize = factors.iter().map(FinSet::len).product();
            let mut labels = Vec::with_capacity(size);
            let mut coords = vec![0usize; factors.len()];
            for _ in 0..size {
                let parts: Vec<&str> = coords
                    .iter()
                    .zip(factors)
                    .map(|(&c, f)| f.labels[c].as_str())
                    .collect();
                labels.push(format!("({})", parts.join(",")));
                increment(&mut coords, factors.iter().map(FinSet::len));
            }
            let set = FinSet::new(labels)?;
            set.labels
        };
        Ok(FinSet {
            labels,
            factors: Some(factors.to_vec().into()),
        })
    }

    /// The set of all functions `exponent -> base`, indexed by their value
    /// tables read as mixed-radix numbers.
    pub fn exponential(base: &FinSet, exponent: &FinSet) -> Result<Self> {
        let size = search::candidate_count(exponent.len(), base.len())
            .filter(|&n| n <= MAX_EXPONENTIAL as u64)
            .ok_or(Error::SizeCap {
                size: usize::MAX,
                cap: MAX_EXPONENTIAL,
            })? as usize;
        let labels = search::AllMaps::new(exponent.len(), base.len()).map(|table| {
            let entries: Vec<String> = table
                .iter()
                .enumerate()
                .map(|(i, &v)| format!("{}->{}", exponent.labels[i], base.labels[v]))
                .collect();
            format!("[{}]", entries.join(","))
        });
        let set = FinSet::new(labels)?;
        debug_assert_eq!(set.len(), size);
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn factors(&self) -> Option<&[FinSet]> {
        self.factors.as_deref()
    }

    pub fn factor_shape(&self) -> Option<Vec<usize>> {
        self.factors().map(|fs| fs.iter().map(FinSet::len).collect())
    }

    pub fn factor_count(&self) -> Option<usize> {
        self.factors().map(<[FinSet]>::len)
    }

    pub fn factor(&self, i: usize) -> Result<&FinSet> {
        let fs = self.factors().ok_or(Error::MissingFactors("set"))?;
        fs.get(i).ok_or(Error::FactorIndex {
            index: i,
            count: fs.len(),
        })
    }

    /// Same elements in the same order; factor metadata is not compared.
    pub fn same_carrier(&self, other: &FinSet) -> bool {
        Arc::ptr_eq(&self.labels, &other.labels) || self.labels == other.labels
    }

    /// Factor coordinates of an element of a product set.
    pub fn coords(&self, mut index: usize) -> Vec<usize> {
        let fs = self.factors().expect("coords on a product set");
        let mut coords = vec![0; fs.len()];
        for (slot, f) in coords.iter_mut().zip(fs.iter()).rev() {
            *slot = index % f.len();
            index /= f.len();
        }
        coords
    }

    /// Flat index of the element with the given factor coordinates.
    pub fn index_of_coords(&self, coords: &[usize]) -> usize {
        let fs = self.factors().expect("index on a product set");
        debug_assert_eq!(coords.len(), fs.len());
        coords
            .iter()
            .zip(fs.iter())
            .fold(0, |acc, (&c, f)| acc * f.len() + c)
    }

    /// The product of all factors except `i`; the one-point set when `N = 1`.
    pub fn complement(&self, i: usize) -> Result<FinSet> {
        let fs = self.factors().ok_or(Error::MissingFactors("set"))?;
        if i >= fs.len() {
            return Err(Error::FactorIndex {
                index: i,
                count: fs.len(),
            });
        }
        let rest: Vec<FinSet> = fs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, f)| f.clone())
            .collect();
        if rest.is_empty() {
            Ok(FinSet::one())
        } else {
            FinSet::product(&rest)
        }
    }
}

impl PartialEq for FinSet {
    fn eq(&self, other: &Self) -> bool {
        self.same_carrier(other) && self.factor_shape() == other.factor_shape()
    }
}

impl Eq for FinSet {}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.factor_shape() {
            Some(shape) => write!(f, "FinSet{:?}{:?}", shape, self.labels),
            None => write!(f, "FinSet{:?}", self.labels),
        }
    }
}

pub(crate) fn increment(coords: &mut [usize], radices: impl DoubleEndedIterator<Item = usize>) {
    let radices: Vec<usize> = radices.collect();
    for pos in (0..coords.len()).rev() {
        coords[pos] += 1;
        if coords[pos] < radices[pos] {
            return;
        }
        coords[pos] = 0;
    }
}

/// A total function between finite sets.
#[derive(Clone, PartialEq, Eq)]
pub struct FinFn {
    dom: FinSet,
    cod: FinSet,
    map: Vec<usize>,
}

impl fmt::Debug for FinFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinFn{:?}", self.map)
    }
}

impl FinFn {
    pub fn new(dom: FinSet, cod: FinSet, map: Vec<usize>) -> Result<Self> {
        if map.len() != dom.len() {
            return Err(Error::InvalidMorphism(format!(
                "table has {} entries for a domain of {}",
                map.len(),
                dom.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&v| v >= cod.len()) {
            return Err(Error::InvalidMorphism(format!(
                "value {bad} outside a codomain of {}",
                cod.len()
            )));
        }
        Ok(FinFn { dom, cod, map })
    }

    pub fn from_fn(dom: FinSet, cod: FinSet, f: impl Fn(usize) -> usize) -> Result<Self> {
        let map = (0..dom.len()).map(f).collect();
        FinFn::new(dom, cod, map)
    }

    pub fn identity(a: &FinSet) -> Self {
        FinFn {
            dom: a.clone(),
            cod: a.clone(),
            map: (0..a.len()).collect(),
        }
    }

    pub fn constant(dom: &FinSet, cod: &FinSet, value: usize) -> Result<Self> {
        FinFn::new(dom.clone(), cod.clone(), vec![value; dom.len()])
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &FinFn) -> Result<FinFn> {
        compose(self, next)
    }

    /// Replace the carriers with sets of the same sizes, e.g. to attach
    /// factor metadata.
    pub fn with_carriers(&self, dom: FinSet, cod: FinSet) -> Result<FinFn> {
        if dom.len() != self.dom.len() || cod.len() != self.cod.len() {
            return Err(mismatch("with_carriers", "sizes differ"));
        }
        FinFn::new(dom, cod, self.map.clone())
    }

    /// The product morphism `f1 x ... x fN` between product sets.
    pub fn product(parts: &[FinFn]) -> Result<FinFn> {
        let doms: Vec<FinSet> = parts.iter().map(|f| f.dom.clone()).collect();
        let cods: Vec<FinSet> = parts.iter().map(|f| f.cod.clone()).collect();
        let dom = FinSet::product(&doms)?;
        let cod = FinSet::product(&cods)?;
        let map = (0..dom.len())
            .map(|y| {
                let out: Vec<usize> = dom
                    .coords(y)
                    .iter()
                    .zip(parts)
                    .map(|(&c, f)| f.map[c])
                    .collect();
                cod.index_of_coords(&out)
            })
            .collect();
        Ok(FinFn { dom, cod, map })
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.cod.len()];
        self.map.iter().all(|&v| !std::mem::replace(&mut hit[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod.len()];
        for &v in &self.map {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_constant(&self) -> bool {
        self.map.windows(2).all(|w| w[0] == w[1])
    }
}

/// The composite `g ∘ f`.
pub fn compose(f: &FinFn, g: &FinFn) -> Result<FinFn> {
    if !f.cod.same_carrier(&g.dom) {
        return Err(mismatch(
            "compose",
            format!("codomain of size {} vs domain of size {}", f.cod.len(), g.dom.len()),
        ));
    }
    Ok(FinFn {
        dom: f.dom.clone(),
        cod: g.cod.clone(),
        map: f.map.iter().map(|&x| g.map[x]).collect(),
    })
}

/// A product object with its projections.
#[derive(Debug, Clone)]
pub struct CartesianProduct {
    pub product: FinSet,
    pub projections: Vec<FinFn>,
}

impl CartesianProduct {
    pub fn new(factors: &[FinSet]) -> Result<Self> {
        let product = FinSet::product(factors)?;
        let projections = (0..factors.len())
            .map(|i| projection(&product, i))
            .collect::<Result<_>>()?;
        Ok(CartesianProduct {
            product,
            projections,
        })
    }

    /// The pairing `<f1, ..., fN>`, the unique map with `p_i ∘ u = f_i`.
    pub fn pair(&self, parts: &[FinFn]) -> Result<FinFn> {
        let factors = self.product.factors().expect("product set");
        if parts.len() != factors.len() {
            return Err(mismatch(
                "pair",
                format!("{} maps for {} factors", parts.len(), factors.len()),
            ));
        }
        let dom = parts[0].dom.clone();
        for (i, (f, factor)) in parts.iter().zip(factors).enumerate() {
            if !f.dom.same_carrier(&dom) {
                return Err(mismatch("pair", format!("map {i} has a different domain")));
            }
            if !f.cod.same_carrier(factor) {
                return Err(mismatch("pair", format!("map {i} does not land in factor {i}")));
            }
        }
        let map = (0..dom.len())
            .map(|c| {
                let coords: Vec<usize> = parts.iter().map(|f| f.map[c]).collect();
                self.product.index_of_coords(&coords)
            })
            .collect();
        Ok(FinFn {
            dom,
            cod: self.product.clone(),
            map,
        })
    }
}

/// The `i`-th projection out of a product set.
pub fn projection(product: &FinSet, i: usize) -> Result<FinFn> {
    let factor = product.factor(i)?.clone();
    let map = (0..product.len()).map(|y| product.coords(y)[i]).collect();
    FinFn::new(product.clone(), factor, map)
}

/// `Δ_A = <id, id>: A -> A x A`.
pub fn diagonal(a: &FinSet) -> Result<FinFn> {
    let prod = CartesianProduct::new(&[a.clone(), a.clone()])?;
    let id = FinFn::identity(a);
    prod.pair(&[id.clone(), id])
}

/// The unique map `e_A: A -> 1`.
pub fn terminal(a: &FinSet) -> FinFn {
    FinFn::constant(a, &FinSet::one(), 0).expect("one-point codomain")
}

/// The symmetry `<p2, p1>: A x B -> B x A`.
pub fn swap(a: &FinSet, b: &FinSet) -> Result<FinFn> {
    let src = CartesianProduct::new(&[a.clone(), b.clone()])?;
    let dst = CartesianProduct::new(&[b.clone(), a.clone()])?;
    dst.pair(&[src.projections[1].clone(), src.projections[0].clone()])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismClass {
    pub mono: bool,
    pub epi: bool,
    pub iso: bool,
}

pub fn classify_morphism(f: &FinFn) -> MorphismClass {
    let mono = f.is_injective();
    let epi = f.is_surjective();
    MorphismClass {
        mono,
        epi,
        iso: mono && epi,
    }
}

/// How a witness was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchPath {
    Exhaustive,
    Construction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Retraction {
    pub map: FinFn,
    pub path: SearchPath,
}

/// Find `h` on `[0, width)` with `h[through[y]] == target[y]` for every `y`.
///
/// The exhaustive route returns the lexicographically first solution; when the
/// candidate space exceeds the budget the same result is built directly.
fn factor_through(
    through: &[usize],
    width: usize,
    target: &[usize],
    range: usize,
    budget: u64,
) -> (Option<Vec<usize>>, SearchPath, SearchOutcome) {
    let mut pinned: Vec<Option<usize>> = vec![None; width];
    let mut conflict = vec![false; width];
    for (&z, &t) in through.iter().zip(target) {
        match pinned[z] {
            None => pinned[z] = Some(t),
            Some(v) if v != t => conflict[z] = true,
            Some(_) => {}
        }
    }
    let outcome = search::first_map(width, range, budget, |prefix| {
        let z = prefix.len() - 1;
        !conflict[z] && pinned[z].is_none_or(|v| v == prefix[z])
    });
    match outcome {
        SearchOutcome::Found(h) => (Some(h.clone()), SearchPath::Exhaustive, SearchOutcome::Found(h)),
        SearchOutcome::NotFound => (None, SearchPath::Exhaustive, SearchOutcome::NotFound),
        over @ SearchOutcome::OverBudget { .. } => {
            let h: Vec<usize> = pinned.iter().map(|p| p.unwrap_or(0)).collect();
            let ok = range > 0 || width == 0;
            let ok = ok && through.iter().zip(target).all(|(&z, &t)| h[z] == t);
            (ok.then_some(h), SearchPath::Construction, over)
        }
    }
}

/// A retraction `h` with `h ∘ m = id`, if `m` is a split monomorphism.
pub fn find_retraction(m: &FinFn, budget: u64) -> Option<Retraction> {
    let identity: Vec<usize> = (0..m.dom.len()).collect();
    let (h, path, _) = factor_through(&m.map, m.cod.len(), &identity, m.dom.len(), budget);
    h.map(|h| Retraction {
        map: FinFn {
            dom: m.cod.clone(),
            cod: m.dom.clone(),
            map: h,
        },
        path,
    })
}

/// Per-factor component maps `m_{i,i}: Y_i -> Z_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentWitness {
    pub components: Vec<FinFn>,
}

impl ComponentWitness {
    pub fn product(&self) -> Result<FinFn> {
        FinFn::product(&self.components)
    }
}

/// Factor counts of a map between product sets, which must agree.
pub fn factor_counts(m: &FinFn) -> Result<usize> {
    let n = m.dom.factor_count().ok_or(Error::MissingFactors("domain"))?;
    let k = m.cod.factor_count().ok_or(Error::MissingFactors("codomain"))?;
    if n != k {
        return Err(Error::FactorCountMismatch { dom: n, cod: k });
    }
    Ok(n)
}

/// `m_i = p_i ∘ m: Y -> Z_i`.
pub fn code_component(m: &FinFn, i: usize) -> Result<FinFn> {
    let p = projection(&m.cod, i)?;
    compose(m, &p)
}

/// Components read off at a basepoint: `m_{i,i}(y_i) = p_i(m(b_1, .., y_i, .., b_N))`.
pub fn extract_components(m: &FinFn, basepoint: &[usize]) -> Result<ComponentWitness> {
    let n = factor_counts(m)?;
    let yf = m.dom.factors().expect("checked");
    if basepoint.len() != n || basepoint.iter().zip(yf).any(|(&b, f)| b >= f.len()) {
        return Err(Error::InvalidMorphism("basepoint outside the factors".into()));
    }
    let components = (0..n)
        .map(|i| {
            let yi = m.dom.factor(i)?.clone();
            let zi = m.cod.factor(i)?.clone();
            FinFn::from_fn(yi, zi, |v| {
                let mut point = basepoint.to_vec();
                point[i] = v;
                let z = m.map[m.dom.index_of_coords(&point)];
                m.cod.coords(z)[i]
            })
        })
        .collect::<Result<_>>()?;
    Ok(ComponentWitness { components })
}

/// Modularity: `m = m_{1,1} x ... x m_{N,N}`. Components are extracted with
/// every other factor fixed at index 0 and then checked against `m`.
pub fn is_product_morphism(m: &FinFn) -> Result<Option<ComponentWitness>> {
    let n = factor_counts(m)?;
    let witness = extract_components(m, &vec![0; n])?;
    let rebuilt = witness.product()?;
    Ok((rebuilt.map == m.map).then_some(witness))
}

/// The exponential transpose of `m_i`, tabulated: one function `Y_i -> Z_i`
/// per element of `Y_{\i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transpose {
    pub rest: FinSet,
    pub rows: Vec<Vec<usize>>,
}

impl Transpose {
    pub fn is_constant(&self) -> bool {
        self.rows.windows(2).all(|w| w[0] == w[1])
    }
}

pub fn exponential_transpose(m: &FinFn, i: usize) -> Result<Transpose> {
    factor_counts(m)?;
    let mi = code_component(m, i)?;
    let yi = m.dom.factor(i)?.len();
    let rest = m.dom.complement(i)?;
    let n = m.dom.factor_count().expect("checked");
    let rows = (0..rest.len())
        .map(|r| {
            let mut others = if n == 1 { Vec::new() } else { rest.coords(r) };
            others.insert(i, 0);
            (0..yi)
                .map(|v| {
                    others[i] = v;
                    mi.map[m.dom.index_of_coords(&others)]
                })
                .collect()
        })
        .collect();
    Ok(Transpose { rest, rows })
}

pub fn transpose_is_constant(m: &FinFn, i: usize) -> Result<bool> {
    Ok(exponential_transpose(m, i)?.is_constant())
}

/// The pullback `Y x_{Y_i} Y = {(y, y') : y_i = y'_i}` as index pairs.
pub fn pullback_pairs(y: &FinSet, i: usize) -> Result<Vec<(usize, usize)>> {
    y.factor(i)?;
    let coords: Vec<usize> = (0..y.len()).map(|a| y.coords(a)[i]).collect();
    let mut pairs = Vec::new();
    for a in 0..y.len() {
        for b in 0..y.len() {
            if coords[a] == coords[b] {
                pairs.push((a, b));
            }
        }
    }
    Ok(pairs)
}

/// `m_i ∘ π1 = m_i ∘ π2` on the pullback of `p_i` along itself.
pub fn invariance_via_pullback(m: &FinFn, i: usize) -> Result<bool> {
    factor_counts(m)?;
    let mi = code_component(m, i)?;
    Ok(pullback_pairs(&m.dom, i)?
        .into_iter()
        .all(|(a, b)| mi.map[a] == mi.map[b]))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularRetraction {
    pub witness: ComponentWitness,
    pub paths: Vec<SearchPath>,
}

/// Componentwise decoders `h_{i,i}: Z_i -> Y_i` with `(∏ h_{i,i}) ∘ m = id`.
pub fn find_modular_retraction(m: &FinFn, budget: u64) -> Result<Option<ModularRetraction>> {
    let n = factor_counts(m)?;
    let mut components = Vec::with_capacity(n);
    let mut paths = Vec::with_capacity(n);
    for i in 0..n {
        let mi = code_component(m, i)?;
        let pi = projection(&m.dom, i)?;
        let (zi, yi) = (m.cod.factor(i)?, m.dom.factor(i)?);
        let (h, path, _) = factor_through(&mi.map, zi.len(), &pi.map, yi.len(), budget);
        let Some(h) = h else { return Ok(None) };
        components.push(FinFn::new(zi.clone(), yi.clone(), h)?);
        paths.push(path);
    }
    let witness = ComponentWitness { components };
    debug_assert!({
        let h = witness.product()?;
        (0..m.dom.len()).all(|y| h.map[m.map[y]] == y)
    });
    Ok(Some(ModularRetraction { witness, paths }))
}

/// Entry `(i, j)` of the missing-information matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InfoEntry {
    Diagonal,
    /// No `h_{i,j}` exists: code `i` does not encode factor `j`.
    Missing,
    /// Some `h_{i,j}` recovers factor `j` from code `i`.
    Recoverable(Vec<usize>),
    Undecided { candidates: Option<u64>, budget: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfoMatrix {
    pub entries: Vec<Vec<InfoEntry>>,
}

impl InfoMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// `Some(true)` when every off-diagonal entry is missing, `None` when an
    /// entry is undecided and no decided entry refutes the property.
    pub fn all_missing(&self) -> Option<bool> {
        let mut undecided = false;
        for e in self.entries.iter().flatten() {
            match e {
                InfoEntry::Recoverable(_) => return Some(false),
                InfoEntry::Undecided { .. } => undecided = true,
                _ => {}
            }
        }
        (!undecided).then_some(true)
    }
}

/// For each `i != j`, decide whether some `h_{i,j}: Z_i -> Y_j` satisfies
/// `h_{i,j} ∘ m_i = p_j`, by search over all `|Y_j|^|Z_i|` candidates.
pub fn missing_information_search(m: &FinFn, budget: u64) -> Result<InfoMatrix> {
    let n = factor_counts(m)?;
    let codes: Vec<FinFn> = (0..n).map(|i| code_component(m, i)).collect::<Result<_>>()?;
    let projections: Vec<FinFn> = (0..n).map(|j| projection(&m.dom, j)).collect::<Result<_>>()?;
    let mut entries = vec![vec![InfoEntry::Diagonal; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (zi, yj) = (m.cod.factor(i)?.len(), m.dom.factor(j)?.len());
            let (_, _, outcome) = factor_through(&codes[i].map, zi, &projections[j].map, yj, budget);
            entries[i][j] = match outcome {
                SearchOutcome::Found(h) => InfoEntry::Recoverable(h),
                SearchOutcome::NotFound => InfoEntry::Missing,
                SearchOutcome::OverBudget { candidates, budget } => {
                    InfoEntry::Undecided { candidates, budget }
                }
            };
        }
    }
    Ok(InfoMatrix { entries })
}

/// `f ∘ g = id` and `g ∘ f = id`.
pub fn is_inverse(f: &FinFn, g: &FinFn) -> Result<bool> {
    if !f.cod.same_carrier(&g.dom) || !g.cod.same_carrier(&f.dom) {
        return Err(mismatch("is_inverse", "maps do not form a round trip"));
    }
    let fg = compose(g, f)?;
    let gf = compose(f, g)?;
    let id = |h: &FinFn| h.map.iter().enumerate().all(|(i, &v)| i == v);
    Ok(id(&fg) && id(&gf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{AllMaps, DEFAULT_BUDGET};

    fn bits() -> FinSet {
        FinSet::range(2)
    }

    fn square() -> FinSet {
        FinSet::product(&[bits(), bits()]).unwrap()
    }

    fn map(dom: &FinSet, cod: &FinSet, table: &[usize]) -> FinFn {
        FinFn::new(dom.clone(), cod.clone(), table.to_vec()).unwrap()
    }

    #[test]
    fn set_construction_rejects_bad_input() {
        assert!(FinSet::new(["a", "a"]).is_err());
        assert!(FinSet::product(&[]).is_err());
        assert!(FinSet::product(&[bits(), FinSet::range(0)]).is_err());
        assert!(FinFn::new(bits(), bits(), vec![0]).is_err());
        assert!(FinFn::new(bits(), bits(), vec![0, 2]).is_err());
    }

    #[test]
    fn composition_laws() {
        let a = FinSet::new(["a", "b"]).unwrap();
        let x = FinSet::new(["x"]).unwrap();
        let f = map(&a, &bits(), &[0, 1]);
        let g = map(&bits(), &x, &[0, 0]);
        assert_eq!(compose(&FinFn::identity(&a), &f).unwrap(), f);
        assert_eq!(compose(&f, &FinFn::identity(&bits())).unwrap(), f);
        assert_eq!(compose(&f, &g).unwrap().table(), &[0, 0]);
        assert!(compose(&g, &f).is_err());
    }

    #[test]
    fn composition_is_associative_on_small_sets() {
        for n in 1..=2 {
            let s = FinSet::range(n);
            let maps: Vec<FinFn> = AllMaps::new(n, n).map(|t| map(&s, &s, &t)).collect();
            for f in &maps {
                for g in &maps {
                    for h in &maps {
                        let left = compose(&compose(f, g).unwrap(), h).unwrap();
                        let right = compose(f, &compose(g, h).unwrap()).unwrap();
                        assert_eq!(left, right);
                    }
                }
            }
        }
    }

    #[test]
    fn projections_and_pairing() {
        let xy = FinSet::new(["x", "y"]).unwrap();
        let prod = CartesianProduct::new(&[bits(), xy.clone()]).unwrap();
        assert_eq!(prod.product.len(), 4);
        assert_eq!(prod.product.labels()[2], "(1,x)");
        assert_eq!(prod.projections[0].apply(2), 1);
        assert_eq!(prod.projections[1].apply(2), 0);
        let id = prod.pair(&prod.projections).unwrap();
        assert_eq!(id, FinFn::identity(&prod.product));
        let wrong = map(&xy, &bits(), &[0, 1]);
        assert!(prod.pair(&[wrong.clone(), wrong]).is_err());
    }

    #[test]
    fn swap_is_an_involution() {
        let three = FinSet::range(3);
        let beta = swap(&bits(), &three).unwrap();
        let back = swap(&three, &bits()).unwrap();
        let round = compose(&beta, &back).unwrap();
        for y in 0..6 {
            assert_eq!(round.apply(y), y);
        }
    }

    #[test]
    fn diagonal_and_terminal() {
        let d = diagonal(&bits()).unwrap();
        assert_eq!(d.table(), &[0, 3]);
        let e = terminal(&square());
        assert_eq!(e.cod().len(), 1);
        assert!(e.is_constant());
    }

    #[test]
    fn classification() {
        let id = FinFn::identity(&bits());
        assert_eq!(
            classify_morphism(&id),
            MorphismClass { mono: true, epi: true, iso: true }
        );
        let c = map(&bits(), &bits(), &[1, 1]);
        let k = classify_morphism(&c);
        assert!(!k.mono && !k.epi);
        let inc = map(&FinSet::range(1), &bits(), &[0]);
        let k = classify_morphism(&inc);
        assert!(k.mono && !k.epi);
    }

    #[test]
    fn retraction_search() {
        let id = FinFn::identity(&bits());
        assert_eq!(find_retraction(&id, DEFAULT_BUDGET).unwrap().map, id);
        let c = map(&bits(), &bits(), &[0, 0]);
        assert!(find_retraction(&c, DEFAULT_BUDGET).is_none());

        // brute force over all 8 maps {0,1,2} -> {0,1}
        let m = map(&bits(), &FinSet::range(3), &[0, 2]);
        let brute: Vec<Vec<usize>> = AllMaps::new(3, 2)
            .filter(|h| (0..2).all(|y| h[m.apply(y)] == y))
            .collect();
        assert_eq!(brute, vec![vec![0, 0, 1], vec![0, 1, 1]]);
        let r = find_retraction(&m, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.path, SearchPath::Exhaustive);
        assert_eq!(r.map.table(), brute[0].as_slice());
    }

    #[test]
    fn construction_shortcut_matches_exhaustive() {
        let m = map(&bits(), &FinSet::range(3), &[0, 2]);
        let exhaustive = find_retraction(&m, DEFAULT_BUDGET).unwrap();
        let built = find_retraction(&m, 1).unwrap();
        assert_eq!(built.path, SearchPath::Construction);
        assert_eq!(built.map, exhaustive.map);
        let c = map(&bits(), &FinSet::range(3), &[1, 1]);
        assert!(find_retraction(&c, 1).is_none());
    }

    #[test]
    fn product_morphism_detection() {
        let one = FinSet::product(&[FinSet::one(), FinSet::one()]).unwrap();
        let e = FinFn::constant(&square(), &one, 0).unwrap();
        let w = is_product_morphism(&e).unwrap().unwrap();
        assert!(w.components.iter().all(FinFn::is_constant));

        let beta = swap(&bits(), &bits()).unwrap();
        assert!(is_product_morphism(&beta).unwrap().is_none());
        assert!(!transpose_is_constant(&beta, 0).unwrap());
        assert!(!invariance_via_pullback(&beta, 0).unwrap());
        assert!(transpose_is_constant(&e, 0).unwrap() && transpose_is_constant(&e, 1).unwrap());
        assert!(invariance_via_pullback(&e, 1).unwrap());

        let plain = FinFn::identity(&FinSet::range(4));
        assert_eq!(is_product_morphism(&plain), Err(Error::MissingFactors("domain")));
        let three = FinSet::product(&[bits(), bits(), bits()]).unwrap();
        let bad = FinFn::constant(&square(), &three, 0).unwrap();
        assert_eq!(
            is_product_morphism(&bad),
            Err(Error::FactorCountMismatch { dom: 2, cod: 3 })
        );
    }

    #[test]
    fn products_of_maps_are_recovered() {
        let three = FinSet::range(3);
        let f1s: Vec<FinFn> = AllMaps::new(3, 3).map(|t| map(&three, &three, &t)).collect();
        let f2s: Vec<FinFn> = AllMaps::new(2, 3).map(|t| map(&bits(), &three, &t)).collect();
        for f1 in &f1s {
            for f2 in &f2s {
                let m = FinFn::product(&[f1.clone(), f2.clone()]).unwrap();
                let w = is_product_morphism(&m).unwrap().unwrap();
                assert_eq!(w.components[0].table(), f1.table());
                assert_eq!(w.components[1].table(), f2.table());
            }
        }
    }

    #[test]
    fn component_is_basepoint_independent() {
        let f1 = map(&bits(), &FinSet::range(3), &[2, 0]);
        let f2 = map(&bits(), &bits(), &[1, 1]);
        let m = FinFn::product(&[f1, f2]).unwrap();
        let at0 = extract_components(&m, &[0, 0]).unwrap();
        let at1 = extract_components(&m, &[1, 1]).unwrap();
        assert_eq!(at0, at1);
        assert!(extract_components(&m, &[2, 0]).is_err());
    }

    #[test]
    fn duplicate_has_modular_decoder() {
        let y = square();
        let z = FinSet::product(&[y.clone(), y.clone()]).unwrap();
        let m = diagonal(&y).unwrap().with_carriers(y.clone(), z).unwrap();
        assert!(is_product_morphism(&m).unwrap().is_none());
        let r = find_modular_retraction(&m, DEFAULT_BUDGET).unwrap().unwrap();
        let p0 = projection(&y, 0).unwrap();
        let p1 = projection(&y, 1).unwrap();
        assert_eq!(r.witness.components[0].table(), p0.table());
        assert_eq!(r.witness.components[1].table(), p1.table());

        let info = missing_information_search(&m, DEFAULT_BUDGET).unwrap();
        assert_eq!(info.entries[0][1], InfoEntry::Recoverable(p1.table().to_vec()));
        assert_eq!(info.all_missing(), Some(false));
    }

    #[test]
    fn constant_has_no_modular_decoder() {
        let one = FinSet::product(&[FinSet::one(), FinSet::one()]).unwrap();
        let e = FinFn::constant(&square(), &one, 0).unwrap();
        assert!(find_modular_retraction(&e, DEFAULT_BUDGET).unwrap().is_none());
    }

    #[test]
    fn modular_codes_miss_other_factors() {
        let three = FinSet::range(3);
        let f1 = map(&bits(), &three, &[0, 2]);
        let f2 = map(&three, &bits(), &[0, 1, 1]);
        let m = FinFn::product(&[f1, f2]).unwrap();
        let info = missing_information_search(&m, DEFAULT_BUDGET).unwrap();
        assert_eq!(info.entries[0][1], InfoEntry::Missing);
        assert_eq!(info.entries[1][0], InfoEntry::Missing);
        assert_eq!(info.all_missing(), Some(true));
        let tight = missing_information_search(&m, 1).unwrap();
        assert!(matches!(tight.entries[0][1], InfoEntry::Undecided { .. }));
        assert_eq!(tight.all_missing(), None);
    }

    #[test]
    fn single_factor_matrix_is_empty_off_diagonal() {
        let y = FinSet::product(&[FinSet::range(3)]).unwrap();
        let m = FinFn::identity(&y);
        let info = missing_information_search(&m, DEFAULT_BUDGET).unwrap();
        assert_eq!(info.entries, vec![vec![InfoEntry::Diagonal]]);
        assert_eq!(info.all_missing(), Some(true));
        assert!(transpose_is_constant(&m, 0).unwrap());
    }

    #[test]
    fn inverse_pairs() {
        let id = FinFn::identity(&square());
        assert!(is_inverse(&id, &id).unwrap());
        let beta = swap(&bits(), &bits()).unwrap();
        assert!(is_inverse(&beta, &beta).unwrap());
        let inc = map(&FinSet::range(1), &bits(), &[0]);
        let back = map(&bits(), &FinSet::range(1), &[0, 0]);
        assert!(!is_inverse(&back, &inc).unwrap());
        assert!(is_inverse(&inc, &inc).is_err());
    }

    #[test]
    fn exponential_set_size() {
        let e = FinSet::exponential(&FinSet::range(3), &bits()).unwrap();
        assert_eq!(e.len(), 9);
        assert_eq!(e.label(1), "[0->0,1->1]");
    }
}
