//! Finite monoids as single-object schemes, the three-object product scheme,
//! models (functors into finite sets) and equivariant maps (natural
//! transformations between models).
//!
//! Composition convention: `(a · b)_A = a_A ∘ b_A`, i.e. the action of a
//! product applies the right factor first. Group-action literature is not
//! uniform here; every predicate in this module uses this order.
//!
//! The product scheme over monoids `M1`, `M2` has objects `s1`, `s2` and
//! `s1 x s2` (indices 0, 1, 2), endomorphisms `M1`, `M2` and `M1 x M2`, and
//! the morphisms `s1 x s2 -> s_i`, identified with `M_i` via
//! `p_i ∘ (a1, a2) = a_i ∘ p_i`. All other hom-sets are empty.

use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Error, Result};
use crate::finset::{CartesianProduct, FinFn, FinSet};
use crate::search;

/// Unchecked binary operation table with a designated unit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpTable {
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
    pub unit: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Violation {
    Shape(String),
    LeftUnit(usize),
    RightUnit(usize),
    /// `a(bc) != (ab)c`.
    Associativity(usize, usize, usize),
}

fn check_shape(t: &OpTable) -> Result<(), Violation> {
    let n = t.elements.len();
    if n == 0 {
        return Err(Violation::Shape("no elements".into()));
    }
    if t.unit >= n {
        return Err(Violation::Shape("unit out of range".into()));
    }
    if t.table.len() != n || t.table.iter().any(|r| r.len() != n) {
        return Err(Violation::Shape(format!("table is not {n}x{n}")));
    }
    if t.table.iter().flatten().any(|&v| v >= n) {
        return Err(Violation::Shape("product out of range".into()));
    }
    FinSet::new(t.elements.iter().cloned()).map_err(|e| Violation::Shape(e.to_string()))?;
    Ok(())
}

/// Unit laws only.
pub fn validate_magma(t: &OpTable) -> Result<(), Violation> {
    check_shape(t)?;
    let e = t.unit;
    for a in 0..t.elements.len() {
        if t.table[e][a] != a {
            return Err(Violation::LeftUnit(a));
        }
        if t.table[a][e] != a {
            return Err(Violation::RightUnit(a));
        }
    }
    Ok(())
}

/// Unit laws and associativity over all triples; reports the first violation.
pub fn validate_monoid(t: &OpTable) -> Result<(), Violation> {
    validate_magma(t)?;
    let n = t.elements.len();
    let mul = |a: usize, b: usize| t.table[a][b];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if mul(a, mul(b, c)) != mul(mul(a, b), c) {
                    return Err(Violation::Associativity(a, b, c));
                }
            }
        }
    }
    Ok(())
}

/// A unital magma.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MagmaTable {
    ops: OpTable,
}

impl MagmaTable {
    pub fn new(ops: OpTable) -> Result<Self> {
        validate_magma(&ops).map_err(|v| Error::InvalidAlgebra(format!("{v:?}")))?;
        Ok(MagmaTable { ops })
    }

    pub fn len(&self) -> usize {
        self.ops.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn unit(&self) -> usize {
        self.ops.unit
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.ops.table[a][b]
    }

    pub fn elements(&self) -> &[String] {
        &self.ops.elements
    }

    pub fn table(&self) -> &OpTable {
        &self.ops
    }
}

/// A finite monoid given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidTable {
    ops: OpTable,
}

impl MonoidTable {
    pub fn new(ops: OpTable) -> Result<Self> {
        validate_monoid(&ops).map_err(|v| Error::InvalidAlgebra(format!("{v:?}")))?;
        Ok(MonoidTable { ops })
    }

    /// The cyclic group `Z_n` under addition.
    pub fn cyclic(n: usize) -> Self {
        let elements = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        MonoidTable {
            ops: OpTable {
                elements,
                table,
                unit: 0,
            },
        }
    }

    /// `{0, ..., cap}` under addition saturating at `cap`: the free monoid on
    /// one generator truncated at length `cap`.
    pub fn saturating(cap: usize) -> Self {
        let n = cap + 1;
        let elements = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b).min(cap)).collect())
            .collect();
        MonoidTable {
            ops: OpTable {
                elements,
                table,
                unit: 0,
            },
        }
    }

    /// The direct product, element `(a, b)` at index `a * |M2| + b`.
    pub fn product(m1: &MonoidTable, m2: &MonoidTable) -> Self {
        let (n1, n2) = (m1.len(), m2.len());
        let mut elements = Vec::with_capacity(n1 * n2);
        for a in m1.elements() {
            for b in m2.elements() {
                elements.push(format!("({a},{b})"));
            }
        }
        let table = (0..n1 * n2)
            .map(|x| {
                (0..n1 * n2)
                    .map(|y| m1.mul(x / n2, y / n2) * n2 + m2.mul(x % n2, y % n2))
                    .collect()
            })
            .collect();
        MonoidTable {
            ops: OpTable {
                elements,
                table,
                unit: m1.unit() * n2 + m2.unit(),
            },
        }
    }

    pub fn len(&self) -> usize {
        self.ops.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn unit(&self) -> usize {
        self.ops.unit
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.ops.table[a][b]
    }

    pub fn elements(&self) -> &[String] {
        &self.ops.elements
    }

    pub fn table(&self) -> &OpTable {
        &self.ops
    }

    pub fn is_group(&self) -> bool {
        let e = self.unit();
        (0..self.len()).all(|a| (0..self.len()).any(|b| self.mul(a, b) == e && self.mul(b, a) == e))
    }

    pub fn as_magma(&self) -> MagmaTable {
        MagmaTable {
            ops: self.ops.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductScheme {
    pub m1: MonoidTable,
    pub m2: MonoidTable,
    joint: MonoidTable,
}

impl ProductScheme {
    pub const S1: usize = 0;
    pub const S2: usize = 1;
    pub const S12: usize = 2;

    pub fn new(m1: MonoidTable, m2: MonoidTable) -> Self {
        let joint = MonoidTable::product(&m1, &m2);
        ProductScheme { m1, m2, joint }
    }

    /// `M1 x M2`, the endomorphisms of `s1 x s2`.
    pub fn joint(&self) -> &MonoidTable {
        &self.joint
    }

    pub fn split(&self, x: usize) -> (usize, usize) {
        (x / self.m2.len(), x % self.m2.len())
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        a * self.m2.len() + b
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scheme {
    Monoid(MonoidTable),
    Product(ProductScheme),
}

impl Scheme {
    pub fn object_count(&self) -> usize {
        match self {
            Scheme::Monoid(_) => 1,
            Scheme::Product(_) => 3,
        }
    }

    /// The endomorphism monoid of an object.
    pub fn monoid_at(&self, object: usize) -> &MonoidTable {
        match (self, object) {
            (Scheme::Monoid(m), _) => m,
            (Scheme::Product(p), 0) => &p.m1,
            (Scheme::Product(p), 1) => &p.m2,
            (Scheme::Product(p), _) => p.joint(),
        }
    }
}

/// A monoid acting on a finite set: the image of a single-object scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidAction {
    pub carrier: FinSet,
    /// One endofunction per monoid element.
    pub maps: Vec<FinFn>,
}

impl MonoidAction {
    pub fn new(carrier: FinSet, tables: Vec<Vec<usize>>) -> Result<Self> {
        let maps = tables
            .into_iter()
            .map(|t| FinFn::new(carrier.clone(), carrier.clone(), t))
            .collect::<Result<_>>()?;
        Ok(MonoidAction { carrier, maps })
    }

    /// Every element acts as the identity.
    pub fn trivial(m: &MonoidTable, carrier: &FinSet) -> Self {
        MonoidAction {
            carrier: carrier.clone(),
            maps: vec![FinFn::identity(carrier); m.len()],
        }
    }

    /// `Z_n` (or any cyclic-indexed monoid) acting by rotation `x ↦ x + a mod |X|`.
    pub fn rotation(m: &MonoidTable, carrier: &FinSet) -> Result<Self> {
        let n = carrier.len();
        let tables = (0..m.len()).map(|a| (0..n).map(|x| (x + a) % n).collect()).collect();
        MonoidAction::new(carrier.clone(), tables)
    }

    /// `(a, b)` acting as `a_1 x b_2` on a literal product carrier.
    pub fn componentwise(s: &ProductScheme, a1: &MonoidAction, a2: &MonoidAction) -> Result<Self> {
        let prod = FinSet::product(&[a1.carrier.clone(), a2.carrier.clone()])?;
        let maps = (0..s.joint().len())
            .map(|x| {
                let (a, b) = s.split(x);
                FinFn::product(&[a1.maps[a].clone(), a2.maps[b].clone()])
                    .and_then(|f| f.with_carriers(prod.clone(), prod.clone()))
            })
            .collect::<Result<_>>()?;
        Ok(MonoidAction {
            carrier: prod,
            maps,
        })
    }

    pub fn act(&self, a: usize, x: usize) -> usize {
        self.maps[a].apply(x)
    }
}

/// Functor from a scheme to finite sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeModel {
    /// One action per scheme object.
    pub objects: Vec<MonoidAction>,
    /// Images of `p1`, `p2` for product schemes; empty otherwise.
    pub projections: Vec<FinFn>,
}

impl SchemeModel {
    pub fn single(action: MonoidAction) -> Self {
        SchemeModel {
            objects: vec![action],
            projections: Vec::new(),
        }
    }

    pub fn product(f1: MonoidAction, f2: MonoidAction, f12: MonoidAction, q1: FinFn, q2: FinFn) -> Self {
        SchemeModel {
            objects: vec![f1, f2, f12],
            projections: vec![q1, q2],
        }
    }

    /// The product-preserving model with `F(s1 x s2) = F(s1) x F(s2)`.
    pub fn componentwise(s: &ProductScheme, f1: MonoidAction, f2: MonoidAction) -> Result<Self> {
        let f12 = MonoidAction::componentwise(s, &f1, &f2)?;
        let q1 = crate::finset::projection(&f12.carrier, 0)?;
        let q2 = crate::finset::projection(&f12.carrier, 1)?;
        Ok(SchemeModel::product(f1, f2, f12, q1, q2))
    }

    /// Every object sent to the one-point set.
    pub fn constant_one(scheme: &Scheme) -> Self {
        let one = FinSet::one();
        let objects = (0..scheme.object_count())
            .map(|o| MonoidAction::trivial(scheme.monoid_at(o), &one))
            .collect();
        let projections = match scheme {
            Scheme::Monoid(_) => Vec::new(),
            Scheme::Product(_) => vec![FinFn::identity(&one), FinFn::identity(&one)],
        };
        SchemeModel {
            objects,
            projections,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelViolation {
    Shape(String),
    /// `F(e) != id` at an object.
    Unit { object: usize },
    /// `F(ab) != F(a) ∘ F(b)`.
    Composition { object: usize, a: usize, b: usize },
    /// `q_i ∘ F((a1, a2)) != F_i(a_i) ∘ q_i`.
    Projection { which: usize, element: usize },
}

fn action_functorial(m: &MonoidTable, act: &MonoidAction, object: usize) -> Result<(), ModelViolation> {
    if act.maps.len() != m.len() {
        return Err(ModelViolation::Shape(format!(
            "object {object}: {} maps for {} elements",
            act.maps.len(),
            m.len()
        )));
    }
    for (a, f) in act.maps.iter().enumerate() {
        if !f.dom().same_carrier(&act.carrier) || !f.cod().same_carrier(&act.carrier) {
            return Err(ModelViolation::Shape(format!("object {object}: map {a} is not an endomorphism")));
        }
    }
    let n = act.carrier.len();
    if (0..n).any(|x| act.act(m.unit(), x) != x) {
        return Err(ModelViolation::Unit { object });
    }
    for a in 0..m.len() {
        for b in 0..m.len() {
            let ab = m.mul(a, b);
            if (0..n).any(|x| act.act(ab, x) != act.act(a, act.act(b, x))) {
                return Err(ModelViolation::Composition { object, a, b });
            }
        }
    }
    Ok(())
}

/// Functoriality at every object and, for product schemes, naturality of
/// the projections.
pub fn validate_model(scheme: &Scheme, model: &SchemeModel) -> Result<(), ModelViolation> {
    if model.objects.len() != scheme.object_count() {
        return Err(ModelViolation::Shape(format!(
            "{} objects for a scheme with {}",
            model.objects.len(),
            scheme.object_count()
        )));
    }
    for (o, act) in model.objects.iter().enumerate() {
        action_functorial(scheme.monoid_at(o), act, o)?;
    }
    if let Scheme::Product(s) = scheme {
        if model.projections.len() != 2 {
            return Err(ModelViolation::Shape("product model needs two projections".into()));
        }
        let top = &model.objects[ProductScheme::S12];
        for (which, q) in model.projections.iter().enumerate() {
            let target = &model.objects[which];
            if !q.dom().same_carrier(&top.carrier) || !q.cod().same_carrier(&target.carrier) {
                return Err(ModelViolation::Shape(format!("projection {which} has wrong carriers")));
            }
            for x in 0..s.joint().len() {
                let (a, b) = s.split(x);
                let ai = if which == 0 { a } else { b };
                let bad = (0..top.carrier.len()).any(|v| q.apply(top.act(x, v)) != target.act(ai, q.apply(v)));
                if bad {
                    return Err(ModelViolation::Projection { which, element: x });
                }
            }
        }
    } else if !model.projections.is_empty() {
        return Err(ModelViolation::Shape("single-object model with projections".into()));
    }
    Ok(())
}

/// `f ∘ a_A = a_B ∘ f` for every monoid element.
pub fn is_equivariant(f: &FinFn, a: &MonoidAction, b: &MonoidAction) -> Result<bool> {
    if !f.dom().same_carrier(&a.carrier) || !f.cod().same_carrier(&b.carrier) {
        return Err(mismatch("is_equivariant", "map does not connect the carriers"));
    }
    if a.maps.len() != b.maps.len() {
        return Err(mismatch("is_equivariant", "actions of different monoids"));
    }
    Ok(elements_commute(f, a, b, 0..a.maps.len()))
}

fn elements_commute(f: &FinFn, a: &MonoidAction, b: &MonoidAction, elems: impl IntoIterator<Item = usize>) -> bool {
    let n = a.carrier.len();
    elems
        .into_iter()
        .all(|e| (0..n).all(|x| f.apply(a.act(e, x)) == b.act(e, f.apply(x))))
}

/// Equivariance of `f` at one scheme object.
pub fn is_equivariant_at(f: &FinFn, a: &SchemeModel, b: &SchemeModel, object: usize) -> Result<bool> {
    let (Some(src), Some(dst)) = (a.objects.get(object), b.objects.get(object)) else {
        return Err(mismatch("is_equivariant_at", "object out of range"));
    };
    is_equivariant(f, src, dst)
}

/// A family of maps `μ_s: F(s) -> G(s)`, one per scheme object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivariantMap {
    pub components: Vec<FinFn>,
}

/// Naturality squares for every endomorphism and every projection.
pub fn is_natural(mu: &EquivariantMap, f: &SchemeModel, g: &SchemeModel) -> Result<bool> {
    if mu.components.len() != f.objects.len() || f.objects.len() != g.objects.len() {
        return Err(mismatch("is_natural", "object counts differ"));
    }
    for (o, c) in mu.components.iter().enumerate() {
        if !is_equivariant(c, &f.objects[o], &g.objects[o])? {
            return Ok(false);
        }
    }
    for (which, (qf, qg)) in f.projections.iter().zip(&g.projections).enumerate() {
        let top = &mu.components[ProductScheme::S12];
        let side = &mu.components[which];
        let n = f.objects[ProductScheme::S12].carrier.len();
        if (0..n).any(|x| side.apply(qf.apply(x)) != qg.apply(top.apply(x))) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The pointwise functor product of actions of one monoid.
pub fn functor_product(factors: &[MonoidAction]) -> Result<MonoidAction> {
    let k = factors.first().map(|f| f.maps.len()).unwrap_or(0);
    if factors.iter().any(|f| f.maps.len() != k) {
        return Err(mismatch("functor_product", "actions of different monoids"));
    }
    let carriers: Vec<FinSet> = factors.iter().map(|f| f.carrier.clone()).collect();
    let carrier = FinSet::product(&carriers)?;
    let maps = (0..k)
        .map(|a| {
            let parts: Vec<FinFn> = factors.iter().map(|f| f.maps[a].clone()).collect();
            FinFn::product(&parts).and_then(|p| p.with_carriers(carrier.clone(), carrier.clone()))
        })
        .collect::<Result<_>>()?;
    Ok(MonoidAction { carrier, maps })
}

/// The pairing of `components` is equivariant into the functor product of
/// the `targets`.
pub fn check_dis2(components: &[FinFn], source: &MonoidAction, targets: &[MonoidAction]) -> Result<bool> {
    if components.len() != targets.len() || components.is_empty() {
        return Err(mismatch("check_dis2", "one component per target model is required"));
    }
    let product = functor_product(targets)?;
    let cart = CartesianProduct {
        product: product.carrier.clone(),
        projections: Vec::new(),
    };
    let paired = cart.pair(components)?;
    is_equivariant(&paired, source, &product)
}

/// Equivariance for actions of `M1 x M2`, checked on the generators
/// `(a, e)` and `(e, b)`.
pub fn check_dis2prime(s: &ProductScheme, f: &FinFn, source: &MonoidAction, target: &MonoidAction) -> Result<bool> {
    let k = s.joint().len();
    if source.maps.len() != k || target.maps.len() != k {
        return Err(mismatch("check_dis2prime", "models are not actions of M1 x M2"));
    }
    if !f.dom().same_carrier(&source.carrier) || !f.cod().same_carrier(&target.carrier) {
        return Err(mismatch("check_dis2prime", "map does not connect the carriers"));
    }
    let firsts = (0..s.m1.len()).map(|a| s.join(a, s.m2.unit()));
    let seconds = (0..s.m2.len()).map(|b| s.join(s.m1.unit(), b));
    Ok(elements_commute(f, source, target, firsts.chain(seconds)))
}

/// The pairing `<F(p1), F(p2)>` is a bijection transporting `F((a, b))` to
/// `F1(a) x F2(b)`.
pub fn is_product_preserving(s: &ProductScheme, model: &SchemeModel) -> Result<bool> {
    if model.objects.len() != 3 || model.projections.len() != 2 {
        return Err(mismatch("is_product_preserving", "not a product-scheme model"));
    }
    let pairing = model_pairing(model)?;
    if !(pairing.is_injective() && pairing.is_surjective()) {
        return Ok(false);
    }
    let [f1, f2, f12] = [&model.objects[0], &model.objects[1], &model.objects[2]];
    let prod = pairing.cod().clone();
    for x in 0..s.joint().len() {
        let (a, b) = s.split(x);
        let side = FinFn::product(&[f1.maps[a].clone(), f2.maps[b].clone()])?;
        let ok = (0..f12.carrier.len()).all(|v| pairing.apply(f12.act(x, v)) == side.apply(pairing.apply(v)));
        if !ok {
            return Ok(false);
        }
    }
    debug_assert_eq!(prod.len(), f1.carrier.len() * f2.carrier.len());
    Ok(true)
}

/// `<F(p1), F(p2)>: F(s1 x s2) -> F(s1) x F(s2)`.
pub fn model_pairing(model: &SchemeModel) -> Result<FinFn> {
    let cart = CartesianProduct::new(&[model.objects[0].carrier.clone(), model.objects[1].carrier.clone()])?;
    cart.pair(&model.projections)
}

/// Distinct scheme morphisms have distinct images, for every ordered pair of objects.
pub fn is_faithful(scheme: &Scheme, model: &SchemeModel) -> bool {
    fn injective(images: &[Vec<usize>]) -> bool {
        let mut seen = std::collections::HashSet::new();
        images.iter().all(|t| seen.insert(t.clone()))
    }
    let endo = |o: usize| -> Vec<Vec<usize>> {
        model.objects[o].maps.iter().map(|f| f.table().to_vec()).collect()
    };
    match scheme {
        Scheme::Monoid(_) => injective(&endo(0)),
        Scheme::Product(_) => {
            let mut ok = (0..3).all(|o| injective(&endo(o)));
            // Hom(s1 x s2, s_i) ≅ M_i via a ↦ F_i(a) ∘ q_i
            for (which, q) in model.projections.iter().enumerate() {
                let images: Vec<Vec<usize>> = model.objects[which]
                    .maps
                    .iter()
                    .map(|f| q.table().iter().map(|&v| f.apply(v)).collect())
                    .collect();
                ok &= injective(&images);
            }
            ok
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RetractionSearch {
    Found(EquivariantMap),
    NotFound,
    Undecided { object: usize, candidates: Option<u64>, budget: u64 },
}

/// An equivariant `h: G ⇒ F` with `h ∘ μ = id` at every object; the first
/// witness in lexicographic order over objects then values.
pub fn find_equivariant_retraction(
    mu: &EquivariantMap,
    fy: &SchemeModel,
    fz: &SchemeModel,
    budget: u64,
) -> Result<RetractionSearch> {
    let objects = fy.objects.len();
    if mu.components.len() != objects || fz.objects.len() != objects {
        return Err(mismatch("find_equivariant_retraction", "object counts differ"));
    }
    let mut candidates: Vec<Vec<Vec<usize>>> = Vec::with_capacity(objects);
    for o in 0..objects {
        let (src, dst, m) = (&fy.objects[o], &fz.objects[o], &mu.components[o]);
        let (ny, nz) = (src.carrier.len(), dst.carrier.len());
        let mut pinned: Vec<Option<usize>> = vec![None; nz];
        let mut conflict = vec![false; nz];
        for y in 0..ny {
            let z = m.apply(y);
            match pinned[z] {
                None => pinned[z] = Some(y),
                Some(v) if v != y => conflict[z] = true,
                Some(_) => {}
            }
        }
        let found = search::all_maps_where(nz, ny, budget, |h| {
            let p = h.len() - 1;
            if conflict[p] || pinned[p].is_some_and(|v| v != h[p]) {
                return false;
            }
            // naturality squares whose corners are all assigned and involve p
            (0..dst.maps.len()).all(|a| {
                (0..=p).all(|z| {
                    let az = dst.act(a, z);
                    if az > p || (z != p && az != p) {
                        return true;
                    }
                    h[az] == src.act(a, h[z])
                })
            })
        });
        match found {
            Ok(list) if list.is_empty() => return Ok(RetractionSearch::NotFound),
            Ok(list) => candidates.push(list),
            Err(search::SearchOutcome::OverBudget { candidates, budget }) => {
                return Ok(RetractionSearch::Undecided {
                    object: o,
                    candidates,
                    budget,
                })
            }
            Err(_) => unreachable!("only budget errors are reported"),
        }
    }
    let build = |choice: &[usize]| -> Result<EquivariantMap> {
        let components = choice
            .iter()
            .enumerate()
            .map(|(o, &k)| {
                FinFn::new(
                    fz.objects[o].carrier.clone(),
                    fy.objects[o].carrier.clone(),
                    candidates[o][k].clone(),
                )
            })
            .collect::<Result<_>>()?;
        Ok(EquivariantMap { components })
    };
    let mut choice = vec![0usize; objects];
    loop {
        let h = build(&choice)?;
        if is_natural(&h, fz, fy)? {
            return Ok(RetractionSearch::Found(h));
        }
        let mut pos = objects;
        loop {
            if pos == 0 {
                return Ok(RetractionSearch::NotFound);
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < candidates[pos].len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}

/// Transported through the pairing bijections, `μ_{s1 x s2} = μ_{s1} x μ_{s2}`.
pub fn component_at_product_splits(mu: &EquivariantMap, fy: &SchemeModel, fz: &SchemeModel) -> Result<bool> {
    let py = model_pairing(fy)?;
    let pz = model_pairing(fz)?;
    let side = FinFn::product(&[mu.components[0].clone(), mu.components[1].clone()])?;
    let top = &mu.components[ProductScheme::S12];
    Ok((0..top.dom().len()).all(|x| pz.apply(top.apply(x)) == side.apply(py.apply(x))))
}

/// A single-object model together with a binary operation `c: X x X -> X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryOpModel {
    pub action: MonoidAction,
    pub op: FinFn,
}

impl BinaryOpModel {
    pub fn new(action: MonoidAction, op_table: Vec<Vec<usize>>) -> Result<Self> {
        let x = action.carrier.clone();
        let xx = FinSet::product(&[x.clone(), x.clone()])?;
        if op_table.len() != x.len() || op_table.iter().any(|r| r.len() != x.len()) {
            return Err(Error::InvalidMorphism("operation table has the wrong shape".into()));
        }
        let op = FinFn::new(xx, x, op_table.into_iter().flatten().collect())?;
        Ok(BinaryOpModel { action, op })
    }

    fn apply(&self, a: usize, b: usize) -> usize {
        self.op.apply(a * self.action.carrier.len() + b)
    }
}

/// `f(c_X(a_X x1, b_X x2)) = c_Z(a_Z f(x1), b_Z f(x2))` for all elements and
/// all monoid pairs `(a, b)`.
pub fn binary_op_naturality(x: &BinaryOpModel, z: &BinaryOpModel, f: &FinFn) -> Result<bool> {
    if x.action.maps.len() != z.action.maps.len() {
        return Err(mismatch("binary_op_naturality", "actions of different monoids"));
    }
    if !f.dom().same_carrier(&x.action.carrier) || !f.cod().same_carrier(&z.action.carrier) {
        return Err(mismatch("binary_op_naturality", "map does not connect the carriers"));
    }
    let n = x.action.carrier.len();
    let k = x.action.maps.len();
    for a in 0..k {
        for b in 0..k {
            for x1 in 0..n {
                for x2 in 0..n {
                    let lhs = f.apply(x.apply(x.action.act(a, x1), x.action.act(b, x2)));
                    let rhs = z.apply(z.action.act(a, f.apply(x1)), z.action.act(b, f.apply(x2)));
                    if lhs != rhs {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Default cap on magma size for decomposition search.
pub const MAX_DECOMPOSITION_SIZE: usize = 12;

/// `s1`, `s2` are closed, commute elementwise with each other, and
/// `(m, n) ↦ m ∘ n` is a bijection `s1 x s2 -> M`.
pub fn verify_product_decomposition(g: &MagmaTable, s1: &[usize], s2: &[usize]) -> Result<bool> {
    for (name, s) in [("s1", s1), ("s2", s2)] {
        if !s.contains(&g.unit()) {
            return Err(Error::InvalidAlgebra(format!("{name} does not contain the unit")));
        }
        if s.iter().any(|&a| a >= g.len()) {
            return Err(Error::InvalidAlgebra(format!("{name} has an element out of range")));
        }
    }
    let closed = |s: &[usize]| s.iter().all(|&a| s.iter().all(|&b| s.contains(&g.mul(a, b))));
    if !closed(s1) || !closed(s2) {
        return Ok(false);
    }
    if s1.iter().any(|&m| s2.iter().any(|&n| g.mul(m, n) != g.mul(n, m))) {
        return Ok(false);
    }
    let mut hit = vec![false; g.len()];
    let mut distinct = 0;
    for &m in s1 {
        for &n in s2 {
            if !std::mem::replace(&mut hit[g.mul(m, n)], true) {
                distinct += 1;
            }
        }
    }
    let (mut a, mut b) = (s1.to_vec(), s2.to_vec());
    a.sort_unstable();
    a.dedup();
    b.sort_unstable();
    b.dedup();
    Ok(distinct == g.len() && a.len() * b.len() == g.len())
}

/// Every unordered pair `{s1, s2}` of unit-containing subsets that passes
/// [`verify_product_decomposition`], ordered by subset bitmask.
pub fn find_decompositions(g: &MagmaTable, max_size: usize) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    if g.len() > max_size {
        return Err(Error::SizeCap {
            size: g.len(),
            cap: max_size,
        });
    }
    let n = g.len();
    let members = |mask: u32| -> Vec<usize> { (0..n).filter(|&i| mask & (1 << i) != 0).collect() };
    let unit_bit = 1u32 << g.unit();
    let closed: Vec<u32> = (0..(1u32 << n))
        .filter(|&mask| mask & unit_bit != 0)
        .filter(|&mask| {
            let s = members(mask);
            s.iter().all(|&a| s.iter().all(|&b| mask & (1 << g.mul(a, b)) != 0))
        })
        .collect();
    let mut out = Vec::new();
    for (i, &a) in closed.iter().enumerate() {
        for &b in &closed[i..] {
            if (a.count_ones() * b.count_ones()) as usize != n {
                continue;
            }
            let (s1, s2) = (members(a), members(b));
            if verify_product_decomposition(g, &s1, &s2)? {
                out.push((s1, s2));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{AllMaps, DEFAULT_BUDGET};

    fn z2() -> MonoidTable {
        MonoidTable::cyclic(2)
    }

    fn bits() -> FinSet {
        FinSet::range(2)
    }

    fn flip() -> MonoidAction {
        MonoidAction::rotation(&z2(), &bits()).unwrap()
    }

    fn klein() -> MagmaTable {
        MonoidTable::product(&z2(), &z2()).as_magma()
    }

    #[test]
    fn monoid_validation() {
        assert_eq!(validate_monoid(z2().table()), Ok(()));
        // unit 0; 1 and 2 multiply inconsistently
        let bad = OpTable {
            elements: vec!["e".into(), "a".into(), "b".into()],
            table: vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 2, 2]],
            unit: 0,
        };
        let v = validate_monoid(&bad).unwrap_err();
        let Violation::Associativity(a, b, c) = v else { panic!("{v:?}") };
        let m = |x: usize, y: usize| bad.table[x][y];
        assert_ne!(m(a, m(b, c)), m(m(a, b), c));
        assert_eq!(validate_monoid(MonoidTable::saturating(4).table()), Ok(()));
        let no_unit = OpTable {
            elements: vec!["e".into(), "a".into()],
            table: vec![vec![1, 1], vec![1, 1]],
            unit: 0,
        };
        assert_eq!(validate_monoid(&no_unit), Err(Violation::LeftUnit(0)));
        assert!(z2().is_group());
        assert!(!MonoidTable::saturating(2).is_group());
    }

    #[test]
    fn model_validation() {
        let scheme = Scheme::Monoid(z2());
        assert_eq!(validate_model(&scheme, &SchemeModel::single(flip())), Ok(()));
        let broken = MonoidAction::new(FinSet::range(3), vec![vec![0, 1, 2], vec![1, 2, 0]]).unwrap();
        assert!(matches!(
            validate_model(&scheme, &SchemeModel::single(broken)),
            Err(ModelViolation::Composition { a: 1, b: 1, .. })
        ));
        let s = ProductScheme::new(z2(), z2());
        let model = SchemeModel::componentwise(&s, flip(), flip()).unwrap();
        assert_eq!(validate_model(&Scheme::Product(s), &model), Ok(()));
    }

    #[test]
    fn equivariance_examples() {
        let sat = MonoidTable::saturating(4);
        let five = FinSet::range(5);
        let succ = MonoidAction::new(
            five.clone(),
            (0..5).map(|a| (0..5).map(|x| (x + a).min(4)).collect()).collect(),
        )
        .unwrap();
        assert_eq!(validate_model(&Scheme::Monoid(sat), &SchemeModel::single(succ.clone())), Ok(()));
        let shift = FinFn::from_fn(five.clone(), five.clone(), |x| (x + 1).min(4)).unwrap();
        assert!(is_equivariant(&shift, &succ, &succ).unwrap());
        let mirror = FinFn::from_fn(five.clone(), five.clone(), |x| 4 - x).unwrap();
        assert!(!is_equivariant(&mirror, &succ, &succ).unwrap());
        assert!(is_equivariant(&FinFn::identity(&five), &succ, &succ).unwrap());

        let z3 = MonoidTable::cyclic(3);
        let rot = MonoidAction::rotation(&z3, &FinSet::range(3)).unwrap();
        let c = FinFn::constant(&FinSet::range(3), &FinSet::range(3), 0).unwrap();
        assert!(!is_equivariant(&c, &rot, &rot).unwrap());
    }

    #[test]
    fn functor_product_definition() {
        let id = FinFn::identity(&bits());
        assert!(check_dis2(&[id.clone(), id.clone()], &flip(), &[flip(), flip()]).unwrap());
        let c = FinFn::constant(&bits(), &bits(), 0).unwrap();
        assert!(!check_dis2(&[id.clone(), c], &flip(), &[flip(), flip()]).unwrap());
        // every pair of equivariant maps into flip models pairs equivariantly
        let maps: Vec<FinFn> = AllMaps::new(2, 2)
            .map(|t| FinFn::new(bits(), bits(), t).unwrap())
            .filter(|f| is_equivariant(f, &flip(), &flip()).unwrap())
            .collect();
        assert_eq!(maps.len(), 2);
        for a in &maps {
            for b in &maps {
                assert!(check_dis2(&[a.clone(), b.clone()], &flip(), &[flip(), flip()]).unwrap());
            }
        }
    }

    #[test]
    fn multifunctor_definition() {
        let s = ProductScheme::new(z2(), z2());
        let x = MonoidAction::componentwise(&s, &flip(), &flip()).unwrap();
        let id = FinFn::identity(&x.carrier);
        assert!(check_dis2prime(&s, &id, &x, &x).unwrap());
        let beta = crate::finset::swap(&bits(), &bits()).unwrap();
        assert!(!check_dis2prime(&s, &beta, &x, &x).unwrap());
        // the codomain action with roles exchanged makes the swap equivariant
        let swapped = MonoidAction {
            carrier: x.carrier.clone(),
            maps: (0..4)
                .map(|e| {
                    let (a, b) = s.split(e);
                    x.maps[s.join(b, a)].clone()
                })
                .collect(),
        };
        assert!(check_dis2prime(&s, &beta, &x, &swapped).unwrap());
        assert!(is_equivariant(&beta, &x, &swapped).unwrap());
    }

    #[test]
    fn product_preservation() {
        let s = ProductScheme::new(z2(), z2());
        let good = SchemeModel::componentwise(&s, flip(), flip()).unwrap();
        assert!(is_product_preserving(&s, &good).unwrap());

        let three = FinSet::range(3);
        let collapse = SchemeModel::product(
            MonoidAction::trivial(&z2(), &bits()),
            MonoidAction::trivial(&z2(), &bits()),
            MonoidAction::trivial(s.joint(), &three),
            FinFn::constant(&three, &bits(), 0).unwrap(),
            FinFn::constant(&three, &bits(), 0).unwrap(),
        );
        assert!(!is_product_preserving(&s, &collapse).unwrap());

        // F((1,0)) swaps coordinates, F((0,1)) flips both
        let sq = good.objects[2].carrier.clone();
        let swap = crate::finset::swap(&bits(), &bits()).unwrap().with_carriers(sq.clone(), sq.clone()).unwrap();
        let both = FinFn::from_fn(sq.clone(), sq.clone(), |v| 3 - v).unwrap();
        let entangled = MonoidAction {
            carrier: sq.clone(),
            maps: vec![FinFn::identity(&sq), both.clone(), swap.clone(), swap.then(&both).unwrap()],
        };
        assert_eq!(action_functorial(s.joint(), &entangled, 2), Ok(()));
        let mut model = good.clone();
        model.objects[2] = entangled;
        assert!(!is_product_preserving(&s, &model).unwrap());
        assert!(validate_model(&Scheme::Product(s), &model).is_err());
    }

    #[test]
    fn faithfulness() {
        let scheme = Scheme::Monoid(z2());
        assert!(!is_faithful(&scheme, &SchemeModel::single(MonoidAction::trivial(&z2(), &bits()))));
        assert!(is_faithful(&scheme, &SchemeModel::single(flip())));
        assert!(!is_faithful(&scheme, &SchemeModel::constant_one(&scheme)));
        let ps = Scheme::Product(ProductScheme::new(z2(), MonoidTable::cyclic(3)));
        assert!(!is_faithful(&ps, &SchemeModel::constant_one(&ps)));
    }

    #[test]
    fn equivariant_retractions() {
        let scheme = Scheme::Monoid(z2());
        let fy = SchemeModel::single(flip());
        let id = EquivariantMap {
            components: vec![FinFn::identity(&bits())],
        };
        let RetractionSearch::Found(h) = find_equivariant_retraction(&id, &fy, &fy, DEFAULT_BUDGET).unwrap() else {
            panic!("identity retracts")
        };
        assert_eq!(h, id);

        let one = SchemeModel::constant_one(&scheme);
        let to_one = EquivariantMap {
            components: vec![crate::finset::terminal(&bits())],
        };
        assert_eq!(
            find_equivariant_retraction(&to_one, &fy, &one, DEFAULT_BUDGET).unwrap(),
            RetractionSearch::NotFound
        );

        // flip on {0,1} with 2 fixed: h(2) would need to be a flip-fixed point
        let three = FinSet::range(3);
        let fz = SchemeModel::single(MonoidAction::new(three.clone(), vec![vec![0, 1, 2], vec![1, 0, 2]]).unwrap());
        let inc = EquivariantMap {
            components: vec![FinFn::new(bits(), three.clone(), vec![0, 1]).unwrap()],
        };
        assert!(is_natural(&inc, &fy, &fz).unwrap());
        let brute = |z: &MonoidAction, lo: &[usize]| -> Vec<Vec<usize>> {
            AllMaps::new(z.carrier.len(), 2)
                .filter(|t| t[0] == lo[0] && t[1] == lo[1])
                .filter(|t| {
                    let h = FinFn::new(z.carrier.clone(), bits(), t.clone()).unwrap();
                    is_equivariant(&h, z, &fy.objects[0]).unwrap()
                })
                .collect()
        };
        assert!(brute(&fz.objects[0], &[0, 1]).is_empty());
        assert_eq!(
            find_equivariant_retraction(&inc, &fy, &fz, DEFAULT_BUDGET).unwrap(),
            RetractionSearch::NotFound
        );

        // two flipped pairs: the second pair retracts onto the first
        let four = FinSet::range(4);
        let fw = SchemeModel::single(MonoidAction::new(four.clone(), vec![vec![0, 1, 2, 3], vec![1, 0, 3, 2]]).unwrap());
        let inc = EquivariantMap {
            components: vec![FinFn::new(bits(), four.clone(), vec![0, 1]).unwrap()],
        };
        let expected = brute(&fw.objects[0], &[0, 1]);
        assert_eq!(expected, vec![vec![0, 1, 0, 1], vec![0, 1, 1, 0]]);
        let RetractionSearch::Found(h) = find_equivariant_retraction(&inc, &fy, &fw, DEFAULT_BUDGET).unwrap() else {
            panic!("retraction exists")
        };
        assert_eq!(h.components[0].table(), expected[0].as_slice());
        assert!(matches!(
            find_equivariant_retraction(&inc, &fy, &fw, 2).unwrap(),
            RetractionSearch::Undecided { .. }
        ));
    }

    #[test]
    fn binary_operations() {
        let trivial = MonoidTable::cyclic(1);
        let add = |n: usize| -> Vec<Vec<usize>> { (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect() };
        let x2 = BinaryOpModel::new(MonoidAction::trivial(&trivial, &bits()), add(2)).unwrap();
        assert!(binary_op_naturality(&x2, &x2, &FinFn::identity(&bits())).unwrap());
        let x4 = BinaryOpModel::new(MonoidAction::trivial(&trivial, &FinSet::range(4)), add(4)).unwrap();
        let parity = FinFn::from_fn(FinSet::range(4), bits(), |x| x % 2).unwrap();
        assert!(binary_op_naturality(&x4, &x2, &parity).unwrap());
        let shift = FinFn::new(bits(), bits(), vec![1, 0]).unwrap();
        assert!(!binary_op_naturality(&x2, &x2, &shift).unwrap());
    }

    #[test]
    fn klein_decompositions() {
        let k = klein();
        assert!(verify_product_decomposition(&k, &[0, 2], &[0, 1]).unwrap());
        assert!(verify_product_decomposition(&k, &[0, 2], &[0, 3]).unwrap());
        assert!(!verify_product_decomposition(&k, &[0, 2], &[0, 2]).unwrap());
        assert!(verify_product_decomposition(&k, &[2], &[0]).is_err());
        let all = find_decompositions(&k, MAX_DECOMPOSITION_SIZE).unwrap();
        let nontrivial: Vec<_> = all.iter().filter(|(a, b)| a.len() == 2 && b.len() == 2).collect();
        assert_eq!(nontrivial.len(), 3);
        assert!(all.contains(&(vec![0], vec![0, 1, 2, 3])));
    }

    #[test]
    fn indecomposable_cyclic_groups() {
        let z2m = z2().as_magma();
        assert_eq!(find_decompositions(&z2m, 12).unwrap(), vec![(vec![0], vec![0, 1])]);
        let z4 = MonoidTable::cyclic(4).as_magma();
        assert_eq!(find_decompositions(&z4, 12).unwrap(), vec![(vec![0], vec![0, 1, 2, 3])]);
        assert!(find_decompositions(&MonoidTable::cyclic(13).as_magma(), 12).is_err());
    }
}
