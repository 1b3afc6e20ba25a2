//! Property suites over exhaustive and seeded random families. A suite fails
//! on its first counterexample, which is recorded verbatim.

use serde::{Deserialize, Serialize};

use super::families::{self, ActionCatalog, ActionTriple};
use crate::algact::{self, MonoidTable, ProductScheme, RetractionSearch, SchemeModel};
use crate::error::Result;
use crate::finrel::{self, CurryDirection, FinRel};
use crate::finset::{self, CartesianProduct, FinFn, FinSet};
use crate::finstoch::{self, Rational, StochMap, Weight};
use crate::multiset::{self, MultiFn, TimedSystem};
use crate::search::{AllMaps, DEFAULT_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremConfig {
    pub seed: u64,
    pub max_factor_size: usize,
    pub max_factors: usize,
    /// Random code maps for the exponential/pullback suites.
    pub map_trials: usize,
    /// Random exact kernels for the stochastic suites.
    pub kernel_trials: usize,
    /// Random scheme/model/μ triples.
    pub action_trials: usize,
    pub budget: u64,
}

impl Default for TheoremConfig {
    fn default() -> Self {
        TheoremConfig {
            seed: 0,
            max_factor_size: 3,
            max_factors: 3,
            map_trials: 500,
            kernel_trials: 500,
            action_trials: 200,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl TheoremConfig {
    /// Sets every random family to `t` draws, except the action family,
    /// which keeps its 2:5 ratio to the others.
    pub fn with_trials(mut self, t: usize) -> Self {
        self.map_trials = t;
        self.kernel_trials = t;
        self.action_trials = t * 2 / 5;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub statement: String,
    pub checked: u64,
    pub passed: u64,
    pub counterexample: Option<String>,
    /// Some cases exceeded the search budget and were skipped.
    pub partial: bool,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.counterexample.is_none() && self.passed == self.checked
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub config: TheoremConfig,
    pub suites: Vec<SuiteResult>,
}

impl TheoremReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::ok)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }
}

struct Tally(SuiteResult);

impl Tally {
    fn new(name: &str, statement: &str) -> Self {
        Tally(SuiteResult {
            name: name.into(),
            statement: statement.into(),
            checked: 0,
            passed: 0,
            counterexample: None,
            partial: false,
        })
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.0.checked += 1;
        if ok {
            self.0.passed += 1;
        } else if self.0.counterexample.is_none() {
            self.0.counterexample = Some(describe());
        }
    }

    /// An evaluation error counts as a counterexample.
    fn record_result(&mut self, r: Result<bool>, describe: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.record(ok, describe),
            Err(e) => self.record(false, || format!("{}: error {e}", describe())),
        }
    }

    fn finish(self) -> SuiteResult {
        self.0
    }
}

fn show(f: &FinFn) -> String {
    format!("{:?} -> {:?}: {:?}", f.dom().factor_shape(), f.cod().factor_shape(), f.table())
}

/// Stream identifiers keep each family's draws independent.
mod stream {
    pub const MAPS: u64 = 1;
    pub const KERNELS: u64 = 2;
    pub const ACTIONS: u64 = 3;
    pub const EMBEDDING: u64 = 4;
    pub const GENERATORS: u64 = 5;
}

pub fn universal_property(cfg: &TheoremConfig) -> SuiteResult {
    let mut t = Tally::new(
        "universal-property",
        "the pairing <f1,f2> is the unique u with p_i ∘ u = f_i",
    );
    let k = cfg.max_factor_size.min(3);
    for c in 1..=k {
        for a in 1..=k {
            for b in 1..=k {
                let (cs, as_, bs) = (FinSet::range(c), FinSet::range(a), FinSet::range(b));
                let cart = CartesianProduct::new(&[as_.clone(), bs.clone()]).expect("nonempty");
                // every u decomposes into exactly one (f1, f2)
                let mut seen = std::collections::HashMap::new();
                for u in AllMaps::new(c, a * b) {
                    let u = FinFn::new(cs.clone(), cart.product.clone(), u).expect("in range");
                    let f1 = u.then(&cart.projections[0]).expect("composable");
                    let f2 = u.then(&cart.projections[1]).expect("composable");
                    seen.insert((f1.table().to_vec(), f2.table().to_vec()), u);
                }
                for f1 in AllMaps::new(c, a) {
                    for f2 in AllMaps::new(c, b) {
                        let g1 = FinFn::new(cs.clone(), as_.clone(), f1.clone()).expect("in range");
                        let g2 = FinFn::new(cs.clone(), bs.clone(), f2.clone()).expect("in range");
                        let paired = cart.pair(&[g1, g2]).expect("common domain");
                        let unique = seen.get(&(f1.clone(), f2.clone())) == Some(&paired);
                        t.record(unique, || format!("sizes ({c},{a},{b}), f1 {f1:?}, f2 {f2:?}"));
                    }
                }
                let total = (a as u64).pow(c as u32) * (b as u64).pow(c as u32);
                t.record(seen.len() as u64 == total, || format!("sizes ({c},{a},{b}): pairing not bijective"));
            }
        }
    }
    t.finish()
}

fn exp_family(cfg: &TheoremConfig) -> Vec<FinFn> {
    let mut maps: Vec<FinFn> = families::all_two_bit_maps().collect();
    let mut rng = families::rng_for(cfg.seed, stream::MAPS);
    for _ in 0..cfg.map_trials {
        maps.push(families::random_code_map(&mut rng, cfg.max_factors, cfg.max_factor_size).1);
    }
    maps
}

fn exp_agreement(m: &FinFn) -> Result<bool> {
    let n = finset::factor_counts(m)?;
    let product = finset::is_product_morphism(m)?.is_some();
    let mut transpose = true;
    let mut pullback = true;
    for i in 0..n {
        transpose &= finset::transpose_is_constant(m, i)?;
        pullback &= finset::invariance_via_pullback(m, i)?;
    }
    Ok(product == transpose && transpose == pullback)
}

pub fn exponential(cfg: &TheoremConfig) -> SuiteResult {
    let mut t = Tally::new(
        "exponential",
        "product morphism ⇔ every transpose constant ⇔ every code invariant on the pullback",
    );
    for m in exp_family(cfg) {
        t.record_result(exp_agreement(&m), || show(&m));
    }
    t.finish()
}

fn witness_properties(m: &FinFn) -> Result<bool> {
    let Some(w) = finset::is_product_morphism(m)? else {
        return Ok(true);
    };
    let n = w.components.len();
    for (i, c) in w.components.iter().enumerate() {
        let lhs = finset::code_component(m, i)?;
        let py = finset::projection(m.dom(), i)?;
        let rhs = py.then(c)?;
        if lhs.table() != rhs.table() {
            return Ok(false);
        }
    }
    let shape = m.dom().factor_shape().expect("product");
    let other: Vec<usize> = shape.iter().map(|&s| usize::from(s > 1)).collect();
    let again = finset::extract_components(m, &other)?;
    Ok(again.components == w.components && n == shape.len())
}

pub fn component_witness(cfg: &TheoremConfig) -> SuiteResult {
    let mut t = Tally::new(
        "component-witness",
        "extracted components satisfy p_i ∘ m = m_ii ∘ p_i and do not depend on the basepoint",
    );
    for m in exp_family(cfg) {
        t.record_result(witness_properties(&m), || show(&m));
    }
    t.finish()
}

pub fn modular_decoder(cfg: &TheoremConfig) -> SuiteResult {
    let mut t = Tally::new(
        "modular-decoder",
        "a modular split mono has a modular retraction",
    );
    let check = |m: &FinFn, t: &mut Tally| {
        let r: Result<Option<bool>> = (|| {
            if finset::is_product_morphism(m)?.is_none() {
                return Ok(None);
            }
            let Some(h) = finset::find_retraction(m, cfg.budget) else {
                return Ok(None);
            };
            let Some(d) = finset::find_modular_retraction(m, cfg.budget)? else {
                return Ok(Some(false));
            };
            let prod = d.witness.product()?.with_carriers(m.cod().clone(), m.dom().clone())?;
            Ok(Some(finset::compose(m, &prod)?.table() == FinFn::identity(m.dom()).table() && h.map.dom() == m.cod()))
        })();
        match r {
            Ok(None) => {}
            Ok(Some(ok)) => t.record(ok, || show(m)),
            Err(e) => t.record(false, || format!("{}: error {e}", show(m))),
        }
    };
    for m in families::all_binary_product_morphisms(cfg.max_factor_size.min(3)) {
        check(&m, &mut t);
    }
    for m in families::all_two_bit_maps() {
        check(&m, &mut t);
    }
    t.finish()
}

fn all_relations<'a>(a: &'a FinSet, b: &'a FinSet) -> impl Iterator<Item = FinRel> + 'a {
    AllMaps::new(a.len() * b.len(), 2)
        .map(move |bits| FinRel::new(a.clone(), b.clone(), bits.into_iter().map(|x| x == 1).collect()).expect("shape"))
}

pub fn rel_kleisli(_cfg: &TheoremConfig) -> SuiteResult {
    let mut t = Tally::new("rel-kleisli", "relation composition is associative with identity units");
    let sets: Vec<FinSet> = (1..=2).map(FinSet::range).collect();
    for a in &sets {
        for b in &sets {
            for r in all_relations(a, b) {
                let l = finrel::rel_compose(&FinRel::identity(a), &r).expect("composable");
                let rr = finrel::rel_compose(&r, &FinRel::identity(b)).expect("composable");
                t.record(l == r && rr == r, || format!("unit law fails for {r:?}"));
            }
            for c in &sets {
                for d in &sets {
                    let rs: Vec<FinRel> = all_relations(a, b).collect();
                    let ss: Vec<FinRel> = all_relations(b, c).collect();
                    let ts: Vec<FinRel> = all_relations(c, d).collect();
                    for r in &rs {
                        for s in &ss {
                            let rs_ = finrel::rel_compose(r, s).expect("composable");
                            for tt in &ts {
                                let left = finrel::rel_compose(&rs_, tt).expect("composable");
                                let st = finrel::rel_compose(s, tt).expect("composable");
                                let right = finrel::rel_compose(r, &st).expect("composable");
                                t.record(left == right, || format!("{r:?} {s:?} {tt:?}"));
                            }
                        }
                    }
                }
            }
        }
    }
    t.finish()
}

pub fn rel_curry(_cfg: &TheoremConfig) -> SuiteResult {
    let mut t = Tally::new("rel-curry", "currying is a bijection Hom(A⊗B, C) ≅ Hom(A, B⊗C)");
    for a in 1..=2 {
        for b in 1..=2 {
            for c in 1..=2 {
                let (a, b, c) = (FinSet::range(a), FinSet::range(b), FinSet::range(c));
                let ab = FinSet::product(&[a.clone(), b.clone()]).expect("nonempty");
                let bc = FinSet::product(&[b.clone(), c.clone()]).expect("nonempty");
                for r in all_relations(&ab, &c) {
                    let back = finrel::rel_curry(&r, CurryDirection::Forward)
                        .and_then(|s| finrel::rel_curry(&s, CurryDirection::Backward));
                    t.record(back.as_ref() == Ok(&r), || format!("{r:?}"));
                }
                for r in all_relations(&a, &bc) {
                    let back = finrel::rel_curry(&r, CurryDirection::Backward)
                        .and_then(|s| finrel::rel_curry(&s, CurryDirection::Forward));
                    t.record(back.as_ref() == Ok(&r), || format!("{r:?}"));
                }
            }
        }
    }
    t.finish()
}

pub fn rel_tensor_classes(_cfg: &TheoremConfig) -> SuiteResult {
    let mut t = Tally::new(
        "rel-tensor-classes",
        "tensors of right-unique (left-total) relations are right-unique (left-total)",
    );
    let two = FinSet::range(2);
    let rels: Vec<FinRel> = all_relations(&two, &two).collect();
    for r in &rels {
        for s in &rels {
            let (cr, cs) = (finrel::classify_relation(r), finrel::classify_relation(s));
            let ct = finrel::classify_relation(&finrel::rel_tensor(r, s).expect("tensor"));
            let ok = (!(cr.right_unique && cs.right_unique) || ct.right_unique)
                && (!(cr.left_total && cs.left_total) || ct.left_total);
            t.record(ok, || format!("{r:?} ⊗ {s:?}"));
        }
    }
    t.finish()
}

pub fn rel_factorization(_cfg: &TheoremConfig) -> SuiteResult {
    let mut t = Tally::new(
        "rel-factorization",
        "factoring a tensor recovers nonempty components; returned components always tensor back",
    );
    let two = FinSet::range(2);
    let rels: Vec<FinRel> = all_relations(&two, &two).filter(|r| !r.is_empty()).collect();
    for r in &rels {
        for s in &rels {
            let m = finrel::rel_tensor(r, s).expect("tensor");
            let got = finrel::monoidal_factorization(&m);
            t.record(got == Ok(Some(vec![r.clone(), s.clone()])), || format!("{r:?} ⊗ {s:?}"));
        }
    }
    let sq = FinSet::product(&[two.clone(), two.clone()]).expect("nonempty");
    for m in all_relations(&sq, &sq) {
        let ok = match finrel::monoidal_factorization(&m) {
            Ok(Some(parts)) => finrel::tensor_all(&parts).map(|x| x == m).unwrap_or(false),
            Ok(None) => true,
            Err(_) => false,
        };
        t.record(ok, || format!("{m:?}"));
    }
    t.finish()
}

pub fn rel_graph_embedding(_cfg: &TheoremConfig) -> SuiteResult {
    let mut t = Tally::new("rel-graph-embedding", "the graph of f1 × f2 is the tensor of the graphs");
    for a in 1..=2 {
        for b in 1..=2 {
            let (sa, sb) = (FinSet::range(a), FinSet::range(b));
            let fs: Vec<FinFn> = AllMaps::new(a, b)
                .map(|m| FinFn::new(sa.clone(), sb.clone(), m).expect("in range"))
                .collect();
            for f in &fs {
                for g in &fs {
                    let prod = FinFn::product(&[f.clone(), g.clone()]).expect("nonempty");
                    let lhs = FinRel::graph(&prod);
                    let rhs = finrel::rel_tensor(&FinRel::graph(f), &FinRel::graph(g)).expect("tensor");
                    t.record(lhs == rhs, || format!("{} × {}", show(f), show(g)));
                }
            }
        }
    }
    t.finish()
}

fn same_rows<W: Weight>(a: &StochMap<W>, b: &StochMap<W>) -> bool {
    a.rows() == b.rows()
}

pub fn markov_comonoid(_cfg: &TheoremConfig) -> SuiteResult {
    let mut t = Tally::new(
        "markov-comonoid",
        "copy and delete satisfy counit, coassociativity and cocommutativity",
    );
    for n in 1..=4 {
        let a = FinSet::range(n);
        let r: Result<bool> = (|| {
            let copy = finstoch::copy::<Rational>(&a)?;
            let del = finstoch::delete::<Rational>(&a);
            let id = StochMap::<Rational>::identity(&a);
            let left = finstoch::stoch_compose(&copy, &finstoch::tensor(&del, &id)?)?;
            let right = finstoch::stoch_compose(&copy, &finstoch::tensor(&id, &del)?)?;
            let counit = same_rows(&left, &id) && same_rows(&right, &id);
            let l3 = finstoch::stoch_compose(&copy, &finstoch::tensor(&copy, &id)?)?;
            let r3 = finstoch::stoch_compose(&copy, &finstoch::tensor(&id, &copy)?)?;
            let coassoc = same_rows(&l3, &r3);
            let swapped = finstoch::stoch_compose(&copy, &finstoch::swap(&a, &a)?)?;
            let cocomm = same_rows(&swapped, &copy);
            Ok(counit && coassoc && cocomm)
        })();
        t.record_result(r, || format!("carrier of size {n}"));
    }
    t.finish()
}

fn kernel_family(cfg: &TheoremConfig) -> Vec<StochMap<Rational>> {
    let mut rng = families::rng_for(cfg.seed, stream::KERNELS);
    (0..cfg.kernel_trials)
        .map(|_| families::random_code_kernel(&mut rng, cfg.max_factors, cfg.max_factor_size).1)
        .collect()
}

fn show_kernel(k: &StochMap<Rational>) -> String {
    let rows: Vec<Vec<String>> = k.rows().iter().map(|r| r.iter().map(|w| w.to_string()).collect()).collect();
    format!("{:?} -> {:?}: {:?}", k.dom().factor_shape(), k.cod().factor_shape(), rows)
}

pub fn markov_naturality(cfg: &TheoremConfig) -> SuiteResult {
    let mut t = Tally::new(
        "markov-naturality",
        "delete is natural for every kernel; copy is natural exactly for deterministic kernels and fails for a fair coin",
    );
    for k in kernel_family(cfg) {
        let r: Result<bool> = (|| {
            let lhs = finstoch::stoch_compose(&k, &finstoch::delete(k.cod()))?;
            let delete_natural = same_rows(&lhs, &finstoch::delete(k.dom()));
            let d = finstoch::determinism(&k, 0.0)?;
            Ok(delete_natural && d.copy_natural == d.point_mass)
        })();
        t.record_result(r, || show_kernel(&k));
    }
    let bit = FinSet::range(2);
    let half = Rational::from_ratio(1, 2);
    let coin = StochMap::constant(&FinSet::one(), &bit, &[half.clone(), half]).expect("stochastic");
    t.record_result(finstoch::is_deterministic(&coin, 0.0).map(|d| !d), || "fair coin is copy-natural".into());
    for n in 1..=3 {
        let a = FinSet::range(n);
        for f in AllMaps::new(n, n) {
            let f = FinFn::new(a.clone(), a.clone(), f).expect("in range");
            let k = StochMap::<Rational>::deterministic(&f);
            t.record_result(finstoch::is_deterministic(&k, 0.0), || show(&f));
        }
    }
    t.finish()
}

pub fn deterministic_embedding(cfg: &TheoremConfig) -> SuiteResult {
    let mut t = Tally::new(
        "deterministic-embedding",
        "composing embedded functions agrees with function composition",
    );
    let mut rng = families::rng_for(cfg.seed, stream::EMBEDDING);
    for _ in 0..cfg.map_trials.max(1) {
        use rand::Rng;
        let sizes: Vec<usize> = (0..3).map(|_| rng.gen_range(1..=4)).collect();
        let sets: Vec<FinSet> = sizes.iter().map(|&s| FinSet::range(s)).collect();
        let f = families::random_fn(&mut rng, &sets[0], &sets[1]);
        let g = families::random_fn(&mut rng, &sets[1], &sets[2]);
        let composed = StochMap::<Rational>::deterministic(&finset::compose(&f, &g).expect("composable"));
        let via = finstoch::stoch_compose(&StochMap::deterministic(&f), &StochMap::deterministic(&g));
        t.record(via.as_ref().map(|v| same_rows(v, &composed)) == Ok(true), || {
            format!("{} then {}", show(&f), show(&g))
        });
    }
    t.finish()
}

/// Projectability agrees with the conditional-independence reading on the
/// kernel family; the predicate is a parameter so it can be mutated in tests.
pub fn independence_with(
    cfg: &TheoremConfig,
    projectable: &dyn Fn(&StochMap<Rational>) -> Result<bool>,
) -> SuiteResult {
    let mut t = Tally::new(
        "independence",
        "the joint is the product of its marginals ⇔ Z_i ⊥ Z_{\\i} | Y for every i",
    );
    for k in kernel_family(cfg) {
        let r = projectable(&k)
            .and_then(|p| finstoch::codes_independent_given_factors(&k, 0.0).map(|c| p == c));
        t.record_result(r, || show_kernel(&k));
    }
    t.finish()
}

pub fn independence(cfg: &TheoremConfig) -> SuiteResult {
    independence_with(cfg, &|k| finstoch::is_projectable(k, 0.0))
}

pub fn componentwise_modular(cfg: &TheoremConfig) -> SuiteResult {
    let mut t = Tally::new(
        "componentwise-modular",
        "a componentwise kernel is modular, and for finite kernels the converse holds",
    );
    for k in kernel_family(cfg) {
        let r: Result<bool> = (|| {
            let d = finstoch::is_componentwise(&k, 0.0)?.is_some();
            let c = finstoch::is_modular_stoch(&k, 0.0)?;
            Ok((!d || c) && d == c)
        })();
        t.record_result(r, || show_kernel(&k));
    }
    t.finish()
}

fn action_family(cfg: &TheoremConfig) -> Vec<ActionTriple> {
    let mut rng = families::rng_for(cfg.seed, stream::ACTIONS);
    let mut cat = ActionCatalog::new(3);
    (0..cfg.action_trials)
        .map(|_| families::random_action_triple(&mut rng, &mut cat, 3))
        .collect()
}

fn show_triple(t: &ActionTriple) -> String {
    let carriers = |m: &SchemeModel| m.objects.iter().map(|o| o.carrier.len()).collect::<Vec<_>>();
    let tables: Vec<&[usize]> = t.mu.components.iter().map(FinFn::table).collect();
    format!(
        "scheme with {} object(s), F_Y carriers {:?}, F_Z carriers {:?}, μ {:?}",
        t.scheme.object_count(),
        carriers(&t.fy),
        carriers(&t.fz),
        tables
    )
}

pub fn mono_faithful(cfg: &TheoremConfig) -> SuiteResult {
    let mut t = Tally::new(
        "mono-faithful",
        "a split mono out of a faithful model lands in a faithful model; an epi into a faithful model leaves a faithful model",
    );
    for tr in action_family(cfg) {
        let fy_faithful = algact::is_faithful(&tr.scheme, &tr.fy);
        let fz_faithful = algact::is_faithful(&tr.scheme, &tr.fz);
        if !fy_faithful || fz_faithful {
            // the implication holds whether or not μ splits
            t.record(true, String::new);
        } else {
            match algact::find_equivariant_retraction(&tr.mu, &tr.fy, &tr.fz, cfg.budget) {
                Ok(RetractionSearch::Found(_)) => t.record(false, || show_triple(&tr)),
                Ok(RetractionSearch::NotFound) => t.record(true, String::new),
                Ok(RetractionSearch::Undecided { .. }) => t.0.partial = true,
                Err(e) => t.record(false, || format!("{}: error {e}", show_triple(&tr))),
            }
        }
        let epic = tr.mu.components.iter().all(FinFn::is_surjective);
        if epic {
            t.record(!fz_faithful || fy_faithful, || format!("epi case: {}", show_triple(&tr)));
        }
    }
    t.finish()
}

pub fn mu_product(cfg: &TheoremConfig) -> SuiteResult {
    let mut t = Tally::new(
        "mu-product",
        "between product-preserving models, μ at s1×s2 is μ_1 × μ_2 under the pairings",
    );
    let mut rng = families::rng_for(cfg.seed, stream::ACTIONS + 100);
    let mut cat = ActionCatalog::new(3);
    let k = cat.monoids.len();
    for _ in 0..cfg.action_trials {
        use rand::Rng;
        let ids = (rng.gen_range(0..k), rng.gen_range(0..k));
        let s = ProductScheme::new(cat.monoids[ids.0].clone(), cat.monoids[ids.1].clone());
        let fy = families::random_product_preserving(&mut rng, &mut cat, &s, ids, 3);
        let fz = families::random_product_preserving(&mut rng, &mut cat, &s, ids, 3);
        for mu in families::natural_transformations(&fy, &fz, 64) {
            t.record_result(algact::component_at_product_splits(&mu, &fy, &fz), || {
                format!("μ {:?}", mu.components.iter().map(FinFn::table).collect::<Vec<_>>())
            });
        }
    }
    t.finish()
}

pub fn multifunctor_generators(cfg: &TheoremConfig) -> SuiteResult {
    let mut t = Tally::new(
        "multifunctor-generators",
        "equivariance on the generators (a,e), (e,b) implies equivariance for all of M1 × M2",
    );
    let mut rng = families::rng_for(cfg.seed, stream::GENERATORS);
    let mut cat = ActionCatalog::new(3);
    let k = cat.monoids.len();
    for _ in 0..cfg.action_trials {
        use rand::Rng;
        let ids = (rng.gen_range(0..k), rng.gen_range(0..k));
        let s = ProductScheme::new(cat.monoids[ids.0].clone(), cat.monoids[ids.1].clone());
        let a = families::random_product_model(&mut rng, &mut cat, &s, ids, 2).objects.remove(2);
        let b = families::random_product_model(&mut rng, &mut cat, &s, ids, 2).objects.remove(2);
        if a.carrier.len() > 4 || b.carrier.len() > 4 {
            continue;
        }
        for table in AllMaps::new(a.carrier.len(), b.carrier.len()) {
            let f = FinFn::new(a.carrier.clone(), b.carrier.clone(), table).expect("in range");
            let r = algact::check_dis2prime(&s, &f, &a, &b)
                .and_then(|g| algact::is_equivariant(&f, &a, &b).map(|full| g == full));
            t.record_result(r, || show(&f));
        }
    }
    t.finish()
}

pub fn natural_composition(cfg: &TheoremConfig) -> SuiteResult {
    let mut t = Tally::new("natural-composition", "composites of natural transformations are natural");
    for tr in action_family(cfg).iter().take(cfg.action_trials / 2) {
        for nu in families::natural_transformations(&tr.fz, &tr.fz, 8) {
            let composed = crate::algact::EquivariantMap {
                components: tr
                    .mu
                    .components
                    .iter()
                    .zip(&nu.components)
                    .map(|(m, n)| m.then(n).expect("composable"))
                    .collect(),
            };
            t.record_result(algact::is_natural(&composed, &tr.fy, &tr.fz), || show_triple(tr));
        }
    }
    t.finish()
}

pub fn magma_decomposition(_cfg: &TheoremConfig) -> SuiteResult {
    let mut t = Tally::new(
        "magma-decomposition",
        "decompositions found are exactly the unit-containing subset pairs that commute and multiply bijectively",
    );
    let mut magmas: Vec<MonoidTable> = families::small_monoids(3);
    magmas.push(MonoidTable::cyclic(4));
    magmas.push(MonoidTable::product(&MonoidTable::cyclic(2), &MonoidTable::cyclic(2)));
    magmas.push(MonoidTable::product(&MonoidTable::cyclic(2), &MonoidTable::cyclic(3)));
    for m in &magmas {
        let g = m.as_magma();
        let n = g.len();
        let found = match algact::find_decompositions(&g, algact::MAX_DECOMPOSITION_SIZE) {
            Ok(f) => f,
            Err(e) => {
                t.record(false, || format!("error {e}"));
                continue;
            }
        };
        // naive oracle over all unordered pairs of unit-containing subsets
        let subsets: Vec<Vec<usize>> = (0u32..1 << n)
            .filter(|mask| mask & (1 << g.unit()) != 0)
            .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect())
            .collect();
        let mut naive = Vec::new();
        for (i, a) in subsets.iter().enumerate() {
            for b in &subsets[i..] {
                let closed = |s: &[usize]| s.iter().all(|&x| s.iter().all(|&y| s.contains(&g.mul(x, y))));
                let commute = a.iter().all(|&x| b.iter().all(|&y| g.mul(x, y) == g.mul(y, x)));
                let mut prods: Vec<usize> = a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).map(|(x, y)| g.mul(x, y)).collect();
                prods.sort_unstable();
                let bijective = prods == (0..n).collect::<Vec<_>>();
                if closed(a) && closed(b) && commute && bijective {
                    naive.push((a.clone(), b.clone()));
                }
            }
        }
        let mut sorted = found.clone();
        sorted.sort();
        naive.sort();
        t.record(sorted == naive, || format!("magma {:?}", g.table().table));
    }
    t.finish()
}

fn all_multifns(a: &FinSet, b: &FinSet, max: u64) -> Vec<MultiFn> {
    let per_row: Vec<Vec<u64>> = AllMaps::new(b.len(), max as usize + 1)
        .map(|r| r.into_iter().map(|x| x as u64).collect::<Vec<u64>>())
        .filter(|r| r.iter().any(|&x| x > 0))
        .collect();
    AllMaps::new(a.len(), per_row.len())
        .map(|choice| {
            let rows = choice.into_iter().map(|c| per_row[c].clone()).collect();
            MultiFn::new(a.clone(), b.clone(), rows).expect("nonempty rows")
        })
        .collect()
}

pub fn multiset_laws(_cfg: &TheoremConfig) -> SuiteResult {
    let mut t = Tally::new(
        "multiset-laws",
        "multiset composition is associative and unital, and embeds function composition",
    );
    let sets: Vec<FinSet> = (1..=2).map(FinSet::range).collect();
    for a in &sets {
        for b in &sets {
            let fs = all_multifns(a, b, 2);
            for f in &fs {
                let l = multiset::mset_compose(&MultiFn::identity(a), f).expect("composable");
                let r = multiset::mset_compose(f, &MultiFn::identity(b)).expect("composable");
                t.record(&l == f && &r == f, || format!("{f:?}"));
            }
            for c in &sets {
                let gs = all_multifns(b, c, 2);
                for d in &sets {
                    let hs = all_multifns(c, d, 2);
                    for f in &fs {
                        for g in &gs {
                            let fg = multiset::mset_compose(f, g).expect("composable");
                            for h in &hs {
                                let left = multiset::mset_compose(&fg, h).expect("composable");
                                let gh = multiset::mset_compose(g, h).expect("composable");
                                let right = multiset::mset_compose(f, &gh).expect("composable");
                                t.record(left == right, || format!("{f:?} {g:?} {h:?}"));
                            }
                        }
                    }
                }
                for f in AllMaps::new(a.len(), b.len()) {
                    let f = FinFn::new(a.clone(), b.clone(), f).expect("in range");
                    for g in AllMaps::new(b.len(), c.len()) {
                        let g = FinFn::new(b.clone(), c.clone(), g).expect("in range");
                        let direct = MultiFn::from_fn(&finset::compose(&f, &g).expect("composable"));
                        let via = multiset::mset_compose(&MultiFn::from_fn(&f), &MultiFn::from_fn(&g));
                        t.record(via.as_ref() == Ok(&direct), || format!("{} then {}", show(&f), show(&g)));
                    }
                }
            }
        }
    }
    t.finish()
}

pub fn counter_iteration(_cfg: &TheoremConfig) -> SuiteResult {
    let mut t = Tally::new(
        "counter-iteration",
        "a counter invariant under one step is invariant under every iterate",
    );
    for n in 1..=3 {
        let states = FinSet::range(n);
        let counters = all_multifns(&states, &FinSet::range(2), 1);
        for step in AllMaps::new(n, n) {
            let step = FinFn::new(states.clone(), states.clone(), step).expect("in range");
            let sys = TimedSystem::new(step).expect("endofunction");
            for phi in &counters {
                if !multiset::is_invariant_counter(phi, &sys).expect("matching carriers") {
                    continue;
                }
                let ok = (0..=n).all(|k| {
                    let it = MultiFn::from_fn(&sys.iterate(k));
                    multiset::mset_compose(&it, phi).as_ref() == Ok(phi)
                });
                t.record(ok, || format!("step {:?}, counter {phi:?}", sys.step.table()));
            }
        }
    }
    t.finish()
}

/// Run every suite in a fixed order.
pub fn theorem_suite(cfg: &TheoremConfig) -> TheoremReport {
    let suites: Vec<fn(&TheoremConfig) -> SuiteResult> = vec![
        universal_property,
        exponential,
        component_witness,
        modular_decoder,
        rel_kleisli,
        rel_curry,
        rel_tensor_classes,
        rel_factorization,
        rel_graph_embedding,
        markov_comonoid,
        markov_naturality,
        deterministic_embedding,
        independence,
        componentwise_modular,
        mono_faithful,
        mu_product,
        multifunctor_generators,
        natural_composition,
        magma_decomposition,
        multiset_laws,
        counter_iteration,
    ];
    TheoremReport {
        config: cfg.clone(),
        suites: suites.into_iter().map(|s| s(cfg)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> TheoremConfig {
        TheoremConfig {
            map_trials: 40,
            kernel_trials: 40,
            action_trials: 16,
            ..TheoremConfig::default()
        }
    }

    #[test]
    fn suites_pass_on_a_small_config() {
        let report = theorem_suite(&small());
        for s in &report.suites {
            assert!(s.ok(), "{}: {:?}", s.name, s.counterexample);
            assert!(s.checked > 0, "{} checked nothing", s.name);
        }
    }

    #[test]
    fn corrupted_projectability_is_caught() {
        let corrupted = |k: &StochMap<Rational>| finstoch::is_projectable(k, 0.0).map(|p| !p || k.dom().len() > 4);
        let r = independence_with(&small(), &corrupted);
        assert!(r.counterexample.is_some());
    }

    #[test]
    fn zero_trials_still_runs_exhaustive_suites() {
        let cfg = TheoremConfig::default().with_trials(0);
        assert!(modular_decoder(&cfg).checked > 0);
        assert!(exponential(&cfg).checked == 256);
        assert_eq!(independence(&cfg).checked, 0);
    }
}
