//! Seeded random and exhaustive instance families for the theorem suites.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::algact::{self, EquivariantMap, MonoidAction, MonoidTable, OpTable, ProductScheme, Scheme, SchemeModel};
use crate::finset::{CartesianProduct, FinFn, FinSet};
use crate::finstoch::{Rational, StochMap, Weight};
use crate::search::AllMaps;
use num_traits::One;

/// Independent stream per suite, so adding draws to one suite leaves the
/// others unchanged.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `n` factors with sizes in `1..=max_size`.
pub fn random_product_set(rng: &mut impl Rng, n: usize, max_size: usize) -> FinSet {
    let factors: Vec<FinSet> = (0..n).map(|_| FinSet::range(rng.gen_range(1..=max_size))).collect();
    FinSet::product(&factors).expect("nonempty factors")
}

pub fn random_fn(rng: &mut impl Rng, dom: &FinSet, cod: &FinSet) -> FinFn {
    let map = (0..dom.len()).map(|_| rng.gen_range(0..cod.len())).collect();
    FinFn::new(dom.clone(), cod.clone(), map).expect("in range")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Modular,
    /// A product morphism with one entry changed.
    Perturbed,
    Generic,
}

/// A map between product sets with matching factor counts in `1..=max_factors`.
pub fn random_code_map(rng: &mut impl Rng, max_factors: usize, max_size: usize) -> (MapKind, FinFn) {
    let n = rng.gen_range(1..=max_factors);
    let y = random_product_set(rng, n, max_size);
    let z = random_product_set(rng, n, max_size);
    let kind = [MapKind::Modular, MapKind::Perturbed, MapKind::Generic][rng.gen_range(0..3)];
    let m = match kind {
        MapKind::Generic => random_fn(rng, &y, &z),
        MapKind::Modular | MapKind::Perturbed => {
            let parts: Vec<FinFn> = (0..n)
                .map(|i| random_fn(rng, y.factor(i).expect("factor"), z.factor(i).expect("factor")))
                .collect();
            let m = FinFn::product(&parts).expect("nonempty");
            let mut table = m.table().to_vec();
            if kind == MapKind::Perturbed {
                let at = rng.gen_range(0..table.len());
                table[at] = rng.gen_range(0..z.len());
            }
            FinFn::new(y.clone(), z.clone(), table).expect("in range")
        }
    };
    (kind, m)
}

/// Every product morphism `f1 x f2` with all four factor sizes in `1..=max_size`.
pub fn all_binary_product_morphisms(max_size: usize) -> impl Iterator<Item = FinFn> {
    let sizes: Vec<(usize, usize)> = (1..=max_size)
        .flat_map(|y| (1..=max_size).map(move |z| (y, z)))
        .collect();
    let pairs: Vec<((usize, usize), (usize, usize))> = sizes
        .iter()
        .flat_map(|&a| sizes.iter().map(move |&b| (a, b)))
        .collect();
    pairs.into_iter().flat_map(|((y1, z1), (y2, z2))| {
        let (ys1, zs1, ys2, zs2) = (FinSet::range(y1), FinSet::range(z1), FinSet::range(y2), FinSet::range(z2));
        let firsts: Vec<FinFn> = AllMaps::new(y1, z1)
            .map(|t| FinFn::new(ys1.clone(), zs1.clone(), t).expect("in range"))
            .collect();
        let seconds: Vec<FinFn> = AllMaps::new(y2, z2)
            .map(|t| FinFn::new(ys2.clone(), zs2.clone(), t).expect("in range"))
            .collect();
        firsts
            .into_iter()
            .flat_map(move |a| {
                seconds
                    .clone()
                    .into_iter()
                    .map(move |b| FinFn::product(&[a.clone(), b]).expect("nonempty"))
            })
            .collect::<Vec<_>>()
    })
}

/// Every map `{0,1}^2 -> {0,1}^2`.
pub fn all_two_bit_maps() -> impl Iterator<Item = FinFn> {
    let y = FinSet::product(&[FinSet::range(2), FinSet::range(2)]).expect("nonempty factors");
    AllMaps::new(4, 4).map(move |t| FinFn::new(y.clone(), y.clone(), t).expect("in range"))
}

/// Integer weights in `0..=max_weight`, not all zero, normalized.
pub fn random_dist(rng: &mut impl Rng, len: usize, max_weight: i64) -> Vec<Rational> {
    loop {
        let w: Vec<i64> = (0..len).map(|_| rng.gen_range(0..=max_weight)).collect();
        let total: i64 = w.iter().sum();
        if total > 0 {
            return w.into_iter().map(|x| Rational::from_ratio(x, total)).collect();
        }
    }
}

pub fn random_kernel(rng: &mut impl Rng, dom: &FinSet, cod: &FinSet) -> StochMap<Rational> {
    let rows = (0..dom.len()).map(|_| random_dist(rng, cod.len(), 3)).collect();
    StochMap::new(dom.clone(), cod.clone(), rows, 0.0).expect("stochastic")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    Generic,
    /// `(⊗ m_i) ∘ copy`: independent codes, each depending on all of `Y`.
    IndependentCodes,
    /// `⊗ m_{i,i}`.
    Componentwise,
    Deterministic,
    /// An even mixture of two componentwise kernels.
    Mixture,
}

fn joint_from_marginals(
    y: &FinSet,
    z: &FinSet,
    marginal: impl Fn(usize, usize, usize) -> Rational,
) -> StochMap<Rational> {
    let n = z.factor_count().expect("product set");
    let rows = (0..y.len())
        .map(|v| {
            (0..z.len())
                .map(|w| {
                    z.coords(w)
                        .iter()
                        .enumerate()
                        .fold(Rational::one(), |acc, (i, &zi)| acc * marginal(v, i, zi))
                })
                .collect()
        })
        .collect();
    debug_assert_eq!(n, y.factor_count().expect("product set"));
    StochMap::new(y.clone(), z.clone(), rows, 0.0).expect("stochastic")
}

fn componentwise_kernel(rng: &mut impl Rng, y: &FinSet, z: &FinSet) -> StochMap<Rational> {
    let n = y.factor_count().expect("product set");
    let parts: Vec<StochMap<Rational>> = (0..n)
        .map(|i| random_kernel(rng, y.factor(i).expect("factor"), z.factor(i).expect("factor")))
        .collect();
    joint_from_marginals(y, z, |v, i, zi| {
        let yi = y.coords(v)[i];
        parts[i].entry(yi, zi).clone()
    })
}

/// A kernel `Y -> Z` between product sets with matching factor counts.
pub fn random_code_kernel(rng: &mut impl Rng, max_factors: usize, max_size: usize) -> (KernelKind, StochMap<Rational>) {
    let n = rng.gen_range(1..=max_factors);
    let y = random_product_set(rng, n, max_size);
    let z = random_product_set(rng, n, max_size);
    let kinds = [
        KernelKind::Generic,
        KernelKind::IndependentCodes,
        KernelKind::Componentwise,
        KernelKind::Deterministic,
        KernelKind::Mixture,
    ];
    let kind = kinds[rng.gen_range(0..kinds.len())];
    let k = match kind {
        KernelKind::Generic => random_kernel(rng, &y, &z),
        KernelKind::IndependentCodes => {
            let parts: Vec<StochMap<Rational>> = (0..n)
                .map(|i| random_kernel(rng, &y, z.factor(i).expect("factor")))
                .collect();
            joint_from_marginals(&y, &z, |v, i, zi| parts[i].entry(v, zi).clone())
        }
        KernelKind::Componentwise => componentwise_kernel(rng, &y, &z),
        KernelKind::Deterministic => StochMap::deterministic(&random_fn(rng, &y, &z)),
        KernelKind::Mixture => {
            let a = componentwise_kernel(rng, &y, &z);
            let b = componentwise_kernel(rng, &y, &z);
            let half = Rational::from_ratio(1, 2);
            let rows = a
                .rows()
                .iter()
                .zip(b.rows())
                .map(|(ra, rb)| {
                    ra.iter()
                        .zip(rb)
                        .map(|(p, q)| half.clone() * p.clone() + half.clone() * q.clone())
                        .collect()
                })
                .collect();
            StochMap::new(y, z, rows, 0.0).expect("stochastic")
        }
    };
    (kind, k)
}

/// Every monoid on `{0, .., n-1}` with unit 0, for `n` in `1..=max_size`.
/// Isomorphic copies are kept.
pub fn small_monoids(max_size: usize) -> Vec<MonoidTable> {
    let mut out = Vec::new();
    for n in 1..=max_size {
        let free = (n - 1) * (n - 1);
        for vals in AllMaps::new(free, n) {
            let mut table = vec![vec![0; n]; n];
            table[0] = (0..n).collect();
            for (a, row) in table.iter_mut().enumerate() {
                row[0] = a;
            }
            for a in 1..n {
                for b in 1..n {
                    table[a][b] = vals[(a - 1) * (n - 1) + (b - 1)];
                }
            }
            let ops = OpTable {
                elements: (0..n).map(|i| i.to_string()).collect(),
                table,
                unit: 0,
            };
            if let Ok(m) = MonoidTable::new(ops) {
                out.push(m);
            }
        }
    }
    out
}

/// Every action of `m` on `{0, .., n-1}`.
pub fn all_actions(m: &MonoidTable, n: usize) -> Vec<MonoidAction> {
    let carrier = FinSet::range(n);
    let k = m.len();
    let id: Vec<usize> = (0..n).collect();
    let endos: Vec<Vec<usize>> = AllMaps::new(n, n).collect();
    let mut out = Vec::new();
    for choice in AllMaps::new(k.saturating_sub(1), endos.len()) {
        let mut tables = Vec::with_capacity(k);
        let mut rest = choice.iter();
        for a in 0..k {
            if a == m.unit() {
                tables.push(id.clone());
            } else {
                tables.push(endos[*rest.next().expect("one per element")].clone());
            }
        }
        let act = MonoidAction::new(carrier.clone(), tables).expect("endofunctions");
        let model = SchemeModel::single(act);
        if algact::validate_model(&Scheme::Monoid(m.clone()), &model).is_ok() {
            out.push(model.objects.into_iter().next().expect("one object"));
        }
    }
    out
}

/// Memoized action lists for a fixed list of monoids.
#[derive(Debug, Default)]
pub struct ActionCatalog {
    pub monoids: Vec<MonoidTable>,
    actions: HashMap<(usize, usize), Vec<MonoidAction>>,
}

impl ActionCatalog {
    pub fn new(max_monoid: usize) -> Self {
        ActionCatalog {
            monoids: small_monoids(max_monoid),
            actions: HashMap::new(),
        }
    }

    pub fn actions(&mut self, monoid: usize, n: usize) -> &[MonoidAction] {
        let m = &self.monoids[monoid];
        self.actions.entry((monoid, n)).or_insert_with(|| all_actions(m, n))
    }

    pub fn random_action(&mut self, rng: &mut impl Rng, monoid: usize, max_carrier: usize) -> MonoidAction {
        let n = rng.gen_range(1..=max_carrier);
        let list = self.actions(monoid, n);
        list[rng.gen_range(0..list.len())].clone()
    }
}

/// Conjugate a model's top object by a bijection of its carrier.
fn transport(model: &SchemeModel, sigma: &[usize]) -> SchemeModel {
    let top = &model.objects[ProductScheme::S12];
    let c = top.carrier.clone();
    let mut inv = vec![0; sigma.len()];
    for (x, &s) in sigma.iter().enumerate() {
        inv[s] = x;
    }
    let maps = top
        .maps
        .iter()
        .map(|f| FinFn::from_fn(c.clone(), c.clone(), |x| sigma[f.apply(inv[x])]).expect("in range"))
        .collect();
    let projections = model
        .projections
        .iter()
        .map(|q| FinFn::from_fn(c.clone(), q.cod().clone(), |x| q.apply(inv[x])).expect("in range"))
        .collect();
    let mut out = model.clone();
    out.objects[ProductScheme::S12] = MonoidAction { carrier: c, maps };
    out.projections = projections;
    out
}

/// A componentwise model transported by a random permutation of its top carrier.
pub fn random_product_preserving(
    rng: &mut impl Rng,
    cat: &mut ActionCatalog,
    s: &ProductScheme,
    ids: (usize, usize),
    max_carrier: usize,
) -> SchemeModel {
    let f1 = cat.random_action(rng, ids.0, max_carrier);
    let f2 = cat.random_action(rng, ids.1, max_carrier);
    let model = SchemeModel::componentwise(s, f1, f2).expect("valid actions");
    let mut sigma: Vec<usize> = (0..model.objects[2].carrier.len()).collect();
    sigma.shuffle(rng);
    transport(&model, &sigma)
}

/// A product-scheme model whose top object is either a transported product
/// or a small carrier acted on by commuting actions of `M1` and `M2`.
pub fn random_product_model(
    rng: &mut impl Rng,
    cat: &mut ActionCatalog,
    s: &ProductScheme,
    ids: (usize, usize),
    max_carrier: usize,
) -> SchemeModel {
    if rng.gen_bool(0.5) {
        return random_product_preserving(rng, cat, s, ids, max_carrier);
    }
    let f1 = cat.random_action(rng, ids.0, max_carrier);
    let f2 = cat.random_action(rng, ids.1, max_carrier);
    let c = rng.gen_range(1..=max_carrier);
    let alphas = cat.actions(ids.0, c).to_vec();
    let betas = cat.actions(ids.1, c).to_vec();
    let alpha = &alphas[rng.gen_range(0..alphas.len())];
    let beta = &betas[rng.gen_range(0..betas.len())];
    let commute = alpha.maps.iter().all(|a| beta.maps.iter().all(|b| a.then(b).ok() == b.then(a).ok()));
    if !commute {
        return random_product_preserving(rng, cat, s, ids, max_carrier);
    }
    let carrier = FinSet::range(c);
    let maps = (0..s.joint().len())
        .map(|x| {
            let (a, b) = s.split(x);
            beta.maps[b].then(&alpha.maps[a]).expect("endofunctions")
        })
        .collect();
    let top = MonoidAction { carrier: carrier.clone(), maps };
    let pick = |rng: &mut dyn rand::RngCore, side: &MonoidAction, which: usize| -> Option<FinFn> {
        let options: Vec<FinFn> = AllMaps::new(c, side.carrier.len())
            .map(|t| FinFn::new(carrier.clone(), side.carrier.clone(), t).expect("in range"))
            .filter(|q| {
                (0..s.joint().len()).all(|x| {
                    let (a, b) = s.split(x);
                    let e = if which == 0 { a } else { b };
                    (0..c).all(|v| q.apply(top.act(x, v)) == side.act(e, q.apply(v)))
                })
            })
            .collect();
        (!options.is_empty()).then(|| options[rng.gen_range(0..options.len())].clone())
    };
    match (pick(rng, &f1, 0), pick(rng, &f2, 1)) {
        (Some(q1), Some(q2)) => SchemeModel::product(f1, f2, top.clone(), q1, q2),
        _ => random_product_preserving(rng, cat, s, ids, max_carrier),
    }
}

/// Maps `src -> dst` commuting with every element, in lexicographic order,
/// also passing `extra` on each assigned prefix; at most `limit` results.
fn equivariant_maps(
    src: &MonoidAction,
    dst: &MonoidAction,
    limit: usize,
    extra: &dyn Fn(&[usize]) -> bool,
) -> Vec<Vec<usize>> {
    fn go(
        src: &MonoidAction,
        dst: &MonoidAction,
        limit: usize,
        extra: &dyn Fn(&[usize]) -> bool,
        h: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if out.len() >= limit {
            return;
        }
        let n = src.carrier.len();
        if h.len() == n {
            out.push(h.clone());
            return;
        }
        for v in 0..dst.carrier.len() {
            h.push(v);
            let p = h.len() - 1;
            let squares = (0..src.maps.len()).all(|a| {
                (0..=p).all(|z| {
                    let az = src.act(a, z);
                    if az > p || (z != p && az != p) {
                        return true;
                    }
                    h[az] == dst.act(a, h[z])
                })
            });
            if squares && extra(h) {
                go(src, dst, limit, extra, h, out);
            }
            h.pop();
        }
    }
    let mut out = Vec::new();
    go(src, dst, limit, extra, &mut Vec::new(), &mut out);
    out
}

/// Natural transformations `F ⇒ G`, at most `limit` of them.
pub fn natural_transformations(f: &SchemeModel, g: &SchemeModel, limit: usize) -> Vec<EquivariantMap> {
    let to_fn = |o: usize, t: Vec<usize>| {
        FinFn::new(f.objects[o].carrier.clone(), g.objects[o].carrier.clone(), t).expect("in range")
    };
    let none = |_: &[usize]| true;
    if f.objects.len() == 1 {
        return equivariant_maps(&f.objects[0], &g.objects[0], limit, &none)
            .into_iter()
            .map(|t| EquivariantMap {
                components: vec![to_fn(0, t)],
            })
            .collect();
    }
    let firsts = equivariant_maps(&f.objects[0], &g.objects[0], limit, &none);
    let seconds = equivariant_maps(&f.objects[1], &g.objects[1], limit, &none);
    let mut out = Vec::new();
    for m1 in &firsts {
        for m2 in &seconds {
            let sides = [m1, m2];
            let extra = |h: &[usize]| {
                let x = h.len() - 1;
                (0..2).all(|i| {
                    g.projections[i].apply(h[x]) == sides[i][f.projections[i].apply(x)]
                })
            };
            for top in equivariant_maps(&f.objects[2], &g.objects[2], limit - out.len(), &extra) {
                out.push(EquivariantMap {
                    components: vec![to_fn(0, m1.clone()), to_fn(1, m2.clone()), to_fn(2, top)],
                });
                if out.len() >= limit {
                    return out;
                }
            }
        }
    }
    out
}

/// The pointwise product `F x G` of two models over the same scheme.
pub fn model_product(f: &SchemeModel, g: &SchemeModel) -> SchemeModel {
    let objects: Vec<MonoidAction> = f
        .objects
        .iter()
        .zip(&g.objects)
        .map(|(a, b)| algact::functor_product(&[a.clone(), b.clone()]).expect("same monoid"))
        .collect();
    let projections = f
        .projections
        .iter()
        .zip(&g.projections)
        .enumerate()
        .map(|(i, (qa, qb))| {
            FinFn::product(&[qa.clone(), qb.clone()])
                .and_then(|q| q.with_carriers(objects[2].carrier.clone(), objects[i].carrier.clone()))
                .expect("matching carriers")
        })
        .collect();
    SchemeModel { objects, projections }
}

/// `<id, w>: F ⇒ F x G`.
pub fn pair_with_identity(f: &SchemeModel, fg: &SchemeModel, w: &EquivariantMap) -> EquivariantMap {
    let components = f
        .objects
        .iter()
        .enumerate()
        .map(|(o, a)| {
            let c = fg.objects[o].carrier.clone();
            let cart = CartesianProduct {
                product: c.clone(),
                projections: Vec::new(),
            };
            cart.pair(&[FinFn::identity(&a.carrier), w.components[o].clone()])
                .and_then(|p| p.with_carriers(a.carrier.clone(), c))
                .expect("matching carriers")
        })
        .collect();
    EquivariantMap { components }
}

/// A scheme/model/μ triple for the faithfulness suite.
#[derive(Debug, Clone)]
pub struct ActionTriple {
    pub scheme: Scheme,
    pub fy: SchemeModel,
    pub fz: SchemeModel,
    pub mu: EquivariantMap,
}

fn random_model(rng: &mut impl Rng, cat: &mut ActionCatalog, scheme: &Scheme, ids: (usize, usize), max_carrier: usize) -> SchemeModel {
    match scheme {
        Scheme::Monoid(_) => SchemeModel::single(cat.random_action(rng, ids.0, max_carrier)),
        Scheme::Product(s) => random_product_model(rng, cat, s, ids, max_carrier),
    }
}

/// Draw a triple: a random scheme over monoids of size at most 3, a random
/// `F_Y`, and `F_Z` either random, equal to `F_Y`, or `F_Y x F_W` with
/// `μ = <id, w>`.
pub fn random_action_triple(rng: &mut impl Rng, cat: &mut ActionCatalog, max_carrier: usize) -> ActionTriple {
    loop {
        let k = cat.monoids.len();
        let ids = (rng.gen_range(0..k), rng.gen_range(0..k));
        let scheme = if rng.gen_bool(0.5) {
            Scheme::Monoid(cat.monoids[ids.0].clone())
        } else {
            Scheme::Product(ProductScheme::new(cat.monoids[ids.0].clone(), cat.monoids[ids.1].clone()))
        };
        let fy = random_model(rng, cat, &scheme, ids, max_carrier);
        let mode = rng.gen_range(0..3);
        let (fz, mu) = match mode {
            0 => {
                let fz = random_model(rng, cat, &scheme, ids, max_carrier);
                let all = natural_transformations(&fy, &fz, 64);
                if all.is_empty() {
                    continue;
                }
                let mu = all[rng.gen_range(0..all.len())].clone();
                (fz, mu)
            }
            1 => {
                let all = natural_transformations(&fy, &fy, 64);
                let mu = all[rng.gen_range(0..all.len())].clone();
                (fy.clone(), mu)
            }
            _ => {
                let fw = random_model(rng, cat, &scheme, ids, 2);
                let ws = natural_transformations(&fy, &fw, 64);
                if ws.is_empty() {
                    continue;
                }
                let w = &ws[rng.gen_range(0..ws.len())];
                let fz = model_product(&fy, &fw);
                let mu = pair_with_identity(&fy, &fz, w);
                (fz, mu)
            }
        };
        return ActionTriple { scheme, fy, fz, mu };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algact::validate_model;
    use crate::finstoch::{is_componentwise, is_projectable};

    #[test]
    fn monoid_enumeration_counts() {
        let ms = small_monoids(3);
        // labelled tables with unit 0, counted independently by brute force
        assert_eq!(ms.iter().filter(|m| m.len() == 1).count(), 1);
        assert_eq!(ms.iter().filter(|m| m.len() == 2).count(), 2);
        assert_eq!(ms.iter().filter(|m| m.len() == 3).count(), 11);
    }

    #[test]
    fn action_enumeration_matches_brute_force() {
        let z2 = MonoidTable::cyclic(2);
        // Z2 acts on {0,1,2} through involutions: the identity and three transpositions
        assert_eq!(all_actions(&z2, 3).len(), 4);
        assert_eq!(all_actions(&MonoidTable::saturating(1), 2).len(), 3);
    }

    #[test]
    fn product_morphism_family_size() {
        assert_eq!(all_binary_product_morphisms(3).count(), 56 * 56);
        assert_eq!(all_two_bit_maps().count(), 256);
    }

    #[test]
    fn kernel_kinds_have_their_properties() {
        let mut rng = rng_for(7, 1);
        for _ in 0..60 {
            let (kind, k) = random_code_kernel(&mut rng, 3, 3);
            match kind {
                KernelKind::Componentwise => {
                    assert!(is_componentwise(&k, 0.0).unwrap().is_some());
                    assert!(is_projectable(&k, 0.0).unwrap());
                }
                KernelKind::IndependentCodes => assert!(is_projectable(&k, 0.0).unwrap()),
                KernelKind::Mixture => assert!(is_componentwise(&k, 0.0).unwrap().is_some()),
                _ => {}
            }
        }
    }

    #[test]
    fn generated_triples_are_valid() {
        let mut rng = rng_for(3, 2);
        let mut cat = ActionCatalog::new(3);
        for _ in 0..40 {
            let t = random_action_triple(&mut rng, &mut cat, 3);
            assert_eq!(validate_model(&t.scheme, &t.fy), Ok(()));
            assert_eq!(validate_model(&t.scheme, &t.fz), Ok(()));
            assert!(algact::is_natural(&t.mu, &t.fy, &t.fz).unwrap());
        }
    }

    #[test]
    fn natural_transformations_match_brute_force() {
        let z2 = MonoidTable::cyclic(2);
        let flip = MonoidAction::rotation(&z2, &FinSet::range(2)).unwrap();
        let fix = MonoidAction::new(FinSet::range(3), vec![vec![0, 1, 2], vec![1, 0, 2]]).unwrap();
        let (f, g) = (SchemeModel::single(flip.clone()), SchemeModel::single(fix.clone()));
        let brute = AllMaps::new(2, 3)
            .filter(|t| {
                let h = FinFn::new(FinSet::range(2), FinSet::range(3), t.clone()).unwrap();
                algact::is_equivariant(&h, &flip, &fix).unwrap()
            })
            .count();
        assert_eq!(natural_transformations(&f, &g, 100).len(), brute);
        let s = ProductScheme::new(z2.clone(), z2.clone());
        let m = SchemeModel::componentwise(&s, flip.clone(), flip).unwrap();
        let all = natural_transformations(&m, &m, 100);
        assert_eq!(all.len(), 4);
        assert!(all.iter().all(|mu| algact::is_natural(mu, &m, &m).unwrap()));
    }
}
