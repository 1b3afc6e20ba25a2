//! Finite stochastic maps as a Markov category.
//!
//! A kernel `A -> B` is a row-stochastic matrix with one row per element of
//! `A`. Entries are generic over [`Weight`]: exact rationals decide every
//! equality exactly (the tolerance argument is ignored), floats compare
//! entrywise within the tolerance.

use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{mismatch, Error, Result};
use crate::finset::{FinFn, FinSet};

pub type Rational = BigRational;

/// Default tolerance for float kernels.
pub const DEFAULT_EPSILON: f64 = 1e-9;

pub trait Weight:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn approx_eq(&self, other: &Self, eps: f64) -> bool;
    /// At most `eps` (exactly zero for rationals).
    fn is_negligible(&self, eps: f64) -> bool;
    fn is_below(&self, bound: &Self, eps: f64) -> bool;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;
}

impl Weight for f64 {
    fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        (self - other).abs() <= eps
    }

    fn is_negligible(&self, eps: f64) -> bool {
        *self <= eps
    }

    fn is_below(&self, bound: &Self, eps: f64) -> bool {
        *self < bound - eps
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Weight for Rational {
    fn approx_eq(&self, other: &Self, _eps: f64) -> bool {
        self == other
    }

    fn is_negligible(&self, _eps: f64) -> bool {
        !self.is_positive()
    }

    fn is_below(&self, bound: &Self, _eps: f64) -> bool {
        self < bound
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

fn sum<W: Weight>(it: impl IntoIterator<Item = W>) -> W {
    it.into_iter().fold(W::zero(), |acc, w| acc + w)
}

#[derive(Clone, PartialEq)]
pub struct StochMap<W> {
    dom: FinSet,
    cod: FinSet,
    rows: Vec<Vec<W>>,
}

impl<W: fmt::Debug> fmt::Debug for StochMap<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StochMap{:?}", self.rows)
    }
}

impl<W: Weight> StochMap<W> {
    /// Rows must be nonnegative and sum to one within `eps`; entries in
    /// `[-eps, 0)` are clamped to zero.
    pub fn new(dom: FinSet, cod: FinSet, mut rows: Vec<Vec<W>>, eps: f64) -> Result<Self> {
        if rows.len() != dom.len() {
            return Err(Error::InvalidKernel(format!(
                "{} rows for a domain of {}",
                rows.len(),
                dom.len()
            )));
        }
        let zero = W::zero();
        for (a, row) in rows.iter_mut().enumerate() {
            if row.len() != cod.len() {
                return Err(Error::InvalidKernel(format!(
                    "row {a} has {} entries for a codomain of {}",
                    row.len(),
                    cod.len()
                )));
            }
            for w in row.iter_mut() {
                if w.is_below(&zero, eps) {
                    return Err(Error::InvalidKernel(format!("negative entry in row {a}")));
                }
                if w.is_below(&zero, 0.0) {
                    *w = W::zero();
                }
            }
            let total = sum(row.iter().cloned());
            if !total.approx_eq(&W::one(), eps) {
                return Err(Error::InvalidKernel(format!(
                    "row {a} sums to {:.6}, not 1",
                    total.to_f64()
                )));
            }
        }
        Ok(StochMap { dom, cod, rows })
    }

    /// The point-mass kernel of a function.
    pub fn deterministic(f: &FinFn) -> Self {
        let rows = f
            .table()
            .iter()
            .map(|&b| point_row(f.cod().len(), b))
            .collect();
        StochMap {
            dom: f.dom().clone(),
            cod: f.cod().clone(),
            rows,
        }
    }

    pub fn identity(a: &FinSet) -> Self {
        StochMap::deterministic(&FinFn::identity(a))
    }

    /// A kernel that ignores its input.
    pub fn constant(dom: &FinSet, cod: &FinSet, dist: &[W]) -> Result<Self> {
        StochMap::new(dom.clone(), cod.clone(), vec![dist.to_vec(); dom.len()], 0.0)
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn rows(&self) -> &[Vec<W>] {
        &self.rows
    }

    pub fn row(&self, a: usize) -> &[W] {
        &self.rows[a]
    }

    pub fn entry(&self, a: usize, b: usize) -> &W {
        &self.rows[a][b]
    }

    pub fn with_carriers(&self, dom: FinSet, cod: FinSet) -> Result<Self> {
        if dom.len() != self.dom.len() || cod.len() != self.cod.len() {
            return Err(mismatch("with_carriers", "sizes differ"));
        }
        Ok(StochMap {
            dom,
            cod,
            rows: self.rows.clone(),
        })
    }

    pub fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        self.dom.len() == other.dom.len()
            && self.cod.len() == other.cod.len()
            && self
                .rows
                .iter()
                .flatten()
                .zip(other.rows.iter().flatten())
                .all(|(a, b)| a.approx_eq(b, eps))
    }

    pub fn map_weights<V: Weight>(&self, f: impl Fn(&W) -> V) -> StochMap<V> {
        StochMap {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            rows: self.rows.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }
}

fn point_row<W: Weight>(len: usize, at: usize) -> Vec<W> {
    let mut row = vec![W::zero(); len];
    row[at] = W::one();
    row
}

/// `q ∘ p`, the Chapman-Kolmogorov composite.
pub fn stoch_compose<W: Weight>(p: &StochMap<W>, q: &StochMap<W>) -> Result<StochMap<W>> {
    if !p.cod.same_carrier(&q.dom) {
        return Err(mismatch("stoch_compose", "codomain and domain differ"));
    }
    let rows = p
        .rows
        .iter()
        .map(|prow| {
            let mut out = vec![W::zero(); q.cod.len()];
            for (b, pb) in prow.iter().enumerate() {
                if pb.is_zero() {
                    continue;
                }
                for (c, qc) in q.rows[b].iter().enumerate() {
                    out[c] = out[c].clone() + pb.clone() * qc.clone();
                }
            }
            out
        })
        .collect();
    Ok(StochMap {
        dom: p.dom.clone(),
        cod: q.cod.clone(),
        rows,
    })
}

/// The monoidal product of kernels on product carriers.
pub fn tensor_all<W: Weight>(parts: &[StochMap<W>]) -> Result<StochMap<W>> {
    let doms: Vec<FinSet> = parts.iter().map(|k| k.dom.clone()).collect();
    let cods: Vec<FinSet> = parts.iter().map(|k| k.cod.clone()).collect();
    let dom = FinSet::product(&doms)?;
    let cod = FinSet::product(&cods)?;
    let rows = (0..dom.len())
        .map(|a| {
            let ac = dom.coords(a);
            (0..cod.len())
                .map(|b| {
                    cod.coords(b)
                        .iter()
                        .enumerate()
                        .fold(W::one(), |acc, (i, &bi)| acc * parts[i].rows[ac[i]][bi].clone())
                })
                .collect()
        })
        .collect();
    Ok(StochMap { dom, cod, rows })
}

pub fn tensor<W: Weight>(p: &StochMap<W>, q: &StochMap<W>) -> Result<StochMap<W>> {
    tensor_all(&[p.clone(), q.clone()])
}

/// The comonoid structure on an object together with the symmetry.
#[derive(Debug, Clone)]
pub struct MarkovGenerators<W> {
    pub copy: StochMap<W>,
    pub delete: StochMap<W>,
    pub swap: StochMap<W>,
}

pub fn markov_generators<W: Weight>(a: &FinSet) -> Result<MarkovGenerators<W>> {
    Ok(MarkovGenerators {
        copy: copy(a)?,
        delete: delete(a),
        swap: swap(a, a)?,
    })
}

/// `copy_A: A -> A ⊗ A`, `a ↦ δ(a, a)`.
pub fn copy<W: Weight>(a: &FinSet) -> Result<StochMap<W>> {
    copy_n(a, 2)
}

/// `copy^n_A: A -> A^{⊗n}`.
pub fn copy_n<W: Weight>(a: &FinSet, n: usize) -> Result<StochMap<W>> {
    let target = FinSet::product(&vec![a.clone(); n])?;
    let f = FinFn::from_fn(a.clone(), target.clone(), |x| target.index_of_coords(&vec![x; n]))?;
    Ok(StochMap::deterministic(&f))
}

/// `del_A: A -> 1`.
pub fn delete<W: Weight>(a: &FinSet) -> StochMap<W> {
    StochMap::deterministic(&crate::finset::terminal(a))
}

/// The symmetry `A ⊗ B -> B ⊗ A`.
pub fn swap<W: Weight>(a: &FinSet, b: &FinSet) -> Result<StochMap<W>> {
    Ok(StochMap::deterministic(&crate::finset::swap(a, b)?))
}

/// Sum out every codomain factor not in `keep`. The result lands in the
/// kept factor itself when one index is kept, in the one-point set when none
/// are, and in the product of the kept factors (in the given order) otherwise.
pub fn marginalize<W: Weight>(m: &StochMap<W>, keep: &[usize]) -> Result<StochMap<W>> {
    let factors = m.cod.factors().ok_or(Error::MissingFactors("codomain"))?;
    if let Some(&bad) = keep.iter().find(|&&i| i >= factors.len()) {
        return Err(Error::FactorIndex {
            index: bad,
            count: factors.len(),
        });
    }
    let target = match keep {
        [] => FinSet::one(),
        [i] => factors[*i].clone(),
        _ => FinSet::product(&keep.iter().map(|&i| factors[i].clone()).collect::<Vec<_>>())?,
    };
    let project = |z: usize| -> usize {
        let c = m.cod.coords(z);
        match keep {
            [] => 0,
            [i] => c[*i],
            _ => target.index_of_coords(&keep.iter().map(|&i| c[i]).collect::<Vec<_>>()),
        }
    };
    let targets: Vec<usize> = (0..m.cod.len()).map(project).collect();
    let rows = m
        .rows
        .iter()
        .map(|row| {
            let mut out = vec![W::zero(); target.len()];
            for (z, w) in row.iter().enumerate() {
                out[targets[z]] = out[targets[z]].clone() + w.clone();
            }
            out
        })
        .collect();
    Ok(StochMap {
        dom: m.dom.clone(),
        cod: target,
        rows,
    })
}

/// Both characterizations of determinism.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Determinism {
    /// `copy ∘ f = (f ⊗ f) ∘ copy`.
    pub copy_natural: bool,
    /// Every row is a point mass.
    pub point_mass: bool,
}

pub fn determinism<W: Weight>(f: &StochMap<W>, eps: f64) -> Result<Determinism> {
    let lhs = stoch_compose(f, &copy(&f.cod)?)?;
    let rhs = stoch_compose(&copy(&f.dom)?, &tensor(f, f)?)?;
    let copy_natural = lhs.approx_eq(&rhs, eps);
    let one = W::one();
    let point_mass = f.rows.iter().all(|row| {
        let heavy = row.iter().filter(|w| w.approx_eq(&one, eps)).count();
        let light = row.iter().filter(|w| w.is_negligible(eps)).count();
        heavy == 1 && heavy + light == row.len()
    });
    Ok(Determinism {
        copy_natural,
        point_mass,
    })
}

pub fn is_deterministic<W: Weight>(f: &StochMap<W>, eps: f64) -> Result<bool> {
    Ok(determinism(f, eps)?.copy_natural)
}

/// For every input, the joint over codes equals the product of its marginals.
pub fn is_projectable<W: Weight>(m: &StochMap<W>, eps: f64) -> Result<bool> {
    let n = m.cod.factor_count().ok_or(Error::MissingFactors("codomain"))?;
    let marginals: Vec<StochMap<W>> = (0..n).map(|i| marginalize(m, &[i])).collect::<Result<_>>()?;
    let coords: Vec<Vec<usize>> = (0..m.cod.len()).map(|z| m.cod.coords(z)).collect();
    Ok((0..m.dom.len()).all(|y| {
        coords.iter().enumerate().all(|(z, c)| {
            let product = c
                .iter()
                .enumerate()
                .fold(W::one(), |acc, (i, &zi)| acc * marginals[i].rows[y][zi].clone());
            m.rows[y][z].approx_eq(&product, eps)
        })
    }))
}

/// Whether `f: A -> X ⊗ W ⊗ Y` displays `X ⊥ Y | W, A`, decided by finite
/// disintegration: states of `W` with negligible mass impose no constraint.
pub fn check_cond_independence<W: Weight>(f: &StochMap<W>, eps: f64) -> Result<bool> {
    let fs = f.cod.factors().ok_or(Error::MissingFactors("codomain"))?;
    if fs.len() != 3 {
        return Err(Error::InvalidKernel(format!(
            "codomain has {} factors, expected X ⊗ W ⊗ Y",
            fs.len()
        )));
    }
    let (nx, nw, ny) = (fs[0].len(), fs[1].len(), fs[2].len());
    let at = |x: usize, w: usize, y: usize| (x * nw + w) * ny + y;
    for row in &f.rows {
        for w in 0..nw {
            let pw = sum((0..nx).flat_map(|x| (0..ny).map(move |y| (x, y))).map(|(x, y)| row[at(x, w, y)].clone()));
            if pw.is_negligible(eps) {
                continue;
            }
            let px: Vec<W> = (0..nx)
                .map(|x| sum((0..ny).map(|y| row[at(x, w, y)].clone())) / pw.clone())
                .collect();
            let py: Vec<W> = (0..ny)
                .map(|y| sum((0..nx).map(|x| row[at(x, w, y)].clone())) / pw.clone())
                .collect();
            for x in 0..nx {
                for y in 0..ny {
                    let joint = row[at(x, w, y)].clone() / pw.clone();
                    if !joint.approx_eq(&(px[x].clone() * py[y].clone()), eps) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// The kernel `Y -> Z_i ⊗ Y ⊗ Z_{\i}` pairing `m` with a copy of its input,
/// whose conditional independence is `Z_i ⊥ Z_{\i} | Y`.
pub fn split_with_input<W: Weight>(m: &StochMap<W>, i: usize) -> Result<StochMap<W>> {
    let zi = m.cod.factor(i)?.clone();
    let rest = m.cod.complement(i)?;
    let n = m.cod.factor_count().expect("checked");
    let target = FinSet::product(&[zi.clone(), m.dom.clone(), rest.clone()])?;
    let ny = m.dom.len();
    let mut rows = vec![vec![W::zero(); target.len()]; ny];
    for (y, row) in rows.iter_mut().enumerate() {
        for (z, w) in m.rows[y].iter().enumerate() {
            let mut c = m.cod.coords(z);
            let ci = c.remove(i);
            let r = if n == 1 { 0 } else { rest.index_of_coords(&c) };
            row[(ci * ny + y) * rest.len() + r] = w.clone();
        }
    }
    Ok(StochMap {
        dom: m.dom.clone(),
        cod: target,
        rows,
    })
}

/// `Z_i ⊥ Z_{\i} | Y` for every `i`.
pub fn codes_independent_given_factors<W: Weight>(m: &StochMap<W>, eps: f64) -> Result<bool> {
    let n = m.cod.factor_count().ok_or(Error::MissingFactors("codomain"))?;
    for i in 0..n {
        if !check_cond_independence(&split_with_input(m, i)?, eps)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn factor_counts<W>(m: &StochMap<W>) -> Result<usize> {
    let n = m.dom.factor_count().ok_or(Error::MissingFactors("domain"))?;
    let k = m.cod.factor_count().ok_or(Error::MissingFactors("codomain"))?;
    if n != k {
        return Err(Error::FactorCountMismatch { dom: n, cod: k });
    }
    Ok(n)
}

/// Each marginal `m_i(· | y)` is constant in `y_{\i}` for fixed `y_i`.
///
/// Quantifying the probe condition over every `n_i: Y_i -> Y_{\i}` reduces
/// to this: a two-point uniform probe separates any two values of `y_{\i}`
/// at which `m_i` differs, and constancy makes both sides equal for every
/// probe.
pub fn is_modular_stoch<W: Weight>(m: &StochMap<W>, eps: f64) -> Result<bool> {
    let n = factor_counts(m)?;
    for i in 0..n {
        let mi = marginalize(m, &[i])?;
        let pairs = crate::finset::pullback_pairs(&m.dom, i)?;
        let constant = pairs.into_iter().all(|(a, b)| {
            mi.rows[a]
                .iter()
                .zip(&mi.rows[b])
                .all(|(p, q)| p.approx_eq(q, eps))
        });
        if !constant {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Components `m_{i,i}(z_i | y_i)` with `m_i = m_{i,i} ⊗ del_{Y_{\i}}` (after
/// reordering `Y ≅ Y_i ⊗ Y_{\i}`), if they exist.
pub fn is_componentwise<W: Weight>(m: &StochMap<W>, eps: f64) -> Result<Option<Vec<StochMap<W>>>> {
    let n = factor_counts(m)?;
    let mut components = Vec::with_capacity(n);
    for i in 0..n {
        let yi = m.dom.factor(i)?.clone();
        let rest = m.dom.complement(i)?;
        let mi = marginalize(m, &[i])?;
        let rows = (0..yi.len())
            .map(|v| {
                let mut point = vec![0; n];
                point[i] = v;
                mi.rows[m.dom.index_of_coords(&point)].clone()
            })
            .collect();
        let mii = StochMap {
            dom: yi.clone(),
            cod: mi.cod.clone(),
            rows,
        };
        // Y -> Y_i ⊗ Y_{\i}
        let split = FinSet::product(&[yi.clone(), rest.clone()])?;
        let reorder = FinFn::from_fn(m.dom.clone(), split.clone(), |y| {
            let mut c = m.dom.coords(y);
            let ci = c.remove(i);
            let r = if n == 1 { 0 } else { rest.index_of_coords(&c) };
            split.index_of_coords(&[ci, r])
        })?;
        let drop_rest = tensor(&mii, &delete(&rest))?;
        let candidate = stoch_compose(&StochMap::deterministic(&reorder), &drop_rest)?;
        if !candidate.approx_eq(&mi, eps) {
            return Ok(None);
        }
        components.push(mii);
    }
    Ok(Some(components))
}

/// Two joints on `{0,1} ⊗ {0,1}` with the same uniform marginals: the
/// independent one and the perfectly correlated one.
pub fn marginals_witness() -> (StochMap<Rational>, StochMap<Rational>) {
    let bit = FinSet::range(2);
    let joint = FinSet::product(&[bit.clone(), bit]).expect("nonempty factors");
    let q = |n, d| Rational::from_ratio(n, d);
    let independent = vec![vec![q(1, 4), q(1, 4), q(1, 4), q(1, 4)]];
    let correlated = vec![vec![q(1, 2), q(0, 1), q(0, 1), q(1, 2)]];
    let one = FinSet::one();
    (
        StochMap::new(one.clone(), joint.clone(), independent, 0.0).expect("stochastic"),
        StochMap::new(one, joint, correlated, 0.0).expect("stochastic"),
    )
}

/// A probability distribution on a finite set.
#[derive(Debug, Clone, PartialEq)]
pub struct FinDist<W> {
    carrier: FinSet,
    weights: Vec<W>,
}

impl<W: Weight> FinDist<W> {
    pub fn new(carrier: FinSet, weights: Vec<W>, eps: f64) -> Result<Self> {
        let k = StochMap::new(FinSet::one(), carrier, vec![weights], eps)?;
        Ok(FinDist {
            carrier: k.cod,
            weights: k.rows.into_iter().next().expect("one row"),
        })
    }

    pub fn point(carrier: &FinSet, at: usize) -> Self {
        FinDist {
            carrier: carrier.clone(),
            weights: point_row(carrier.len(), at),
        }
    }

    pub fn uniform(carrier: &FinSet) -> Self {
        let n = carrier.len() as i64;
        FinDist {
            carrier: carrier.clone(),
            weights: vec![W::from_ratio(1, n); carrier.len()],
        }
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn weights(&self) -> &[W] {
        &self.weights
    }

    pub fn pushforward(&self, f: &FinFn) -> Result<FinDist<W>> {
        if !f.dom().same_carrier(&self.carrier) {
            return Err(mismatch("pushforward", "map domain differs from the carrier"));
        }
        let mut weights = vec![W::zero(); f.cod().len()];
        for (x, w) in self.weights.iter().enumerate() {
            let b = f.apply(x);
            weights[b] = weights[b].clone() + w.clone();
        }
        Ok(FinDist {
            carrier: f.cod().clone(),
            weights,
        })
    }
}

/// `f_* pA = pB`.
pub fn is_measure_preserving<W: Weight>(
    pa: &FinDist<W>,
    f: &FinFn,
    pb: &FinDist<W>,
    eps: f64,
) -> Result<bool> {
    if !f.cod().same_carrier(&pb.carrier) {
        return Err(mismatch("is_measure_preserving", "map codomain differs from the target"));
    }
    let pushed = pa.pushforward(f)?;
    Ok(pushed
        .weights
        .iter()
        .zip(&pb.weights)
        .all(|(a, b)| a.approx_eq(b, eps)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn bit() -> FinSet {
        FinSet::range(2)
    }

    fn joint() -> FinSet {
        FinSet::product(&[bit(), bit()]).unwrap()
    }

    fn coin() -> StochMap<Rational> {
        StochMap::new(FinSet::one(), bit(), vec![vec![q(1, 2), q(1, 2)]], 0.0).unwrap()
    }

    #[test]
    fn rejects_non_stochastic_rows() {
        let bad = StochMap::new(bit(), bit(), vec![vec![q(1, 2), q(1, 4)], vec![q(1, 1), q(0, 1)]], 0.0);
        assert!(bad.is_err());
        let neg = StochMap::new(FinSet::one(), bit(), vec![vec![-0.5, 1.5]], 1e-9);
        assert!(neg.is_err());
        let clamped = StochMap::new(FinSet::one(), bit(), vec![vec![-1e-12, 1.0]], 1e-9).unwrap();
        assert_eq!(clamped.entry(0, 0), &0.0);
    }

    #[test]
    fn composition_with_identity_and_uniform() {
        let p = StochMap::new(bit(), bit(), vec![vec![q(1, 3), q(2, 3)], vec![q(1, 1), q(0, 1)]], 0.0).unwrap();
        assert_eq!(stoch_compose(&StochMap::identity(&bit()), &p).unwrap(), p);
        let fair = StochMap::constant(&bit(), &bit(), &[q(1, 2), q(1, 2)]).unwrap();
        let c = stoch_compose(&fair, &fair).unwrap();
        assert!(c.rows().iter().all(|r| r == &vec![q(1, 2), q(1, 2)]));
        assert!(stoch_compose(&coin(), &StochMap::identity(&joint())).is_err());
    }

    #[test]
    fn comonoid_laws() {
        let two = bit();
        let g: MarkovGenerators<Rational> = markov_generators(&two).unwrap();
        let id = StochMap::identity(&two);
        let counit = stoch_compose(&g.copy, &tensor(&g.delete, &id).unwrap()).unwrap();
        assert!(counit.approx_eq(&id, 0.0));
        let three = FinSet::range(3);
        let c3: StochMap<Rational> = copy(&three).unwrap();
        let id3 = StochMap::identity(&three);
        let left = stoch_compose(&c3, &tensor(&c3, &id3).unwrap()).unwrap();
        let right = stoch_compose(&c3, &tensor(&id3, &c3).unwrap()).unwrap();
        assert!(left.approx_eq(&right, 0.0));
        let swapped = stoch_compose(&g.copy, &g.swap).unwrap();
        assert_eq!(swapped, g.copy);
    }

    #[test]
    fn marginals() {
        let m = StochMap::new(FinSet::one(), joint(), vec![vec![q(0, 1), q(1, 1), q(0, 1), q(0, 1)]], 0.0).unwrap();
        assert_eq!(marginalize(&m, &[0, 1]).unwrap().rows(), m.rows());
        assert_eq!(marginalize(&m, &[0]).unwrap().row(0), &[q(1, 1), q(0, 1)]);
        let (_, corr) = marginals_witness();
        assert_eq!(marginalize(&corr, &[0]).unwrap().row(0), &[q(1, 2), q(1, 2)]);
        assert!(marginalize(&coin(), &[0]).is_err());
    }

    #[test]
    fn marginalizing_equals_deleting() {
        let (_, corr) = marginals_witness();
        let via_delete = stoch_compose(
            &corr,
            &tensor(&StochMap::identity(&bit()), &delete(&bit())).unwrap(),
        )
        .unwrap();
        assert!(via_delete.approx_eq(&marginalize(&corr, &[0]).unwrap(), 0.0));
    }

    #[test]
    fn determinism_characterizations() {
        let f = FinFn::new(bit(), FinSet::range(3), vec![2, 0]).unwrap();
        let d = determinism(&StochMap::<Rational>::deterministic(&f), 0.0).unwrap();
        assert_eq!(d, Determinism { copy_natural: true, point_mass: true });
        let d = determinism(&coin(), 0.0).unwrap();
        assert_eq!(d, Determinism { copy_natural: false, point_mass: false });
        let lhs = stoch_compose(&coin(), &copy(&bit()).unwrap()).unwrap();
        assert_eq!(lhs.row(0), &[q(1, 2), q(0, 1), q(0, 1), q(1, 2)]);
    }

    #[test]
    fn projectability() {
        let sq = joint();
        let f = FinFn::new(sq.clone(), sq.clone(), vec![3, 1, 2, 0]).unwrap();
        assert!(is_projectable(&StochMap::<Rational>::deterministic(&f), 0.0).unwrap());
        let (indep, corr) = marginals_witness();
        assert!(is_projectable(&indep, 0.0).unwrap());
        assert!(!is_projectable(&corr, 0.0).unwrap());
        assert!(!codes_independent_given_factors(&corr, 0.0).unwrap());
        let m1 = StochMap::new(bit(), bit(), vec![vec![q(1, 3), q(2, 3)], vec![q(1, 5), q(4, 5)]], 0.0).unwrap();
        let m2 = StochMap::new(bit(), FinSet::range(3), vec![vec![q(1, 2), q(1, 4), q(1, 4)], vec![q(0, 1), q(1, 1), q(0, 1)]], 0.0).unwrap();
        let built = stoch_compose(&copy(&bit()).unwrap(), &tensor(&m1, &m2).unwrap()).unwrap();
        assert!(is_projectable(&built, 0.0).unwrap());
        assert!(codes_independent_given_factors(&built, 0.0).unwrap());
    }

    #[test]
    fn conditional_independence_cases() {
        // X and Y both copied from one coin, W trivial
        let xwy = FinSet::product(&[bit(), FinSet::one(), bit()]).unwrap();
        let copied = StochMap::new(FinSet::one(), xwy.clone(), vec![vec![q(1, 2), q(0, 1), q(0, 1), q(1, 2)]], 0.0).unwrap();
        assert!(!check_cond_independence(&copied, 0.0).unwrap());
        let xwp = FinSet::product(&[FinSet::range(3), bit(), FinSet::one()]).unwrap();
        let row: Vec<Rational> = vec![q(1, 6), q(1, 6), q(1, 3), q(0, 1), q(1, 12), q(1, 4)];
        let k = StochMap::new(FinSet::one(), xwp, vec![row], 0.0).unwrap();
        assert!(check_cond_independence(&k, 0.0).unwrap());
        assert!(check_cond_independence(&coin(), 0.0).is_err());
    }

    #[test]
    fn modular_and_componentwise() {
        let sq = joint();
        let m11 = StochMap::new(bit(), bit(), vec![vec![q(1, 3), q(2, 3)], vec![q(1, 1), q(0, 1)]], 0.0).unwrap();
        let m22 = StochMap::new(bit(), bit(), vec![vec![q(1, 2), q(1, 2)], vec![q(1, 4), q(3, 4)]], 0.0).unwrap();
        let m = tensor(&m11, &m22).unwrap();
        assert!(is_modular_stoch(&m, 0.0).unwrap());
        assert_eq!(is_componentwise(&m, 0.0).unwrap().unwrap(), vec![m11.clone(), m22.clone()]);

        // y1 copied into both codes
        let dup = FinFn::from_fn(sq.clone(), sq.clone(), |y| {
            let c = sq.coords(y);
            sq.index_of_coords(&[c[0], c[0]])
        })
        .unwrap();
        let dup = StochMap::<Rational>::deterministic(&dup);
        assert!(!is_modular_stoch(&dup, 0.0).unwrap());
        assert!(is_componentwise(&dup, 0.0).unwrap().is_none());

        let k = StochMap::constant(&sq, &sq, &[q(1, 4), q(1, 4), q(1, 2), q(0, 1)]).unwrap();
        let parts = is_componentwise(&k, 0.0).unwrap().unwrap();
        assert!(parts.iter().all(|p| p.row(0) == p.row(1)));

        let single = FinSet::product(&[FinSet::range(3)]).unwrap();
        let anything = StochMap::constant(&single, &single, &[q(1, 3), q(1, 3), q(1, 3)]).unwrap();
        assert!(is_modular_stoch(&anything, 0.0).unwrap());
    }

    #[test]
    fn witness_has_equal_marginals() {
        let (a, b) = marginals_witness();
        for keep in [0, 1] {
            assert_eq!(marginalize(&a, &[keep]).unwrap(), marginalize(&b, &[keep]).unwrap());
        }
        assert_ne!(a, b);
    }

    #[test]
    fn measure_preservation() {
        let four = FinSet::range(4);
        let uniform4: FinDist<Rational> = FinDist::uniform(&four);
        let parity = FinFn::new(four.clone(), bit(), vec![0, 1, 0, 1]).unwrap();
        assert!(is_measure_preserving(&uniform4, &parity, &FinDist::uniform(&bit()), 0.0).unwrap());
        assert!(!is_measure_preserving(&uniform4, &parity, &FinDist::point(&bit(), 0), 0.0).unwrap());
        let c = FinFn::constant(&four, &bit(), 1).unwrap();
        assert!(is_measure_preserving(&uniform4, &c, &FinDist::point(&bit(), 1), 0.0).unwrap());
        let id = FinFn::identity(&four);
        assert!(is_measure_preserving(&uniform4, &id, &uniform4, 0.0).unwrap());
    }

    #[test]
    fn float_kernels_use_tolerance() {
        let a = StochMap::new(FinSet::one(), joint(), vec![vec![0.25, 0.25, 0.25, 0.25 + 1e-12]], 1e-9).unwrap();
        assert!(is_projectable(&a, 1e-9).unwrap());
    }
}
