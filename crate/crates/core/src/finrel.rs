//! Finite relations: the Kleisli category of the powerset monad.
//!
//! The cartesian product of carriers is a monoidal product here but not a
//! categorical product (that role is played by the disjoint union, which is
//! not useful for disentanglement and is not modeled). Relations into a
//! monoidal product have no projections, so modularity is decided by
//! existential projection followed by an exact tensor comparison.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Error, Result};
use crate::finset::{FinFn, FinSet};

#[derive(Clone, PartialEq, Eq)]
pub struct FinRel {
    dom: FinSet,
    cod: FinSet,
    incidence: Vec<bool>,
}

impl fmt::Debug for FinRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinRel{:?}", self.pairs())
    }
}

impl FinRel {
    /// Row-major incidence matrix, `|dom| x |cod|`.
    pub fn new(dom: FinSet, cod: FinSet, incidence: Vec<bool>) -> Result<Self> {
        if incidence.len() != dom.len() * cod.len() {
            return Err(Error::InvalidMorphism(format!(
                "incidence has {} cells for a {}x{} relation",
                incidence.len(),
                dom.len(),
                cod.len()
            )));
        }
        Ok(FinRel {
            dom,
            cod,
            incidence,
        })
    }

    pub fn from_pairs(dom: FinSet, cod: FinSet, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut incidence = vec![false; dom.len() * cod.len()];
        for &(a, b) in pairs {
            if a >= dom.len() || b >= cod.len() {
                return Err(Error::InvalidMorphism(format!("pair ({a},{b}) out of range")));
            }
            incidence[a * cod.len() + b] = true;
        }
        FinRel::new(dom, cod, incidence)
    }

    pub fn empty(dom: &FinSet, cod: &FinSet) -> Self {
        FinRel {
            dom: dom.clone(),
            cod: cod.clone(),
            incidence: vec![false; dom.len() * cod.len()],
        }
    }

    pub fn full(dom: &FinSet, cod: &FinSet) -> Self {
        FinRel {
            dom: dom.clone(),
            cod: cod.clone(),
            incidence: vec![true; dom.len() * cod.len()],
        }
    }

    pub fn identity(a: &FinSet) -> Self {
        FinRel::graph(&FinFn::identity(a))
    }

    /// The graph `{(x, f(x))}` of a function.
    pub fn graph(f: &FinFn) -> Self {
        let mut r = FinRel::empty(f.dom(), f.cod());
        for (x, &y) in f.table().iter().enumerate() {
            r.set(x, y, true);
        }
        r
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.incidence[a * self.cod.len() + b]
    }

    fn set(&mut self, a: usize, b: usize, value: bool) {
        let w = self.cod.len();
        self.incidence[a * w + b] = value;
    }

    pub fn incidence(&self) -> &[bool] {
        &self.incidence
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let w = self.cod.len();
        self.incidence
            .iter()
            .enumerate()
            .filter(|&(_, &b)| b)
            .map(|(k, _)| (k / w, k % w))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        !self.incidence.iter().any(|&b| b)
    }

    /// Image of a single element.
    pub fn image(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        let w = self.cod.len();
        (0..w).filter(move |&b| self.incidence[a * w + b])
    }

    /// No two distinct inputs share an output.
    pub fn is_left_unique(&self) -> bool {
        (0..self.cod.len()).all(|b| (0..self.dom.len()).filter(|&a| self.related(a, b)).count() <= 1)
    }
}

/// `s ∘ r`: `a ~ c` iff some `b` has `a r b` and `b s c`.
pub fn rel_compose(r: &FinRel, s: &FinRel) -> Result<FinRel> {
    if !r.cod.same_carrier(&s.dom) {
        return Err(mismatch("rel_compose", "codomain and domain differ"));
    }
    let mut out = FinRel::empty(&r.dom, &s.cod);
    for a in 0..r.dom.len() {
        for b in r.image(a) {
            for c in s.image(b) {
                out.set(a, c, true);
            }
        }
    }
    Ok(out)
}

/// `(a, b) ~ (c, d)` iff `a r c` and `b s d`.
pub fn rel_tensor(r: &FinRel, s: &FinRel) -> Result<FinRel> {
    tensor_all(&[r.clone(), s.clone()])
}

/// The monoidal product of several relations, on product carriers.
pub fn tensor_all(parts: &[FinRel]) -> Result<FinRel> {
    let doms: Vec<FinSet> = parts.iter().map(|r| r.dom.clone()).collect();
    let cods: Vec<FinSet> = parts.iter().map(|r| r.cod.clone()).collect();
    let dom = FinSet::product(&doms)?;
    let cod = FinSet::product(&cods)?;
    let mut out = FinRel::empty(&dom, &cod);
    for a in 0..dom.len() {
        let ac = dom.coords(a);
        for b in 0..cod.len() {
            let bc = cod.coords(b);
            let hit = parts
                .iter()
                .enumerate()
                .all(|(i, r)| r.related(ac[i], bc[i]));
            if hit {
                out.set(a, b, true);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurryDirection {
    /// `A ⊗ B ⇝ C` to `A ⇝ B ⊗ C`.
    Forward,
    /// `A ⇝ B ⊗ C` to `A ⊗ B ⇝ C`.
    Backward,
}

/// The hom-set isomorphism `Hom(A ⊗ B, C) ≅ Hom(A, B ⊗ C)`.
pub fn rel_curry(r: &FinRel, direction: CurryDirection) -> Result<FinRel> {
    match direction {
        CurryDirection::Forward => {
            let fs = binary_factors(&r.dom, "domain")?;
            let (a, b) = (&fs[0], &fs[1]);
            let bc = FinSet::product(&[b.clone(), r.cod.clone()])?;
            let mut out = FinRel::empty(a, &bc);
            for (ab, c) in r.pairs() {
                let co = r.dom.coords(ab);
                out.set(co[0], bc.index_of_coords(&[co[1], c]), true);
            }
            Ok(out)
        }
        CurryDirection::Backward => {
            let fs = binary_factors(&r.cod, "codomain")?;
            let (b, c) = (&fs[0], &fs[1]);
            let ab = FinSet::product(&[r.dom.clone(), b.clone()])?;
            let mut out = FinRel::empty(&ab, c);
            for (a, bcx) in r.pairs() {
                let co = r.cod.coords(bcx);
                out.set(ab.index_of_coords(&[a, co[0]]), co[1], true);
            }
            Ok(out)
        }
    }
}

fn binary_factors<'a>(s: &'a FinSet, which: &'static str) -> Result<&'a [FinSet]> {
    match s.factors() {
        Some(fs) if fs.len() == 2 => Ok(fs),
        Some(fs) => Err(Error::InvalidMorphism(format!(
            "{which} has {} factors, expected 2",
            fs.len()
        ))),
        None => Err(Error::MissingFactors(which)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationClass {
    /// At most one output per input: a partial function.
    pub right_unique: bool,
    /// At least one output per input: a multivalued function.
    pub left_total: bool,
    pub function: bool,
}

pub fn classify_relation(r: &FinRel) -> RelationClass {
    let counts: Vec<usize> = (0..r.dom.len()).map(|a| r.image(a).count()).collect();
    let right_unique = counts.iter().all(|&c| c <= 1);
    let left_total = counts.iter().all(|&c| c >= 1);
    RelationClass {
        right_unique,
        left_total,
        function: right_unique && left_total,
    }
}

/// Converse of the graph of `l`: `y ~ x` iff `l(x) = y`.
pub fn inverse_image(l: &FinFn) -> FinRel {
    let mut out = FinRel::empty(l.cod(), l.dom());
    for (x, &y) in l.table().iter().enumerate() {
        out.set(y, x, true);
    }
    out
}

/// Existential projection onto factor `i`: `y_i ~ z_i` iff some pair of
/// completions is related by `m`.
pub fn project_component(m: &FinRel, i: usize) -> Result<FinRel> {
    let yi = m.dom.factor(i)?;
    let zi = m.cod.factor(i)?;
    let mut out = FinRel::empty(yi, zi);
    for (a, b) in m.pairs() {
        out.set(m.dom.coords(a)[i], m.cod.coords(b)[i], true);
    }
    Ok(out)
}

/// Components `m_{i,i}` with `m = ⊗ m_{i,i}`, if such a factorization exists.
///
/// If `m` is a tensor of nonempty relations, the existential projections
/// recover them exactly, so comparing `m` with the tensor of its projections
/// decides the question. The empty relation factors as a tensor of empty
/// components.
pub fn monoidal_factorization(m: &FinRel) -> Result<Option<Vec<FinRel>>> {
    let n = m.dom.factor_count().ok_or(Error::MissingFactors("domain"))?;
    let k = m.cod.factor_count().ok_or(Error::MissingFactors("codomain"))?;
    if n != k {
        return Err(Error::FactorCountMismatch { dom: n, cod: k });
    }
    let parts: Vec<FinRel> = (0..n).map(|i| project_component(m, i)).collect::<Result<_>>()?;
    let rebuilt = tensor_all(&parts)?;
    Ok((rebuilt.incidence == m.incidence).then_some(parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::AllMaps;

    fn set(labels: &[&str]) -> FinSet {
        FinSet::new(labels.iter().copied()).unwrap()
    }

    fn all_relations(dom: &FinSet, cod: &FinSet) -> Vec<FinRel> {
        AllMaps::new(dom.len() * cod.len(), 2)
            .map(|bits| FinRel::new(dom.clone(), cod.clone(), bits.iter().map(|&b| b == 1).collect()).unwrap())
            .collect()
    }

    #[test]
    fn composition_expands_images() {
        let a = set(&["a"]);
        let b = set(&["0"]);
        let c = set(&["x", "y"]);
        let r = FinRel::from_pairs(a.clone(), b.clone(), &[(0, 0)]).unwrap();
        let s = FinRel::from_pairs(b.clone(), c.clone(), &[(0, 0), (0, 1)]).unwrap();
        let rs = rel_compose(&r, &s).unwrap();
        assert_eq!(rs.pairs(), vec![(0, 0), (0, 1)]);
        assert_eq!(rel_compose(&FinRel::identity(&a), &r).unwrap(), r);
        assert!(rel_compose(&s, &r).is_err());
    }

    #[test]
    fn composition_is_associative_and_unital() {
        let two = FinSet::range(2);
        let rels = all_relations(&two, &two);
        let id = FinRel::identity(&two);
        for r in &rels {
            assert_eq!(&rel_compose(&id, r).unwrap(), r);
            assert_eq!(&rel_compose(r, &id).unwrap(), r);
            for s in &rels {
                let rs = rel_compose(r, s).unwrap();
                for t in &rels {
                    assert_eq!(
                        rel_compose(&rs, t).unwrap(),
                        rel_compose(r, &rel_compose(s, t).unwrap()).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn tensor_basics() {
        let two = FinSet::range(2);
        let id = FinRel::identity(&two);
        let idid = rel_tensor(&id, &id).unwrap();
        assert_eq!(idid.pairs(), vec![(0, 0), (1, 1), (2, 2), (3, 3)]);
        let e = rel_tensor(&FinRel::full(&two, &two), &FinRel::empty(&two, &two)).unwrap();
        assert!(e.is_empty());
    }

    #[test]
    fn tensor_is_bifunctorial() {
        let two = FinSet::range(2);
        let rels = all_relations(&two, &two);
        // a sample of quadruples keeps the test fast; the full sweep runs in the acceptance suite
        for (k, r) in rels.iter().enumerate() {
            let r2 = &rels[(k * 7 + 3) % rels.len()];
            for (j, s) in rels.iter().enumerate() {
                let s2 = &rels[(j * 5 + 1) % rels.len()];
                let left = rel_tensor(&rel_compose(r, r2).unwrap(), &rel_compose(s, s2).unwrap()).unwrap();
                let right = rel_compose(&rel_tensor(r, s).unwrap(), &rel_tensor(r2, s2).unwrap()).unwrap();
                assert_eq!(left, right);
            }
        }
    }

    #[test]
    fn classification_flags() {
        let two = FinSet::range(2);
        let f = FinFn::new(two.clone(), two.clone(), vec![1, 1]).unwrap();
        let k = classify_relation(&FinRel::graph(&f));
        assert!(k.right_unique && k.left_total && k.function);
        let k = classify_relation(&FinRel::empty(&two, &two));
        assert!(k.right_unique && !k.left_total && !k.function);
        let a = set(&["a"]);
        let xy = set(&["x", "y"]);
        let k = classify_relation(&FinRel::from_pairs(a, xy, &[(0, 0), (0, 1)]).unwrap());
        assert!(!k.right_unique && k.left_total);
    }

    #[test]
    fn inverse_images() {
        let two = FinSet::range(2);
        assert_eq!(inverse_image(&FinFn::identity(&two)), FinRel::identity(&two));
        let c = FinFn::constant(&two, &set(&["c"]), 0).unwrap();
        assert_eq!(inverse_image(&c).pairs(), vec![(0, 0), (0, 1)]);
        let l = FinFn::new(FinSet::range(3), two.clone(), vec![0, 0, 1]).unwrap();
        let inv = inverse_image(&l);
        assert_eq!(inv.pairs(), vec![(0, 0), (0, 1), (1, 2)]);
        let k = classify_relation(&inv);
        assert_eq!(k.left_total, l.is_surjective());
        assert_eq!(k.right_unique, l.is_injective());
    }

    #[test]
    fn curry_requires_factors() {
        let two = FinSet::range(2);
        let r = FinRel::empty(&two, &two);
        assert_eq!(
            rel_curry(&r, CurryDirection::Forward),
            Err(Error::MissingFactors("domain"))
        );
        let ab = FinSet::product(&[two.clone(), two.clone()]).unwrap();
        let e = FinRel::empty(&ab, &two);
        let curried = rel_curry(&e, CurryDirection::Forward).unwrap();
        assert!(curried.is_empty());
        assert_eq!(curried.cod().len(), 4);
    }

    #[test]
    fn factorization_of_empty_and_tensor() {
        let two = FinSet::range(2);
        let sq = FinSet::product(&[two.clone(), two.clone()]).unwrap();
        let parts = monoidal_factorization(&FinRel::empty(&sq, &sq)).unwrap().unwrap();
        assert!(parts.iter().all(FinRel::is_empty));

        let a = FinRel::from_pairs(two.clone(), two.clone(), &[(0, 1), (1, 1)]).unwrap();
        let b = FinRel::from_pairs(two.clone(), two.clone(), &[(1, 0)]).unwrap();
        let m = rel_tensor(&a, &b).unwrap();
        assert_eq!(monoidal_factorization(&m).unwrap().unwrap(), vec![a, b]);
        assert!(monoidal_factorization(&FinRel::empty(&two, &two)).is_err());
    }
}
