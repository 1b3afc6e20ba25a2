//! The worked examples: four encoders on a two-bit factor set, a correlated
//! joint distribution and a moving-object scene.

use std::collections::BTreeMap;

use super::{Instance, Pipeline, Verdict};
use crate::finset::{FinFn, FinSet};
use crate::finstoch::{self, StochMap};
use crate::multiset::Scene;

#[derive(Debug, Clone)]
pub struct GalleryEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub instance: Instance,
    /// The complete report verdicts.
    pub expected: BTreeMap<String, Verdict>,
}

fn bit() -> FinSet {
    FinSet::range(2)
}

/// `Y = {0,1} x {0,1}`.
pub fn two_bits() -> FinSet {
    FinSet::product(&[bit(), bit()]).expect("nonempty factors")
}

fn verdicts(items: &[(&str, Verdict)]) -> BTreeMap<String, Verdict> {
    items.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

use Verdict::{Fails as F, Holds as H, NotApplicable as NA};

/// Every state sent to the single code `(*,*)`.
pub fn constant() -> FinFn {
    let one = FinSet::one();
    let z = FinSet::product(&[one.clone(), one]).expect("nonempty factors");
    FinFn::constant(&two_bits(), &z, 0).expect("in range")
}

/// The invertible GF(2)-linear shear `(y1, y2) ↦ (y1 ⊕ y2, y2)`.
pub fn rotation() -> FinFn {
    let y = two_bits();
    FinFn::from_fn(y.clone(), y.clone(), |v| {
        let c = y.coords(v);
        y.index_of_coords(&[c[0] ^ c[1], c[1]])
    })
    .expect("in range")
}

/// The diagonal `y ↦ (y, y)` into `Y x Y`, each code factor a copy of `Y`.
pub fn duplicate() -> FinFn {
    let y = two_bits();
    let z = FinSet::product(&[y.clone(), y.clone()]).expect("nonempty factors");
    FinFn::from_fn(y.clone(), z.clone(), |v| z.index_of_coords(&[v, v])).expect("in range")
}

/// `(y1, y2) ↦ ((y1, y1), y2)`: the first factor is recorded twice.
pub fn redundancy() -> FinFn {
    let y = two_bits();
    let pair = FinSet::product(&[bit(), bit()]).expect("nonempty factors");
    let z = FinSet::product(&[pair.clone(), bit()]).expect("nonempty factors");
    FinFn::from_fn(y.clone(), z.clone(), |v| {
        let c = y.coords(v);
        z.index_of_coords(&[pair.index_of_coords(&[c[0], c[0]]), c[1]])
    })
    .expect("in range")
}

/// The perfectly correlated joint on two bits, as a kernel out of a
/// one-point factor set with two (trivial) factors.
pub fn correlated_joint() -> Pipeline<StochMap<finstoch::Rational>> {
    let one = FinSet::one();
    let y = FinSet::product(&[one.clone(), one]).expect("nonempty factors");
    let (_, correlated) = finstoch::marginals_witness();
    let f = correlated
        .with_carriers(y.clone(), two_bits())
        .expect("same sizes");
    Pipeline {
        g: StochMap::identity(&y),
        f,
    }
}

pub fn gallery() -> Vec<GalleryEntry> {
    let set = |m: FinFn| Instance::set_code(m).expect("well-formed gallery instance");
    let joint = correlated_joint();
    let scene = Scene::falling_circle();
    vec![
        GalleryEntry {
            name: "constant",
            description: "perfectly modular but useless: every state gets the same code",
            instance: set(constant()),
            expected: verdicts(&[
                ("D1", H),
                ("D1.a", H),
                ("D1.b", H),
                ("D1.c", F),
                ("D1.c'", NA),
                ("D1.d", F),
                ("D1.e", H),
                ("D1.e(1,2)", H),
                ("D1.e(2,1)", H),
                ("epi", H),
            ]),
        },
        GalleryEntry {
            name: "rotation",
            description: "an invertible linear map mixing the factors",
            instance: set(rotation()),
            expected: verdicts(&[
                ("D1", H),
                ("D1.a", F),
                ("D1.b", F),
                ("D1.c", H),
                ("D1.c'", H),
                ("D1.d", F),
                ("D1.e", H),
                ("D1.e(1,2)", H),
                ("D1.e(2,1)", H),
                ("epi", H),
            ]),
        },
        GalleryEntry {
            name: "duplicate",
            description: "every code copies all factors; decodable componentwise but not modular",
            instance: set(duplicate()),
            expected: verdicts(&[
                ("D1", H),
                ("D1.a", F),
                ("D1.b", F),
                ("D1.c", H),
                ("D1.c'", NA),
                ("D1.d", H),
                ("D1.e", F),
                ("D1.e(1,2)", F),
                ("D1.e(2,1)", F),
                ("epi", F),
            ]),
        },
        GalleryEntry {
            name: "redundancy",
            description: "modular and decodable, with redundant codes",
            instance: set(redundancy()),
            expected: verdicts(&[
                ("D1", H),
                ("D1.a", H),
                ("D1.b", H),
                ("D1.c", H),
                ("D1.c'", NA),
                ("D1.d", H),
                ("D1.e", H),
                ("D1.e(1,2)", H),
                ("D1.e(2,1)", H),
                ("epi", F),
            ]),
        },
        GalleryEntry {
            name: "correlated-joint",
            description: "two perfectly correlated code bits with uniform marginals",
            instance: Instance::stoch(joint.g, joint.f).expect("well-formed gallery instance"),
            expected: verdicts(&[
                ("D5", H),
                ("D5.a", F),
                ("D5.b", F),
                ("D5.c", H),
                ("D5.d", H),
                ("det", F),
            ]),
        },
        GalleryEntry {
            name: "scene",
            description: "colour counts over three frames of a falling red circle",
            instance: Instance::counter(scene.system.clone(), scene.color_counter())
                .expect("well-formed gallery instance"),
            expected: verdicts(&[("invariant", H)]),
        },
    ]
}

pub fn entry(name: &str) -> Option<GalleryEntry> {
    gallery().into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::{evaluate, EvalConfig};

    #[test]
    fn golden_verdicts_match_exactly() {
        for e in gallery() {
            let r = evaluate(&e.instance, None, &EvalConfig::default()).unwrap();
            assert_eq!(r.verdicts, e.expected, "{}", e.name);
        }
    }

    #[test]
    fn duplicate_decodes_with_projections() {
        let e = entry("duplicate").unwrap();
        let r = evaluate(&e.instance, None, &EvalConfig::default()).unwrap();
        let Some(crate::checker::Witness::Functions { maps }) = r.witnesses.get("D1.d") else {
            panic!("modular decoder witness")
        };
        // h_11 sends the code (a,b) to a, h_22 sends it to b
        assert_eq!(maps[0][2], ["(1,0)".to_string(), "1".to_string()]);
        assert_eq!(maps[1][2], ["(1,0)".to_string(), "0".to_string()]);
    }

    #[test]
    fn code_carriers_have_the_documented_shapes() {
        assert_eq!(duplicate().cod().factor_shape(), Some(vec![4, 4]));
        assert_eq!(redundancy().cod().factor_shape(), Some(vec![4, 2]));
        assert_eq!(rotation().cod().factor_shape(), Some(vec![2, 2]));
    }
}
