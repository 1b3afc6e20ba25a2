//! Multiset functions (the Kleisli category of the nonempty multiset monad)
//! and count maps over discrete-time systems.

use std::fmt;

use crate::error::{mismatch, Error, Result};
use crate::finset::{FinFn, FinSet};

/// `counts[a][b]` is the number of ways to reach `b` from `a`.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiFn {
    dom: FinSet,
    cod: FinSet,
    counts: Vec<Vec<u64>>,
}

impl MultiFn {
    pub fn new(dom: FinSet, cod: FinSet, counts: Vec<Vec<u64>>) -> Result<Self> {
        if counts.len() != dom.len() {
            return Err(Error::InvalidMorphism(format!(
                "{} rows for a domain of size {}",
                counts.len(),
                dom.len()
            )));
        }
        for (a, row) in counts.iter().enumerate() {
            if row.len() != cod.len() {
                return Err(Error::InvalidMorphism(format!("row {a} has {} entries", row.len())));
            }
            if row.iter().all(|&c| c == 0) {
                return Err(Error::InvalidMorphism(format!("row {a} is the empty multiset")));
            }
        }
        Ok(MultiFn { dom, cod, counts })
    }

    /// A function as a 0/1 count matrix.
    pub fn from_fn(f: &FinFn) -> Self {
        let counts = f
            .table()
            .iter()
            .map(|&b| (0..f.cod().len()).map(|j| u64::from(j == b)).collect())
            .collect();
        MultiFn {
            dom: f.dom().clone(),
            cod: f.cod().clone(),
            counts,
        }
    }

    pub fn identity(a: &FinSet) -> Self {
        MultiFn::from_fn(&FinFn::identity(a))
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn row(&self, a: usize) -> &[u64] {
        &self.counts[a]
    }
}

impl fmt::Debug for MultiFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiFn {:?} -> {:?} {:?}", self.dom, self.cod, self.counts)
    }
}

/// `g ∘ f` by the natural-number matrix product.
pub fn mset_compose(f: &MultiFn, g: &MultiFn) -> Result<MultiFn> {
    if !f.cod.same_carrier(&g.dom) {
        return Err(mismatch("mset_compose", format!("{:?} vs {:?}", f.cod, g.dom)));
    }
    let counts = f
        .counts
        .iter()
        .map(|row| {
            (0..g.cod.len())
                .map(|c| row.iter().zip(&g.counts).map(|(&x, grow)| x * grow[c]).sum())
                .collect()
        })
        .collect();
    // nonempty rows compose to nonempty rows
    Ok(MultiFn {
        dom: f.dom.clone(),
        cod: g.cod.clone(),
        counts,
    })
}

/// A set of states advanced by one step per tick.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimedSystem {
    pub states: FinSet,
    pub step: FinFn,
}

impl TimedSystem {
    pub fn new(step: FinFn) -> Result<Self> {
        if !step.dom().same_carrier(step.cod()) {
            return Err(mismatch("TimedSystem", "step is not an endofunction"));
        }
        Ok(TimedSystem {
            states: step.dom().clone(),
            step,
        })
    }

    /// The step applied `k` times.
    pub fn iterate(&self, k: usize) -> FinFn {
        let mut f = FinFn::identity(&self.states);
        for _ in 0..k {
            f = f.then(&self.step).expect("endofunction");
        }
        f
    }
}

/// `φ` is a natural transformation into the constant functor: `φ ∘ step = φ`.
pub fn is_invariant_counter(phi: &MultiFn, sys: &TimedSystem) -> Result<bool> {
    if !phi.dom.same_carrier(&sys.states) {
        return Err(mismatch("is_invariant_counter", "counter domain is not the state set"));
    }
    let step = MultiFn::from_fn(&sys.step);
    Ok(mset_compose(&step, phi)?.counts == phi.counts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Color {
    Red,
    Green,
    Blue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Circle,
    Square,
    Triangle,
}

/// A drawn object; `height` is the vertical centre in tenths of the frame half-width.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SceneObject {
    pub color: Color,
    pub shape: Shape,
    pub height: i32,
}

/// Frames of a picture in which only the red circle moves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scene {
    pub frames: Vec<Vec<SceneObject>>,
    pub system: TimedSystem,
}

impl Scene {
    /// Three frames with the red circle descending; the last frame steps back
    /// to the first so the step is total.
    pub fn falling_circle() -> Self {
        let still = [
            SceneObject {
                color: Color::Green,
                shape: Shape::Square,
                height: -3,
            },
            SceneObject {
                color: Color::Red,
                shape: Shape::Square,
                height: -7,
            },
            SceneObject {
                color: Color::Blue,
                shape: Shape::Triangle,
                height: -6,
            },
        ];
        let frames: Vec<Vec<SceneObject>> = [6, 2, -5]
            .iter()
            .map(|&height| {
                let mut objs = vec![SceneObject {
                    color: Color::Red,
                    shape: Shape::Circle,
                    height,
                }];
                objs.extend(still);
                objs
            })
            .collect();
        let states = FinSet::new(["frame1", "frame2", "frame3"]).expect("distinct labels");
        let step = FinFn::new(states.clone(), states, vec![1, 2, 0]).expect("valid step");
        Scene {
            frames,
            system: TimedSystem::new(step).expect("endofunction"),
        }
    }

    pub fn colors() -> FinSet {
        FinSet::new(["red", "green", "blue"]).expect("distinct labels")
    }

    /// Objects per colour in each frame.
    pub fn color_counter(&self) -> MultiFn {
        let counts = self
            .frames
            .iter()
            .map(|objs| {
                [Color::Red, Color::Green, Color::Blue]
                    .iter()
                    .map(|c| objs.iter().filter(|o| o.color == *c).count() as u64)
                    .collect()
            })
            .collect();
        MultiFn::new(self.system.states.clone(), Scene::colors(), counts).expect("every frame has objects")
    }

    /// Objects per vertical third (top, middle, bottom) in each frame.
    pub fn height_counter(&self) -> MultiFn {
        let buckets = FinSet::new(["top", "middle", "bottom"]).expect("distinct labels");
        let bucket = |h: i32| match h {
            h if h > 3 => 0,
            h if h >= -3 => 1,
            _ => 2,
        };
        let counts = self
            .frames
            .iter()
            .map(|objs| {
                (0..3)
                    .map(|b| objs.iter().filter(|o| bucket(o.height) == b).count() as u64)
                    .collect()
            })
            .collect();
        MultiFn::new(self.system.states.clone(), buckets, counts).expect("every frame has objects")
    }
}
