//! Bundled triangulations and loops.

use crate::json::{parse_loop, parse_triangulation, NamedTriangulation};
use crate::stability::MutationLoop;

pub const SPHERE3: &str = include_str!("../fixtures/sphere3.json");
pub const SPHERE4: &str = include_str!("../fixtures/sphere4.json");
pub const SPHERE5: &str = include_str!("../fixtures/sphere5.json");
pub const TORUS: &str = include_str!("../fixtures/torus.json");
pub const TORUS2: &str = include_str!("../fixtures/torus2.json");
pub const TORUS_LR_LOOP: &str = include_str!("../fixtures/torus_lr_loop.json");
pub const TORUS_FINITE_LOOP: &str = include_str!("../fixtures/torus_finite_loop.json");

fn load(text: &str) -> NamedTriangulation {
    parse_triangulation(text).expect("bundled triangulation is valid")
}

/// Sphere with punctures `A, B, C, D`.
pub fn sphere4() -> NamedTriangulation {
    load(SPHERE4)
}

/// Sphere with punctures `p1` to `p5`.
pub fn sphere5() -> NamedTriangulation {
    load(SPHERE5)
}

/// Once-punctured torus.
pub fn torus() -> NamedTriangulation {
    load(TORUS)
}

/// Twice-punctured torus.
pub fn torus2() -> NamedTriangulation {
    load(TORUS2)
}

/// Every valid bundled triangulation.
pub fn all() -> Vec<NamedTriangulation> {
    vec![sphere4(), sphere5(), torus(), torus2()]
}

/// The pseudo-Anosov loop `flip, flip, rotate` on the once-punctured torus.
pub fn torus_lr_loop() -> MutationLoop {
    parse_loop(TORUS_LR_LOOP, &[]).expect("bundled loop is valid").1
}

/// A periodic loop on the once-punctured torus.
pub fn torus_finite_loop() -> MutationLoop {
    parse_loop(TORUS_FINITE_LOOP, &[]).expect("bundled loop is valid").1
}
