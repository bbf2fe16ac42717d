//! Reading inputs from files or the bundled fixtures.

use troptrack::fixtures;
use troptrack::json::{parse_loop, parse_point, parse_track, parse_triangulation, NamedTriangulation};
use troptrack::stability::MutationLoop;
use troptrack::surface::LabeledTriangulation;
use troptrack::tracks::TrainTrack;
use troptrack::tropical::TropicalPoint;

use crate::Failure;

const BUNDLED: &[(&str, &str)] = &[
    ("sphere3", fixtures::SPHERE3),
    ("sphere4", fixtures::SPHERE4),
    ("sphere5", fixtures::SPHERE5),
    ("torus", fixtures::TORUS),
    ("torus2", fixtures::TORUS2),
    ("torus-lr", fixtures::TORUS_LR_LOOP),
    ("torus-finite", fixtures::TORUS_FINITE_LOOP),
];

/// Text of a `bundled:<name>` fixture or of a file.
pub fn read_text(source: &str) -> Result<String, Failure> {
    if let Some(name) = source.strip_prefix("bundled:") {
        return BUNDLED
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, t)| t.to_string())
            .ok_or_else(|| Failure::Io(format!("no bundled input named {name:?}")));
    }
    std::fs::read_to_string(source).map_err(|e| Failure::Io(format!("{source}: {e}")))
}

pub fn triangulation(source: &str) -> Result<NamedTriangulation, Failure> {
    Ok(parse_triangulation(&read_text(source)?)?)
}

pub fn point(source: &str, tri: &LabeledTriangulation) -> Result<TropicalPoint, Failure> {
    Ok(parse_point(&read_text(source)?, tri)?)
}

/// A track, checked against the triangulation it is read on.
pub fn track(source: &str, tri: &LabeledTriangulation) -> Result<TrainTrack, Failure> {
    let t = parse_track(&read_text(source)?)?;
    t.check(tri)?;
    Ok(t)
}

/// A loop; a base given by id resolves against the bundled triangulations
/// and `base`.
pub fn mutation_loop(source: &str, base: Option<&str>) -> Result<(String, MutationLoop), Failure> {
    let mut known = fixtures::all();
    if let Some(b) = base {
        known.insert(0, triangulation(b)?);
    }
    Ok(parse_loop(&read_text(source)?, &known)?)
}
