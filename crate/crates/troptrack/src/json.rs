//! JSON interchange format, version 1.
//!
//! Arcs and punctures are referred to by their string ids, rationals are
//! `"p/q"` strings and triangles of a track are keyed by their 1-based
//! position. Every emitted object has sorted keys and parses back to an
//! equal value.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cone::PolyCone;
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::rational::{fmt_q, parse_q, Q};
use crate::stability::MutationLoop;
use crate::surface::{ExchangeMatrix, LabeledTriangulation, PuncturedSurface, Side, Step};
use crate::tracks::TrainTrack;
use crate::tropical::{Kind, TropicalPoint};

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SurfaceJson {
    pub genus: usize,
    pub punctures: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SideJson {
    pub arc: String,
    #[serde(default, skip_serializing_if = "is_false")]
    pub flip: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TriangulationJson {
    pub id: String,
    pub surface: SurfaceJson,
    pub arcs: Vec<String>,
    pub triangles: Vec<[SideJson; 3]>,
    /// Puncture at each corner of each triangle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<[String; 3]>>,
}

/// A triangulation with its chart id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedTriangulation {
    pub id: String,
    pub tri: LabeledTriangulation,
}

impl TriangulationJson {
    pub fn resolve(&self) -> Result<NamedTriangulation> {
        let surface = PuncturedSurface::new(self.surface.genus, self.surface.punctures.clone())?;
        let arc = |label: &str| {
            self.arcs
                .iter()
                .position(|a| a == label)
                .ok_or_else(|| Error::GluingInvalid(format!("unknown arc id {label:?}")))
        };
        let triangles = self
            .triangles
            .iter()
            .map(|t| {
                let mut out = [Side::new(0, false); 3];
                for (o, s) in out.iter_mut().zip(t) {
                    *o = Side::new(arc(&s.arc)?, s.flip);
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        let hint = match &self.labels {
            None => None,
            Some(labels) => {
                let p = |id: &str| {
                    surface
                        .punctures()
                        .iter()
                        .position(|x| x == id)
                        .ok_or_else(|| Error::GluingInvalid(format!("unknown puncture id {id:?}")))
                };
                Some(labels.iter().map(|c| Ok([p(&c[0])?, p(&c[1])?, p(&c[2])?])).collect::<Result<Vec<_>>>()?)
            }
        };
        let tri = LabeledTriangulation::build(surface, self.arcs.clone(), triangles, hint)?;
        Ok(NamedTriangulation { id: self.id.clone(), tri })
    }

    pub fn from_triangulation(id: &str, tri: &LabeledTriangulation) -> Self {
        let s = tri.surface();
        let labels = tri.labels();
        TriangulationJson {
            id: id.to_string(),
            surface: SurfaceJson { genus: s.genus(), punctures: s.punctures().to_vec() },
            arcs: labels.to_vec(),
            triangles: tri
                .triangles()
                .iter()
                .map(|t| t.map(|x| SideJson { arc: labels[x.arc].clone(), flip: x.flip }))
                .collect(),
            labels: Some(tri.corner_punctures().iter().map(|c| c.map(|p| s.punctures()[p].clone())).collect()),
        }
    }
}

pub fn parse_triangulation(text: &str) -> Result<NamedTriangulation> {
    let raw: TriangulationJson = serde_json::from_str(text).map_err(parse_err)?;
    raw.resolve()
}

pub fn triangulation_to_json(id: &str, tri: &LabeledTriangulation) -> Value {
    serde_json::to_value(TriangulationJson::from_triangulation(id, tri)).unwrap_or(Value::Null)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PointJson {
    pub chart: String,
    pub kind: String,
    pub coords: BTreeMap<String, String>,
}

/// Reads a point whose coordinates are keyed by the arc ids of `tri`.
pub fn parse_point(text: &str, tri: &LabeledTriangulation) -> Result<TropicalPoint> {
    let raw: PointJson = serde_json::from_str(text).map_err(parse_err)?;
    let kind = match raw.kind.as_str() {
        "A" => Kind::A,
        "X" => Kind::X,
        k => return Err(Error::Parse(format!("unknown point kind {k:?}"))),
    };
    if raw.coords.len() != tri.num_arcs() {
        return Err(Error::InvalidInput(format!("point has {} coordinates, expected {}", raw.coords.len(), tri.num_arcs())));
    }
    let coords = tri
        .labels()
        .iter()
        .map(|l| {
            let s = raw.coords.get(l).ok_or_else(|| Error::InvalidInput(format!("missing coordinate {l:?}")))?;
            parse_q(s)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TropicalPoint::new(raw.chart, kind, coords))
}

pub fn point_to_json(p: &TropicalPoint, tri: &LabeledTriangulation) -> Value {
    let coords: BTreeMap<String, String> = tri.labels().iter().cloned().zip(p.coords.iter().map(fmt_q)).collect();
    let kind = match p.kind {
        Kind::A => "A",
        Kind::X => "X",
    };
    json!({"chart": p.chart, "kind": kind, "coords": coords})
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TriangleConfig {
    #[serde(rename = "type")]
    pub kind: String,
    pub absent: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TrackJson {
    pub base: String,
    pub triangles: BTreeMap<String, TriangleConfig>,
}

/// Reads a track; triangles are keyed `"1"` to `"f"` and corners are the
/// vertex positions `0, 1, 2` of the triangle.
pub fn parse_track(text: &str) -> Result<TrainTrack> {
    let raw: TrackJson = serde_json::from_str(text).map_err(parse_err)?;
    let f = raw.triangles.len();
    let mut absent = vec![None; f];
    for (key, cfg) in &raw.triangles {
        let t: usize = key.parse().map_err(|_| Error::Parse(format!("triangle id {key:?} is not a number")))?;
        if t == 0 || t > f {
            return Err(Error::Parse(format!("triangle id {key:?} out of range")));
        }
        let mut a = cfg.absent.clone();
        a.sort_unstable();
        a.dedup();
        if a.len() != cfg.absent.len() {
            return Err(Error::InvalidInput(format!("triangle {key} repeats an absent corner")));
        }
        let expected = match cfg.kind.as_str() {
            "I" => 2,
            "II" => 1,
            "III" => 0,
            k => return Err(Error::Parse(format!("unknown triangle type {k:?}"))),
        };
        if a.len() != expected {
            return Err(Error::InvalidInput(format!("triangle {key} of type {} lists {} absent corners", cfg.kind, a.len())));
        }
        absent[t - 1] = Some(a);
    }
    let absent: Vec<Vec<usize>> = absent.into_iter().map(Option::unwrap_or_default).collect();
    TrainTrack::from_absent(raw.base, &absent)
}

pub fn track_to_json(track: &TrainTrack) -> Value {
    let triangles: BTreeMap<String, TriangleConfig> = (0..track.masks().len())
        .map(|t| {
            let cfg = TriangleConfig { kind: track.triangle_type(t).name().to_string(), absent: track.absent(t) };
            ((t + 1).to_string(), cfg)
        })
        .collect();
    serde_json::to_value(TrackJson { base: track.base().to_string(), triangles }).unwrap_or(Value::Null)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum StepJson {
    Flip(String),
    Perm(Vec<String>),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum BaseJson {
    Id(String),
    Embedded(Box<TriangulationJson>),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct LoopJson {
    pub base: BaseJson,
    pub word: Vec<StepJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<usize>,
}

/// Steps from arc ids; `perm[i]` is the new id of the `i`-th arc.
pub fn resolve_word(word: &[StepJson], tri: &LabeledTriangulation) -> Result<Vec<Step>> {
    let idx = |l: &str| tri.arc_index(l).ok_or_else(|| Error::InvalidInput(format!("unknown arc id {l:?}")));
    word.iter()
        .map(|s| match s {
            StepJson::Flip(l) => Ok(Step::Flip(idx(l)?)),
            StepJson::Perm(ls) => Ok(Step::Perm(ls.iter().map(|l| idx(l)).collect::<Result<Vec<_>>>()?)),
        })
        .collect()
}

pub fn word_to_json(word: &[Step], tri: &LabeledTriangulation) -> Vec<StepJson> {
    let l = tri.labels();
    word.iter()
        .map(|s| match s {
            Step::Flip(k) => StepJson::Flip(l[*k].clone()),
            Step::Perm(p) => StepJson::Perm(p.iter().map(|&i| l[i].clone()).collect()),
        })
        .collect()
}

/// Reads a loop whose base is embedded or names one of `known`.
pub fn parse_loop(text: &str, known: &[NamedTriangulation]) -> Result<(String, MutationLoop)> {
    let raw: LoopJson = serde_json::from_str(text).map_err(parse_err)?;
    let named = match &raw.base {
        BaseJson::Embedded(t) => t.resolve()?,
        BaseJson::Id(id) => known
            .iter()
            .find(|n| &n.id == id)
            .cloned()
            .ok_or_else(|| Error::InvalidInput(format!("unknown base triangulation {id:?}")))?,
    };
    let word = resolve_word(&raw.word, &named.tri)?;
    let lp = MutationLoop::new(named.tri, word, raw.power.unwrap_or(1))?;
    Ok((named.id, lp))
}

pub fn loop_to_json(id: &str, lp: &MutationLoop) -> Value {
    let raw = LoopJson {
        base: BaseJson::Embedded(Box::new(TriangulationJson::from_triangulation(id, lp.base()))),
        word: word_to_json(lp.word(), lp.base()),
        power: (lp.power() != 1).then_some(lp.power()),
    };
    serde_json::to_value(raw).unwrap_or(Value::Null)
}

pub fn q_json(x: &Q) -> Value {
    Value::String(fmt_q(x))
}

pub fn vec_json(v: &[Q]) -> Value {
    Value::Array(v.iter().map(q_json).collect())
}

pub fn matrix_json(m: &QMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| vec_json(r)).collect())
}

pub fn exchange_json(b: &ExchangeMatrix) -> Value {
    json!(b.rows())
}

/// Cone as irredundant inequalities, equalities and sorted generators.
pub fn cone_json(c: &PolyCone) -> Value {
    let mut gens = c.extreme_rays();
    gens.sort();
    json!({
        "dim": c.dimension(),
        "ambient": c.dim,
        "equalities": c.eqs.iter().map(|e| vec_json(e)).collect::<Vec<_>>(),
        "inequalities": c.ineqs.iter().map(|e| vec_json(e)).collect::<Vec<_>>(),
        "generators": gens.iter().map(|g| vec_json(g)).collect::<Vec<_>>(),
    })
}

/// Compact canonical text of a JSON value (keys are sorted by `Map`).
pub fn to_canonical(v: &Value) -> String {
    serde_json::to_string_pretty(v).unwrap_or_default()
}
