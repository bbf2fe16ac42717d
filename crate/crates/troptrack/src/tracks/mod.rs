//! Train tracks suited to an ideal triangulation.
//!
//! A suited track is encoded per triangle by the set of corners whose short
//! branch is present. Side `i` of a triangle is crossed by the long branch
//! of its arc exactly when corner `i` or corner `i + 1` is present; the
//! branches, switches and complementary regions are all derived from this.

mod carry;
mod chart;
mod graph;
mod lambda;

pub use carry::{carrying_matrix, follow_word, isomorphisms, transport_track, Carrying};
pub use chart::{chart_map, AChart, ChartMap, MeasureCone};
pub use graph::{branch_name, ElementaryMove, End, MoveKind, Slot, Switch, TrackGraph};
pub use lambda::{
    lambda_in, lambda_relation, position_pair, table_candidates, table_cell, table_partners, ChainCase, FlipRelation, LambdaRelation,
    Position, TableCell,
};

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::potential::form_classes;
use crate::surface::{CornerRef, LabeledTriangulation};

/// Local model of a track inside one triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TriangleType {
    /// One short branch; two sides crossed.
    I,
    /// Two short branches; three sides crossed.
    II,
    /// All three short branches.
    III,
}

impl TriangleType {
    pub fn name(self) -> &'static str {
        match self {
            TriangleType::I => "I",
            TriangleType::II => "II",
            TriangleType::III => "III",
        }
    }

    pub fn parse(s: &str) -> Option<TriangleType> {
        match s {
            "I" => Some(TriangleType::I),
            "II" => Some(TriangleType::II),
            "III" => Some(TriangleType::III),
            _ => None,
        }
    }
}

/// A branch of a suited track.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    /// The branch crossing an arc.
    Long(usize),
    /// The branch cutting off a corner.
    Short(CornerRef),
}

/// A track suited to a triangulation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TrainTrack {
    base: String,
    masks: Vec<u8>,
}

impl TrainTrack {
    /// Track from per-triangle corner masks (bit `i` = corner `i` present).
    pub fn new(base: impl Into<String>, masks: Vec<u8>) -> Result<Self> {
        if let Some(t) = masks.iter().position(|&m| m == 0 || m > 7) {
            return Err(Error::InvalidInput(format!("triangle {t} has no short branch")));
        }
        Ok(TrainTrack { base: base.into(), masks })
    }

    /// Track from per-triangle lists of absent corners.
    pub fn from_absent(base: impl Into<String>, absent: &[Vec<usize>]) -> Result<Self> {
        let mut masks = Vec::with_capacity(absent.len());
        for a in absent {
            let mut m = 7u8;
            for &c in a {
                if c > 2 {
                    return Err(Error::InvalidInput(format!("corner index {c} out of range")));
                }
                m &= !(1 << c);
            }
            masks.push(m);
        }
        TrainTrack::new(base, masks)
    }

    /// All short branches present.
    pub fn freeway(tri: &LabeledTriangulation, base: impl Into<String>) -> Self {
        TrainTrack { base: base.into(), masks: vec![7; tri.num_triangles()] }
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn with_base(&self, base: impl Into<String>) -> TrainTrack {
        TrainTrack { base: base.into(), masks: self.masks.clone() }
    }

    pub fn masks(&self) -> &[u8] {
        &self.masks
    }

    pub fn has_corner(&self, t: usize, i: usize) -> bool {
        self.masks[t] >> (i % 3) & 1 == 1
    }

    pub fn absent(&self, t: usize) -> Vec<usize> {
        (0..3).filter(|&i| !self.has_corner(t, i)).collect()
    }

    pub fn triangle_type(&self, t: usize) -> TriangleType {
        match self.masks[t].count_ones() {
            1 => TriangleType::I,
            2 => TriangleType::II,
            _ => TriangleType::III,
        }
    }

    /// Side `i` of triangle `t` is crossed by a long branch.
    pub fn crosses_side(&self, t: usize, i: usize) -> bool {
        self.has_corner(t, i) || self.has_corner(t, i + 1)
    }

    pub fn crosses_arc(&self, tri: &LabeledTriangulation, arc: usize) -> bool {
        let (t, i) = tri.occurrences(arc)[0];
        self.crosses_side(t, i)
    }

    /// Checks the triangle count and that both sides of every arc agree.
    pub fn check(&self, tri: &LabeledTriangulation) -> Result<()> {
        if self.masks.len() != tri.num_triangles() {
            return Err(Error::InvalidInput(format!(
                "track has {} triangles, triangulation has {}",
                self.masks.len(),
                tri.num_triangles()
            )));
        }
        for arc in 0..tri.num_arcs() {
            let [(t, i), (u, j)] = tri.occurrences(arc);
            if self.crosses_side(t, i) != self.crosses_side(u, j) {
                return Err(Error::InvalidInput(format!(
                    "arc {} is crossed on one side only",
                    tri.labels()[arc]
                )));
            }
        }
        Ok(())
    }

    /// Branches ordered with long branches first (by arc), then short
    /// branches by triangle and corner.
    pub fn branches(&self, tri: &LabeledTriangulation) -> Vec<Branch> {
        let mut out: Vec<Branch> = (0..tri.num_arcs()).filter(|&a| self.crosses_arc(tri, a)).map(Branch::Long).collect();
        for t in 0..self.masks.len() {
            for i in 0..3 {
                if self.has_corner(t, i) {
                    out.push(Branch::Short(CornerRef::new(t, i)));
                }
            }
        }
        out
    }

    /// Switch conditions as `(long arc, short corners on the two-side)`,
    /// one per crossed triangle side.
    pub fn switch_conditions(&self, tri: &LabeledTriangulation) -> Vec<(usize, Vec<CornerRef>)> {
        let mut out = Vec::new();
        for (t, tri_sides) in tri.triangles().iter().enumerate() {
            for (i, side) in tri_sides.iter().enumerate() {
                let two: Vec<CornerRef> =
                    [i, (i + 1) % 3].into_iter().filter(|&c| self.has_corner(t, c)).map(|c| CornerRef::new(t, c)).collect();
                if !two.is_empty() {
                    out.push((side.arc, two));
                }
            }
        }
        out
    }

    /// The cone of transverse measures.
    pub fn measure_cone(&self, tri: &LabeledTriangulation) -> MeasureCone {
        MeasureCone::new(tri, self)
    }

    /// For each puncture, the form class whose corners are all absent and
    /// which covers every absent corner at that puncture.
    pub fn domain_choice(&self, tri: &LabeledTriangulation) -> Option<Vec<usize>> {
        let classes = form_classes(tri);
        let mut choice = Vec::with_capacity(classes.len());
        for (p, cls) in classes.iter().enumerate() {
            let absent: BTreeSet<CornerRef> = tri
                .corners()
                .iter()
                .filter(|c| c.puncture == p && !self.has_corner(c.at.triangle, c.at.vertex))
                .map(|c| c.at)
                .collect();
            let hit = cls.iter().position(|c| c.corners.iter().copied().collect::<BTreeSet<_>>() == absent)?;
            choice.push(hit);
        }
        Some(choice)
    }

    /// The complete track of a linearity domain: the freeway with the
    /// corners of the chosen class removed at every puncture.
    pub fn from_domain_choice(tri: &LabeledTriangulation, base: impl Into<String>, choice: &[usize]) -> Result<Self> {
        let classes = form_classes(tri);
        let mut masks = vec![7u8; tri.num_triangles()];
        for (p, &c) in choice.iter().enumerate() {
            for corner in &classes[p][c].corners {
                masks[corner.triangle] &= !(1 << corner.vertex);
            }
        }
        TrainTrack::new(base, masks)
    }
}

/// A complementary region of a track.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Region {
    /// Euler characteristic of the region with its punctures removed.
    pub euler: i64,
    pub punctures: usize,
    pub cusps: usize,
}

impl Region {
    /// The region is admissible for a train track.
    pub fn is_admissible(&self) -> bool {
        2 * self.euler - (self.cusps as i64) < 0
    }

    pub fn is_punctured_monogon(&self) -> bool {
        self.euler == 0 && self.punctures == 1 && self.cusps == 1
    }

    pub fn is_punctured_bigon(&self) -> bool {
        self.euler == 0 && self.punctures == 1 && self.cusps == 2
    }

    pub fn is_trigon(&self) -> bool {
        self.euler == 1 && self.punctures == 0 && self.cusps == 3
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Piece {
    Corner(usize, usize),
    Rest(usize),
}

/// Complementary regions of a track, sorted.
pub fn regions(tri: &LabeledTriangulation, track: &TrainTrack) -> Result<Vec<Region>> {
    track.check(tri)?;
    let f = tri.num_triangles();
    let piece_at = |t: usize, i: usize| {
        let i = i % 3;
        if track.has_corner(t, i) {
            Piece::Corner(t, i)
        } else {
            Piece::Rest(t)
        }
    };
    let mut pieces: Vec<Piece> = Vec::new();
    for t in 0..f {
        pieces.push(Piece::Rest(t));
        for i in 0..3 {
            if track.has_corner(t, i) {
                pieces.push(Piece::Corner(t, i));
            }
        }
    }
    pieces.sort();
    let idx = |p: Piece| pieces.binary_search(&p).unwrap_or(0);
    let mut intervals: Vec<(usize, usize)> = Vec::new();
    for arc in 0..tri.num_arcs() {
        let [(t, i), (u, j)] = tri.occurrences(arc);
        if track.crosses_side(t, i) {
            // The two sides run in opposite directions along the arc.
            intervals.push((idx(piece_at(t, i)), idx(piece_at(u, j + 1))));
            intervals.push((idx(piece_at(t, i + 1)), idx(piece_at(u, j))));
        } else {
            intervals.push((idx(Piece::Rest(t)), idx(Piece::Rest(u))));
        }
    }
    let mut parent: Vec<usize> = (0..pieces.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for &(a, b) in &intervals {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let mut roots: Vec<usize> = (0..pieces.len()).map(|i| find(&mut parent, i)).collect();
    let mut keys = roots.clone();
    keys.sort();
    keys.dedup();
    let mut euler = vec![0i64; keys.len()];
    let mut cusps = vec![0usize; keys.len()];
    let mut punct: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); keys.len()];
    for (pi, piece) in pieces.iter().enumerate() {
        let r = keys.binary_search(&roots[pi]).unwrap_or(0);
        euler[r] += 1;
        match *piece {
            Piece::Corner(t, i) => {
                punct[r].insert(tri.corner_punctures()[t][i]);
            }
            Piece::Rest(t) => {
                for i in 0..3 {
                    if !track.has_corner(t, i) {
                        punct[r].insert(tri.corner_punctures()[t][i]);
                    }
                    if track.has_corner(t, i) && track.has_corner(t, i + 1) {
                        cusps[r] += 1;
                    }
                }
            }
        }
    }
    for &(a, _) in &intervals {
        let r = keys.binary_search(&find(&mut parent, a)).unwrap_or(0);
        euler[r] -= 1;
    }
    roots.clear();
    let mut out: Vec<Region> = (0..keys.len())
        .map(|r| Region { euler: euler[r], punctures: punct[r].len(), cusps: cusps[r] })
        .collect();
    out.sort();
    Ok(out)
}

/// Every complementary region has negative doubled Euler characteristic
/// (counting cusps as half).
pub fn is_train_track(tri: &LabeledTriangulation, track: &TrainTrack) -> bool {
    regions(tri, track).map(|rs| rs.iter().all(Region::is_admissible)).unwrap_or(false)
}

/// Some measure is positive on every branch.
pub fn is_recurrent(tri: &LabeledTriangulation, track: &TrainTrack) -> bool {
    let mc = MeasureCone::new(tri, track);
    mc.cone.interior_point().is_some()
}

/// Complementary regions are once-punctured monogons and unpunctured
/// trigons (a single once-punctured bigon on the once-punctured torus) and
/// the track is recurrent.
pub fn is_complete(tri: &LabeledTriangulation, track: &TrainTrack) -> bool {
    let Ok(rs) = regions(tri, track) else {
        return false;
    };
    let s = tri.surface();
    let torus = s.genus() == 1 && s.num_punctures() == 1;
    let shape_ok = if torus {
        rs.len() == 1 && rs[0].is_punctured_bigon()
    } else {
        rs.iter().all(|r| r.is_punctured_monogon() || r.is_trigon())
    };
    shape_ok && is_recurrent(tri, track)
}

/// Consistent corner masks, found by backtracking over triangles.
fn consistent_masks(tri: &LabeledTriangulation) -> Vec<Vec<u8>> {
    let f = tri.num_triangles();
    let mut out = Vec::new();
    let mut cur: Vec<u8> = Vec::with_capacity(f);
    fn crosses(m: u8, i: usize) -> bool {
        (m >> i) & 1 == 1 || (m >> ((i + 1) % 3)) & 1 == 1
    }
    fn rec(tri: &LabeledTriangulation, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        let t = cur.len();
        if t == tri.num_triangles() {
            out.push(cur.clone());
            return;
        }
        'mask: for m in 1u8..8 {
            for (i, side) in tri.triangles()[t].iter().enumerate() {
                for (u, j) in tri.occurrences(side.arc) {
                    let mu = if u == t { Some(m) } else if u < t { Some(cur[u]) } else { None };
                    if let Some(mu) = mu {
                        if crosses(m, i) != crosses(mu, j) {
                            continue 'mask;
                        }
                    }
                }
            }
            cur.push(m);
            rec(tri, cur, out);
            cur.pop();
        }
    }
    rec(tri, &mut cur, &mut out);
    out
}

/// All recurrent train tracks suited to the triangulation, sorted by masks.
pub fn enumerate_suited_tracks(tri: &LabeledTriangulation, base: &str) -> Vec<TrainTrack> {
    consistent_masks(tri)
        .into_iter()
        .map(|m| TrainTrack { base: base.to_string(), masks: m })
        .filter(|t| is_train_track(tri, t) && is_recurrent(tri, t))
        .collect()
}

/// Complete tracks found by filtering suited tracks on the region shapes.
pub fn complete_tracks_by_regions(tri: &LabeledTriangulation, base: &str) -> Vec<TrainTrack> {
    consistent_masks(tri)
        .into_iter()
        .map(|m| TrainTrack { base: base.to_string(), masks: m })
        .filter(|t| is_complete(tri, t))
        .collect()
}

/// One complete track per full-dimensional linearity domain, with the
/// domain's class choice, sorted by masks.
pub fn enumerate_complete_tracks(tri: &LabeledTriangulation, base: &str) -> Vec<(TrainTrack, Vec<usize>)> {
    let mut out: Vec<(TrainTrack, Vec<usize>)> = crate::potential::enumerate_domains(tri)
        .into_iter()
        .filter_map(|d| TrainTrack::from_domain_choice(tri, base, &d.choice).ok().map(|t| (t, d.choice)))
        .collect();
    out.sort();
    out
}

