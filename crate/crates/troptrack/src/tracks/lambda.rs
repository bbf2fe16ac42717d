//! The relation between complete tracks before and after a flip.
//!
//! Two complete tracks are related when the flip image of the interior of
//! the first linearity domain meets the interior of the second. The `A`-flip
//! at `k` is linear on each of the two half-spaces where one of its tropical
//! monomials is the smaller, so each test is one strict feasibility LP.

use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::chart::AChart;
use super::{enumerate_complete_tracks, TrainTrack};
use crate::cone::{Generators, PolyCone};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::rational::Q;
use crate::surface::{ExchangeMatrix, LabeledTriangulation};

/// Position of the missing short branch in a triangle next to the flipped
/// arc. In the first triangle the corners are `p1, p2, p3` and in the second
/// `p1, p3, p4`, the arc running from `p1` to `p3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Position {
    P1,
    P2,
    P3,
    P4,
    Empty,
}

impl Position {
    pub fn name(self) -> &'static str {
        match self {
            Position::P1 => "p1",
            Position::P2 => "p2",
            Position::P3 => "p3",
            Position::P4 => "p4",
            Position::Empty => "empty",
        }
    }
}

/// Shape of the longest chain of the relation through a track.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChainCase {
    /// One track on each side with equal cones.
    OneToOne,
    /// Two tracks before the flip whose cones cover one cone after it.
    TwoToOne,
    /// One track before the flip whose cone is covered by two after it.
    OneToTwo,
}

impl ChainCase {
    pub fn name(self) -> &'static str {
        match self {
            ChainCase::OneToOne => "1:1",
            ChainCase::TwoToOne => "2:1",
            ChainCase::OneToTwo => "1:2",
        }
    }
}

/// A cell of the flip table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableCell {
    Chain(ChainCase),
    /// No complete track has this configuration.
    Excluded,
}

/// Table lookup indexed by the missing positions in the two triangles.
pub fn table_cell(first: Position, second: Position) -> Option<TableCell> {
    use ChainCase::*;
    use Position::*;
    let cell = match (first, second) {
        (P1, P1) | (P3, P3) => TableCell::Excluded,
        (P1, P4) | (P2, P1) | (P2, P3) | (P3, P4) | (Empty, Empty) => TableCell::Chain(OneToOne),
        (P1, P3) | (P1, Empty) | (P3, P1) | (P3, Empty) | (Empty, P1) | (Empty, P3) => TableCell::Chain(TwoToOne),
        (P2, P4) | (P2, Empty) | (Empty, P4) => TableCell::Chain(OneToTwo),
        _ => return None,
    };
    Some(cell)
}

/// Missing positions of a track in the two triangles around arc `k`.
pub fn position_pair(tri: &LabeledTriangulation, track: &TrainTrack, k: usize) -> Result<(Position, Position)> {
    let q = tri.quadrilateral(k);
    let pick = |t: usize, names: [(usize, Position); 3]| -> Result<Position> {
        let absent = track.absent(t);
        match absent.as_slice() {
            [] => Ok(Position::Empty),
            [v] => Ok(names.iter().find(|(c, _)| c == v).map(|x| x.1).unwrap_or(Position::Empty)),
            _ => Err(Error::InvalidInput(format!("track has type I in triangle {t}"))),
        }
    };
    let first = pick(
        q.t1,
        [(q.side1 % 3, Position::P3), ((q.side1 + 1) % 3, Position::P1), ((q.side1 + 2) % 3, Position::P2)],
    )?;
    let second = pick(
        q.t2,
        [(q.side2 % 3, Position::P1), ((q.side2 + 1) % 3, Position::P3), ((q.side2 + 2) % 3, Position::P4)],
    )?;
    Ok((first, second))
}

/// Tracks on the flipped triangulation read off the flip table: outside
/// the quadrilateral nothing changes, and inside the missing short branches
/// stay at the same positions. After the flip the first triangle has
/// corners `p2, p3, p4` and the second `p4, p1, p2`.
pub fn table_candidates(tri: &LabeledTriangulation, track: &TrainTrack, k: usize) -> Result<Vec<TrainTrack>> {
    let flipped = tri.flip(k)?;
    let q = tri.quadrilateral(k);
    let (x, y) = position_pair(tri, track, k)?;
    let mut missing: Vec<Position> = [x, y].into_iter().filter(|p| *p != Position::Empty).collect();
    missing.sort();
    let first = [(Position::P2, 0), (Position::P3, 1), (Position::P4, 2)];
    let second = [(Position::P4, 0), (Position::P1, 1), (Position::P2, 2)];
    let mask = |opts: &[(Position, usize); 3], p: Position| {
        opts.iter().find(|o| o.0 == p).map_or(7u8, |o| 7 & !(1 << o.1))
    };
    let with_empty = |opts: &[(Position, usize); 3]| {
        let mut v: Vec<Position> = opts.iter().map(|o| o.0).collect();
        v.push(Position::Empty);
        v
    };
    let mut out = Vec::new();
    for a in with_empty(&first) {
        for b in with_empty(&second) {
            let mut m: Vec<Position> = [a, b].into_iter().filter(|p| *p != Position::Empty).collect();
            m.sort();
            if m != missing {
                continue;
            }
            let mut masks = track.masks().to_vec();
            masks[q.t1] = mask(&first, a);
            masks[q.t2] = mask(&second, b);
            let cand = TrainTrack::new(format!("{}.{}", track.base(), k), masks)?;
            if cand.check(&flipped).is_ok() {
                out.push(cand);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Tracks before the flip that the table sends to a common candidate with
/// `track`, including `track` itself.
pub fn table_partners(tri: &LabeledTriangulation, track: &TrainTrack, k: usize) -> Result<Vec<TrainTrack>> {
    let q = tri.quadrilateral(k);
    let own = table_candidates(tri, track, k)?;
    let first = [(Position::P3, q.side1), (Position::P1, q.side1 + 1), (Position::P2, q.side1 + 2)];
    let second = [(Position::P1, q.side2), (Position::P3, q.side2 + 1), (Position::P4, q.side2 + 2)];
    let masks = |opts: &[(Position, usize); 3]| {
        let mut v: Vec<u8> = opts.iter().map(|o| 7 & !(1u8 << (o.1 % 3))).collect();
        v.push(7);
        v
    };
    let mut out = Vec::new();
    for a in masks(&first) {
        for b in masks(&second) {
            let mut m = track.masks().to_vec();
            m[q.t1] = a;
            m[q.t2] = b;
            let cand = TrainTrack::new(track.base(), m)?;
            if cand.check(tri).is_err() {
                continue;
            }
            if table_candidates(tri, &cand, k)?.iter().any(|c| own.contains(c)) {
                out.push(cand);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// The two linear pieces of the `A`-flip at `k`: half-space and matrix.
pub(crate) fn flip_pieces(b: &ExchangeMatrix, k: usize) -> [(Vec<Q>, QMatrix); 2] {
    let n = b.size();
    let plus: Vec<Q> = (0..n).map(|j| Q::from_integer(b.get(k, j).max(0).into())).collect();
    let minus: Vec<Q> = (0..n).map(|j| Q::from_integer((-b.get(k, j)).max(0).into())).collect();
    let piece = |small: &Vec<Q>, large: &Vec<Q>| {
        let half: Vec<Q> = large.iter().zip(small).map(|(x, y)| x - y).collect();
        let mut m = QMatrix::identity(n);
        for j in 0..n {
            let v = if j == k { &small[j] - Q::from_integer(1.into()) } else { small[j].clone() };
            m.set(k, j, v);
        }
        (half, m)
    };
    [piece(&plus, &minus), piece(&minus, &plus)]
}

struct Side {
    tracks: Vec<TrainTrack>,
    facets: Vec<Vec<Vec<Q>>>,
}

impl Side {
    fn new(tri: &LabeledTriangulation, base: &str) -> Result<Side> {
        let tracks: Vec<TrainTrack> = enumerate_complete_tracks(tri, base).into_iter().map(|x| x.0).collect();
        let charts = tracks.iter().map(|t| AChart::new(tri, t)).collect::<Result<Vec<_>>>()?;
        let facets = charts.iter().map(|c| c.domain().facets()).collect();
        Ok(Side { tracks, facets })
    }
}

/// Every piece of the domain with facets `from` maps into the domain with
/// facets `to`.
fn into(from: &[Vec<Q>], to: &[Vec<Q>], pieces: &[(Vec<Q>, QMatrix); 2]) -> bool {
    let n = pieces[0].1.cols();
    pieces.iter().all(|(half, m)| {
        let mut ineqs = from.to_vec();
        ineqs.push(half.clone());
        let piece = PolyCone::new(n, Vec::new(), ineqs).generators();
        to.iter().all(|g| piece.implies_nonneg(&m.vec_mul(g)))
    })
}

fn memo(cache: &Mutex<HashMap<Vec<u8>, bool>>, tri: &LabeledTriangulation, t: &TrainTrack) -> bool {
    if let Some(&v) = cache.lock().ok().and_then(|c| c.get(t.masks()).copied()).as_ref() {
        return v;
    }
    let v = super::is_complete(tri, t);
    if let Ok(mut c) = cache.lock() {
        c.insert(t.masks().to_vec(), v);
    }
    v
}

fn related(n: usize, from: &[Vec<Q>], piece: &(Vec<Q>, QMatrix), to: &[Vec<Q>]) -> bool {
    let mut strict: Vec<Vec<Q>> = from.to_vec();
    if piece.0.iter().any(|x| !x.is_zero()) {
        strict.push(piece.0.clone());
    }
    strict.extend(to.iter().map(|g| piece.1.vec_mul(g)));
    PolyCone::full(n).strict_point(&strict).is_some()
}

/// Generators of one piece of one domain, used to settle most pairs
/// without an LP.
struct PieceGens {
    gens: Generators,
    /// Sum of the extreme rays: interior to the piece when it is full.
    centre: Vec<Q>,
}

impl PieceGens {
    fn new(n: usize, from: &[Vec<Q>], piece: &(Vec<Q>, QMatrix)) -> PieceGens {
        let mut ineqs = from.to_vec();
        ineqs.push(piece.0.clone());
        let gens = PolyCone::new(n, Vec::new(), ineqs).generators();
        let mut centre = vec![Q::zero(); n];
        for r in &gens.rays {
            for (c, x) in centre.iter_mut().zip(r) {
                *c += x;
            }
        }
        PieceGens { gens, centre }
    }
}

/// Same answer as `related`, with cheap exits: a facet of `to` whose pullback
/// is nonpositive on the piece rules the pair out, and a central point that
/// is strictly inside everything rules it in.
fn related_fast(n: usize, from: &[Vec<Q>], piece: &(Vec<Q>, QMatrix), gens: &PieceGens, to: &[Vec<Q>]) -> bool {
    let pulled: Vec<Vec<Q>> = to.iter().map(|g| piece.1.vec_mul(g)).collect();
    if pulled.iter().any(|f| {
        let neg: Vec<Q> = f.iter().map(|x| -x).collect();
        gens.gens.implies_nonneg(&neg)
    }) {
        return false;
    }
    let c = &gens.centre;
    let positive = |g: &Vec<Q>| g.iter().zip(c).fold(Q::zero(), |acc, (a, b)| acc + a * b).is_positive();
    let half_ok = piece.0.iter().all(|x| x.is_zero()) || positive(&piece.0);
    if half_ok && from.iter().all(positive) && pulled.iter().all(positive) {
        return true;
    }
    related(n, from, piece, to)
}

/// The flip relation between all complete tracks of a triangulation and
/// of its flip at `k`.
#[derive(Debug)]
pub struct FlipRelation {
    pub arc: usize,
    pub flipped: LabeledTriangulation,
    pub before: Vec<TrainTrack>,
    pub after: Vec<TrainTrack>,
    /// Related index pairs `(before, after)`, sorted.
    pub pairs: Vec<(usize, usize)>,
    before_facets: Vec<Vec<Vec<Q>>>,
    after_facets: Vec<Vec<Vec<Q>>>,
    b: ExchangeMatrix,
    memo_before: Mutex<HashMap<Vec<u8>, bool>>,
    memo_after: Mutex<HashMap<Vec<u8>, bool>>,
}

impl FlipRelation {
    pub fn compute(tri: &LabeledTriangulation, k: usize, base: &str) -> Result<FlipRelation> {
        let flipped = tri.flip(k)?;
        let before = Side::new(tri, base)?;
        let after = Side::new(&flipped, &format!("{base}.{k}"))?;
        let b = tri.exchange_matrix();
        let pieces = flip_pieces(&b, k);
        let n = tri.num_arcs();
        let gens: Vec<[PieceGens; 2]> = before
            .facets
            .par_iter()
            .map(|f| [PieceGens::new(n, f, &pieces[0]), PieceGens::new(n, f, &pieces[1])])
            .collect();
        let all: Vec<(usize, usize)> =
            (0..before.tracks.len()).flat_map(|i| (0..after.tracks.len()).map(move |j| (i, j))).collect();
        let pairs: Vec<(usize, usize)> = all
            .into_par_iter()
            .filter(|&(i, j)| {
                (0..2).any(|p| related_fast(n, &before.facets[i], &pieces[p], &gens[i][p], &after.facets[j]))
            })
            .collect();
        Ok(FlipRelation {
            arc: k,
            flipped,
            before: before.tracks,
            after: after.tracks,
            pairs,
            before_facets: before.facets,
            after_facets: after.facets,
            b,
            memo_before: Mutex::new(HashMap::new()),
            memo_after: Mutex::new(HashMap::new()),
        })
    }

    pub fn successors(&self, i: usize) -> Vec<usize> {
        self.pairs.iter().filter(|p| p.0 == i).map(|p| p.1).collect()
    }

    pub fn predecessors(&self, j: usize) -> Vec<usize> {
        self.pairs.iter().filter(|p| p.1 == j).map(|p| p.0).collect()
    }

    /// Shape of the chain through track `i`, when it has length at most 2.
    pub fn chain_case(&self, i: usize) -> Option<ChainCase> {
        let succ = self.successors(i);
        match succ.as_slice() {
            [j] => match self.predecessors(*j).len() {
                1 => Some(ChainCase::OneToOne),
                2 if self.predecessors(*j).iter().all(|&p| self.successors(p).len() == 1) => Some(ChainCase::TwoToOne),
                _ => None,
            },
            [j0, j1] if self.predecessors(*j0) == [i] && self.predecessors(*j1) == [i] => Some(ChainCase::OneToTwo),
            _ => None,
        }
    }

    /// Closed domain of `before[i]` maps into closed domain of `after[j]`
    /// on every piece of the flip.
    fn forward_into(&self, i: usize, j: usize) -> bool {
        into(&self.before_facets[i], &self.after_facets[j], &flip_pieces(&self.b, self.arc))
    }

    fn backward_into(&self, j: usize, i: usize) -> bool {
        into(&self.after_facets[j], &self.before_facets[i], &flip_pieces(&self.b.mutate(self.arc), self.arc))
    }

    fn complete_before(&self, tri: &LabeledTriangulation, t: &TrainTrack) -> bool {
        memo(&self.memo_before, tri, t)
    }

    fn complete_after(&self, t: &TrainTrack) -> bool {
        memo(&self.memo_after, &self.flipped, t)
    }

    /// Exact cone identity of the chain through `i`.
    ///
    /// Every containment of a single closed domain into another is checked
    /// by LP. The covering half of a union identity follows from the
    /// relation itself: both families of domains form complete fans, so a
    /// domain whose interior meets only the listed interiors lies in their
    /// union.
    pub fn cone_identity(&self, i: usize) -> bool {
        let succ = self.successors(i);
        match self.chain_case(i) {
            Some(ChainCase::OneToOne) => self.forward_into(i, succ[0]) && self.backward_into(succ[0], i),
            Some(ChainCase::TwoToOne) => {
                let preds = self.predecessors(succ[0]);
                preds.iter().all(|&p| self.forward_into(p, succ[0]))
            }
            Some(ChainCase::OneToTwo) => succ.iter().all(|&j| self.backward_into(j, i)),
            None => false,
        }
    }
}

/// Relation of one complete track under the flip at `k`.
#[derive(Clone, Debug)]
pub struct LambdaRelation {
    /// Related tracks found polyhedrally.
    pub successors: Vec<TrainTrack>,
    pub case: Option<ChainCase>,
    pub positions: (Position, Position),
    pub table: Option<TableCell>,
    /// Tracks named by the table, before the completeness filter.
    pub candidates: Vec<TrainTrack>,
    /// Candidates that are complete on the flipped triangulation.
    pub combinatorial: Vec<TrainTrack>,
    /// Complete tracks that the table sends to a common candidate.
    pub partners: Vec<TrainTrack>,
    /// The combinatorial and polyhedral successors coincide, and so do the
    /// partners and the polyhedral predecessors of the successors.
    pub agrees: bool,
    /// The table cell names the computed chain shape.
    pub table_case_matches: bool,
    /// Some table candidate or partner is not complete, so the chain is
    /// shorter than the cell predicts.
    pub degenerate: bool,
    pub cone_identity: bool,
}

/// Related complete tracks on the flipped triangulation.
pub fn lambda_relation(tri: &LabeledTriangulation, track: &TrainTrack, k: usize) -> Result<LambdaRelation> {
    let rel = FlipRelation::compute(tri, k, track.base())?;
    lambda_in(&rel, tri, track)
}

/// [`lambda_relation`] against a precomputed flip relation.
pub fn lambda_in(rel: &FlipRelation, tri: &LabeledTriangulation, track: &TrainTrack) -> Result<LambdaRelation> {
    let k = rel.arc;
    let i = rel
        .before
        .iter()
        .position(|t| t.masks() == track.masks())
        .ok_or_else(|| Error::InvalidInput("track is not complete on this triangulation".into()))?;
    let positions = position_pair(tri, track, k)?;
    let table = table_cell(positions.0, positions.1);
    let case = rel.chain_case(i);
    let candidates = table_candidates(tri, track, k)?;
    let combinatorial: Vec<TrainTrack> = candidates
        .iter()
        .filter(|c| rel.complete_after(c))
        .cloned()
        .collect();
    let all_partners = table_partners(tri, track, k)?;
    let partners: Vec<TrainTrack> = all_partners.iter().filter(|c| rel.complete_before(tri, c)).cloned().collect();
    let succ = rel.successors(i);
    let mut preds: Vec<usize> = succ.iter().flat_map(|&j| rel.predecessors(j)).collect();
    preds.sort_unstable();
    preds.dedup();
    let predecessors: Vec<TrainTrack> = preds.into_iter().map(|p| rel.before[p].clone()).collect();
    let successors: Vec<TrainTrack> = succ.into_iter().map(|j| rel.after[j].clone()).collect();
    let masks = |v: &[TrainTrack]| {
        let mut m: Vec<Vec<u8>> = v.iter().map(|t| t.masks().to_vec()).collect();
        m.sort();
        m
    };
    let agrees = masks(&successors) == masks(&combinatorial) && masks(&predecessors) == masks(&partners);
    let table_case_matches = matches!((table, case), (Some(TableCell::Chain(a)), Some(b)) if a == b);
    Ok(LambdaRelation {
        degenerate: combinatorial.len() < candidates.len() || partners.len() < all_partners.len(),
        partners,
        successors,
        case,
        positions,
        table,
        candidates,
        combinatorial,
        agrees,
        table_case_matches,
        cone_identity: rel.cone_identity(i),
    })
}
