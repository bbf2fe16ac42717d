//! Following a complete track along a word of flips and relabelings.
//!
//! A measure with vanishing puncture values determines `A`-coordinates
//! through its long branches. Each flip step is the composite
//! measure -> `A`-coordinates -> flip piece -> measure on the successor,
//! which is linear once the piece and the successor are fixed.

use num_traits::{Signed, Zero};

use super::chart::AChart;
use super::lambda::flip_pieces;
use super::{enumerate_complete_tracks, Branch, TrainTrack};
use crate::cone::{Generators, PolyCone};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::rational::{dot, Q};
use crate::surface::{CornerRef, LabeledTriangulation, Step};
use crate::tropical::{a_mutate, permute_coords};

/// The outcome of following one branch of successors along a word.
#[derive(Clone, Debug)]
pub struct Carrying {
    pub start: TrainTrack,
    pub end: TrainTrack,
    /// Triangulation reached by the word.
    pub end_triangulation: LabeledTriangulation,
    /// Tracks visited after each flip.
    pub path: Vec<TrainTrack>,
    /// Composite map from measures on `start` to measures on `end`.
    pub matrix: QMatrix,
    /// True when `matrix` is the transition map on the whole cone of
    /// `start` and maps it into the cone of `end`.
    pub carried: bool,
    /// The reference measure reached a cone boundary at some flip.
    pub tie: bool,
}

struct State {
    tri: LabeledTriangulation,
    track: TrainTrack,
    chart: AChart,
    /// Start measures to current `A`-coordinates.
    amap: QMatrix,
    reference: Option<Vec<Q>>,
    path: Vec<TrainTrack>,
    carried: bool,
    tie: bool,
}

/// Follows `track` along `word`.
///
/// With a reference measure on `track`, each flip moves to the complete
/// track whose open domain contains the image of the reference (all
/// closed-domain hits on a tie). Without one, every related track is
/// followed. The result lists one entry per surviving branch.
pub fn follow_word(
    tri: &LabeledTriangulation,
    track: &TrainTrack,
    word: &[Step],
    reference: Option<&[Q]>,
) -> Result<Vec<Carrying>> {
    crate::tropical::check_word(word, tri.num_arcs())?;
    let chart = AChart::new(tri, track)?;
    let nb = chart.measure.num_branches();
    let amap = chart.a_from_measure_matrix();
    let reference = match reference {
        Some(nu) => {
            if nu.len() != nb || !chart.measure.contains(nu) {
                return Err(Error::InvalidInput("reference is not a measure on the track".into()));
            }
            Some(amap.mul_vec(nu))
        }
        None => None,
    };
    let start_cone = chart.measure.cone.generators();
    let mut states = vec![State {
        tri: tri.clone(),
        track: track.clone(),
        chart,
        amap,
        reference,
        path: Vec::new(),
        carried: true,
        tie: false,
    }];
    for (step_no, step) in word.iter().enumerate() {
        let mut next = Vec::new();
        for st in states {
            match step {
                Step::Perm(sigma) => next.push(permute_state(st, sigma)?),
                Step::Flip(k) => next.extend(flip_state(st, *k, step_no, &start_cone)?),
            }
        }
        if next.is_empty() {
            return Err(Error::NotCarried(format!("no successor after step {}", step_no + 1)));
        }
        states = next;
    }
    Ok(states
        .into_iter()
        .map(|st| {
            let matrix = st.chart.nu.mul(&st.amap);
            let carried = st.carried && start_cone.maps_into(&matrix, &st.chart.measure.cone);
            Carrying {
                start: track.clone(),
                end: st.track,
                end_triangulation: st.tri,
                path: st.path,
                matrix,
                carried,
                tie: st.tie,
            }
        })
        .collect())
}

fn permute_state(st: State, sigma: &[usize]) -> Result<State> {
    let tri = st.tri.permute(sigma)?;
    let chart = AChart::new(&tri, &st.track)?;
    let n = sigma.len();
    let mut p = QMatrix::zeros(n, n);
    for (i, &j) in sigma.iter().enumerate() {
        p.set(j, i, Q::from_integer(1.into()));
    }
    Ok(State {
        amap: p.mul(&st.amap),
        reference: st.reference.map(|a| permute_coords(&a, sigma)),
        tri,
        track: st.track,
        chart,
        path: st.path,
        carried: st.carried,
        tie: st.tie,
    })
}

fn flip_state(st: State, k: usize, step_no: usize, start_cone: &Generators) -> Result<Vec<State>> {
    let flipped = st.tri.flip(k)?;
    let base = format!("{}.{}", st.track.base(), k);
    let b = st.tri.exchange_matrix();
    let pieces = flip_pieces(&b, k);
    let candidates: Vec<(TrainTrack, AChart)> = enumerate_complete_tracks(&flipped, &base)
        .into_iter()
        .map(|(t, _)| AChart::new(&flipped, &t).map(|c| (t, c)))
        .collect::<Result<Vec<_>>>()?;
    let mut chosen: Vec<(usize, usize, bool)> = Vec::new();
    match &st.reference {
        Some(a) => {
            let a2 = a_mutate(a, &b, k);
            let piece = usize::from(dot(&pieces[0].0, a).is_negative());
            let open: Vec<usize> = (0..candidates.len()).filter(|&j| candidates[j].1.interior_contains(&a2)).collect();
            if open.is_empty() {
                let closed: Vec<usize> = (0..candidates.len()).filter(|&j| candidates[j].1.contains(&a2)).collect();
                chosen.extend(closed.into_iter().map(|j| (j, piece, true)));
            } else {
                chosen.extend(open.into_iter().map(|j| (j, piece, false)));
            }
        }
        None => {
            let from = st.chart.domain().facets();
            for (j, (_, c)) in candidates.iter().enumerate() {
                let to = c.domain().facets();
                for (pi, piece) in pieces.iter().enumerate() {
                    let mut strict = from.clone();
                    if piece.0.iter().any(|x| !x.is_zero()) {
                        strict.push(piece.0.clone());
                    }
                    strict.extend(to.iter().map(|g| piece.1.vec_mul(g)));
                    if PolyCone::full(b.size()).strict_point(&strict).is_some() {
                        chosen.push((j, pi, false));
                        break;
                    }
                }
            }
        }
    }
    if chosen.is_empty() {
        return Err(Error::NotCarried(format!("reference leaves every cone at step {}", step_no + 1)));
    }
    let mut out = Vec::new();
    for (j, pi, tie) in chosen {
        let (track, chart) = candidates[j].clone();
        let (half, lin) = &pieces[pi];
        // The map stays linear on the whole start cone while its image
        // stays in one piece of the flip.
        let carried = st.carried && start_cone.implies_nonneg(&st.amap.vec_mul(half));
        let mut path = st.path.clone();
        path.push(track.clone());
        out.push(State {
            tri: flipped.clone(),
            reference: st.reference.as_ref().map(|a| a_mutate(a, &b, k)),
            amap: lin.mul(&st.amap),
            track,
            chart,
            path,
            carried,
            tie: st.tie || tie,
        });
    }
    Ok(out)
}

/// Composite transition matrix along `word`, steered by an optional
/// reference measure; one entry per surviving successor branch.
pub fn carrying_matrix(
    tri: &LabeledTriangulation,
    track: &TrainTrack,
    word: &[Step],
    reference: Option<&[Q]>,
) -> Result<Vec<Carrying>> {
    follow_word(tri, track, word, reference)
}

/// Every combinatorial isomorphism `from -> to` fixing arc indices, as
/// triangle maps `t -> (u, r)` sending vertex `v` of `t` to vertex `v + r`
/// of `u`.
pub fn isomorphisms(from: &LabeledTriangulation, to: &LabeledTriangulation) -> Vec<Vec<(usize, usize)>> {
    if !from.same_combinatorics(to) {
        return Vec::new();
    }
    let f = from.num_triangles();
    let options: Vec<Vec<(usize, usize)>> = from
        .triangles()
        .iter()
        .map(|tri| {
            let a = tri.map(|s| s.arc);
            let mut o = Vec::new();
            for (u, other) in to.triangles().iter().enumerate() {
                let b = other.map(|s| s.arc);
                for r in 0..3 {
                    if (0..3).all(|v| a[v] == b[(v + r) % 3]) {
                        o.push((u, r));
                    }
                }
            }
            o
        })
        .collect();
    let mut out = Vec::new();
    let mut cur: Vec<(usize, usize)> = Vec::with_capacity(f);
    fn rec(
        options: &[Vec<(usize, usize)>],
        cur: &mut Vec<(usize, usize)>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if cur.len() == options.len() {
            out.push(cur.clone());
            return;
        }
        for &(u, r) in &options[cur.len()] {
            if !used[u] {
                used[u] = true;
                cur.push((u, r));
                rec(options, cur, used, out);
                cur.pop();
                used[u] = false;
            }
        }
    }
    rec(&options, &mut cur, &mut vec![false; f], &mut out);
    out
}

/// Moves a track and its measures across a triangle isomorphism.
///
/// Returns the transported track and the permutation matrix from measures
/// on `track` (over `from`) to measures on the result (over `to`).
pub fn transport_track(
    from: &LabeledTriangulation,
    to: &LabeledTriangulation,
    iso: &[(usize, usize)],
    track: &TrainTrack,
    base: &str,
) -> Result<(TrainTrack, QMatrix)> {
    let mut masks = vec![0u8; to.num_triangles()];
    for (t, &(u, r)) in iso.iter().enumerate() {
        for v in 0..3 {
            if track.has_corner(t, v) {
                masks[u] |= 1 << ((v + r) % 3);
            }
        }
    }
    let moved = TrainTrack::new(base, masks)?;
    let src = track.branches(from);
    let dst = moved.branches(to);
    let mut p = QMatrix::zeros(dst.len(), src.len());
    for (j, b) in src.iter().enumerate() {
        let nb = match *b {
            Branch::Long(a) => Branch::Long(a),
            Branch::Short(c) => {
                let (u, r) = iso[c.triangle];
                Branch::Short(CornerRef::new(u, (c.vertex + r) % 3))
            }
        };
        let i = dst
            .iter()
            .position(|x| *x == nb)
            .ok_or_else(|| Error::InvalidInput("isomorphism does not preserve the track".into()))?;
        p.set(i, j, Q::from_integer(1.into()));
    }
    Ok((moved, p))
}
