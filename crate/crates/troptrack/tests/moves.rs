//! Elementary moves: transition rows, carrying direction and the
//! split cone decomposition.

use num_traits::{One, Zero};
use troptrack::cone::PolyCone;
use troptrack::fixtures;
use troptrack::linalg::QMatrix;
use troptrack::tracks::{enumerate_complete_tracks, enumerate_suited_tracks, ElementaryMove, MoveKind, Slot, TrackGraph, TrainTrack};
use troptrack::Q;

fn all_graphs() -> Vec<(String, TrackGraph)> {
    let mut out = Vec::new();
    for f in fixtures::all() {
        for t in enumerate_suited_tracks(&f.tri, &f.id) {
            out.push((f.id.clone(), TrackGraph::from_track(&f.tri, &t).0));
        }
    }
    out
}

/// Suited tracks on the smaller fixtures and complete tracks on all.
fn small_graphs() -> Vec<(String, TrackGraph)> {
    let mut out = Vec::new();
    for f in fixtures::all() {
        let tracks: Vec<TrainTrack> = if f.tri.num_arcs() > 6 {
            enumerate_complete_tracks(&f.tri, &f.id).into_iter().map(|x| x.0).collect()
        } else {
            enumerate_suited_tracks(&f.tri, &f.id)
        };
        for t in tracks {
            out.push((f.id.clone(), TrackGraph::from_track(&f.tri, &t).0));
        }
    }
    out
}

/// Row of the moved branch as `(column id, coefficient)` pairs.
fn row_of(mv: &ElementaryMove, id: usize) -> Vec<(usize, Q)> {
    let r = mv.rows.iter().position(|&x| x == id).unwrap();
    mv.cols.iter().enumerate().filter(|(j, _)| !mv.matrix.get(r, *j).is_zero()).map(|(j, &c)| (c, mv.matrix.get(r, j).clone())).collect()
}

fn unit_row(ids: &[usize]) -> Vec<(usize, Q)> {
    let mut v: Vec<usize> = ids.to_vec();
    v.sort_unstable();
    let mut out: Vec<(usize, Q)> = Vec::new();
    for id in v {
        match out.last_mut() {
            Some((last, c)) if *last == id => *c += Q::one(),
            _ => out.push((id, Q::one())),
        }
    }
    out
}

/// Every row other than `moved` is the identity on the shared ids.
fn identity_elsewhere(mv: &ElementaryMove, moved: &[usize]) -> bool {
    mv.rows.iter().filter(|id| !moved.contains(id)).all(|&id| row_of(mv, id) == unit_row(&[id]))
}

/// Branches next to `c` on the two side at each of its ends in `g`.
fn two_side_neighbours(g: &TrackGraph, c: usize, slot: Slot) -> Option<Vec<usize>> {
    let ends = g.ends(c);
    if ends.len() != 2 || ends.iter().any(|e| e.slot != slot) {
        return None;
    }
    Some(ends.iter().map(|e| {
        let sw = g.switches[&e.switch];
        if slot == Slot::Left { sw.two[1] } else { sw.two[0] }
    }).collect())
}

fn maps_into(m: &QMatrix, from: &PolyCone, to: &PolyCone) -> bool {
    from.generators().maps_into(m, to)
}

fn half(dim: usize, eqs: Vec<Vec<Q>>, mut ineqs: Vec<Vec<Q>>, f: Vec<Q>, equal: bool) -> PolyCone {
    let mut eqs = eqs;
    if equal {
        eqs.push(f);
    } else {
        ineqs.push(f);
    }
    PolyCone::new(dim, eqs, ineqs)
}

/// `m` maps `from` onto `target`: into, and every generator of `target`
/// has a preimage in `from`.
fn maps_onto(m: &QMatrix, from: &PolyCone, target: &PolyCone) -> bool {
    maps_into(m, from, target)
        && target.extreme_rays().iter().all(|r| m.solve(r).is_some_and(|x| from.contains_point(&x)))
}

fn functional(ids: &[usize], plus: usize, minus: &[usize]) -> Vec<Q> {
    let mut f = vec![Q::zero(); ids.len()];
    f[ids.iter().position(|&x| x == plus).unwrap()] += Q::one();
    for m in minus {
        f[ids.iter().position(|x| x == m).unwrap()] -= Q::one();
    }
    f
}

#[test]
fn split_rows_match_local_rule() {
    let mut count = [0usize; 3];
    for (id, g) in all_graphs() {
        for c in g.large_branches() {
            for (i, (kind, slot)) in [(MoveKind::LeftSplit, Slot::Left), (MoveKind::RightSplit, Slot::Right)].into_iter().enumerate() {
                let (h, mv) = g.apply(kind, c).unwrap();
                let nb = two_side_neighbours(&h, c, slot).unwrap_or_else(|| panic!("{id}: {} at {c}", kind.name()));
                assert_eq!(row_of(&mv, c), unit_row(&[c, nb[0], nb[1]]), "{id}");
                assert!(identity_elsewhere(&mv, &[c]));
                assert!(maps_into(&mv.matrix, &h.cone(), &g.cone()));
                // Folding undoes the split with the same matrix.
                let (back, fold) = h.fold(c).unwrap();
                assert_eq!(back, g);
                assert_eq!(fold.matrix, mv.matrix);
                count[i] += 1;
            }
            if let Ok((h, mv)) = g.apply(MoveKind::CentralSplit, c) {
                let ends = g.ends(c);
                let s1 = g.switches[&ends[0].switch];
                let r = row_of(&mv, c);
                assert_eq!(r, unit_row(&[s1.two[0], s1.two[1]]), "{id}");
                assert!(h.branches.len() + 3 == g.branches.len());
                for &x in &mv.rows {
                    let row = row_of(&mv, x);
                    if h.branches.contains_key(&x) {
                        assert_eq!(row, unit_row(&[x]));
                    } else if x != c {
                        assert_eq!(row.len(), 1);
                    }
                }
                assert!(maps_into(&mv.matrix, &h.cone(), &g.cone()));
                count[2] += 1;
            }
        }
    }
    assert!(count.iter().all(|&n| n > 0), "{count:?}");
}

#[test]
fn shift_rows_match_switch_condition() {
    let mut count = 0;
    for (id, g) in all_graphs() {
        for (c, s1) in g.shift_sites() {
            let (h, mv) = g.shift(c, s1).unwrap();
            let sw = g.switches[&s1];
            assert_eq!(row_of(&mv, c), unit_row(&[sw.two[0], sw.two[1]]), "{id}");
            assert!(identity_elsewhere(&mv, &[c]));
            assert!(maps_into(&mv.matrix, &h.cone(), &g.cone()));
            assert_eq!(mv.matrix.rows(), mv.matrix.cols());
            count += 1;
        }
    }
    assert!(count > 0);
}

#[test]
fn split_cones_decompose_the_unsplit_cone() {
    let mut checked = 0;
    for (id, g) in small_graphs() {
        let ids = g.branch_ids();
        let base = g.cone();
        for c in g.large_branches() {
            let Ok((hc, mc)) = g.apply(MoveKind::CentralSplit, c) else { continue };
            let (hl, ml) = g.apply(MoveKind::LeftSplit, c).unwrap();
            let (hr, mr) = g.apply(MoveKind::RightSplit, c).unwrap();
            let nl = two_side_neighbours(&hl, c, Slot::Left).unwrap();
            let nr = two_side_neighbours(&hr, c, Slot::Right).unwrap();
            let fl = functional(&ids, c, &nl);
            let fr = functional(&ids, c, &nr);
            // The two split conditions are opposite on the unsplit cone.
            let sum: Vec<Q> = fl.iter().zip(&fr).map(|(x, y)| x + y).collect();
            assert!(base.implies_zero(&sum), "{id}");
            let ineqs: Vec<Vec<Q>> = (0..ids.len()).map(|i| { let mut v = vec![Q::zero(); ids.len()]; v[i] = Q::one(); v }).collect();
            let switch_eqs: Vec<Vec<Q>> = g.switches.values().map(|sw| {
                let mut v = vec![Q::zero(); ids.len()];
                v[ids.iter().position(|&x| x == sw.one).unwrap()] += Q::one();
                for t in sw.two {
                    v[ids.iter().position(|&x| x == t).unwrap()] -= Q::one();
                }
                v
            }).collect();
            let left = half(ids.len(), switch_eqs.clone(), ineqs.clone(), fl.clone(), false);
            let right = half(ids.len(), switch_eqs.clone(), ineqs.clone(), fr, false);
            let central = half(ids.len(), switch_eqs, ineqs, fl, true);
            assert!(maps_onto(&ml.matrix, &hl.cone(), &left), "{id} left at {c}");
            assert!(maps_onto(&mr.matrix, &hr.cone(), &right), "{id} right at {c}");
            assert!(maps_onto(&mc.matrix, &hc.cone(), &central), "{id} central at {c}");
            // The halves cover the unsplit cone and meet in the central one.
            assert!(left.intersect(&right).same_set(&central));
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn shift_back_is_identity_on_measures() {
    let mut count = 0;
    for (id, g) in all_graphs() {
        for (c, s1) in g.shift_sites() {
            let (h, mv) = g.shift(c, s1).unwrap();
            let back = h
                .shift_sites()
                .into_iter()
                .filter_map(|(b, s)| h.shift(b, s).ok())
                .find(|(k, _)| *k == g)
                .unwrap_or_else(|| panic!("{id}: no shift back at {c}"));
            let total = mv.matrix.mul(&back.1.matrix);
            for r in g.cone().extreme_rays() {
                assert_eq!(total.mul_vec(&r), r);
            }
            count += 1;
        }
    }
    assert!(count > 0);
}
