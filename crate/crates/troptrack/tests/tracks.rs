//! Suited tracks, measure cones, the complete fan and carrying.

mod common;

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use troptrack::fixtures;
use troptrack::linalg::QMatrix;
use troptrack::potential::{enumerate_domains, form_classes};
use troptrack::surface::{LabeledTriangulation, Step};
use troptrack::tracks::{
    chart_map, complete_tracks_by_regions, enumerate_complete_tracks, enumerate_suited_tracks, follow_word,
    is_complete, is_recurrent, is_train_track, regions, AChart, TrainTrack, TriangleType,
};
use troptrack::tropical::a_mutate;
use troptrack::Q;

use common::{point, rng};

/// Switch matrix built from the masks alone: long branches first, then
/// present corners in triangle order.
fn switch_matrix(tri: &LabeledTriangulation, masks: &[u8]) -> (usize, QMatrix) {
    let has = |t: usize, v: usize| masks[t] >> (v % 3) & 1 == 1;
    let mut longs = BTreeSet::new();
    for (t, sides) in tri.triangles().iter().enumerate() {
        for (i, s) in sides.iter().enumerate() {
            if has(t, i) || has(t, i + 1) {
                longs.insert(s.arc);
            }
        }
    }
    let longs: Vec<usize> = longs.into_iter().collect();
    let mut shorts = Vec::new();
    for t in 0..masks.len() {
        for v in 0..3 {
            if has(t, v) {
                shorts.push((t, v));
            }
        }
    }
    let m = longs.len() + shorts.len();
    let mut rows = Vec::new();
    for (t, sides) in tri.triangles().iter().enumerate() {
        for (i, s) in sides.iter().enumerate() {
            let mut row = vec![Q::zero(); m];
            let mut any = false;
            for v in [i, (i + 1) % 3] {
                if has(t, v) {
                    row[longs.len() + shorts.iter().position(|&x| x == (t, v)).unwrap()] -= Q::one();
                    any = true;
                }
            }
            if any {
                row[longs.iter().position(|&a| a == s.arc).unwrap()] += Q::one();
                rows.push(row);
            }
        }
    }
    (m, QMatrix::from_rows(rows))
}

#[test]
fn sphere4_counts() {
    let f = fixtures::sphere4();
    assert_eq!(enumerate_suited_tracks(&f.tri, &f.id).len(), 8);
    assert_eq!(enumerate_complete_tracks(&f.tri, &f.id).len(), 4);
    assert_eq!(complete_tracks_by_regions(&f.tri, &f.id).len(), 4);
}

#[test]
fn freeway_is_not_a_track_on_the_sphere() {
    let f = fixtures::sphere4();
    let freeway = TrainTrack::freeway(&f.tri, &f.id);
    assert!(!is_train_track(&f.tri, &freeway));
    assert!(!is_complete(&f.tri, &freeway));
    assert!(!enumerate_suited_tracks(&f.tri, &f.id).contains(&freeway));
}

#[test]
fn complete_tracks_two_ways() {
    for f in fixtures::all() {
        let by_domains: Vec<TrainTrack> = enumerate_complete_tracks(&f.tri, &f.id).into_iter().map(|x| x.0).collect();
        assert_eq!(by_domains, complete_tracks_by_regions(&f.tri, &f.id), "{}", f.id);
        assert_eq!(by_domains.len(), enumerate_domains(&f.tri).len());
        for t in &by_domains {
            for tri_index in 0..f.tri.num_triangles() {
                assert_ne!(t.triangle_type(tri_index), TriangleType::I);
            }
        }
    }
}

#[test]
fn complete_counts_on_random_triangulations() {
    let mut r = rng(17);
    let mut checked = 0;
    for f in [fixtures::sphere4(), fixtures::torus(), fixtures::torus2()] {
        let mut tri = f.tri.clone();
        let mut done = 0;
        while done < 7 {
            let k = rand::Rng::gen_range(&mut r, 0..tri.num_arcs());
            let Ok(next) = tri.flip(k) else { continue };
            done += 1;
            tri = next;
            let domains = enumerate_domains(&tri).len();
            assert_eq!(enumerate_complete_tracks(&tri, "r").len(), domains);
            assert_eq!(complete_tracks_by_regions(&tri, "r").len(), domains);
            checked += 1;
        }
    }
    assert!(checked >= 20);
}

#[test]
fn cone_dimension_of_complete_tracks() {
    for f in fixtures::all() {
        let s = f.tri.surface();
        let expected = 6 * s.genus() + 2 * s.num_punctures() - 6;
        for (t, _) in enumerate_complete_tracks(&f.tri, &f.id) {
            let (m, eqs) = switch_matrix(&f.tri, t.masks());
            let mc = t.measure_cone(&f.tri);
            let pos = mc.positive_measure().expect("recurrent");
            assert!(pos.iter().all(Signed::is_positive));
            assert!(eqs.mul_vec(&pos).iter().all(Zero::is_zero));
            assert_eq!(m - eqs.rank(), expected, "{}", f.id);
            assert_eq!(mc.dimension(), expected);
            assert!(mc.contains(&vec![Q::zero(); m]));
        }
    }
}

#[test]
fn regions_of_complete_tracks() {
    for f in fixtures::all() {
        let once_torus = f.tri.surface().genus() == 1 && f.tri.surface().num_punctures() == 1;
        for (t, _) in enumerate_complete_tracks(&f.tri, &f.id) {
            let rs = regions(&f.tri, &t).unwrap();
            for r in &rs {
                assert!(r.is_trigon() || r.is_punctured_monogon() || (once_torus && r.is_punctured_bigon()));
            }
            assert!(is_recurrent(&f.tri, &t));
        }
    }
}

#[test]
fn fan_covers_with_disjoint_interiors() {
    for (seed, f) in fixtures::all().into_iter().enumerate() {
        let charts: Vec<AChart> = enumerate_complete_tracks(&f.tri, &f.id)
            .iter()
            .map(|(t, _)| AChart::new(&f.tri, t).unwrap())
            .collect();
        let mut r = rng(100 + seed as u64);
        for _ in 0..200 {
            let a = point(&mut r, f.tri.num_arcs());
            let closed = charts.iter().filter(|c| c.contains(&a)).count();
            let open = charts.iter().filter(|c| c.interior_contains(&a)).count();
            assert!(closed >= 1, "{}", f.id);
            assert!(open <= 1);
            if open == 1 {
                assert_eq!(closed, 1);
            }
        }
    }
}

#[test]
fn wall_points_lie_in_two_cones() {
    let f = fixtures::sphere4();
    let charts: Vec<AChart> =
        enumerate_complete_tracks(&f.tri, &f.id).iter().map(|(t, _)| AChart::new(&f.tri, t).unwrap()).collect();
    let (i1, i6) = (f.tri.arc_index("1").unwrap(), f.tri.arc_index("6").unwrap());
    let mut r = rng(21);
    for _ in 0..50 {
        let mut a = point(&mut r, 6);
        a[i6] = a[i1].clone();
        assert_eq!(charts.iter().filter(|c| c.interior_contains(&a)).count(), 0);
        assert!(charts.iter().filter(|c| c.contains(&a)).count() >= 2);
    }
}

#[test]
fn chart_round_trip_and_composition() {
    let mut r = rng(23);
    for f in fixtures::all() {
        let tracks: Vec<TrainTrack> = enumerate_complete_tracks(&f.tri, &f.id).into_iter().map(|x| x.0).collect();
        let maps: Vec<_> = tracks.iter().map(|t| chart_map(&f.tri, t).unwrap()).collect();
        let n = f.tri.num_arcs();
        for m in &maps {
            assert_eq!(m.inverse.mul(&m.forward), QMatrix::identity(n));
        }
        for _ in 0..10 {
            let a = point(&mut r, n);
            for i in 0..maps.len().min(4) {
                let x = maps[i].forward.mul_vec(&a);
                assert_eq!(maps[i].inverse.mul_vec(&x), a);
                for j in 0..maps.len().min(4) {
                    let change = maps[j].forward.mul(&maps[i].inverse);
                    assert_eq!(change.mul_vec(&x), maps[j].forward.mul_vec(&a));
                }
            }
        }
        let domains = enumerate_domains(&f.tri);
        for (t, m) in tracks.iter().zip(&maps) {
            // Chart coordinates agree with the measure on the domain.
            let chart = AChart::new(&f.tri, t).unwrap();
            let a = domains.iter().find(|d| d.choice == chart.choice).unwrap().interior.clone();
            let nu = chart.measure_of(&a);
            assert!(chart.measure.contains(&nu));
            let x = m.forward.mul_vec(&a);
            for (k, &b) in chart.measure.basis.iter().enumerate() {
                assert_eq!(x[k], nu[b]);
            }
            assert_eq!(chart.a_of(&nu, &chart.w_of(&a)), a);
        }
    }
}

#[test]
fn sphere4_chart_uses_wall_forms() {
    let f = fixtures::sphere4();
    let lab = |v: [i64; 6]| {
        let mut out = vec![Q::zero(); 6];
        for (l, x) in v.iter().enumerate() {
            out[f.tri.arc_index(&(l + 1).to_string()).unwrap()] = Q::from_integer((*x).into());
        }
        out
    };
    let walls = [lab([0, 1, -1, 1, -1, 0]), lab([1, 0, 0, 0, 0, -1])];
    for (t, _) in enumerate_complete_tracks(&f.tri, &f.id) {
        let chart = AChart::new(&f.tri, &t).unwrap();
        let w_rows = chart.w.to_rows();
        let base_rank = QMatrix::from_rows(w_rows.clone()).rank();
        assert_eq!(base_rank, 4);
        // Modulo the puncture values every branch weight is a combination
        // of the two wall forms, and both walls are needed.
        let mut span = w_rows.clone();
        span.extend(walls.iter().cloned());
        assert_eq!(QMatrix::from_rows(span.clone()).rank(), 6);
        for row in chart.nu.to_rows() {
            let mut with = span.clone();
            with.push(row);
            assert_eq!(QMatrix::from_rows(with).rank(), 6);
        }
        let m = chart_map(&f.tri, &t).unwrap();
        assert_eq!(m.basis.len(), 2);
    }
}

#[test]
fn every_domain_choice_names_its_track() {
    for f in fixtures::all() {
        let classes = form_classes(&f.tri);
        for (t, choice) in enumerate_complete_tracks(&f.tri, &f.id) {
            assert_eq!(t.domain_choice(&f.tri), Some(choice.clone()));
            for (p, &c) in choice.iter().enumerate() {
                for corner in &classes[p][c].corners {
                    assert!(!t.has_corner(corner.triangle, corner.vertex));
                }
            }
        }
    }
}

#[test]
fn empty_word_carries_identically() {
    for f in fixtures::all() {
        for (t, _) in enumerate_complete_tracks(&f.tri, &f.id) {
            let c = follow_word(&f.tri, &t, &[], None).unwrap();
            assert_eq!(c.len(), 1);
            assert!(c[0].carried);
            let mc = t.measure_cone(&f.tri);
            for g in mc.generators() {
                assert_eq!(c[0].matrix.mul_vec(&g), g);
            }
        }
    }
}

/// Carrying along one flip agrees with the tropical flip of the
/// corresponding `A`-points.
#[test]
fn single_flip_carrying_matches_a_mutation() {
    let mut r = rng(29);
    for f in [fixtures::sphere4(), fixtures::torus(), fixtures::torus2()] {
        let b = f.tri.exchange_matrix();
        for (t, _) in enumerate_complete_tracks(&f.tri, &f.id) {
            let chart = AChart::new(&f.tri, &t).unwrap();
            let gens = chart.measure.generators();
            let amap = chart.a_from_measure_matrix();
            for k in (0..f.tri.num_arcs()).filter(|&k| f.tri.can_flip(k)) {
                let results = follow_word(&f.tri, &t, &[Step::Flip(k)], None).unwrap();
                assert!(!results.is_empty());
                for c in results.iter().filter(|c| c.carried) {
                    let end = AChart::new(&c.end_triangulation, &c.end).unwrap();
                    for _ in 0..5 {
                        let nu: Vec<Q> = gens.iter().fold(vec![Q::zero(); chart.measure.num_branches()], |acc, g| {
                            let s = Q::from_integer(rand::Rng::gen_range(&mut r, 0i64..5).into());
                            acc.iter().zip(g).map(|(x, y)| x + y * &s).collect()
                        });
                        let a2 = a_mutate(&amap.mul_vec(&nu), &b, k);
                        assert_eq!(c.matrix.mul_vec(&nu), end.measure_of(&a2), "{} arc {k}", f.id);
                        assert!(end.measure.contains(&c.matrix.mul_vec(&nu)));
                    }
                }
            }
        }
    }
}
