//! Tropical potential, membership in V and linearity domains.

mod common;

use std::collections::BTreeSet;

use troptrack::cone::PolyCone;
use troptrack::fixtures;
use troptrack::potential::{
    enumerate_domains, enumerate_domains_on_v, form_classes, in_open_domain, is_in_v, linearity_domain,
    tropical_potential,
};
use troptrack::surface::LabeledTriangulation;
use troptrack::tracks::{is_complete, TrainTrack};
use troptrack::rational::signum;
use troptrack::Q;

use common::{point, qv, rng};

/// Minimum expressions for the four-punctured sphere, as printed.
const PRINTED: [(&str, &[&str]); 4] = [
    ("A", &["a3 - a1 - a2", "a3 - a2 - a6", "a4 - a1 - a5", "a4 - a5 - a6"]),
    ("B", &["a1 - a2 - a3", "a6 - a2 - a3"]),
    ("C", &["a2 - a1 - a3", "a2 - a3 - a6", "a5 - a1 - a4", "a5 - a4 - a6"]),
    ("D", &["a1 - a4 - a5", "a6 - a4 - a5"]),
];

/// Parses `a3 - a1 - a2` into coefficients over arcs labelled `1..n`.
fn parse_form(s: &str, n: usize) -> Vec<i64> {
    let mut c = vec![0; n];
    let mut sign = 1;
    for tok in s.split_whitespace() {
        match tok {
            "+" => sign = 1,
            "-" => sign = -1,
            t => {
                let i: usize = t.trim_start_matches('a').parse().unwrap();
                c[i - 1] += sign;
            }
        }
    }
    c
}

fn label_order(tri: &LabeledTriangulation) -> Vec<usize> {
    (1..=tri.num_arcs()).map(|i| tri.arc_index(&i.to_string()).unwrap()).collect()
}

/// Forms per puncture in label order `a1..an`.
fn form_sets(tri: &LabeledTriangulation) -> Vec<BTreeSet<Vec<i64>>> {
    let order = label_order(tri);
    form_classes(tri)
        .into_iter()
        .map(|cls| cls.into_iter().map(|c| order.iter().map(|&i| c.coeffs[i]).collect()).collect())
        .collect()
}

fn by_label(tri: &LabeledTriangulation, v: &[i64]) -> Vec<Q> {
    let order = label_order(tri);
    let mut out = vec![Q::default(); v.len()];
    for (l, &i) in order.iter().enumerate() {
        out[i] = Q::from_integer(v[l].into());
    }
    out
}

#[test]
fn sphere4_forms_match_printed_expressions() {
    let f = fixtures::sphere4();
    let sets = form_sets(&f.tri);
    for (p, printed) in PRINTED {
        let idx = f.tri.surface().punctures().iter().position(|x| x == p).unwrap();
        let expected: BTreeSet<Vec<i64>> = printed.iter().map(|s| parse_form(s, 6)).collect();
        assert_eq!(sets[idx], expected, "puncture {p}");
    }
}

#[test]
fn zero_point() {
    for f in fixtures::all() {
        let n = f.tri.num_arcs();
        let v = tropical_potential(&f.tri, &vec![Q::default(); n]);
        assert!(v.values.iter().all(|x| *x == Q::default()));
        let corners: usize = v.argmin.iter().map(Vec::len).sum();
        assert_eq!(corners, 3 * f.tri.num_triangles());
        assert!(is_in_v(&f.tri, &vec![Q::default(); n]));
    }
}

#[test]
fn sphere4_unit_point() {
    let f = fixtures::sphere4();
    let a = by_label(&f.tri, &[1, 0, 0, 0, 0, 0]);
    let w = tropical_potential(&f.tri, &a).values;
    assert_eq!(w, qv(&[-1, 0, -1, 0]));
    assert!(!is_in_v(&f.tri, &a));
}

#[test]
fn potential_is_min_of_printed_forms() {
    let f = fixtures::sphere4();
    let mut r = rng(3);
    for _ in 0..100 {
        let a = point(&mut r, 6);
        let lab: Vec<Q> = label_order(&f.tri).iter().map(|&i| a[i].clone()).collect();
        let w = tropical_potential(&f.tri, &a).values;
        for (p, printed) in PRINTED {
            let idx = f.tri.surface().punctures().iter().position(|x| x == p).unwrap();
            let m = printed
                .iter()
                .map(|s| parse_form(s, 6).iter().zip(&lab).map(|(&c, x)| x * Q::from_integer(c.into())).sum::<Q>())
                .min()
                .unwrap();
            assert_eq!(w[idx], m);
        }
    }
}

#[test]
fn points_of_v_from_domains() {
    for f in fixtures::all() {
        for d in enumerate_domains_on_v(&f.tri) {
            assert!(d.interior.iter().any(|x| *x != Q::default()));
            assert!(is_in_v(&f.tri, &d.interior), "{}", f.id);
        }
    }
}

#[test]
fn sphere4_has_four_domains_with_printed_walls() {
    let f = fixtures::sphere4();
    assert_eq!(enumerate_domains(&f.tri).len(), 4);
    let on_v = enumerate_domains_on_v(&f.tri);
    assert_eq!(on_v.len(), 4);
    let wall1 = by_label(&f.tri, &[1, 0, 0, 0, 0, -1]);
    let wall2 = by_label(&f.tri, &[0, 1, -1, 1, -1, 0]);
    let dot = |u: &[Q], v: &[Q]| u.iter().zip(v).map(|(x, y)| x * y).sum::<Q>();
    let classes = form_classes(&f.tri);
    let mut quadrants = BTreeSet::new();
    for d in &on_v {
        let s1 = Q::from_integer(signum(&dot(&wall1, &d.interior)).into());
        let s2 = Q::from_integer(signum(&dot(&wall2, &d.interior)).into());
        assert!(s1 != Q::default() && s2 != Q::default());
        quadrants.insert((s1.clone(), s2.clone()));
        // The domain is the quadrant cut out by the two walls inside the
        // plane where the chosen forms vanish.
        let eqs = d.choice.iter().enumerate().map(|(p, &c)| classes[p][c].coeffs.iter().map(|&x| Q::from_integer(x.into())).collect()).collect();
        let scale = |w: &[Q], s: &Q| w.iter().map(|x| x * s).collect::<Vec<Q>>();
        let quadrant = PolyCone::new(6, eqs, vec![scale(&wall1, &s1), scale(&wall2, &s2)]);
        assert!(quadrant.same_set(&d.cone));
        assert_eq!(d.cone.dimension(), 2);
    }
    assert_eq!(quadrants.len(), 4);
}

#[test]
fn ties_set_the_boundary_flag() {
    let f = fixtures::sphere4();
    let mut r = rng(5);
    for _ in 0..20 {
        let mut a = point(&mut r, 6);
        let (i1, i6) = (f.tri.arc_index("1").unwrap(), f.tri.arc_index("6").unwrap());
        a[i6] = a[i1].clone();
        let d = linearity_domain(&f.tri, &a);
        assert!(d.boundary);
        assert!(d.choice.is_none());
    }
}

#[test]
fn random_points_have_unique_domain() {
    for f in fixtures::all() {
        let domains = enumerate_domains(&f.tri);
        let mut r = rng(9);
        for _ in 0..50 {
            let a = point(&mut r, f.tri.num_arcs());
            let d = linearity_domain(&f.tri, &a);
            let hits: Vec<_> = domains.iter().filter(|x| in_open_domain(&f.tri, &x.choice, &a)).collect();
            match d.choice {
                Some(c) => assert!(hits.len() == 1 && hits[0].choice == c),
                None => assert!(hits.is_empty()),
            }
        }
    }
}

#[test]
fn sphere5_example_tuple_is_a_domain() {
    let f = fixtures::sphere5();
    // Triangle (1-based) chosen at punctures p1..p5.
    let tuple = [5usize, 2, 3, 4, 6];
    let classes = form_classes(&f.tri);
    let choice: Vec<usize> = tuple
        .iter()
        .enumerate()
        .map(|(p, &t)| {
            let pid = f.tri.surface().punctures().iter().position(|x| *x == format!("p{}", p + 1)).unwrap();
            assert_eq!(pid, p);
            classes[p].iter().position(|c| c.corners.iter().any(|x| x.triangle == t - 1)).unwrap()
        })
        .collect();
    assert!(enumerate_domains(&f.tri).iter().any(|d| d.choice == choice));
    let track = TrainTrack::from_domain_choice(&f.tri, "sphere5", &choice).unwrap();
    assert!(is_complete(&f.tri, &track));
    for (p, &t) in tuple.iter().enumerate() {
        let at_p = (0..3).filter(|&v| f.tri.corner_punctures()[t - 1][v] == p);
        for v in at_p {
            assert!(!track.has_corner(t - 1, v));
        }
    }
}

#[test]
fn forms_dominate_potential() {
    let mut r = rng(13);
    for f in fixtures::all() {
        let forms = troptrack::potential::corner_forms(&f.tri);
        for _ in 0..30 {
            let a = point(&mut r, f.tri.num_arcs());
            let v = tropical_potential(&f.tri, &a);
            for form in &forms {
                let x = form.eval(&a);
                assert!(v.values[form.puncture] <= x);
                assert_eq!(v.argmin[form.puncture].contains(&form.corner), v.values[form.puncture] == x);
            }
        }
    }
}
