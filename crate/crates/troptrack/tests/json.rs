//! Round trips, determinism and error classes of the JSON format.

mod common;

use proptest::prelude::*;
use troptrack::fixtures;
use troptrack::json::{
    loop_to_json, parse_loop, parse_point, parse_track, parse_triangulation, point_to_json, to_canonical,
    track_to_json, triangulation_to_json,
};
use troptrack::rational::{fmt_q, parse_q};
use troptrack::tracks::enumerate_complete_tracks;
use troptrack::tropical::{Kind, TropicalPoint};
use troptrack::{Error, Q};

use common::{point, rng};

#[test]
fn triangulations_round_trip_canonically() {
    for text in [fixtures::SPHERE4, fixtures::SPHERE5, fixtures::TORUS, fixtures::TORUS2] {
        let named = parse_triangulation(text).unwrap();
        let first = to_canonical(&triangulation_to_json(&named.id, &named.tri));
        let again = parse_triangulation(&first).unwrap();
        assert_eq!(again, named);
        let second = to_canonical(&triangulation_to_json(&again.id, &again.tri));
        assert_eq!(first, second);
    }
}

#[test]
fn emitted_keys_are_sorted() {
    let f = fixtures::sphere4();
    let text = to_canonical(&triangulation_to_json(&f.id, &f.tri));
    let at = |k: &str| text.find(&format!("\"{k}\"")).unwrap();
    assert!(at("arcs") < at("id"));
    assert!(at("id") < at("labels"));
    assert!(at("labels") < at("surface"));
    assert!(at("surface") < at("triangles"));
}

#[test]
fn points_round_trip() {
    let mut r = rng(81);
    for f in fixtures::all() {
        for kind in [Kind::A, Kind::X] {
            let p = TropicalPoint::new(f.id.clone(), kind, point(&mut r, f.tri.num_arcs()));
            let text = to_canonical(&point_to_json(&p, &f.tri));
            assert_eq!(parse_point(&text, &f.tri).unwrap(), p);
        }
    }
}

#[test]
fn point_errors_are_classified() {
    let f = fixtures::torus();
    let ok = r#"{"chart":"torus","kind":"X","coords":{"1":"1/2","2":"-3","3":"0"}}"#;
    assert_eq!(parse_point(ok, &f.tri).unwrap().coords[0], Q::new(1.into(), 2.into()));
    let cases = [
        (r#"{"chart":"torus","kind":"X","coords":{"1":"1/0","2":"0","3":"0"}}"#, "ParseError"),
        (r#"{"chart":"torus","kind":"X","coords":{"1":"x","2":"0","3":"0"}}"#, "ParseError"),
        (r#"{"chart":"torus","kind":"Y","coords":{"1":"0","2":"0","3":"0"}}"#, "ParseError"),
        (r#"{"chart":"torus","kind":"X","coords":{"1":"0","2":"0"}}"#, "InvalidInput"),
        (r#"{"chart":"torus","kind":"X","coords":{"1":"0","2":"0","4":"0"}}"#, "InvalidInput"),
        (r#"{"chart":"torus","kind":"X","coords":{}, "extra":1}"#, "ParseError"),
        (r#"{"chart":"torus""#, "ParseError"),
    ];
    for (text, code) in cases {
        assert_eq!(parse_point(text, &f.tri).unwrap_err().code(), code, "{text}");
    }
}

#[test]
fn tracks_round_trip() {
    for f in fixtures::all() {
        for (t, _) in enumerate_complete_tracks(&f.tri, &f.id) {
            let text = to_canonical(&track_to_json(&t));
            let back = parse_track(&text).unwrap();
            assert_eq!(back, t);
            assert_eq!(to_canonical(&track_to_json(&back)), text);
        }
    }
}

#[test]
fn track_errors_are_classified() {
    let cases = [
        (r#"{"base":"s","triangles":{"1":{"type":"IV","absent":[]}}}"#, "ParseError"),
        (r#"{"base":"s","triangles":{"x":{"type":"III","absent":[]}}}"#, "ParseError"),
        (r#"{"base":"s","triangles":{"1":{"type":"II","absent":[]}}}"#, "InvalidInput"),
        (r#"{"base":"s","triangles":{"1":{"type":"I","absent":[0,0]}}}"#, "InvalidInput"),
        (r#"{"base":"s","triangles":[]}"#, "ParseError"),
    ];
    for (text, code) in cases {
        assert_eq!(parse_track(text).unwrap_err().code(), code, "{text}");
    }
}

#[test]
fn triangulation_errors_are_classified() {
    let sphere3 = parse_triangulation(fixtures::SPHERE3).unwrap_err();
    assert!(matches!(sphere3, Error::SurfaceExcluded { .. }));
    assert_eq!(parse_triangulation("[1,2").unwrap_err().code(), "ParseError");
    let unknown = fixtures::TORUS.replacen("\"id\"", "\"colour\": 1, \"id\"", 1);
    assert_eq!(parse_triangulation(&unknown).unwrap_err().code(), "ParseError");
}

#[test]
fn loops_round_trip_with_embedded_base() {
    for lp in [fixtures::torus_lr_loop(), fixtures::torus_finite_loop(), fixtures::torus_lr_loop().repeat(3).unwrap()] {
        let text = to_canonical(&loop_to_json("torus", &lp));
        let (id, back) = parse_loop(&text, &[]).unwrap();
        assert_eq!(id, "torus");
        assert_eq!(back, lp);
        assert_eq!(to_canonical(&loop_to_json(&id, &back)), text);
    }
}

#[test]
fn loop_base_by_id() {
    let known = fixtures::all();
    let text = r#"{"base":"torus","word":[{"flip":"1"},{"flip":"2"},{"perm":["2","3","1"]}]}"#;
    let (id, lp) = parse_loop(text, &known).unwrap();
    assert_eq!(id, "torus");
    assert_eq!(lp, fixtures::torus_lr_loop());
    assert_eq!(parse_loop(text, &[]).unwrap_err().code(), "InvalidInput");
    let not_a_loop = r#"{"base":"torus","word":[{"flip":"1"}]}"#;
    assert_eq!(parse_loop(not_a_loop, &known).unwrap_err().code(), "LoopInvalid");
    let bad_arc = r#"{"base":"torus","word":[{"flip":"9"}]}"#;
    assert_eq!(parse_loop(bad_arc, &known).unwrap_err().code(), "InvalidInput");
    let bad_step = r#"{"base":"torus","word":[{"turn":"1"}]}"#;
    assert_eq!(parse_loop(bad_step, &known).unwrap_err().code(), "ParseError");
}

proptest! {
    #[test]
    fn rational_text_round_trips(n in -10_000i64..10_000, d in 1i64..500) {
        let x = Q::new(n.into(), d.into());
        prop_assert_eq!(parse_q(&fmt_q(&x)).unwrap(), x.clone());
        prop_assert_eq!(parse_q(&format!(" {n}/{d} ")).unwrap(), x);
    }

    #[test]
    fn parse_q_never_panics(s in "\\PC{0,24}") {
        let _ = parse_q(&s);
    }
}
