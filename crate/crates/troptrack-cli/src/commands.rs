//! Command implementations; each returns the text to print.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use troptrack::json::{
    cone_json, exchange_json, loop_to_json, matrix_json, point_to_json, q_json, to_canonical, track_to_json,
    triangulation_to_json, vec_json,
};
use troptrack::poly::SpectralRadius;
use troptrack::potential::{enumerate_domains, enumerate_domains_on_v, form_classes, format_form, tropical_potential, wall_normals};
use troptrack::stability::{
    detect_with_powers, entropy, find_invariant_track, iterate_loop, MutationLoop, StabilityOptions, StabilityReport,
};
use troptrack::surface::LabeledTriangulation;
use troptrack::tracks::{
    branch_name, enumerate_complete_tracks, enumerate_suited_tracks, is_complete, is_recurrent, lambda_relation,
    AChart, ElementaryMove, MoveKind, TableCell, TrackGraph,
};
use troptrack::tropical::{tropical_a_mutate, tropical_x_mutate, Kind};
use troptrack::{Error, Q};

use crate::{cache, input, Command, FanCmd, FanFormat, Failure, LoopCmd, LoopInput, PotentialCmd, StabilityArgs, SurfaceCmd, TracksCmd};

type Out = Result<String, Failure>;

fn emit(v: &Value) -> String {
    format!("{}\n", to_canonical(v))
}

pub fn execute(cmd: &Command) -> Out {
    match cmd {
        Command::Surface(SurfaceCmd::Build { tri }) => {
            let t = input::triangulation(tri)?;
            Ok(emit(&triangulation_to_json(&t.id, &t.tri)))
        }
        Command::Flip { tri, arc, point } => flip(tri, arc, point.as_deref()),
        Command::Bmatrix { tri } => {
            let t = input::triangulation(tri)?;
            Ok(emit(&json!({"arcs": t.tri.labels(), "matrix": exchange_json(&t.tri.exchange_matrix())})))
        }
        Command::Potential(PotentialCmd::Eval { tri, point }) => potential_eval(tri, point.as_deref()),
        Command::Potential(PotentialCmd::Domains { tri, on_v }) => potential_domains(tri, *on_v),
        Command::Tracks(TracksCmd::Enumerate { tri, complete }) => tracks_enumerate(tri, *complete),
        Command::Tracks(TracksCmd::Cone { tri, track }) => tracks_cone(tri, track),
        Command::Tracks(TracksCmd::Move { tri, track, kind, branch }) => tracks_move(tri, track, kind.as_deref(), *branch),
        Command::Tracks(TracksCmd::Lambda { tri, track, arc }) => tracks_lambda(tri, track, arc),
        Command::Loop(LoopCmd::Check(i)) => loop_check(i),
        Command::Loop(LoopCmd::Signs { input, point, iterations }) => loop_signs(input, point, *iterations),
        Command::Loop(LoopCmd::Stability { input, opts }) => loop_stability(input, opts),
        Command::Loop(LoopCmd::Entropy { input, opts }) => loop_entropy(input, opts),
        Command::Loop(LoopCmd::InvariantTrack { input }) => loop_invariant(input),
        Command::Fan(FanCmd::Export { tri, format }) => fan_export(tri, *format),
    }
}

fn arc_index(tri: &LabeledTriangulation, arc: &str) -> Result<usize, Failure> {
    tri.arc_index(arc).ok_or_else(|| Failure::Module(Error::InvalidInput(format!("unknown arc id {arc:?}"))))
}

fn flip(tri: &str, arc: &str, point: Option<&str>) -> Out {
    let t = input::triangulation(tri)?;
    let k = arc_index(&t.tri, arc)?;
    let flipped = t.tri.flip(k)?;
    let id = format!("{}.{k}", t.id);
    let mut out = Map::new();
    out.insert("triangulation".into(), triangulation_to_json(&id, &flipped));
    if let Some(p) = point {
        let p = input::point(p, &t.tri)?;
        let b = t.tri.exchange_matrix();
        let moved = match p.kind {
            Kind::A => tropical_a_mutate(&p, &b, k)?,
            Kind::X => tropical_x_mutate(&p, &b, k)?,
        };
        out.insert("point".into(), point_to_json(&moved, &flipped));
    }
    Ok(emit(&Value::Object(out)))
}

/// Class forms of each puncture, keyed by puncture id.
fn forms_by_puncture(tri: &LabeledTriangulation) -> Vec<(String, Vec<String>)> {
    let ids = tri.surface().punctures();
    form_classes(tri)
        .iter()
        .enumerate()
        .map(|(p, cls)| (ids[p].clone(), cls.iter().map(|c| format_form(tri, &c.coeffs)).collect()))
        .collect()
}

fn potential_eval(tri: &str, point: Option<&str>) -> Out {
    let t = input::triangulation(tri)?;
    let forms = forms_by_puncture(&t.tri);
    let value = match point {
        Some(p) => {
            let p = input::point(p, &t.tri)?;
            if p.kind != Kind::A {
                return Err(Error::InvalidInput("the potential is evaluated at an A-point".into()).into());
            }
            Some(tropical_potential(&t.tri, &p.coords))
        }
        None => None,
    };
    let classes = form_classes(&t.tri);
    let mut punctures = Map::new();
    for (p, (id, fs)) in forms.iter().enumerate() {
        let mut entry = json!({"forms": fs, "expression": format!("min({})", fs.join(", "))});
        if let Some(pv) = &value {
            let argmin: Vec<&String> = classes[p]
                .iter()
                .zip(fs)
                .filter(|(c, _)| c.corners.iter().any(|x| pv.argmin[p].contains(x)))
                .map(|(_, f)| f)
                .collect();
            entry["value"] = q_json(&pv.values[p]);
            entry["argmin"] = json!(argmin);
        }
        punctures.insert(id.clone(), entry);
    }
    let mut out = json!({"chart": t.id, "punctures": punctures});
    if let Some(pv) = &value {
        out["in_v"] = json!(pv.values.iter().all(|v| *v == Q::from_integer(0.into())));
    }
    Ok(emit(&out))
}

/// Chosen class form per puncture.
fn choice_json(tri: &LabeledTriangulation, choice: &[usize]) -> Value {
    let forms = forms_by_puncture(tri);
    let m: BTreeMap<String, String> = forms.iter().zip(choice).map(|((id, fs), &c)| (id.clone(), fs[c].clone())).collect();
    json!(m)
}

fn potential_domains(tri: &str, on_v: bool) -> Out {
    let t = input::triangulation(tri)?;
    let domains = if on_v { enumerate_domains_on_v(&t.tri) } else { enumerate_domains(&t.tri) };
    let list: Vec<Value> = domains
        .iter()
        .map(|d| {
            json!({
                "choice": choice_json(&t.tri, &d.choice),
                "cone": cone_json(&d.cone),
                "interior": vec_json(&d.interior),
                "walls": wall_normals(d).iter().map(|w| vec_json(w)).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(emit(&json!({"chart": t.id, "on_v": on_v, "count": list.len(), "domains": list})))
}

fn tracks_enumerate(tri: &str, complete: bool) -> Out {
    let t = input::triangulation(tri)?;
    let list: Vec<Value> = if complete {
        enumerate_complete_tracks(&t.tri, &t.id)
            .iter()
            .map(|(track, choice)| json!({"track": track_to_json(track), "domain": choice_json(&t.tri, choice)}))
            .collect()
    } else {
        enumerate_suited_tracks(&t.tri, &t.id).iter().map(|track| json!({"track": track_to_json(track)})).collect()
    };
    Ok(emit(&json!({"chart": t.id, "complete": complete, "count": list.len(), "tracks": list})))
}

fn tracks_cone(tri: &str, track: &str) -> Out {
    let t = input::triangulation(tri)?;
    let track = input::track(track, &t.tri)?;
    let mc = track.measure_cone(&t.tri);
    let s = t.tri.surface();
    let expected = 6 * s.genus() + 2 * s.num_punctures() - 6;
    let names: Vec<String> = mc.branches.iter().map(|&b| branch_name(&t.tri, b)).collect();
    Ok(emit(&json!({
        "branches": names,
        "cone": cone_json(&mc.cone),
        "dimension": mc.dimension(),
        "expected_dimension": expected,
        "complete": is_complete(&t.tri, &track),
        "recurrent": is_recurrent(&t.tri, &track),
    })))
}

fn graph_json(g: &TrackGraph) -> Value {
    let branches: BTreeMap<String, String> = g.branches.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
    json!({
        "branches": branches,
        "large": g.large_branches(),
        "shift_sites": g.shift_sites().iter().map(|(b, s)| json!({"branch": b, "switch": s})).collect::<Vec<_>>(),
    })
}

fn move_json(mv: &ElementaryMove) -> Value {
    json!({
        "kind": mv.kind.name(),
        "branch": mv.branch,
        "rows": mv.rows,
        "cols": mv.cols,
        "matrix": matrix_json(&mv.matrix),
        "fine_is_new": mv.fine_is_new,
    })
}

fn tracks_move(tri: &str, track: &str, kind: Option<&str>, branch: Option<usize>) -> Out {
    let t = input::triangulation(tri)?;
    let track = input::track(track, &t.tri)?;
    let (g, _) = TrackGraph::from_track(&t.tri, &track);
    let (Some(kind), Some(branch)) = (kind, branch) else {
        return Ok(emit(&json!({"graph": graph_json(&g)})));
    };
    let kind = MoveKind::parse(kind).ok_or_else(|| Failure::Usage(format!("unknown move kind {kind:?}")))?;
    let (after, mv) = g.apply(kind, branch)?;
    Ok(emit(&json!({"before": graph_json(&g), "after": graph_json(&after), "move": move_json(&mv)})))
}

fn tracks_lambda(tri: &str, track: &str, arc: &str) -> Out {
    let t = input::triangulation(tri)?;
    let track = input::track(track, &t.tri)?;
    let k = arc_index(&t.tri, arc)?;
    let rel = lambda_relation(&t.tri, &track, k)?;
    let table = match rel.table {
        Some(TableCell::Chain(c)) => json!(c.name()),
        Some(TableCell::Excluded) => json!("excluded"),
        None => Value::Null,
    };
    let tracks = |v: &[troptrack::tracks::TrainTrack]| v.iter().map(track_to_json).collect::<Vec<_>>();
    Ok(emit(&json!({
        "arc": arc,
        "successors": tracks(&rel.successors),
        "case": rel.case.map(|c| c.name()),
        "positions": [rel.positions.0.name(), rel.positions.1.name()],
        "table": table,
        "combinatorial": tracks(&rel.combinatorial),
        "agrees": rel.agrees,
        "table_case_matches": rel.table_case_matches,
        "degenerate": rel.degenerate,
        "cone_identity": rel.cone_identity,
    })))
}

fn loop_check(i: &LoopInput) -> Out {
    let (id, lp) = input::mutation_loop(&i.lp, i.base.as_deref())?;
    Ok(emit(&json!({
        "valid": true,
        "loop": loop_to_json(&id, &lp),
        "flips": lp.num_flips(),
        "power": lp.power(),
        "exchange_matrix": exchange_json(&lp.exchange_matrices()[0]),
    })))
}

fn loop_signs(i: &LoopInput, point: &str, iterations: usize) -> Out {
    let (_, lp) = input::mutation_loop(&i.lp, i.base.as_deref())?;
    let p = input::point(point, lp.base())?;
    if p.kind != Kind::X {
        return Err(Error::InvalidInput("loops act on X-points".into()).into());
    }
    let orbit: Vec<Value> = iterate_loop(&lp, &p.coords, iterations)
        .iter()
        .map(|x| json!({"point": vec_json(x), "sign": lp.apply(x).1.to_string()}))
        .collect();
    Ok(emit(&json!({"orbit": orbit})))
}

fn spectral_json(s: &SpectralRadius) -> Value {
    json!({
        "lower": q_json(&s.lower),
        "upper": q_json(&s.upper),
        "exact": s.exact,
        "certified": s.certified,
        "char_poly": s.char_poly.as_ref().map(|p| p.display("x")),
        "dominant_poly": s.dominant.as_ref().map(|d| d.poly().display("x")),
    })
}

fn stability_report(i: &LoopInput, opts: &StabilityArgs) -> Result<(MutationLoop, StabilityReport), Failure> {
    let (_, lp) = input::mutation_loop(&i.lp, i.base.as_deref())?;
    let mut samples = Vec::new();
    for s in &opts.samples {
        let p = input::point(s, lp.base())?;
        if p.kind != Kind::X {
            return Err(Error::InvalidInput("stability samples are X-points".into()).into());
        }
        samples.push(p.coords);
    }
    let o = StabilityOptions { max_iter: opts.max_iter, window: opts.window };
    Ok(detect_with_powers(&lp, &samples, &o, opts.max_power.max(1))?)
}

/// Cache key of a loop command: canonical loop, options and samples.
fn loop_key(cmd: &str, i: &LoopInput, opts: &StabilityArgs) -> Result<String, Failure> {
    let (id, lp) = input::mutation_loop(&i.lp, i.base.as_deref())?;
    let mut parts = vec![
        cmd.to_string(),
        to_canonical(&loop_to_json(&id, &lp)),
        format!("{} {} {}", opts.max_iter, opts.window, opts.max_power),
    ];
    for s in &opts.samples {
        parts.push(to_canonical(&point_to_json(&input::point(s, lp.base())?, lp.base())));
    }
    Ok(cache::key(&parts.iter().map(String::as_str).collect::<Vec<_>>()))
}

fn loop_stability(i: &LoopInput, opts: &StabilityArgs) -> Out {
    let key = loop_key("loop stability v1", i, opts)?;
    cache::cached(&key, || {
        let (lp, rep) = stability_report(i, opts)?;
        let orbits: Vec<Value> = rep
            .orbits
            .iter()
            .map(|o| json!({"sample": vec_json(&o.sample), "n0": o.n0, "final_sign": o.signs.last().map(|s| s.to_string())}))
            .collect();
        Ok(emit(&json!({
            "verdict": rep.verdict.name(),
            "reason": rep.reason,
            "power": lp.power(),
            "stable_sign": rep.stable_sign.as_ref().map(|s| s.to_string()),
            "orbits": orbits,
            "offending": rep.offending,
            "presentation": rep.presentation.as_ref().map(matrix_json),
            "cone": rep.cone.as_ref().map(cone_json),
            "spectral_radius": rep.spectral.as_ref().map(spectral_json),
        })))
    })
}

/// `x` with 10 significant digits.
pub fn sig10(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let decimals = (9 - x.abs().log10().floor() as i64).max(0) as usize;
    format!("{x:.decimals$}")
}

fn loop_entropy(i: &LoopInput, opts: &StabilityArgs) -> Out {
    let key = loop_key("loop entropy v1", i, opts)?;
    cache::cached(&key, || {
        let (_, rep) = stability_report(i, opts)?;
        let h = entropy(&rep)?;
        Ok(emit(&json!({
            "entropy": sig10(h.value),
            "stretch_factor": sig10(h.spectral.value()),
            "power": h.power,
            "stable_sign": rep.stable_sign.as_ref().map(|s| s.to_string()),
            "spectral_radius": spectral_json(&h.spectral),
        })))
    })
}

fn loop_invariant(i: &LoopInput) -> Out {
    let (_, lp) = input::mutation_loop(&i.lp, i.base.as_deref())?;
    let rep = troptrack::stability::detect_sign_stability(&lp, &[], &StabilityOptions::default())?;
    let inv = find_invariant_track(&lp, rep.cone.as_ref())?
        .ok_or_else(|| Failure::Module(Error::NotCarried("no complete track is carried into itself".into())))?;
    let chart = AChart::new(lp.base(), &inv.track)?;
    let names: Vec<String> = chart.measure.branches.iter().map(|&b| branch_name(lp.base(), b)).collect();
    Ok(emit(&json!({
        "track": track_to_json(&inv.track),
        "branches": names,
        "matrix": matrix_json(&inv.matrix),
        "spectral_radius": spectral_json(&inv.spectral),
        "matches_presentation": rep.spectral.as_ref().and_then(|s| inv.spectral.same_exact(s)),
        "ensemble_in_stable_cone": inv.probe,
    })))
}

fn fan_export(tri: &str, format: FanFormat) -> Out {
    let t = input::triangulation(tri)?;
    let canon = to_canonical(&triangulation_to_json(&t.id, &t.tri));
    let fmt = match format {
        FanFormat::Json => "json",
        FanFormat::Dot => "dot",
    };
    let key = cache::key(&["fan export v1", fmt, &canon]);
    cache::cached(&key, || {
        let tracks = enumerate_complete_tracks(&t.tri, &t.id);
        let cones = tracks.iter().map(|(tr, _)| Ok(AChart::new(&t.tri, tr)?.domain())).collect::<Result<Vec<_>, Failure>>()?;
        let n = t.tri.num_arcs();
        let mut edges = Vec::new();
        for i in 0..cones.len() {
            for j in i + 1..cones.len() {
                if cones[i].intersect(&cones[j]).dimension() + 1 == n {
                    edges.push((i, j));
                }
            }
        }
        Ok(match format {
            FanFormat::Json => {
                let nodes: Vec<Value> = tracks
                    .iter()
                    .zip(&cones)
                    .enumerate()
                    .map(|(i, ((tr, choice), c))| {
                        json!({"id": i, "track": track_to_json(tr), "domain": choice_json(&t.tri, choice), "cone": cone_json(c)})
                    })
                    .collect();
                emit(&json!({"chart": t.id, "cones": nodes, "edges": edges}))
            }
            FanFormat::Dot => {
                let mut s = format!("graph \"{}\" {{\n", t.id.replace('"', "\\\""));
                for (i, (tr, _)) in tracks.iter().enumerate() {
                    let label: Vec<String> = tr.masks().iter().map(|m| m.to_string()).collect();
                    s.push_str(&format!("  c{i} [label=\"{}\"];\n", label.join(" ")));
                }
                for (i, j) in &edges {
                    s.push_str(&format!("  c{i} -- c{j};\n"));
                }
                s.push_str("}\n");
                s
            }
        })
    })
}
