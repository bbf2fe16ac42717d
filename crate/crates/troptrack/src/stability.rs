//! Mutation loops acting on tropical `X`-points: sign stability, the
//! presentation matrix on the stable cone, entropy and invariant tracks.
//!
//! Stability is detected empirically on finitely many orbits and reported
//! with the evidence; it is never claimed as a proof.

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::cone::PolyCone;
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::poly::{spectral_radius, SpectralRadius};
use crate::rational::{to_f64, Q};
use crate::surface::{is_loop, ExchangeMatrix, LabeledTriangulation, Step};
use crate::tracks::{enumerate_complete_tracks, follow_word, isomorphisms, transport_track, AChart, TrainTrack};
use crate::tropical::{check_word, x_follow, x_mutation_matrix, Sign, SignSequence};

/// A flip word with a final relabeling that returns the exchange matrix to
/// itself. `power` records that the word presents `φ^power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationLoop {
    base: LabeledTriangulation,
    word: Vec<Step>,
    power: usize,
    matrices: Vec<ExchangeMatrix>,
}

impl MutationLoop {
    pub fn new(base: LabeledTriangulation, word: Vec<Step>, power: usize) -> Result<Self> {
        if power == 0 {
            return Err(Error::LoopInvalid("power must be positive".into()));
        }
        check_word(&word, base.num_arcs()).map_err(|e| Error::LoopInvalid(e.to_string()))?;
        if !is_loop(&word, &base)? {
            return Err(Error::LoopInvalid("the word does not return the exchange matrix to itself".into()));
        }
        let mut b = base.exchange_matrix();
        let mut matrices = vec![b.clone()];
        for step in &word {
            b = match step {
                Step::Flip(k) => b.mutate(*k),
                Step::Perm(s) => b.permute(s),
            };
            matrices.push(b.clone());
        }
        Ok(MutationLoop { base, word, power, matrices })
    }

    pub fn base(&self) -> &LabeledTriangulation {
        &self.base
    }

    pub fn word(&self) -> &[Step] {
        &self.word
    }

    pub fn power(&self) -> usize {
        self.power
    }

    /// Exchange matrix before each step, and after the last.
    pub fn exchange_matrices(&self) -> &[ExchangeMatrix] {
        &self.matrices
    }

    /// Number of flips, the length of a sign word.
    pub fn num_flips(&self) -> usize {
        self.word.iter().filter(|s| matches!(s, Step::Flip(_))).count()
    }

    pub fn dim(&self) -> usize {
        self.base.num_arcs()
    }

    /// The word repeated `r` times, presenting `φ^(power * r)`.
    pub fn repeat(&self, r: usize) -> Result<MutationLoop> {
        let word = (0..r).flat_map(|_| self.word.iter().cloned()).collect();
        MutationLoop::new(self.base.clone(), word, self.power * r)
    }

    /// One application to an `X`-point with the sign of the path.
    pub fn apply(&self, w: &[Q]) -> (Vec<Q>, SignSequence) {
        let (x, _, signs) = x_follow(&self.word, w, &self.matrices[0]);
        (x, signs)
    }
}

/// `w, φ(w), ..., φ^n(w)`.
pub fn iterate_loop(lp: &MutationLoop, w: &[Q], n: usize) -> Vec<Vec<Q>> {
    let mut out = vec![w.to_vec()];
    for _ in 0..n {
        let next = lp.apply(out.last().map(Vec::as_slice).unwrap_or(w)).0;
        out.push(next);
    }
    out
}

/// Frozen-sign linear map of the loop.
pub fn presentation_matrix(lp: &MutationLoop, eps: &SignSequence) -> Result<QMatrix> {
    Ok(sign_pieces(lp, eps)?.0)
}

/// Presentation matrix together with the cone `C^ε` where the sign of the
/// path is `ε` (weakly).
fn sign_pieces(lp: &MutationLoop, eps: &SignSequence) -> Result<(QMatrix, PolyCone)> {
    if eps.len() != lp.num_flips() {
        return Err(Error::InvalidInput(format!("sign word has length {}, expected {}", eps.len(), lp.num_flips())));
    }
    let n = lp.dim();
    let mut m = QMatrix::identity(n);
    let mut ineqs = Vec::new();
    let mut signs = eps.0.iter();
    for (step, b) in lp.word.iter().zip(&lp.matrices) {
        match step {
            Step::Flip(k) => {
                let s = *signs.next().unwrap_or(&Sign::Zero);
                let row: Vec<Q> = m.row(*k).to_vec();
                let f = Q::from_integer(s.as_i64().into());
                ineqs.push(row.iter().map(|x| x * &f).collect());
                m = x_mutation_matrix(b, *k, s).mul(&m);
            }
            Step::Perm(sigma) => {
                let mut p = QMatrix::zeros(n, n);
                for (i, &j) in sigma.iter().enumerate() {
                    p.set(j, i, Q::from_integer(1.into()));
                }
                m = p.mul(&m);
            }
        }
    }
    Ok((m, PolyCone::new(n, Vec::new(), ineqs)))
}

/// The cone `C^ε` of points whose path sign is `ε` up to zeros.
pub fn sign_cone(lp: &MutationLoop, eps: &SignSequence) -> Result<PolyCone> {
    Ok(sign_pieces(lp, eps)?.1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Stable,
    UnstableEvidence,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Stable => "stable",
            Verdict::UnstableEvidence => "unstable-evidence",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct StabilityOptions {
    pub max_iter: usize,
    /// Number of trailing iterations that must share one strict sign.
    pub window: usize,
}

impl Default for StabilityOptions {
    fn default() -> Self {
        StabilityOptions { max_iter: 30, window: 5 }
    }
}

/// Sign history of one sampled orbit.
#[derive(Clone, Debug)]
pub struct OrbitSigns {
    pub sample: Vec<Q>,
    /// Sign of the path at `φ^n(w)` for `n = 0..max_iter`.
    pub signs: Vec<SignSequence>,
    /// First index from which the sign is the final one, when it settled.
    pub n0: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct StabilityReport {
    pub verdict: Verdict,
    pub reason: String,
    pub stable_sign: Option<SignSequence>,
    pub orbits: Vec<OrbitSigns>,
    pub presentation: Option<QMatrix>,
    pub cone: Option<PolyCone>,
    pub spectral: Option<SpectralRadius>,
    /// Index of a sample witnessing instability or persistent zeros.
    pub offending: Option<usize>,
    pub power: usize,
}

impl StabilityReport {
    pub fn n0(&self) -> Vec<Option<usize>> {
        self.orbits.iter().map(|o| o.n0).collect()
    }
}

/// All `±e_i`.
pub fn unit_samples(n: usize) -> Vec<Vec<Q>> {
    let mut out = Vec::new();
    for i in 0..n {
        for s in [1, -1] {
            let mut v = vec![Q::zero(); n];
            v[i] = Q::from_integer(s.into());
            out.push(v);
        }
    }
    out
}

fn orbit_signs(lp: &MutationLoop, w: &[Q], max_iter: usize) -> OrbitSigns {
    let mut x = w.to_vec();
    let mut signs = Vec::with_capacity(max_iter);
    for _ in 0..max_iter {
        let (y, s) = lp.apply(&x);
        signs.push(s);
        x = y;
    }
    let n0 = signs.last().map(|last| {
        let mut n = signs.len();
        while n > 0 && signs[n - 1] == *last {
            n -= 1;
        }
        n
    });
    OrbitSigns { sample: w.to_vec(), signs, n0 }
}

/// Empirical sign-stability test on the given samples (the unit vectors
/// when empty).
pub fn detect_sign_stability(lp: &MutationLoop, samples: &[Vec<Q>], opts: &StabilityOptions) -> Result<StabilityReport> {
    let n = lp.dim();
    let mut report = StabilityReport {
        verdict: Verdict::Inconclusive,
        reason: String::new(),
        stable_sign: None,
        orbits: Vec::new(),
        presentation: None,
        cone: None,
        spectral: None,
        offending: None,
        power: lp.power,
    };
    if lp.num_flips() == 0 {
        report.reason = "no horizontal edges".into();
        return Ok(report);
    }
    let samples: Vec<Vec<Q>> = if samples.is_empty() { unit_samples(n) } else { samples.to_vec() };
    for (i, s) in samples.iter().enumerate() {
        if s.len() != n || s.iter().all(Zero::is_zero) {
            return Err(Error::InvalidInput(format!("sample {i} is not a nonzero point of dimension {n}")));
        }
    }
    let window = opts.window.max(1);
    if opts.max_iter < window {
        return Err(Error::InvalidInput("max_iter is smaller than the window".into()));
    }
    report.orbits = samples.par_iter().map(|w| orbit_signs(lp, w, opts.max_iter)).collect();

    let mut candidate: Option<SignSequence> = None;
    let mut settled = true;
    for (i, o) in report.orbits.iter().enumerate() {
        let tail = &o.signs[o.signs.len() - window..];
        let zero_late = o.signs[opts.max_iter / 2..].iter().any(|s| !s.is_strict());
        if zero_late {
            report.verdict = Verdict::UnstableEvidence;
            report.reason = format!("zero sign recurs past iteration {} on sample {i}", opts.max_iter / 2);
            report.offending = Some(i);
            return Ok(report);
        }
        if tail.iter().any(|s| *s != tail[0]) {
            settled = false;
            report.offending.get_or_insert(i);
            continue;
        }
        match &candidate {
            None => candidate = Some(tail[0].clone()),
            Some(c) if *c != tail[0] => {
                report.verdict = Verdict::UnstableEvidence;
                report.reason = format!("samples settle on different signs {c} and {}", tail[0]);
                report.offending = Some(i);
                return Ok(report);
            }
            Some(_) => {}
        }
    }
    if !settled {
        report.reason = format!("sign word did not settle within {} iterations", opts.max_iter);
        return Ok(report);
    }
    let eps = candidate.ok_or_else(|| Error::InvalidInput("no samples".into()))?;
    let (e, cone) = sign_pieces(lp, &eps)?;
    if !cone.is_full_dimensional() {
        report.reason = format!("cone of sign {eps} is not full-dimensional");
        return Ok(report);
    }
    report.verdict = Verdict::Stable;
    report.reason = format!("all samples settle on {eps}");
    report.spectral = Some(spectral_radius(&e));
    report.presentation = Some(e);
    report.cone = Some(cone);
    report.stable_sign = Some(eps);
    Ok(report)
}

/// Tries `φ, φ^2, ..., φ^max_power` and returns the first stable report,
/// or the report for `φ` when none is stable.
pub fn detect_with_powers(
    lp: &MutationLoop,
    samples: &[Vec<Q>],
    opts: &StabilityOptions,
    max_power: usize,
) -> Result<(MutationLoop, StabilityReport)> {
    let first = detect_sign_stability(lp, samples, opts)?;
    if first.verdict == Verdict::Stable || lp.num_flips() == 0 {
        return Ok((lp.clone(), first));
    }
    for r in 2..=max_power {
        let lr = lp.repeat(r)?;
        let rep = detect_sign_stability(&lr, samples, opts)?;
        if rep.verdict == Verdict::Stable {
            return Ok((lr, rep));
        }
    }
    Ok((lp.clone(), first))
}

#[derive(Clone, Debug)]
pub struct Entropy {
    pub spectral: SpectralRadius,
    /// `log ρ / power`.
    pub value: f64,
    pub power: usize,
}

/// Entropy from a stable report.
pub fn entropy(report: &StabilityReport) -> Result<Entropy> {
    if report.verdict != Verdict::Stable {
        return Err(Error::NotStable);
    }
    let spectral = report.spectral.clone().ok_or(Error::NotStable)?;
    let value = spectral.value().ln() / report.power as f64;
    Ok(Entropy { spectral, value, power: report.power })
}

/// `log‖φ^n(w)‖ - log‖φ^(n-1)(w)‖` with the Euclidean norm, divided by
/// the loop power.
pub fn orbit_growth_rate(lp: &MutationLoop, w: &[Q], n: usize) -> f64 {
    let orbit = iterate_loop(lp, w, n.max(1));
    let norm = |v: &[Q]| v.iter().map(|x| to_f64(x).powi(2)).sum::<f64>().sqrt().ln();
    (norm(&orbit[orbit.len() - 1]) - norm(&orbit[orbit.len() - 2])) / lp.power as f64
}

#[derive(Clone, Debug)]
pub struct BoundedStability {
    /// `Some(true)` when the intersection became stationary.
    pub bounded: Option<bool>,
    pub cone: PolyCone,
    /// Number of preimages intersected.
    pub steps: usize,
}

/// Intersects `φ^{-n}(C^ε)` for `n = 0, 1, ...` until the cone stops
/// changing or `n_max` preimages were taken.
pub fn check_bounded_stability(lp: &MutationLoop, report: &StabilityReport, n_max: usize) -> Result<BoundedStability> {
    if report.verdict != Verdict::Stable {
        return Err(Error::NotStable);
    }
    let eps = report.stable_sign.as_ref().ok_or(Error::NotStable)?;
    let (e, base) = sign_pieces(lp, eps)?;
    let mut cone = base.clone();
    let mut power = QMatrix::identity(lp.dim());
    for step in 1..=n_max {
        power = e.mul(&power);
        let next = cone.intersect(&base.preimage(&power));
        if next.same_set(&cone) {
            return Ok(BoundedStability { bounded: Some(true), cone, steps: step });
        }
        cone = next;
    }
    Ok(BoundedStability { bounded: None, cone, steps: n_max })
}

#[derive(Clone, Debug)]
pub struct InvariantTrack {
    pub track: TrainTrack,
    /// Transition matrix on measures of `track`.
    pub matrix: QMatrix,
    pub spectral: SpectralRadius,
    /// Whether the ensemble image of the track cone lies in the given cone,
    /// evaluated on generators. `None` when no cone was supplied.
    pub probe: Option<bool>,
}

/// Searches the complete tracks of the base triangulation for one that the
/// loop carries into itself.
pub fn find_invariant_track(lp: &MutationLoop, probe_cone: Option<&PolyCone>) -> Result<Option<InvariantTrack>> {
    let base = &lp.base;
    let name = "base";
    for (track, _) in enumerate_complete_tracks(base, name) {
        let chart = AChart::new(base, &track)?;
        let reference = match chart.measure.positive_measure() {
            Some(r) => r,
            None => continue,
        };
        let carried = match follow_word(base, &track, &lp.word, Some(&reference)) {
            Ok(c) => c,
            Err(Error::NotCarried(_)) => continue,
            Err(e) => return Err(e),
        };
        for c in carried.into_iter().filter(|c| c.carried) {
            for iso in isomorphisms(&c.end_triangulation, base) {
                let (moved, p) = transport_track(&c.end_triangulation, base, &iso, &c.end, name)?;
                if moved.masks() != track.masks() {
                    continue;
                }
                let m = p.mul(&c.matrix);
                if !chart.measure.cone.maps_into(&m, &chart.measure.cone) {
                    continue;
                }
                let probe = probe_cone.map(|cone| {
                    let ens = base.exchange_matrix().to_qmatrix().mul(&chart.a_from_measure_matrix());
                    chart.measure.generators().iter().all(|g| cone.contains_point(&ens.mul_vec(g)))
                });
                return Ok(Some(InvariantTrack { track, spectral: spectral_radius(&m), matrix: m, probe }));
            }
        }
    }
    Ok(None)
}

/// Nonnegative entries only.
pub fn is_nonnegative(m: &QMatrix) -> bool {
    m.to_rows().iter().flatten().all(|x| !x.is_negative())
}
