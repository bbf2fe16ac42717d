//! The tropicalized potential: one min of corner forms per puncture.
//!
//! The corner at puncture `p` in triangle `t` contributes the linear form
//! `a(opposite) - a(adjacent 1) - a(adjacent 2)`. Corners whose forms
//! coincide are grouped into a form class; linearity domains are indexed by
//! a choice of one class per puncture.

use num_traits::{Signed, Zero};

use crate::cone::PolyCone;
use crate::error::Result;
use crate::rational::{dot, Q};
use crate::surface::{CornerRef, LabeledTriangulation};
use crate::tropical::a_mutate;

/// The linear form of one corner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerForm {
    pub corner: CornerRef,
    pub puncture: usize,
    pub coeffs: Vec<i64>,
}

impl CornerForm {
    pub fn eval(&self, a: &[Q]) -> Q {
        eval_form(&self.coeffs, a)
    }
}

/// Corners at one puncture sharing the same linear form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormClass {
    pub coeffs: Vec<i64>,
    pub corners: Vec<CornerRef>,
}

pub(crate) fn eval_form(coeffs: &[i64], a: &[Q]) -> Q {
    coeffs
        .iter()
        .zip(a)
        .filter(|(c, _)| **c != 0)
        .map(|(c, x)| x * Q::from_integer((*c).into()))
        .sum()
}

pub(crate) fn form_vec(coeffs: &[i64]) -> Vec<Q> {
    coeffs.iter().map(|&c| Q::from_integer(c.into())).collect()
}

fn diff_vec(a: &[i64], b: &[i64]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| Q::from_integer((x - y).into())).collect()
}

/// Forms of every corner, in triangle order.
pub fn corner_forms(tri: &LabeledTriangulation) -> Vec<CornerForm> {
    let n = tri.num_arcs();
    tri.corners()
        .into_iter()
        .map(|c| {
            let mut coeffs = vec![0; n];
            coeffs[c.opposite] += 1;
            coeffs[c.adjacent[0]] -= 1;
            coeffs[c.adjacent[1]] -= 1;
            CornerForm { corner: c.at, puncture: c.puncture, coeffs }
        })
        .collect()
}

/// Form classes per puncture, each list in order of first corner.
pub fn form_classes(tri: &LabeledTriangulation) -> Vec<Vec<FormClass>> {
    let mut out: Vec<Vec<FormClass>> = vec![Vec::new(); tri.surface().num_punctures()];
    for f in corner_forms(tri) {
        let classes = &mut out[f.puncture];
        match classes.iter_mut().find(|c| c.coeffs == f.coeffs) {
            Some(c) => c.corners.push(f.corner),
            None => classes.push(FormClass { coeffs: f.coeffs, corners: vec![f.corner] }),
        }
    }
    out
}

/// Renders a form such as `a3 - a1 - a2` using arc labels.
pub fn format_form(tri: &LabeledTriangulation, coeffs: &[i64]) -> String {
    let mut terms: Vec<(i64, &str)> = Vec::new();
    for (i, &c) in coeffs.iter().enumerate() {
        if c != 0 {
            terms.push((c, tri.labels()[i].as_str()));
        }
    }
    terms.sort_by_key(|(c, _)| std::cmp::Reverse(c.signum()));
    let mut s = String::new();
    for (k, (c, l)) in terms.iter().enumerate() {
        let mag = c.abs();
        let coef = if mag == 1 { String::new() } else { format!("{mag}*") };
        match (k, c.signum()) {
            (0, 1) => s.push_str(&format!("{coef}a{l}")),
            (0, _) => s.push_str(&format!("-{coef}a{l}")),
            (_, 1) => s.push_str(&format!(" + {coef}a{l}")),
            _ => s.push_str(&format!(" - {coef}a{l}")),
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// Per-puncture values and minimizing corners.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PotentialValue {
    pub values: Vec<Q>,
    pub argmin: Vec<Vec<CornerRef>>,
}

/// Evaluates the tropical potential at cluster `A`-coordinates `a`.
pub fn tropical_potential(tri: &LabeledTriangulation, a: &[Q]) -> PotentialValue {
    let h = tri.surface().num_punctures();
    let mut values: Vec<Option<Q>> = vec![None; h];
    let mut argmin: Vec<Vec<CornerRef>> = vec![Vec::new(); h];
    for f in corner_forms(tri) {
        let v = f.eval(a);
        let p = f.puncture;
        match &values[p] {
            Some(m) if v > *m => {}
            Some(m) if v == *m => argmin[p].push(f.corner),
            _ => {
                values[p] = Some(v);
                argmin[p] = vec![f.corner];
            }
        }
    }
    PotentialValue { values: values.into_iter().map(Option::unwrap_or_default).collect(), argmin }
}

/// True when every puncture value vanishes.
pub fn is_in_v(tri: &LabeledTriangulation, a: &[Q]) -> bool {
    tropical_potential(tri, a).values.iter().all(Zero::is_zero)
}

/// The linearity domain containing a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainDescriptor {
    /// Class index per puncture when every minimum is attained by one class.
    pub choice: Option<Vec<usize>>,
    /// Minimizing class indices per puncture.
    pub argmin_classes: Vec<Vec<usize>>,
    pub boundary: bool,
}

/// Locates `a` among the linearity domains.
pub fn linearity_domain(tri: &LabeledTriangulation, a: &[Q]) -> DomainDescriptor {
    let classes = form_classes(tri);
    let argmin_classes: Vec<Vec<usize>> = classes
        .iter()
        .map(|cls| {
            let vals: Vec<Q> = cls.iter().map(|c| eval_form(&c.coeffs, a)).collect();
            let m = vals.iter().min().cloned().unwrap_or_default();
            (0..cls.len()).filter(|&i| vals[i] == m).collect()
        })
        .collect();
    let boundary = argmin_classes.iter().any(|s| s.len() > 1);
    let choice = (!boundary).then(|| argmin_classes.iter().map(|s| s[0]).collect());
    DomainDescriptor { choice, argmin_classes, boundary }
}

/// A full-dimensional domain of linearity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domain {
    /// Class index per puncture.
    pub choice: Vec<usize>,
    /// Closed cone where the chosen classes attain every minimum.
    pub cone: PolyCone,
    /// A point where every non-chosen form is strictly larger.
    pub interior: Vec<Q>,
}

fn choice_rows(classes: &[Vec<FormClass>], choice: &[usize]) -> Vec<Vec<Q>> {
    let mut rows = Vec::new();
    for (p, &c) in choice.iter().enumerate() {
        for (j, other) in classes[p].iter().enumerate() {
            if j != c {
                rows.push(diff_vec(&other.coeffs, &classes[p][c].coeffs));
            }
        }
    }
    rows
}

/// Closed domain cone of a class choice in the ambient `A`-space.
pub fn domain_cone(tri: &LabeledTriangulation, choice: &[usize]) -> PolyCone {
    let classes = form_classes(tri);
    PolyCone::new(tri.num_arcs(), Vec::new(), choice_rows(&classes, choice))
}

/// Domain cone intersected with `w = 0`.
pub fn domain_cone_on_v(tri: &LabeledTriangulation, choice: &[usize]) -> PolyCone {
    let classes = form_classes(tri);
    let eqs = choice.iter().enumerate().map(|(p, &c)| form_vec(&classes[p][c].coeffs)).collect();
    PolyCone::new(tri.num_arcs(), eqs, choice_rows(&classes, choice))
}

fn search(
    n: usize,
    classes: &[Vec<FormClass>],
    on_v: bool,
    prefix: &mut Vec<usize>,
    out: &mut Vec<(Vec<usize>, Vec<Q>)>,
) {
    let eqs: Vec<Vec<Q>> = if on_v {
        prefix.iter().enumerate().map(|(p, &c)| form_vec(&classes[p][c].coeffs)).collect()
    } else {
        Vec::new()
    };
    let strict = choice_rows(classes, prefix);
    let Some(point) = PolyCone::new(n, eqs, Vec::new()).strict_point(&strict) else {
        return;
    };
    if prefix.len() == classes.len() {
        out.push((prefix.clone(), point));
        return;
    }
    for c in 0..classes[prefix.len()].len() {
        prefix.push(c);
        search(n, classes, on_v, prefix, out);
        prefix.pop();
    }
}

fn enumerate(tri: &LabeledTriangulation, on_v: bool) -> Vec<Domain> {
    let classes = form_classes(tri);
    let mut found = Vec::new();
    search(tri.num_arcs(), &classes, on_v, &mut Vec::new(), &mut found);
    found
        .into_iter()
        .map(|(choice, interior)| {
            let cone = if on_v { domain_cone_on_v(tri, &choice) } else { domain_cone(tri, &choice) };
            Domain { choice, cone, interior }
        })
        .collect()
}

/// Full-dimensional linearity domains in the ambient `A`-space, in
/// lexicographic order of class choices.
pub fn enumerate_domains(tri: &LabeledTriangulation) -> Vec<Domain> {
    enumerate(tri, false)
}

/// Linearity domains restricted to `w = 0` that have a relatively interior
/// point (every non-chosen form strictly positive).
pub fn enumerate_domains_on_v(tri: &LabeledTriangulation) -> Vec<Domain> {
    enumerate(tri, true)
}

/// True when the potential agrees with its value after a flip at `k`.
pub fn potential_chart_invariance(tri: &LabeledTriangulation, k: usize, a: &[Q]) -> Result<bool> {
    let flipped = tri.flip(k)?;
    let a2 = a_mutate(a, &tri.exchange_matrix(), k);
    Ok(tropical_potential(tri, a).values == tropical_potential(&flipped, &a2).values)
}

/// Wall normals of a domain: primitive facet normals up to sign.
pub fn wall_normals(domain: &Domain) -> Vec<Vec<Q>> {
    let mut out: Vec<Vec<Q>> = domain
        .cone
        .facets()
        .into_iter()
        .map(|f| match f.iter().find(|x| !x.is_zero()) {
            Some(x) if x.is_negative() => f.iter().map(|y| -y).collect(),
            _ => f,
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Interior test: `a` lies in the open domain of `choice`.
pub fn in_open_domain(tri: &LabeledTriangulation, choice: &[usize], a: &[Q]) -> bool {
    let classes = form_classes(tri);
    choice_rows(&classes, choice).iter().all(|g| dot(g, a).is_positive())
}
