//! Measure cones of suited tracks and their charts in `A`-coordinates.
//!
//! On the linearity domain of a complete track the weights are linear in
//! `a`: a short branch at a corner at `p` carries `u_c(a) - w_p(a)` and the
//! long branch of an arc from `p` to `q` carries `-2 a - w_p - w_q`.

use num_traits::{Signed, Zero};

use super::{Branch, TrainTrack};
use crate::cone::PolyCone;
use crate::error::{Error, Result};
use crate::linalg::{independent_subset, QMatrix};
use crate::potential::{corner_forms, form_classes};
use crate::rational::{dot, Q};
use crate::surface::LabeledTriangulation;

/// The cone `V(τ)` of transverse measures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureCone {
    pub track: TrainTrack,
    pub branches: Vec<Branch>,
    /// Switch equalities and nonnegativity over `R^branches`.
    pub cone: PolyCone,
    /// Indices of the spanning subset used as chart coordinates.
    pub basis: Vec<usize>,
}

impl MeasureCone {
    pub fn new(tri: &LabeledTriangulation, track: &TrainTrack) -> Self {
        let branches = track.branches(tri);
        let m = branches.len();
        let index = |b: Branch| branches.iter().position(|x| *x == b).unwrap_or(0);
        let eqs: Vec<Vec<Q>> = track
            .switch_conditions(tri)
            .into_iter()
            .map(|(arc, two)| {
                let mut row = vec![Q::zero(); m];
                row[index(Branch::Long(arc))] += Q::from_integer(1.into());
                for c in two {
                    row[index(Branch::Short(c))] -= Q::from_integer(1.into());
                }
                row
            })
            .collect();
        let ineqs: Vec<Vec<Q>> = (0..m)
            .map(|i| {
                let mut row = vec![Q::zero(); m];
                row[i] = Q::from_integer(1.into());
                row
            })
            .collect();
        let span = if eqs.is_empty() { QMatrix::identity(m).to_rows() } else { QMatrix::from_rows(eqs.clone()).nullspace() };
        // Coordinate functionals restricted to the solution space of the switch conditions.
        let restricted: Vec<Vec<Q>> = (0..m).map(|b| span.iter().map(|v| v[b].clone()).collect()).collect();
        let basis = independent_subset(&restricted);
        MeasureCone { track: track.clone(), branches, cone: PolyCone::new(m, eqs, ineqs), basis }
    }

    pub fn num_branches(&self) -> usize {
        self.branches.len()
    }

    /// Dimension of the cone.
    pub fn dimension(&self) -> usize {
        self.cone.dimension()
    }

    pub fn index(&self, b: Branch) -> Option<usize> {
        self.branches.iter().position(|x| *x == b)
    }

    pub fn contains(&self, nu: &[Q]) -> bool {
        self.cone.contains_point(nu)
    }

    /// Measure positive on every branch.
    pub fn is_positive(&self, nu: &[Q]) -> bool {
        self.cone.contains_point(nu) && nu.iter().all(Signed::is_positive)
    }

    /// A measure positive on every branch, if the track is recurrent.
    pub fn positive_measure(&self) -> Option<Vec<Q>> {
        self.cone.interior_point()
    }

    /// Generators of the cone as primitive integer measures.
    pub fn generators(&self) -> Vec<Vec<Q>> {
        self.cone.extreme_rays()
    }
}

/// Linear chart between `A`-coordinates on a linearity domain and
/// measures on a complete track together with puncture parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AChart {
    pub measure: MeasureCone,
    /// Class choice of the domain.
    pub choice: Vec<usize>,
    /// Branch weights as linear forms in `a` (`|B| x n`).
    pub nu: QMatrix,
    /// Puncture values `w_p` as linear forms in `a` (`h x n`).
    pub w: QMatrix,
    /// Endpoints of every arc.
    endpoints: Vec<(usize, usize)>,
}

impl AChart {
    /// Chart of a track obtained from a linearity domain.
    pub fn new(tri: &LabeledTriangulation, track: &TrainTrack) -> Result<Self> {
        let choice = track
            .domain_choice(tri)
            .ok_or_else(|| Error::InvalidInput("track does not come from a linearity domain".into()))?;
        let classes = form_classes(tri);
        let n = tri.num_arcs();
        let w = QMatrix::from_i64(&choice.iter().enumerate().map(|(p, &c)| classes[p][c].coeffs.clone()).collect::<Vec<_>>());
        let measure = MeasureCone::new(tri, track);
        let endpoints: Vec<(usize, usize)> = (0..n).map(|a| tri.arc_endpoints(a)).collect();
        let forms = corner_forms(tri);
        let rows: Vec<Vec<Q>> = measure
            .branches
            .iter()
            .map(|b| match *b {
                Branch::Long(arc) => {
                    let (p, q) = endpoints[arc];
                    (0..n)
                        .map(|j| {
                            let base = if j == arc { Q::from_integer((-2).into()) } else { Q::zero() };
                            base - w.get(p, j) - w.get(q, j)
                        })
                        .collect()
                }
                Branch::Short(c) => {
                    let f = forms.iter().find(|f| f.corner == c).map(|f| f.coeffs.clone()).unwrap_or_default();
                    let p = tri.puncture_at(c);
                    (0..n).map(|j| Q::from_integer(f[j].into()) - w.get(p, j)).collect()
                }
            })
            .collect();
        Ok(AChart { measure, choice, nu: QMatrix::from_rows(rows), w, endpoints })
    }

    pub fn measure_of(&self, a: &[Q]) -> Vec<Q> {
        self.nu.mul_vec(a)
    }

    pub fn w_of(&self, a: &[Q]) -> Vec<Q> {
        self.w.mul_vec(a)
    }

    /// Reconstructs `a` from long-branch weights and puncture values.
    pub fn a_of(&self, nu: &[Q], w: &[Q]) -> Vec<Q> {
        let two = Q::from_integer(2.into());
        (0..self.endpoints.len())
            .map(|arc| {
                let (p, q) = self.endpoints[arc];
                let long = self.measure.index(Branch::Long(arc)).map(|i| nu[i].clone()).unwrap_or_default();
                -(long + &w[p] + &w[q]) / &two
            })
            .collect()
    }

    /// `a` with `w = 0` from a measure; linear map `n x |B|`.
    pub fn a_from_measure_matrix(&self) -> QMatrix {
        let n = self.endpoints.len();
        let mut m = QMatrix::zeros(n, self.measure.num_branches());
        for arc in 0..n {
            if let Some(i) = self.measure.index(Branch::Long(arc)) {
                m.set(arc, i, Q::new((-1).into(), 2.into()));
            }
        }
        m
    }

    /// The closed linearity domain in `A`-space.
    pub fn domain(&self) -> PolyCone {
        PolyCone::new(self.nu.cols(), Vec::new(), self.nu.to_rows())
    }

    /// `a` lies in the closed domain.
    pub fn contains(&self, a: &[Q]) -> bool {
        self.nu.to_rows().iter().all(|r| !dot(r, a).is_negative())
    }

    /// `a` lies in the open domain.
    pub fn interior_contains(&self, a: &[Q]) -> bool {
        self.nu.to_rows().iter().all(|r| dot(r, a).is_positive())
    }
}

/// Base change between `A`-coordinates and chart coordinates (weights on
/// the spanning subset followed by the puncture values).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartMap {
    pub basis: Vec<Branch>,
    pub forward: QMatrix,
    pub inverse: QMatrix,
}

/// The chart of a complete track.
pub fn chart_map(tri: &LabeledTriangulation, track: &TrainTrack) -> Result<ChartMap> {
    let chart = AChart::new(tri, track)?;
    let mut rows: Vec<Vec<Q>> = chart.measure.basis.iter().map(|&i| chart.nu.row(i).to_vec()).collect();
    rows.extend(chart.w.to_rows());
    let forward = QMatrix::from_rows(rows);
    if forward.rows() != forward.cols() {
        return Err(Error::InvalidInput("chart coordinates do not match the A-space dimension".into()));
    }
    let inverse = forward
        .inverse()
        .ok_or_else(|| Error::InvalidInput("chart coordinates are not independent".into()))?;
    let basis = chart.measure.basis.iter().map(|&i| chart.measure.branches[i]).collect();
    Ok(ChartMap { basis, forward, inverse })
}
