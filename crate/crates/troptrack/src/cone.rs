//! Rational polyhedral cones in H-representation.
//!
//! A cone is `{x : e.x = 0 for e in eqs, g.x >= 0 for g in ineqs}`. Every
//! decision is made by the exact simplex of [`crate::lp`].

use num_traits::{One, Signed, Zero};

use crate::linalg::QMatrix;
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::rational::{dot, primitive, Q};

/// Homogeneous polyhedral cone in `Q^dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyCone {
    pub dim: usize,
    pub eqs: Vec<Vec<Q>>,
    pub ineqs: Vec<Vec<Q>>,
}

impl PolyCone {
    /// The whole space.
    pub fn full(dim: usize) -> Self {
        PolyCone { dim, eqs: Vec::new(), ineqs: Vec::new() }
    }

    pub fn new(dim: usize, eqs: Vec<Vec<Q>>, ineqs: Vec<Vec<Q>>) -> Self {
        assert!(eqs.iter().chain(&ineqs).all(|r| r.len() == dim), "row width");
        PolyCone { dim, eqs, ineqs }
    }

    /// Membership test.
    pub fn contains_point(&self, x: &[Q]) -> bool {
        self.eqs.iter().all(|e| dot(e, x).is_zero()) && self.ineqs.iter().all(|g| !dot(g, x).is_negative())
    }

    /// Membership with every inequality in `strict` strictly positive.
    pub fn contains_strictly(&self, x: &[Q], strict: &[Vec<Q>]) -> bool {
        self.contains_point(x) && strict.iter().all(|g| dot(g, x).is_positive())
    }

    fn base_program(&self, extra: usize) -> LinearProgram {
        let mut lp = LinearProgram::new(self.dim + extra);
        let pad = |r: &Vec<Q>| {
            let mut v = r.clone();
            v.resize(self.dim + extra, Q::zero());
            v
        };
        for e in &self.eqs {
            lp.constrain(pad(e), Relation::Eq, Q::zero());
        }
        for g in &self.ineqs {
            lp.constrain(pad(g), Relation::Ge, Q::zero());
        }
        lp
    }

    /// A point where every row of `strict` is positive, if one exists.
    pub fn strict_point(&self, strict: &[Vec<Q>]) -> Option<Vec<Q>> {
        if strict.is_empty() {
            return Some(vec![Q::zero(); self.dim]);
        }
        let mut lp = self.base_program(1);
        let t = self.dim;
        for g in strict {
            let mut v = g.clone();
            v.push(-Q::one());
            lp.constrain(v, Relation::Ge, Q::zero());
        }
        let mut cap = vec![Q::zero(); self.dim + 1];
        cap[t] = Q::one();
        lp.constrain(cap.clone(), Relation::Le, Q::one());
        match lp.maximize(&cap) {
            LpOutcome::Optimal { value, mut point } if value.is_positive() => {
                point.truncate(self.dim);
                Some(point)
            }
            _ => None,
        }
    }

    /// A point strictly inside every inequality, if one exists.
    pub fn interior_point(&self) -> Option<Vec<Q>> {
        self.strict_point(&self.ineqs)
    }

    /// Minimum of `f` over the cone: `Some(0)` when bounded, `None` when unbounded below.
    pub fn min_linear(&self, f: &[Q]) -> Option<Q> {
        match self.base_program(0).minimize(f) {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    /// True when `f >= 0` on the whole cone.
    pub fn implies_nonneg(&self, f: &[Q]) -> bool {
        self.min_linear(f).is_some()
    }

    /// True when `f = 0` on the whole cone.
    pub fn implies_zero(&self, f: &[Q]) -> bool {
        let neg: Vec<Q> = f.iter().map(|x| -x).collect();
        self.implies_nonneg(f) && self.implies_nonneg(&neg)
    }

    /// Maximizes `sum t_i` subject to `g_i.x >= t_i` and `0 <= t_i <= 1`.
    /// At an optimum `t_i = 1` exactly for the inequalities that are not
    /// implicit equalities, since the cone is closed under addition.
    fn relint_program(&self) -> (Vec<usize>, Vec<Q>) {
        let m = self.ineqs.len();
        if m == 0 {
            return (Vec::new(), vec![Q::zero(); self.dim]);
        }
        let mut lp = LinearProgram::new(self.dim + m);
        let pad = |r: &Vec<Q>| {
            let mut v = r.clone();
            v.resize(self.dim + m, Q::zero());
            v
        };
        for e in &self.eqs {
            lp.constrain(pad(e), Relation::Eq, Q::zero());
        }
        for (i, g) in self.ineqs.iter().enumerate() {
            let mut v = pad(g);
            v[self.dim + i] = -Q::one();
            lp.constrain(v, Relation::Ge, Q::zero());
            let mut cap = vec![Q::zero(); self.dim + m];
            cap[self.dim + i] = Q::one();
            lp.constrain(cap, Relation::Le, Q::one());
            lp.set_nonneg(self.dim + i);
        }
        let mut obj = vec![Q::zero(); self.dim + m];
        for x in obj.iter_mut().skip(self.dim) {
            *x = Q::one();
        }
        match lp.maximize(&obj) {
            LpOutcome::Optimal { mut point, .. } => {
                let implicit = (0..m).filter(|&i| point[self.dim + i].is_zero()).collect();
                point.truncate(self.dim);
                (implicit, point)
            }
            // The origin is always feasible and the objective is bounded.
            _ => ((0..m).collect(), vec![Q::zero(); self.dim]),
        }
    }

    /// Inequalities that hold with equality on the whole cone.
    pub fn implicit_equalities(&self) -> Vec<usize> {
        self.relint_program().0
    }

    /// Dimension of the linear span of the cone.
    pub fn dimension(&self) -> usize {
        let implicit = self.implicit_equalities();
        let mut rows: Vec<Vec<Q>> = self.eqs.clone();
        rows.extend(implicit.iter().map(|&i| self.ineqs[i].clone()));
        if rows.is_empty() {
            return self.dim;
        }
        self.dim - QMatrix::from_rows(rows).rank()
    }

    /// A point in the relative interior.
    pub fn relint_point(&self) -> Option<Vec<Q>> {
        Some(self.relint_program().1)
    }

    /// True when the cone has nonempty interior in `Q^dim`.
    pub fn is_full_dimensional(&self) -> bool {
        self.dimension() == self.dim
    }

    /// `other` is a subset of `self`.
    pub fn contains_cone(&self, other: &PolyCone) -> bool {
        assert_eq!(self.dim, other.dim);
        other.generators().maps_into(&QMatrix::identity(self.dim), self)
    }

    /// Set equality.
    pub fn same_set(&self, other: &PolyCone) -> bool {
        self.contains_cone(other) && other.contains_cone(self)
    }

    pub fn intersect(&self, other: &PolyCone) -> PolyCone {
        assert_eq!(self.dim, other.dim);
        let mut eqs = self.eqs.clone();
        eqs.extend(other.eqs.iter().cloned());
        let mut ineqs = self.ineqs.clone();
        ineqs.extend(other.ineqs.iter().cloned());
        PolyCone { dim: self.dim, eqs, ineqs }
    }

    /// `{x : m x in self}` for a matrix with `self.dim` rows.
    pub fn preimage(&self, m: &QMatrix) -> PolyCone {
        assert_eq!(m.rows(), self.dim);
        PolyCone {
            dim: m.cols(),
            eqs: self.eqs.iter().map(|e| m.vec_mul(e)).collect(),
            ineqs: self.ineqs.iter().map(|g| m.vec_mul(g)).collect(),
        }
    }

    /// True when the interiors of two full-dimensional cones meet.
    pub fn interiors_meet(&self, other: &PolyCone) -> bool {
        let both = self.intersect(other);
        both.eqs.is_empty() && both.interior_point().is_some()
    }

    /// `self` maps into `target` under `m` (so `m(self)` is a subset of `target`).
    pub fn maps_into(&self, m: &QMatrix, target: &PolyCone) -> bool {
        self.generators().maps_into(m, target)
    }

    /// Irredundant inequalities of a full-dimensional cone as primitive
    /// integer normals, sorted and deduplicated.
    pub fn facets(&self) -> Vec<Vec<Q>> {
        let mut rows: Vec<Vec<Q>> = self.ineqs.iter().filter(|g| g.iter().any(|x| !x.is_zero())).map(|g| primitive(g)).collect();
        rows.sort();
        rows.dedup();
        let mut i = 0;
        while i < rows.len() {
            let rest: Vec<Vec<Q>> = rows.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, r)| r.clone()).collect();
            let without = PolyCone { dim: self.dim, eqs: self.eqs.clone(), ineqs: rest };
            if without.implies_nonneg(&rows[i]) {
                rows.remove(i);
            } else {
                i += 1;
            }
        }
        rows
    }

    /// Lineality basis and extreme rays modulo lineality, as primitive
    /// integer vectors; together they generate the cone.
    pub fn generators(&self) -> Generators {
        let span = if self.eqs.is_empty() {
            QMatrix::identity(self.dim).to_rows()
        } else {
            QMatrix::from_rows(self.eqs.clone()).nullspace()
        };
        if span.is_empty() {
            return Generators { lineality: Vec::new(), rays: Vec::new() };
        }
        // Columns of `basis` span the equality subspace; y are coordinates in it.
        let basis = QMatrix::from_rows(span).transpose();
        let reduced: Vec<Vec<Q>> = self
            .ineqs
            .iter()
            .map(|g| basis.vec_mul(g))
            .filter(|g| g.iter().any(|x| !x.is_zero()))
            .collect();
        let (lineality, rays) = double_description(basis.cols(), &reduced);
        let lift = |v: Vec<Vec<Q>>| {
            let mut out: Vec<Vec<Q>> = v.iter().map(|y| primitive(&basis.mul_vec(y))).collect();
            out.sort();
            out.dedup();
            out
        };
        Generators { lineality: lift(lineality), rays: lift(rays) }
    }

    /// Extreme rays of a pointed cone as primitive integer vectors, sorted.
    ///
    /// A lineality space is reported as `±` its basis vectors.
    pub fn extreme_rays(&self) -> Vec<Vec<Q>> {
        let g = self.generators();
        let mut out = g.rays;
        for l in g.lineality {
            out.push(l.iter().map(|v| -v).collect());
            out.push(l);
        }
        out.sort();
        out.dedup();
        out
    }
}

/// Finite generators of a polyhedral cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generators {
    pub lineality: Vec<Vec<Q>>,
    pub rays: Vec<Vec<Q>>,
}

impl Generators {
    /// `f >= 0` on the generated cone.
    pub fn implies_nonneg(&self, f: &[Q]) -> bool {
        self.lineality.iter().all(|l| dot(f, l).is_zero()) && self.rays.iter().all(|r| !dot(f, r).is_negative())
    }

    /// The image of the generated cone under `m` lies in `target`.
    pub fn maps_into(&self, m: &QMatrix, target: &PolyCone) -> bool {
        let neg = |v: Vec<Q>| v.iter().map(|x| -x).collect::<Vec<Q>>();
        self.rays.iter().all(|r| target.contains_point(&m.mul_vec(r)))
            && self.lineality.iter().all(|l| {
                let x = m.mul_vec(l);
                target.contains_point(&x) && target.contains_point(&neg(x))
            })
    }
}

/// Motzkin double description of `{y : g y >= 0 for g in ineqs}`:
/// returns a lineality basis and the extreme rays modulo lineality.
fn double_description(r: usize, ineqs: &[Vec<Q>]) -> (Vec<Vec<Q>>, Vec<Vec<Q>>) {
    let mut lineality: Vec<Vec<Q>> = QMatrix::identity(r).to_rows();
    // Each ray carries the indices of processed inequalities tight at it.
    let mut rays: Vec<(Vec<Q>, Vec<usize>)> = Vec::new();
    for (gi, g) in ineqs.iter().enumerate() {
        if let Some(p) = lineality.iter().position(|l| !dot(g, l).is_zero()) {
            let mut l = lineality.swap_remove(p);
            let gl = dot(g, &l);
            if gl.is_negative() {
                l = l.iter().map(|v| -v).collect();
            }
            let gl = gl.abs();
            let project = |v: &[Q]| {
                let c = dot(g, v) / &gl;
                primitive(&v.iter().zip(&l).map(|(x, y)| x - y * &c).collect::<Vec<Q>>())
            };
            lineality = lineality.iter().map(|v| project(v)).collect();
            for ray in rays.iter_mut() {
                ray.0 = project(&ray.0);
                ray.1.push(gi);
            }
            // `l` was orthogonal to every processed inequality.
            rays.push((l, (0..gi).collect()));
            continue;
        }
        let vals: Vec<Q> = rays.iter().map(|(y, _)| dot(g, y)).collect();
        let mut next: Vec<(Vec<Q>, Vec<usize>)> = Vec::new();
        for (i, (y, tight)) in rays.iter().enumerate() {
            if vals[i].is_zero() {
                let mut t = tight.clone();
                t.push(gi);
                next.push((y.clone(), t));
            } else if vals[i].is_positive() {
                next.push((y.clone(), tight.clone()));
            }
        }
        let dim_needed = r - lineality.len();
        for (i, (p, tp)) in rays.iter().enumerate().filter(|(i, _)| vals[*i].is_positive()) {
            for (j, (n, tn)) in rays.iter().enumerate().filter(|(j, _)| vals[*j].is_negative()) {
                let common: Vec<usize> = tp.iter().copied().filter(|x| tn.contains(x)).collect();
                // Adjacent rays share at least dim - 2 tight constraints and
                // no third ray is tight on all of them.
                if common.len() + 2 < dim_needed {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(k, (_, tk))| k != i && k != j && common.iter().all(|c| tk.contains(c)));
                if blocked {
                    continue;
                }
                let y: Vec<Q> = p.iter().zip(n).map(|(a, b)| a * -&vals[j] + b * &vals[i]).collect();
                let mut t = common;
                t.push(gi);
                next.push((primitive(&y), t));
            }
        }
        rays = next;
    }
    (lineality, rays.into_iter().map(|x| x.0).collect())
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qvec;

    fn quadrant() -> PolyCone {
        PolyCone::new(2, vec![], vec![qvec(&[1, 0]), qvec(&[0, 1])])
    }

    #[test]
    fn quadrant_basics() {
        let c = quadrant();
        assert!(c.is_full_dimensional());
        assert_eq!(c.extreme_rays(), vec![qvec(&[0, 1]), qvec(&[1, 0])]);
        let p = c.interior_point().unwrap();
        assert!(p.iter().all(|x| x.is_positive()));
        assert!(c.implies_nonneg(&qvec(&[1, 1])));
        assert!(!c.implies_nonneg(&qvec(&[1, -1])));
    }

    #[test]
    fn containment_and_dimension() {
        let big = quadrant();
        let thin = PolyCone::new(2, vec![qvec(&[1, -1])], vec![qvec(&[1, 0])]);
        assert!(big.contains_cone(&thin));
        assert!(!thin.contains_cone(&big));
        assert_eq!(thin.dimension(), 1);
        let flat = PolyCone::new(2, vec![], vec![qvec(&[1, -1]), qvec(&[-1, 1]), qvec(&[1, 0])]);
        assert_eq!(flat.dimension(), 1);
        assert!(flat.same_set(&thin));
        assert_eq!(flat.extreme_rays(), vec![qvec(&[1, 1])]);
        assert!(!big.interiors_meet(&PolyCone::new(2, vec![], vec![qvec(&[-1, 0])])));
    }

    #[test]
    fn subsets() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }

    /// Rays from every `r - 1` subset of tight inequalities.
    fn brute_rays(c: &PolyCone) -> Vec<Vec<Q>> {
        let span = if c.eqs.is_empty() { QMatrix::identity(c.dim).to_rows() } else { QMatrix::from_rows(c.eqs.clone()).nullspace() };
        let r = span.len();
        let basis = QMatrix::from_rows(span).transpose();
        let reduced: Vec<Vec<Q>> = c.ineqs.iter().map(|g| basis.vec_mul(g)).collect();
        let mut rays = Vec::new();
        for subset in combinations(reduced.len(), r - 1) {
            let ns = QMatrix::from_rows(subset.iter().map(|&i| reduced[i].clone()).collect()).nullspace();
            if ns.len() != 1 {
                continue;
            }
            for y in [ns[0].clone(), ns[0].iter().map(|v| -v).collect()] {
                if reduced.iter().all(|g| !dot(g, &y).is_negative()) {
                    rays.push(primitive(&basis.mul_vec(&y)));
                }
            }
        }
        rays.sort();
        rays.dedup();
        rays
    }

    proptest::proptest! {
        #[test]
        fn double_description_matches_brute_force(
            extra in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 4), 0..5),
            eq in proptest::option::of(proptest::collection::vec(-2i64..=2, 4)),
        ) {
            let mut ineqs: Vec<Vec<Q>> = (0..4).map(|i| { let mut v = vec![0; 4]; v[i] = 1; qvec(&v) }).collect();
            ineqs.extend(extra.iter().map(|v| qvec(v)));
            let eqs: Vec<Vec<Q>> = eq.into_iter().filter(|v| v.iter().any(|&x| x != 0)).map(|v| qvec(&v)).collect();
            let c = PolyCone::new(4, eqs, ineqs);
            if c.dimension() >= 2 {
                proptest::prop_assert_eq!(c.extreme_rays(), brute_rays(&c));
            }
        }
    }
}
