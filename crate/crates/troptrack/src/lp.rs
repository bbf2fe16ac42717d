//! Exact two-phase simplex over the rationals.
//!
//! Pricing is Dantzig's rule, falling back to Bland's rule on runs of
//! degenerate pivots, so the method terminates on degenerate problems.

use num_traits::{One, Signed, Zero};

use crate::rational::Q;

/// Relation of a linear constraint to its right-hand side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// Result of an optimization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Q, point: Vec<Q> },
    Infeasible,
    Unbounded,
}

/// A linear program `max c.x` subject to linear constraints.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    nvars: usize,
    nonneg: Vec<bool>,
    rows: Vec<(Vec<Q>, Relation, Q)>,
}

impl LinearProgram {
    /// Program over `nvars` free variables.
    pub fn new(nvars: usize) -> Self {
        LinearProgram { nvars, nonneg: vec![false; nvars], rows: Vec::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Declares variable `i` nonnegative.
    pub fn set_nonneg(&mut self, i: usize) {
        self.nonneg[i] = true;
    }

    /// Adds `coeffs . x  rel  rhs`.
    pub fn constrain(&mut self, coeffs: Vec<Q>, rel: Relation, rhs: Q) {
        assert_eq!(coeffs.len(), self.nvars, "constraint width");
        self.rows.push((coeffs, rel, rhs));
    }

    /// Maximizes `objective . x`.
    pub fn maximize(&self, objective: &[Q]) -> LpOutcome {
        assert_eq!(objective.len(), self.nvars, "objective width");
        Tableau::build(self).solve(self, objective)
    }

    /// Minimizes `objective . x`.
    pub fn minimize(&self, objective: &[Q]) -> LpOutcome {
        let neg: Vec<Q> = objective.iter().map(|x| -x).collect();
        match self.maximize(&neg) {
            LpOutcome::Optimal { value, point } => LpOutcome::Optimal { value: -value, point },
            other => other,
        }
    }

    /// Any feasible point.
    pub fn feasible_point(&self) -> Option<Vec<Q>> {
        match self.maximize(&vec![Q::zero(); self.nvars]) {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

struct Tableau {
    /// Constraint rows; the last entry of each row is the right-hand side.
    t: Vec<Vec<Q>>,
    basis: Vec<usize>,
    /// Column index of the first artificial variable.
    art: usize,
    /// For each original variable, its positive and optional negative column.
    cols: Vec<(usize, Option<usize>)>,
    /// Row length including the right-hand side.
    w: usize,
}

impl Tableau {
    /// Rows are normalized to a nonnegative right-hand side. A `<=` row then
    /// starts with its slack in the basis; only the others get an artificial.
    fn build(lp: &LinearProgram) -> Tableau {
        let mut cols = Vec::with_capacity(lp.nvars);
        let mut next = 0;
        for i in 0..lp.nvars {
            if lp.nonneg[i] {
                cols.push((next, None));
                next += 1;
            } else {
                cols.push((next, Some(next + 1)));
                next += 2;
            }
        }
        let normalized: Vec<(bool, Relation)> = lp
            .rows
            .iter()
            .map(|(_, rel, rhs)| {
                let flip = rhs.is_negative() || (rhs.is_zero() && *rel == Relation::Ge);
                let rel = match (rel, flip) {
                    (Relation::Le, true) => Relation::Ge,
                    (Relation::Ge, true) => Relation::Le,
                    (r, _) => *r,
                };
                (flip, rel)
            })
            .collect();
        let nslack = normalized.iter().filter(|r| r.1 != Relation::Eq).count();
        let nart = normalized.iter().filter(|r| r.1 != Relation::Le).count();
        let art = next + nslack;
        let width = art + nart + 1;
        let mut t = Vec::with_capacity(lp.rows.len());
        let mut basis = Vec::with_capacity(lp.rows.len());
        let mut slack = next;
        let mut artificial = art;
        for ((coeffs, _, rhs), &(flip, rel)) in lp.rows.iter().zip(&normalized) {
            let mut row = vec![Q::zero(); width];
            for (v, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let c = if flip { -c } else { c.clone() };
                let (p, n) = cols[v];
                if let Some(n) = n {
                    row[n] = -&c;
                }
                row[p] = c;
            }
            row[width - 1] = if flip { -rhs } else { rhs.clone() };
            match rel {
                Relation::Le => {
                    row[slack] = Q::one();
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -Q::one();
                    slack += 1;
                    row[artificial] = Q::one();
                    basis.push(artificial);
                    artificial += 1;
                }
                Relation::Eq => {
                    row[artificial] = Q::one();
                    basis.push(artificial);
                    artificial += 1;
                }
            }
            t.push(row);
        }
        Tableau { t, basis, art, cols, w: width }
    }

    fn width(&self) -> usize {
        self.w
    }

    fn pivot(&mut self, r: usize, c: usize, obj: &mut [Q]) {
        let inv = self.t[r][c].recip();
        for x in self.t[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let prow = std::mem::take(&mut self.t[r]);
        let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                row[j] -= &f * &prow[j];
            }
        }
        if !obj[c].is_zero() {
            let f = obj[c].clone();
            for &j in &nz {
                obj[j] -= &f * &prow[j];
            }
        }
        self.t[r] = prow;
        self.basis[r] = c;
    }

    /// Runs simplex iterations on columns `< limit`; returns false when
    /// unbounded. Dantzig pricing, with Bland's rule during runs of
    /// degenerate pivots so that the method cannot cycle.
    fn iterate(&mut self, obj: &mut [Q], limit: usize) -> bool {
        let rhs = self.width() - 1;
        let mut degenerate = 0usize;
        loop {
            let entering = if degenerate > 8 {
                (0..limit).find(|&j| obj[j].is_negative())
            } else {
                let mut best: Option<usize> = None;
                for j in 0..limit {
                    if obj[j].is_negative() && best.map_or(true, |b| obj[j] < obj[b]) {
                        best = Some(j);
                    }
                }
                best
            };
            let Some(c) = entering else {
                return true;
            };
            let mut best: Option<(usize, Q)> = None;
            for (i, row) in self.t.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, ratio)) = best else {
                return false;
            };
            if ratio.is_zero() {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(r, c, obj);
        }
    }

    fn objective_row(&self, cost: &[Q]) -> Vec<Q> {
        let w = self.width();
        let mut obj: Vec<Q> = (0..w).map(|j| if j < cost.len() { -&cost[j] } else { Q::zero() }).collect();
        for (i, row) in self.t.iter().enumerate() {
            let cb = cost.get(self.basis[i]).cloned().unwrap_or_else(Q::zero);
            if cb.is_zero() {
                continue;
            }
            for (o, x) in obj.iter_mut().zip(row) {
                if !x.is_zero() {
                    *o += &cb * x;
                }
            }
        }
        obj
    }

    fn solve(mut self, lp: &LinearProgram, objective: &[Q]) -> LpOutcome {
        let w = self.width();
        // Phase I: maximize minus the sum of artificials.
        if w - 1 > self.art {
            let mut phase1 = vec![Q::zero(); w - 1];
            for x in phase1.iter_mut().skip(self.art) {
                *x = -Q::one();
            }
            let mut obj = self.objective_row(&phase1);
            self.iterate(&mut obj, w - 1);
            if obj[w - 1].is_negative() {
                return LpOutcome::Infeasible;
            }
            // Drive remaining artificials out of the basis.
            let mut i = 0;
            while i < self.t.len() {
                if self.basis[i] >= self.art {
                    match (0..self.art).find(|&j| !self.t[i][j].is_zero()) {
                        Some(j) => {
                            self.pivot(i, j, &mut obj);
                            i += 1;
                        }
                        None => {
                            self.t.remove(i);
                            self.basis.remove(i);
                        }
                    }
                } else {
                    i += 1;
                }
            }
        }
        // Phase II.
        let mut cost = vec![Q::zero(); self.art];
        for (v, c) in objective.iter().enumerate() {
            let (p, n) = self.cols[v];
            cost[p] = c.clone();
            if let Some(n) = n {
                cost[n] = -c;
            }
        }
        let mut obj = self.objective_row(&cost);
        if !self.iterate(&mut obj, self.art) {
            return LpOutcome::Unbounded;
        }
        let rhs = w - 1;
        let mut y = vec![Q::zero(); self.art];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.art {
                y[b] = self.t[i][rhs].clone();
            }
        }
        let point: Vec<Q> = (0..lp.nvars)
            .map(|v| {
                let (p, n) = self.cols[v];
                match n {
                    Some(n) => &y[p] - &y[n],
                    None => y[p].clone(),
                }
            })
            .collect();
        LpOutcome::Optimal { value: obj[rhs].clone(), point }
    }
}
