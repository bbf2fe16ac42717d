//! Univariate rational polynomials, real root isolation and certified
//! spectral radii.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linalg::QMatrix;
use crate::rational::{q, qr, to_f64, Q};

/// Polynomial with coefficients stored from the constant term upwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    c: Vec<Q>,
}

impl Poly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| q(x)).collect())
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { c: vec![Q::one()] }
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly { c: vec![Q::zero(), Q::one()] }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn lead(&self) -> Q {
        self.c.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    self.c.get(i).cloned().unwrap_or_else(Q::zero) + o.c.get(i).cloned().unwrap_or_else(Q::zero)
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Q::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        Poly::new(c)
    }

    pub fn scale(&self, s: &Q) -> Poly {
        Poly::new(self.c.iter().map(|x| x * s).collect())
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.lead();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quo = vec![Q::zero(); r.len() - dd];
        for k in (0..quo.len()).rev() {
            let f = &r[k + dd] / &lead;
            if f.is_zero() {
                continue;
            }
            for (j, b) in d.c.iter().enumerate() {
                r[k + j] -= &f * b;
            }
            quo[k] = f;
        }
        r.truncate(dd);
        (Poly::new(quo), Poly::new(r))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let l = self.lead().recip();
        self.scale(&l)
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r.primitive_part();
        }
        a.monic()
    }

    /// Scales to integer coefficients with unit content and positive leading term.
    pub fn primitive_part(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut l = BigInt::one();
        for x in &self.c {
            l = l.lcm(x.denom());
        }
        let ints: Vec<BigInt> = self.c.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
        let mut g = BigInt::zero();
        for x in &ints {
            g = g.gcd(x);
        }
        let sign = if ints.last().is_some_and(|x| x.is_negative()) { -BigInt::one() } else { BigInt::one() };
        Poly::new(ints.into_iter().map(|x| Q::from_integer(x * &sign / &g)).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.c.iter().enumerate().skip(1).map(|(i, a)| a * q(i as i64)).collect())
    }

    /// Product of the distinct irreducible factors, monic.
    pub fn squarefree(&self) -> Poly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = Poly::gcd(self, &self.derivative());
        self.divrem(&g).0.monic()
    }

    /// `p(s x)`.
    pub fn scale_arg(&self, s: &Q) -> Poly {
        let mut pw = Q::one();
        let mut c = Vec::with_capacity(self.c.len());
        for a in &self.c {
            c.push(a * &pw);
            pw *= s;
        }
        Poly::new(c)
    }

    /// Divides out every factor shared with `f`.
    pub fn remove_factor(&self, f: &Poly) -> Poly {
        let mut p = self.clone();
        loop {
            let g = Poly::gcd(&p, f);
            if g.degree().unwrap_or(0) == 0 {
                return p;
            }
            p = p.divrem(&g).0;
        }
    }

    fn sturm_sequence(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                return seq;
            }
            let r = seq[n - 2].divrem(&seq[n - 1]).1.neg();
            seq.push(r);
        }
    }

    fn sign_changes(seq: &[Poly], x: &Q) -> usize {
        let mut last = 0;
        let mut changes = 0;
        for p in seq {
            let s = crate::rational::signum(&p.eval(x));
            if s != 0 {
                if last != 0 && s != last {
                    changes += 1;
                }
                last = s;
            }
        }
        changes
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count_roots(&self, a: &Q, b: &Q) -> usize {
        if self.degree().unwrap_or(0) == 0 || a >= b {
            return 0;
        }
        let seq = self.sturm_sequence();
        Self::sign_changes(&seq, a).saturating_sub(Self::sign_changes(&seq, b))
    }

    /// Bound `B` with every root strictly inside `(-B, B)`.
    pub fn root_bound(&self) -> Q {
        let l = self.lead().abs();
        let m = self.c[..self.c.len().saturating_sub(1)].iter().map(|a| a.abs() / &l).max().unwrap_or_else(Q::zero);
        m + q(2)
    }

    /// Disjoint isolating intervals of the distinct real roots, increasing.
    pub fn isolate_real_roots(&self) -> Vec<AlgebraicReal> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let sq = self.squarefree();
        let b = sq.root_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            match sq.count_roots(&lo, &hi) {
                0 => {}
                1 => out.push(AlgebraicReal::from_parts(sq.clone(), lo, hi)),
                _ => {
                    let mid = sq.split_point(&lo, &hi);
                    stack.push((lo, mid.clone()));
                    stack.push((mid, hi));
                }
            }
        }
        out.sort_by(|a, b| a.lo.cmp(&b.lo));
        out
    }

    /// A rational in `(lo, hi)` near the midpoint that is not a root.
    fn split_point(&self, lo: &Q, hi: &Q) -> Q {
        let mut k = 2i64;
        loop {
            let t = lo + (hi - lo) * qr(k - 1, 2 * k - 1);
            if !self.eval(&t).is_zero() {
                return t;
            }
            k += 1;
        }
    }

    /// True when every root lies strictly inside the unit disk.
    pub fn schur_stable(&self) -> bool {
        let mut p = self.primitive_part();
        loop {
            let Some(n) = p.degree() else {
                return false;
            };
            if n == 0 {
                return true;
            }
            let a0 = p.c[0].clone();
            let an = p.c[n].clone();
            if a0.abs() >= an.abs() {
                return false;
            }
            let next: Vec<Q> = (0..n).map(|k| &an * &p.c[k + 1] - &a0 * &p.c[n - k - 1]).collect();
            p = Poly::new(next).primitive_part();
        }
    }

    /// Readable form in the variable `var`, highest degree first.
    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let coeff = if mag.is_one() && i > 0 {
                String::new()
            } else if mag.is_integer() {
                mag.numer().to_string()
            } else {
                crate::rational::fmt_q(&mag)
            };
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if !coeff.is_empty() && !mono.is_empty() {
                s.push_str(&format!("{coeff}*{mono}"));
            } else {
                s.push_str(&coeff);
                s.push_str(&mono);
            }
        }
        s
    }
}

/// Characteristic polynomial `det(x I - m)` by the Faddeev-LeVerrier recursion.
pub fn char_poly(m: &QMatrix) -> Poly {
    let n = m.rows();
    assert_eq!(n, m.cols(), "characteristic polynomial of a non-square matrix");
    let mut c = vec![Q::zero(); n + 1];
    c[n] = Q::one();
    let mut mk = QMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = m.mul(&mk);
        for i in 0..n {
            let v = next.get(i, i) + &c[n - k + 1];
            next.set(i, i, v);
        }
        mk = next;
        c[n - k] = -m.mul(&mk).trace() / q(k as i64);
    }
    Poly::new(c)
}

/// A real algebraic number: the unique root of a squarefree polynomial in `(lo, hi)`.
#[derive(Clone, Debug)]
pub struct AlgebraicReal {
    poly: Poly,
    lo: Q,
    hi: Q,
}

impl AlgebraicReal {
    fn from_parts(poly: Poly, lo: Q, hi: Q) -> Self {
        let mut r = AlgebraicReal { poly, lo, hi };
        r.fix_endpoints();
        r
    }

    /// Ensures neither endpoint is a root, so the interval is open on both sides.
    fn fix_endpoints(&mut self) {
        if self.poly.eval(&self.hi).is_zero() {
            let root = self.hi.clone();
            self.poly = Poly::new(vec![-root.clone(), Q::one()]);
            let w = (&self.hi - &self.lo) / q(2);
            self.lo = &root - &w;
            self.hi = root + w;
        }
    }

    /// The rational number `x`.
    pub fn rational(x: Q) -> Self {
        AlgebraicReal { poly: Poly::new(vec![-x.clone(), Q::one()]), lo: &x - q(1), hi: x + q(1) }
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn interval(&self) -> (&Q, &Q) {
        (&self.lo, &self.hi)
    }

    /// Shrinks the isolating interval below `width`.
    pub fn refine(&mut self, width: &Q) {
        while &(&self.hi - &self.lo) > width {
            let mid = (&self.lo + &self.hi) / q(2);
            let v = self.poly.eval(&mid);
            if v.is_zero() {
                *self = AlgebraicReal::rational(mid.clone());
                self.lo = &mid - width / q(4);
                self.hi = mid + width / q(4);
                return;
            }
            if self.poly.count_roots(&self.lo, &mid) == 1 {
                self.hi = mid;
            } else {
                self.lo = mid;
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        let mut r = self.clone();
        r.refine(&qr(1, 1 << 60));
        to_f64(&((&r.lo + &r.hi) / q(2)))
    }

    /// Sign of the number.
    pub fn signum(&self) -> i32 {
        if self.lo < Q::zero() && Q::zero() < self.hi && self.poly.eval(&Q::zero()).is_zero() {
            return 0;
        }
        let mut r = self.clone();
        loop {
            if r.lo >= Q::zero() {
                return 1;
            }
            if r.hi <= Q::zero() {
                return -1;
            }
            let w = (&r.hi - &r.lo) / q(2);
            r.refine(&w);
        }
    }

    /// Absolute value.
    pub fn abs(&self) -> AlgebraicReal {
        if self.signum() >= 0 {
            return self.clone();
        }
        let reflected = Poly::new(
            self.poly.c.iter().enumerate().map(|(i, a)| if i % 2 == 1 { -a } else { a.clone() }).collect(),
        );
        AlgebraicReal { poly: reflected, lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    /// Exact comparison with another algebraic number.
    pub fn cmp_exact(&self, other: &AlgebraicReal) -> Ordering {
        if self.same_value(other) {
            return Ordering::Equal;
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        loop {
            if a.hi <= b.lo {
                return Ordering::Less;
            }
            if b.hi <= a.lo {
                return Ordering::Greater;
            }
            let wa = (&a.hi - &a.lo) / q(2);
            let wb = (&b.hi - &b.lo) / q(2);
            a.refine(&wa);
            b.refine(&wb);
        }
    }

    /// Exact equality through the gcd of the defining polynomials.
    pub fn same_value(&self, other: &AlgebraicReal) -> bool {
        let g = Poly::gcd(&self.poly, &other.poly);
        if g.degree().unwrap_or(0) == 0 {
            return false;
        }
        let lo = if self.lo > other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi < other.hi { self.hi.clone() } else { other.hi.clone() };
        lo < hi && g.count_roots(&lo, &hi) >= 1
    }
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root of {} near {:.12}", self.poly.display("x"), self.to_f64())
    }
}

/// Certified enclosure of the spectral radius of a rational matrix.
#[derive(Clone, Debug)]
pub struct SpectralRadius {
    /// Rational enclosure `lower <= rho <= upper`.
    pub lower: Q,
    pub upper: Q,
    /// Dominant real eigenvalue in absolute value, when it attains the radius.
    pub dominant: Option<AlgebraicReal>,
    /// True when the radius equals `|dominant|` exactly.
    pub exact: bool,
    /// True when the enclosure is proven; false for the floating-point fallback.
    pub certified: bool,
    pub char_poly: Option<Poly>,
}

impl SpectralRadius {
    pub fn value(&self) -> f64 {
        match &self.dominant {
            Some(d) if self.exact => d.abs().to_f64(),
            _ => (to_f64(&self.lower) + to_f64(&self.upper)) / 2.0,
        }
    }

    /// Exact equality of two radii, when both are exact.
    pub fn same_exact(&self, other: &SpectralRadius) -> Option<bool> {
        match (&self.dominant, &other.dominant) {
            (Some(a), Some(b)) if self.exact && other.exact => Some(a.abs().same_value(&b.abs())),
            _ => None,
        }
    }
}

/// Largest matrix size handled by the exact characteristic polynomial path.
pub const EXACT_SIZE_LIMIT: usize = 12;

/// Spectral radius with a rational certificate interval.
pub fn spectral_radius(m: &QMatrix) -> SpectralRadius {
    if m.rows() > EXACT_SIZE_LIMIT {
        return power_iteration(m);
    }
    let p = char_poly(m);
    let sq = p.squarefree();
    let roots = sq.isolate_real_roots();
    let tiny = qr(1, 1) / Q::from_integer(BigInt::one() << 100u32);
    let all_real = roots.len() == sq.degree().unwrap_or(0);
    let mut best: Option<AlgebraicReal> = None;
    for r in &roots {
        let a = r.abs();
        let better = match &best {
            None => true,
            Some(b) => a.cmp_exact(&b.abs()) == Ordering::Greater,
        };
        if better {
            best = Some(r.clone());
        }
    }
    if let Some(mut r) = best.clone() {
        r.refine(&tiny);
        let a = r.abs();
        let (lo, hi) = (a.lo.clone().max(Q::zero()), a.hi.clone());
        if all_real || (hi.is_positive() && p.scale_arg(&hi).schur_stable()) {
            return SpectralRadius {
                lower: lo,
                upper: hi,
                dominant: Some(r),
                exact: all_real,
                certified: true,
                char_poly: Some(p),
            };
        }
    }
    // A non-real eigenvalue dominates: bisect with the Schur-Cohn test.
    let mut lo = best.map(|r| r.abs().lo.max(Q::zero())).unwrap_or_else(Q::zero);
    let mut hi = p.root_bound();
    for _ in 0..80 {
        let mid = (&lo + &hi) / q(2);
        if mid.is_positive() && p.scale_arg(&mid).schur_stable() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    SpectralRadius { lower: lo, upper: hi, dominant: None, exact: false, certified: true, char_poly: Some(p) }
}

fn power_iteration(m: &QMatrix) -> SpectralRadius {
    let a = m.to_f64();
    let n = a.len();
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut est = 0.0;
    for i in 0..n {
        v[i] += 1e-3 * (i as f64 + 1.0);
    }
    for _ in 0..2000 {
        let w: Vec<f64> = a.iter().map(|row| row.iter().zip(&v).map(|(x, y)| x * y).sum()).collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            est = 0.0;
            break;
        }
        est = norm;
        v = w.into_iter().map(|x| x / norm).collect();
    }
    let to_q = |x: f64| {
        let scale = 1i64 << 40;
        qr((x * scale as f64).round() as i64, scale)
    };
    let slack = est.abs() * 1e-9 + 1e-12;
    SpectralRadius {
        lower: to_q((est - slack).max(0.0)),
        upper: to_q(est + slack),
        dominant: None,
        exact: false,
        certified: false,
        char_poly: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_gcd() {
        let a = Poly::from_i64(&[-1, 0, 1]); // x^2 - 1
        let b = Poly::from_i64(&[1, 1]); // x + 1
        assert_eq!(a.divrem(&b), (Poly::from_i64(&[-1, 1]), Poly::zero()));
        assert_eq!(Poly::gcd(&a, &b), b);
        let sq = a.mul(&b).squarefree();
        assert_eq!(sq, a);
        assert_eq!(a.display("x"), "x^2 - 1");
    }

    #[test]
    fn char_poly_small() {
        let m = QMatrix::from_i64(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(char_poly(&m), Poly::from_i64(&[1, -3, 1]));
        let id = QMatrix::identity(3);
        assert_eq!(char_poly(&id), Poly::from_i64(&[-1, 3, -3, 1]));
    }

    #[test]
    fn isolation_and_equality() {
        let p = Poly::from_i64(&[1, -3, 1]);
        let roots = p.isolate_real_roots();
        assert_eq!(roots.len(), 2);
        let big = roots[1].to_f64();
        assert!((big - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        let q2 = p.mul(&Poly::from_i64(&[-1, 1]));
        let other = q2.isolate_real_roots();
        assert!(other.iter().any(|r| r.same_value(&roots[1])));
        assert!(!other[0].same_value(&roots[1]));
        assert_eq!(roots[0].cmp_exact(&roots[1]), Ordering::Less);
    }

    #[test]
    fn schur_test() {
        assert!(Poly::new(vec![qr(-1, 2), q(1)]).schur_stable());
        assert!(!Poly::from_i64(&[-2, 1]).schur_stable());
        assert!(!Poly::from_i64(&[1, 0, 1]).schur_stable());
        assert!(Poly::new(vec![qr(1, 4), q(0), q(1)]).schur_stable());
    }

    #[test]
    fn radius_of_rotation_is_certified() {
        // Rotation by 90 degrees scaled by 2: eigenvalues +-2i.
        let m = QMatrix::from_i64(&[vec![0, -2], vec![2, 0]]);
        let r = spectral_radius(&m);
        assert!(r.dominant.is_none());
        assert!((r.value() - 2.0).abs() < 1e-9);
        assert!(r.lower <= q(2) && q(2) <= r.upper);
    }

    #[test]
    fn radius_golden() {
        let m = QMatrix::from_i64(&[vec![2, 1], vec![1, 1]]);
        let r = spectral_radius(&m);
        assert!(r.exact && r.certified);
        assert!((r.value() - 2.618033988749895).abs() < 1e-12);
    }
}
