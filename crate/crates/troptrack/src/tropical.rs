//! Tropical points of the cluster `A`- and `X`-varieties and their
//! mutations in the min-plus convention.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Q;
use crate::surface::{ExchangeMatrix, Step};

/// Which cluster variety a point lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    A,
    X,
}

/// Exact coordinates of a tropical point in a named chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalPoint {
    pub chart: String,
    pub kind: Kind,
    pub coords: Vec<Q>,
}

impl TropicalPoint {
    pub fn new(chart: impl Into<String>, kind: Kind, coords: Vec<Q>) -> Self {
        TropicalPoint { chart: chart.into(), kind, coords }
    }

    fn expect(&self, kind: Kind, n: usize) -> Result<()> {
        if self.kind != kind {
            return Err(Error::InvalidInput(format!("expected a point of kind {kind:?}")));
        }
        if self.coords.len() != n {
            return Err(Error::InvalidInput(format!(
                "point has {} coordinates, chart has {n}",
                self.coords.len()
            )));
        }
        Ok(())
    }
}

/// Sign of a tropical coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
}

impl Sign {
    pub fn of(x: &Q) -> Sign {
        if x.is_positive() {
            Sign::Plus
        } else if x.is_negative() {
            Sign::Minus
        } else {
            Sign::Zero
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Minus => -1,
            Sign::Zero => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_strict(self) -> bool {
        self != Sign::Zero
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Zero => '0',
            Sign::Plus => '+',
        }
    }

    pub fn from_symbol(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '0' => Some(Sign::Zero),
            '-' => Some(Sign::Minus),
            _ => None,
        }
    }
}

/// Signs of the active coordinate at each mutation along a path.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignSequence(pub Vec<Sign>);

impl SignSequence {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_strict(&self) -> bool {
        self.0.iter().all(|s| s.is_strict())
    }

    /// Parses a word such as `"+-0"`.
    pub fn parse(s: &str) -> Result<SignSequence> {
        s.chars()
            .map(|c| Sign::from_symbol(c).ok_or_else(|| Error::Parse(format!("invalid sign {c:?}"))))
            .collect::<Result<Vec<_>>>()
            .map(SignSequence)
    }
}

impl fmt::Display for SignSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|s| write!(f, "{}", s.symbol()))
    }
}

impl ExchangeMatrix {
    /// Matrix mutation at `k`.
    pub fn mutate(&self, k: usize) -> ExchangeMatrix {
        let n = self.size();
        let mut out = ExchangeMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                let b = self.get(i, j);
                let v = if i == k || j == k {
                    -b
                } else {
                    let (bik, bkj) = (self.get(i, k), self.get(k, j));
                    b + (bik.abs() * bkj + bik * bkj.abs()) / 2
                };
                out.set(i, j, v);
            }
        }
        out
    }
}

/// Matrix mutation at `k`.
pub fn mutate_exchange(b: &ExchangeMatrix, k: usize) -> ExchangeMatrix {
    b.mutate(k)
}

/// Tropical `A`-mutation of raw coordinates.
pub fn a_mutate(a: &[Q], b: &ExchangeMatrix, k: usize) -> Vec<Q> {
    let mut plus = Q::zero();
    let mut minus = Q::zero();
    for (j, aj) in a.iter().enumerate() {
        let bkj = b.get(k, j);
        if bkj > 0 {
            plus += aj * Q::from_integer(bkj.into());
        } else if bkj < 0 {
            minus += aj * Q::from_integer((-bkj).into());
        }
    }
    let mut out = a.to_vec();
    out[k] = plus.min(minus) - &a[k];
    out
}

/// Tropical `X`-mutation in the signed form `x_i + [sgn(x_k) b_ik]_+ x_k`.
pub fn x_mutate(x: &[Q], b: &ExchangeMatrix, k: usize) -> Vec<Q> {
    let s = Sign::of(&x[k]).as_i64();
    x.iter()
        .enumerate()
        .map(|(i, xi)| {
            if i == k {
                -xi
            } else {
                let c = (s * b.get(i, k)).max(0);
                xi + &x[k] * Q::from_integer(c.into())
            }
        })
        .collect()
}

/// Tropical `X`-mutation in the form `x_i - b_ik min(0, -sgn(b_ik) x_k)`.
pub fn x_mutate_min_form(x: &[Q], b: &ExchangeMatrix, k: usize) -> Vec<Q> {
    x.iter()
        .enumerate()
        .map(|(i, xi)| {
            if i == k {
                return -xi;
            }
            let bik = b.get(i, k);
            let t = -&x[k] * Q::from_integer(bik.signum().into());
            xi - Q::from_integer(bik.into()) * t.min(Q::zero())
        })
        .collect()
}

/// Frozen-sign linear part of the `X`-mutation at `k`: `x' = M x`.
pub fn x_mutation_matrix(b: &ExchangeMatrix, k: usize, sign: Sign) -> crate::linalg::QMatrix {
    let n = b.size();
    let s = sign.as_i64();
    let mut m = crate::linalg::QMatrix::identity(n);
    m.set(k, k, Q::from_integer((-1).into()));
    for i in (0..n).filter(|&i| i != k) {
        m.set(i, k, Q::from_integer((s * b.get(i, k)).max(0).into()));
    }
    m
}

/// The ensemble map `x_i = sum_j b_ij a_j`.
pub fn ensemble(a: &[Q], b: &ExchangeMatrix) -> Vec<Q> {
    (0..b.size())
        .map(|i| {
            a.iter()
                .enumerate()
                .filter(|(j, _)| b.get(i, *j) != 0)
                .map(|(j, aj)| aj * Q::from_integer(b.get(i, j).into()))
                .sum()
        })
        .collect()
}

/// Moves coordinate `i` to position `sigma[i]`.
pub fn permute_coords(v: &[Q], sigma: &[usize]) -> Vec<Q> {
    let mut out = vec![Q::zero(); v.len()];
    for (i, x) in v.iter().enumerate() {
        out[sigma[i]] = x.clone();
    }
    out
}

fn advance(chart: &str, k: usize) -> String {
    format!("{chart}.{k}")
}

/// Checked `A`-mutation of a point.
pub fn tropical_a_mutate(p: &TropicalPoint, b: &ExchangeMatrix, k: usize) -> Result<TropicalPoint> {
    p.expect(Kind::A, b.size())?;
    check_index(k, b.size())?;
    Ok(TropicalPoint::new(advance(&p.chart, k), Kind::A, a_mutate(&p.coords, b, k)))
}

/// Checked `X`-mutation of a point; both formulas are evaluated and compared.
pub fn tropical_x_mutate(p: &TropicalPoint, b: &ExchangeMatrix, k: usize) -> Result<TropicalPoint> {
    p.expect(Kind::X, b.size())?;
    check_index(k, b.size())?;
    let x = x_mutate(&p.coords, b, k);
    debug_assert_eq!(x, x_mutate_min_form(&p.coords, b, k));
    Ok(TropicalPoint::new(advance(&p.chart, k), Kind::X, x))
}

/// Checked ensemble map.
pub fn ensemble_map(p: &TropicalPoint, b: &ExchangeMatrix) -> Result<TropicalPoint> {
    p.expect(Kind::A, b.size())?;
    Ok(TropicalPoint::new(p.chart.clone(), Kind::X, ensemble(&p.coords, b)))
}

fn check_index(k: usize, n: usize) -> Result<()> {
    if k >= n {
        return Err(Error::InvalidInput(format!("index {k} out of range for {n} arcs")));
    }
    Ok(())
}

/// Validates every step of a word against `n` arcs.
pub fn check_word(path: &[Step], n: usize) -> Result<()> {
    for step in path {
        match step {
            Step::Flip(k) => check_index(*k, n)?,
            Step::Perm(s) => crate::surface::check_permutation(s, n)?,
        }
    }
    Ok(())
}

/// Follows a word on `X`-coordinates, returning the final point, the final
/// exchange matrix and the signs recorded at mutation steps.
pub fn x_follow(path: &[Step], w: &[Q], b0: &ExchangeMatrix) -> (Vec<Q>, ExchangeMatrix, SignSequence) {
    let mut x = w.to_vec();
    let mut b = b0.clone();
    let mut signs = Vec::new();
    for step in path {
        match step {
            Step::Flip(k) => {
                signs.push(Sign::of(&x[*k]));
                x = x_mutate(&x, &b, *k);
                b = b.mutate(*k);
            }
            Step::Perm(s) => {
                x = permute_coords(&x, s);
                b = b.permute(s);
            }
        }
    }
    (x, b, SignSequence(signs))
}

/// Follows a word on `A`-coordinates.
pub fn a_follow(path: &[Step], a: &[Q], b0: &ExchangeMatrix) -> (Vec<Q>, ExchangeMatrix) {
    let mut a = a.to_vec();
    let mut b = b0.clone();
    for step in path {
        match step {
            Step::Flip(k) => {
                a = a_mutate(&a, &b, *k);
                b = b.mutate(*k);
            }
            Step::Perm(s) => {
                a = permute_coords(&a, s);
                b = b.permute(s);
            }
        }
    }
    (a, b)
}

/// Sign of the active coordinate before each mutation along `path`.
pub fn sign_of_path(path: &[Step], w: &TropicalPoint, b0: &ExchangeMatrix) -> Result<SignSequence> {
    w.expect(Kind::X, b0.size())?;
    check_word(path, b0.size())?;
    Ok(x_follow(path, &w.coords, b0).2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qvec;

    fn torus() -> ExchangeMatrix {
        ExchangeMatrix::from_rows(&[vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]]).unwrap()
    }

    #[test]
    fn rank_two_mutation() {
        let b = ExchangeMatrix::from_rows(&[vec![0, 2], vec![-2, 0]]).unwrap();
        assert_eq!(b.mutate(0).rows(), vec![vec![0, -2], vec![2, 0]]);
    }

    #[test]
    fn torus_mutation_is_negation() {
        let b = torus();
        let m = b.mutate(0);
        let neg: Vec<Vec<i64>> = b.rows().iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        assert_eq!(m.rows(), neg);
    }

    #[test]
    fn x_mutation_example() {
        let x = qvec(&[1, -1, 2]);
        assert_eq!(x_mutate(&x, &torus(), 0), qvec(&[-1, -1, 4]));
        assert_eq!(x_mutate_min_form(&x, &torus(), 0), qvec(&[-1, -1, 4]));
    }

    #[test]
    fn ensemble_is_column() {
        assert_eq!(ensemble(&qvec(&[1, 0, 0]), &torus()), qvec(&[0, -2, 2]));
    }

    #[test]
    fn quadrilateral_a_mutation() {
        // Diagonal 0 with sides 1, 2, 3, 4 in cyclic order.
        let b = ExchangeMatrix::from_rows(&[
            vec![0, 1, -1, 1, -1],
            vec![-1, 0, 0, 0, 0],
            vec![1, 0, 0, 0, 0],
            vec![-1, 0, 0, 0, 0],
            vec![1, 0, 0, 0, 0],
        ])
        .unwrap();
        let a = qvec(&[-1, -1, -1, -1, -1]);
        assert_eq!(a_mutate(&a, &b, 0)[0], crate::rational::q(-1));
    }
}
