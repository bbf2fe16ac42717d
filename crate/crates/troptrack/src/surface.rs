//! Punctured surfaces, labeled ideal triangulations, flips and exchange
//! matrices.
//!
//! A triangle is a counterclockwise triple of sides. Side `i` runs from
//! vertex `i` to vertex `i + 1`; the corner at vertex `i` lies between sides
//! `i - 1` and `i` and faces side `i + 1`. Every arc carries an arbitrary
//! reference orientation and `Side::flip` records whether the
//! counterclockwise walk traverses the arc against it.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// A closed oriented surface of genus `g` with `h` punctures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuncturedSurface {
    genus: usize,
    punctures: Vec<String>,
}

impl PuncturedSurface {
    /// Validates `2g - 2 + h > 0`, `g = 0 => h > 3` and distinct puncture ids.
    pub fn new(genus: usize, punctures: Vec<String>) -> Result<Self> {
        let h = punctures.len();
        if h == 0 || 2 * genus + h <= 2 || (genus == 0 && h <= 3) {
            return Err(Error::SurfaceExcluded { genus, punctures: h });
        }
        let mut seen = punctures.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != h {
            return Err(Error::InvalidInput("duplicate puncture id".into()));
        }
        Ok(PuncturedSurface { genus, punctures })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn punctures(&self) -> &[String] {
        &self.punctures
    }

    pub fn num_punctures(&self) -> usize {
        self.punctures.len()
    }

    /// `6g - 6 + 3h`, the number of arcs of an ideal triangulation.
    pub fn num_arcs(&self) -> usize {
        6 * self.genus + 3 * self.punctures.len() - 6
    }

    /// `6g - 6 + 2h`, the dimension of the space of measured foliations.
    pub fn mf_dimension(&self) -> usize {
        6 * self.genus + 2 * self.punctures.len() - 6
    }
}

/// One side of a triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Side {
    pub arc: usize,
    pub flip: bool,
}

impl Side {
    pub fn new(arc: usize, flip: bool) -> Self {
        Side { arc, flip }
    }
}

/// A corner of a triangle, given by triangle index and vertex index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CornerRef {
    pub triangle: usize,
    pub vertex: usize,
}

impl CornerRef {
    pub fn new(triangle: usize, vertex: usize) -> Self {
        CornerRef { triangle, vertex }
    }
}

/// A corner with its puncture, the arc it faces and its two adjacent arcs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corner {
    pub at: CornerRef,
    pub puncture: usize,
    pub opposite: usize,
    /// Adjacent arcs: the side entering the vertex, then the side leaving it.
    pub adjacent: [usize; 2],
}

/// The quadrilateral around an arc, labeled as in the flip relation table.
///
/// `t1` contains `p1, p2, p3` counterclockwise, `t2` contains `p1, p3, p4`
/// and the arc joins `p1` to `p3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Quadrilateral {
    pub t1: usize,
    pub t2: usize,
    /// Side index of the arc in `t1` and in `t2`.
    pub side1: usize,
    pub side2: usize,
}

impl Quadrilateral {
    /// Corner of `t1` at `p1`, `p2`, `p3`.
    pub fn t1_corner(&self, p: usize) -> Option<CornerRef> {
        let v = match p {
            1 => self.side1 + 1,
            2 => self.side1 + 2,
            3 => self.side1,
            _ => return None,
        };
        Some(CornerRef::new(self.t1, v % 3))
    }

    /// Corner of `t2` at `p1`, `p3`, `p4`.
    pub fn t2_corner(&self, p: usize) -> Option<CornerRef> {
        let v = match p {
            1 => self.side2,
            3 => self.side2 + 1,
            4 => self.side2 + 2,
            _ => return None,
        };
        Some(CornerRef::new(self.t2, v % 3))
    }
}

/// An ideal triangulation with arcs indexed by `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledTriangulation {
    surface: PuncturedSurface,
    labels: Vec<String>,
    triangles: Vec<[Side; 3]>,
    corners: Vec<[usize; 3]>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl LabeledTriangulation {
    /// Validates gluing data and computes the corner-to-puncture map.
    ///
    /// `corner_hint` optionally names the puncture at every corner; without
    /// it punctures are assigned to vertex classes in order of first corner.
    pub fn build(
        surface: PuncturedSurface,
        labels: Vec<String>,
        triangles: Vec<[Side; 3]>,
        corner_hint: Option<Vec<[usize; 3]>>,
    ) -> Result<Self> {
        let n = surface.num_arcs();
        if labels.len() != n {
            return Err(Error::ArcCountMismatch { expected: n, found: labels.len() });
        }
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != n {
            return Err(Error::InvalidInput("duplicate arc label".into()));
        }
        let mut uses: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (t, tri) in triangles.iter().enumerate() {
            for (i, s) in tri.iter().enumerate() {
                if s.arc >= n {
                    return Err(Error::GluingInvalid(format!("triangle {t} uses unknown arc index {}", s.arc)));
                }
                uses[s.arc].push((t, i));
            }
            if tri[0].arc == tri[1].arc || tri[1].arc == tri[2].arc || tri[0].arc == tri[2].arc {
                return Err(Error::SelfFolded(t));
            }
        }
        for (a, u) in uses.iter().enumerate() {
            if u.len() != 2 {
                return Err(Error::GluingInvalid(format!("arc {} used {} times", labels[a], u.len())));
            }
            let (s0, s1) = (triangles[u[0].0][u[0].1], triangles[u[1].0][u[1].1]);
            if s0.flip == s1.flip {
                return Err(Error::GluingInvalid(format!("arc {} glued without reversing orientation", labels[a])));
            }
        }
        let f = triangles.len();
        let mut uf = UnionFind::new(3 * f);
        let mut tri_uf = UnionFind::new(f);
        for u in &uses {
            let ends = |&(t, i): &(usize, usize)| {
                let (a, b) = (3 * t + i, 3 * t + (i + 1) % 3);
                if triangles[t][i].flip {
                    (b, a)
                } else {
                    (a, b)
                }
            };
            let (s0, e0) = ends(&u[0]);
            let (s1, e1) = ends(&u[1]);
            uf.union(s0, s1);
            uf.union(e0, e1);
            tri_uf.union(u[0].0, u[1].0);
        }
        if (0..f).any(|t| tri_uf.find(t) != tri_uf.find(0)) {
            return Err(Error::GluingInvalid("triangles do not form a connected surface".into()));
        }
        let mut class_of = BTreeMap::new();
        for c in 0..3 * f {
            let r = uf.find(c);
            let next = class_of.len();
            class_of.entry(r).or_insert(next);
        }
        let h = surface.num_punctures();
        let v = class_of.len();
        // V - E + F must equal 2 - 2g.
        if v + f + 2 * surface.genus() != n + 2 || v != h {
            return Err(Error::GluingInvalid(format!(
                "gluing has {v} vertices and Euler characteristic {}, expected {h} vertices",
                v as i64 - n as i64 + f as i64
            )));
        }
        let corners: Vec<[usize; 3]> = match corner_hint {
            None => (0..f).map(|t| std::array::from_fn(|i| class_of[&uf.find(3 * t + i)])).collect(),
            Some(hint) => {
                if hint.len() != f {
                    return Err(Error::GluingInvalid("corner list length differs from triangle count".into()));
                }
                let mut map: BTreeMap<usize, usize> = BTreeMap::new();
                for (t, row) in hint.iter().enumerate() {
                    for (i, &p) in row.iter().enumerate() {
                        if p >= h {
                            return Err(Error::GluingInvalid(format!("unknown puncture index {p}")));
                        }
                        let class = class_of[&uf.find(3 * t + i)];
                        if *map.entry(class).or_insert(p) != p {
                            return Err(Error::GluingInvalid(format!(
                                "corner ({t}, {i}) names a puncture inconsistent with the gluing"
                            )));
                        }
                    }
                }
                let mut used: Vec<usize> = map.values().copied().collect();
                used.sort();
                used.dedup();
                if used.len() != h {
                    return Err(Error::GluingInvalid("corner punctures are not a bijection".into()));
                }
                hint
            }
        };
        Ok(LabeledTriangulation { surface, labels, triangles, corners })
    }

    pub fn surface(&self) -> &PuncturedSurface {
        &self.surface
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_arcs(&self) -> usize {
        self.labels.len()
    }

    pub fn triangles(&self) -> &[[Side; 3]] {
        &self.triangles
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// Puncture index at every corner.
    pub fn corner_punctures(&self) -> &[[usize; 3]] {
        &self.corners
    }

    pub fn puncture_at(&self, c: CornerRef) -> usize {
        self.corners[c.triangle][c.vertex]
    }

    /// Arc index with the given label.
    pub fn arc_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The two (triangle, side) occurrences of an arc.
    pub fn occurrences(&self, arc: usize) -> [(usize, usize); 2] {
        let mut out = Vec::with_capacity(2);
        for (t, tri) in self.triangles.iter().enumerate() {
            for (i, s) in tri.iter().enumerate() {
                if s.arc == arc {
                    out.push((t, i));
                }
            }
        }
        [out[0], out[1]]
    }

    /// Punctures at the start and end of an arc in its reference orientation.
    pub fn arc_endpoints(&self, arc: usize) -> (usize, usize) {
        let (t, i) = self.occurrences(arc)[0];
        let (a, b) = (self.corners[t][i], self.corners[t][(i + 1) % 3]);
        if self.triangles[t][i].flip {
            (b, a)
        } else {
            (a, b)
        }
    }

    /// Every corner with its puncture and incident arcs, in triangle order.
    pub fn corners(&self) -> Vec<Corner> {
        let mut out = Vec::with_capacity(3 * self.triangles.len());
        for (t, tri) in self.triangles.iter().enumerate() {
            for i in 0..3 {
                out.push(Corner {
                    at: CornerRef::new(t, i),
                    puncture: self.corners[t][i],
                    opposite: tri[(i + 1) % 3].arc,
                    adjacent: [tri[(i + 2) % 3].arc, tri[i].arc],
                });
            }
        }
        out
    }

    /// The quadrilateral around `arc`, with `t1` the first occurrence.
    pub fn quadrilateral(&self, arc: usize) -> Quadrilateral {
        let [(t1, side1), (t2, side2)] = self.occurrences(arc);
        Quadrilateral { t1, t2, side1, side2 }
    }

    /// Signed adjacency matrix of the dual quiver.
    ///
    /// Inside each triangle, `b[i][j]` gains `+1` when arc `j` follows arc
    /// `i` counterclockwise around a shared corner.
    pub fn exchange_matrix(&self) -> ExchangeMatrix {
        let n = self.num_arcs();
        let mut b = ExchangeMatrix::zero(n);
        for tri in &self.triangles {
            for i in 0..3 {
                let (s, next) = (tri[i].arc, tri[(i + 1) % 3].arc);
                b.add(next, s, 1);
                b.add(s, next, -1);
            }
        }
        b
    }

    /// True when `arc` can be flipped without creating a self-folded triangle.
    pub fn can_flip(&self, arc: usize) -> bool {
        self.flip(arc).is_ok()
    }

    /// Replaces `arc` by the other diagonal of its quadrilateral.
    pub fn flip(&self, arc: usize) -> Result<LabeledTriangulation> {
        if arc >= self.num_arcs() {
            return Err(Error::InvalidInput(format!("arc index {arc} out of range")));
        }
        let q = self.quadrilateral(arc);
        let (t, i, u, j) = (q.t1, q.side1, q.t2, q.side2);
        let rot = |tri: usize, k: usize| self.triangles[tri][k % 3];
        let vert = |tri: usize, k: usize| self.corners[tri][k % 3];
        let (x1, x2) = (rot(t, i + 1), rot(t, i + 2));
        let (y1, y2) = (rot(u, j + 1), rot(u, j + 2));
        if x2.arc == y1.arc || y2.arc == x1.arc {
            return Err(Error::FlipBlocked(arc));
        }
        let (v0, v1, v2) = (vert(t, i), vert(t, i + 1), vert(t, i + 2));
        let w2 = vert(u, j + 2);
        let mut triangles = self.triangles.clone();
        let mut corners = self.corners.clone();
        // The new diagonal is oriented from v2 to w2.
        triangles[t] = [x2, y1, Side::new(arc, true)];
        corners[t] = [v2, v0, w2];
        triangles[u] = [y2, x1, Side::new(arc, false)];
        corners[u] = [w2, v1, v2];
        Ok(LabeledTriangulation { surface: self.surface.clone(), labels: self.labels.clone(), triangles, corners })
    }

    /// Moves the arc with index `i` to index `sigma[i]`.
    pub fn permute(&self, sigma: &[usize]) -> Result<LabeledTriangulation> {
        check_permutation(sigma, self.num_arcs())?;
        let triangles =
            self.triangles.iter().map(|tri| tri.map(|s| Side::new(sigma[s.arc], s.flip))).collect::<Vec<_>>();
        Ok(LabeledTriangulation {
            surface: self.surface.clone(),
            labels: self.labels.clone(),
            triangles,
            corners: self.corners.clone(),
        })
    }

    /// Applies a word of flips and permutations.
    pub fn apply_word(&self, word: &[Step]) -> Result<LabeledTriangulation> {
        let mut tri = self.clone();
        for step in word {
            tri = match step {
                Step::Flip(k) => tri.flip(*k)?,
                Step::Perm(s) => tri.permute(s)?,
            };
        }
        Ok(tri)
    }

    /// Counterclockwise arc triples, each rotated to start at its smallest
    /// arc, sorted; a complete invariant of the labeled triangulation.
    pub fn canonical_triples(&self) -> Vec<[usize; 3]> {
        let mut out: Vec<[usize; 3]> = self
            .triangles
            .iter()
            .map(|tri| {
                let a = tri.map(|s| s.arc);
                let r = (0..3).min_by_key(|&k| a[k]).unwrap_or(0);
                [a[r], a[(r + 1) % 3], a[(r + 2) % 3]]
            })
            .collect();
        out.sort();
        out
    }

    /// Labeled combinatorial isomorphism fixing arc indices.
    pub fn same_combinatorics(&self, other: &LabeledTriangulation) -> bool {
        self.num_arcs() == other.num_arcs() && self.canonical_triples() == other.canonical_triples()
    }

    /// Triangle-and-rotation correspondence `self -> other` fixing arcs.
    ///
    /// Returns, for every triangle `t` of `self`, the triangle of `other`
    /// and the vertex shift `r` with vertex `v` of `t` sent to vertex `v + r`.
    pub fn isomorphism_to(&self, other: &LabeledTriangulation) -> Option<Vec<(usize, usize)>> {
        if !self.same_combinatorics(other) {
            return None;
        }
        let mut out = Vec::with_capacity(self.triangles.len());
        for tri in &self.triangles {
            let a = tri.map(|s| s.arc);
            let hit = other.triangles.iter().enumerate().find_map(|(u, o)| {
                let b = o.map(|s| s.arc);
                (0..3).find(|&r| (0..3).all(|v| a[v] == b[(v + r) % 3])).map(|r| (u, r))
            })?;
            out.push(hit);
        }
        Some(out)
    }
}

/// One edge of a path in the labeled exchange graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    /// Flip (mutation) at an arc index.
    Flip(usize),
    /// Relabeling: the arc at index `i` moves to index `sigma[i]`.
    Perm(Vec<usize>),
}

/// Validates that `sigma` is a permutation of `0..n`.
pub fn check_permutation(sigma: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if sigma.len() != n {
        return Err(Error::InvalidInput(format!("permutation has length {}, expected {n}", sigma.len())));
    }
    for &s in sigma {
        if s >= n || seen[s] {
            return Err(Error::InvalidInput("not a permutation".into()));
        }
        seen[s] = true;
    }
    Ok(())
}

/// True when the flips and permutations of `path` return the exchange
/// matrix of `tri` to itself.
pub fn is_loop(path: &[Step], tri: &LabeledTriangulation) -> Result<bool> {
    Ok(tri.apply_word(path)?.exchange_matrix() == tri.exchange_matrix())
}

/// Skew-symmetric integer matrix indexed by arcs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExchangeMatrix {
    n: usize,
    b: Vec<i64>,
}

impl ExchangeMatrix {
    pub fn zero(n: usize) -> Self {
        ExchangeMatrix { n, b: vec![0; n * n] }
    }

    /// From rows; rejects non-square or non-skew-symmetric input.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("exchange matrix is not square".into()));
        }
        let m = ExchangeMatrix { n, b: rows.iter().flatten().copied().collect() };
        if !m.is_skew_symmetric() {
            return Err(Error::InvalidInput("exchange matrix is not skew-symmetric".into()));
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.b[i * self.n + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: i64) {
        self.b[i * self.n + j] = v;
    }

    fn add(&mut self, i: usize, j: usize, v: i64) {
        self.b[i * self.n + j] += v;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.b.chunks(self.n.max(1)).take(self.n).map(<[i64]>::to_vec).collect()
    }

    pub fn is_skew_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == -self.get(j, i)))
    }

    pub fn transpose(&self) -> ExchangeMatrix {
        let mut t = ExchangeMatrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// `b'[sigma i][sigma j] = b[i][j]`.
    pub fn permute(&self, sigma: &[usize]) -> ExchangeMatrix {
        let mut out = ExchangeMatrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(sigma[i], sigma[j], self.get(i, j));
            }
        }
        out
    }

    pub fn to_qmatrix(&self) -> crate::linalg::QMatrix {
        crate::linalg::QMatrix::from_i64(&self.rows())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(arc: usize, flip: bool) -> Side {
        Side::new(arc, flip)
    }

    #[test]
    fn excluded_surfaces() {
        let p = |n: usize| (0..n).map(|i| i.to_string()).collect::<Vec<_>>();
        assert!(matches!(PuncturedSurface::new(0, p(3)), Err(Error::SurfaceExcluded { .. })));
        assert!(matches!(PuncturedSurface::new(1, p(0)), Err(Error::SurfaceExcluded { .. })));
        assert!(PuncturedSurface::new(1, p(1)).is_ok());
        assert!(PuncturedSurface::new(0, p(4)).is_ok());
    }

    #[test]
    fn torus_gluing() {
        let surf = PuncturedSurface::new(1, vec!["p".into()]).unwrap();
        let labels = vec!["1".into(), "2".into(), "3".into()];
        let tris = vec![[s(0, false), s(2, false), s(1, true)], [s(1, false), s(0, true), s(2, true)]];
        let t = LabeledTriangulation::build(surf.clone(), labels.clone(), tris, None).unwrap();
        assert_eq!(t.corner_punctures(), &[[0, 0, 0], [0, 0, 0]]);
        let b = t.exchange_matrix();
        assert_eq!(b.rows(), vec![vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]]);
        let bad = vec![[s(0, false), s(2, false), s(1, true)], [s(1, true), s(0, true), s(2, true)]];
        assert!(matches!(
            LabeledTriangulation::build(surf, labels, bad, None),
            Err(Error::GluingInvalid(_))
        ));
    }
}
