//! Ribbon graphs of train tracks and their elementary moves.
//!
//! Every switch is trivalent with one branch on the `one` side and an
//! ordered pair on the `two` side, listed left then right when facing from
//! the switch into the two side. Branch weights obey `one = two[0] + two[1]`.
//!
//! A move produces a transition matrix mapping measures on the finer track
//! to measures on the coarser one: for splits and shifts the finer track is
//! the result, for folds it is the input.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{Branch, TrainTrack};
use crate::cone::PolyCone;
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::rational::Q;
use crate::surface::LabeledTriangulation;

/// Position of a branch end at a switch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    One,
    Left,
    Right,
}

/// A branch end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct End {
    pub switch: usize,
    pub slot: Slot,
}

/// A trivalent switch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Switch {
    pub one: usize,
    pub two: [usize; 2],
}

impl Switch {
    fn at(&self, slot: Slot) -> usize {
        match slot {
            Slot::One => self.one,
            Slot::Left => self.two[0],
            Slot::Right => self.two[1],
        }
    }
}

/// Kind of an elementary move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    LeftSplit,
    RightSplit,
    CentralSplit,
    Fold,
    Shift,
}

impl MoveKind {
    pub fn name(self) -> &'static str {
        match self {
            MoveKind::LeftSplit => "left-split",
            MoveKind::RightSplit => "right-split",
            MoveKind::CentralSplit => "central-split",
            MoveKind::Fold => "fold",
            MoveKind::Shift => "shift",
        }
    }

    pub fn parse(s: &str) -> Option<MoveKind> {
        [MoveKind::LeftSplit, MoveKind::RightSplit, MoveKind::CentralSplit, MoveKind::Fold, MoveKind::Shift]
            .into_iter()
            .find(|k| k.name() == s)
    }
}

/// An elementary move and its transition matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryMove {
    pub kind: MoveKind,
    /// The moved branch.
    pub branch: usize,
    /// Branch ids indexing the rows (coarser track).
    pub rows: Vec<usize>,
    /// Branch ids indexing the columns (finer track).
    pub cols: Vec<usize>,
    pub matrix: QMatrix,
    /// True when the finer track is the result of the move.
    pub fine_is_new: bool,
    /// Branch labels of the local configuration `a, b, d, e` around the
    /// moved branch, as read before the move.
    pub local: [usize; 4],
}

/// Ribbon graph of a train track.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrackGraph {
    pub switches: BTreeMap<usize, Switch>,
    /// Branch id to name.
    pub branches: BTreeMap<usize, String>,
}

impl TrackGraph {
    /// Graph of a suited track, with every bivalent switch merged away.
    ///
    /// Returns the graph and, for every branch of the suited track in
    /// [`TrainTrack::branches`] order, the graph branch carrying it.
    pub fn from_track(tri: &LabeledTriangulation, track: &TrainTrack) -> (TrackGraph, Vec<usize>) {
        let raw = track.branches(tri);
        let index = |b: Branch| raw.iter().position(|x| *x == b).unwrap_or(0);
        let mut parent: Vec<usize> = (0..raw.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut raw_switches = Vec::new();
        for (t, sides) in tri.triangles().iter().enumerate() {
            for (i, side) in sides.iter().enumerate() {
                let present = [track.has_corner(t, i), track.has_corner(t, i + 1)];
                let long = index(Branch::Long(side.arc));
                let short = |c: usize| index(Branch::Short(crate::surface::CornerRef::new(t, c % 3)));
                match present {
                    [true, true] => raw_switches.push((long, [short(i), short(i + 1)])),
                    [true, false] | [false, true] => {
                        let s = if present[0] { short(i) } else { short(i + 1) };
                        let (a, b) = (find(&mut parent, long), find(&mut parent, s));
                        parent[a.max(b)] = a.min(b);
                    }
                    [false, false] => {}
                }
            }
        }
        let class: Vec<usize> = (0..raw.len()).map(|i| find(&mut parent, i)).collect();
        let mut switches = BTreeMap::new();
        for (id, (one, two)) in raw_switches.into_iter().enumerate() {
            switches.insert(id, Switch { one: class[one], two: [class[two[0]], class[two[1]]] });
        }
        let mut branches = BTreeMap::new();
        for (i, &c) in class.iter().enumerate() {
            if c == i {
                branches.insert(c, branch_name(tri, raw[i]));
            }
        }
        (TrackGraph { switches, branches }, class)
    }

    /// Branch ids in increasing order.
    pub fn branch_ids(&self) -> Vec<usize> {
        self.branches.keys().copied().collect()
    }

    fn pos(&self, id: usize) -> usize {
        self.branches.keys().position(|&b| b == id).unwrap_or(0)
    }

    /// Ends of a branch, in switch order.
    pub fn ends(&self, b: usize) -> Vec<End> {
        let mut out = Vec::new();
        for (&s, sw) in &self.switches {
            for slot in [Slot::One, Slot::Left, Slot::Right] {
                if sw.at(slot) == b {
                    out.push(End { switch: s, slot });
                }
            }
        }
        out
    }

    /// Branches whose two ends sit on the `one` side of distinct switches.
    pub fn large_branches(&self) -> Vec<usize> {
        self.branch_ids()
            .into_iter()
            .filter(|&b| {
                let e = self.ends(b);
                e.len() == 2 && e[0].slot == Slot::One && e[1].slot == Slot::One && e[0].switch != e[1].switch
            })
            .collect()
    }

    /// Shift configurations `(branch, switch where it is on the one side)`.
    pub fn shift_sites(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for b in self.branch_ids() {
            let e = self.ends(b);
            if e.len() != 2 || e[0].switch == e[1].switch {
                continue;
            }
            for (x, y) in [(e[0], e[1]), (e[1], e[0])] {
                if x.slot == Slot::One && y.slot != Slot::One {
                    out.push((b, x.switch));
                }
            }
        }
        out
    }

    /// The measure cone over [`TrackGraph::branch_ids`].
    pub fn cone(&self) -> PolyCone {
        let m = self.branches.len();
        let eqs = self
            .switches
            .values()
            .map(|sw| {
                let mut row = vec![Q::zero(); m];
                row[self.pos(sw.one)] += Q::one();
                row[self.pos(sw.two[0])] -= Q::one();
                row[self.pos(sw.two[1])] -= Q::one();
                row
            })
            .collect();
        let ineqs = (0..m)
            .map(|i| {
                let mut row = vec![Q::zero(); m];
                row[i] = Q::one();
                row
            })
            .collect();
        PolyCone::new(m, eqs, ineqs)
    }

    fn large_ends(&self, c: usize) -> Result<(usize, usize)> {
        let e = self.ends(c);
        if e.len() == 2 && e[0].slot == Slot::One && e[1].slot == Slot::One && e[0].switch != e[1].switch {
            Ok((e[0].switch, e[1].switch))
        } else {
            Err(Error::MoveNotApplicable(format!("branch {c} is not large")))
        }
    }

    /// Left, right or central split at a large branch.
    pub fn split(&self, c: usize, kind: MoveKind) -> Result<(TrackGraph, ElementaryMove)> {
        let (s1, s2) = self.large_ends(c)?;
        let (w1, w2) = (self.switches[&s1], self.switches[&s2]);
        let (a, b, d, e) = (w1.two[1], w1.two[0], w2.two[0], w2.two[1]);
        let mut g = self.clone();
        let mut row: Vec<(usize, usize)> = Vec::new();
        match kind {
            MoveKind::LeftSplit => {
                g.switches.insert(s1, Switch { one: b, two: [c, e] });
                g.switches.insert(s2, Switch { one: d, two: [c, a] });
                row.extend([(c, a), (c, c), (c, e)]);
            }
            MoveKind::RightSplit => {
                g.switches.insert(s1, Switch { one: a, two: [d, c] });
                g.switches.insert(s2, Switch { one: e, two: [b, c] });
                row.extend([(c, b), (c, c), (c, d)]);
            }
            MoveKind::CentralSplit => {
                let ids = [a, b, d, e, c];
                if (0..5).any(|i| (i + 1..5).any(|j| ids[i] == ids[j])) {
                    return Err(Error::MoveNotApplicable(format!(
                        "central split at {c} would close up a branch"
                    )));
                }
                g.switches.remove(&s1);
                g.switches.remove(&s2);
                g.branches.remove(&c);
                g.branches.remove(&d);
                g.branches.remove(&e);
                for sw in g.switches.values_mut() {
                    let [t0, t1] = &mut sw.two;
                    for x in [&mut sw.one, t0, t1] {
                        if *x == d {
                            *x = a;
                        } else if *x == e {
                            *x = b;
                        }
                    }
                }
                let rows = self.branch_ids();
                let cols = g.branch_ids();
                let mut m = QMatrix::zeros(rows.len(), cols.len());
                let col = |x: usize| cols.iter().position(|&y| y == x).unwrap_or(0);
                for (r, &id) in rows.iter().enumerate() {
                    let targets: Vec<usize> = match id {
                        x if x == c => vec![a, b],
                        x if x == d => vec![a],
                        x if x == e => vec![b],
                        x => vec![x],
                    };
                    for t in targets {
                        let v = m.get(r, col(t)) + Q::one();
                        m.set(r, col(t), v);
                    }
                }
                let mv = ElementaryMove {
                    kind,
                    branch: c,
                    rows,
                    cols,
                    matrix: m,
                    fine_is_new: true,
                    local: [a, b, d, e],
                };
                return Ok((g, mv));
            }
            _ => return Err(Error::MoveNotApplicable(format!("{} is not a split", kind.name()))),
        }
        let mv = ElementaryMove {
            kind,
            branch: c,
            rows: self.branch_ids(),
            cols: g.branch_ids(),
            matrix: self.row_matrix(&row),
            fine_is_new: true,
            local: [a, b, d, e],
        };
        Ok((g, mv))
    }

    /// Identity over the branch ids except for the listed row entries.
    fn row_matrix(&self, entries: &[(usize, usize)]) -> QMatrix {
        let ids = self.branch_ids();
        let n = ids.len();
        let mut m = QMatrix::identity(n);
        if let Some(&(r, _)) = entries.first() {
            let r = self.pos(r);
            for j in 0..n {
                m.set(r, j, Q::zero());
            }
            for &(_, col) in entries {
                let j = self.pos(col);
                let v = m.get(r, j) + Q::one();
                m.set(r, j, v);
            }
        }
        m
    }

    /// Slides the switch `s1`, where `c` is on the one side, across the
    /// far end of `c`.
    pub fn shift(&self, c: usize, s1: usize) -> Result<(TrackGraph, ElementaryMove)> {
        let not = || Error::MoveNotApplicable(format!("no shift at branch {c}"));
        let w1 = *self.switches.get(&s1).ok_or_else(not)?;
        if w1.one != c {
            return Err(not());
        }
        let far: Vec<End> = self.ends(c).into_iter().filter(|e| e.switch != s1).collect();
        let [end] = far.as_slice() else {
            return Err(not());
        };
        let j = match end.slot {
            Slot::Left => 0,
            Slot::Right => 1,
            Slot::One => return Err(not()),
        };
        let s2 = end.switch;
        let w2 = self.switches[&s2];
        let (a, b, e, d) = (w1.two[j], w1.two[1 - j], w2.two[1 - j], w2.one);
        let mut g = self.clone();
        let mut z1 = Switch { one: c, two: [0, 0] };
        z1.two[j] = b;
        z1.two[1 - j] = e;
        let mut z2 = Switch { one: d, two: [0, 0] };
        z2.two[1 - j] = c;
        z2.two[j] = a;
        g.switches.insert(s1, z1);
        g.switches.insert(s2, z2);
        let mv = ElementaryMove {
            kind: MoveKind::Shift,
            branch: c,
            rows: self.branch_ids(),
            cols: g.branch_ids(),
            matrix: self.row_matrix(&[(c, a), (c, b)]),
            fine_is_new: true,
            local: [a, b, d, e],
        };
        Ok((g, mv))
    }

    /// Inverse of a left or right split: `c` must sit on the same side of
    /// the two side at both of its ends.
    pub fn fold(&self, c: usize) -> Result<(TrackGraph, ElementaryMove)> {
        let not = || Error::MoveNotApplicable(format!("no fold at branch {c}"));
        let ends = self.ends(c);
        if ends.len() != 2 || ends[0].switch == ends[1].switch || ends[0].slot != ends[1].slot {
            return Err(not());
        }
        let (x1, x2) = (ends[0].switch, ends[1].switch);
        let (w1, w2) = (self.switches[&x1], self.switches[&x2]);
        let (a, b, d, e, row) = match ends[0].slot {
            // Left split result: x1 = (b; c, e), x2 = (d; c, a).
            Slot::Left => {
                let (b, e, d, a) = (w1.one, w1.two[1], w2.one, w2.two[1]);
                (a, b, d, e, [(c, a), (c, c), (c, e)])
            }
            // Right split result: y1 = (a; d, c), y2 = (e; b, c).
            Slot::Right => {
                let (a, d, e, b) = (w1.one, w1.two[0], w2.one, w2.two[0]);
                (a, b, d, e, [(c, b), (c, c), (c, d)])
            }
            Slot::One => return Err(not()),
        };
        let mut g = self.clone();
        g.switches.insert(x1, Switch { one: c, two: [b, a] });
        g.switches.insert(x2, Switch { one: c, two: [d, e] });
        let mv = ElementaryMove {
            kind: MoveKind::Fold,
            branch: c,
            rows: g.branch_ids(),
            cols: self.branch_ids(),
            matrix: g.row_matrix(&row),
            fine_is_new: false,
            local: [a, b, d, e],
        };
        Ok((g, mv))
    }

    /// Applies a move by kind.
    pub fn apply(&self, kind: MoveKind, c: usize) -> Result<(TrackGraph, ElementaryMove)> {
        match kind {
            MoveKind::Fold => self.fold(c),
            MoveKind::Shift => {
                let site = self
                    .shift_sites()
                    .into_iter()
                    .find(|&(b, _)| b == c)
                    .ok_or_else(|| Error::MoveNotApplicable(format!("no shift at branch {c}")))?;
                self.shift(c, site.1)
            }
            k => self.split(c, k),
        }
    }

    /// 0/1 matrix sending graph measures to suited-track measures.
    pub fn expansion_matrix(&self, class: &[usize]) -> QMatrix {
        let ids = self.branch_ids();
        let mut m = QMatrix::zeros(class.len(), ids.len());
        for (i, c) in class.iter().enumerate() {
            if let Some(j) = ids.iter().position(|x| x == c) {
                m.set(i, j, Q::one());
            }
        }
        m
    }
}

/// Display name of a branch: `l<arc>` or `s<triangle>.<vertex>`.
pub fn branch_name(tri: &LabeledTriangulation, b: Branch) -> String {
    match b {
        Branch::Long(a) => format!("l{}", tri.labels()[a]),
        Branch::Short(c) => format!("s{}.{}", c.triangle, c.vertex),
    }
}
