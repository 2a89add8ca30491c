//! The ×-point refinement, graded ×-arcs and slaloms.
//!
//! Each ○-point `v` is replaced by a cluster of ×-points `(v, i)`. Inside a
//! cluster the indices increase counterclockwise, so a ×-point sits in the
//! refined boundary order at key `(2v, i)`, while the ends of the dual
//! ●-arcs sit at `(2k + 1, slot)`. With this layout a ×-arc `(s, t)` picks up
//! `+1` each time it enters a dual face whose cluster lies on the
//! counterclockwise boundary stretch from `t` back to `s` (its left).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::algebra::fan;
use crate::disk::{
    ccw_between, interleave, slot_key, BoundaryKey, Color, Dissection, MarkedDisk, MarkedPoint,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct XPoint {
    pub cluster: usize,
    pub index: i64,
}

impl XPoint {
    pub fn new(cluster: usize, index: i64) -> Self {
        Self { cluster, index }
    }

    pub(crate) fn key(self) -> BoundaryKey {
        (2 * self.cluster, self.index)
    }
}

impl fmt::Display for XPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.cluster, self.index)
    }
}

/// An ordered pair of ×-points `(s, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct XPair {
    pub s: XPoint,
    pub t: XPoint,
}

impl XPair {
    pub fn new(s: XPoint, t: XPoint) -> Self {
        Self { s, t }
    }

    pub fn reversed(self) -> Self {
        Self {
            s: self.t,
            t: self.s,
        }
    }

    /// Endpoints in boundary order; the canonical representative of the
    /// unoriented arc.
    pub fn canonical(self) -> Self {
        if self.s <= self.t {
            self
        } else {
            self.reversed()
        }
    }

    pub fn shares_endpoint(&self, other: &XPair) -> bool {
        [self.s, self.t]
            .iter()
            .any(|p| *p == other.s || *p == other.t)
    }
}

impl fmt::Display for XPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.s, self.t)
    }
}

impl FromStr for XPair {
    type Err = Error;

    /// Parses `(c,i)-(c,i)`; whitespace is ignored.
    fn from_str(text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || {
            Error::Parse(format!(
                "expected \"(cluster,index)-(cluster,index)\", got {text:?}"
            ))
        };
        let (left, right) = compact.split_once(")-(").ok_or_else(bad)?;
        let point = |part: &str| -> Result<XPoint> {
            let (c, i) = part.split_once(',').ok_or_else(bad)?;
            Ok(XPoint::new(
                c.parse().map_err(|_| bad())?,
                i.parse().map_err(|_| bad())?,
            ))
        };
        let left = left.strip_prefix('(').ok_or_else(bad)?;
        let right = right.strip_suffix(')').ok_or_else(bad)?;
        Ok(XPair::new(point(left)?, point(right)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Window {
    /// Indices `-d+1..=0`.
    Term { d: usize },
    /// Every integer index.
    Full,
}

impl Window {
    pub fn contains(self, index: i64) -> bool {
        match self {
            Window::Term { d } => (1 - d as i64..=0).contains(&index),
            Window::Full => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RefinedDisk {
    base: MarkedDisk,
    window: Window,
}

impl RefinedDisk {
    pub fn refine(base: MarkedDisk, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Precondition("the window needs d >= 1".into()));
        }
        Ok(Self {
            base,
            window: Window::Term { d },
        })
    }

    pub fn full(base: MarkedDisk) -> Self {
        Self {
            base,
            window: Window::Full,
        }
    }

    pub fn base(&self) -> MarkedDisk {
        self.base
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn contains(&self, p: XPoint) -> bool {
        p.cluster < self.base.m() && self.window.contains(p.index)
    }

    /// Indices of one cluster in counterclockwise order (finite windows only).
    pub fn cluster_indices(&self) -> Option<Vec<i64>> {
        match self.window {
            Window::Term { d } => Some((1 - d as i64..=0).collect()),
            Window::Full => None,
        }
    }

    /// All ×-points in boundary order (finite windows only).
    pub fn x_points(&self) -> Option<Vec<XPoint>> {
        let indices = self.cluster_indices()?;
        Some(
            (0..self.base.m())
                .flat_map(|c| indices.iter().map(move |&i| XPoint::new(c, i)))
                .collect(),
        )
    }

    /// Counterclockwise boundary listing with ×-points in place of ○-points
    /// (finite windows only).
    pub fn boundary(&self) -> Option<Vec<RefinedItem>> {
        let indices = self.cluster_indices()?;
        let mut out = Vec::new();
        for c in 0..self.base.m() {
            out.extend(
                indices
                    .iter()
                    .map(|&i| RefinedItem::Cross(XPoint::new(c, i))),
            );
            out.push(RefinedItem::Bullet(c));
        }
        Some(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefinedItem {
    Cross(XPoint),
    Bullet(usize),
}

impl fmt::Display for RefinedItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RefinedItem::Cross(p) => write!(f, "x{p}"),
            RefinedItem::Bullet(k) => write!(f, "b{k}"),
        }
    }
}

/// A refined disk together with a maximal ○-dissection and its dual.
#[derive(Debug, Clone)]
pub struct Surface {
    refined: RefinedDisk,
    dissection: Dissection,
    dual: Dissection,
    dual_keys: Vec<(BoundaryKey, BoundaryKey)>,
    dual_sides: Vec<[usize; 2]>,
    face_cluster: Vec<usize>,
}

impl Surface {
    pub fn new(dissection: Dissection, window: Window) -> Result<Self> {
        if dissection.color() != Color::Circ {
            return Err(Error::Precondition("expected a ○-dissection".into()));
        }
        let dual = dissection.dual()?;
        let refined = match window {
            Window::Term { d } => RefinedDisk::refine(dissection.disk(), d)?,
            Window::Full => RefinedDisk::full(dissection.disk()),
        };
        let dual_keys = dual
            .arcs()
            .iter()
            .map(|c| (slot_key(Color::Bullet, c.a), slot_key(Color::Bullet, c.b)))
            .collect();
        let dual_sides = dual.arc_faces();
        let face_cluster = dual
            .faces()
            .iter()
            .map(|f| f.points_of(Color::Circ)[0].index)
            .collect();
        Ok(Self {
            refined,
            dissection,
            dual,
            dual_keys,
            dual_sides,
            face_cluster,
        })
    }

    /// The fan model of linearly oriented `A_n` with window `[-d+1, 0]`.
    ///
    /// `n = 0` gives the one-point disk, whose only silting collection is empty.
    pub fn linear_an(n: usize, d: usize) -> Result<Self> {
        let (_, dissection) = fan(n)?;
        if d == 0 {
            return Err(Error::Precondition("the window needs d >= 1".into()));
        }
        Self::new(dissection, Window::Term { d })
    }

    pub fn refined(&self) -> &RefinedDisk {
        &self.refined
    }

    pub fn dissection(&self) -> &Dissection {
        &self.dissection
    }

    pub fn dual(&self) -> &Dissection {
        &self.dual
    }

    /// Rank of the algebra, `|arcs|`.
    pub fn rank(&self) -> usize {
        self.dissection.arcs().len()
    }

    fn check_point(&self, p: XPoint) -> Result<()> {
        if self.refined.contains(p) {
            Ok(())
        } else {
            Err(Error::OutsideWindow(p))
        }
    }

    fn face_containing(&self, cluster: usize) -> usize {
        self.face_cluster
            .iter()
            .position(|&c| c == cluster)
            .expect("every cluster lies in some dual face")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Self {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    fn step(self) -> i64 {
        match self {
            Side::Left => 1,
            Side::Right => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CrossingEntry {
    /// Index into the dual dissection's arcs.
    pub dual_arc: usize,
    /// ○-point of the dual face entered after this crossing.
    pub entered_cluster: usize,
    /// Side of the entered face's cluster; `None` after the last crossing,
    /// where the face entered is the one holding the target.
    pub side: Option<Side>,
}

/// Dual arcs crossed by the ×-arc `pair`, in the order met from `s`.
pub fn crossing_sequence(surface: &Surface, pair: XPair) -> Result<Vec<CrossingEntry>> {
    let XPair { s, t } = pair;
    surface.check_point(s)?;
    surface.check_point(t)?;
    if s == t {
        return Err(Error::Precondition(format!("{pair} has equal endpoints")));
    }
    let (ks, kt) = (s.key(), t.key());
    let crossed: Vec<usize> = (0..surface.dual_keys.len())
        .filter(|&b| interleave((ks, kt), surface.dual_keys[b]))
        .collect();
    if crossed.is_empty() {
        return Err(Error::DegenerateArc(pair));
    }

    // beta' comes before beta iff beta' separates s from beta
    let side_of = |b: usize, x: BoundaryKey| {
        let (p, q) = surface.dual_keys[b];
        ccw_between(p, x, q)
    };
    let mut ranked: Vec<(usize, usize)> = crossed
        .iter()
        .map(|&b| {
            let probe = surface.dual_keys[b].0;
            let rank = crossed
                .iter()
                .filter(|&&c| c != b && side_of(c, ks) != side_of(c, probe))
                .count();
            (rank, b)
        })
        .collect();
    ranked.sort_unstable();
    if ranked.iter().enumerate().any(|(i, &(r, _))| r != i) {
        return Err(Error::Internal(format!(
            "crossings of {pair} are not totally ordered"
        )));
    }
    let order: Vec<usize> = ranked.into_iter().map(|(_, b)| b).collect();

    let target_face = surface.face_containing(t.cluster);
    let mut entries = Vec::with_capacity(order.len());
    for (k, &b) in order.iter().enumerate() {
        let sides = surface.dual_sides[b];
        let face = match order.get(k + 1) {
            Some(&next) => {
                let others = surface.dual_sides[next];
                sides
                    .into_iter()
                    .find(|f| others.contains(f))
                    .ok_or_else(|| {
                        Error::Internal(format!("consecutive crossings of {pair} share no face"))
                    })?
            }
            None if sides.contains(&target_face) => target_face,
            None => {
                return Err(Error::Internal(format!(
                    "last crossing of {pair} does not reach its target"
                )))
            }
        };
        let cluster = surface.face_cluster[face];
        let side = (k + 1 < order.len()).then(|| {
            if ccw_between(kt, (2 * cluster, 0), ks) {
                Side::Left
            } else {
                Side::Right
            }
        });
        entries.push(CrossingEntry {
            dual_arc: b,
            entered_cluster: cluster,
            side,
        });
    }
    Ok(entries)
}

/// Grading values at the crossings: start at `start`, step `+1` on entering a
/// face on the left and `-1` on the right.
pub fn grading_function(start: i64, crossings: &[CrossingEntry]) -> Vec<i64> {
    let mut values = Vec::with_capacity(crossings.len());
    let mut f = start;
    for (k, entry) in crossings.iter().enumerate() {
        values.push(f);
        if k + 1 < crossings.len() {
            f += entry.side.map_or(0, Side::step);
        }
    }
    values
}

/// A ×-arc with its crossing data against the dual dissection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossArc {
    pub pair: XPair,
    pub crossings: Vec<CrossingEntry>,
    pub grading: Vec<i64>,
}

impl CrossArc {
    pub fn new(surface: &Surface, pair: XPair) -> Result<Self> {
        let crossings = crossing_sequence(surface, pair)?;
        let grading = grading_function(pair.s.index, &crossings);
        Ok(Self {
            pair,
            crossings,
            grading,
        })
    }

    pub fn reversed(&self, surface: &Surface) -> Result<Self> {
        Self::new(surface, self.pair.reversed())
    }

    pub fn is_slalom(&self) -> bool {
        self.grading.last() == Some(&self.pair.t.index)
    }

    pub fn in_window(&self, d: usize) -> bool {
        let w = Window::Term { d };
        self.grading
            .iter()
            .chain([&self.pair.s.index, &self.pair.t.index])
            .all(|&i| w.contains(i))
    }

    pub fn collapse(&self) -> Result<GradedArc> {
        if !self.is_slalom() {
            return Err(Error::Precondition(format!(
                "{} is not a slalom",
                self.pair
            )));
        }
        Ok(GradedArc {
            ends: [self.pair.s.cluster, self.pair.t.cluster],
            end_grading: [self.pair.s.index, self.pair.t.index],
            crossings: self.crossings.iter().map(|c| c.dual_arc).collect(),
            grading: self.grading.clone(),
        })
    }
}

/// A ○-arc with grading values at its crossings with the dual dissection.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradedArc {
    pub ends: [usize; 2],
    /// Grading carried to each endpoint.
    pub end_grading: [i64; 2],
    pub crossings: Vec<usize>,
    pub grading: Vec<i64>,
}

impl GradedArc {
    /// The same graded arc walked the other way; grading values stay attached
    /// to their crossing points.
    pub fn inverse(&self) -> Self {
        let mut crossings = self.crossings.clone();
        crossings.reverse();
        let mut grading = self.grading.clone();
        grading.reverse();
        Self {
            ends: [self.ends[1], self.ends[0]],
            end_grading: [self.end_grading[1], self.end_grading[0]],
            crossings,
            grading,
        }
    }

    pub fn same_up_to_inversion(&self, other: &GradedArc) -> bool {
        self == other || *self == other.inverse()
    }

    /// Intersections of two graded ○-arcs on the disk, computed from the
    /// ○-endpoints and endpoint gradings alone.
    ///
    /// At a shared endpoint `p`, let `a` be the arc whose far end is met first
    /// walking counterclockwise from `p`; the sign of `f_b(p) - f_a(p)`
    /// classifies the boundary intersection.
    pub fn intersections(&self, other: &GradedArc, disk: MarkedDisk) -> IntersectionReport {
        let key = |c: usize| MarkedPoint::circ(c).item();
        let mut report = IntersectionReport::default();
        if interleave(
            (key(self.ends[0]), key(self.ends[1])),
            (key(other.ends[0]), key(other.ends[1])),
        ) {
            report.interior_noncontractible = 1;
        }
        for i in 0..2 {
            for j in 0..2 {
                let p = self.ends[i];
                if other.ends[j] != p {
                    continue;
                }
                let far_self = disk.ccw_distance(key(p), key(self.ends[1 - i]));
                let far_other = disk.ccw_distance(key(p), key(other.ends[1 - j]));
                let (fa, fb) = match far_self.cmp(&far_other) {
                    std::cmp::Ordering::Less => (self.end_grading[i], other.end_grading[j]),
                    std::cmp::Ordering::Greater => (other.end_grading[j], self.end_grading[i]),
                    // parallel arcs: both endpoints shared, one of each sign
                    std::cmp::Ordering::Equal if i == 0 => {
                        (self.end_grading[i], other.end_grading[j])
                    }
                    std::cmp::Ordering::Equal => (other.end_grading[j], self.end_grading[i]),
                };
                match (fb - fa).signum() {
                    1 => report.interior_contractible += 1,
                    0 => report.boundary_deg0 += 1,
                    _ => report.boundary_negative += 1,
                }
            }
        }
        report
    }
}

/// Intersection counts of two slaloms.
///
/// On graded arcs a contractible crossing shows up as a boundary
/// intersection of positive degree; it is reported under its slalom name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct IntersectionReport {
    pub interior_noncontractible: usize,
    pub interior_contractible: usize,
    pub boundary_deg0: usize,
    pub boundary_negative: usize,
}

impl IntersectionReport {
    pub fn interior(&self) -> usize {
        self.interior_noncontractible + self.interior_contractible
    }
}

fn require_slalom(g: &CrossArc) -> Result<()> {
    if g.is_slalom() {
        Ok(())
    } else {
        Err(Error::NotSlalom(g.pair))
    }
}

pub fn classify_intersection(g1: &CrossArc, g2: &CrossArc) -> Result<IntersectionReport> {
    require_slalom(g1)?;
    require_slalom(g2)?;
    let (p, q) = (g1.pair, g2.pair);
    if p.canonical() == q.canonical() {
        return Err(Error::Precondition(format!("{p} and {q} are the same arc")));
    }
    let interior = interleave((p.s.key(), p.t.key()), (q.s.key(), q.t.key()));
    let clusters = |x: XPair| BTreeSet::from([x.s.cluster, x.t.cluster]);
    let shared_clusters = clusters(p).intersection(&clusters(q)).count();
    let shared_points = BTreeSet::from([p.s, p.t])
        .intersection(&BTreeSet::from([q.s, q.t]))
        .count();

    let contractible = usize::from(interior && shared_clusters > 0);
    let negative = shared_clusters
        .checked_sub(shared_points + contractible)
        .ok_or_else(|| Error::Internal(format!("inconsistent boundary data for {p} and {q}")))?;
    Ok(IntersectionReport {
        interior_noncontractible: usize::from(interior) - contractible,
        interior_contractible: contractible,
        boundary_deg0: shared_points,
        boundary_negative: negative,
    })
}

/// Whether some positive-degree extension exists between the two slaloms.
pub fn ext_positive_some_direction(g1: &CrossArc, g2: &CrossArc) -> Result<bool> {
    Ok(classify_intersection(g1, g2)?.interior() >= 1)
}

fn check_members(members: &[CrossArc]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for g in members {
        require_slalom(g)?;
        if !seen.insert(g.pair.canonical()) {
            return Err(Error::DuplicateMember(g.pair));
        }
    }
    Ok(())
}

pub fn is_presilting(members: &[CrossArc]) -> Result<bool> {
    check_members(members)?;
    for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            if ext_positive_some_direction(a, b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn is_silting(members: &[CrossArc], rank: usize) -> Result<bool> {
    Ok(is_presilting(members)? && members.len() == rank)
}
