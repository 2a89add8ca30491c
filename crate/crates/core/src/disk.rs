//! Marked disks, chord systems and admissible dissections.
//!
//! A disk with `m` ○-points carries `2m` boundary items laid out
//! counterclockwise as `○0, ●0, ○1, ●1, …, ○(m-1), ●(m-1)`. Arcs are stored
//! as pairs of [`Slot`]s: several arc ends may sit at one marked point, and
//! their positions record the counterclockwise order in which they are met
//! when walking along the boundary. On a disk without punctures the slot
//! pair is a complete homotopy invariant of an arc, so crossing and face
//! structure are decided combinatorially from the refined boundary order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Colour of a marked point or of an arc system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Circ,
    Bullet,
}

impl Color {
    pub fn opposite(self) -> Self {
        match self {
            Color::Circ => Color::Bullet,
            Color::Bullet => Color::Circ,
        }
    }

    fn parity(self) -> usize {
        match self {
            Color::Circ => 0,
            Color::Bullet => 1,
        }
    }

    fn glyph(self) -> &'static str {
        match self {
            Color::Circ => "o",
            Color::Bullet => "b",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkedPoint {
    pub color: Color,
    pub index: usize,
}

impl MarkedPoint {
    pub fn circ(index: usize) -> Self {
        Self {
            color: Color::Circ,
            index,
        }
    }

    pub fn bullet(index: usize) -> Self {
        Self {
            color: Color::Bullet,
            index,
        }
    }

    /// Position of the point in the counterclockwise boundary sequence.
    pub fn item(self) -> usize {
        2 * self.index + self.color.parity()
    }
}

impl fmt::Display for MarkedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.color.glyph(), self.index)
    }
}

/// A disk with one boundary component, no punctures, and `m` ○-points
/// alternating with `m` ●-points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MarkedDisk {
    m: usize,
}

impl MarkedDisk {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidSurface(
                "a boundary component needs at least one marked point".into(),
            ));
        }
        Ok(Self { m })
    }

    /// Number of ○-points (equal to the number of ●-points).
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of boundary items, `2m`.
    pub fn items(&self) -> usize {
        2 * self.m
    }

    pub fn point_at(&self, item: usize) -> MarkedPoint {
        let color = if item.is_multiple_of(2) {
            Color::Circ
        } else {
            Color::Bullet
        };
        MarkedPoint {
            color,
            index: item / 2,
        }
    }

    /// Boundary items in counterclockwise order.
    pub fn boundary(&self) -> Vec<MarkedPoint> {
        (0..self.items()).map(|i| self.point_at(i)).collect()
    }

    /// Number of steps from `from` to `to` walking counterclockwise.
    pub fn ccw_distance(&self, from: usize, to: usize) -> usize {
        (to + self.items() - from) % self.items()
    }
}

/// One arc end at a marked point; `position` counts arc ends at `owner` in
/// counterclockwise boundary order, starting at 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub owner: usize,
    pub position: usize,
}

impl Slot {
    pub fn new(owner: usize, position: usize) -> Self {
        Self { owner, position }
    }
}

/// Position in the refined cyclic boundary order: boundary item first,
/// then the sub-position within that item.
pub(crate) type BoundaryKey = (usize, i64);

pub(crate) fn slot_key(color: Color, slot: Slot) -> BoundaryKey {
    let point = MarkedPoint {
        color,
        index: slot.owner,
    };
    (point.item(), slot.position as i64)
}

/// Strict interleaving of two chords given by their end positions in a
/// cyclic order. Chords sharing a position never interleave.
pub fn interleave<K: Ord + Copy>(a: (K, K), b: (K, K)) -> bool {
    if a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1 || a.0 == a.1 || b.0 == b.1 {
        return false;
    }
    let (lo, hi) = if a.0 < a.1 { (a.0, a.1) } else { (a.1, a.0) };
    let inside = |k: K| lo < k && k < hi;
    inside(b.0) != inside(b.1)
}

/// Whether `x` is met strictly after `from` and strictly before `to` when
/// walking counterclockwise.
pub(crate) fn ccw_between<K: Ord>(from: K, x: K, to: K) -> bool {
    match from.cmp(&to) {
        Ordering::Less => from < x && x < to,
        Ordering::Greater => x > from || x < to,
        Ordering::Equal => x != from,
    }
}

/// An arc of a dissection, stored with its ends in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chord {
    pub color: Color,
    pub a: Slot,
    pub b: Slot,
}

impl Chord {
    pub fn new(color: Color, a: Slot, b: Slot) -> Self {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        Self { color, a, b }
    }

    pub fn is_loop(&self) -> bool {
        self.a.owner == self.b.owner
    }

    pub fn end(&self, which: usize) -> Slot {
        if which == 0 {
            self.a
        } else {
            self.b
        }
    }

    pub fn ends(&self) -> [MarkedPoint; 2] {
        [self.point(0), self.point(1)]
    }

    pub fn point(&self, which: usize) -> MarkedPoint {
        MarkedPoint {
            color: self.color,
            index: self.end(which).owner,
        }
    }

    pub(crate) fn keys(&self) -> (BoundaryKey, BoundaryKey) {
        (slot_key(self.color, self.a), slot_key(self.color, self.b))
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.color.glyph();
        write!(
            f,
            "{g}{}.{}-{g}{}.{}",
            self.a.owner, self.a.position, self.b.owner, self.b.position
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Crossing {
    Disjoint,
    Interior,
    /// No interior crossing; the listed marked points are ends of both chords.
    Shared(Vec<MarkedPoint>),
}

/// Minimal-position intersection of two chords on the same disk.
pub fn chords_cross(a: &Chord, b: &Chord) -> Crossing {
    if interleave(a.keys(), b.keys()) {
        return Crossing::Interior;
    }
    let mut shared: Vec<MarkedPoint> = a
        .ends()
        .into_iter()
        .filter(|p| b.ends().contains(p))
        .collect();
    shared.sort();
    shared.dedup();
    if shared.is_empty() {
        Crossing::Disjoint
    } else {
        Crossing::Shared(shared)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FaceStep {
    /// A stretch of the boundary between two consecutive arc ends.
    Boundary {
        points: Vec<MarkedPoint>,
        /// False when both ends sit at one marked point with nothing between.
        segment: bool,
    },
    /// One side of an arc, walked from slot `from` to slot `to`.
    Arc { arc: usize, from: Slot, to: Slot },
}

/// A complementary region of a dissection, walked with the region on the left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub walk: Vec<FaceStep>,
}

impl Face {
    /// Marked points lying on the boundary stretches of this face.
    pub fn points(&self) -> impl Iterator<Item = MarkedPoint> + '_ {
        self.walk
            .iter()
            .flat_map(|step| match step {
                FaceStep::Boundary { points, .. } => points.as_slice(),
                FaceStep::Arc { .. } => &[],
            })
            .copied()
    }

    pub fn points_of(&self, color: Color) -> Vec<MarkedPoint> {
        self.points().filter(|p| p.color == color).collect()
    }

    pub fn arcs(&self) -> impl Iterator<Item = usize> + '_ {
        self.walk.iter().filter_map(|step| match step {
            FaceStep::Arc { arc, .. } => Some(*arc),
            FaceStep::Boundary { .. } => None,
        })
    }

    pub fn has_boundary_segment(&self) -> bool {
        self.walk
            .iter()
            .any(|step| matches!(step, FaceStep::Boundary { segment: true, .. }))
    }

    /// Arcs in walk order, starting right after the boundary stretch that
    /// contains `point`.
    fn arcs_after(&self, point: MarkedPoint) -> Option<Vec<usize>> {
        let start = self.walk.iter().position(|step| match step {
            FaceStep::Boundary { points, .. } => points.contains(&point),
            FaceStep::Arc { .. } => false,
        })?;
        let n = self.walk.len();
        Some(
            (1..n)
                .filter_map(|k| match &self.walk[(start + k) % n] {
                    FaceStep::Arc { arc, .. } => Some(*arc),
                    FaceStep::Boundary { .. } => None,
                })
                .collect(),
        )
    }
}

/// A validated, pairwise non-crossing and admissible arc system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dissection {
    disk: MarkedDisk,
    color: Color,
    arcs: Vec<Chord>,
    faces: Vec<Face>,
}

impl Dissection {
    /// Checks slots, crossings and admissibility, and computes faces.
    ///
    /// Arcs are re-ordered canonically (by smaller end, then larger end).
    pub fn validate(disk: MarkedDisk, color: Color, arcs: Vec<Chord>) -> Result<Self> {
        let mut arcs: Vec<Chord> = arcs
            .into_iter()
            .map(|c| Chord::new(color, c.a, c.b))
            .collect();
        arcs.sort();

        check_slots(&disk, &arcs)?;
        for (i, a) in arcs.iter().enumerate() {
            for b in &arcs[i + 1..] {
                if chords_cross(a, b) == Crossing::Interior {
                    return Err(Error::CrossingArcs {
                        first: *a,
                        second: *b,
                    });
                }
            }
        }

        let faces = walk_faces(&disk, color, &arcs);
        if let Some(face) = faces.iter().position(|f| !f.has_boundary_segment()) {
            return Err(Error::InadmissibleFace { face });
        }
        if faces.len() != arcs.len() + 1 {
            return Err(Error::Internal(format!(
                "{} faces for {} non-crossing arcs on a disk",
                faces.len(),
                arcs.len()
            )));
        }
        Ok(Self {
            disk,
            color,
            arcs,
            faces,
        })
    }

    /// Builds a dissection from point pairs, placing slots as straight chords
    /// between points in convex position would: at each point, the arc whose
    /// other end lies farthest counterclockwise takes the lowest slot.
    pub fn from_point_pairs(
        disk: MarkedDisk,
        color: Color,
        pairs: &[(usize, usize)],
    ) -> Result<Self> {
        let mut ends: BTreeMap<usize, Vec<(usize, usize, usize)>> = BTreeMap::new();
        for (arc, &(u, v)) in pairs.iter().enumerate() {
            if u >= disk.m() || v >= disk.m() {
                return Err(Error::DanglingSlot {
                    owner: u.max(v),
                    position: 0,
                });
            }
            if u == v {
                return Err(Error::Precondition(format!(
                    "loop at {} cannot be placed from a point pair",
                    MarkedPoint { color, index: u }
                )));
            }
            for (here, there, end) in [(u, v, 0), (v, u, 1)] {
                let item = |i| MarkedPoint { color, index: i }.item();
                let dist = disk.ccw_distance(item(here), item(there));
                ends.entry(here).or_default().push((dist, arc, end));
            }
        }
        let mut slots = vec![[Slot::new(0, 0); 2]; pairs.len()];
        for (owner, mut list) in ends {
            list.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
            for (position, (_, arc, end)) in list.into_iter().enumerate() {
                slots[arc][end] = Slot::new(owner, position);
            }
        }
        let arcs = slots
            .into_iter()
            .map(|[a, b]| Chord::new(color, a, b))
            .collect();
        Self::validate(disk, color, arcs)
    }

    /// A uniformly shuffled greedy non-crossing spanning tree on the points
    /// of `color`; every maximal admissible dissection of a disk has this shape.
    pub fn random_maximal<R: Rng + ?Sized>(disk: MarkedDisk, color: Color, rng: &mut R) -> Self {
        let m = disk.m();
        let mut candidates: Vec<(usize, usize)> = (0..m)
            .flat_map(|u| (u + 1..m).map(move |v| (u, v)))
            .collect();
        candidates.shuffle(rng);

        let mut parent: Vec<usize> = (0..m).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }

        let mut chosen: Vec<(usize, usize)> = Vec::with_capacity(m.saturating_sub(1));
        for (u, v) in candidates {
            if chosen.len() + 1 == m {
                break;
            }
            let crosses = chosen.iter().any(|&(x, y)| interleave((u, v), (x, y)));
            if crosses {
                continue;
            }
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru == rv {
                continue;
            }
            parent[ru] = rv;
            chosen.push((u, v));
        }
        Self::from_point_pairs(disk, color, &chosen)
            .expect("non-crossing spanning trees are maximal admissible dissections")
    }

    pub fn disk(&self) -> MarkedDisk {
        self.disk
    }

    pub fn color(&self) -> Color {
        self.color
    }

    pub fn arcs(&self) -> &[Chord] {
        &self.arcs
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// True iff every face holds exactly one point of the opposite colour.
    ///
    /// Cross-checked against the arc count `m - 1`; disagreement is a bug.
    pub fn is_maximal(&self) -> bool {
        let opposite = self.color.opposite();
        let by_faces = self.faces.iter().all(|f| f.points_of(opposite).len() == 1);
        let by_count = self.arcs.len() + 1 == self.disk.m();
        assert_eq!(
            by_faces, by_count,
            "face criterion and arc count disagree on maximality"
        );
        by_faces
    }

    /// The two faces on either side of each arc, indexed like `arcs()`.
    pub fn arc_faces(&self) -> Vec<[usize; 2]> {
        let mut sides: Vec<Vec<usize>> = vec![Vec::with_capacity(2); self.arcs.len()];
        for (f, face) in self.faces.iter().enumerate() {
            for arc in face.arcs() {
                sides[arc].push(f);
            }
        }
        sides
            .into_iter()
            .map(|s| {
                debug_assert_eq!(s.len(), 2);
                [s[0], s[1]]
            })
            .collect()
    }

    /// Face whose boundary stretches contain `point`.
    pub fn face_of(&self, point: MarkedPoint) -> Option<usize> {
        self.faces
            .iter()
            .position(|f| f.points().any(|p| p == point))
    }

    /// The dual dissection: one arc of the opposite colour per arc, joining
    /// the opposite-colour points of the two adjacent faces.
    ///
    /// At each dual endpoint the arc ends are ordered by where the primal
    /// arcs appear in that face's walk, so that each dual arc crosses its
    /// primal arc once and nothing else.
    pub fn dual(&self) -> Result<Dissection> {
        if !self.is_maximal() {
            return Err(Error::Precondition(
                "the dual is only defined for a maximal dissection".into(),
            ));
        }
        let opposite = self.color.opposite();
        // (face, arc) -> slot at that face's opposite-colour point
        let mut slot_in_face: BTreeMap<(usize, usize), Slot> = BTreeMap::new();
        for (f, face) in self.faces.iter().enumerate() {
            let point = face.points_of(opposite)[0];
            let order = face
                .arcs_after(point)
                .ok_or_else(|| Error::Internal(format!("{point} missing from face {f}")))?;
            let r = order.len();
            for (j, arc) in order.into_iter().enumerate() {
                slot_in_face.insert((f, arc), Slot::new(point.index, r - 1 - j));
            }
        }
        let chords = self
            .arc_faces()
            .into_iter()
            .enumerate()
            .map(|(arc, [f, g])| {
                Chord::new(opposite, slot_in_face[&(f, arc)], slot_in_face[&(g, arc)])
            })
            .collect();
        let dual = Dissection::validate(self.disk, opposite, chords)?;

        for beta in dual.arcs() {
            let crossed: Vec<&Chord> = self
                .arcs
                .iter()
                .filter(|alpha| chords_cross(alpha, beta) == Crossing::Interior)
                .collect();
            if crossed.len() != 1 {
                return Err(Error::Internal(format!(
                    "dual arc {beta} crosses {} primal arcs",
                    crossed.len()
                )));
            }
        }
        if !dual.is_maximal() {
            return Err(Error::Internal("dual dissection is not maximal".into()));
        }
        Ok(dual)
    }
}

fn check_slots(disk: &MarkedDisk, arcs: &[Chord]) -> Result<()> {
    let mut used: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for arc in arcs {
        if arc.a == arc.b {
            return Err(Error::DegenerateChord(*arc));
        }
        for slot in [arc.a, arc.b] {
            if slot.owner >= disk.m() {
                return Err(Error::DanglingSlot {
                    owner: slot.owner,
                    position: slot.position,
                });
            }
            used.entry(slot.owner).or_default().push(slot.position);
        }
    }
    for (owner, mut positions) in used {
        positions.sort_unstable();
        for (expected, &position) in positions.iter().enumerate() {
            match position.cmp(&expected) {
                Ordering::Equal => {}
                Ordering::Less => return Err(Error::DuplicateSlot { owner, position }),
                Ordering::Greater => {
                    return Err(Error::DanglingSlot {
                        owner,
                        position: expected,
                    })
                }
            }
        }
    }
    Ok(())
}

/// Marked points strictly between two consecutive arc ends, walking
/// counterclockwise. `wrap` marks the stretch that closes the cyclic order.
fn stretch(disk: &MarkedDisk, from: BoundaryKey, to: BoundaryKey, wrap: bool) -> FaceStep {
    let n = disk.items();
    if from.0 == to.0 && !wrap {
        return FaceStep::Boundary {
            points: Vec::new(),
            segment: false,
        };
    }
    let steps = match disk.ccw_distance(from.0, to.0) {
        0 => n,
        d => d,
    };
    let points = (1..steps)
        .map(|k| disk.point_at((from.0 + k) % n))
        .collect();
    FaceStep::Boundary {
        points,
        segment: true,
    }
}

fn walk_faces(disk: &MarkedDisk, color: Color, arcs: &[Chord]) -> Vec<Face> {
    if arcs.is_empty() {
        return vec![Face {
            walk: vec![FaceStep::Boundary {
                points: disk.boundary(),
                segment: true,
            }],
        }];
    }
    let mut ends: Vec<(BoundaryKey, usize, usize)> = arcs
        .iter()
        .enumerate()
        .flat_map(|(i, arc)| {
            [
                (slot_key(color, arc.a), i, 0),
                (slot_key(color, arc.b), i, 1),
            ]
        })
        .collect();
    ends.sort();
    let k = ends.len();
    let mut index_of = vec![[0usize; 2]; arcs.len()];
    for (idx, &(_, arc, end)) in ends.iter().enumerate() {
        index_of[arc][end] = idx;
    }

    let mut visited = vec![false; k];
    let mut faces = Vec::new();
    for start in 0..k {
        if visited[start] {
            continue;
        }
        let mut walk = Vec::new();
        let mut gap = start;
        while !visited[gap] {
            visited[gap] = true;
            let next = (gap + 1) % k;
            walk.push(stretch(disk, ends[gap].0, ends[next].0, next <= gap));
            let (_, arc, end) = ends[next];
            let across = index_of[arc][1 - end];
            walk.push(FaceStep::Arc {
                arc,
                from: arcs[arc].end(end),
                to: arcs[arc].end(1 - end),
            });
            gap = across;
        }
        faces.push(Face { walk });
    }
    faces
}

/// JSON interchange form of a dissection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DissectionFile {
    pub m: usize,
    pub arcs: Vec<[usize; 4]>,
    pub kind: Color,
}

impl DissectionFile {
    pub fn into_dissection(self) -> Result<Dissection> {
        let disk = MarkedDisk::new(self.m)?;
        let arcs = self
            .arcs
            .iter()
            .map(|&[oa, sa, ob, sb]| Chord::new(self.kind, Slot::new(oa, sa), Slot::new(ob, sb)))
            .collect();
        Dissection::validate(disk, self.kind, arcs)
    }
}

impl From<&Dissection> for DissectionFile {
    fn from(d: &Dissection) -> Self {
        Self {
            m: d.disk.m(),
            arcs: d
                .arcs
                .iter()
                .map(|c| [c.a.owner, c.a.position, c.b.owner, c.b.position])
                .collect(),
            kind: d.color,
        }
    }
}
