//! Gentle algebras of maximal dissections.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::disk::{Color, Dissection, MarkedDisk, Slot};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    /// Marked point at which the two arcs meet.
    pub anchor: usize,
}

/// A bound quiver with monomial relations of length two.
///
/// Vertices are `0..vertices`; relations are pairs of arrow indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GentleAlgebra {
    pub vertices: usize,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<(usize, usize)>,
}

impl GentleAlgebra {
    pub fn rank(&self) -> usize {
        self.vertices
    }

    fn composable(&self, a: usize, b: usize) -> bool {
        self.arrows[a].target == self.arrows[b].source
    }

    /// Graphviz rendering with 1-based vertex labels; each relation is drawn
    /// as a dashed edge over the path it kills.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph quiver {\n  rankdir=LR;\n");
        for v in 1..=self.vertices {
            let _ = writeln!(out, "  {v};");
        }
        for a in &self.arrows {
            let _ = writeln!(out, "  {} -> {};", a.source + 1, a.target + 1);
        }
        for &(a, b) in &self.relations {
            let _ = writeln!(
                out,
                "  {} -> {} [style=dashed, constraint=false];",
                self.arrows[a].source + 1,
                self.arrows[b].target + 1
            );
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> QuiverFile {
        QuiverFile {
            vertices: self.vertices,
            arrows: self
                .arrows
                .iter()
                .map(|a| [a.source + 1, a.target + 1])
                .collect(),
            relations: self.relations.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

/// JSON form of a quiver: 1-based arrow endpoints, 0-based arrow indices in
/// relations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverFile {
    pub vertices: usize,
    pub arrows: Vec<[usize; 2]>,
    pub relations: Vec<[usize; 2]>,
}

/// Reads off the quiver with relations of a maximal dissection.
///
/// Vertex `i` is the `i`-th arc in canonical order. At each marked point,
/// consecutive arc ends give an arrow; two arrows compose to a relation when
/// the second leaves the middle arc from its other end.
pub fn algebra_from_dissection(d: &Dissection) -> Result<GentleAlgebra> {
    if !d.is_maximal() {
        return Err(Error::Precondition(
            "algebra extraction needs a maximal dissection".into(),
        ));
    }
    let mut at_slot: BTreeMap<Slot, usize> = BTreeMap::new();
    for (i, arc) in d.arcs().iter().enumerate() {
        at_slot.insert(arc.a, i);
        at_slot.insert(arc.b, i);
    }

    // (arrow, slot where it leaves its source, slot where it enters its target)
    let mut arrows: Vec<(Arrow, Slot, Slot)> = Vec::new();
    for (&slot, &source) in &at_slot {
        let next = Slot::new(slot.owner, slot.position + 1);
        if let Some(&target) = at_slot.get(&next) {
            let arrow = Arrow {
                source,
                target,
                anchor: slot.owner,
            };
            arrows.push((arrow, slot, next));
        }
    }

    let mut relations = Vec::new();
    for (i, (a, _, head)) in arrows.iter().enumerate() {
        for (j, (b, tail, _)) in arrows.iter().enumerate() {
            if a.target == b.source && head != tail {
                relations.push((i, j));
            }
        }
    }

    let algebra = GentleAlgebra {
        vertices: d.arcs().len(),
        arrows: arrows.into_iter().map(|(a, _, _)| a).collect(),
        relations,
    };
    if !is_gentle(&algebra) {
        return Err(Error::Internal(
            "extracted algebra violates gentleness".into(),
        ));
    }
    Ok(algebra)
}

pub fn is_gentle(a: &GentleAlgebra) -> bool {
    let mut indeg = vec![0usize; a.vertices];
    let mut outdeg = vec![0usize; a.vertices];
    for arrow in &a.arrows {
        if arrow.source >= a.vertices || arrow.target >= a.vertices {
            return false;
        }
        outdeg[arrow.source] += 1;
        indeg[arrow.target] += 1;
    }
    if indeg.iter().chain(&outdeg).any(|&k| k > 2) {
        return false;
    }

    let arrows = a.arrows.len();
    let mut seen = std::collections::BTreeSet::new();
    for &(x, y) in &a.relations {
        if x >= arrows || y >= arrows || !a.composable(x, y) || !seen.insert((x, y)) {
            return false;
        }
    }

    let related = |x: usize, y: usize| seen.contains(&(x, y));
    for x in 0..arrows {
        let after: Vec<usize> = (0..arrows).filter(|&y| a.composable(x, y)).collect();
        let killed = after.iter().filter(|&&y| related(x, y)).count();
        if killed > 1 || after.len() - killed > 1 {
            return false;
        }
        let before: Vec<usize> = (0..arrows).filter(|&y| a.composable(y, x)).collect();
        let killed = before.iter().filter(|&&y| related(y, x)).count();
        if killed > 1 || before.len() - killed > 1 {
            return false;
        }
    }
    true
}

/// The fan dissection on `n + 1` points whose algebra is `1 -> 2 -> ... -> n`.
pub fn fan_dissection_linear_an(n: usize) -> Result<(MarkedDisk, Dissection)> {
    if n == 0 {
        return Err(Error::Precondition("the fan needs rank at least 1".into()));
    }
    fan(n)
}

/// Like [`fan_dissection_linear_an`] but also accepts the empty fan on a
/// one-point disk.
pub(crate) fn fan(n: usize) -> Result<(MarkedDisk, Dissection)> {
    let disk = MarkedDisk::new(n + 1)?;
    let pairs: Vec<(usize, usize)> = (1..=n).map(|i| (0, i)).collect();
    let d = Dissection::from_point_pairs(disk, Color::Circ, &pairs)?;
    Ok((disk, d))
}

/// Whether `a` is literally the path `1 -> 2 -> ... -> n` with no relations.
pub fn is_linear_an(a: &GentleAlgebra, n: usize) -> bool {
    a.vertices == n
        && a.relations.is_empty()
        && a.arrows.len() + 1 == n.max(1)
        && a.arrows
            .iter()
            .enumerate()
            .all(|(k, arrow)| arrow.source == k && arrow.target == k + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zigzag() -> Dissection {
        let disk = MarkedDisk::new(4).unwrap();
        Dissection::from_point_pairs(disk, Color::Circ, &[(0, 1), (1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn fan_gives_linear_an() {
        for n in 1..=8 {
            let (disk, d) = fan_dissection_linear_an(n).unwrap();
            assert_eq!(disk.m(), n + 1);
            let a = algebra_from_dissection(&d).unwrap();
            assert!(is_linear_an(&a, n), "n={n}: {a:?}");
        }
        assert!(matches!(
            fan_dissection_linear_an(0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn single_arc_is_the_field() {
        let (_, d) = fan_dissection_linear_an(1).unwrap();
        let a = algebra_from_dissection(&d).unwrap();
        assert_eq!(
            a,
            GentleAlgebra {
                vertices: 1,
                ..Default::default()
            }
        );
    }

    #[test]
    fn zigzag_has_one_relation() {
        let a = algebra_from_dissection(&zigzag()).unwrap();
        assert_eq!(a.vertices, 3);
        assert_eq!(
            a.arrows,
            vec![
                Arrow {
                    source: 0,
                    target: 1,
                    anchor: 1
                },
                Arrow {
                    source: 1,
                    target: 2,
                    anchor: 2
                },
            ]
        );
        assert_eq!(a.relations, vec![(0, 1)]);
        assert!(is_gentle(&a));
    }

    #[test]
    fn non_maximal_is_rejected() {
        let disk = MarkedDisk::new(3).unwrap();
        let d = Dissection::from_point_pairs(disk, Color::Circ, &[(0, 1)]).unwrap();
        assert!(matches!(
            algebra_from_dissection(&d),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn gentleness_validator() {
        assert!(is_gentle(&GentleAlgebra {
            vertices: 1,
            ..Default::default()
        }));
        let star = GentleAlgebra {
            vertices: 4,
            arrows: (1..4)
                .map(|t| Arrow {
                    source: 0,
                    target: t,
                    anchor: 0,
                })
                .collect(),
            relations: vec![],
        };
        assert!(!is_gentle(&star));
        // two arrows into and out of vertex 1 with no relation at all
        let cross = GentleAlgebra {
            vertices: 5,
            arrows: vec![
                Arrow {
                    source: 0,
                    target: 1,
                    anchor: 0,
                },
                Arrow {
                    source: 2,
                    target: 1,
                    anchor: 0,
                },
                Arrow {
                    source: 1,
                    target: 3,
                    anchor: 0,
                },
                Arrow {
                    source: 1,
                    target: 4,
                    anchor: 0,
                },
            ],
            relations: vec![],
        };
        assert!(!is_gentle(&cross));
        let fixed = GentleAlgebra {
            relations: vec![(0, 2), (1, 3)],
            ..cross
        };
        assert!(is_gentle(&fixed));
        let bogus = GentleAlgebra {
            relations: vec![(2, 0)],
            ..fixed
        };
        assert!(!is_gentle(&bogus));
    }

    #[test]
    fn exports() {
        let a = algebra_from_dissection(&zigzag()).unwrap();
        let json = serde_json::to_string(&a.to_json()).unwrap();
        assert_eq!(
            json,
            r#"{"vertices":3,"arrows":[[1,2],[2,3]],"relations":[[0,1]]}"#
        );
        let dot = a.to_dot();
        assert!(dot.contains("  1 -> 2;\n  2 -> 3;\n"));
        assert!(dot.contains("1 -> 3 [style=dashed"));
    }
}
