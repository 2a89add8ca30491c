use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use silt_core::Color;
use silt_core::{
    algebra_from_dissection, census_size, census_slaloms, chords_cross, classify_intersection,
    enumerate_silting_an, enumerate_slaloms_an, is_gentle, slaloms_of, ConflictGraph, CrossArc,
    Crossing, Dissection, Guard, IntersectionReport, MarkedDisk, Surface, Window, XPair, XPoint,
};

/// Intersection counts recomputed from the collapsed graded arcs only.
fn graded_report(surface: &Surface, a: &CrossArc, b: &CrossArc) -> IntersectionReport {
    let (ga, gb) = (a.collapse().unwrap(), b.collapse().unwrap());
    ga.intersections(&gb, surface.refined().base())
}

fn mismatched_pairs(surface: &Surface, d: usize) -> usize {
    let slaloms = slaloms_of(surface, d).unwrap();
    let arcs: Vec<CrossArc> = slaloms
        .iter()
        .map(|&p| CrossArc::new(surface, p).unwrap())
        .collect();
    let mut mismatches = 0;
    for (i, a) in arcs.iter().enumerate() {
        for b in &arcs[i + 1..] {
            let chord = classify_intersection(a, b).unwrap();
            let graded = graded_report(surface, a, b);
            if chord != graded {
                eprintln!(
                    "{} vs {}: chord {chord:?}, graded {graded:?}",
                    a.pair, b.pair
                );
                mismatches += 1;
            }
        }
    }
    mismatches
}

#[test]
fn graded_intersections_agree_on_fans() {
    for n in 1..=4 {
        for d in 1..=3 {
            let s = Surface::linear_an(n, d).unwrap();
            assert_eq!(mismatched_pairs(&s, d), 0, "n={n}, d={d}");
        }
    }
}

#[test]
fn graded_intersections_agree_on_random_dissections() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for m in 2..=7 {
        for _ in 0..6 {
            let disk = MarkedDisk::new(m).unwrap();
            let dissection = Dissection::random_maximal(disk, Color::Circ, &mut rng);
            for d in 1..=3 {
                let s = Surface::new(dissection.clone(), Window::Term { d }).unwrap();
                assert_eq!(
                    mismatched_pairs(&s, d),
                    0,
                    "m={m}, d={d}, {:?}",
                    dissection.arcs()
                );
            }
        }
    }
}

#[test]
fn census_matches_enumeration() {
    for n in 1..=6 {
        for d in 1..=4 {
            let found = enumerate_slaloms_an(n, d).unwrap();
            assert_eq!(found.len(), census_size(n, d));
            assert_eq!(found, census_slaloms(n, d));
        }
    }
}

#[test]
fn window_filter_is_endpoint_membership() {
    // every slalom with both ends in the window already has its grading there
    for n in 1..=5 {
        for d in 1..=4 {
            let s = Surface::linear_an(n, d).unwrap();
            let points = s.refined().x_points().unwrap();
            for (i, &p) in points.iter().enumerate() {
                for &q in &points[i + 1..] {
                    if let Ok(arc) = CrossArc::new(&s, XPair::new(p, q)) {
                        if arc.is_slalom() {
                            assert!(arc.in_window(d), "{}", arc.pair);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn same_cluster_arcs_never_cross_the_dual() {
    let s = Surface::linear_an(3, 3).unwrap();
    for c in 0..4 {
        let pair = XPair::new(XPoint::new(c, -2), XPoint::new(c, 0));
        assert!(CrossArc::new(&s, pair).is_err());
    }
}

fn reflect(p: XPoint, n: usize, d: usize) -> XPoint {
    let cluster = if p.cluster == 0 { 0 } else { n + 1 - p.cluster };
    XPoint::new(cluster, 1 - d as i64 - p.index)
}

#[test]
fn reflection_preserves_collections() {
    for (n, d) in [(2, 2), (3, 2), (3, 3), (4, 2), (2, 4)] {
        let collections = enumerate_silting_an(n, d, &Guard::default()).unwrap();
        let as_sets: BTreeSet<BTreeSet<XPair>> = collections
            .iter()
            .map(|c| c.slaloms.iter().copied().collect())
            .collect();
        let mirrored: BTreeSet<BTreeSet<XPair>> = as_sets
            .iter()
            .map(|set| {
                set.iter()
                    .map(|p| XPair::new(reflect(p.s, n, d), reflect(p.t, n, d)).canonical())
                    .collect()
            })
            .collect();
        assert_eq!(as_sets, mirrored, "n={n}, d={d}");
    }
}

#[test]
fn collections_are_maximal_and_bounded() {
    for (n, d) in [(1, 3), (2, 2), (3, 3), (4, 2), (5, 2)] {
        let graph = ConflictGraph::build(n, d).unwrap();
        let sets = graph.independent_sets(n);
        assert!(sets.iter().all(|s| graph.is_maximal(s)));
        assert_eq!(graph.count_independent_sets(n + 1), 0);
    }
}

#[test]
fn parallel_enumeration_is_deterministic() {
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let one = single.install(|| enumerate_silting_an(4, 3, &Guard::default()).unwrap());
    let many = enumerate_silting_an(4, 3, &Guard::default()).unwrap();
    assert_eq!(one, many);
}

#[test]
fn random_algebras_are_gentle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for m in 1..=12 {
        for _ in 0..10 {
            let d = Dissection::random_maximal(MarkedDisk::new(m).unwrap(), Color::Circ, &mut rng);
            let a = algebra_from_dissection(&d).unwrap();
            assert!(is_gentle(&a));
            assert_eq!(a.rank(), m - 1);
            // one arrow fewer than arc ends at each point
            for p in 0..m {
                let ends = d
                    .arcs()
                    .iter()
                    .flat_map(|c| [c.a, c.b])
                    .filter(|s| s.owner == p)
                    .count();
                let arrows = a.arrows.iter().filter(|x| x.anchor == p).count();
                assert_eq!(arrows, ends.saturating_sub(1));
            }
        }
    }
}

#[test]
fn dual_arcs_cross_exactly_their_primal_arc() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let m = 1 + (rand::Rng::gen_range(&mut rng, 0..10));
        let d = Dissection::random_maximal(MarkedDisk::new(m).unwrap(), Color::Circ, &mut rng);
        let dual = d.dual().unwrap();
        for beta in dual.arcs() {
            let hits = d
                .arcs()
                .iter()
                .filter(|a| chords_cross(a, beta) == Crossing::Interior)
                .count();
            assert_eq!(hits, 1);
        }
        assert!(dual
            .faces()
            .iter()
            .all(|f| f.points_of(Color::Circ).len() == 1));
    }
}
