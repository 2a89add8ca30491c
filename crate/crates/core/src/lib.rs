//! Combinatorial model of derived categories of gentle algebras on a disk:
//! dissections and their duals, the gentle algebra of a dissection, graded
//! slalom arcs, and counts of d-term silting objects for linear `A_n`.

pub mod algebra;
pub mod count;
pub mod disk;
mod error;
pub mod slalom;

pub use algebra::{
    algebra_from_dissection, fan_dissection_linear_an, is_gentle, is_linear_an, Arrow,
    GentleAlgebra, QuiverFile,
};
pub use count::{
    census_size, census_slaloms, count_recursive, count_silting_brute_force, count_trees,
    enumerate_silting_an, enumerate_slaloms_an, fuss_catalan, slaloms_of, verify, ConflictGraph,
    CountReport, Guard, SiltingCollection,
};
pub use disk::{
    chords_cross, Chord, Color, Crossing, Dissection, DissectionFile, Face, MarkedDisk,
    MarkedPoint, Slot,
};
pub use error::{Error, Result};
pub use slalom::{
    classify_intersection, crossing_sequence, ext_positive_some_direction, grading_function,
    is_presilting, is_silting, CrossArc, CrossingEntry, GradedArc, IntersectionReport, RefinedDisk,
    Side, Surface, Window, XPair, XPoint,
};
