//! Toolkit for the Tatamibari pencil puzzle and its hardness machinery.
//!
//! The crate has three layers:
//!
//! 1. **Puzzle layer** — [`grid`] defines puzzles, clues, rectangles and
//!    solutions; [`validate`] checks the seven Tatamibari rules; [`solve`]
//!    is a complete backtracking solver that can decide, enumerate and
//!    count solutions exactly.
//! 2. **Gadget layer** — [`framework`] implements gadgets with mandatory
//!    and optional areas, profiles and profile tables, verified by
//!    exhaustive enumeration; [`gadgets`] generates the concrete wire,
//!    terminator, variable and clause gadgets used by the reduction.
//! 3. **Reduction layer** — [`reduce`] compiles planar rectilinear
//!    monotone 3SAT instances into Tatamibari puzzles that are solvable
//!    exactly when the formula is satisfiable.
//!
//! [`spiral`] instantiates the same gadget framework for the Spiral
//! Galaxies puzzle, and [`render`] draws solved puzzles as ASCII or SVG.

pub mod framework;
pub mod gadgets;
pub mod grid;
pub mod reduce;
pub mod render;
pub mod solve;
pub mod spiral;
pub mod validate;

pub use grid::{CellSet, Clue, ClueKind, LatticePoint, Puzzle, Rect, Shade, Solution};
pub use solve::{SearchConfig, SolveOutcome, SolveStatus};
pub use validate::{Verdict, Violation};
