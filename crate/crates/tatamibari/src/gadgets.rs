//! Concrete Tatamibari gadgets: wire, terminator, variable and clause.
//!
//! All generators work in a shared coordinate template. A wire is four
//! columns `[sheath][plus][empty][sheath]` with `+` clues at odd rows and
//! `|` sheathing clues at even rows. Its squares sit either one row up or
//! one row down, which is the truth value the wire transports; the only
//! cells whose coverage depends on that choice are the two inner cells at
//! each end, and those form the gadget's optional areas.
//!
//! The profile tables claimed here are verified exhaustively by
//! [`crate::framework::check_table`]; the unit tests and the acceptance
//! suite run that check for every shipped size.

use crate::framework::{Gadget, GadgetFile};
use crate::grid::{CellSet, Clue, ClueKind};
use crate::validate::Fragment;

/// Helper for assembling fragments cell by cell.
struct Builder {
    rows: usize,
    cols: usize,
    cells: CellSet,
    mandatory: CellSet,
    optionals: Vec<CellSet>,
    clues: Vec<Clue>,
}

impl Builder {
    fn new(rows: usize, cols: usize) -> Builder {
        Builder {
            rows,
            cols,
            cells: CellSet::empty(rows, cols),
            mandatory: CellSet::empty(rows, cols),
            optionals: Vec::new(),
            clues: Vec::new(),
        }
    }

    fn mandatory(&mut self, row: usize, col: usize) {
        assert!(!self.cells.contains(row, col), "cell ({row}, {col}) added twice");
        self.cells.insert(row, col);
        self.mandatory.insert(row, col);
    }

    fn clue(&mut self, row: usize, col: usize, kind: ClueKind) {
        self.mandatory(row, col);
        self.clues.push(Clue::new(row, col, kind));
    }

    /// Add an optional area; returns its index.
    fn optional(&mut self, cells: &[(usize, usize)]) -> usize {
        let mut set = CellSet::empty(self.rows, self.cols);
        for &(r, c) in cells {
            assert!(!self.cells.contains(r, c), "cell ({r}, {c}) added twice");
            self.cells.insert(r, c);
            set.insert(r, c);
        }
        self.optionals.push(set);
        self.optionals.len() - 1
    }

    fn build(self, name: impl Into<String>) -> Gadget {
        let frag = Fragment::new(self.rows, self.cols, self.cells, self.clues);
        Gadget::new(name, frag, self.mandatory, self.optionals)
    }
}

/// A vertical wire: `units` repeat units, one `+` clue each.
///
/// The fragment spans rows `0..=2*units+1` and four columns. Optional
/// area 0 is the top inner cell pair (covered exactly when the squares
/// shift toward the top), optional area 1 the bottom pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WireSpec {
    pub units: usize,
}

impl WireSpec {
    pub fn new(units: usize) -> WireSpec {
        assert!(units >= 2, "a wire needs at least two repeat units");
        WireSpec { units }
    }

    /// Fragment height in rows.
    pub fn rows(&self) -> usize {
        2 * self.units + 2
    }
}

pub const WIRE_COLS: usize = 4;

/// Column roles inside a wire block.
pub const WIRE_SHEATH_LEFT: usize = 0;
pub const WIRE_PLUS: usize = 1;
pub const WIRE_EMPTY: usize = 2;
pub const WIRE_SHEATH_RIGHT: usize = 3;

/// Expected profile table of every wire: optional 0 alone (value carried
/// upward) and optional 1 alone.
pub const WIRE_TABLE: [u32; 2] = [0b01, 0b10];

pub fn make_wire(spec: WireSpec) -> Gadget {
    let k = spec.units;
    let rows = spec.rows();
    let mut b = Builder::new(rows, WIRE_COLS);

    // Inner columns: cells 0..=2k, `+` clues at odd rows.
    for r in 1..2 * k {
        b.mandatory(r, WIRE_EMPTY);
        if r % 2 == 1 {
            b.clue(r, WIRE_PLUS, ClueKind::Square);
        } else {
            b.mandatory(r, WIRE_PLUS);
        }
    }
    // Sheathing columns: cells 1..=2k+1, `|` clues at even rows 2..=2k.
    for col in [WIRE_SHEATH_LEFT, WIRE_SHEATH_RIGHT] {
        for r in 1..=2 * k + 1 {
            if r % 2 == 0 {
                b.clue(r, col, ClueKind::Vertical);
            } else {
                b.mandatory(r, col);
            }
        }
    }
    b.optional(&[(0, WIRE_PLUS), (0, WIRE_EMPTY)]);
    b.optional(&[(2 * k, WIRE_PLUS), (2 * k, WIRE_EMPTY)]);
    b.build(format!("wire-{k}"))
}

/// Expected terminator table: both end cells covered, or neither.
pub const TERMINATOR_TABLE: [u32; 2] = [0b00, 0b11];

/// Which way a cap faces. `FacingUp` caps the lower end of a wire that
/// continues upward; `FacingDown` is its vertical mirror.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapOrientation {
    FacingUp,
    FacingDown,
}

/// Caps one end of a wire so both wire values stay solvable and the far
/// boundary is flat.
///
/// Row 0 holds the shared optional cells (the wire's end cell pair); rows
/// 1..=7 are the cap body. Columns are the wire's inner pair.
pub fn make_terminator(orientation: CapOrientation) -> Gadget {
    let rows = 8;
    let mut b = Builder::new(rows, 2);
    let flip = |r: usize| match orientation {
        CapOrientation::FacingUp => r,
        CapOrientation::FacingDown => rows - 1 - r,
    };
    // `+` immediately past the interface; it absorbs the wire value by
    // sitting as a square on rows (0,1) or (1,2).
    for r in 1..rows {
        for c in 0..2 {
            if (r, c) == (1, 0) {
                b.clue(flip(r), c, ClueKind::Square);
            } else if r == 3 || r == 6 {
                b.clue(flip(r), c, ClueKind::Vertical);
            } else {
                b.mandatory(flip(r), c);
            }
        }
    }
    // The interface: each cell its own optional area so the framework
    // invariant (two or more optionals) holds; they always flip together.
    b.optional(&[(flip(0), 0)]);
    b.optional(&[(flip(0), 1)]);
    b.build(match orientation {
        CapOrientation::FacingUp => "terminator-up",
        CapOrientation::FacingDown => "terminator-down",
    })
}

/// Write a gadget with its expected table into the definition file format.
pub fn to_file(gadget: Gadget, expected_masks: Vec<u32>) -> GadgetFile {
    GadgetFile { gadget, expected_masks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::{check_table, enumerate_profiles, local_solutions, proper_profiles};

    const BUDGET: u64 = 10_000_000;

    #[test]
    fn wire_profile_table_is_two_valued() {
        for units in [2, 3, 4] {
            let g = make_wire(WireSpec::new(units));
            let report = check_table(&g, &WIRE_TABLE, &[], BUDGET).unwrap();
            assert!(report.ok(), "wire units={units}: {report}");
            assert_eq!(report.solvable, 2);
        }
    }

    #[test]
    fn wire_has_four_proper_profiles() {
        let g = make_wire(WireSpec::new(2));
        assert_eq!(proper_profiles(&g).len(), 4);
    }

    #[test]
    fn wire_one_sided_profiles_are_unsolvable() {
        let g = make_wire(WireSpec::new(2));
        assert!(local_solutions(&g, &g.profile_from_mask(0b00)).is_empty());
        assert!(local_solutions(&g, &g.profile_from_mask(0b11)).is_empty());
        assert!(!local_solutions(&g, &g.profile_from_mask(0b01)).is_empty());
        assert!(!local_solutions(&g, &g.profile_from_mask(0b10)).is_empty());
    }

    #[test]
    fn terminator_table_is_two_valued() {
        for orientation in [CapOrientation::FacingUp, CapOrientation::FacingDown] {
            let g = make_terminator(orientation);
            let report = check_table(&g, &TERMINATOR_TABLE, &[], BUDGET).unwrap();
            assert!(report.ok(), "{report}");
        }
    }

    #[test]
    fn wire_witnesses_use_two_by_two_squares() {
        let g = make_wire(WireSpec::new(3));
        let (table, improper) = enumerate_profiles(&g, BUDGET).unwrap();
        assert!(improper.is_empty());
        for (_, witness) in &table.entries {
            for (clue, rect) in g.fragment().clues().iter().zip(witness.rects()) {
                if clue.kind == ClueKind::Square {
                    assert_eq!((rect.height, rect.width), (2, 2), "wire squares are 2x2");
                }
            }
        }
    }
}
