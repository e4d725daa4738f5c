//! The seven Tatamibari rules, checked exhaustively.
//!
//! A solution is valid when:
//!
//! 1. the rectangles are disjoint,
//! 2. they cover every cell,
//! 3. each rectangle contains exactly one clue (its own),
//! 4. `+` rectangles are square,
//! 5. `-` rectangles are wider than tall,
//! 6. `|` rectangles are taller than wide, and
//! 7. no four rectangles share a corner point.
//!
//! [`validate_local`] is the relaxed form used by the gadget framework: it
//! checks the same rules over a puzzle *fragment* (an arbitrary cell set),
//! counting only the fragment's own rectangles for the four-corner rule, so
//! the fragment boundary imposes no constraint.

use crate::grid::{corner_multiplicity, shape_ok, CellSet, Clue, ClueKind, LatticePoint, Puzzle, Rect, Solution};

/// Which rule a violation refers to. `Structure` covers malformed input
/// (wrong rectangle count, out-of-bounds rectangles) that the numbered
/// rules presuppose.
pub type ConstraintId = u8;

pub const STRUCTURE: ConstraintId = 0;
pub const DISJOINT: ConstraintId = 1;
pub const COVERAGE: ConstraintId = 2;
pub const ONE_CLUE: ConstraintId = 3;
pub const SQUARE_SHAPE: ConstraintId = 4;
pub const HORIZONTAL_SHAPE: ConstraintId = 5;
pub const VERTICAL_SHAPE: ConstraintId = 6;
pub const FOUR_CORNER: ConstraintId = 7;

/// One broken rule with a human-readable locus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub constraint: ConstraintId,
    pub locus: String,
}

/// The validator's output: every violation found, in rule order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Verdict {
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, constraint: ConstraintId, locus: String) {
        self.violations.push(Violation { constraint, locus });
    }
}

/// A puzzle restricted to an arbitrary set of cells.
///
/// All clue cells must belong to the cell set; clues are kept in canonical
/// row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fragment {
    rows: usize,
    cols: usize,
    cells: CellSet,
    clues: Vec<Clue>,
}

impl Fragment {
    pub fn new(rows: usize, cols: usize, cells: CellSet, mut clues: Vec<Clue>) -> Fragment {
        assert_eq!((cells.rows(), cells.cols()), (rows, cols), "cell set dimensions mismatch");
        for c in &clues {
            assert!(cells.contains(c.row, c.col), "clue at ({}, {}) outside fragment", c.row, c.col);
        }
        clues.sort_by_key(|c| (c.row, c.col));
        for w in clues.windows(2) {
            assert!(
                (w[0].row, w[0].col) != (w[1].row, w[1].col),
                "duplicate clue at ({}, {})",
                w[0].row,
                w[0].col
            );
        }
        Fragment { rows, cols, cells, clues }
    }

    pub fn from_puzzle(p: &Puzzle) -> Fragment {
        Fragment {
            rows: p.rows(),
            cols: p.cols(),
            cells: CellSet::full(p.rows(), p.cols()),
            clues: p.clues().to_vec(),
        }
    }

    /// Interpret the fragment as a standalone puzzle over its bounding grid.
    /// Only meaningful when the fragment covers the whole grid.
    pub fn to_puzzle(&self) -> Puzzle {
        Puzzle::new(self.rows, self.cols, self.clues.clone()).expect("fragment clues are valid")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cells(&self) -> &CellSet {
        &self.cells
    }

    pub fn clues(&self) -> &[Clue] {
        &self.clues
    }

    /// Translate the fragment by `(dr, dc)` inside a larger grid.
    pub fn translated(&self, dr: usize, dc: usize, rows: usize, cols: usize) -> Fragment {
        let mut cells = CellSet::empty(rows, cols);
        for (r, c) in self.cells.iter() {
            cells.insert(r + dr, c + dc);
        }
        let clues = self
            .clues
            .iter()
            .map(|c| Clue { row: c.row + dr, col: c.col + dc, kind: c.kind, shade: c.shade })
            .collect();
        Fragment::new(rows, cols, cells, clues)
    }
}

/// Check a solution against the full puzzle.
pub fn validate(p: &Puzzle, s: &Solution) -> Verdict {
    validate_local(&Fragment::from_puzzle(p), s)
}

/// Check a solution against a fragment: coverage is over the fragment's
/// cells and the four-corner rule counts only rectangles in `s`.
pub fn validate_local(frag: &Fragment, s: &Solution) -> Verdict {
    let mut verdict = Verdict::default();
    let rects = s.rects();
    let paired = rects.len() == frag.clues.len();
    if !paired {
        verdict.push(
            STRUCTURE,
            format!("solution has {} rectangles for {} clues", rects.len(), frag.clues.len()),
        );
    }

    let mut in_bounds = Vec::with_capacity(rects.len());
    for (i, r) in rects.iter().enumerate() {
        let inside = r.bottom() <= frag.rows
            && r.right() <= frag.cols
            && frag.cells.contains_rect(r);
        if !inside {
            verdict.push(STRUCTURE, format!("rect {i} {r:?} leaves the puzzle area"));
        }
        in_bounds.push(inside);
    }

    // 1: pairwise disjoint.
    for i in 0..rects.len() {
        for j in i + 1..rects.len() {
            if rects[i].overlaps(&rects[j]) {
                verdict.push(DISJOINT, format!("rects {i} and {j} overlap"));
            }
        }
    }

    // 2: exact coverage of the fragment's cells.
    let mut covered = CellSet::empty(frag.rows, frag.cols);
    for (i, r) in rects.iter().enumerate() {
        if in_bounds[i] {
            covered.insert_rect(r);
        }
    }
    let mut uncovered = Vec::new();
    for (r, c) in frag.cells.iter() {
        if !covered.contains(r, c) {
            uncovered.push((r, c));
        }
    }
    if !uncovered.is_empty() {
        let sample: Vec<String> =
            uncovered.iter().take(8).map(|(r, c)| format!("({r}, {c})")).collect();
        verdict.push(
            COVERAGE,
            format!("{} uncovered cells: {}{}", uncovered.len(), sample.join(" "), if uncovered.len() > 8 { " ..." } else { "" }),
        );
    }

    // 3: each rectangle contains its own clue's cell and no other clue cell.
    if paired {
        for (i, (clue, r)) in frag.clues.iter().zip(rects).enumerate() {
            if !r.contains_cell(clue.row, clue.col) {
                verdict.push(
                    ONE_CLUE,
                    format!("rect {i} misses its clue at ({}, {})", clue.row, clue.col),
                );
            }
            for other in &frag.clues {
                if (other.row, other.col) != (clue.row, clue.col)
                    && r.contains_cell(other.row, other.col)
                {
                    verdict.push(
                        ONE_CLUE,
                        format!("rect {i} also contains the clue at ({}, {})", other.row, other.col),
                    );
                }
            }
        }
    }

    // 4-6: shapes.
    if paired {
        for (i, (clue, r)) in frag.clues.iter().zip(rects).enumerate() {
            if !shape_ok(clue.kind, r) {
                let id = match clue.kind {
                    ClueKind::Square => SQUARE_SHAPE,
                    ClueKind::Horizontal => HORIZONTAL_SHAPE,
                    ClueKind::Vertical => VERTICAL_SHAPE,
                };
                verdict.push(id, format!("rect {i} ({}x{}) violates `{}`", r.height, r.width, clue.kind.symbol()));
            }
        }
    }

    // 7: no lattice point is a corner of four rectangles in `s`.
    for y in 0..=frag.rows {
        for x in 0..=frag.cols {
            let p = LatticePoint { y, x };
            let m = corner_multiplicity(rects, p);
            if m >= 4 {
                verdict.push(FOUR_CORNER, format!("{m} rectangles share the corner ({y}, {x})"));
            }
        }
    }

    verdict
}

/// Incremental four-corner bookkeeping used by the solver: counts corners
/// of placed rectangles per lattice point.
#[derive(Clone)]
pub struct CornerCounts {
    rows: usize,
    cols: usize,
    counts: Vec<u8>,
}

impl CornerCounts {
    pub fn new(rows: usize, cols: usize) -> CornerCounts {
        CornerCounts { rows, cols, counts: vec![0; (rows + 1) * (cols + 1)] }
    }

    fn idx(&self, p: LatticePoint) -> usize {
        p.y * (self.cols + 1) + p.x
    }

    /// Add a rectangle's corners; true iff no point reaches four corners.
    pub fn place(&mut self, r: &Rect) -> bool {
        debug_assert!(r.bottom() <= self.rows && r.right() <= self.cols);
        let mut ok = true;
        for p in r.corners() {
            let i = self.idx(p);
            self.counts[i] += 1;
            if self.counts[i] >= 4 {
                ok = false;
            }
        }
        ok
    }

    pub fn remove(&mut self, r: &Rect) {
        for p in r.corners() {
            let i = self.idx(p);
            self.counts[i] -= 1;
        }
    }

    /// Whether placing `r` would make some point a corner of four rects.
    pub fn would_violate(&self, r: &Rect) -> bool {
        r.corners().iter().any(|p| self.counts[self.idx(*p)] >= 3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Clue, ClueKind, Puzzle, Rect, Solution};

    #[test]
    fn minimal_valid_puzzle() {
        let p = Puzzle::new(1, 1, vec![Clue::new(0, 0, ClueKind::Square)]).unwrap();
        let s = Solution::new(vec![Rect::new(0, 0, 1, 1)]);
        assert!(validate(&p, &s).ok());
    }

    #[test]
    fn four_corner_violation() {
        let p = Puzzle::new(
            2,
            2,
            vec![
                Clue::new(0, 0, ClueKind::Square),
                Clue::new(0, 1, ClueKind::Square),
                Clue::new(1, 0, ClueKind::Square),
                Clue::new(1, 1, ClueKind::Square),
            ],
        )
        .unwrap();
        let s = Solution::new(vec![
            Rect::new(0, 0, 1, 1),
            Rect::new(0, 1, 1, 1),
            Rect::new(1, 0, 1, 1),
            Rect::new(1, 1, 1, 1),
        ]);
        let v = validate(&p, &s);
        assert!(!v.ok());
        assert!(v.violations.iter().all(|x| x.constraint == FOUR_CORNER));
        assert!(v.violations[0].locus.contains("(1, 1)"));
    }

    #[test]
    fn horizontal_clue_accepts_wide_rect() {
        let p = Puzzle::new(1, 2, vec![Clue::new(0, 0, ClueKind::Horizontal)]).unwrap();
        let s = Solution::new(vec![Rect::new(0, 0, 1, 2)]);
        assert!(validate(&p, &s).ok());
    }

    #[test]
    fn empty_fragment_is_vacuously_valid() {
        let frag = Fragment::new(2, 2, CellSet::empty(2, 2), vec![]);
        assert!(validate_local(&frag, &Solution::new(vec![])).ok());
    }

    #[test]
    fn fragment_coverage_violation() {
        let mut cells = CellSet::empty(2, 2);
        cells.insert(0, 0);
        cells.insert(0, 1);
        let frag = Fragment::new(2, 2, cells, vec![Clue::new(0, 0, ClueKind::Horizontal)]);
        let ok = validate_local(&frag, &Solution::new(vec![Rect::new(0, 0, 1, 2)]));
        assert!(ok.ok());
        let bad = validate_local(&frag, &Solution::new(vec![Rect::new(1, 0, 1, 2)]));
        assert!(!bad.ok());
    }

    #[test]
    fn structural_mismatch_is_a_violation_not_a_panic() {
        let p = Puzzle::new(1, 1, vec![Clue::new(0, 0, ClueKind::Square)]).unwrap();
        let v = validate(&p, &Solution::new(vec![]));
        assert!(!v.ok());
        assert_eq!(v.violations[0].constraint, STRUCTURE);
    }

    #[test]
    fn corner_counts_incremental() {
        let mut cc = CornerCounts::new(2, 2);
        assert!(cc.place(&Rect::new(0, 0, 1, 1)));
        assert!(cc.place(&Rect::new(0, 1, 1, 1)));
        assert!(cc.place(&Rect::new(1, 0, 1, 1)));
        assert!(cc.would_violate(&Rect::new(1, 1, 1, 1)));
        cc.remove(&Rect::new(1, 0, 1, 1));
        assert!(!cc.would_violate(&Rect::new(1, 1, 1, 1)));
    }
}
