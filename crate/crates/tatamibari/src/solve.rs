//! Complete backtracking solver: decide, enumerate and count solutions.
//!
//! The search is organized as an exact-cover problem: every cell must be
//! covered by exactly one rectangle, every clue owns exactly one rectangle,
//! and rectangles are pruned against the four-corner rule incrementally.
//! Branching picks the uncovered cell with the fewest feasible covering
//! rectangles, which keeps the forced chains of gadget puzzles cheap.

use crate::grid::{shape_ok, CellSet, Clue, Puzzle, Rect, Solution};
use crate::validate::{CornerCounts, Fragment};
use thiserror::Error;

/// Limits for a solver run.
#[derive(Debug, Clone, Copy, Default)]
pub struct SearchConfig {
    /// Stop after this many solutions; `None` enumerates all of them.
    pub max_solutions: Option<usize>,
    /// Abort after this many search nodes; `None` means unbounded.
    pub node_limit: Option<u64>,
}

impl SearchConfig {
    pub fn up_to(max_solutions: usize) -> SearchConfig {
        SearchConfig { max_solutions: Some(max_solutions), node_limit: None }
    }
}

/// How a solver run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// The search space was exhausted; the count is exact.
    Exhausted,
    /// The solution cap was reached; more solutions may exist.
    Capped,
    /// The node budget ran out; the count is a lower bound only.
    ResourceExhausted,
}

/// Solutions found plus how trustworthy the count is.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub solutions: Vec<Solution>,
    pub count: usize,
    pub nodes: u64,
}

impl SolveOutcome {
    pub fn is_solvable(&self) -> bool {
        self.count > 0
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle accepts at most {max_cells} cells, got {cells}")]
    TooManyCells { cells: usize, max_cells: usize },
    #[error("oracle accepts at most {max_clues} clues, got {clues}")]
    TooManyClues { clues: usize, max_clues: usize },
}

/// All rectangles a clue could take: in bounds, containing the clue's cell
/// and no other clue cell, with the right shape. Canonically ordered by
/// `(top, left, height, width)`.
pub fn candidate_rects(p: &Puzzle, clue_idx: usize) -> Vec<Rect> {
    let frag = Fragment::from_puzzle(p);
    candidate_rects_in(&frag, clue_idx)
}

/// Candidate rectangles within a fragment's cell set.
pub(crate) fn candidate_rects_in(frag: &Fragment, clue_idx: usize) -> Vec<Rect> {
    let clue = frag.clues()[clue_idx];
    let (r0, c0) = (clue.row, clue.col);
    let rows = frag.rows();
    let cols = frag.cols();

    // Sorted clue rows per column, for fast "any clue in this column between
    // these rows" tests.
    let mut col_clues: Vec<Vec<usize>> = vec![Vec::new(); cols];
    for c in frag.clues() {
        col_clues[c.col].push(c.row);
    }
    for v in &mut col_clues {
        v.sort_unstable();
    }
    let clue_in = |col: usize, top: usize, bottom: usize, skip: (usize, usize)| -> bool {
        let v = &col_clues[col];
        let lo = v.partition_point(|&r| r < top);
        v[lo..].iter().take_while(|&&r| r < bottom).any(|&r| (r, col) != skip)
    };
    let cell_gap = |col: usize, top: usize, bottom: usize| -> bool {
        (top..bottom).any(|r| !frag.cells().contains(r, col))
    };

    let mut out = Vec::new();
    // Clues above/below in the same column bound the vertical range.
    let own = (r0, c0);
    let mut top_min = 0;
    for r in (0..r0).rev() {
        if clue_in(c0, r, r + 1, own) || !frag.cells().contains(r, c0) {
            top_min = r + 1;
            break;
        }
    }
    let mut bottom_max = rows;
    for r in r0 + 1..rows {
        if clue_in(c0, r, r + 1, own) || !frag.cells().contains(r, c0) {
            bottom_max = r;
            break;
        }
    }

    for top in top_min..=r0 {
        for bottom in r0 + 1..=bottom_max {
            // Columns usable to the left/right of c0 for this row span.
            let mut left_min = c0;
            while left_min > 0 {
                let c = left_min - 1;
                if clue_in(c, top, bottom, own) || cell_gap(c, top, bottom) {
                    break;
                }
                left_min = c;
            }
            let mut right_max = c0 + 1;
            while right_max < cols {
                if clue_in(right_max, top, bottom, own) || cell_gap(right_max, top, bottom) {
                    break;
                }
                right_max += 1;
            }
            for left in left_min..=c0 {
                for right in c0 + 1..=right_max {
                    let r = Rect::new(top, left, bottom - top, right - left);
                    if shape_ok(clue.kind, &r) {
                        out.push(r);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// An exact-cover search instance shared by the solver and the gadget
/// framework. `must` cells are covered in every solution; `may` cells can
/// be covered or left open (the framework's optional areas).
pub(crate) struct CoverProblem {
    pub rows: usize,
    pub cols: usize,
    pub clues: Vec<Clue>,
    pub candidates: Vec<Vec<Rect>>,
    pub must: CellSet,
    pub may: CellSet,
}

impl CoverProblem {
    pub fn for_puzzle(p: &Puzzle) -> CoverProblem {
        let frag = Fragment::from_puzzle(p);
        CoverProblem::for_fragment(&frag, frag.cells().clone(), CellSet::empty(p.rows(), p.cols()))
    }

    pub fn for_fragment(frag: &Fragment, must: CellSet, may: CellSet) -> CoverProblem {
        let mut allowed = must.clone();
        allowed.union_with(&may);
        let candidates = (0..frag.clues().len())
            .map(|i| {
                candidate_rects_in(frag, i)
                    .into_iter()
                    .filter(|r| allowed.contains_rect(r))
                    .collect()
            })
            .collect();
        CoverProblem {
            rows: frag.rows(),
            cols: frag.cols(),
            clues: frag.clues().to_vec(),
            candidates,
            must,
            may,
        }
    }

    /// Run the search, invoking `on_solution` for every complete assignment.
    /// The callback returns `false` to stop the enumeration early.
    pub fn search(
        &self,
        node_limit: Option<u64>,
        mut on_solution: impl FnMut(&[Rect]) -> bool,
    ) -> (SolveStatus, u64) {
        // A clue whose cell lies outside `must` can never be assigned.
        for c in &self.clues {
            debug_assert!(self.must.contains(c.row, c.col), "clue cells must be mandatory");
        }
        let must_cells: Vec<(usize, usize)> = self.must.iter().collect();
        if must_cells.is_empty() && self.clues.is_empty() {
            let more = on_solution(&[]);
            return (if more { SolveStatus::Exhausted } else { SolveStatus::Capped }, 0);
        }

        // cell -> (clue, candidate index) pairs covering it.
        let cell_id = |r: usize, c: usize| r * self.cols + c;
        let mut covers: Vec<Vec<(u32, u32)>> = vec![Vec::new(); self.rows * self.cols];
        for (ci, cands) in self.candidates.iter().enumerate() {
            for (ri, rect) in cands.iter().enumerate() {
                for (r, c) in rect.cells() {
                    if self.must.contains(r, c) {
                        covers[cell_id(r, c)].push((ci as u32, ri as u32));
                    }
                }
            }
        }

        let mut state = SearchState {
            problem: self,
            covers: &covers,
            must_cells: &must_cells,
            covered: CellSet::empty(self.rows, self.cols),
            corners: CornerCounts::new(self.rows, self.cols),
            assigned: vec![None; self.clues.len()],
            nodes: 0,
            node_limit,
            exhausted: true,
            stopped: false,
        };
        state.run(&mut on_solution);
        let status = if state.stopped {
            SolveStatus::Capped
        } else if state.exhausted {
            SolveStatus::Exhausted
        } else {
            SolveStatus::ResourceExhausted
        };
        (status, state.nodes)
    }
}

struct SearchState<'a> {
    problem: &'a CoverProblem,
    covers: &'a [Vec<(u32, u32)>],
    must_cells: &'a [(usize, usize)],
    covered: CellSet,
    corners: CornerCounts,
    assigned: Vec<Option<Rect>>,
    nodes: u64,
    node_limit: Option<u64>,
    exhausted: bool,
    stopped: bool,
}

impl SearchState<'_> {
    fn feasible(&self, rect: &Rect) -> bool {
        !self.corners.would_violate(rect)
            && rect.cells().all(|(r, c)| !self.covered.contains(r, c))
    }

    fn run(&mut self, on_solution: &mut impl FnMut(&[Rect]) -> bool) {
        if self.stopped || !self.exhausted {
            return;
        }
        self.nodes += 1;
        if let Some(limit) = self.node_limit {
            if self.nodes > limit {
                self.exhausted = false;
                return;
            }
        }

        // Find the uncovered mandatory cell with the fewest feasible covers.
        let mut best: Option<(usize, usize, usize)> = None; // (count, row, col)
        for &(r, c) in self.must_cells {
            if self.covered.contains(r, c) {
                continue;
            }
            let mut count = 0;
            for &(ci, ri) in &self.covers[r * self.problem.cols + c] {
                if self.assigned[ci as usize].is_none()
                    && self.feasible(&self.problem.candidates[ci as usize][ri as usize])
                {
                    count += 1;
                }
            }
            if count == 0 {
                return; // dead end
            }
            if best.map_or(true, |(b, _, _)| count < b) {
                best = Some((count, r, c));
                if count == 1 {
                    break;
                }
            }
        }

        let Some((_, r, c)) = best else {
            // Every mandatory cell covered; since each clue cell is
            // mandatory and owned by its clue's rectangle, all clues are
            // assigned and this is a complete solution.
            let rects: Vec<Rect> = self.assigned.iter().map(|r| r.unwrap()).collect();
            if !on_solution(&rects) {
                self.stopped = true;
            }
            return;
        };

        let options: Vec<(u32, u32)> = self.covers[r * self.problem.cols + c]
            .iter()
            .copied()
            .filter(|&(ci, ri)| {
                self.assigned[ci as usize].is_none()
                    && self.feasible(&self.problem.candidates[ci as usize][ri as usize])
            })
            .collect();
        for (ci, ri) in options {
            let rect = self.problem.candidates[ci as usize][ri as usize];
            self.assigned[ci as usize] = Some(rect);
            self.covered.insert_rect(&rect);
            self.corners.place(&rect);

            self.run(on_solution);

            self.corners.remove(&rect);
            for (rr, cc) in rect.cells() {
                self.covered.remove(rr, cc);
            }
            self.assigned[ci as usize] = None;
            if self.stopped || !self.exhausted {
                return;
            }
        }
    }
}

/// Find all solutions up to the configured cap.
///
/// Solutions are reported in a canonical order (lexicographic by rectangle
/// list) whenever the search ran to exhaustion.
pub fn solve(p: &Puzzle, cfg: SearchConfig) -> SolveOutcome {
    let problem = CoverProblem::for_puzzle(p);
    let mut solutions = Vec::new();
    let cap = cfg.max_solutions;
    let (status, nodes) = problem.search(cfg.node_limit, |rects| {
        solutions.push(Solution::new(rects.to_vec()));
        cap.map_or(true, |cap| solutions.len() < cap)
    });
    if status == SolveStatus::Exhausted {
        solutions.sort_by(|a, b| a.rects().cmp(b.rects()));
    }
    let count = solutions.len();
    SolveOutcome { status, solutions, count, nodes }
}

/// Exact solution count up to `cap`; the second component is true when the
/// count is exact (the whole space was searched).
pub fn count_solutions(p: &Puzzle, cap: usize) -> (usize, bool) {
    assert!(cap >= 1, "cap must be at least 1");
    let outcome = solve(p, SearchConfig::up_to(cap));
    (outcome.count, outcome.status == SolveStatus::Exhausted)
}

const ORACLE_MAX_CELLS: usize = 16;
const ORACLE_MAX_CLUES: usize = 4;

/// Brute-force reference solver: the full Cartesian product of candidate
/// rectangles with nothing but a final validation. Test use only.
pub fn oracle_solve(p: &Puzzle) -> Result<SolveOutcome, OracleError> {
    let cells = p.rows() * p.cols();
    if cells > ORACLE_MAX_CELLS {
        return Err(OracleError::TooManyCells { cells, max_cells: ORACLE_MAX_CELLS });
    }
    if p.clues().len() > ORACLE_MAX_CLUES {
        return Err(OracleError::TooManyClues {
            clues: p.clues().len(),
            max_clues: ORACLE_MAX_CLUES,
        });
    }
    let candidates: Vec<Vec<Rect>> =
        (0..p.clues().len()).map(|i| candidate_rects(p, i)).collect();
    let mut solutions = Vec::new();
    let mut nodes = 0u64;
    let mut chosen: Vec<Rect> = Vec::with_capacity(candidates.len());
    fn product(
        p: &Puzzle,
        candidates: &[Vec<Rect>],
        chosen: &mut Vec<Rect>,
        solutions: &mut Vec<Solution>,
        nodes: &mut u64,
    ) {
        if chosen.len() == candidates.len() {
            *nodes += 1;
            let s = Solution::new(chosen.clone());
            if crate::validate::validate(p, &s).ok() {
                solutions.push(s);
            }
            return;
        }
        for r in &candidates[chosen.len()] {
            chosen.push(*r);
            product(p, candidates, chosen, solutions, nodes);
            chosen.pop();
        }
    }
    product(p, &candidates, &mut chosen, &mut solutions, &mut nodes);
    // The empty-clue puzzle has one (empty) candidate assignment, which the
    // validator rejects unless the grid has no cells to cover.
    solutions.sort_by(|a, b| a.rects().cmp(b.rects()));
    let count = solutions.len();
    Ok(SolveOutcome { status: SolveStatus::Exhausted, solutions, count, nodes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Clue, ClueKind};

    fn puzzle(text: &str) -> Puzzle {
        Puzzle::parse(text).unwrap()
    }

    #[test]
    fn candidates_for_lone_square_clue() {
        let p = puzzle("tatamibari 2 2\n+.\n..\n");
        let rects = candidate_rects(&p, 0);
        assert_eq!(rects, vec![Rect::new(0, 0, 1, 1), Rect::new(0, 0, 2, 2)]);
    }

    #[test]
    fn candidates_exclude_other_clues() {
        let p = puzzle("tatamibari 2 2\n-.\n.|\n");
        let rects = candidate_rects(&p, 0);
        assert_eq!(rects, vec![Rect::new(0, 0, 1, 2)]);
    }

    #[test]
    fn single_cell_puzzle_has_one_solution() {
        let p = puzzle("tatamibari 1 1\n+\n");
        let out = solve(&p, SearchConfig::default());
        assert_eq!(out.count, 1);
        assert_eq!(out.status, SolveStatus::Exhausted);
    }

    #[test]
    fn lone_square_clue_must_cover_whole_grid() {
        let p = puzzle("tatamibari 2 2\n+.\n..\n");
        let out = solve(&p, SearchConfig::default());
        assert_eq!(out.count, 1);
        assert_eq!(out.solutions[0].rects(), &[Rect::new(0, 0, 2, 2)]);
    }

    #[test]
    fn unsolvable_vertical_in_flat_grid() {
        let p = puzzle("tatamibari 1 2\n|.\n");
        assert_eq!(count_solutions(&p, 2), (0, true));
    }

    #[test]
    fn two_squares_cannot_tile_two_by_two() {
        let p = puzzle("tatamibari 2 2\n+.\n.+\n");
        assert_eq!(count_solutions(&p, 4), (0, true));
    }

    #[test]
    fn empty_puzzle_with_cells_is_unsolvable() {
        let p = puzzle("tatamibari 1 1\n.\n");
        assert_eq!(count_solutions(&p, 2), (0, true));
        assert_eq!(oracle_solve(&p).unwrap().count, 0);
    }

    #[test]
    fn node_limit_reports_resource_exhaustion() {
        let p = puzzle("tatamibari 4 4\n+...\n....\n....\n...+\n");
        let out = solve(&p, SearchConfig { max_solutions: None, node_limit: Some(1) });
        assert_eq!(out.status, SolveStatus::ResourceExhausted);
    }

    #[test]
    fn oracle_rejects_large_inputs() {
        let p = Puzzle::new(5, 4, vec![Clue::new(0, 0, ClueKind::Square)]).unwrap();
        assert!(oracle_solve(&p).is_err());
    }

    #[test]
    fn oracle_agrees_on_small_grid() {
        let p = puzzle("tatamibari 2 3\n+..\n..-\n");
        let fast = solve(&p, SearchConfig::default());
        let slow = oracle_solve(&p).unwrap();
        assert_eq!(fast.count, slow.count);
        assert_eq!(fast.solutions, slow.solutions);
    }
}
