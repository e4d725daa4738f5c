//! Grids, clues, rectangles, solutions and the text formats for both.
//!
//! Coordinates are 0-based with row 0 at the top, and every type here is
//! immutable after construction.

use std::fmt;
use thiserror::Error;

/// The three Tatamibari clue symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClueKind {
    /// `+` — the covering rectangle must be a square.
    Square,
    /// `-` — strictly wider than tall.
    Horizontal,
    /// `|` — strictly taller than wide.
    Vertical,
}

impl ClueKind {
    pub fn symbol(self) -> char {
        match self {
            ClueKind::Square => '+',
            ClueKind::Horizontal => '-',
            ClueKind::Vertical => '|',
        }
    }

    pub fn from_symbol(c: char) -> Option<ClueKind> {
        match c {
            '+' => Some(ClueKind::Square),
            '-' => Some(ClueKind::Horizontal),
            '|' => Some(ClueKind::Vertical),
            _ => None,
        }
    }

    /// The kind a clue takes after swapping rows and columns.
    pub fn transposed(self) -> ClueKind {
        match self {
            ClueKind::Square => ClueKind::Square,
            ClueKind::Horizontal => ClueKind::Vertical,
            ClueKind::Vertical => ClueKind::Horizontal,
        }
    }
}

/// Clue shading for puzzle fonts: dark regions are filled when rendering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Shade {
    #[default]
    Light,
    Dark,
}

/// A single clue at a grid cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Clue {
    pub row: usize,
    pub col: usize,
    pub kind: ClueKind,
    pub shade: Shade,
}

impl Clue {
    pub fn new(row: usize, col: usize, kind: ClueKind) -> Clue {
        Clue { row, col, kind, shade: Shade::Light }
    }
}

/// An axis-aligned rectangle of cells, `height x width` with its top-left
/// cell at `(top, left)`. Both dimensions are at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rect {
    pub top: usize,
    pub left: usize,
    pub height: usize,
    pub width: usize,
}

impl Rect {
    pub fn new(top: usize, left: usize, height: usize, width: usize) -> Rect {
        assert!(height >= 1 && width >= 1, "rectangle dimensions must be positive");
        Rect { top, left, height, width }
    }

    /// Exclusive bottom row bound.
    pub fn bottom(&self) -> usize {
        self.top + self.height
    }

    /// Exclusive right column bound.
    pub fn right(&self) -> usize {
        self.left + self.width
    }

    pub fn area(&self) -> usize {
        self.height * self.width
    }

    pub fn contains_cell(&self, row: usize, col: usize) -> bool {
        self.top <= row && row < self.bottom() && self.left <= col && col < self.right()
    }

    pub fn overlaps(&self, other: &Rect) -> bool {
        self.top < other.bottom()
            && other.top < self.bottom()
            && self.left < other.right()
            && other.left < self.right()
    }

    /// The four corner lattice points of this rectangle.
    pub fn corners(&self) -> [LatticePoint; 4] {
        [
            LatticePoint { y: self.top, x: self.left },
            LatticePoint { y: self.top, x: self.right() },
            LatticePoint { y: self.bottom(), x: self.left },
            LatticePoint { y: self.bottom(), x: self.right() },
        ]
    }

    pub fn has_corner(&self, p: LatticePoint) -> bool {
        (p.y == self.top || p.y == self.bottom()) && (p.x == self.left || p.x == self.right())
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (self.top..self.bottom()).flat_map(move |r| (self.left..self.right()).map(move |c| (r, c)))
    }

    pub fn transposed(&self) -> Rect {
        Rect { top: self.left, left: self.top, height: self.width, width: self.height }
    }
}

/// A grid-line intersection point; `y` ranges over `0..=rows` and `x` over
/// `0..=cols`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub y: usize,
    pub x: usize,
}

impl LatticePoint {
    /// Interior points are the only ones where the four-corner rule can bite.
    pub fn is_interior(&self, rows: usize, cols: usize) -> bool {
        0 < self.y && self.y < rows && 0 < self.x && self.x < cols
    }
}

/// True iff `r` has the shape demanded by a clue of kind `kind`.
pub fn shape_ok(kind: ClueKind, r: &Rect) -> bool {
    match kind {
        ClueKind::Square => r.width == r.height,
        ClueKind::Horizontal => r.width > r.height,
        ClueKind::Vertical => r.height > r.width,
    }
}

/// Number of distinct rectangles in `rects` having `p` as a corner point.
///
/// A point lying on an edge but not at a corner does not count.
pub fn corner_multiplicity(rects: &[Rect], p: LatticePoint) -> usize {
    rects.iter().filter(|r| r.has_corner(p)).count()
}

/// Errors raised when constructing or parsing puzzles and solutions.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GridError {
    #[error("grid dimensions must be positive")]
    EmptyGrid,
    #[error("clue at ({row}, {col}) is out of bounds for a {rows}x{cols} grid")]
    ClueOutOfBounds { row: usize, col: usize, rows: usize, cols: usize },
    #[error("two clues share the cell ({row}, {col})")]
    DuplicateClue { row: usize, col: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// An immutable Tatamibari puzzle: grid dimensions plus clues in canonical
/// row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Puzzle {
    rows: usize,
    cols: usize,
    clues: Vec<Clue>,
}

impl Puzzle {
    pub fn new(rows: usize, cols: usize, mut clues: Vec<Clue>) -> Result<Puzzle, GridError> {
        if rows == 0 || cols == 0 {
            return Err(GridError::EmptyGrid);
        }
        for c in &clues {
            if c.row >= rows || c.col >= cols {
                return Err(GridError::ClueOutOfBounds { row: c.row, col: c.col, rows, cols });
            }
        }
        clues.sort_by_key(|c| (c.row, c.col));
        for w in clues.windows(2) {
            if w[0].row == w[1].row && w[0].col == w[1].col {
                return Err(GridError::DuplicateClue { row: w[0].row, col: w[0].col });
            }
        }
        Ok(Puzzle { rows, cols, clues })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn clues(&self) -> &[Clue] {
        &self.clues
    }

    pub fn clue_at(&self, row: usize, col: usize) -> Option<&Clue> {
        self.clues.iter().find(|c| c.row == row && c.col == col)
    }

    /// Rows and columns swapped; `-` and `|` clues swap kinds.
    pub fn transpose(&self) -> Puzzle {
        let clues = self
            .clues
            .iter()
            .map(|c| Clue { row: c.col, col: c.row, kind: c.kind.transposed(), shade: c.shade })
            .collect();
        Puzzle::new(self.cols, self.rows, clues).expect("transpose preserves validity")
    }

    /// Parse the puzzle text format:
    ///
    /// ```text
    /// tatamibari <rows> <cols>
    /// <rows> lines of characters from . + - |
    /// dark <row> <col>    (zero or more)
    /// ```
    pub fn parse(text: &str) -> Result<Puzzle, GridError> {
        let mut lines = text.lines().enumerate();
        let (n, header) = lines
            .next()
            .ok_or_else(|| GridError::Parse { line: 1, msg: "empty input".into() })?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 || parts[0] != "tatamibari" {
            return Err(GridError::Parse {
                line: n + 1,
                msg: "expected header `tatamibari <rows> <cols>`".into(),
            });
        }
        let rows: usize = parts[1]
            .parse()
            .map_err(|_| GridError::Parse { line: n + 1, msg: "bad row count".into() })?;
        let cols: usize = parts[2]
            .parse()
            .map_err(|_| GridError::Parse { line: n + 1, msg: "bad column count".into() })?;

        let mut clues = Vec::new();
        for r in 0..rows {
            let (n, line) = lines.next().ok_or_else(|| GridError::Parse {
                line: r + 2,
                msg: format!("expected {rows} grid lines"),
            })?;
            let chars: Vec<char> = line.chars().collect();
            if chars.len() != cols {
                return Err(GridError::Parse {
                    line: n + 1,
                    msg: format!("expected {cols} characters, found {}", chars.len()),
                });
            }
            for (c, ch) in chars.iter().enumerate() {
                match ch {
                    '.' => {}
                    _ => match ClueKind::from_symbol(*ch) {
                        Some(kind) => clues.push(Clue::new(r, c, kind)),
                        None => {
                            return Err(GridError::Parse {
                                line: n + 1,
                                msg: format!("invalid grid character `{ch}`"),
                            })
                        }
                    },
                }
            }
        }
        let mut puzzle = Puzzle::new(rows, cols, clues)?;
        for (n, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "dark" {
                return Err(GridError::Parse {
                    line: n + 1,
                    msg: "expected `dark <row> <col>`".into(),
                });
            }
            let row: usize = parts[1]
                .parse()
                .map_err(|_| GridError::Parse { line: n + 1, msg: "bad row".into() })?;
            let col: usize = parts[2]
                .parse()
                .map_err(|_| GridError::Parse { line: n + 1, msg: "bad column".into() })?;
            let clue = puzzle
                .clues
                .iter_mut()
                .find(|c| c.row == row && c.col == col)
                .ok_or_else(|| GridError::Parse {
                    line: n + 1,
                    msg: format!("no clue at ({row}, {col}) to mark dark"),
                })?;
            clue.shade = Shade::Dark;
        }
        Ok(puzzle)
    }

    /// Emit the puzzle text format, byte-for-byte stable.
    pub fn emit(&self) -> String {
        let mut grid = vec![vec!['.'; self.cols]; self.rows];
        for c in &self.clues {
            grid[c.row][c.col] = c.kind.symbol();
        }
        let mut out = format!("tatamibari {} {}\n", self.rows, self.cols);
        for row in &grid {
            out.extend(row.iter());
            out.push('\n');
        }
        for c in &self.clues {
            if c.shade == Shade::Dark {
                out.push_str(&format!("dark {} {}\n", c.row, c.col));
            }
        }
        out
    }
}

impl fmt::Display for Puzzle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.emit())
    }
}

/// A candidate solution: one rectangle per clue, indexed like the puzzle's
/// clue list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    rects: Vec<Rect>,
}

impl Solution {
    pub fn new(rects: Vec<Rect>) -> Solution {
        Solution { rects }
    }

    pub fn rects(&self) -> &[Rect] {
        &self.rects
    }

    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    pub fn transposed(&self) -> Solution {
        // Clue order may change under transposition, so callers must
        // re-align rectangles with the transposed puzzle's clue order.
        Solution { rects: self.rects.iter().map(Rect::transposed).collect() }
    }

    /// Re-order rectangles from `p`'s clue order to `p.transpose()`'s.
    pub fn transposed_for(&self, p: &Puzzle) -> Solution {
        let mut paired: Vec<(usize, usize, Rect)> = p
            .clues()
            .iter()
            .zip(&self.rects)
            .map(|(c, r)| (c.col, c.row, r.transposed()))
            .collect();
        paired.sort_by_key(|&(r, c, _)| (r, c));
        Solution { rects: paired.into_iter().map(|(_, _, r)| r).collect() }
    }

    /// Parse the solution text format:
    ///
    /// ```text
    /// solution <k>
    /// rect <top> <left> <height> <width> clue <row> <col>
    /// ```
    ///
    /// Rectangles are matched to the puzzle's clues by the `clue` cell.
    pub fn parse(text: &str, puzzle: &Puzzle) -> Result<Solution, GridError> {
        let mut lines = text.lines().enumerate();
        let (n, header) = lines
            .next()
            .ok_or_else(|| GridError::Parse { line: 1, msg: "empty input".into() })?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 2 || parts[0] != "solution" {
            return Err(GridError::Parse {
                line: n + 1,
                msg: "expected header `solution <k>`".into(),
            });
        }
        let k: usize = parts[1]
            .parse()
            .map_err(|_| GridError::Parse { line: n + 1, msg: "bad rectangle count".into() })?;
        let mut rects: Vec<Option<Rect>> = vec![None; puzzle.clues().len()];
        let mut seen = 0usize;
        for (n, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 8 || parts[0] != "rect" || parts[5] != "clue" {
                return Err(GridError::Parse {
                    line: n + 1,
                    msg: "expected `rect <top> <left> <height> <width> clue <row> <col>`".into(),
                });
            }
            let nums: Result<Vec<usize>, _> =
                [parts[1], parts[2], parts[3], parts[4], parts[6], parts[7]]
                    .iter()
                    .map(|s| s.parse())
                    .collect();
            let nums = nums
                .map_err(|_| GridError::Parse { line: n + 1, msg: "bad number".into() })?;
            let (top, left, height, width, crow, ccol) =
                (nums[0], nums[1], nums[2], nums[3], nums[4], nums[5]);
            if height == 0 || width == 0 {
                return Err(GridError::Parse {
                    line: n + 1,
                    msg: "rectangle dimensions must be positive".into(),
                });
            }
            let idx = puzzle
                .clues()
                .iter()
                .position(|c| c.row == crow && c.col == ccol)
                .ok_or_else(|| GridError::Parse {
                    line: n + 1,
                    msg: format!("no clue at ({crow}, {ccol})"),
                })?;
            if rects[idx].is_some() {
                return Err(GridError::Parse {
                    line: n + 1,
                    msg: format!("duplicate rectangle for clue at ({crow}, {ccol})"),
                })?;
            }
            rects[idx] = Some(Rect::new(top, left, height, width));
            seen += 1;
        }
        if seen != k {
            return Err(GridError::Parse {
                line: 1,
                msg: format!("header promised {k} rectangles, found {seen}"),
            });
        }
        let missing = rects.iter().position(|r| r.is_none());
        if let Some(i) = missing {
            let c = &puzzle.clues()[i];
            return Err(GridError::Parse {
                line: 1,
                msg: format!("no rectangle for clue at ({}, {})", c.row, c.col),
            });
        }
        Ok(Solution { rects: rects.into_iter().map(Option::unwrap).collect() })
    }

    /// Emit the solution text format in the puzzle's clue order.
    pub fn emit(&self, puzzle: &Puzzle) -> String {
        let mut out = format!("solution {}\n", self.rects.len());
        for (clue, r) in puzzle.clues().iter().zip(&self.rects) {
            out.push_str(&format!(
                "rect {} {} {} {} clue {} {}\n",
                r.top, r.left, r.height, r.width, clue.row, clue.col
            ));
        }
        out
    }
}

/// A dense bitmask over the cells of a `rows x cols` grid.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CellSet {
    rows: usize,
    cols: usize,
    words: Vec<u64>,
}

impl CellSet {
    pub fn empty(rows: usize, cols: usize) -> CellSet {
        let n = rows * cols;
        CellSet { rows, cols, words: vec![0; n.div_ceil(64)] }
    }

    pub fn full(rows: usize, cols: usize) -> CellSet {
        let mut s = CellSet::empty(rows, cols);
        for i in 0..rows * cols {
            s.words[i / 64] |= 1 << (i % 64);
        }
        s
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn bit(&self, row: usize, col: usize) -> usize {
        debug_assert!(row < self.rows && col < self.cols);
        row * self.cols + col
    }

    pub fn insert(&mut self, row: usize, col: usize) {
        let b = self.bit(row, col);
        self.words[b / 64] |= 1 << (b % 64);
    }

    pub fn remove(&mut self, row: usize, col: usize) {
        let b = self.bit(row, col);
        self.words[b / 64] &= !(1 << (b % 64));
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        if row >= self.rows || col >= self.cols {
            return false;
        }
        let b = self.bit(row, col);
        self.words[b / 64] & (1 << (b % 64)) != 0
    }

    pub fn insert_rect(&mut self, r: &Rect) {
        for (row, col) in r.cells() {
            self.insert(row, col);
        }
    }

    pub fn contains_rect(&self, r: &Rect) -> bool {
        r.cells().all(|(row, col)| self.contains(row, col))
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows)
            .flat_map(move |r| (0..self.cols).map(move |c| (r, c)))
            .filter(move |&(r, c)| self.contains(r, c))
    }

    pub fn union_with(&mut self, other: &CellSet) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn is_subset_of(&self, other: &CellSet) -> bool {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint_from(&self, other: &CellSet) -> bool {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Whether the member cells form one edge-connected component.
    pub fn is_connected(&self) -> bool {
        let mut start = None;
        'outer: for r in 0..self.rows {
            for c in 0..self.cols {
                if self.contains(r, c) {
                    start = Some((r, c));
                    break 'outer;
                }
            }
        }
        let Some(start) = start else { return true };
        let mut seen = CellSet::empty(self.rows, self.cols);
        let mut stack = vec![start];
        seen.insert(start.0, start.1);
        let mut count = 0usize;
        while let Some((r, c)) = stack.pop() {
            count += 1;
            let push = |nr: usize, nc: usize, seen: &mut CellSet, stack: &mut Vec<_>| {
                if self.contains(nr, nc) && !seen.contains(nr, nc) {
                    seen.insert(nr, nc);
                    stack.push((nr, nc));
                }
            };
            if r > 0 {
                push(r - 1, c, &mut seen, &mut stack);
            }
            if r + 1 < self.rows {
                push(r + 1, c, &mut seen, &mut stack);
            }
            if c > 0 {
                push(r, c - 1, &mut seen, &mut stack);
            }
            if c + 1 < self.cols {
                push(r, c + 1, &mut seen, &mut stack);
            }
        }
        count == self.len()
    }
}

impl fmt::Debug for CellSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CellSet {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                f.write_str(if self.contains(r, c) { "#" } else { "." })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rect_contains_cell_boundaries() {
        assert!(Rect::new(0, 0, 1, 1).contains_cell(0, 0));
        assert!(!Rect::new(0, 0, 2, 2).contains_cell(2, 0));
        assert!(Rect::new(1, 2, 3, 1).contains_cell(3, 2));
    }

    #[test]
    fn shape_rules() {
        assert!(shape_ok(ClueKind::Square, &Rect::new(0, 0, 2, 2)));
        assert!(shape_ok(ClueKind::Horizontal, &Rect::new(0, 0, 1, 2)));
        assert!(!shape_ok(ClueKind::Horizontal, &Rect::new(0, 0, 2, 1)));
        assert!(!shape_ok(ClueKind::Vertical, &Rect::new(0, 0, 1, 1)));
    }

    #[test]
    fn corner_multiplicity_cases() {
        let four = vec![
            Rect::new(0, 0, 1, 1),
            Rect::new(0, 1, 1, 1),
            Rect::new(1, 0, 1, 1),
            Rect::new(1, 1, 1, 1),
        ];
        assert_eq!(corner_multiplicity(&four, LatticePoint { y: 1, x: 1 }), 4);

        let stacked = vec![Rect::new(0, 0, 1, 2), Rect::new(1, 0, 1, 2)];
        assert_eq!(corner_multiplicity(&stacked, LatticePoint { y: 1, x: 1 }), 0);
        assert_eq!(corner_multiplicity(&stacked, LatticePoint { y: 1, x: 0 }), 2);

        let single = vec![Rect::new(0, 0, 2, 2)];
        assert_eq!(corner_multiplicity(&single, LatticePoint { y: 1, x: 1 }), 0);
    }

    #[test]
    fn transpose_swaps_kinds() {
        let p = Puzzle::new(1, 2, vec![Clue::new(0, 0, ClueKind::Horizontal)]).unwrap();
        let t = p.transpose();
        assert_eq!((t.rows(), t.cols()), (2, 1));
        assert_eq!(t.clues()[0].kind, ClueKind::Vertical);
        assert_eq!(t.transpose(), p);
    }

    #[test]
    fn puzzle_format_round_trip() {
        let text = "tatamibari 2 3\n+.-\n..|\ndark 0 0\n";
        let p = Puzzle::parse(text).unwrap();
        assert_eq!(p.emit(), text);
        assert_eq!(p.clues().len(), 3);
        assert_eq!(p.clues()[0].shade, Shade::Dark);
    }

    #[test]
    fn puzzle_rejects_bad_input() {
        assert!(Puzzle::parse("tatamibari 1\n.\n").is_err());
        assert!(Puzzle::parse("tatamibari 1 2\n.\n").is_err());
        assert!(Puzzle::parse("tatamibari 1 1\nx\n").is_err());
        assert!(Puzzle::parse("tatamibari 1 1\n.\ndark 0 0\n").is_err());
    }

    #[test]
    fn solution_format_round_trip() {
        let p = Puzzle::parse("tatamibari 2 2\n+.\n..\n").unwrap();
        let s = Solution::new(vec![Rect::new(0, 0, 2, 2)]);
        let text = s.emit(&p);
        assert_eq!(text, "solution 1\nrect 0 0 2 2 clue 0 0\n");
        assert_eq!(Solution::parse(&text, &p).unwrap(), s);
    }

    #[test]
    fn cellset_basics() {
        let mut s = CellSet::empty(3, 3);
        s.insert(0, 0);
        s.insert(0, 1);
        assert!(s.is_connected());
        s.insert(2, 2);
        assert!(!s.is_connected());
        assert_eq!(s.len(), 3);
        assert!(s.is_subset_of(&CellSet::full(3, 3)));
    }
}
