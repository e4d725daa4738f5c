//! Gadgets, profiles and machine-checked profile tables.
//!
//! A gadget is a puzzle fragment whose cells are split into one mandatory
//! area (holding every clue) and two or more optional areas. A profile is
//! a subset of the fragment; it is *proper* when it contains the mandatory
//! area and treats each optional area all-or-nothing. The profile table of
//! a gadget lists exactly the profiles with at least one local solution.
//!
//! [`check_table`] verifies a claimed table by exhaustive enumeration of
//! every local solution of the fragment: claimed profiles must be solvable,
//! profiles off the table must not be, and no local solution may induce an
//! improper profile.

use crate::grid::{CellSet, Clue, GridError, Puzzle, Rect, Solution};
use crate::solve::{CoverProblem, SolveStatus};
use crate::validate::{validate_local, Fragment};
use std::collections::BTreeMap;
use std::fmt;

/// A puzzle fragment plus its mandatory/optional area split.
#[derive(Debug, Clone)]
pub struct Gadget {
    name: String,
    fragment: Fragment,
    mandatory: CellSet,
    optionals: Vec<CellSet>,
}

/// A subset of a gadget's entire area.
pub type Profile = CellSet;

/// Locally solvable profiles with one witness solution each, in canonical
/// order (by the optional-subset bitmask).
#[derive(Debug, Clone)]
pub struct ProfileTable {
    pub entries: Vec<(Profile, Solution)>,
}

impl ProfileTable {
    pub fn profiles(&self) -> Vec<&Profile> {
        self.entries.iter().map(|(p, _)| p).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Gadget {
    /// Build a gadget, checking the area invariants:
    /// the mandatory area and the optional areas partition the fragment's
    /// cells, there are at least two nonempty optional areas, and every
    /// clue sits in the mandatory area.
    pub fn new(
        name: impl Into<String>,
        fragment: Fragment,
        mandatory: CellSet,
        optionals: Vec<CellSet>,
    ) -> Gadget {
        let name = name.into();
        assert!(optionals.len() >= 2, "gadget {name}: needs two or more optional areas");
        let mut union = mandatory.clone();
        for (i, o) in optionals.iter().enumerate() {
            assert!(!o.is_empty(), "gadget {name}: optional area {i} is empty");
            assert!(
                o.is_disjoint_from(&mandatory),
                "gadget {name}: optional area {i} intersects the mandatory area"
            );
            for (j, o2) in optionals.iter().enumerate().take(i) {
                assert!(
                    o.is_disjoint_from(o2),
                    "gadget {name}: optional areas {j} and {i} intersect"
                );
            }
            union.union_with(o);
        }
        assert!(
            union == *fragment.cells(),
            "gadget {name}: areas do not partition the entire area"
        );
        for c in fragment.clues() {
            assert!(
                mandatory.contains(c.row, c.col),
                "gadget {name}: clue at ({}, {}) outside the mandatory area",
                c.row,
                c.col
            );
        }
        Gadget { name, fragment, mandatory, optionals }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn fragment(&self) -> &Fragment {
        &self.fragment
    }

    pub fn mandatory(&self) -> &CellSet {
        &self.mandatory
    }

    pub fn optionals(&self) -> &[CellSet] {
        &self.optionals
    }

    /// The profile selecting the optional areas whose indices appear in
    /// `selected`.
    pub fn profile_from_mask(&self, mask: u32) -> Profile {
        let mut p = self.mandatory.clone();
        for (i, o) in self.optionals.iter().enumerate() {
            if mask & (1 << i) != 0 {
                p.union_with(o);
            }
        }
        p
    }

    /// Whether `p` contains the mandatory area and is all-or-nothing on
    /// every optional area.
    pub fn is_proper(&self, p: &Profile) -> bool {
        self.profile_mask(p).is_some()
    }

    /// The optional-subset bitmask of a proper profile, or `None` if the
    /// profile is improper.
    pub fn profile_mask(&self, p: &Profile) -> Option<u32> {
        if !self.mandatory.is_subset_of(p) {
            return None;
        }
        let mut mask = 0u32;
        let mut accounted = self.mandatory.len();
        for (i, o) in self.optionals.iter().enumerate() {
            if o.is_subset_of(p) {
                mask |= 1 << i;
                accounted += o.len();
            } else if !o.is_disjoint_from(p) {
                return None;
            }
        }
        if accounted != p.len() {
            return None; // contains cells outside the entire area
        }
        Some(mask)
    }

    /// Translate the whole gadget by `(dr, dc)` into a `rows x cols` grid.
    pub fn translated(&self, dr: usize, dc: usize, rows: usize, cols: usize) -> Gadget {
        let shift = |s: &CellSet| {
            let mut out = CellSet::empty(rows, cols);
            for (r, c) in s.iter() {
                out.insert(r + dr, c + dc);
            }
            out
        };
        Gadget {
            name: self.name.clone(),
            fragment: self.fragment.translated(dr, dc, rows, cols),
            mandatory: shift(&self.mandatory),
            optionals: self.optionals.iter().map(shift).collect(),
        }
    }
}

/// A gadget placed at an offset inside a host puzzle.
#[derive(Debug, Clone)]
pub struct GadgetInstance {
    pub gadget: Gadget,
    pub offset: (usize, usize),
}

impl GadgetInstance {
    /// Check that the host puzzle restricted to the translated entire area
    /// is exactly the gadget's fragment: same clue set, no extras.
    pub fn matches_host(&self, host: &Puzzle) -> bool {
        let (dr, dc) = self.offset;
        let frag = &self.gadget.fragment;
        if frag.rows() + dr > host.rows() || frag.cols() + dc > host.cols() {
            return false;
        }
        let translated = frag.translated(dr, dc, host.rows(), host.cols());
        let mut expected: Vec<&Clue> = translated.clues().iter().collect();
        expected.sort_by_key(|c| (c.row, c.col));
        let mut actual: Vec<&Clue> = host
            .clues()
            .iter()
            .filter(|c| translated.cells().contains(c.row, c.col))
            .collect();
        actual.sort_by_key(|c| (c.row, c.col));
        expected.len() == actual.len()
            && expected
                .iter()
                .zip(&actual)
                .all(|(e, a)| (e.row, e.col, e.kind) == (a.row, a.col, a.kind))
    }
}

/// All `2^k` proper profiles of a gadget with `k` optional areas, in
/// bitmask order.
pub fn proper_profiles(g: &Gadget) -> Vec<Profile> {
    (0..(1u32 << g.optionals().len())).map(|m| g.profile_from_mask(m)).collect()
}

/// Every local solution whose rectangles cover exactly the given proper
/// profile. Exhaustive; canonical order.
pub fn local_solutions(g: &Gadget, profile: &Profile) -> Vec<Solution> {
    assert!(g.is_proper(profile), "profile must be proper");
    let problem = CoverProblem::for_fragment(
        &g.fragment,
        profile.clone(),
        CellSet::empty(g.fragment.rows(), g.fragment.cols()),
    );
    let mut out = Vec::new();
    problem.search(None, |rects| {
        out.push(Solution::new(rects.to_vec()));
        true
    });
    out.sort_by(|a, b| a.rects().cmp(b.rects()));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("profile enumeration exceeded the node budget")]
pub struct BudgetExceeded;

/// Enumerate every local solution of the gadget (mandatory cells covered,
/// optional cells free) and group them by induced profile.
///
/// Returns the table of proper induced profiles with one witness each,
/// plus any solutions that induce an *improper* profile — for a sound
/// gadget that list is empty.
pub fn enumerate_profiles(
    g: &Gadget,
    node_budget: u64,
) -> Result<(ProfileTable, Vec<Solution>), BudgetExceeded> {
    let mut may = CellSet::empty(g.fragment.rows(), g.fragment.cols());
    for o in g.optionals() {
        may.union_with(o);
    }
    let problem = CoverProblem::for_fragment(&g.fragment, g.mandatory.clone(), may);
    let mut by_mask: BTreeMap<u32, Solution> = BTreeMap::new();
    let mut improper: Vec<Solution> = Vec::new();
    let (status, _nodes) = problem.search(Some(node_budget), |rects| {
        let mut induced = CellSet::empty(g.fragment.rows(), g.fragment.cols());
        for r in rects {
            induced.insert_rect(r);
        }
        match g.profile_mask(&induced) {
            Some(mask) => {
                by_mask.entry(mask).or_insert_with(|| Solution::new(rects.to_vec()));
            }
            None => improper.push(Solution::new(rects.to_vec())),
        }
        true
    });
    if status == SolveStatus::ResourceExhausted {
        return Err(BudgetExceeded);
    }
    let entries = by_mask
        .into_iter()
        .map(|(mask, witness)| (g.profile_from_mask(mask), witness))
        .collect();
    Ok((ProfileTable { entries }, improper))
}

/// Compute the gadget's profile table by exhaustive enumeration.
pub fn build_profile_table(g: &Gadget, node_budget: u64) -> Result<ProfileTable, BudgetExceeded> {
    enumerate_profiles(g, node_budget).map(|(t, _)| t)
}

/// The result of verifying a gadget against its expected profile table.
#[derive(Debug, Clone)]
pub struct TableReport {
    pub gadget: String,
    /// Expected profiles with no local solution (optional-subset masks).
    pub missing: Vec<u32>,
    /// Locally solvable profiles absent from the expected table, with a
    /// counterexample witness.
    pub unexpected: Vec<(u32, Solution)>,
    /// Local solutions inducing improper profiles.
    pub improper: Vec<Solution>,
    /// Expected witnesses that fail validation or induce a different
    /// profile (only when the expected table carries witnesses).
    pub bad_witnesses: Vec<u32>,
    pub solvable: usize,
}

impl TableReport {
    pub fn ok(&self) -> bool {
        self.missing.is_empty()
            && self.unexpected.is_empty()
            && self.improper.is_empty()
            && self.bad_witnesses.is_empty()
    }
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return write!(
                f,
                "{}: ok ({} locally solvable profile{})",
                self.gadget,
                self.solvable,
                if self.solvable == 1 { "" } else { "s" }
            );
        }
        writeln!(f, "{}: FAILED", self.gadget)?;
        for m in &self.missing {
            writeln!(f, "  expected profile {{optionals {m:#b}}} has no local solution")?;
        }
        for (m, w) in &self.unexpected {
            writeln!(
                f,
                "  profile {{optionals {m:#b}}} is locally solvable but not expected; witness rects: {:?}",
                w.rects()
            )?;
        }
        for w in &self.improper {
            writeln!(f, "  a local solution induces an improper profile: {:?}", w.rects())?;
        }
        for m in &self.bad_witnesses {
            writeln!(f, "  stored witness for profile {{optionals {m:#b}}} is invalid")?;
        }
        Ok(())
    }
}

/// Verify an expected profile table exhaustively:
/// (a) every expected profile is locally solvable (and its witness, when
/// present, is a valid local solution inducing exactly that profile),
/// (b) no proper profile outside the table is locally solvable,
/// (c) no local solution induces an improper profile.
pub fn check_table(
    g: &Gadget,
    expected_masks: &[u32],
    witnesses: &[(u32, Solution)],
    node_budget: u64,
) -> Result<TableReport, BudgetExceeded> {
    let (table, improper) = enumerate_profiles(g, node_budget)?;
    let found: Vec<u32> = table
        .entries
        .iter()
        .map(|(p, _)| g.profile_mask(p).expect("enumerated profiles are proper"))
        .collect();
    let missing: Vec<u32> =
        expected_masks.iter().copied().filter(|m| !found.contains(m)).collect();
    let unexpected: Vec<(u32, Solution)> = table
        .entries
        .iter()
        .zip(&found)
        .filter(|(_, m)| !expected_masks.contains(m))
        .map(|((_, w), m)| (*m, w.clone()))
        .collect();
    let mut bad_witnesses = Vec::new();
    for (mask, witness) in witnesses {
        let profile = g.profile_from_mask(*mask);
        let mut induced = CellSet::empty(g.fragment.rows(), g.fragment.cols());
        for r in witness.rects() {
            induced.insert_rect(r);
        }
        let frag_ok = validate_local(
            &Fragment::new(
                g.fragment.rows(),
                g.fragment.cols(),
                profile.clone(),
                g.fragment.clues().to_vec(),
            ),
            witness,
        )
        .ok();
        if !frag_ok || induced != profile {
            bad_witnesses.push(*mask);
        }
    }
    Ok(TableReport {
        gadget: g.name.clone(),
        missing,
        unexpected,
        improper,
        bad_witnesses,
        solvable: table.len(),
    })
}

/// A gadget definition file: fragment, area masks and expected table.
///
/// ```text
/// tatamibari <rows> <cols>
/// <rows> grid lines of . + - |
/// mask
/// <rows> mask lines of M (mandatory), 0-9 (optional index), . (outside)
/// table
/// profile [<optional index> ...]    (one line per expected profile)
/// ```
#[derive(Debug, Clone)]
pub struct GadgetFile {
    pub gadget: Gadget,
    pub expected_masks: Vec<u32>,
}

impl GadgetFile {
    pub fn parse(name: &str, text: &str) -> Result<GadgetFile, GridError> {
        let lines: Vec<&str> = text.lines().collect();
        let mask_at = lines
            .iter()
            .position(|l| l.trim() == "mask")
            .ok_or_else(|| GridError::Parse { line: 1, msg: "missing `mask` section".into() })?;
        let table_at = lines
            .iter()
            .position(|l| l.trim() == "table")
            .ok_or_else(|| GridError::Parse { line: 1, msg: "missing `table` section".into() })?;
        if table_at < mask_at {
            return Err(GridError::Parse {
                line: table_at + 1,
                msg: "`table` section before `mask`".into(),
            });
        }
        let puzzle = Puzzle::parse(&lines[..mask_at].join("\n"))?;
        let (rows, cols) = (puzzle.rows(), puzzle.cols());
        let mask_lines = &lines[mask_at + 1..table_at];
        if mask_lines.len() != rows {
            return Err(GridError::Parse {
                line: mask_at + 2,
                msg: format!("expected {rows} mask lines, found {}", mask_lines.len()),
            });
        }
        let mut mandatory = CellSet::empty(rows, cols);
        let mut optionals: BTreeMap<u32, CellSet> = BTreeMap::new();
        for (r, line) in mask_lines.iter().enumerate() {
            let chars: Vec<char> = line.chars().collect();
            if chars.len() != cols {
                return Err(GridError::Parse {
                    line: mask_at + 2 + r,
                    msg: format!("expected {cols} mask characters"),
                });
            }
            for (c, ch) in chars.iter().enumerate() {
                match ch {
                    '.' => {}
                    'M' => mandatory.insert(r, c),
                    '0'..='9' => {
                        let idx = ch.to_digit(10).unwrap();
                        optionals.entry(idx).or_insert_with(|| CellSet::empty(rows, cols)).insert(r, c)
                    }
                    _ => {
                        return Err(GridError::Parse {
                            line: mask_at + 2 + r,
                            msg: format!("invalid mask character `{ch}`"),
                        })
                    }
                }
            }
        }
        let indices: Vec<u32> = optionals.keys().copied().collect();
        for (want, got) in indices.iter().enumerate() {
            if *got != want as u32 {
                return Err(GridError::Parse {
                    line: mask_at + 1,
                    msg: format!("optional area indices must be contiguous from 0, found {got}"),
                });
            }
        }
        let optionals: Vec<CellSet> = optionals.into_values().collect();

        let mut cells = mandatory.clone();
        for o in &optionals {
            cells.union_with(o);
        }
        // Clues of the parsed puzzle must all lie inside the entire area.
        for clue in puzzle.clues() {
            if !cells.contains(clue.row, clue.col) {
                return Err(GridError::Parse {
                    line: 1,
                    msg: format!("clue at ({}, {}) outside the entire area", clue.row, clue.col),
                });
            }
        }
        let fragment = Fragment::new(rows, cols, cells, puzzle.clues().to_vec());

        let mut expected_masks = Vec::new();
        for (i, line) in lines[table_at + 1..].iter().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            if parts.next() != Some("profile") {
                return Err(GridError::Parse {
                    line: table_at + 2 + i,
                    msg: "expected `profile [<optional index> ...]`".into(),
                });
            }
            let mut mask = 0u32;
            for part in parts {
                let idx: u32 = part.parse().map_err(|_| GridError::Parse {
                    line: table_at + 2 + i,
                    msg: format!("bad optional index `{part}`"),
                })?;
                if idx as usize >= optionals.len() {
                    return Err(GridError::Parse {
                        line: table_at + 2 + i,
                        msg: format!("optional index {idx} out of range"),
                    });
                }
                mask |= 1 << idx;
            }
            expected_masks.push(mask);
        }
        expected_masks.sort_unstable();
        expected_masks.dedup();

        Ok(GadgetFile { gadget: Gadget::new(name, fragment, mandatory, optionals), expected_masks })
    }

    pub fn emit(&self) -> String {
        let g = &self.gadget;
        let frag = g.fragment();
        let (rows, cols) = (frag.rows(), frag.cols());
        let mut grid = vec![vec!['.'; cols]; rows];
        for c in frag.clues() {
            grid[c.row][c.col] = c.kind.symbol();
        }
        let mut out = format!("tatamibari {rows} {cols}\n");
        for row in &grid {
            out.extend(row.iter());
            out.push('\n');
        }
        out.push_str("mask\n");
        let mut mask = vec![vec!['.'; cols]; rows];
        for (r, c) in g.mandatory().iter() {
            mask[r][c] = 'M';
        }
        for (i, o) in g.optionals().iter().enumerate() {
            let ch = char::from_digit(i as u32, 10).expect("at most ten optional areas");
            for (r, c) in o.iter() {
                mask[r][c] = ch;
            }
        }
        for row in &mask {
            out.extend(row.iter());
            out.push('\n');
        }
        out.push_str("table\n");
        for m in &self.expected_masks {
            out.push_str("profile");
            for i in 0..g.optionals().len() {
                if m & (1 << i) != 0 {
                    out.push_str(&format!(" {i}"));
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Debug aid: print a local solution over the fragment grid.
pub fn render_rects(rows: usize, cols: usize, rects: &[Rect]) -> String {
    let mut grid = vec![vec!['.'; cols]; rows];
    for (i, r) in rects.iter().enumerate() {
        let ch = char::from_digit((i % 36) as u32, 36).unwrap();
        for (rr, cc) in r.cells() {
            grid[rr][cc] = ch;
        }
    }
    grid.into_iter().map(|row| row.into_iter().collect::<String>() + "\n").collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Clue, ClueKind};

    /// A 1x4 strip `- . . -` split into mandatory middle and two one-cell
    /// optional ends: each `-` either stays 1x2 inside or stretches to its
    /// end, so all four proper profiles... only some are solvable.
    fn strip_gadget() -> Gadget {
        let rows = 1;
        let cols = 6;
        let mut cells = CellSet::full(rows, cols);
        cells.remove(0, 0); // keep an unused border column out of the area
        let mut mandatory = CellSet::empty(rows, cols);
        for c in 2..4 {
            mandatory.insert(0, c);
        }
        mandatory.insert(0, 1);
        mandatory.insert(0, 4);
        let mut left = CellSet::empty(rows, cols);
        left.insert(0, 0);
        cells.insert(0, 0);
        let mut right = CellSet::empty(rows, cols);
        right.insert(0, 5);
        let clues =
            vec![Clue::new(0, 1, ClueKind::Horizontal), Clue::new(0, 4, ClueKind::Horizontal)];
        let frag = Fragment::new(rows, cols, cells, clues);
        Gadget::new("strip", frag, mandatory, vec![left, right])
    }

    #[test]
    fn proper_profile_enumeration() {
        let g = strip_gadget();
        let profiles = proper_profiles(&g);
        assert_eq!(profiles.len(), 4);
        assert!(profiles.iter().all(|p| g.is_proper(p)));
        assert_eq!(g.profile_mask(&profiles[3]), Some(3));
    }

    #[test]
    fn improper_profiles_are_detected() {
        let g = strip_gadget();
        let mut p = g.mandatory().clone();
        assert!(g.is_proper(&p));
        p.remove(0, 2);
        assert!(!g.is_proper(&p));
    }

    #[test]
    fn strip_gadget_table() {
        let g = strip_gadget();
        let (table, improper) = enumerate_profiles(&g, 1_000_000).unwrap();
        assert!(improper.is_empty());
        // Mandatory cells 1..=4 with two `-` clues: each clue covers a 1x2
        // or longer wide rect; the four mandatory cells can be split 1-3
        // only as 2+2 (cols 1-2, 3-4), or stretch into the optional ends.
        // Enumerate by hand: masks 0 (2+2), 1 (left end: 3+... cols 0-2 and
        // 3-4), 2 (1-2, 3-5), 3 (0-2, 3-5).
        let masks: Vec<u32> =
            table.entries.iter().map(|(p, _)| g.profile_mask(p).unwrap()).collect();
        assert_eq!(masks, vec![0, 1, 2, 3]);
        for (profile, witness) in &table.entries {
            let sols = local_solutions(&g, profile);
            assert!(sols.contains(witness));
        }
    }

    #[test]
    fn check_table_reflexive_and_complete() {
        let g = strip_gadget();
        let report = check_table(&g, &[0, 1, 2, 3], &[], 1_000_000).unwrap();
        assert!(report.ok(), "{report}");
        let report = check_table(&g, &[0, 1, 2], &[], 1_000_000).unwrap();
        assert!(!report.ok());
        assert_eq!(report.unexpected.len(), 1);
    }

    /// A `+` clue with an L-shaped optional area and a side column: only
    /// the profiles forming squares are solvable.
    #[test]
    fn check_table_flags_missing_profiles() {
        let rows = 2;
        let cols = 3;
        let mut mandatory = CellSet::empty(rows, cols);
        mandatory.insert(0, 0);
        let mut ell = CellSet::empty(rows, cols);
        ell.insert(0, 1);
        ell.insert(1, 0);
        ell.insert(1, 1);
        let mut side = CellSet::empty(rows, cols);
        side.insert(0, 2);
        side.insert(1, 2);
        let mut cells = mandatory.clone();
        cells.union_with(&ell);
        cells.union_with(&side);
        let frag = Fragment::new(rows, cols, cells, vec![Clue::new(0, 0, ClueKind::Square)]);
        let g = Gadget::new("ell", frag, mandatory, vec![ell, side]);
        let report = check_table(&g, &[0, 1, 2], &[], 1_000_000).unwrap();
        assert!(!report.ok());
        assert_eq!(report.missing, vec![2]);
        assert!(report.unexpected.is_empty());
        let report = check_table(&g, &[0, 1], &[], 1_000_000).unwrap();
        assert!(report.ok(), "{report}");
    }

    #[test]
    fn gadget_file_round_trip() {
        let g = strip_gadget();
        let file = GadgetFile { gadget: g, expected_masks: vec![0, 1, 2, 3] };
        let text = file.emit();
        let parsed = GadgetFile::parse("strip", &text).unwrap();
        assert_eq!(parsed.expected_masks, vec![0, 1, 2, 3]);
        assert_eq!(parsed.emit(), text);
        let report = check_table(&parsed.gadget, &parsed.expected_masks, &[], 1_000_000).unwrap();
        assert!(report.ok(), "{report}");
    }

    #[test]
    fn translation_invariance() {
        let g = strip_gadget();
        let t = g.translated(3, 2, 10, 12);
        let a = check_table(&g, &[0, 1, 2, 3], &[], 1_000_000).unwrap();
        let b = check_table(&t, &[0, 1, 2, 3], &[], 1_000_000).unwrap();
        assert_eq!(a.ok(), b.ok());
        assert_eq!(a.solvable, b.solvable);
    }
}
