//! Colour matrices and the membership test for proper complete colourings.
//!
//! A `p × q` matrix `M` describes the vertex colouring `f_M(i, j) = M[i][j]`
//! of `K_p □ K_q`. The colouring is proper iff every row and every column
//! holds distinct colours, and complete iff every pair of distinct colours
//! shares a line (row or column). The stricter row mode asks for a shared row.
//!
//! Completeness is always judged over the colours that actually occur in the
//! matrix.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Witness lists in a [`VerificationReport`] are truncated to this many entries.
pub const MAX_WITNESSES: usize = 10;

/// A colour label.
///
/// `Pair` is the structured colour `(p_k, t)`; both components are 1-based
/// and it is written `"k:t"` in JSON. Integers serialize as JSON numbers and
/// any other label as a JSON string.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Colour {
    Index(u64),
    Pair { point: u32, shift: u32 },
    Label(String),
}

impl Colour {
    pub fn pair(point: u32, shift: u32) -> Self {
        Colour::Pair { point, shift }
    }

    pub fn label(s: impl Into<String>) -> Self {
        Colour::Label(s.into())
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Colour::Index(n) => write!(f, "{n}"),
            Colour::Pair { point, shift } => write!(f, "{point}:{shift}"),
            Colour::Label(s) => f.write_str(s),
        }
    }
}

impl FromStr for Colour {
    type Err = std::convert::Infallible;

    /// `"k:t"` with decimal `k`, `t` parses as a pair; anything else is a label.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let pair = s.split_once(':').and_then(|(k, t)| {
            let digits = |x: &str| !x.is_empty() && x.bytes().all(|b| b.is_ascii_digit());
            if digits(k) && digits(t) {
                Some(Colour::Pair {
                    point: k.parse().ok()?,
                    shift: t.parse().ok()?,
                })
            } else {
                None
            }
        });
        Ok(pair.unwrap_or_else(|| Colour::Label(s.to_string())))
    }
}

impl Serialize for Colour {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Colour::Index(n) => serializer.serialize_u64(*n),
            other => serializer.collect_str(other),
        }
    }
}

impl<'de> Deserialize<'de> for Colour {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ColourVisitor;

        impl Visitor<'_> for ColourVisitor {
            type Value = Colour;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a non-negative integer or a string colour label")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Colour, E> {
                Ok(Colour::Index(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Colour, E> {
                u64::try_from(v)
                    .map(Colour::Index)
                    .map_err(|_| E::custom("negative colour index"))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Colour, E> {
                Ok(v.parse().unwrap())
            }
        }

        deserializer.deserialize_any(ColourVisitor)
    }
}

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyDimension { rows: usize, cols: usize },
    #[error("expected {expected} cells for a {rows}x{cols} matrix, got {actual}")]
    CellCount {
        rows: usize,
        cols: usize,
        expected: usize,
        actual: usize,
    },
    #[error("row {row} has {actual} cells, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        actual: usize,
    },
    #[error("malformed matrix JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// A `rows × cols` matrix of colours, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "MatrixFile", try_from = "MatrixFile")]
pub struct ColourMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<Colour>,
}

impl ColourMatrix {
    pub fn new(rows: usize, cols: usize, cells: Vec<Colour>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::EmptyDimension { rows, cols });
        }
        if cells.len() != rows * cols {
            return Err(MatrixError::CellCount {
                rows,
                cols,
                expected: rows * cols,
                actual: cells.len(),
            });
        }
        Ok(ColourMatrix { rows, cols, cells })
    }

    pub fn from_rows(rows: Vec<Vec<Colour>>) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut cells = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(MatrixError::RaggedRow {
                    row: i + 1,
                    expected: cols,
                    actual: row.len(),
                });
            }
            cells.extend(row);
        }
        Self::new(n, cols, cells)
    }

    /// Integer-coloured matrix from rows of indices.
    pub fn from_indices(rows: &[Vec<u64>]) -> Result<Self, MatrixError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&c| Colour::Index(c)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &Colour {
        &self.cells[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, colour: Colour) {
        self.cells[row * self.cols + col] = colour;
    }

    pub fn swap(&mut self, a: (usize, usize), b: (usize, usize)) {
        self.cells.swap(a.0 * self.cols + a.1, b.0 * self.cols + b.1);
    }

    pub fn row(&self, row: usize) -> &[Colour] {
        &self.cells[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = &Colour> + '_ {
        (0..self.rows).map(move |r| self.get(r, col))
    }

    pub fn cells(&self) -> &[Colour] {
        &self.cells
    }

    pub fn to_rows(&self) -> Vec<Vec<Colour>> {
        self.cells.chunks(self.cols).map(<[Colour]>::to_vec).collect()
    }

    /// Distinct colours, sorted.
    pub fn colours(&self) -> BTreeSet<Colour> {
        self.cells.iter().cloned().collect()
    }

    pub fn colour_count(&self) -> usize {
        self.colours().len()
    }

    pub fn contains(&self, colour: &Colour) -> bool {
        self.cells.contains(colour)
    }

    pub fn transpose(&self) -> Self {
        let cells = (0..self.cols)
            .flat_map(|c| (0..self.rows).map(move |r| (r, c)))
            .map(|(r, c)| self.get(r, c).clone())
            .collect();
        ColourMatrix {
            rows: self.cols,
            cols: self.rows,
            cells,
        }
    }

    /// Column `j` of the result is column `perm[j]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.cols, "permutation length");
        let cells = (0..self.rows)
            .flat_map(|r| perm.iter().map(move |&c| (r, c)))
            .map(|(r, c)| self.get(r, c).clone())
            .collect();
        ColourMatrix {
            rows: self.rows,
            cols: self.cols,
            cells,
        }
    }

    /// Row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.rows, "permutation length");
        let cells = perm.iter().flat_map(|&r| self.row(r).iter().cloned()).collect();
        ColourMatrix {
            rows: self.rows,
            cols: self.cols,
            cells,
        }
    }

    /// Sorted distinct colours together with the matrix of their indices
    /// into that list.
    pub fn dense(&self) -> (Vec<Colour>, Vec<u32>) {
        let palette: Vec<Colour> = self.colours().into_iter().collect();
        let lookup: HashMap<&Colour, u32> = palette
            .iter()
            .enumerate()
            .map(|(i, c)| (c, i as u32))
            .collect();
        let cells = self.cells.iter().map(|c| lookup[c]).collect();
        (palette, cells)
    }

    pub fn verify(&self, mode: CompletenessMode) -> VerificationReport {
        verify_matrix(self, mode)
    }

    pub fn frequencies(&self) -> Frequencies {
        colour_frequencies(self)
    }

    pub fn to_file(&self) -> MatrixFile {
        MatrixFile {
            rows: self.rows,
            cols: self.cols,
            cells: self.to_rows(),
        }
    }

    pub fn from_file(file: MatrixFile) -> Result<Self, MatrixError> {
        if file.cells.len() != file.rows {
            return Err(MatrixError::CellCount {
                rows: file.rows,
                cols: file.cols,
                expected: file.rows,
                actual: file.cells.len(),
            });
        }
        let m = Self::from_rows(file.cells)?;
        if m.cols != file.cols {
            return Err(MatrixError::RaggedRow {
                row: 1,
                expected: file.cols,
                actual: m.cols,
            });
        }
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("matrix serializes")
    }

    pub fn from_json(json: &str) -> Result<Self, MatrixError> {
        Self::from_file(serde_json::from_str::<MatrixFile>(json)?)
    }
}

impl fmt::Display for ColourMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.cells.chunks(self.cols) {
            let line: Vec<String> = row.iter().map(Colour::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl From<ColourMatrix> for MatrixFile {
    fn from(m: ColourMatrix) -> Self {
        m.to_file()
    }
}

impl TryFrom<MatrixFile> for ColourMatrix {
    type Error = MatrixError;

    fn try_from(file: MatrixFile) -> Result<Self, Self::Error> {
        ColourMatrix::from_file(file)
    }
}

/// Matrix interchange format: `cells` is a list of rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub cells: Vec<Vec<Colour>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CompletenessMode {
    /// Every colour pair shares a row or a column.
    Line,
    /// Every colour pair shares a row.
    Row,
}

impl FromStr for CompletenessMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "line" => Ok(CompletenessMode::Line),
            "row" => Ok(CompletenessMode::Row),
            other => Err(format!("unknown mode {other:?}, expected line or row")),
        }
    }
}

/// A colour repeated within one line. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DuplicateWitness {
    /// Row number for row checks, column number for column checks.
    pub line: usize,
    pub colour: Colour,
    /// Positions of the first two occurrences along the line.
    pub positions: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProperCheck {
    pub passed: bool,
    pub violations: usize,
    pub witnesses: Vec<DuplicateWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompleteCheck {
    pub passed: bool,
    pub uncovered_pairs: usize,
    pub witnesses: Vec<[Colour; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub mode: CompletenessMode,
    pub rows: usize,
    pub cols: usize,
    pub colour_count: usize,
    pub proper_rows: ProperCheck,
    pub proper_cols: ProperCheck,
    pub complete: CompleteCheck,
}

impl VerificationReport {
    /// True iff the matrix is in the class selected by `mode`.
    pub fn passed(&self) -> bool {
        self.proper_rows.passed && self.proper_cols.passed && self.complete.passed
    }

    pub fn is_proper(&self) -> bool {
        self.proper_rows.passed && self.proper_cols.passed
    }
}

/// Checks properness and (line- or row-) completeness of `m`.
pub fn verify_matrix(m: &ColourMatrix, mode: CompletenessMode) -> VerificationReport {
    let (palette, cells) = m.dense();
    let k = palette.len();
    let (rows, cols) = (m.rows, m.cols);

    let row_lines: Vec<Vec<u32>> = cells.chunks(cols).map(<[u32]>::to_vec).collect();
    let col_lines: Vec<Vec<u32>> = (0..cols)
        .map(|c| (0..rows).map(|r| cells[r * cols + c]).collect())
        .collect();

    let proper_rows = duplicates(&row_lines, &palette);
    let proper_cols = duplicates(&col_lines, &palette);

    let mut coverage = PairCoverage::new(k);
    let mut seen = vec![false; k];
    let lines: Box<dyn Iterator<Item = &Vec<u32>>> = match mode {
        CompletenessMode::Line => Box::new(row_lines.iter().chain(&col_lines)),
        CompletenessMode::Row => Box::new(row_lines.iter()),
    };
    for line in lines {
        let mut distinct = Vec::with_capacity(line.len());
        for &c in line {
            if !seen[c as usize] {
                seen[c as usize] = true;
                distinct.push(c);
            }
        }
        for &c in &distinct {
            seen[c as usize] = false;
        }
        coverage.cover_all(&distinct);
    }

    let uncovered = coverage.uncovered();
    let witnesses = coverage
        .uncovered_pairs()
        .take(MAX_WITNESSES)
        .map(|(a, b)| [palette[a].clone(), palette[b].clone()])
        .collect();

    VerificationReport {
        mode,
        rows,
        cols,
        colour_count: k,
        proper_rows,
        proper_cols,
        complete: CompleteCheck {
            passed: uncovered == 0,
            uncovered_pairs: uncovered,
            witnesses,
        },
    }
}

fn duplicates(lines: &[Vec<u32>], palette: &[Colour]) -> ProperCheck {
    let mut violations = 0;
    let mut witnesses = Vec::new();
    let mut first_at = vec![usize::MAX; palette.len()];
    for (li, line) in lines.iter().enumerate() {
        for (pos, &c) in line.iter().enumerate() {
            let slot = &mut first_at[c as usize];
            if *slot == usize::MAX {
                *slot = pos;
            } else {
                violations += 1;
                if witnesses.len() < MAX_WITNESSES {
                    witnesses.push(DuplicateWitness {
                        line: li + 1,
                        colour: palette[c as usize].clone(),
                        positions: [*slot + 1, pos + 1],
                    });
                }
            }
        }
        for &c in line {
            first_at[c as usize] = usize::MAX;
        }
    }
    ProperCheck {
        passed: violations == 0,
        violations,
        witnesses,
    }
}

/// Bitmap over unordered pairs `{a, b}` of `[0, n)`, stored as the strict
/// upper triangle.
struct PairCoverage {
    n: usize,
    bits: Vec<u64>,
}

impl PairCoverage {
    fn new(n: usize) -> Self {
        let pairs = n * n.saturating_sub(1) / 2;
        PairCoverage {
            n,
            bits: vec![0; pairs.div_ceil(64)],
        }
    }

    fn index(&self, a: usize, b: usize) -> usize {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        // Pairs (a, ·) start after the rows 0..a of the upper triangle.
        a * (2 * self.n - a - 1) / 2 + (b - a - 1)
    }

    fn cover_all(&mut self, colours: &[u32]) {
        for (i, &a) in colours.iter().enumerate() {
            for &b in &colours[i + 1..] {
                let idx = self.index(a as usize, b as usize);
                self.bits[idx / 64] |= 1 << (idx % 64);
            }
        }
    }

    fn is_covered(&self, a: usize, b: usize) -> bool {
        let idx = self.index(a, b);
        self.bits[idx / 64] & (1 << (idx % 64)) != 0
    }

    fn uncovered(&self) -> usize {
        let pairs = self.n * self.n.saturating_sub(1) / 2;
        pairs - self.bits.iter().map(|w| w.count_ones() as usize).sum::<usize>()
    }

    fn uncovered_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n)
            .flat_map(move |a| (a + 1..self.n).map(move |b| (a, b)))
            .filter(|&(a, b)| !self.is_covered(a, b))
    }
}

/// Occurrence counts of every colour and the minimum count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frequencies {
    pub counts: BTreeMap<Colour, usize>,
    pub min: usize,
}

pub fn colour_frequencies(m: &ColourMatrix) -> Frequencies {
    let mut counts = BTreeMap::new();
    for c in &m.cells {
        *counts.entry(c.clone()).or_insert(0) += 1;
    }
    let min = counts.values().copied().min().unwrap_or(0);
    Frequencies { counts, min }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(rows: &[&str]) -> ColourMatrix {
        ColourMatrix::from_rows(
            rows.iter()
                .map(|r| r.split_whitespace().map(Colour::label).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_row_is_complete() {
        let m = ColourMatrix::from_indices(&[vec![1, 2, 3, 4, 5]]).unwrap();
        let report = m.verify(CompletenessMode::Line);
        assert!(report.passed());
        assert_eq!(report.colour_count, 5);
        let f = m.frequencies();
        assert_eq!(f.min, 1);
        assert!(f.counts.values().all(|&c| c == 1));
    }

    #[test]
    fn two_by_two_swap() {
        let m = labels(&["a b", "b a"]);
        for mode in [CompletenessMode::Line, CompletenessMode::Row] {
            assert!(m.verify(mode).passed());
        }
        let f = m.frequencies();
        assert_eq!(f.counts[&Colour::label("a")], 2);
        assert_eq!(f.counts[&Colour::label("b")], 2);
        assert_eq!(f.min, 2);
    }

    #[test]
    fn improper_rows_and_columns_are_witnessed() {
        let m = labels(&["a a b", "c d b"]);
        let report = m.verify(CompletenessMode::Line);
        assert!(!report.proper_rows.passed);
        assert_eq!(
            report.proper_rows.witnesses,
            vec![DuplicateWitness {
                line: 1,
                colour: Colour::label("a"),
                positions: [1, 2]
            }]
        );
        assert!(!report.proper_cols.passed);
        assert_eq!(report.proper_cols.witnesses[0].line, 3);
        assert!(!report.passed());
    }

    #[test]
    fn uncovered_pairs_listed_in_colour_order() {
        // {a, d} and {b, c} are diagonal, so no line holds them.
        let m = labels(&["a b", "c d"]);
        let line = m.verify(CompletenessMode::Line);
        assert!(line.is_proper());
        assert_eq!(line.complete.uncovered_pairs, 2);
        assert_eq!(
            line.complete.witnesses,
            vec![
                [Colour::label("a"), Colour::label("d")],
                [Colour::label("b"), Colour::label("c")]
            ]
        );
        let row = m.verify(CompletenessMode::Row);
        assert_eq!(row.complete.uncovered_pairs, 4);
    }

    #[test]
    fn witness_lists_are_capped() {
        let m = ColourMatrix::from_indices(&[vec![0; 30]]).unwrap();
        let report = m.verify(CompletenessMode::Line);
        assert_eq!(report.proper_rows.violations, 29);
        assert_eq!(report.proper_rows.witnesses.len(), MAX_WITNESSES);
        let diag = ColourMatrix::from_indices(&(0..20).map(|i| vec![i]).collect::<Vec<_>>()).unwrap();
        let report = diag.transpose().transpose().verify(CompletenessMode::Row);
        assert_eq!(report.complete.uncovered_pairs, 190);
        assert_eq!(report.complete.witnesses.len(), MAX_WITNESSES);
    }

    #[test]
    fn pair_index_is_a_bijection() {
        let cov = PairCoverage::new(9);
        let mut seen = BTreeSet::new();
        for a in 0..9 {
            for b in a + 1..9 {
                assert_eq!(cov.index(a, b), cov.index(b, a));
                assert!(seen.insert(cov.index(a, b)));
            }
        }
        assert_eq!(seen.into_iter().collect::<Vec<_>>(), (0..36).collect::<Vec<_>>());
    }

    #[test]
    fn colour_parsing() {
        assert_eq!("3:12".parse::<Colour>().unwrap(), Colour::pair(3, 12));
        assert_eq!("d1".parse::<Colour>().unwrap(), Colour::label("d1"));
        assert_eq!(":1".parse::<Colour>().unwrap(), Colour::label(":1"));
        assert_eq!("1:x".parse::<Colour>().unwrap(), Colour::label("1:x"));
    }

    #[test]
    fn json_shapes() {
        let m = ColourMatrix::from_rows(vec![
            vec![Colour::pair(1, 2), Colour::Index(7)],
            vec![Colour::label("d1"), Colour::pair(2, 1)],
        ])
        .unwrap();
        let json = m.to_json();
        assert_eq!(json, r#"{"rows":2,"cols":2,"cells":[["1:2",7],["d1","2:1"]]}"#);
        assert_eq!(ColourMatrix::from_json(&json).unwrap(), m);
        assert!(ColourMatrix::from_json(r#"{"rows":2,"cols":2,"cells":[[1,2]]}"#).is_err());
        assert!(ColourMatrix::from_json(r#"{"rows":1,"cols":3,"cells":[[1,2]]}"#).is_err());
        assert!(ColourMatrix::from_json(r#"{"rows":1,"cols":1,"cells":[[-1]]}"#).is_err());
        assert!(ColourMatrix::from_json(r#"{"rows":0,"cols":0,"cells":[]}"#).is_err());
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            ColourMatrix::new(0, 3, vec![]),
            Err(MatrixError::EmptyDimension { .. })
        ));
        assert!(matches!(
            ColourMatrix::new(2, 2, vec![Colour::Index(0)]),
            Err(MatrixError::CellCount { .. })
        ));
        assert!(matches!(
            ColourMatrix::from_indices(&[vec![1, 2], vec![3]]),
            Err(MatrixError::RaggedRow { row: 2, .. })
        ));
    }

    #[test]
    fn permutations_and_transpose() {
        let m = ColourMatrix::from_indices(&[vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        assert_eq!(
            m.permute_columns(&[2, 0, 1]),
            ColourMatrix::from_indices(&[vec![3, 1, 2], vec![6, 4, 5]]).unwrap()
        );
        assert_eq!(
            m.permute_rows(&[1, 0]),
            ColourMatrix::from_indices(&[vec![4, 5, 6], vec![1, 2, 3]]).unwrap()
        );
        assert_eq!(
            m.transpose(),
            ColourMatrix::from_indices(&[vec![1, 4], vec![2, 5], vec![3, 6]]).unwrap()
        );
    }
}
