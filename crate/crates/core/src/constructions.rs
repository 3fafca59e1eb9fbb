//! Colourings of `K_{r²+r+1} □ K_q` built from a projective plane of order r.
//!
//! The pipeline is:
//!
//! 1. [`BaseMatrix`]: an `(r²+r+1) × (r+1)` matrix whose i-th row lists the
//!    points of line i.
//! 2. [`SuperscriptedMatrix`]: every point occurs r+1 times in the base
//!    matrix; its occurrences are numbered 1..=r+1 in row-major order.
//! 3. [`build_ms`]: occurrence `l` of point `k` is replaced by the l-th row of
//!    the cyclic block `(p_k, 1..=s)` shifted by `l-1`. The result is an
//!    `(r²+r+1) × (r+1)s` matrix in which every pair of its `(r²+r+1)s`
//!    colours shares a row.
//! 4. [`extend_plus_one`]: appends a column holding one fresh colour and
//!    swaps it into place row by row, keeping the row-complete property.
//!
//! Point indices in this API are 0-based; colour pairs `(k, t)` carry the
//! 1-based point label `k = index + 1`.

use thiserror::Error;

use crate::colouring::{Colour, ColourMatrix, CompletenessMode};
use crate::plane::{PlaneError, ProjectivePlane};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error("not a usable projective plane: {0}")]
    InvalidPlane(String),
    #[error("point {point} occurs {count} times in the base matrix, expected {expected}")]
    BadMultiplicity {
        point: usize,
        count: usize,
        expected: usize,
    },
    #[error("block length s = {s} must be at least r+1 = {}", r + 1)]
    STooSmall { s: usize, r: usize },
    #[error("{0}")]
    Hypothesis(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no admissible swap column for row {row}")]
    ExtensionFailed { row: usize },
}

/// The plane's lines laid out as rows, `r+1` points each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseMatrix {
    order: usize,
    rows: Vec<Vec<usize>>,
}

impl BaseMatrix {
    /// Row i lists the points of line i in ascending order.
    pub fn from_plane(plane: &ProjectivePlane) -> Result<Self, ConstructionError> {
        check_shape(plane)?;
        Ok(BaseMatrix {
            order: plane.order(),
            rows: plane.lines().to_vec(),
        })
    }

    /// Uses a caller-chosen order of points within each row. Row i must be a
    /// permutation of line i.
    pub fn with_arrangement(
        plane: &ProjectivePlane,
        rows: Vec<Vec<usize>>,
    ) -> Result<Self, ConstructionError> {
        check_shape(plane)?;
        if rows.len() != plane.num_lines() {
            return Err(ConstructionError::PreconditionViolated(format!(
                "arrangement has {} rows, plane has {} lines",
                rows.len(),
                plane.num_lines()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            let mut sorted = row.clone();
            sorted.sort_unstable();
            if sorted != plane.line(i) {
                return Err(ConstructionError::PreconditionViolated(format!(
                    "row {} is not a permutation of line {}",
                    i + 1,
                    i + 1
                )));
            }
        }
        Ok(BaseMatrix {
            order: plane.order(),
            rows,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// The matrix over point labels `Colour::Index(k + 1)`.
    pub fn to_colour_matrix(&self) -> ColourMatrix {
        ColourMatrix::from_rows(
            self.rows
                .iter()
                .map(|r| r.iter().map(|&p| Colour::Index(p as u64 + 1)).collect())
                .collect(),
        )
        .expect("base matrix is rectangular")
    }
}

fn check_shape(plane: &ProjectivePlane) -> Result<(), ConstructionError> {
    let r = plane.order();
    let n = r * r + r + 1;
    if plane.num_points() != n {
        return Err(ConstructionError::InvalidPlane(format!(
            "{} points, expected {n}",
            plane.num_points()
        )));
    }
    if plane.num_lines() != n {
        return Err(ConstructionError::InvalidPlane(format!(
            "{} lines, expected {n}",
            plane.num_lines()
        )));
    }
    if let Some((i, line)) = plane.lines().iter().enumerate().find(|(_, l)| l.len() != r + 1) {
        return Err(ConstructionError::InvalidPlane(format!(
            "line {} has {} points, expected {}",
            i + 1,
            line.len(),
            r + 1
        )));
    }
    Ok(())
}

/// A point together with which of its r+1 occurrences this is (both 0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointCopy {
    pub point: usize,
    pub copy: usize,
}

/// The base matrix with every point occurrence numbered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperscriptedMatrix {
    order: usize,
    rows: Vec<Vec<PointCopy>>,
}

impl SuperscriptedMatrix {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rows(&self) -> &[Vec<PointCopy>] {
        &self.rows
    }
}

/// Numbers the occurrences of each point in row-major scan order.
pub fn build_superscripted(base: &BaseMatrix) -> Result<SuperscriptedMatrix, ConstructionError> {
    let r = base.order;
    let n = r * r + r + 1;
    let mut seen = vec![0usize; n];
    let mut rows = Vec::with_capacity(base.rows.len());
    for row in &base.rows {
        let mut out = Vec::with_capacity(row.len());
        for &point in row {
            if point >= n {
                return Err(ConstructionError::InvalidPlane(format!(
                    "point {} outside [1, {n}]",
                    point + 1
                )));
            }
            out.push(PointCopy {
                point,
                copy: seen[point],
            });
            seen[point] += 1;
        }
        rows.push(out);
    }
    if let Some((point, &count)) = seen.iter().enumerate().find(|(_, &c)| c != r + 1) {
        return Err(ConstructionError::BadMultiplicity {
            point: point + 1,
            count,
            expected: r + 1,
        });
    }
    Ok(SuperscriptedMatrix { order: r, rows })
}

/// The `(r+1) × s` block whose row `i` is `(p_k, ·)` cyclically shifted by
/// `i`: cell `(i, j)` (0-based) holds `(k+1, (i + j) mod s + 1)`.
pub fn build_cyclic_block(point: usize, s: usize, r: usize) -> ColourMatrix {
    assert!(s >= 1, "block length must be positive");
    ColourMatrix::from_rows((0..=r).map(|i| cyclic_row(point, i, s).collect()).collect())
        .expect("block is rectangular")
}

fn cyclic_row(point: usize, shift: usize, s: usize) -> impl Iterator<Item = Colour> {
    (0..s).map(move |j| Colour::pair(point as u32 + 1, ((shift + j) % s) as u32 + 1))
}

/// Replaces every numbered occurrence by its row of the cyclic block. No
/// lower bound on `s` is enforced here; see [`build_ms`].
pub fn expand_blocks(sup: &SuperscriptedMatrix, s: usize) -> ColourMatrix {
    assert!(s >= 1, "block length must be positive");
    ColourMatrix::from_rows(
        sup.rows
            .iter()
            .map(|row| {
                row.iter()
                    .flat_map(|pc| cyclic_row(pc.point, pc.copy, s))
                    .collect()
            })
            .collect(),
    )
    .expect("expanded matrix is rectangular")
}

/// The row-complete colouring with `(r²+r+1)s` colours on an
/// `(r²+r+1) × (r+1)s` grid. Requires `s ≥ r+1`.
pub fn build_ms(plane: &ProjectivePlane, s: usize) -> Result<ColourMatrix, ConstructionError> {
    build_ms_from_base(&BaseMatrix::from_plane(plane)?, s)
}

pub fn build_ms_from_base(base: &BaseMatrix, s: usize) -> Result<ColourMatrix, ConstructionError> {
    if s <= base.order {
        return Err(ConstructionError::STooSmall { s, r: base.order });
    }
    Ok(expand_blocks(&build_superscripted(base)?, s))
}

/// Adds the fresh colour `fresh` to a row-complete `p × q` matrix, giving a
/// row-complete `p × (q+1)` matrix.
///
/// `fresh` first fills the new last column. Row 1 keeps it there; each later
/// row swaps it into the smallest column `j` such that column `j` holds no
/// `fresh` in the rows above, and the colour moved out of `j` does not already
/// occur in the last column above. Requires `p ≥ 3` and `q ≥ 2p - 1`, which
/// leaves at least one admissible `j` for every row.
pub fn extend_plus_one(m: &ColourMatrix, fresh: Colour) -> Result<ColourMatrix, ConstructionError> {
    let (p, q) = (m.rows(), m.cols());
    if p < 3 {
        return Err(ConstructionError::PreconditionViolated(format!(
            "needs at least 3 rows, got {p}"
        )));
    }
    if q + 1 < 2 * p {
        return Err(ConstructionError::PreconditionViolated(format!(
            "needs q ≥ 2p-1 = {}, got q = {q}",
            2 * p - 1
        )));
    }
    if m.contains(&fresh) {
        return Err(ConstructionError::PreconditionViolated(format!(
            "colour {fresh} already occurs in the matrix"
        )));
    }
    if !m.verify(CompletenessMode::Row).passed() {
        return Err(ConstructionError::PreconditionViolated(
            "input is not a proper row-complete matrix".into(),
        ));
    }

    let mut out = ColourMatrix::from_rows(
        m.to_rows()
            .into_iter()
            .map(|mut row| {
                row.push(fresh.clone());
                row
            })
            .collect(),
    )
    .expect("rows stay rectangular");

    let mut fresh_in_col = vec![false; q];
    for i in 1..p {
        let j = (0..q)
            .find(|&j| {
                !fresh_in_col[j] && !(0..i).any(|above| out.get(above, q) == out.get(i, j))
            })
            .ok_or(ConstructionError::ExtensionFailed { row: i + 1 })?;
        out.swap((i, j), (i, q));
        fresh_in_col[j] = true;
    }
    Ok(out)
}

/// The colouring of `K_{r²+r+1} □ K_{(r+1)s+t}` with `(r²+r+1)s + t`
/// colours: the plane construction followed by `t` one-colour extensions
/// using fresh colours `d1, …, dt`.
///
/// `t` must lie in `[0, r]`. With `t = 0` any `s ≥ r+1` is accepted; with
/// `t ≥ 1` the width must satisfy `s ≥ r³+1`.
pub fn build_colouring(r: u64, s: usize, t: usize) -> Result<ColourMatrix, ConstructionError> {
    let ru = r as usize;
    if t > ru {
        return Err(ConstructionError::Hypothesis(format!(
            "t must lie in [0, r] = [0, {r}], got t = {t}"
        )));
    }
    if t == 0 && s <= ru {
        return Err(ConstructionError::STooSmall { s, r: ru });
    }
    if t >= 1 && s < ru.pow(3) + 1 {
        return Err(ConstructionError::Hypothesis(format!(
            "t ≥ 1 requires s ≥ r³+1 = {}, got s = {s}",
            ru.pow(3) + 1
        )));
    }
    let plane = ProjectivePlane::construct_order(r)?;
    let mut m = build_ms(&plane, s)?;
    for i in 1..=t {
        m = extend_plus_one(&m, Colour::label(format!("d{i}")))?;
    }
    Ok(m)
}
