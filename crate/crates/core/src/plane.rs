//! Finite projective planes: the algebraic construction PG(2, r) and a
//! verifier for the plane axioms that accepts arbitrary incidence structures.
//!
//! Points and lines are addressed by 0-based indices in the API. The JSON
//! interchange format and all report witnesses use 1-based labels, so that
//! `p_1 … p_n` and `L_1 … L_n` read the same way in files and in reports.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{Field, FieldElement, GfError};

/// Witness lists in a [`PlaneReport`] are truncated to this many entries.
pub const MAX_WITNESSES: usize = 10;

#[derive(Debug, Error)]
pub enum PlaneError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("plane order must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error("point {point} is outside [1, {points}]")]
    PointOutOfRange { point: usize, points: usize },
    #[error("line {line} lists point {point} more than once")]
    DuplicatePoint { line: usize, point: usize },
    #[error("a line needs two distinct points, got {0} twice")]
    SamePoint(usize),
    #[error("points {p1} and {p2} lie on {count} common lines, not exactly one")]
    NoUniqueLine { p1: usize, p2: usize, count: usize },
    #[error("malformed plane JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// A finite incidence structure claimed to be a projective plane of `order`.
///
/// Constructed planes carry homogeneous coordinates for their points and
/// lines; imported structures do not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectivePlane {
    order: usize,
    num_points: usize,
    lines: Vec<Vec<usize>>,
    lines_through: Vec<Vec<usize>>,
    coordinates: Option<Vec<[u32; 3]>>,
}

impl ProjectivePlane {
    /// PG(2, r) over `field`, with r = `field.order()`.
    ///
    /// Points are the normalized nonzero triples (first nonzero coordinate 1)
    /// in lexicographic order of their canonical encodings; lines use the same
    /// triples, and point `x` lies on line `u` iff `x · u = 0`.
    pub fn construct(field: &Field) -> Self {
        let r = field.order();
        let triples: Vec<[u32; 3]> = (0..r)
            .flat_map(|a| (0..r).flat_map(move |b| (0..r).map(move |c| [a, b, c])))
            .filter(|t| t.iter().copied().find(|&v| v != 0) == Some(1))
            .collect();
        let elems: Vec<[FieldElement; 3]> = triples
            .iter()
            .map(|t| t.map(|v| field.element(v).expect("coordinate below order")))
            .collect();

        let lines = elems
            .iter()
            .map(|u| {
                elems
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| dot(x, u).is_zero())
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();

        let mut plane = Self::assemble(r as usize, triples.len(), lines);
        plane.coordinates = Some(triples);
        plane
    }

    /// Builds PG(2, r) for a prime power `r`.
    pub fn construct_order(r: u64) -> Result<Self, PlaneError> {
        Ok(Self::construct(&Field::new(r)?))
    }

    /// Wraps an arbitrary incidence structure. Lines are 0-based point-index
    /// lists; they are stored sorted. Nothing about the plane axioms is checked
    /// here, only that indices are in range and not repeated within a line.
    pub fn from_lines(
        order: usize,
        num_points: usize,
        lines: Vec<Vec<usize>>,
    ) -> Result<Self, PlaneError> {
        if order < 2 {
            return Err(PlaneError::OrderTooSmall(order));
        }
        let mut sorted = Vec::with_capacity(lines.len());
        for (li, mut line) in lines.into_iter().enumerate() {
            line.sort_unstable();
            if let Some(&bad) = line.iter().find(|&&p| p >= num_points) {
                return Err(PlaneError::PointOutOfRange {
                    point: bad + 1,
                    points: num_points,
                });
            }
            if let Some(w) = line.windows(2).find(|w| w[0] == w[1]) {
                return Err(PlaneError::DuplicatePoint {
                    line: li + 1,
                    point: w[0] + 1,
                });
            }
            sorted.push(line);
        }
        Ok(Self::assemble(order, num_points, sorted))
    }

    fn assemble(order: usize, num_points: usize, lines: Vec<Vec<usize>>) -> Self {
        let mut lines_through = vec![Vec::new(); num_points];
        for (li, line) in lines.iter().enumerate() {
            for &p in line {
                lines_through[p].push(li);
            }
        }
        ProjectivePlane {
            order,
            num_points,
            lines,
            lines_through,
            coordinates: None,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    /// Points of each line, ascending.
    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    pub fn line(&self, index: usize) -> &[usize] {
        &self.lines[index]
    }

    /// Lines through `point`, ascending.
    pub fn lines_through(&self, point: usize) -> &[usize] {
        &self.lines_through[point]
    }

    pub fn is_incident(&self, point: usize, line: usize) -> bool {
        self.lines[line].binary_search(&point).is_ok()
    }

    /// Homogeneous coordinates (canonical encodings), for constructed planes.
    pub fn coordinates(&self) -> Option<&[[u32; 3]]> {
        self.coordinates.as_deref()
    }

    /// The unique line through two distinct points.
    pub fn line_through(&self, p1: usize, p2: usize) -> Result<usize, PlaneError> {
        for &p in &[p1, p2] {
            if p >= self.num_points {
                return Err(PlaneError::PointOutOfRange {
                    point: p + 1,
                    points: self.num_points,
                });
            }
        }
        if p1 == p2 {
            return Err(PlaneError::SamePoint(p1 + 1));
        }
        let common: Vec<usize> = self.lines_through[p1]
            .iter()
            .copied()
            .filter(|&l| self.is_incident(p2, l))
            .collect();
        match common[..] {
            [l] => Ok(l),
            _ => Err(PlaneError::NoUniqueLine {
                p1: p1 + 1,
                p2: p2 + 1,
                count: common.len(),
            }),
        }
    }

    /// Returns a copy with `point` removed from `line`. Used to build
    /// deliberately broken structures.
    pub fn without_incidence(&self, point: usize, line: usize) -> Self {
        let mut lines = self.lines.clone();
        lines[line].retain(|&p| p != point);
        Self::assemble(self.order, self.num_points, lines)
    }

    /// Checks A1–A4 and B1–B5.
    pub fn verify(&self) -> PlaneReport {
        Verifier::new(self).run()
    }

    pub fn to_file(&self) -> PlaneFile {
        let n = self.order * self.order + self.order + 1;
        PlaneFile {
            order: self.order,
            points: (self.num_points != n).then_some(self.num_points),
            lines: self
                .lines
                .iter()
                .map(|l| l.iter().map(|&p| p + 1).collect())
                .collect(),
        }
    }

    pub fn from_file(file: &PlaneFile) -> Result<Self, PlaneError> {
        let n = file
            .points
            .unwrap_or(file.order * file.order + file.order + 1);
        let mut lines = Vec::with_capacity(file.lines.len());
        for line in &file.lines {
            let mut zero_based = Vec::with_capacity(line.len());
            for &p in line {
                if p == 0 || p > n {
                    return Err(PlaneError::PointOutOfRange { point: p, points: n });
                }
                zero_based.push(p - 1);
            }
            lines.push(zero_based);
        }
        Self::from_lines(file.order, n, lines)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("plane serializes")
    }

    pub fn from_json(json: &str) -> Result<Self, PlaneError> {
        Self::from_file(&serde_json::from_str(json)?)
    }
}

fn dot(x: &[FieldElement; 3], u: &[FieldElement; 3]) -> FieldElement {
    x.iter()
        .zip(u)
        .map(|(a, b)| a.mul(b).expect("same field"))
        .reduce(|acc, v| acc.add(&v).expect("same field"))
        .expect("three terms")
}

/// Plane interchange format. Points are 1-based; `points` defaults to
/// `order² + order + 1` and is omitted when it equals that.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneFile {
    pub order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    pub lines: Vec<Vec<usize>>,
}

/// The properties checked by [`ProjectivePlane::verify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PlaneProperty {
    A1,
    A2,
    A3,
    A4,
    B1,
    B2,
    B3,
    B4,
    B5,
}

impl PlaneProperty {
    pub const ALL: [PlaneProperty; 9] = [
        PlaneProperty::A1,
        PlaneProperty::A2,
        PlaneProperty::A3,
        PlaneProperty::A4,
        PlaneProperty::B1,
        PlaneProperty::B2,
        PlaneProperty::B3,
        PlaneProperty::B4,
        PlaneProperty::B5,
    ];

    pub fn description(self) -> &'static str {
        match self {
            PlaneProperty::A1 => "two distinct points lie on exactly one common line",
            // Read as an intersection of the two lines.
            PlaneProperty::A2 => "two distinct lines have a common point",
            PlaneProperty::A3 => "some four points determine six distinct lines",
            PlaneProperty::A4 => "some line has order+1 points",
            PlaneProperty::B1 => "two distinct lines meet in exactly one point",
            PlaneProperty::B2 => "every line has order+1 points",
            PlaneProperty::B3 => "every point lies on order+1 lines",
            PlaneProperty::B4 => "there are order²+order+1 points",
            PlaneProperty::B5 => "there are order²+order+1 lines",
        }
    }
}

impl fmt::Display for PlaneProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Evidence that a property fails. All indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlaneWitness {
    /// Two points and the lines containing both.
    PointPair { points: [usize; 2], lines: Vec<usize> },
    /// Two lines and their common points.
    LinePair { lines: [usize; 2], common: Vec<usize> },
    NoQuadrilateral,
    NoLineOfSize { size: usize },
    LineSize { line: usize, size: usize },
    PointDegree { point: usize, degree: usize },
    Count { expected: usize, actual: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneCheck {
    pub property: PlaneProperty,
    pub description: String,
    pub passed: bool,
    /// Total number of violations found; `witnesses` holds at most
    /// [`MAX_WITNESSES`] of them.
    pub violations: usize,
    pub witnesses: Vec<PlaneWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneReport {
    pub order: usize,
    pub points: usize,
    pub lines: usize,
    pub checks: Vec<PlaneCheck>,
}

impl PlaneReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, property: PlaneProperty) -> &PlaneCheck {
        self.checks
            .iter()
            .find(|c| c.property == property)
            .expect("every property is checked")
    }
}

struct Verifier<'a> {
    plane: &'a ProjectivePlane,
    /// For each point pair (row-major n×n), the number of lines through both.
    pair_count: Vec<u32>,
    /// The last line seen through each pair.
    pair_line: Vec<u32>,
}

impl<'a> Verifier<'a> {
    fn new(plane: &'a ProjectivePlane) -> Self {
        let n = plane.num_points;
        let mut pair_count = vec![0u32; n * n];
        let mut pair_line = vec![u32::MAX; n * n];
        for (li, line) in plane.lines.iter().enumerate() {
            for (a, &p) in line.iter().enumerate() {
                for &q in &line[a + 1..] {
                    for idx in [p * n + q, q * n + p] {
                        pair_count[idx] += 1;
                        pair_line[idx] = li as u32;
                    }
                }
            }
        }
        Verifier {
            plane,
            pair_count,
            pair_line,
        }
    }

    fn unique_line(&self, p: usize, q: usize) -> Option<u32> {
        let idx = p * self.plane.num_points + q;
        (self.pair_count[idx] == 1).then(|| self.pair_line[idx])
    }

    fn run(&self) -> PlaneReport {
        let checks = PlaneProperty::ALL
            .iter()
            .map(|&property| {
                let (violations, witnesses) = match property {
                    PlaneProperty::A1 => self.check_a1(),
                    PlaneProperty::A2 => self.check_line_pairs(|c| c >= 1),
                    PlaneProperty::A3 => self.check_a3(),
                    PlaneProperty::A4 => self.check_a4(),
                    PlaneProperty::B1 => self.check_line_pairs(|c| c == 1),
                    PlaneProperty::B2 => self.check_b2(),
                    PlaneProperty::B3 => self.check_b3(),
                    PlaneProperty::B4 => self.check_count(self.plane.num_points),
                    PlaneProperty::B5 => self.check_count(self.plane.lines.len()),
                };
                PlaneCheck {
                    property,
                    description: property.description().to_string(),
                    passed: violations == 0,
                    violations,
                    witnesses,
                }
            })
            .collect();
        PlaneReport {
            order: self.plane.order,
            points: self.plane.num_points,
            lines: self.plane.lines.len(),
            checks,
        }
    }

    fn check_a1(&self) -> (usize, Vec<PlaneWitness>) {
        let n = self.plane.num_points;
        let mut found = Collector::default();
        for p in 0..n {
            for q in p + 1..n {
                if self.pair_count[p * n + q] != 1 {
                    let lines = self.plane.lines_through[p]
                        .iter()
                        .filter(|&&l| self.plane.is_incident(q, l))
                        .map(|&l| l + 1)
                        .collect();
                    found.push(PlaneWitness::PointPair {
                        points: [p + 1, q + 1],
                        lines,
                    });
                }
            }
        }
        found.finish()
    }

    fn check_line_pairs(&self, ok: impl Fn(usize) -> bool) -> (usize, Vec<PlaneWitness>) {
        let lines = &self.plane.lines;
        let mut found = Collector::default();
        for a in 0..lines.len() {
            for b in a + 1..lines.len() {
                let common = sorted_intersection(&lines[a], &lines[b]);
                if !ok(common.len()) {
                    found.push(PlaneWitness::LinePair {
                        lines: [a + 1, b + 1],
                        common: common.into_iter().map(|p| p + 1).collect(),
                    });
                }
            }
        }
        found.finish()
    }

    /// Searches for four points, no three on a common line, whose six
    /// connecting lines exist and are distinct.
    fn check_a3(&self) -> (usize, Vec<PlaneWitness>) {
        let n = self.plane.num_points;
        for a in 0..n {
            for b in a + 1..n {
                let Some(ab) = self.unique_line(a, b) else { continue };
                for c in b + 1..n {
                    let (Some(ac), Some(bc)) = (self.unique_line(a, c), self.unique_line(b, c))
                    else {
                        continue;
                    };
                    if ac == ab || bc == ab || ac == bc {
                        continue;
                    }
                    for d in c + 1..n {
                        let six = [
                            Some(ab),
                            Some(ac),
                            Some(bc),
                            self.unique_line(a, d),
                            self.unique_line(b, d),
                            self.unique_line(c, d),
                        ];
                        if six.iter().any(Option::is_none) {
                            continue;
                        }
                        let mut ids: Vec<u32> = six.iter().map(|l| l.unwrap()).collect();
                        ids.sort_unstable();
                        ids.dedup();
                        if ids.len() == 6 {
                            return (0, Vec::new());
                        }
                    }
                }
            }
        }
        (1, vec![PlaneWitness::NoQuadrilateral])
    }

    fn check_a4(&self) -> (usize, Vec<PlaneWitness>) {
        let size = self.plane.order + 1;
        if self.plane.lines.iter().any(|l| l.len() == size) {
            (0, Vec::new())
        } else {
            (1, vec![PlaneWitness::NoLineOfSize { size }])
        }
    }

    fn check_b2(&self) -> (usize, Vec<PlaneWitness>) {
        let mut found = Collector::default();
        for (li, line) in self.plane.lines.iter().enumerate() {
            if line.len() != self.plane.order + 1 {
                found.push(PlaneWitness::LineSize {
                    line: li + 1,
                    size: line.len(),
                });
            }
        }
        found.finish()
    }

    fn check_b3(&self) -> (usize, Vec<PlaneWitness>) {
        let mut found = Collector::default();
        for (p, through) in self.plane.lines_through.iter().enumerate() {
            if through.len() != self.plane.order + 1 {
                found.push(PlaneWitness::PointDegree {
                    point: p + 1,
                    degree: through.len(),
                });
            }
        }
        found.finish()
    }

    fn check_count(&self, actual: usize) -> (usize, Vec<PlaneWitness>) {
        let r = self.plane.order;
        let expected = r * r + r + 1;
        if actual == expected {
            (0, Vec::new())
        } else {
            (1, vec![PlaneWitness::Count { expected, actual }])
        }
    }
}

#[derive(Default)]
struct Collector {
    total: usize,
    kept: Vec<PlaneWitness>,
}

impl Collector {
    fn push(&mut self, w: PlaneWitness) {
        self.total += 1;
        if self.kept.len() < MAX_WITNESSES {
            self.kept.push(w);
        }
    }

    fn finish(self) -> (usize, Vec<PlaneWitness>) {
        (self.total, self.kept)
    }
}

fn sorted_intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
