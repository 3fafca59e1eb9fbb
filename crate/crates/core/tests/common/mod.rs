#![allow(dead_code)]

use std::collections::BTreeSet;

use achro::colouring::{Colour, ColourMatrix};
use achro::constructions::BaseMatrix;
use achro::plane::ProjectivePlane;
use serde::Deserialize;

#[derive(Deserialize)]
pub struct DisplayedFixture {
    pub order: usize,
    pub s: usize,
    /// 1-based point labels, row i is line i in displayed order.
    pub base: Vec<Vec<usize>>,
    /// `"k^l"` entries.
    pub superscripted: Vec<Vec<String>>,
    pub m3: ColourMatrix,
}

pub fn fixture() -> DisplayedFixture {
    serde_json::from_str(include_str!("../fixtures/fano_displayed.json")).unwrap()
}

/// The fixture's plane (lines in displayed order) and its row arrangement.
pub fn fixture_base() -> (ProjectivePlane, BaseMatrix) {
    let fx = fixture();
    let rows: Vec<Vec<usize>> = fx
        .base
        .iter()
        .map(|r| r.iter().map(|&p| p - 1).collect())
        .collect();
    let plane = ProjectivePlane::from_lines(fx.order, 7, rows.clone()).unwrap();
    let base = BaseMatrix::with_arrangement(&plane, rows).unwrap();
    (plane, base)
}

/// Vertices `(x, y)` of `K_p □ K_q` are adjacent iff they agree in exactly
/// one coordinate.
pub fn adjacent(a: (usize, usize), b: (usize, usize)) -> bool {
    (a.0 == b.0 && a.1 != b.1) || (a.0 != b.0 && a.1 == b.1)
}

/// Graph-level check of the colouring `f(x, y) = M[x][y]`: returns
/// (proper, complete) straight from the definitions.
pub fn graph_check(m: &ColourMatrix) -> (bool, bool) {
    let vertices: Vec<(usize, usize)> = (0..m.rows())
        .flat_map(|x| (0..m.cols()).map(move |y| (x, y)))
        .collect();
    let mut proper = true;
    let mut adjacent_pairs = BTreeSet::new();
    for &u in &vertices {
        for &v in &vertices {
            if !adjacent(u, v) {
                continue;
            }
            let (cu, cv) = (m.get(u.0, u.1), m.get(v.0, v.1));
            if cu == cv {
                proper = false;
            } else {
                adjacent_pairs.insert((cu.clone(), cv.clone()));
            }
        }
    }
    let colours: Vec<Colour> = m.colours().into_iter().collect();
    let complete = colours.iter().enumerate().all(|(i, a)| {
        colours[i + 1..]
            .iter()
            .all(|b| adjacent_pairs.contains(&(a.clone(), b.clone())))
    });
    (proper, complete)
}

/// Achromatic number by enumerating every colouring of the grid as a
/// restricted growth string, keeping proper prefixes only, and checking
/// completeness of each full colouring against the graph definition.
pub fn brute_force_achromatic(p: usize, q: usize) -> usize {
    fn rec(p: usize, q: usize, cells: &mut Vec<usize>, used: usize, best: &mut usize) {
        let n = cells.len();
        if n == p * q {
            if used > *best {
                let m = ColourMatrix::new(
                    p,
                    q,
                    cells.iter().map(|&c| Colour::Index(c as u64)).collect(),
                )
                .unwrap();
                if graph_check(&m) == (true, true) {
                    *best = used;
                }
            }
            return;
        }
        let (x, y) = (n / q, n % q);
        for c in 0..=used {
            let clash = (0..n).any(|k| cells[k] == c && adjacent((k / q, k % q), (x, y)));
            if clash {
                continue;
            }
            cells.push(c);
            rec(p, q, cells, used.max(c + 1), best);
            cells.pop();
        }
    }
    let mut best = 0;
    rec(p, q, &mut Vec::new(), 0, &mut best);
    best
}

/// Largest `a` such that some `l ∈ [1, p]` satisfies `l ≤ ⌊pq/a⌋` and
/// `a ≤ l(p+q-l-1)+1`, by scanning every pair.
pub fn lemma1_scan(p: usize, q: usize) -> usize {
    let mut best = 0;
    for a in 1..=p * q {
        for l in 1..=p.min(q) {
            let fits = l <= p && l <= p * q / a && a as i64 <= (l * (p + q) ) as i64 - (l * l + l) as i64 + 1;
            if fits {
                best = best.max(a);
            }
        }
    }
    best
}
