//! Closed-form bounds on the achromatic number of `K_p □ K_q`.
//!
//! Everything here is exact integer or rational arithmetic. Rule names in
//! reports (`"Theorem4.lower"`, `"Lemma1.3"`, …) identify which inequality
//! produced a value.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colouring::{ColourMatrix, CompletenessMode};
use crate::constructions::build_colouring;
use crate::gf::prime_power;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
}

/// One of the three necessary conditions on a colouring in 𝓜(p, q, C) with
/// `a = |C|` colours and minimum colour frequency `l`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub rule: String,
    pub statement: String,
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma1Check {
    pub p: u64,
    pub q: u64,
    pub a: u64,
    pub l: u64,
    pub constraints: Vec<Constraint>,
}

impl Lemma1Check {
    pub fn satisfied(&self) -> bool {
        self.constraints.iter().all(|c| c.holds)
    }
}

/// `l ≤ p`, `l ≤ ⌊pq/a⌋` and `a ≤ l(p+q-l-1)+1`.
pub fn lemma1_constraints(p: u64, q: u64, a: u64, l: u64) -> Lemma1Check {
    let (pi, qi, ai, li) = (p as i64, q as i64, a as i64, l as i64);
    let share = if a == 0 { i64::MAX } else { pi * qi / ai };
    let reach = li * (pi + qi - li - 1) + 1;
    let constraints = vec![
        Constraint {
            rule: "Lemma1.1".into(),
            statement: format!("l ≤ p: {l} ≤ {p}"),
            lhs: li,
            rhs: pi,
            holds: li <= pi,
        },
        Constraint {
            rule: "Lemma1.2".into(),
            statement: format!("l ≤ ⌊pq/a⌋: {l} ≤ ⌊{}/{a}⌋ = {share}", p * q),
            lhs: li,
            rhs: share,
            holds: li <= share,
        },
        Constraint {
            rule: "Lemma1.3".into(),
            statement: format!("a ≤ l(p+q-l-1)+1: {a} ≤ {reach}"),
            lhs: ai,
            rhs: reach,
            holds: ai <= reach,
        },
    ];
    Lemma1Check {
        p,
        q,
        a,
        l,
        constraints,
    }
}

/// Largest `a` for which some `l ∈ [1, min(p, q)]` satisfies all three
/// constraints. Every proper complete colouring of `K_p □ K_q` uses at most
/// this many colours.
pub fn lemma1_cap(p: u64, q: u64) -> u64 {
    let mut best = 0;
    for l in 1..=p.min(q) {
        // a ≤ l(p+q-l-1)+1 and l ≤ ⌊pq/a⌋ ⇔ a ≤ ⌊pq/l⌋.
        let a = (l * (p + q - l - 1) + 1).min(p * q / l);
        best = best.max(a);
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub value: u64,
    pub rule: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub p: u64,
    pub q: u64,
    pub lower: Bound,
    pub upper: Bound,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<u64>,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<ColourMatrix>,
}

fn check_theorem4(r: u64, s: u64, t: u64) -> Result<(), BoundsError> {
    if r < 2 {
        return Err(BoundsError::HypothesisViolated(format!(
            "the plane order r must be at least 2, got {r}"
        )));
    }
    if s < r.pow(3) + 1 {
        return Err(BoundsError::HypothesisViolated(format!(
            "s must be at least r³+1 = {}, got {s}",
            r.pow(3) + 1
        )));
    }
    if t > r {
        return Err(BoundsError::HypothesisViolated(format!(
            "t must lie in [0, r] = [0, {r}], got {t}"
        )));
    }
    Ok(())
}

/// `(r²+r+1)s + t ≤ achr(K_{r²+r+1} □ K_{(r+1)s+t}) ≤ (r²+r+1)s + rt` for
/// `s ≥ r³+1`, `t ∈ [0, r]`. Exact when `t = 0`.
///
/// The bracket is proved only when a plane of order r exists; for orders
/// that are not prime powers the report says so. With `attach_witness` the
/// lower-bound colouring is built, checked and attached.
pub fn theorem4_bounds(
    r: u64,
    s: u64,
    t: u64,
    attach_witness: bool,
) -> Result<BoundsReport, BoundsError> {
    check_theorem4(r, s, t)?;
    let p = r * r + r + 1;
    let q = (r + 1) * s + t;
    let lower = p * s + t;
    let upper = p * s + r * t;
    let mut notes = vec![format!(
        "{lower} = ({r}²+{r}+1)·{s}+{t} ≤ achr ≤ ({r}²+{r}+1)·{s}+{r}·{t} = {upper}"
    )];
    let exact = if t == 0 {
        notes.push("t = 0: the bounds coincide (Corollary)".into());
        Some(lower)
    } else {
        notes.push("t ≥ 1: only the range is known".into());
        None
    };

    let constructible = prime_power(r).is_some();
    if !constructible {
        notes.push(format!(
            "{r} is not a prime power: no plane of this order is constructed, so the bounds hold only if one exists"
        ));
    }

    let mut witness = None;
    if attach_witness && constructible {
        let m = build_colouring(r, s as usize, t as usize)
            .map_err(|e| BoundsError::HypothesisViolated(e.to_string()))?;
        let report = m.verify(CompletenessMode::Row);
        notes.push(format!(
            "witness: {}x{} matrix, {} colours, row-complete: {}",
            m.rows(),
            m.cols(),
            report.colour_count,
            report.passed()
        ));
        witness = Some(m);
    }

    Ok(BoundsReport {
        p,
        q,
        lower: Bound {
            value: lower,
            rule: "Theorem4.lower".into(),
        },
        upper: Bound {
            value: upper,
            rule: "Theorem4.upper".into(),
        },
        exact,
        notes,
        witness,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnownValue {
    pub p: u64,
    pub q: u64,
    pub value: u64,
    pub rule: String,
}

/// The achromatic number of `K_p □ K_q` where it is known in closed form for
/// `min(p, q) ≤ 6`. Arguments are normalized so that `p ≤ q`. Outside the
/// listed ranges this returns `None`.
pub fn known_value(p: u64, q: u64) -> Option<KnownValue> {
    let (p, q) = if p <= q { (p, q) } else { (q, p) };
    let (value, rule) = match p {
        1 if q >= 1 => (q, "Theorem1.p1"),
        2 if q >= 3 => (q + 1, "Theorem1.1"),
        3 if q >= 4 => (3 * q / 2, "Theorem1.2"),
        4 if q >= 25 => (5 * q / 3, "Theorem1.3"),
        5 if q >= 43 => (9 * q / 5, "Theorem1.4"),
        6 if q >= 41 && q % 2 == 1 => (2 * q + 3, "Theorem1.5"),
        6 if q >= 42 && q % 2 == 0 => (2 * q + 4, "Theorem1.6"),
        _ => return None,
    };
    Some(KnownValue {
        p,
        q,
        value,
        rule: rule.into(),
    })
}

/// `lim_{q→∞} achr(K_{r²+r+1} □ K_q) / q = (r²+r+1)/(r+1)`.
pub fn asymptotic_ratio(r: u64) -> Ratio<u64> {
    Ratio::new(r * r + r + 1, r + 1)
}

/// `lim_{q→∞} achr(K_p □ K_q) / q` for `p ≤ 6`.
pub fn known_limit(p: u64) -> Option<Ratio<u64>> {
    let (n, d) = match p {
        1 | 2 => (1, 1),
        3 => (3, 2),
        4 => (5, 3),
        5 => (9, 5),
        6 => (2, 1),
        _ => return None,
    };
    Some(Ratio::new(n, d))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitEntry {
    pub p: u64,
    pub limit: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioReport {
    pub r: u64,
    pub p: u64,
    pub ratio: String,
    pub numerator: u64,
    pub denominator: u64,
    pub small_p_limits: Vec<LimitEntry>,
}

pub fn ratio_report(r: u64) -> Result<RatioReport, BoundsError> {
    if r < 2 {
        return Err(BoundsError::HypothesisViolated(format!(
            "the plane order r must be at least 2, got {r}"
        )));
    }
    let ratio = asymptotic_ratio(r);
    Ok(RatioReport {
        r,
        p: r * r + r + 1,
        ratio: ratio.to_string(),
        numerator: *ratio.numer(),
        denominator: *ratio.denom(),
        small_p_limits: (1..=6)
            .map(|p| LimitEntry {
                p,
                limit: known_limit(p).expect("p ≤ 6").to_string(),
            })
            .collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainBranch {
    /// Every colour class has r+1 cells.
    FullClasses,
    /// Some colour class has at most r cells.
    SmallClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    pub rule: String,
    pub value: u64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpperBoundTrace {
    pub r: u64,
    pub s: u64,
    pub t: u64,
    pub l: u64,
    pub branch: ChainBranch,
    /// Upper bound on the colour count given minimum frequency `l`.
    pub bound: u64,
    /// `(r²+r+1)s + rt`, which dominates `bound` for every admissible `l`.
    pub final_bound: u64,
    pub steps: Vec<ChainStep>,
}

/// Replays the upper-bound argument for a hypothetical minimum colour
/// frequency `l` of an optimal colouring of `K_{r²+r+1} □ K_{(r+1)s+t}`.
///
/// Any such colouring has at least `(r²+r+1)s` colours, which caps `l` at
/// `r+1`. If `l = r+1` every class has `r+1` cells and counting cells gives
/// `(r²+r+1)s + ⌊(r²+r+1)t/(r+1)⌋ = (r²+r+1)s + rt`. Otherwise the
/// neighbourhood bound `l(p+q-l-1)+1`, increasing in `l` up to `r`, is at
/// most `r³ + r(r+1)s + rt + 1`, and `s ≥ r³+1` absorbs the `r³ + 1`.
pub fn upper_bound_chain(r: u64, s: u64, t: u64, l: u64) -> Result<UpperBoundTrace, BoundsError> {
    check_theorem4(r, s, t)?;
    let p = r * r + r + 1;
    let q = (r + 1) * s + t;
    let lower = p * s + t;
    let final_bound = p * s + r * t;
    let mut steps = Vec::new();

    // l ≤ ⌊pq/a⌋ ≤ ⌊pq/((r²+r+1)s)⌋, using a ≥ (r²+r+1)s.
    let cap = (p * q) / (p * s);
    steps.push(ChainStep {
        rule: "frequency_cap".into(),
        value: cap,
        detail: format!("l ≤ ⌊{}/{}⌋ = {cap}", p * q, p * s),
    });
    debug_assert_eq!(cap, r + 1);
    if l == 0 || l > cap {
        return Err(BoundsError::HypothesisViolated(format!(
            "minimum frequency l = {l} outside [1, {cap}]"
        )));
    }

    let (branch, bound) = if l == r + 1 {
        let bound = p * s + (p * t) / (r + 1);
        steps.push(ChainStep {
            rule: "full_classes".into(),
            value: bound,
            detail: format!(
                "(r+1)·a ≤ {}: a ≤ {}+⌊{}/{}⌋ = {bound}",
                p * q,
                p * s,
                p * t,
                r + 1
            ),
        });
        (ChainBranch::FullClasses, bound)
    } else {
        let at_l = l * (p + q - l - 1) + 1;
        steps.push(ChainStep {
            rule: "Lemma1.3".into(),
            value: at_l,
            detail: format!("a ≤ {l}·({p}+{q}-{l}-1)+1 = {at_l}"),
        });
        let at_r = r * (r * r + (r + 1) * s + t) + 1;
        steps.push(ChainStep {
            rule: "monotone_in_l".into(),
            value: at_r,
            detail: format!("x(p+q-x-1)+1 increases for x ≤ r: {at_l} ≤ {at_r}"),
        });
        let absorbed = s + r * (r + 1) * s + r * t;
        steps.push(ChainStep {
            rule: "absorb_r_cubed".into(),
            value: absorbed,
            detail: format!("r³+1 ≤ s: {at_r} ≤ {absorbed}"),
        });
        debug_assert!(at_l <= at_r && at_r <= absorbed);
        (ChainBranch::SmallClass, at_l)
    };
    debug_assert!(lower <= final_bound && bound <= final_bound);

    Ok(UpperBoundTrace {
        r,
        s,
        t,
        l,
        branch,
        bound,
        final_bound,
        steps,
    })
}
