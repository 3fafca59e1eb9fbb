//! Exact arithmetic in the finite field GF(p^e).
//!
//! A [`Field`] is a cheap, clonable handle to an immutable description of the
//! field: its characteristic, extension degree and a monic irreducible
//! modulus. Elements are little-endian coefficient vectors over GF(p), with
//! the canonical integer encoding `Σ cᵢ·pⁱ` used for ordering and I/O.
//!
//! The modulus is always the lexicographically smallest monic irreducible
//! polynomial of the required degree, where coefficient vectors are compared
//! constant term first. This makes every construction built on top of a field
//! reproducible across runs.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {0} exceeds the supported maximum of {MAX_ORDER}")]
    TooLarge(u64),
    #[error("operands belong to different fields (GF({left}) vs GF({right}))")]
    FieldMismatch { left: u32, right: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("encoded value {value} is out of range for GF({order})")]
    OutOfRange { value: u32, order: u32 },
}

#[derive(Debug, PartialEq, Eq)]
struct FieldData {
    characteristic: u32,
    degree: u32,
    order: u32,
    /// Monic, little-endian, length `degree + 1`.
    modulus: Vec<u32>,
}

/// The finite field GF(p^e).
#[derive(Clone)]
pub struct Field(Arc<FieldData>);

impl Field {
    /// Builds GF(order). Fails unless `order` is a prime power in `[2, MAX_ORDER]`.
    pub fn new(order: u64) -> Result<Self, GfError> {
        if order > MAX_ORDER {
            return Err(GfError::TooLarge(order));
        }
        let (characteristic, degree) = prime_power(order).ok_or(GfError::NotPrimePower(order))?;
        let modulus = smallest_irreducible(characteristic, degree);
        Ok(Field(Arc::new(FieldData {
            characteristic,
            degree,
            order: order as u32,
            modulus,
        })))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.characteristic
    }

    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    /// The modulus as little-endian coefficients, leading 1 included.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            coeffs: vec![0; self.0.degree as usize],
        }
    }

    pub fn one(&self) -> FieldElement {
        let mut e = self.zero();
        e.coeffs[0] = 1;
        e
    }

    /// Decodes the canonical integer encoding `Σ cᵢ·pⁱ`.
    pub fn element(&self, value: u32) -> Result<FieldElement, GfError> {
        if value >= self.0.order {
            return Err(GfError::OutOfRange {
                value,
                order: self.0.order,
            });
        }
        let p = self.0.characteristic;
        let mut rest = value;
        let coeffs = (0..self.0.degree)
            .map(|_| {
                let c = rest % p;
                rest /= p;
                c
            })
            .collect();
        Ok(FieldElement {
            field: self.clone(),
            coeffs,
        })
    }

    /// Builds an element from little-endian coefficients, reducing each modulo
    /// the characteristic. Missing high coefficients are zero; extra ones are
    /// rejected.
    pub fn from_coefficients(&self, coeffs: &[u32]) -> Result<FieldElement, GfError> {
        let degree = self.0.degree as usize;
        let p = self.0.characteristic;
        if coeffs.len() > degree && coeffs[degree..].iter().any(|&c| c % p != 0) {
            let value = coeffs
                .iter()
                .rev()
                .fold(0u64, |acc, &c| acc * p as u64 + (c % p) as u64);
            return Err(GfError::OutOfRange {
                value: value.min(u32::MAX as u64) as u32,
                order: self.0.order,
            });
        }
        let mut out = vec![0; degree];
        for (slot, &c) in out.iter_mut().zip(coeffs) {
            *slot = c % p;
        }
        Ok(FieldElement {
            field: self.clone(),
            coeffs: out,
        })
    }

    /// All elements in canonical encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.order).map(move |v| self.element(v).expect("value below order"))
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GF({}) [char {}, degree {}, modulus {}]",
            self.0.order,
            self.0.characteristic,
            self.0.degree,
            format_poly(&self.0.modulus)
        )
    }
}

/// An element of a [`Field`].
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Little-endian coefficients, each in `[0, characteristic)`.
    pub fn coefficients(&self) -> &[u32] {
        &self.coeffs
    }

    /// Canonical integer encoding `Σ cᵢ·pⁱ`.
    pub fn value(&self) -> u32 {
        let p = self.field.characteristic();
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check_same(&self, other: &FieldElement) -> Result<(), GfError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(GfError::FieldMismatch {
                left: self.field.order(),
                right: other.field.order(),
            })
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement, GfError> {
        self.check_same(other)?;
        let p = self.field.characteristic();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        Ok(FieldElement {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn neg(&self) -> FieldElement {
        let p = self.field.characteristic();
        FieldElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|&c| (p - c) % p).collect(),
        }
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement, GfError> {
        self.add(&other.neg())
    }

    /// Polynomial product reduced by the field modulus.
    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement, GfError> {
        self.check_same(other)?;
        let p = self.field.characteristic() as u64;
        let n = self.coeffs.len();
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a as u64 * b as u64) % p;
            }
        }
        let modulus = self.field.modulus();
        for k in (n..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            // Subtract c·x^(k-n)·modulus; the modulus is monic so prod[k] becomes 0.
            for (i, &m) in modulus.iter().enumerate() {
                let idx = k - n + i;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
        }
        Ok(FieldElement {
            field: self.field.clone(),
            coeffs: prod[..n].iter().map(|&c| c as u32).collect(),
        })
    }

    pub fn pow(&self, mut exp: u64) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            base = base.mul(&base).expect("same field");
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via `a^(order-2)`.
    pub fn inv(&self) -> Result<FieldElement, GfError> {
        if self.is_zero() {
            return Err(GfError::ZeroInverse);
        }
        Ok(self.pow(self.field.order() as u64 - 2))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in GF({})", self, self.field.order())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(&self.coeffs))
    }
}

fn format_poly(coeffs: &[u32]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "x".to_string(),
            (1, c) => format!("{c}x"),
            (i, 1) => format!("x^{i}"),
            (i, c) => format!("{c}x^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

/// Returns `(p, e)` with `n = p^e` for prime `p`, if such a pair exists.
pub fn prime_power(n: u64) -> Option<(u32, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n && !n.is_multiple_of(p) {
        p += 1;
    }
    if !n.is_multiple_of(p) {
        // n itself is prime
        p = n;
    }
    let mut rest = n;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p as u32, e))
}

/// Remainder of `a` modulo the monic polynomial `b` over GF(p). Both little-endian.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let shift = r.len() - db;
            for (i, &bi) in b[..db].iter().enumerate() {
                r[shift + i] = ((r[shift + i] as u64 + (p - lead) as u64 * bi as u64) % p as u64) as u32;
            }
        }
    }
    r
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut rest = idx;
            for _ in 0..d {
                g.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree `n` over GF(p), comparing the
/// non-leading coefficients constant term first.
fn smallest_irreducible(p: u32, n: u32) -> Vec<u32> {
    let n = n as usize;
    let total = (p as u64).pow(n as u32);
    for idx in 0..total {
        // c0 is the most significant digit of idx so that idx order is
        // lexicographic order on (c0, c1, ...).
        let mut coeffs = vec![0u32; n + 1];
        let mut rest = idx;
        for i in (0..n).rev() {
            coeffs[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[n] = 1;
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over GF({p})")
}
