use achro::gf::{Field, FieldElement, GfError};

const ORDERS: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];

fn elements(f: &Field) -> Vec<FieldElement> {
    f.elements().collect()
}

#[test]
fn orders_round_trip() {
    for order in ORDERS {
        let f = Field::new(order).unwrap();
        assert_eq!(f.order() as u64, order);
        assert_eq!(
            (f.characteristic() as u64).pow(f.degree()),
            order,
            "order = characteristic^degree"
        );
        assert_eq!(elements(&f).len() as u64, order);
    }
}

#[test]
fn field_axioms_exhaustive() {
    for order in ORDERS {
        let f = Field::new(order).unwrap();
        let els = elements(&f);
        let zero = f.zero();
        let one = f.one();
        for a in &els {
            assert_eq!(a.add(&zero).unwrap(), *a);
            assert_eq!(a.mul(&one).unwrap(), *a);
            assert!(a.add(&a.neg()).unwrap().is_zero());
            for b in &els {
                assert_eq!(a.add(b).unwrap(), b.add(a).unwrap());
                assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());
                for c in &els {
                    assert_eq!(
                        a.add(b).unwrap().add(c).unwrap(),
                        a.add(&b.add(c).unwrap()).unwrap()
                    );
                    assert_eq!(
                        a.mul(b).unwrap().mul(c).unwrap(),
                        a.mul(&b.mul(c).unwrap()).unwrap()
                    );
                    assert_eq!(
                        a.mul(&b.add(c).unwrap()).unwrap(),
                        a.mul(b).unwrap().add(&a.mul(c).unwrap()).unwrap()
                    );
                }
            }
        }
    }
}

#[test]
fn unique_inverses_exhaustive() {
    for order in ORDERS {
        let f = Field::new(order).unwrap();
        let els = elements(&f);
        for a in els.iter().filter(|a| !a.is_zero()) {
            let partners: Vec<_> = els
                .iter()
                .filter(|b| a.mul(b).unwrap() == f.one())
                .collect();
            assert_eq!(partners.len(), 1, "GF({order}) element {a}");
            assert_eq!(a.inv().unwrap(), *partners[0]);
        }
        assert_eq!(f.zero().inv().unwrap_err(), GfError::ZeroInverse);
    }
}

/// Long division of a little-endian polynomial by a monic one over GF(p).
fn remainder(mut a: Vec<u32>, b: &[u32], p: u32) -> Vec<u32> {
    let db = b.len() - 1;
    while a.len() > db {
        let lead = a.pop().unwrap();
        let shift = a.len() - db;
        for i in 0..db {
            a[shift + i] = (a[shift + i] + p * p - lead * b[i]) % p;
        }
    }
    a
}

#[test]
fn gf4_product_matches_division_oracle() {
    let f = Field::new(4).unwrap();
    // x·x = x², reduced by x²+x+1.
    let expected = remainder(vec![0, 0, 1], &[1, 1, 1], 2);
    assert_eq!(expected, vec![1, 1]);
    let x = f.from_coefficients(&[0, 1]).unwrap();
    assert_eq!(x.mul(&x).unwrap().coefficients(), &expected[..]);

    // All products in GF(4), GF(8) and GF(9) against the oracle.
    for order in [4u64, 8, 9] {
        let f = Field::new(order).unwrap();
        let p = f.characteristic();
        for a in f.elements() {
            for b in f.elements() {
                let mut prod = vec![0u32; 2 * f.degree() as usize - 1];
                for (i, &ca) in a.coefficients().iter().enumerate() {
                    for (j, &cb) in b.coefficients().iter().enumerate() {
                        prod[i + j] = (prod[i + j] + ca * cb) % p;
                    }
                }
                let mut r = remainder(prod, f.modulus(), p);
                r.resize(f.degree() as usize, 0);
                assert_eq!(a.mul(&b).unwrap().coefficients(), &r[..]);
            }
        }
    }
}

#[test]
fn gf4_inverse_of_x() {
    let f = Field::new(4).unwrap();
    let x = f.from_coefficients(&[0, 1]).unwrap();
    // Exhaustive: which nonzero element times x gives 1?
    let inv: Vec<_> = f
        .elements()
        .filter(|e| !e.is_zero() && x.mul(e).unwrap() == f.one())
        .collect();
    assert_eq!(inv.len(), 1);
    assert_eq!(inv[0].coefficients(), &[1, 1]);
    assert_eq!(x.inv().unwrap(), inv[0]);
}

fn has_root(poly: &[u32], p: u32) -> bool {
    (0..p).any(|x| {
        poly.iter()
            .rev()
            .fold(0u32, |acc, &c| (acc * x + c) % p)
            == 0
    })
}

#[test]
fn moduli_are_smallest_irreducible() {
    // Degrees 2 and 3: irreducible iff no root. Scan candidates in the same
    // order (constant term most significant) and take the first root-free one.
    for order in [4u64, 8, 9, 25, 27, 49] {
        let f = Field::new(order).unwrap();
        let (p, n) = (f.characteristic(), f.degree() as usize);
        let mut first = None;
        let total = p.pow(n as u32);
        for idx in 0..total {
            let mut c = vec![0u32; n + 1];
            let mut rest = idx;
            for i in (0..n).rev() {
                c[i] = rest % p;
                rest /= p;
            }
            c[n] = 1;
            if !has_root(&c, p) {
                first = Some(c);
                break;
            }
        }
        assert_eq!(f.modulus(), &first.unwrap()[..], "GF({order})");
    }
    assert_eq!(Field::new(4).unwrap().modulus(), &[1, 1, 1]);
    // x² vanishes at 0 and x²+1 at 1, so both are reducible over GF(2).
    assert!(has_root(&[0, 0, 1], 2) && has_root(&[1, 0, 1], 2));
}

#[test]
fn degree_four_modulus_is_irreducible() {
    // GF(16): no roots and not a product of two irreducible quadratics; over
    // GF(2) the only irreducible quadratic is x²+x+1, whose square is x⁴+x²+1.
    let f = Field::new(16).unwrap();
    let m = f.modulus();
    assert!(!has_root(m, 2));
    assert_ne!(m, &[1, 0, 1, 0, 1]);
    // Multiplicative group of order 15 is cyclic: some element has order 15.
    let has_generator = f.elements().any(|e| {
        !e.is_zero() && e.pow(3) != f.one() && e.pow(5) != f.one()
    });
    assert!(has_generator);
}

#[test]
fn prime_and_composite_orders() {
    assert_eq!(Field::new(7).unwrap().degree(), 1);
    assert_eq!(Field::new(6).unwrap_err(), GfError::NotPrimePower(6));
    assert_eq!(Field::new(2 * 3 * 5).unwrap_err(), GfError::NotPrimePower(30));
}
