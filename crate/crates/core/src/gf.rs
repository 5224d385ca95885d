//! Exact arithmetic in GF(q) for prime-power q <= 16.
//!
//! Elements are encoded as integers in [0, q): the code is the base-p packing
//! of the polynomial coefficients, code = sum c_i * p^i. Code 0 is the
//! additive identity and code 1 the multiplicative identity. Multiplication
//! and inversion go through tables built once at construction time.

use std::sync::Arc;

use crate::error::{Error, Result};

/// An element of GF(q), stored as its integer code.
pub type FieldElement = u8;

/// One of the four field operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A fixed finite field GF(q) = GF(p^e) with its canonical modulus.
///
/// Immutable after construction; safe to share across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    pub q: u32,
    pub p: u32,
    pub e: u32,
    /// Coefficients of the monic irreducible modulus, lowest degree first
    /// (length e + 1, leading coefficient 1).
    pub modulus: Vec<u8>,
    add_table: Vec<u8>,
    mul_table: Vec<u8>,
    inv_table: Vec<u8>,
}

/// Canonical moduli, lowest degree first. For prime q the modulus is x.
fn canonical_modulus(q: u32) -> Option<(u32, u32, Vec<u8>)> {
    let table: &[(u32, u32, u32, &[u8])] = &[
        (2, 2, 1, &[0, 1]),
        (3, 3, 1, &[0, 1]),
        (4, 2, 2, &[1, 1, 1]),    // x^2 + x + 1
        (5, 5, 1, &[0, 1]),
        (7, 7, 1, &[0, 1]),
        (8, 2, 3, &[1, 1, 0, 1]), // x^3 + x + 1
        (9, 3, 2, &[1, 0, 1]),    // x^2 + 1
        (11, 11, 1, &[0, 1]),
        (13, 13, 1, &[0, 1]),
        (16, 2, 4, &[1, 1, 0, 0, 1]), // x^4 + x + 1
    ];
    table
        .iter()
        .find(|&&(order, ..)| order == q)
        .map(|&(_, p, e, m)| (p, e, m.to_vec()))
}

pub fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Returns (p, e) with q = p^e, if q is a prime power.
pub fn prime_power_decompose(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|&d| q % d == 0).unwrap();
    if !is_prime(p) {
        return None;
    }
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

fn code_to_coeffs(code: u8, p: u32, e: u32) -> Vec<u8> {
    let mut c = code as u32;
    (0..e)
        .map(|_| {
            let d = (c % p) as u8;
            c /= p;
            d
        })
        .collect()
}

fn coeffs_to_code(coeffs: &[u8], p: u32) -> u8 {
    coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c as u32) as u8
}

/// Multiply two coefficient vectors and reduce by the modulus, all mod p.
fn poly_mul_mod(a: &[u8], b: &[u8], modulus: &[u8], p: u32) -> Vec<u8> {
    let e = modulus.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u32 * y as u32) % p;
        }
    }
    // Reduce: x^e = -(modulus minus leading term).
    for d in (e..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for (i, &m) in modulus.iter().enumerate().take(e) {
            let idx = d - e + i;
            prod[idx] = (prod[idx] + c * (p - m as u32) % p) % p;
        }
    }
    prod.truncate(e);
    prod.iter().map(|&c| c as u8).collect()
}

impl FieldSpec {
    /// Builds GF(q) with the canonical modulus. Deterministic across runs.
    pub fn new(q: u32) -> Result<Arc<FieldSpec>> {
        let (p, e) = prime_power_decompose(q).ok_or(Error::NotPrimePower(q))?;
        let (tp, te, modulus) = canonical_modulus(q).ok_or(Error::UnsupportedOrder(q))?;
        debug_assert_eq!((p, e), (tp, te));

        let n = q as usize;
        let mut add_table = vec![0u8; n * n];
        let mut mul_table = vec![0u8; n * n];
        for a in 0..n as u8 {
            let ca = code_to_coeffs(a, p, e);
            for b in 0..n as u8 {
                let cb = code_to_coeffs(b, p, e);
                let sum: Vec<u8> = ca
                    .iter()
                    .zip(&cb)
                    .map(|(&x, &y)| ((x as u32 + y as u32) % p) as u8)
                    .collect();
                add_table[a as usize * n + b as usize] = coeffs_to_code(&sum, p);
                let prod = poly_mul_mod(&ca, &cb, &modulus, p);
                mul_table[a as usize * n + b as usize] = coeffs_to_code(&prod, p);
            }
        }
        let mut inv_table = vec![0u8; n];
        for a in 1..n as u8 {
            for b in 1..n as u8 {
                if mul_table[a as usize * n + b as usize] == 1 {
                    inv_table[a as usize] = b;
                    break;
                }
            }
        }
        Ok(Arc::new(FieldSpec {
            q,
            p,
            e,
            modulus,
            add_table,
            mul_table,
            inv_table,
        }))
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add_table[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        // Search-free: -a has coefficients p - c_i mod p.
        let coeffs: Vec<u8> = code_to_coeffs(a, self.p, self.e)
            .iter()
            .map(|&c| ((self.p - c as u32) % self.p) as u8)
            .collect();
        coeffs_to_code(&coeffs, self.p)
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.mul_table[a as usize * self.q as usize + b as usize]
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a == 0 {
            return Err(Error::DivisionByZero(self.q));
        }
        Ok(self.inv_table[a as usize])
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn apply(&self, op: FieldOp, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        debug_assert!((a as u32) < self.q && (b as u32) < self.q);
        match op {
            FieldOp::Add => Ok(self.add(a, b)),
            FieldOp::Sub => Ok(self.sub(a, b)),
            FieldOp::Mul => Ok(self.mul(a, b)),
            FieldOp::Div => self.div(a, b),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        0..self.q as u8
    }
}

/// Trial division by all monic polynomials of degree <= e/2 over GF(p).
pub fn is_irreducible(modulus: &[u8], p: u32) -> bool {
    let e = modulus.len() - 1;
    if e == 1 {
        return true;
    }
    // Enumerate monic divisors of degree d, 1 <= d <= e/2, by odometer over
    // the d low coefficients.
    for d in 1..=e / 2 {
        let mut coeffs = vec![0u32; d];
        loop {
            let mut divisor: Vec<u8> = coeffs.iter().map(|&c| c as u8).collect();
            divisor.push(1);
            if poly_divides(&divisor, modulus, p) {
                return false;
            }
            // Next odometer state.
            let mut i = 0;
            loop {
                if i == d {
                    break;
                }
                coeffs[i] += 1;
                if coeffs[i] < p {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
            if i == d {
                break;
            }
        }
    }
    true
}

fn poly_divides(divisor: &[u8], dividend: &[u8], p: u32) -> bool {
    let mut rem: Vec<u32> = dividend.iter().map(|&c| c as u32).collect();
    let dd = divisor.len() - 1;
    // Divisor is monic, so long division needs no inversions.
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        let shift = rem.len() - 1 - dd;
        if lead != 0 {
            for (i, &c) in divisor.iter().enumerate() {
                rem[shift + i] = (rem[shift + i] + lead * (p - c as u32) % p) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}
