//! Dense polynomials over a prime field, coefficients low-degree first.

use std::fmt;

/// A polynomial over GF(p). The coefficient vector never has trailing zeros,
/// so the zero polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpPoly {
    pub p: u64,
    pub coeffs: Vec<u64>,
}

pub(crate) fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r.abs() != 1 {
        return None;
    }
    let inv = (old_s * old_r).rem_euclid(m as i128);
    Some(inv as u64)
}

impl FpPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        FpPoly::new(p, vec![1])
    }

    /// `x - a`
    pub fn linear(p: u64, a: u64) -> Self {
        FpPoly::new(p, vec![(p - a % p) % p, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn add(&self, other: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| (self.coeff(i) + other.coeff(i)) % self.p)
            .collect();
        FpPoly::new(self.p, c)
    }

    pub fn neg(&self) -> FpPoly {
        let p = self.p;
        FpPoly::new(p, self.coeffs.iter().map(|&c| (p - c) % p).collect())
    }

    pub fn sub(&self, other: &FpPoly) -> FpPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: u64) -> FpPoly {
        let p = self.p;
        FpPoly::new(p, self.coeffs.iter().map(|&c| c * (k % p) % p).collect())
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero(self.p);
        }
        let p = self.p;
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + a * b) % p;
            }
        }
        FpPoly::new(p, c)
    }

    pub fn pow(&self, e: u32) -> FpPoly {
        let mut acc = FpPoly::one(self.p);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &FpPoly) -> (FpPoly, FpPoly) {
        let p = self.p;
        let dd = divisor.degree().expect("division by zero polynomial");
        let inv_lead = mod_inverse(divisor.lead(), p).expect("p is prime");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (FpPoly::zero(p), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd] * inv_lead % p;
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = (rem[k + j] + p * p - c * d % p) % p;
            }
        }
        (FpPoly::new(p, quot), FpPoly::new(p, rem))
    }

    pub fn rem(&self, divisor: &FpPoly) -> FpPoly {
        self.div_rem(divisor).1
    }

    pub fn monic(&self) -> FpPoly {
        match mod_inverse(self.lead(), self.p) {
            Some(inv) if !self.is_zero() => self.scale(inv),
            _ => self.clone(),
        }
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &FpPoly) -> (FpPoly, FpPoly, FpPoly) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (FpPoly::one(p), FpPoly::zero(p));
        let (mut t0, mut t1) = (FpPoly::zero(p), FpPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = mod_inverse(r0.lead(), p).expect("p is prime");
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    /// Reads a polynomial from base-p digits (coefficient `i` is digit `i`).
    pub fn from_code(p: u64, mut code: u64, len: usize) -> FpPoly {
        let mut c = Vec::with_capacity(len);
        for _ in 0..len {
            c.push(code % p);
            code /= p;
        }
        FpPoly::new(p, c)
    }

    pub fn to_code(&self) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    /// All monic polynomials of the given degree.
    pub fn monic_of_degree(p: u64, degree: usize) -> impl Iterator<Item = FpPoly> {
        let count = p.pow(degree as u32);
        (0..count).map(move |code| {
            let mut c = FpPoly::from_code(p, code, degree).coeffs;
            c.resize(degree, 0);
            c.push(1);
            FpPoly::new(p, c)
        })
    }

    /// Trial division by every monic polynomial of degree `1..=deg/2`.
    pub fn is_irreducible(&self) -> bool {
        let Some(d) = self.degree() else { return false };
        if d == 0 {
            return false;
        }
        for k in 1..=d / 2 {
            for g in FpPoly::monic_of_degree(self.p, k) {
                if self.rem(&g).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Factorization of a monic polynomial into monic irreducible powers,
    /// sorted by degree then coefficient code.
    pub fn factor(&self) -> Vec<(FpPoly, u32)> {
        let mut f = self.monic();
        let mut out = Vec::new();
        let Some(d) = f.degree() else { return out };
        for k in 1..=d {
            if f.degree().unwrap_or(0) < k {
                break;
            }
            for g in FpPoly::monic_of_degree(self.p, k) {
                let mut e = 0;
                loop {
                    let (q, r) = f.div_rem(&g);
                    if !r.is_zero() {
                        break;
                    }
                    f = q;
                    e += 1;
                }
                if e > 0 {
                    out.push((g, e));
                }
            }
        }
        out
    }

    /// Smallest monic irreducible polynomial of the given degree, ordered by
    /// the base-p code of its lower coefficients.
    pub fn first_irreducible(p: u64, degree: usize) -> FpPoly {
        FpPoly::monic_of_degree(p, degree)
            .find(|g| g.is_irreducible())
            .expect("irreducible polynomials exist in every degree")
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}
