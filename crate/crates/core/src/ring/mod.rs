//! Finite commutative unital rings with exact element arithmetic.
//!
//! Rings are built from three constructors: residues `Z/n`, quotients
//! `GF(p)[x]/(f)` by a monic polynomial (finite fields being the irreducible
//! case), and finite direct products. Every element has a canonical integer
//! code in `0..size`, a bijective mixed-radix encoding of its coordinates, so
//! element equality is code equality.

mod decompose;
mod ideal;
mod parse;
pub mod poly;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use decompose::{primitive_idempotents, ArtinianDecomposition};
pub use ideal::{IdealHandle, Projection};
pub use poly::FpPoly;

/// Raw element code. Only meaningful together with its ring.
pub type Code = u32;

const TABLE_LIMIT: u32 = 512;
const INVERSE_TABLE_LIMIT: u32 = 1 << 16;
const MAX_RING_SIZE: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("syntax error in ring spec `{input}`: {reason}")]
    Syntax { input: String, reason: String },
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomial {0} is reducible over GF({1})")]
    Reducible(String, u64),
    #[error("polynomial {0} is not monic of positive degree")]
    NotMonic(String),
    #[error("ring of order {0} is too large")]
    TooLarge(u64),
    #[error("operands belong to different rings ({0} vs {1})")]
    Mismatch(String, String),
    #[error("cannot parse element `{input}` of {ring}: {reason}")]
    BadElement { input: String, ring: String, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum RingKind {
    Zmod { n: u64 },
    Poly { p: u64, modulus: FpPoly, degree: usize },
    Product { factors: Vec<RingSpec>, strides: Vec<u32> },
}

struct Tables {
    add: Vec<Code>,
    mul: Vec<Code>,
}

struct RingData {
    kind: RingKind,
    size: u32,
    characteristic: u64,
    label: String,
    tables: Option<Tables>,
    inverses: Option<Vec<Option<Code>>>,
}

/// Handle to a finite commutative unital ring. Cheap to clone; immutable.
#[derive(Clone)]
pub struct RingSpec(Arc<RingData>);

impl PartialEq for RingSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}
impl Eq for RingSpec {}

impl fmt::Debug for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingSpec({})", self.0.label)
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.label)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as `(p, k)` pairs in increasing order of `p`.
pub(crate) fn factor_integer(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut k = 0;
        while n.is_multiple_of(d) {
            n /= d;
            k += 1;
        }
        if k > 0 {
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl RingSpec {
    fn build(kind: RingKind, label: String) -> Result<RingSpec, RingError> {
        let (size, characteristic) = match &kind {
            RingKind::Zmod { n } => (*n, *n),
            RingKind::Poly { p, degree, .. } => (p.pow(*degree as u32), *p),
            RingKind::Product { factors, .. } => {
                let size = factors.iter().map(|f| f.size() as u64).product::<u64>();
                let ch = factors
                    .iter()
                    .map(|f| f.characteristic())
                    .fold(1, |a, b| a / gcd(a, b) * b);
                (size, ch)
            }
        };
        if size > MAX_RING_SIZE {
            return Err(RingError::TooLarge(size));
        }
        let mut data = RingData {
            kind,
            size: size as u32,
            characteristic,
            label,
            tables: None,
            inverses: None,
        };
        let is_zmod = matches!(data.kind, RingKind::Zmod { .. });
        let probe = RingSpec(Arc::new(RingData {
            kind: data.kind.clone(),
            size: data.size,
            characteristic,
            label: data.label.clone(),
            tables: None,
            inverses: None,
        }));
        if !is_zmod && data.size <= TABLE_LIMIT {
            let n = data.size;
            let mut add = Vec::with_capacity((n * n) as usize);
            let mut mul = Vec::with_capacity((n * n) as usize);
            for a in 0..n {
                for b in 0..n {
                    add.push(probe.add_slow(a, b));
                    mul.push(probe.mul_slow(a, b));
                }
            }
            data.tables = Some(Tables { add, mul });
        }
        if data.size <= INVERSE_TABLE_LIMIT {
            data.inverses = Some((0..data.size).map(|a| probe.inv_slow(a)).collect());
        }
        Ok(RingSpec(Arc::new(data)))
    }

    /// `Z/n`. Sizes of one are allowed internally (quotients by the unit ideal).
    pub fn zmod(n: u64) -> Result<RingSpec, RingError> {
        if n < 2 {
            return Err(RingError::ModulusTooSmall(n));
        }
        RingSpec::build(RingKind::Zmod { n }, format!("Z/{n}"))
    }

    pub(crate) fn trivial() -> RingSpec {
        RingSpec::build(RingKind::Zmod { n: 1 }, "Z/1".into()).expect("trivial ring")
    }

    /// The field with `q` elements, using the smallest monic irreducible
    /// polynomial when `q` is not prime.
    pub fn gf(q: u64) -> Result<RingSpec, RingError> {
        let fs = factor_integer(q);
        if q < 2 || fs.len() != 1 {
            return Err(RingError::NotPrimePower(q));
        }
        let (p, k) = fs[0];
        if k == 1 {
            return RingSpec::build(RingKind::Zmod { n: p }, format!("GF({p})"));
        }
        let modulus = FpPoly::first_irreducible(p, k as usize);
        RingSpec::build(
            RingKind::Poly { p, modulus, degree: k as usize },
            format!("GF({q})"),
        )
    }

    /// `GF(p)[x]/(f)` requiring `f` irreducible.
    pub fn finite_field(p: u64, modulus: FpPoly) -> Result<RingSpec, RingError> {
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        let modulus = FpPoly::new(p, modulus.coeffs);
        if !modulus.is_irreducible() {
            return Err(RingError::Reducible(modulus.to_string(), p));
        }
        RingSpec::poly_quotient(p, modulus)
    }

    /// `GF(p)[x]/(f)` for any monic `f` of positive degree. Degree one
    /// quotients are normalized to the prime field.
    pub fn poly_quotient(p: u64, modulus: FpPoly) -> Result<RingSpec, RingError> {
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        let modulus = FpPoly::new(p, modulus.coeffs);
        let degree = match modulus.degree() {
            Some(d) if d >= 1 && modulus.is_monic() => d,
            _ => return Err(RingError::NotMonic(modulus.to_string())),
        };
        if degree == 1 {
            return RingSpec::build(RingKind::Zmod { n: p }, format!("GF({p})"));
        }
        let label = format!("GF({p})[x]/({modulus})");
        RingSpec::build(RingKind::Poly { p, modulus, degree }, label)
    }

    /// Direct product; nested products are flattened, trivial factors dropped.
    pub fn product(factors: Vec<RingSpec>) -> Result<RingSpec, RingError> {
        let mut flat = Vec::new();
        for f in factors {
            match &f.0.kind {
                RingKind::Product { factors, .. } => flat.extend(factors.iter().cloned()),
                _ if f.size() == 1 => {}
                _ => flat.push(f),
            }
        }
        match flat.len() {
            0 => Ok(RingSpec::trivial()),
            1 => Ok(flat.pop().unwrap()),
            _ => {
                let mut strides = Vec::with_capacity(flat.len());
                let mut acc: u64 = 1;
                for f in &flat {
                    strides.push(acc as u32);
                    acc = acc.saturating_mul(f.size() as u64);
                    if acc > MAX_RING_SIZE {
                        return Err(RingError::TooLarge(acc));
                    }
                }
                let label = flat.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(" x ");
                RingSpec::build(RingKind::Product { factors: flat, strides }, label)
            }
        }
    }

    /// Parses the ring-spec grammar: `Z/n`, `GF(q)`, `GF(p)[x]/(f)`, `A x B`.
    pub fn parse(text: &str) -> Result<RingSpec, RingError> {
        parse::parse_ring_spec(text)
    }

    pub(crate) fn kind(&self) -> &RingKind {
        &self.0.kind
    }

    pub fn size(&self) -> u32 {
        self.0.size
    }

    pub fn characteristic(&self) -> u64 {
        self.0.characteristic
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    pub fn elements(&self) -> std::ops::Range<Code> {
        0..self.0.size
    }

    /// Factors of a product ring; a non-product ring is its own single factor.
    pub fn factors(&self) -> Vec<RingSpec> {
        match &self.0.kind {
            RingKind::Product { factors, .. } => factors.clone(),
            _ => vec![self.clone()],
        }
    }

    pub fn is_product(&self) -> bool {
        matches!(self.0.kind, RingKind::Product { .. })
    }

    /// True when every nonzero element is a unit.
    pub fn is_field(&self) -> bool {
        match &self.0.kind {
            RingKind::Zmod { n } => is_prime(*n),
            RingKind::Poly { modulus, .. } => modulus.is_irreducible(),
            RingKind::Product { .. } => false,
        }
    }

    pub fn zero(&self) -> Code {
        0
    }

    pub fn one(&self) -> Code {
        match &self.0.kind {
            RingKind::Zmod { n } => (1 % n) as Code,
            RingKind::Poly { .. } => 1,
            RingKind::Product { factors, strides } => factors
                .iter()
                .zip(strides)
                .map(|(f, s)| f.one() * s)
                .sum(),
        }
    }

    /// Image of an integer under the unique ring map from `Z`.
    pub fn from_int(&self, v: i64) -> Code {
        match &self.0.kind {
            RingKind::Zmod { n } => v.rem_euclid(*n as i64) as Code,
            RingKind::Poly { p, .. } => v.rem_euclid(*p as i64) as Code,
            RingKind::Product { factors, strides } => factors
                .iter()
                .zip(strides)
                .map(|(f, s)| f.from_int(v) * s)
                .sum(),
        }
    }

    pub(crate) fn split(&self, a: Code) -> Vec<Code> {
        match &self.0.kind {
            RingKind::Product { factors, strides } => factors
                .iter()
                .zip(strides)
                .map(|(f, s)| (a / s) % f.size())
                .collect(),
            _ => vec![a],
        }
    }

    pub(crate) fn join(&self, parts: &[Code]) -> Code {
        match &self.0.kind {
            RingKind::Product { strides, .. } => {
                parts.iter().zip(strides).map(|(c, s)| c * s).sum()
            }
            _ => parts[0],
        }
    }

    fn add_slow(&self, a: Code, b: Code) -> Code {
        match &self.0.kind {
            RingKind::Zmod { n } => ((a as u64 + b as u64) % n) as Code,
            RingKind::Poly { p, degree, .. } => {
                let (mut a, mut b) = (a as u64, b as u64);
                let mut out = 0u64;
                let mut place = 1u64;
                for _ in 0..*degree {
                    out += ((a % p + b % p) % p) * place;
                    a /= p;
                    b /= p;
                    place *= p;
                }
                out as Code
            }
            RingKind::Product { factors, strides } => {
                let (sa, sb) = (self.split(a), self.split(b));
                factors
                    .iter()
                    .zip(strides)
                    .enumerate()
                    .map(|(i, (f, s))| f.add(sa[i], sb[i]) * s)
                    .sum()
            }
        }
    }

    fn mul_slow(&self, a: Code, b: Code) -> Code {
        match &self.0.kind {
            RingKind::Zmod { n } => ((a as u64 * b as u64) % n) as Code,
            RingKind::Poly { p, modulus, degree } => {
                let pa = FpPoly::from_code(*p, a as u64, *degree);
                let pb = FpPoly::from_code(*p, b as u64, *degree);
                pa.mul(&pb).rem(modulus).to_code() as Code
            }
            RingKind::Product { factors, strides } => {
                let (sa, sb) = (self.split(a), self.split(b));
                factors
                    .iter()
                    .zip(strides)
                    .enumerate()
                    .map(|(i, (f, s))| f.mul(sa[i], sb[i]) * s)
                    .sum()
            }
        }
    }

    fn inv_slow(&self, a: Code) -> Option<Code> {
        match &self.0.kind {
            RingKind::Zmod { n } => {
                if *n == 1 {
                    return Some(0);
                }
                poly::mod_inverse(a as u64, *n).map(|x| x as Code)
            }
            RingKind::Poly { p, modulus, degree } => {
                let pa = FpPoly::from_code(*p, a as u64, *degree);
                let (g, s, _) = pa.ext_gcd(modulus);
                (g == FpPoly::one(*p)).then(|| s.rem(modulus).to_code() as Code)
            }
            RingKind::Product { factors, .. } => {
                let parts = self.split(a);
                let inv: Option<Vec<Code>> =
                    factors.iter().zip(parts).map(|(f, c)| f.inv(c)).collect();
                inv.map(|v| self.join(&v))
            }
        }
    }

    #[inline]
    pub fn add(&self, a: Code, b: Code) -> Code {
        if let RingKind::Zmod { n } = self.0.kind {
            let s = a as u64 + b as u64;
            return (if s >= n { s - n } else { s }) as Code;
        }
        match &self.0.tables {
            Some(t) => t.add[(a * self.0.size + b) as usize],
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn mul(&self, a: Code, b: Code) -> Code {
        if let RingKind::Zmod { n } = self.0.kind {
            return ((a as u64 * b as u64) % n) as Code;
        }
        match &self.0.tables {
            Some(t) => t.mul[(a * self.0.size + b) as usize],
            None => self.mul_slow(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Code) -> Code {
        match &self.0.kind {
            RingKind::Zmod { n } => ((n - a as u64) % n) as Code,
            _ => self.mul(self.from_int(-1), a),
        }
    }

    #[inline]
    pub fn sub(&self, a: Code, b: Code) -> Code {
        self.add(a, self.neg(b))
    }

    pub fn pow(&self, a: Code, e: u64) -> Code {
        let mut acc = self.one();
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The inverse when `a` is a unit.
    pub fn inv(&self, a: Code) -> Option<Code> {
        match &self.0.inverses {
            Some(t) => t[a as usize],
            None => self.inv_slow(a),
        }
    }

    pub fn is_unit(&self, a: Code) -> bool {
        self.inv(a).is_some()
    }

    pub fn units(&self) -> Vec<Code> {
        self.elements().filter(|&a| self.is_unit(a)).collect()
    }

    /// Canonical coordinates: a residue, polynomial coefficients (low degree
    /// first), or the concatenated coordinates of each factor.
    pub fn coordinates(&self, a: Code) -> Vec<u64> {
        match &self.0.kind {
            RingKind::Zmod { .. } => vec![a as u64],
            RingKind::Poly { p, degree, .. } => {
                let mut c = FpPoly::from_code(*p, a as u64, *degree).coeffs;
                c.resize(*degree, 0);
                c
            }
            RingKind::Product { factors, .. } => factors
                .iter()
                .zip(self.split(a))
                .flat_map(|(f, c)| f.coordinates(c))
                .collect(),
        }
    }

    pub fn format_element(&self, a: Code) -> String {
        match &self.0.kind {
            RingKind::Zmod { .. } => a.to_string(),
            RingKind::Poly { .. } => {
                let c = self.coordinates(a);
                let inner: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("[{}]", inner.join(","))
            }
            RingKind::Product { factors, .. } => {
                let inner: Vec<String> = factors
                    .iter()
                    .zip(self.split(a))
                    .map(|(f, c)| f.format_element(c))
                    .collect();
                format!("({})", inner.join(","))
            }
        }
    }

    pub fn parse_element(&self, text: &str) -> Result<Code, RingError> {
        parse::parse_element(self, text)
    }

    pub fn element(&self, code: Code) -> RingElement {
        assert!(code < self.size(), "element code out of range");
        RingElement { ring: self.clone(), code }
    }

    /// Maximal ideal when the ring is local.
    pub fn is_local(&self) -> (bool, Option<IdealHandle>) {
        let gen = match &self.0.kind {
            RingKind::Zmod { n } => {
                let f = factor_integer(*n);
                (f.len() == 1).then(|| self.from_int(f[0].0 as i64))
            }
            RingKind::Poly { p, modulus, degree } => {
                let f = modulus.factor();
                (f.len() == 1).then(|| {
                    let mut g = f[0].0.clone();
                    if g.degree() == Some(*degree) {
                        g = FpPoly::zero(*p);
                    }
                    g.to_code() as Code
                })
            }
            RingKind::Product { .. } => None,
        };
        match gen {
            Some(g) => (true, Some(IdealHandle::from_generators(self, &[g]))),
            None => (false, None),
        }
    }

    /// Independent locality test: the non-units are closed under addition.
    pub fn nonunits_closed_under_addition(&self) -> bool {
        let nonunits: Vec<Code> = self.elements().filter(|&a| !self.is_unit(a)).collect();
        nonunits
            .iter()
            .all(|&a| nonunits.iter().all(|&b| !self.is_unit(self.add(a, b))))
    }

    pub fn artinian_decompose(&self) -> ArtinianDecomposition {
        ArtinianDecomposition::new(self)
    }
}

/// An element tagged with its ring, for the checked arithmetic API.
#[derive(Clone, PartialEq, Eq)]
pub struct RingElement {
    ring: RingSpec,
    code: Code,
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.ring.format_element(self.code), self.ring)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.format_element(self.code))
    }
}

impl RingElement {
    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn code(&self) -> Code {
        self.code
    }

    pub fn coordinates(&self) -> Vec<u64> {
        self.ring.coordinates(self.code)
    }

    fn check(&self, other: &RingElement) -> Result<(), RingError> {
        if self.ring != other.ring {
            return Err(RingError::Mismatch(
                self.ring.to_string(),
                other.ring.to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement, RingError> {
        self.check(other)?;
        Ok(self.ring.element(self.ring.add(self.code, other.code)))
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement, RingError> {
        self.check(other)?;
        Ok(self.ring.element(self.ring.mul(self.code, other.code)))
    }

    pub fn neg(&self) -> RingElement {
        self.ring.element(self.ring.neg(self.code))
    }

    pub fn inv_opt(&self) -> Option<RingElement> {
        self.ring.inv(self.code).map(|c| self.ring.element(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(RingSpec::parse("Z/12").unwrap().size(), 12);
        let f8 = RingSpec::parse("GF(2)[x]/(x^3+x+1)").unwrap();
        assert_eq!(f8.size(), 8);
        assert!(f8.is_field());
        let p = RingSpec::parse("Z/4 x GF(9)").unwrap();
        assert_eq!(p.size(), 36);
        assert_eq!(p.characteristic(), 12);
    }

    #[test]
    fn inverses_in_z12() {
        let r = RingSpec::zmod(12).unwrap();
        let five = r.element(5);
        assert_eq!(five.inv_opt().unwrap().code(), 5);
        assert!(r.element(4).inv_opt().is_none());
    }

    #[test]
    fn x_times_x2_in_gf8() {
        let r = RingSpec::parse("GF(2)[x]/(x^3+x+1)").unwrap();
        let x = r.parse_element("[0,1,0]").unwrap();
        let x2 = r.parse_element("[0,0,1]").unwrap();
        // x^3 = x + 1 by long division of x^3 by x^3+x+1
        let (_, rem) = FpPoly::new(2, vec![0, 0, 0, 1]).div_rem(&FpPoly::new(2, vec![1, 1, 0, 1]));
        assert_eq!(rem, FpPoly::new(2, vec![1, 1]));
        assert_eq!(r.format_element(r.mul(x, x2)), "[1,1,0]");
    }

    #[test]
    fn mismatched_rings_error() {
        let a = RingSpec::zmod(4).unwrap().element(1);
        let b = RingSpec::zmod(6).unwrap().element(1);
        assert!(matches!(a.add(&b), Err(RingError::Mismatch(..))));
    }

    #[test]
    fn locality() {
        let (l, m) = RingSpec::zmod(8).unwrap().is_local();
        assert!(l);
        assert_eq!(m.unwrap().elements(), &[0, 2, 4, 6]);
        assert!(!RingSpec::zmod(12).unwrap().is_local().0);
        let r12 = RingSpec::zmod(12).unwrap();
        assert!(r12.is_unit(r12.add(3, 4)));
        let (l, m) = RingSpec::parse("GF(2)[x]/(x^3+x+1)").unwrap().is_local();
        assert!(l);
        assert_eq!(m.unwrap().elements(), &[0]);
    }

    #[test]
    fn locality_agrees_with_nonunit_closure() {
        for s in ["Z/8", "Z/12", "Z/9", "GF(4)", "GF(2)[x]/(x^2)", "GF(2)[x]/(x^3+x^2)", "Z/2 x Z/3", "GF(3)[x]/(x^2+1)"] {
            let r = RingSpec::parse(s).unwrap();
            assert_eq!(r.is_local().0, r.nonunits_closed_under_addition(), "{s}");
        }
    }

    #[test]
    fn gf_rejects() {
        assert!(matches!(RingSpec::gf(6), Err(RingError::NotPrimePower(6))));
        assert!(matches!(
            RingSpec::finite_field(2, FpPoly::new(2, vec![1, 0, 1])),
            Err(RingError::Reducible(..))
        ));
        assert!(matches!(RingSpec::zmod(1), Err(RingError::ModulusTooSmall(1))));
    }

    #[test]
    fn unit_iff_generates_unit_ideal() {
        for s in ["Z/12", "GF(2)[x]/(x^3+x^2)", "Z/4 x GF(3)"] {
            let r = RingSpec::parse(s).unwrap();
            for a in r.elements() {
                let i = IdealHandle::from_generators(&r, &[a]);
                assert_eq!(r.is_unit(a), i.len() == r.size() as usize, "{s} {a}");
            }
        }
    }
}
