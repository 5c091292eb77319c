//! Exact arithmetic in `GF(p^n)` and the Galois ring `GR(4, n)`.
//!
//! Elements are stored by their canonical index `sum coeffs[i] * p^i` in the
//! polynomial basis. The field precomputes full addition and multiplication
//! tables, which is cheap for `q <= 64`.

mod conway;
mod ring;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use conway::conway_polynomial;
pub use ring::{GaloisRing, RingElement};

pub(crate) use conway::is_prime;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 64;

/// Exponent `t` mapped to `exp(2 pi i t / m)`.
pub fn root_of_unity(m: u32, t: u32) -> Complex64 {
    let t = t % m;
    // exact values on the axes
    if t == 0 {
        Complex64::new(1.0, 0.0)
    } else if 2 * t == m {
        Complex64::new(-1.0, 0.0)
    } else if 4 * t == m {
        Complex64::new(0.0, 1.0)
    } else if 4 * t == 3 * m {
        Complex64::new(0.0, -1.0)
    } else {
        Complex64::from_polar(1.0, std::f64::consts::TAU * f64::from(t) / f64::from(m))
    }
}

/// Field description: characteristic, degree and monic modulus over `Z_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FieldSpecRecord")]
pub struct FieldSpec {
    p: u32,
    n: u32,
    modulus: Vec<u32>,
}

#[derive(Deserialize)]
struct FieldSpecRecord {
    p: u32,
    n: u32,
    modulus: Vec<u32>,
}

impl TryFrom<FieldSpecRecord> for FieldSpec {
    type Error = Error;

    fn try_from(r: FieldSpecRecord) -> Result<Self> {
        let spec = FieldSpec::new(r.p, r.n, r.modulus)?;
        // reject reducible or non-primitive moduli early
        GaloisField::from_spec(spec.clone())?;
        Ok(spec)
    }
}

impl FieldSpec {
    /// Structural validation only; primitivity is checked by [`GaloisField::from_spec`].
    pub fn new(p: u32, n: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(u64::from(p)) {
            return Err(Error::NotPrime(u64::from(p)));
        }
        if n == 0 {
            return Err(Error::InvalidParameters("extension degree must be at least 1".into()));
        }
        let q = u64::from(p).checked_pow(n).unwrap_or(u64::MAX);
        if q > MAX_ORDER {
            return Err(Error::UnsupportedOrder { q, max: MAX_ORDER });
        }
        if modulus.len() != n as usize + 1 {
            return Err(Error::InvalidModulus(format!(
                "expected {} coefficients for degree {n}, got {}",
                n + 1,
                modulus.len()
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidModulus(format!("coefficients must lie in [0, {p})")));
        }
        if modulus[n as usize] != 1 {
            return Err(Error::InvalidModulus("modulus must be monic".into()));
        }
        Ok(Self { p, n, modulus })
    }

    /// Spec with the tabulated Conway modulus.
    pub fn conway(p: u32, n: u32) -> Result<Self> {
        if !is_prime(u64::from(p)) {
            return Err(Error::NotPrime(u64::from(p)));
        }
        let q = u64::from(p).checked_pow(n).unwrap_or(u64::MAX);
        if n == 0 || q > MAX_ORDER {
            return Err(Error::UnsupportedOrder { q, max: MAX_ORDER });
        }
        let modulus = conway_polynomial(p, n).ok_or(Error::UnsupportedOrder { q, max: MAX_ORDER })?;
        Self::new(p, n, modulus)
    }

    /// Splits a prime power `q` into `(p, n)`.
    pub fn factor_order(q: u64) -> Result<(u32, u32)> {
        if !(2..=MAX_ORDER).contains(&q) {
            return Err(Error::UnsupportedOrder { q, max: MAX_ORDER });
        }
        let p = (2..=q).find(|d| q.is_multiple_of(*d)).expect("q >= 2 has a prime factor");
        let mut rest = q;
        let mut n = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            n += 1;
        }
        if rest != 1 {
            return Err(Error::InvalidParameters(format!("{q} is not a prime power")));
        }
        Ok((p as u32, n))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.n)
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    fn fingerprint(&self) -> FieldId {
        // FNV-1a over (p, n, modulus)
        let mut h: u32 = 0x811c_9dc5;
        for v in [self.p, self.n].into_iter().chain(self.modulus.iter().copied()) {
            for b in v.to_le_bytes() {
                h ^= u32::from(b);
                h = h.wrapping_mul(0x0100_0193);
            }
        }
        FieldId(h)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct FieldId(u32);

/// An element of a particular [`GaloisField`].
///
/// Equality includes the owning field, so elements of two different fields
/// never compare equal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    index: u8,
    field: FieldId,
}

impl FieldElement {
    /// Canonical integer index in `[0, q)`.
    pub fn index(self) -> usize {
        usize::from(self.index)
    }

    pub fn is_zero(self) -> bool {
        self.index == 0
    }

    pub fn same_field(self, other: FieldElement) -> bool {
        self.field == other.field
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index)
    }
}

/// `GF(p^n)` with precomputed operation tables.
#[derive(Clone, Debug)]
pub struct GaloisField {
    spec: FieldSpec,
    id: FieldId,
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    trace: Vec<u8>,
    alpha_pow: Vec<u8>,
    log: Vec<u32>,
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl GaloisField {
    /// `GF(p^n)` with the Conway modulus.
    pub fn new(p: u32, n: u32) -> Result<Self> {
        Self::from_spec(FieldSpec::conway(p, n)?)
    }

    /// Field of prime-power order `q` with the Conway modulus.
    pub fn with_order(q: u64) -> Result<Self> {
        let (p, n) = FieldSpec::factor_order(q)?;
        Self::new(p, n)
    }

    pub fn from_spec(spec: FieldSpec) -> Result<Self> {
        let p = spec.p as usize;
        let n = spec.n as usize;
        let q = spec.q() as usize;
        let to_coeffs = |mut i: usize| -> Vec<usize> {
            (0..n)
                .map(|_| {
                    let c = i % p;
                    i /= p;
                    c
                })
                .collect()
        };
        let to_index = |c: &[usize]| -> usize { c.iter().rev().fold(0, |acc, &v| acc * p + v) };
        let modulus: Vec<usize> = spec.modulus.iter().map(|&c| c as usize).collect();

        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            let ca = to_coeffs(a);
            for b in 0..q {
                let cb = to_coeffs(b);
                let sum: Vec<usize> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = to_index(&sum) as u8;

                let mut prod = vec![0usize; 2 * n];
                for (i, x) in ca.iter().enumerate() {
                    for (j, y) in cb.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for d in (n..prod.len()).rev() {
                    let lead = prod[d];
                    if lead != 0 {
                        for (i, m) in modulus.iter().enumerate().take(n) {
                            let idx = d - n + i;
                            prod[idx] = (prod[idx] + (p - lead) * m) % p;
                        }
                        prod[d] = 0;
                    }
                }
                mul[a * q + b] = to_index(&prod[..n]) as u8;
            }
        }

        for a in 1..q {
            if (1..q).any(|b| mul[a * q + b] == 0) {
                return Err(Error::InvalidModulus(format!("{:?} is reducible over Z_{p}", spec.modulus)));
            }
        }

        // residue class of the indeterminate
        let alpha = if n == 1 { (p - modulus[0]) % p } else { p };
        let mut alpha_pow = Vec::with_capacity(q - 1);
        let mut x = 1usize;
        loop {
            alpha_pow.push(x as u8);
            x = mul[x * q + alpha] as usize;
            if x == 1 {
                break;
            }
            if alpha_pow.len() >= q {
                break;
            }
        }
        if alpha_pow.len() != q - 1 {
            return Err(Error::InvalidModulus(format!(
                "{:?} is not primitive: the indeterminate has order {}",
                spec.modulus,
                alpha_pow.len()
            )));
        }
        let mut log = vec![0u32; q];
        for (k, &v) in alpha_pow.iter().enumerate() {
            log[v as usize] = k as u32;
        }

        let neg: Vec<u8> = (0..q).map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8).collect();
        let inv: Vec<u8> =
            (0..q).map(|a| if a == 0 { 0 } else { alpha_pow[(q - 1 - log[a] as usize) % (q - 1)] }).collect();

        let pow = |a: usize, e: usize| -> usize {
            if a == 0 {
                return usize::from(e == 0);
            }
            alpha_pow[(log[a] as usize * e) % (q - 1)] as usize
        };
        let mut trace = vec![0u8; q];
        for (b, t) in trace.iter_mut().enumerate() {
            let mut s = 0usize;
            let mut e = 1usize;
            for _ in 0..n {
                s = add[s * q + pow(b, e)] as usize;
                e *= p;
            }
            assert!(s < p, "trace must land in the prime subfield");
            *t = s as u8;
        }

        let id = spec.fingerprint();
        Ok(Self { spec, id, q, add, mul, neg, inv, trace, alpha_pow, log })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn p(&self) -> u32 {
        self.spec.p
    }

    pub fn n(&self) -> u32 {
        self.spec.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn is_odd(&self) -> bool {
        self.spec.p != 2
    }

    #[inline]
    pub(crate) fn add_idx(&self, a: usize, b: usize) -> usize {
        usize::from(self.add[a * self.q + b])
    }

    #[inline]
    pub(crate) fn mul_idx(&self, a: usize, b: usize) -> usize {
        usize::from(self.mul[a * self.q + b])
    }

    #[inline]
    pub(crate) fn wrap(&self, index: usize) -> FieldElement {
        FieldElement { index: index as u8, field: self.id }
    }

    #[inline]
    fn idx(&self, a: FieldElement) -> usize {
        assert_eq!(a.field, self.id, "element belongs to a different field");
        usize::from(a.index)
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.field == self.id
    }

    pub fn check(&self, a: FieldElement) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Element from its canonical index.
    pub fn element(&self, index: usize) -> Result<FieldElement> {
        if index >= self.q {
            return Err(Error::ElementOutOfRange { index: index as u64, q: self.q as u64 });
        }
        Ok(self.wrap(index))
    }

    /// Element from polynomial-basis coefficients (constant term first).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.spec.n as usize {
            return Err(Error::LengthMismatch { left: coeffs.len(), right: self.spec.n as usize });
        }
        if coeffs.iter().any(|&c| c >= self.spec.p) {
            return Err(Error::InvalidParameters("coefficient outside [0, p)".into()));
        }
        let index = coeffs.iter().rev().fold(0usize, |acc, &c| acc * self.spec.p as usize + c as usize);
        Ok(self.wrap(index))
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        let p = self.spec.p as usize;
        let mut i = self.idx(a);
        (0..self.spec.n)
            .map(|_| {
                let c = i % p;
                i /= p;
                c as u32
            })
            .collect()
    }

    /// All elements in canonical index order.
    pub fn elements(&self) -> impl ExactSizeIterator<Item = FieldElement> + '_ {
        (0..self.q).map(|i| self.wrap(i))
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(1)
    }

    /// The primitive element: residue class of the indeterminate.
    pub fn alpha(&self) -> FieldElement {
        self.wrap(self.alpha_pow[1 % (self.q - 1)] as usize)
    }

    /// `alpha^k`, with `k` taken modulo `q - 1`.
    pub fn alpha_power(&self, k: u64) -> FieldElement {
        self.wrap(self.alpha_pow[(k % (self.q as u64 - 1)) as usize] as usize)
    }

    /// Discrete logarithm to base alpha, in `[0, q - 1)`.
    pub fn log_alpha(&self, a: FieldElement) -> Option<u32> {
        let i = self.idx(a);
        (i != 0).then(|| self.log[i])
    }

    /// Image of the integer `c` in the prime subfield.
    pub fn from_int(&self, c: i64) -> FieldElement {
        let p = i64::from(self.spec.p);
        self.wrap(c.rem_euclid(p) as usize)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.wrap(self.add[self.idx(a) * self.q + self.idx(b)] as usize)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.wrap(self.neg[self.idx(a)] as usize)
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.wrap(self.mul[self.idx(a) * self.q + self.idx(b)] as usize)
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.wrap(self.inv[self.idx(a)] as usize))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Square-and-multiply exponentiation; `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn try_add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add(a, b))
    }

    pub fn try_mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    /// Absolute trace `sum_k b^(p^k)` as an integer in `[0, p)`.
    #[inline]
    pub fn trace(&self, b: FieldElement) -> u32 {
        u32::from(self.trace[self.idx(b)])
    }

    /// `omega^tr(b)` with `omega = exp(2 pi i / p)`.
    pub fn trace_phase(&self, b: FieldElement) -> Complex64 {
        root_of_unity(self.spec.p, self.trace(b))
    }

    /// `sum_beta omega^tr(beta g)`; equals `q` at `g = 0` and vanishes otherwise.
    pub fn character_sum(&self, g: FieldElement) -> Complex64 {
        self.elements().map(|b| self.trace_phase(self.mul(b, g))).sum()
    }

    /// `2^{-1}` in the prime subfield.
    pub fn half(&self) -> Result<FieldElement> {
        if !self.is_odd() {
            return Err(Error::RequiresOddCharacteristic("halving"));
        }
        self.inv(self.from_int(2))
    }
}
