//! The Galois ring `GR(4, n) = Z_4[x] / (h)` and its Teichmüller set.
//!
//! `h` is the Hensel lift of the `GF(2^n)` modulus obtained from one
//! Graeffe root-squaring step, so the residue class `xi` of `x` has order
//! `2^n - 1` and reduces to the primitive element of the field.

use super::{FieldElement, GaloisField};
use crate::error::{Error, Result};

/// Element of `GR(4, n)`, stored as `sum c_i 4^i` over `Z_4` coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElement(u16);

impl RingElement {
    pub fn index(self) -> usize {
        usize::from(self.0)
    }
}

#[derive(Clone, Debug)]
pub struct GaloisRing {
    field: GaloisField,
    n: usize,
    modulus: Vec<u8>,
    teichmuller: Vec<RingElement>,
    // field index -> Teichmüller representative
    lift: Vec<RingElement>,
    trace: Vec<u8>,
}

/// One Graeffe step: `h(x^2) = (-1)^n (e(x)^2 - o(x)^2)` mod 4.
fn graeffe_lift(f: &[u32]) -> Vec<u8> {
    let n = f.len() - 1;
    let even: Vec<i64> = f.iter().enumerate().map(|(i, &c)| if i % 2 == 0 { i64::from(c) } else { 0 }).collect();
    let odd: Vec<i64> = f.iter().enumerate().map(|(i, &c)| if i % 2 == 1 { i64::from(c) } else { 0 }).collect();
    let mut sq = vec![0i64; 2 * n + 1];
    for i in 0..=n {
        for j in 0..=n {
            sq[i + j] += even[i] * even[j] - odd[i] * odd[j];
        }
    }
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    (0..=n).map(|i| (sign * sq[2 * i]).rem_euclid(4) as u8).collect()
}

impl GaloisRing {
    /// `GR(4, n)` lifted from the Conway modulus of `GF(2^n)`.
    pub fn new(n: u32) -> Result<Self> {
        Self::from_field(&GaloisField::new(2, n)?)
    }

    /// Ring lifted from the modulus of a characteristic-2 field.
    pub fn from_field(field: &GaloisField) -> Result<Self> {
        if field.p() != 2 {
            return Err(Error::RequiresEvenCharacteristic("Galois ring GR(4, n)"));
        }
        let n = field.n() as usize;
        let modulus = graeffe_lift(field.spec().modulus());
        let mut ring =
            Self { field: field.clone(), n, modulus, teichmuller: Vec::new(), lift: Vec::new(), trace: Vec::new() };

        let q = field.q();
        let xi = ring.xi();
        let mut teich = vec![ring.zero()];
        let mut x = ring.one();
        for _ in 0..q - 1 {
            teich.push(x);
            x = ring.mul(x, xi);
        }
        if x != ring.one() || teich[1..].iter().skip(1).any(|&t| t == ring.one()) {
            return Err(Error::InvalidModulus(format!(
                "lifted modulus {:?} does not give xi of order {}",
                ring.modulus,
                q - 1
            )));
        }
        let mut lift = vec![None; q];
        for &t in &teich {
            let r = ring.reduce(t).index();
            if lift[r].replace(t).is_some() {
                return Err(Error::InvalidModulus("Teichmüller reduction is not injective".into()));
            }
        }
        ring.lift = lift.into_iter().map(|t| t.expect("reduction is a bijection")).collect();
        ring.teichmuller = teich;

        ring.trace = (0..ring.order())
            .map(|i| {
                let (a, b) = ring.decompose(RingElement(i as u16));
                let mut s = ring.zero();
                let (mut ak, mut bk) = (a, b);
                for _ in 0..n {
                    s = ring.add(s, ring.add(ak, ring.add(bk, bk)));
                    ak = ring.mul(ak, ak);
                    bk = ring.mul(bk, bk);
                }
                let c = ring.coeffs(s);
                assert!(c[1..].iter().all(|&v| v == 0), "ring trace must land in Z_4");
                c[0]
            })
            .collect();
        Ok(ring)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of ring elements, `4^n`.
    pub fn order(&self) -> usize {
        1 << (2 * self.n)
    }

    /// Lifted modulus over `Z_4`, constant term first.
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn element(&self, index: usize) -> Result<RingElement> {
        if index >= self.order() {
            return Err(Error::ElementOutOfRange { index: index as u64, q: self.order() as u64 });
        }
        Ok(RingElement(index as u16))
    }

    pub fn from_coeffs(&self, coeffs: &[u8]) -> Result<RingElement> {
        if coeffs.len() != self.n {
            return Err(Error::LengthMismatch { left: coeffs.len(), right: self.n });
        }
        Ok(self.pack(coeffs))
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElement> {
        (0..self.order()).map(|i| RingElement(i as u16))
    }

    fn pack(&self, c: &[u8]) -> RingElement {
        RingElement(c.iter().rev().fold(0u16, |acc, &v| acc * 4 + u16::from(v % 4)))
    }

    pub fn coeffs(&self, a: RingElement) -> Vec<u8> {
        let mut i = a.0;
        (0..self.n)
            .map(|_| {
                let c = (i % 4) as u8;
                i /= 4;
                c
            })
            .collect()
    }

    pub fn zero(&self) -> RingElement {
        RingElement(0)
    }

    pub fn one(&self) -> RingElement {
        RingElement(1)
    }

    /// Residue class of the indeterminate.
    pub fn xi(&self) -> RingElement {
        if self.n == 1 {
            // x = -h_0 in Z_4[x]/(x + h_0)
            RingElement(u16::from((4 - self.modulus[0]) % 4))
        } else {
            RingElement(4)
        }
    }

    /// Embeds an integer into the prime subring `Z_4`.
    pub fn from_int(&self, c: i64) -> RingElement {
        RingElement(c.rem_euclid(4) as u16)
    }

    pub fn add(&self, a: RingElement, b: RingElement) -> RingElement {
        let ca = self.coeffs(a);
        let cb = self.coeffs(b);
        let s: Vec<u8> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % 4).collect();
        self.pack(&s)
    }

    pub fn neg(&self, a: RingElement) -> RingElement {
        let c: Vec<u8> = self.coeffs(a).iter().map(|&x| (4 - x) % 4).collect();
        self.pack(&c)
    }

    pub fn sub(&self, a: RingElement, b: RingElement) -> RingElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: RingElement, b: RingElement) -> RingElement {
        let n = self.n;
        let ca = self.coeffs(a);
        let cb = self.coeffs(b);
        let mut prod = vec![0u32; 2 * n];
        for (i, x) in ca.iter().enumerate() {
            for (j, y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u32::from(*x) * u32::from(*y)) % 4;
            }
        }
        for d in (n..prod.len()).rev() {
            let lead = prod[d];
            if lead != 0 {
                for i in 0..n {
                    let idx = d - n + i;
                    prod[idx] = (prod[idx] + (4 - lead) * u32::from(self.modulus[i])) % 4;
                }
                prod[d] = 0;
            }
        }
        let c: Vec<u8> = prod[..n].iter().map(|&v| v as u8).collect();
        self.pack(&c)
    }

    pub fn pow(&self, a: RingElement, mut e: u64) -> RingElement {
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

    /// Reduction modulo 2 onto `GF(2^n)`.
    pub fn reduce(&self, a: RingElement) -> FieldElement {
        let c: Vec<u32> = self.coeffs(a).iter().map(|&v| u32::from(v % 2)).collect();
        self.field.from_coeffs(&c).expect("reduced coefficients are valid")
    }

    /// The Teichmüller set in the order `[0, 1, xi, xi^2, ...]`.
    pub fn teichmuller(&self) -> &[RingElement] {
        &self.teichmuller
    }

    /// Teichmüller representative reducing to `a`.
    pub fn lift(&self, a: FieldElement) -> RingElement {
        self.lift[a.index()]
    }

    /// Unique `(a, b)` in the Teichmüller set with `g = a + 2b`.
    pub fn decompose(&self, g: RingElement) -> (RingElement, RingElement) {
        let a = self.lift(self.reduce(g));
        let d = self.coeffs(self.sub(g, a));
        debug_assert!(d.iter().all(|v| v % 2 == 0));
        let half: Vec<u32> = d.iter().map(|&v| u32::from(v / 2)).collect();
        let b = self.lift(self.field.from_coeffs(&half).expect("valid coefficients"));
        (a, b)
    }

    /// Ring trace onto `Z_4`.
    pub fn trace(&self, g: RingElement) -> u8 {
        self.trace[g.index()]
    }
}
