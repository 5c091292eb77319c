//! Complete sets of `q + 1` mutually unbiased bases.
//!
//! Odd `q` uses the Ivanovic vectors
//! `psi_B^V = q^{-1/2} sum_k omega^{tr(B k^2 / 2 - V k)} |k>`; even `q` uses the
//! Galois-ring vectors `2^{-n/2} sum_{k in T} i^{tr(B k^2) + 2 tr(V k)} |k>`.
//! Teichmüller kets and labels are placed through their mod-2 reduction, so
//! every basis is indexed by the canonical index of `V` in `GF(q)`.

mod weyl;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gfield::{root_of_unity, FieldElement, GaloisField, GaloisRing};
use crate::qlinalg::{ComplexMatrix, ComplexVector};

pub use weyl::{clock, conjugate_projector, shift, stabilizer_projector, WeylOp};

/// `∞` for the computational basis, otherwise the field element `B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    Infinity,
    Finite(FieldElement),
}

impl BasisLabel {
    /// Canonical position in `[∞, 0, α, α², …, α^(q-1) = 1]`.
    pub fn position(self, field: &GaloisField) -> usize {
        match self {
            BasisLabel::Infinity => 0,
            BasisLabel::Finite(b) if b.is_zero() => 1,
            BasisLabel::Finite(b) => {
                let k = field.log_alpha(b).expect("nonzero element has a logarithm") as usize;
                // α^0 = 1 sits last
                if k == 0 {
                    field.q()
                } else {
                    k + 1
                }
            }
        }
    }

    /// Inverse of [`BasisLabel::position`].
    pub fn at_position(field: &GaloisField, pos: usize) -> Result<Self> {
        let q = field.q();
        match pos {
            0 => Ok(BasisLabel::Infinity),
            1 => Ok(BasisLabel::Finite(field.zero())),
            p if p <= q => Ok(BasisLabel::Finite(field.alpha_power((p - 1) as u64))),
            _ => Err(Error::InvalidParameters(format!("basis position {pos} exceeds {q}"))),
        }
    }

    /// All `q + 1` labels in canonical order.
    pub fn all(field: &GaloisField) -> Vec<BasisLabel> {
        (0..=field.q()).map(|p| Self::at_position(field, p).expect("position in range")).collect()
    }

    pub fn element(self) -> Option<FieldElement> {
        match self {
            BasisLabel::Infinity => None,
            BasisLabel::Finite(b) => Some(b),
        }
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Infinity => write!(f, "inf"),
            BasisLabel::Finite(b) => write!(f, "{b}"),
        }
    }
}

impl Serialize for BasisLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            BasisLabel::Infinity => s.serialize_str("inf"),
            BasisLabel::Finite(b) => s.serialize_u64(b.index() as u64),
        }
    }
}

/// The full MUB set, bases stored in canonical position order.
#[derive(Clone, Debug)]
pub struct MubSet {
    field: Arc<GaloisField>,
    ring: Option<GaloisRing>,
    // bases[position][V index]
    bases: Vec<Vec<ComplexVector>>,
}

impl MubSet {
    pub fn new(field: Arc<GaloisField>) -> Result<Self> {
        let q = field.q();
        let norm = 1.0 / (q as f64).sqrt();
        let mut bases = vec![(0..q).map(|v| ComplexVector::basis(q, v)).collect::<Vec<_>>()];
        let ring = if field.is_odd() {
            let half = field.half()?;
            let p = field.p();
            for pos in 1..=q {
                let b = BasisLabel::at_position(&field, pos)?.element().expect("finite basis");
                let hb = field.mul(half, b);
                bases.push(
                    field
                        .elements()
                        .map(|v| {
                            let data = field
                                .elements()
                                .map(|k| {
                                    let e = field.sub(field.mul(hb, field.mul(k, k)), field.mul(v, k));
                                    root_of_unity(p, field.trace(e)) * norm
                                })
                                .collect();
                            ComplexVector::new(data)
                        })
                        .collect(),
                );
            }
            None
        } else {
            let ring = GaloisRing::from_field(&field)?;
            for pos in 1..=q {
                let b = ring.lift(BasisLabel::at_position(&field, pos)?.element().expect("finite basis"));
                bases.push(
                    field
                        .elements()
                        .map(|v| {
                            let v = ring.lift(v);
                            let mut data = vec![Complex64::new(0.0, 0.0); q];
                            for &k in ring.teichmuller() {
                                let e = u32::from(ring.trace(ring.mul(b, ring.mul(k, k))))
                                    + 2 * u32::from(ring.trace(ring.mul(v, k)));
                                data[ring.reduce(k).index()] = root_of_unity(4, e) * norm;
                            }
                            ComplexVector::new(data)
                        })
                        .collect(),
                );
            }
            Some(ring)
        };
        Ok(Self { field, ring, bases })
    }

    pub fn with_order(q: u64) -> Result<Self> {
        Self::new(Arc::new(GaloisField::with_order(q)?))
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    /// The Galois ring behind the even-`q` construction.
    pub fn ring(&self) -> Option<&GaloisRing> {
        self.ring.as_ref()
    }

    pub fn q(&self) -> usize {
        self.field.q()
    }

    pub fn labels(&self) -> Vec<BasisLabel> {
        BasisLabel::all(&self.field)
    }

    pub fn basis(&self, label: BasisLabel) -> &[ComplexVector] {
        &self.bases[label.position(&self.field)]
    }

    /// Basis at canonical position `pos`.
    pub fn basis_at(&self, pos: usize) -> &[ComplexVector] {
        &self.bases[pos]
    }

    pub fn vector(&self, label: BasisLabel, v: FieldElement) -> &ComplexVector {
        &self.basis(label)[v.index()]
    }

    pub fn projector(&self, label: BasisLabel, v: FieldElement) -> ComplexMatrix {
        self.vector(label, v).projector()
    }

    /// Value `V` whose projector in `label` matches `p`, if `|<psi|p|psi>| > 1 - 1e-6`.
    pub fn identify(&self, label: BasisLabel, p: &ComplexMatrix) -> Option<FieldElement> {
        self.basis(label).iter().position(|v| v.inner(&p.apply(v)).re > 1.0 - 1e-6).map(|i| self.field.wrap(i))
    }

    /// Copy with one vector swapped out; used to exercise the verifier.
    pub fn with_vector_replaced(&self, label: BasisLabel, v: FieldElement, vector: ComplexVector) -> Result<Self> {
        if vector.dim() != self.q() {
            return Err(Error::DimensionMismatch { expected: self.q().to_string(), found: vector.dim().to_string() });
        }
        let mut out = self.clone();
        out.bases[label.position(&self.field)][v.index()] = vector;
        Ok(out)
    }

    /// Largest `| |<psi|phi>| - target |` over all vector pairs, with target
    /// `1` on the diagonal, `0` within a basis and `1/sqrt(q)` across bases.
    pub fn max_deviation(&self) -> f64 {
        let q = self.q();
        let cross = 1.0 / (q as f64).sqrt();
        let flat: Vec<(usize, usize, &ComplexVector)> = self
            .bases
            .iter()
            .enumerate()
            .flat_map(|(b, vs)| vs.iter().enumerate().map(move |(v, x)| (b, v, x)))
            .collect();
        flat.par_iter()
            .enumerate()
            .map(|(i, &(b1, v1, x1))| {
                flat[i..]
                    .iter()
                    .map(|&(b2, v2, x2)| {
                        let target = match (b1 == b2, v1 == v2) {
                            (true, true) => 1.0,
                            (true, false) => 0.0,
                            _ => cross,
                        };
                        (x1.inner(x2).norm() - target).abs()
                    })
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max)
    }

    /// Table of all vectors for serialization.
    pub fn table(&self) -> MubTable {
        MubTable {
            q: self.q(),
            bases: self
                .labels()
                .into_iter()
                .zip(&self.bases)
                .map(|(label, vs)| MubBasis {
                    label,
                    vectors: vs.iter().map(|v| v.data().iter().map(|c| [c.re, c.im]).collect()).collect(),
                })
                .collect(),
        }
    }
}

/// Maximum overlap deviation of a MUB set.
pub fn verify_mub(m: &MubSet) -> f64 {
    m.max_deviation()
}

#[derive(Debug, Serialize)]
pub struct MubTable {
    pub q: usize,
    pub bases: Vec<MubBasis>,
}

#[derive(Debug, Serialize)]
pub struct MubBasis {
    pub label: BasisLabel,
    pub vectors: Vec<Vec<[f64; 2]>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-9;

    #[test]
    fn label_positions_round_trip() {
        for q in [2u64, 3, 4, 5, 8, 9] {
            let f = GaloisField::with_order(q).unwrap();
            let labels = BasisLabel::all(&f);
            assert_eq!(labels.len(), q as usize + 1);
            for (i, l) in labels.iter().enumerate() {
                assert_eq!(l.position(&f), i);
            }
            assert_eq!(labels[q as usize], BasisLabel::Finite(f.one()));
        }
    }

    #[test]
    fn uniform_vector_at_origin() {
        let m = MubSet::with_order(3).unwrap();
        let f = m.field().clone();
        let v = m.vector(BasisLabel::Finite(f.zero()), f.zero());
        let s = 1.0 / 3f64.sqrt();
        assert!(v.max_abs_diff(&ComplexVector::new(vec![Complex64::new(s, 0.0); 3])) < TOL);
    }

    #[test]
    fn sets_are_mutually_unbiased() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16] {
            let d = MubSet::with_order(q).unwrap().max_deviation();
            assert!(d < TOL, "q={q}: {d}");
        }
        assert!(MubSet::with_order(2).unwrap().max_deviation() < 1e-12);
    }

    #[test]
    fn qubit_bases_are_pauli_eigenbases() {
        let m = MubSet::with_order(2).unwrap();
        let f = m.field().clone();
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        let x = ComplexMatrix::from_rows(vec![vec![0.0.into(), one], vec![one, 0.0.into()]]).unwrap();
        let y = ComplexMatrix::from_rows(vec![vec![0.0.into(), -i], vec![i, 0.0.into()]]).unwrap();
        let z = ComplexMatrix::from_rows(vec![vec![one, 0.0.into()], vec![0.0.into(), -one]]).unwrap();
        for (label, pauli) in
            [(BasisLabel::Infinity, &z), (BasisLabel::Finite(f.zero()), &x), (BasisLabel::Finite(f.one()), &y)]
        {
            for v in m.basis(label) {
                let pv = pauli.apply(v);
                let eig = v.inner(&pv);
                assert!((eig.norm() - 1.0).abs() < TOL);
                let scaled = ComplexVector::new(v.data().iter().map(|c| c * eig).collect());
                assert!(pv.max_abs_diff(&scaled) < TOL);
            }
        }
    }

    #[test]
    fn replaced_vector_is_detected() {
        let m = MubSet::with_order(3).unwrap();
        let f = m.field().clone();
        let bad = m.with_vector_replaced(BasisLabel::Finite(f.one()), f.zero(), ComplexVector::basis(3, 0)).unwrap();
        assert!(bad.max_deviation() >= 1.0 / 3f64.sqrt() - 1.0 / 3.0);
    }

    #[test]
    fn each_basis_resolves_the_identity() {
        for q in [2u64, 3, 4, 5, 8, 9] {
            let m = MubSet::with_order(q).unwrap();
            let q = q as usize;
            let mut total = ComplexMatrix::zeros(q, q);
            for label in m.labels() {
                let mut s = ComplexMatrix::zeros(q, q);
                for v in m.basis(label) {
                    s.add_projector(v, 1.0);
                    total.add_projector(v, 1.0);
                }
                assert!(s.max_abs_diff(&ComplexMatrix::identity(q)) < TOL);
            }
            assert!(total.max_abs_diff(&ComplexMatrix::identity(q).scale_real((q + 1) as f64)) < TOL);
        }
    }

    #[test]
    fn projectors_form_a_two_design() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let m = MubSet::with_order(q).unwrap();
            let d = q as usize;
            let mut moment = ComplexMatrix::zeros(d * d, d * d);
            for label in m.labels() {
                for v in m.basis(label) {
                    moment.add_projector(&v.kron(v), 1.0);
                }
            }
            let swap = ComplexMatrix::from_fn(d * d, d * d, |r, c| {
                let (i, j) = (r / d, r % d);
                let (k, l) = (c / d, c % d);
                Complex64::new(if i == l && j == k { 1.0 } else { 0.0 }, 0.0)
            });
            let expected = &ComplexMatrix::identity(d * d) + &swap;
            assert!(moment.max_abs_diff(&expected) < TOL, "q={q}");
        }
    }

    #[test]
    fn identify_finds_each_vector() {
        let m = MubSet::with_order(4).unwrap();
        for label in m.labels() {
            for v in m.field().elements() {
                assert_eq!(m.identify(label, &m.projector(label, v)), Some(v));
            }
        }
    }
}
