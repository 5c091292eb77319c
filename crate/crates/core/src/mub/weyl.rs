//! Weyl-Heisenberg operators `X(x) Z(z)` and the stabilizer projectors
//! they generate.

use num_complex::Complex64;

use super::BasisLabel;
use crate::error::{Error, Result};
use crate::gfield::{FieldElement, GaloisField};
use crate::qlinalg::ComplexMatrix;

/// A displacement operator together with its phase-space point.
#[derive(Clone, Debug)]
pub struct WeylOp {
    x: FieldElement,
    z: FieldElement,
    phased: bool,
    matrix: ComplexMatrix,
}

/// `X(x)|k> = |k + x>`.
pub fn shift(field: &GaloisField, x: FieldElement) -> ComplexMatrix {
    let q = field.q();
    let mut m = ComplexMatrix::zeros(q, q);
    for k in field.elements() {
        m[(field.add(k, x).index(), k.index())] = Complex64::new(1.0, 0.0);
    }
    m
}

/// `Z(z)|k> = omega^{tr(k z)} |k>`.
pub fn clock(field: &GaloisField, z: FieldElement) -> ComplexMatrix {
    let q = field.q();
    let mut m = ComplexMatrix::zeros(q, q);
    for k in field.elements() {
        m[(k.index(), k.index())] = field.trace_phase(field.mul(k, z));
    }
    m
}

impl WeylOp {
    /// Phased `D_{x,z}` for odd `q`, the bare product `X(x) Z(z)` for even `q`.
    pub fn new(field: &GaloisField, x: FieldElement, z: FieldElement) -> Self {
        if field.is_odd() {
            Self::displacement(field, x, z).expect("odd characteristic")
        } else {
            Self::unphased(field, x, z)
        }
    }

    /// `D_{x,z} = omega^{tr(x z / 2)} X(x) Z(z)`; odd characteristic only.
    pub fn displacement(field: &GaloisField, x: FieldElement, z: FieldElement) -> Result<Self> {
        let half = field.half().map_err(|_| Error::RequiresOddCharacteristic("phased displacement operator"))?;
        let phase = field.trace_phase(field.mul(half, field.mul(x, z)));
        let matrix = product(field, x, z).scale(phase);
        Ok(Self { x, z, phased: true, matrix })
    }

    /// `X(x) Z(z)` without a phase.
    pub fn unphased(field: &GaloisField, x: FieldElement, z: FieldElement) -> Self {
        Self { x, z, phased: false, matrix: product(field, x, z) }
    }

    pub fn x(&self) -> FieldElement {
        self.x
    }

    pub fn z(&self) -> FieldElement {
        self.z
    }

    pub fn is_phased(&self) -> bool {
        self.phased
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `D A D^dagger`.
    pub fn conjugate(&self, a: &ComplexMatrix) -> ComplexMatrix {
        a.conjugate_by(&self.matrix)
    }
}

fn product(field: &GaloisField, x: FieldElement, z: FieldElement) -> ComplexMatrix {
    // X(x) Z(z) |k> = omega^{tr(kz)} |k + x>
    let q = field.q();
    let mut m = ComplexMatrix::zeros(q, q);
    for k in field.elements() {
        m[(field.add(k, x).index(), k.index())] = field.trace_phase(field.mul(k, z));
    }
    m
}

/// `(1/q) sum_k omega^{tr(-k V)} D_{k, k B}`, or `D_{0,k}` for `B = ∞`.
pub fn stabilizer_projector(field: &GaloisField, basis: BasisLabel, v: FieldElement) -> Result<ComplexMatrix> {
    if !field.is_odd() {
        return Err(Error::RequiresOddCharacteristic("stabilizer projector sum"));
    }
    let q = field.q();
    let mut out = ComplexMatrix::zeros(q, q);
    for k in field.elements() {
        let d = match basis {
            BasisLabel::Infinity => WeylOp::displacement(field, field.zero(), k)?,
            BasisLabel::Finite(b) => WeylOp::displacement(field, k, field.mul(k, b))?,
        };
        out.add_scaled(d.matrix(), field.trace_phase(field.neg(field.mul(k, v))));
    }
    Ok(out.scale_real(1.0 / q as f64))
}

/// Label of `D_{x,z} |psi_B^V><psi_B^V| D_{x,z}^dagger`: `V + x` on the
/// computational basis, `V - z + x B` otherwise.
pub fn conjugate_projector(
    field: &GaloisField,
    x: FieldElement,
    z: FieldElement,
    basis: BasisLabel,
    v: FieldElement,
) -> Result<(BasisLabel, FieldElement)> {
    if !field.is_odd() {
        return Err(Error::RequiresOddCharacteristic("label-level conjugation"));
    }
    let image = match basis {
        BasisLabel::Infinity => field.add(v, x),
        BasisLabel::Finite(b) => field.add(field.sub(v, z), field.mul(x, b)),
    };
    Ok((basis, image))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mub::MubSet;

    const TOL: f64 = 1e-9;

    fn field(q: u64) -> GaloisField {
        GaloisField::with_order(q).unwrap()
    }

    #[test]
    fn origin_is_identity() {
        for q in [2u64, 3, 4, 5] {
            let f = field(q);
            let d = WeylOp::new(&f, f.zero(), f.zero());
            assert!(d.matrix().max_abs_diff(&ComplexMatrix::identity(q as usize)) < TOL);
        }
    }

    #[test]
    fn operators_are_unitary() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let f = field(q);
            let id = ComplexMatrix::identity(q as usize);
            for x in f.elements() {
                for z in f.elements() {
                    let d = WeylOp::new(&f, x, z);
                    assert!((d.matrix() * &d.matrix().adjoint()).max_abs_diff(&id) < TOL);
                }
            }
        }
    }

    #[test]
    fn phased_variant_needs_odd_characteristic() {
        let f = field(4);
        assert!(matches!(WeylOp::displacement(&f, f.one(), f.one()), Err(Error::RequiresOddCharacteristic(_))));
        assert!(stabilizer_projector(&f, BasisLabel::Infinity, f.zero()).is_err());
        assert!(conjugate_projector(&f, f.one(), f.one(), BasisLabel::Infinity, f.zero()).is_err());
    }

    #[test]
    fn composition_law() {
        for q in [2u64, 3, 4, 5] {
            let f = field(q);
            for x in f.elements() {
                for z in f.elements() {
                    for x2 in f.elements() {
                        for z2 in f.elements() {
                            let lhs = WeylOp::unphased(&f, x, z).matrix() * WeylOp::unphased(&f, x2, z2).matrix();
                            let rhs = WeylOp::unphased(&f, f.add(x, x2), f.add(z, z2))
                                .matrix()
                                .scale(f.trace_phase(f.mul(x2, z)));
                            assert!(lhs.max_abs_diff(&rhs) < TOL);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn commutation_criterion() {
        for q in [2u64, 3, 4, 5] {
            let f = field(q);
            let ops: Vec<WeylOp> = f
                .elements()
                .flat_map(|x| f.elements().map(move |z| (x, z)))
                .map(|(x, z)| WeylOp::new(&f, x, z))
                .collect();
            for a in &ops {
                for b in &ops {
                    let ab = a.matrix() * b.matrix();
                    let ba = b.matrix() * a.matrix();
                    let commute = ab.max_abs_diff(&ba) < TOL;
                    let form = f.sub(f.mul(a.x(), b.z()), f.mul(b.x(), a.z()));
                    assert_eq!(commute, f.trace(form) == 0);
                }
            }
        }
    }

    #[test]
    fn stabilizer_sum_matches_mub_projectors() {
        for q in [3u64, 5, 7, 9] {
            let m = MubSet::with_order(q).unwrap();
            let f = m.field().clone();
            for label in m.labels() {
                for v in f.elements() {
                    let p = stabilizer_projector(&f, label, v).unwrap();
                    assert!(p.max_abs_diff(&m.projector(label, v)) < TOL);
                    assert!((&p * &p).max_abs_diff(&p) < TOL);
                    assert!((p.trace().re - 1.0).abs() < TOL);
                }
            }
        }
    }

    #[test]
    fn eigen_relation() {
        let m = MubSet::with_order(3).unwrap();
        let f = m.field().clone();
        for b in f.elements() {
            let d = WeylOp::displacement(&f, f.one(), b).unwrap();
            for v in f.elements() {
                let psi = m.vector(BasisLabel::Finite(b), v);
                let lhs = d.matrix().apply(psi);
                let phase = f.trace_phase(v);
                let rhs = crate::qlinalg::ComplexVector::new(psi.data().iter().map(|c| c * phase).collect());
                assert!(lhs.max_abs_diff(&rhs) < TOL);
            }
        }
    }

    #[test]
    fn conjugation_moves_labels() {
        let f = field(3);
        let (b, v) = conjugate_projector(&f, f.one(), f.from_int(2), BasisLabel::Finite(f.one()), f.zero()).unwrap();
        assert_eq!((b, v), (BasisLabel::Finite(f.one()), f.from_int(2)));
        for q in [3u64, 5, 7] {
            let m = MubSet::with_order(q).unwrap();
            let f = m.field().clone();
            for x in f.elements() {
                for z in f.elements() {
                    let d = WeylOp::new(&f, x, z);
                    for label in m.labels() {
                        for v in f.elements() {
                            let (_, image) = conjugate_projector(&f, x, z, label, v).unwrap();
                            let lhs = d.conjugate(&m.projector(label, v));
                            assert!(lhs.max_abs_diff(&m.projector(label, image)) < TOL);
                        }
                    }
                }
            }
        }
    }
}
