//! Discrete Wigner functions `W_{x,z}(rho) = (1/q) Tr(A^{w + x g_1 - z g_2} rho)`
//! indexed by a coset of the simplex code, together with the
//! stabilizer-polytope test and the discrete Hudson checks.

use std::sync::Arc;

use log::warn;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::codes::simplex_generators;
use crate::error::{Error, Result};
use crate::faceops::{face_operator, FaceLabel};
use crate::gfield::{is_prime, GaloisField};
use crate::mub::MubSet;
use crate::qlinalg::{random_pure_state_with, trace_product, ComplexMatrix, ComplexVector};
use crate::TOLERANCE;

/// Negativity at or below this value counts as a non-negative table.
pub const NEGATIVITY_ZERO: f64 = 1e-9;
/// Samples must exceed this negativity in the Hudson suite.
pub const NEGATIVITY_FLOOR: f64 = 1e-6;

/// Phase-point operators of one coset, cached at `x * q + z`.
#[derive(Clone, Debug)]
pub struct DwfSpec {
    mub: Arc<MubSet>,
    leader: FaceLabel,
    labels: Vec<FaceLabel>,
    operators: Vec<ComplexMatrix>,
}

impl DwfSpec {
    /// `w` must be a facet label.
    pub fn new(mub: Arc<MubSet>, leader: FaceLabel) -> Result<Self> {
        let f = Arc::clone(mub.field());
        if !leader.is_facet(&f) {
            return Err(Error::MalformedLabel(format!("coset leader needs {} values", f.q() + 1)));
        }
        let (g1, g2) = simplex_generators(&f);
        let mut labels = Vec::with_capacity(f.q() * f.q());
        let mut operators = Vec::with_capacity(f.q() * f.q());
        for x in f.elements() {
            for z in f.elements() {
                let shift = g1.scale(&f, x).add(&f, &g2.scale(&f, f.neg(z)))?;
                let label = FaceLabel::from_word(&f, &leader.to_word().add(&f, &shift)?)?;
                operators.push(face_operator(&mub, &label)?.matrix().clone());
                labels.push(label);
            }
        }
        Ok(Self { mub, leader, labels, operators })
    }

    /// The `w = 0` phase space.
    pub fn origin(mub: Arc<MubSet>) -> Result<Self> {
        let f = Arc::clone(mub.field());
        let w = FaceLabel::facet(&f, vec![f.zero(); f.q() + 1])?;
        Self::new(mub, w)
    }

    pub fn q(&self) -> usize {
        self.mub.q()
    }

    pub fn mub(&self) -> &Arc<MubSet> {
        &self.mub
    }

    pub fn leader(&self) -> &FaceLabel {
        &self.leader
    }

    /// Label of the phase point at canonical indices `(x, z)`.
    pub fn label(&self, x: usize, z: usize) -> &FaceLabel {
        &self.labels[x * self.q() + z]
    }

    pub fn operator(&self, x: usize, z: usize) -> &ComplexMatrix {
        &self.operators[x * self.q() + z]
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }
}

/// `values[x][z]`, indexed by canonical field indices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WignerTable {
    #[serde(rename = "table")]
    values: Vec<Vec<f64>>,
}

impl WignerTable {
    pub fn new(values: Vec<Vec<f64>>) -> Result<Self> {
        let q = values.len();
        if let Some(row) = values.iter().find(|r| r.len() != q) {
            return Err(Error::DimensionMismatch {
                expected: format!("{q} x {q}"),
                found: format!("row of {}", row.len()),
            });
        }
        Ok(Self { values })
    }

    pub fn zeros(q: usize) -> Self {
        Self { values: vec![vec![0.0; q]; q] }
    }

    pub fn q(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn get(&self, x: usize, z: usize) -> f64 {
        self.values[x][z]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().flatten().sum()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().flatten().copied().fold(f64::INFINITY, f64::min)
    }

    /// `sum max(0, -W)`.
    pub fn negativity(&self) -> f64 {
        self.values.iter().flatten().map(|&w| (-w).max(0.0)).sum()
    }
}

fn check_operator(q: usize, rho: &ComplexMatrix) -> Result<()> {
    if rho.rows() != q || rho.cols() != q {
        return Err(Error::DimensionMismatch {
            expected: format!("{q} x {q}"),
            found: format!("{} x {}", rho.rows(), rho.cols()),
        });
    }
    let defect = rho.hermiticity_defect();
    if defect > TOLERANCE {
        return Err(Error::NotHermitian { deviation: defect });
    }
    Ok(())
}

pub fn dwf(spec: &DwfSpec, rho: &ComplexMatrix) -> Result<WignerTable> {
    let q = spec.q();
    check_operator(q, rho)?;
    let tr = rho.trace().re;
    if (tr - 1.0).abs() > TOLERANCE {
        warn!("state trace is {tr}, not 1");
    }
    let values =
        (0..q).map(|x| (0..q).map(|z| trace_product(spec.operator(x, z), rho).re / q as f64).collect()).collect();
    Ok(WignerTable { values })
}

/// `sum_{x,z} W_{x,z} A_{x,z}`.
pub fn reconstruct(spec: &DwfSpec, table: &WignerTable) -> Result<ComplexMatrix> {
    let q = spec.q();
    if table.q() != q {
        return Err(Error::DimensionMismatch {
            expected: format!("{q} x {q}"),
            found: format!("{0} x {0}", table.q()),
        });
    }
    let mut out = ComplexMatrix::zeros(q, q);
    for x in 0..q {
        for z in 0..q {
            out.add_scaled(spec.operator(x, z), table.get(x, z).into());
        }
    }
    Ok(out)
}

pub fn negativity(spec: &DwfSpec, rho: &ComplexMatrix) -> Result<f64> {
    Ok(dwf(spec, rho)?.negativity())
}

#[derive(Clone, Debug, Serialize)]
pub struct PolytopeReport {
    pub min: f64,
    #[serde(serialize_with = "serialize_label")]
    pub argmin: FaceLabel,
    pub member: bool,
}

fn serialize_label<S: serde::Serializer>(l: &FaceLabel, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(l.indices())
}

/// `min_r Tr(rho A^r)` over all facets, computed per basis as
/// `sum_B min_V <psi_B^V|rho|psi_B^V> - 1`.
pub fn stab_polytope_min(m: &MubSet, rho: &ComplexMatrix) -> Result<PolytopeReport> {
    let q = m.q();
    check_operator(q, rho)?;
    let tr = rho.trace().re;
    if (tr - 1.0).abs() > TOLERANCE {
        return Err(Error::TraceNotUnit { trace: tr });
    }
    let f = m.field();
    let mut total = -1.0;
    let mut values = Vec::with_capacity(q + 1);
    for label in m.labels() {
        let probs: Vec<f64> = m.basis(label).iter().map(|v| v.inner(&rho.apply(v)).re).collect();
        let best = probs.iter().copied().fold(f64::INFINITY, f64::min);
        let arg = probs.iter().position(|&p| p <= best + 1e-12).expect("nonempty basis");
        total += best;
        values.push(f.wrap(arg));
    }
    Ok(PolytopeReport { min: total, argmin: FaceLabel::facet(f, values)?, member: total >= -TOLERANCE })
}

/// `sum_k |k><-k|`.
pub fn parity_operator(field: &GaloisField) -> ComplexMatrix {
    let q = field.q();
    let mut m = ComplexMatrix::zeros(q, q);
    for k in field.elements() {
        m[(k.index(), field.neg(k).index())] = 1.0.into();
    }
    m
}

/// Largest entry of `A^{0} - sum_k |k><-k|`; odd `q` only.
pub fn parity_check(m: &MubSet) -> Result<f64> {
    let f = m.field();
    if !f.is_odd() {
        return Err(Error::RequiresOddCharacteristic("parity identity"));
    }
    let zero = FaceLabel::facet(f, vec![f.zero(); f.q() + 1])?;
    Ok(face_operator(m, &zero)?.matrix().max_abs_diff(&parity_operator(f)))
}

/// `p^n prod_{i=1}^n (p^i + 1)`.
pub fn stabilizer_count(p: u64, n: u32) -> Result<u128> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::InvalidParameters("n must be positive".into()));
    }
    let p = u128::from(p);
    p.checked_pow(n)
        .and_then(|start| (1..=n).try_fold(start, |acc, i| acc.checked_mul(p.checked_pow(i)?.checked_add(1)?)))
        .ok_or_else(|| Error::InvalidParameters("stabilizer count overflows".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HudsonMode {
    /// Odd prime `q`: only stabilizer states are non-negative.
    Theorem,
    /// `q = 2`: non-negative non-stabilizer states exist.
    Contrast,
}

#[derive(Clone, Debug, Serialize)]
pub struct HudsonReport {
    pub q: usize,
    pub mode: HudsonMode,
    pub mub_states: usize,
    pub mub_nonnegative: usize,
    pub max_mub_negativity: f64,
    pub samples: usize,
    pub samples_negative: usize,
    pub samples_near_mub: usize,
    pub samples_nonnegative: usize,
    pub min_sample_negativity: f64,
    /// A sampled non-negative pure state that is not an MUB vector.
    pub witness: Option<ComplexVector>,
}

impl HudsonReport {
    pub fn holds(&self) -> bool {
        let stabilizers = self.mub_nonnegative == self.mub_states;
        match self.mode {
            HudsonMode::Theorem => stabilizers && self.samples_negative + self.samples_near_mub == self.samples,
            HudsonMode::Contrast => stabilizers && self.witness.is_some(),
        }
    }
}

/// Discrete Hudson checks in the `w = 0` phase space: every MUB state is
/// non-negative, and seeded Haar states are negative (odd prime `q`) or
/// include a non-negative non-MUB state (`q = 2`).
pub fn hudson_suite(m: Arc<MubSet>, samples: usize, seed: u64) -> Result<HudsonReport> {
    let q = m.q();
    let mode = match q {
        2 => HudsonMode::Contrast,
        _ if m.field().n() == 1 => HudsonMode::Theorem,
        _ => return Err(Error::InvalidParameters(format!("Hudson suite needs q = 2 or an odd prime, got {q}"))),
    };
    let spec = DwfSpec::origin(Arc::clone(&m))?;
    let mub_vectors: Vec<&ComplexVector> = m.labels().into_iter().flat_map(|l| m.basis(l).iter()).collect();
    let mut max_mub_negativity = 0.0f64;
    let mut mub_nonnegative = 0;
    for v in &mub_vectors {
        let n = negativity(&spec, &v.projector())?;
        max_mub_negativity = max_mub_negativity.max(n);
        if n <= NEGATIVITY_ZERO {
            mub_nonnegative += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = HudsonReport {
        q,
        mode,
        mub_states: mub_vectors.len(),
        mub_nonnegative,
        max_mub_negativity,
        samples,
        samples_negative: 0,
        samples_near_mub: 0,
        samples_nonnegative: 0,
        min_sample_negativity: f64::INFINITY,
        witness: None,
    };
    for _ in 0..samples {
        let psi = random_pure_state_with(&mut rng, q);
        let n = negativity(&spec, &psi.projector())?;
        report.min_sample_negativity = report.min_sample_negativity.min(n);
        let near_mub = mub_vectors.iter().any(|v| (2.0 * (1.0 - v.inner(&psi).norm())).max(0.0).sqrt() < 1e-6);
        if n > NEGATIVITY_FLOOR {
            report.samples_negative += 1;
        } else if near_mub {
            report.samples_near_mub += 1;
        } else if n <= NEGATIVITY_ZERO {
            report.samples_nonnegative += 1;
            if report.witness.is_none() {
                report.witness = Some(psi);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::random_density_matrix_with;

    const TOL: f64 = 1e-9;

    fn mub(q: u64) -> Arc<MubSet> {
        Arc::new(MubSet::with_order(q).unwrap())
    }

    #[test]
    fn maximally_mixed_state_is_uniform() {
        for q in [2u64, 3, 4, 5] {
            let spec = DwfSpec::origin(mub(q)).unwrap();
            let d = q as usize;
            let rho = ComplexMatrix::identity(d).scale_real(1.0 / q as f64);
            let table = dwf(&spec, &rho).unwrap();
            for row in table.values() {
                for &w in row {
                    assert!((w - 1.0 / (q * q) as f64).abs() < TOL);
                }
            }
            assert_eq!(table.negativity(), 0.0);
            let back = reconstruct(&spec, &table).unwrap();
            assert!(back.max_abs_diff(&rho) < TOL);
        }
    }

    #[test]
    fn zero_table_reconstructs_to_zero() {
        let spec = DwfSpec::origin(mub(3)).unwrap();
        assert_eq!(reconstruct(&spec, &WignerTable::zeros(3)).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn non_hermitian_input_rejected() {
        let spec = DwfSpec::origin(mub(3)).unwrap();
        let mut rho = ComplexMatrix::identity(3);
        rho[(0, 1)] = 1.0.into();
        assert!(matches!(dwf(&spec, &rho), Err(Error::NotHermitian { .. })));
        assert!(matches!(dwf(&spec, &ComplexMatrix::identity(2)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn phase_point_operators_are_orthogonal() {
        for q in [2u64, 3, 4, 5] {
            let spec = DwfSpec::origin(mub(q)).unwrap();
            let ops = spec.operators();
            for (i, a) in ops.iter().enumerate() {
                for (j, b) in ops.iter().enumerate() {
                    let want = if i == j { q as f64 } else { 0.0 };
                    assert!((trace_product(a, b).re - want).abs() < TOL);
                }
            }
        }
    }

    #[test]
    fn round_trip_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in [2u64, 3, 5] {
            let spec = DwfSpec::origin(mub(q)).unwrap();
            for _ in 0..20 {
                let rho = random_density_matrix_with(&mut rng, q as usize);
                let table = dwf(&spec, &rho).unwrap();
                assert!((table.sum() - 1.0).abs() < TOL);
                assert!(reconstruct(&spec, &table).unwrap().max_abs_diff(&rho) < TOL);
            }
        }
    }

    #[test]
    fn parity_identity() {
        for q in [3u64, 5, 7, 9] {
            let m = MubSet::with_order(q).unwrap();
            assert!(parity_check(&m).unwrap() < TOL);
            let p = parity_operator(m.field());
            assert!((&p * &p).max_abs_diff(&ComplexMatrix::identity(q as usize)) < TOL);
        }
        assert!(parity_check(&MubSet::with_order(4).unwrap()).is_err());
    }

    #[test]
    fn polytope_of_maximally_mixed_state() {
        for q in [2u64, 3, 4, 5] {
            let m = MubSet::with_order(q).unwrap();
            let rho = ComplexMatrix::identity(q as usize).scale_real(1.0 / q as f64);
            let r = stab_polytope_min(&m, &rho).unwrap();
            assert!((r.min - 1.0 / q as f64).abs() < TOL);
            assert!(r.member);
            assert!(r.argmin.values().iter().all(|v| v.is_zero()));
        }
        let m = MubSet::with_order(3).unwrap();
        assert!(matches!(stab_polytope_min(&m, &ComplexMatrix::identity(3)), Err(Error::TraceNotUnit { .. })));
    }

    #[test]
    fn qubit_mub_state_sits_on_the_boundary() {
        let m = MubSet::with_order(2).unwrap();
        let f = m.field().clone();
        let rho = m.projector(crate::mub::BasisLabel::Finite(f.zero()), f.zero());
        let r = stab_polytope_min(&m, &rho).unwrap();
        assert!(r.min.abs() < TOL);
        assert!(r.member);
    }

    #[test]
    fn stabilizer_counts() {
        assert_eq!(stabilizer_count(2, 1).unwrap(), 6);
        assert_eq!(stabilizer_count(3, 1).unwrap(), 12);
        assert_eq!(stabilizer_count(2, 2).unwrap(), 60);
        assert!(matches!(stabilizer_count(4, 1), Err(Error::NotPrime(4))));
    }

    #[test]
    fn hudson_small() {
        let r = hudson_suite(mub(3), 100, 1).unwrap();
        assert_eq!(r.mode, HudsonMode::Theorem);
        assert!(r.holds(), "{r:?}");
        let c = hudson_suite(mub(2), 200, 1).unwrap();
        assert_eq!(c.mode, HudsonMode::Contrast);
        assert!(c.holds(), "{c:?}");
        assert!(hudson_suite(mub(4), 10, 1).is_err());
        assert!(hudson_suite(mub(9), 10, 1).is_err());
    }
}
