//! Face and facet operators `A^r = J sum_B |psi_B^{r_B}><psi_B^{r_B}| - K I`,
//! their Jamiołkowski states, and the distance dictionary
//! `Tr(A^r A^s) = q - Δ(r, s)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::codes::{simplex_generators, Word};
use crate::error::{Error, Result};
use crate::gfield::{FieldElement, GaloisField};
use crate::mub::{BasisLabel, MubSet, WeylOp};
use crate::qlinalg::{trace_product, ComplexMatrix, ComplexVector};

/// Largest label space walked exhaustively by [`purity_stats`].
pub const PURITY_EXHAUSTIVE_LIMIT: usize = 1024;

/// Basis subset in canonical order with one value per basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FaceLabel {
    bases: Vec<BasisLabel>,
    values: Vec<FieldElement>,
}

impl FaceLabel {
    pub fn new(field: &GaloisField, bases: Vec<BasisLabel>, values: Vec<FieldElement>) -> Result<Self> {
        if bases.len() != values.len() {
            return Err(Error::MalformedLabel(format!("{} bases but {} values", bases.len(), values.len())));
        }
        if bases.is_empty() || bases.len() > field.q() + 1 {
            return Err(Error::MalformedLabel(format!("label size {} outside 1..={}", bases.len(), field.q() + 1)));
        }
        for b in &bases {
            if let BasisLabel::Finite(e) = b {
                field.check(*e).map_err(|_| Error::MalformedLabel("basis from another field".into()))?;
            }
        }
        if values.iter().any(|&v| !field.contains(v)) {
            return Err(Error::MalformedLabel("value from another field".into()));
        }
        let pos: Vec<usize> = bases.iter().map(|b| b.position(field)).collect();
        if pos.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::MalformedLabel("bases must be distinct and in canonical order".into()));
        }
        Ok(Self { bases, values })
    }

    /// Facet label over all `q + 1` bases.
    pub fn facet(field: &GaloisField, values: Vec<FieldElement>) -> Result<Self> {
        if values.len() != field.q() + 1 {
            return Err(Error::MalformedLabel(format!("facet needs {} values, got {}", field.q() + 1, values.len())));
        }
        Self::new(field, BasisLabel::all(field), values)
    }

    /// Facet label from canonical indices, `∞` value first.
    pub fn facet_from_indices(field: &GaloisField, values: &[usize]) -> Result<Self> {
        let values = values
            .iter()
            .map(|&v| {
                field.element(v).map_err(|_| Error::MalformedLabel(format!("value {v} not in GF({})", field.q())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::facet(field, values)
    }

    /// Face label on the bases at the given canonical positions.
    pub fn from_positions(field: &GaloisField, positions: &[usize], values: &[usize]) -> Result<Self> {
        let bases = positions
            .iter()
            .map(|&p| BasisLabel::at_position(field, p).map_err(|e| Error::MalformedLabel(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let values = values
            .iter()
            .map(|&v| {
                field.element(v).map_err(|_| Error::MalformedLabel(format!("value {v} not in GF({})", field.q())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, bases, values)
    }

    pub fn from_word(field: &GaloisField, w: &Word) -> Result<Self> {
        Self::facet(field, w.symbols().to_vec())
    }

    pub fn to_word(&self) -> Word {
        Word::new(self.values.clone())
    }

    pub fn bases(&self) -> &[BasisLabel] {
        &self.bases
    }

    pub fn values(&self) -> &[FieldElement] {
        &self.values
    }

    pub fn indices(&self) -> Vec<usize> {
        self.values.iter().map(|v| v.index()).collect()
    }

    pub fn positions(&self, field: &GaloisField) -> Vec<usize> {
        self.bases.iter().map(|b| b.position(field)).collect()
    }

    /// `|r|`.
    pub fn size(&self) -> usize {
        self.bases.len()
    }

    pub fn is_facet(&self, field: &GaloisField) -> bool {
        self.size() == field.q() + 1
    }

    /// `Δ(r, s)`; both labels must use the same bases.
    pub fn distance(&self, other: &FaceLabel) -> Result<usize> {
        if self.bases != other.bases {
            return Err(Error::BasisSubsetMismatch);
        }
        Ok(self.values.iter().zip(&other.values).filter(|(a, b)| a != b).count())
    }

    /// Values reordered so bases run by canonical index `[∞, 0, 1, 2, …]`.
    pub fn by_basis_index(&self) -> Vec<(Option<usize>, usize)> {
        let mut out: Vec<(Option<usize>, usize)> =
            self.bases.iter().zip(&self.values).map(|(b, v)| (b.element().map(|e| e.index()), v.index())).collect();
        out.sort_by_key(|(b, _)| b.map_or(0, |i| i + 1));
        out
    }
}

/// `K = (|r| - sqrt(q^2 - q|r| + |r|)) / q`.
pub fn identity_coefficient(q: usize, size: usize) -> f64 {
    let (q, r) = (q as f64, size as f64);
    (r - (q * q - q * r + r).sqrt()) / q
}

/// `(J, K)` of the unit-trace normalization.
pub fn unit_trace_coefficients(q: usize, size: usize) -> (f64, f64) {
    let (q, r) = (q as f64, size as f64);
    (((q + 1.0) / r).sqrt(), (-1.0 + (r * (q + 1.0)).sqrt()) / q)
}

#[derive(Clone, Debug)]
pub struct FaceOperator {
    label: FaceLabel,
    j: f64,
    k: f64,
    matrix: ComplexMatrix,
}

impl FaceOperator {
    pub fn label(&self) -> &FaceLabel {
        &self.label
    }

    /// Projector weight `J`.
    pub fn j(&self) -> f64 {
        self.j
    }

    /// Identity coefficient `K`.
    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

#[derive(Debug, Serialize)]
pub struct FaceOperatorRecord {
    pub q: usize,
    pub bases: Vec<BasisLabel>,
    pub label: Vec<usize>,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "J")]
    pub j: f64,
    pub trace: f64,
    pub trace_sq: f64,
    pub operator: ComplexMatrix,
}

impl From<&FaceOperator> for FaceOperatorRecord {
    fn from(a: &FaceOperator) -> Self {
        Self {
            q: a.dim(),
            bases: a.label.bases.clone(),
            label: a.label.indices(),
            k: a.k,
            j: a.j,
            trace: a.matrix.trace().re,
            trace_sq: trace_product(&a.matrix, &a.matrix).re,
            operator: a.matrix.clone(),
        }
    }
}

fn check_label(m: &MubSet, label: &FaceLabel) -> Result<()> {
    let f = m.field();
    FaceLabel::new(f, label.bases.clone(), label.values.clone()).map(|_| ())
}

fn assemble(m: &MubSet, label: &FaceLabel, j: f64, k: f64) -> Result<FaceOperator> {
    check_label(m, label)?;
    let q = m.q();
    let mut a = ComplexMatrix::identity(q).scale_real(-k);
    for (&b, &v) in label.bases.iter().zip(&label.values) {
        a.add_projector(m.vector(b, v), j);
    }
    Ok(FaceOperator { label: label.clone(), j, k, matrix: a })
}

/// `sum_B |psi_B^{r_B}><psi_B^{r_B}| - K I`, normalized so `Tr(A^2) = q`.
pub fn face_operator(m: &MubSet, label: &FaceLabel) -> Result<FaceOperator> {
    assemble(m, label, 1.0, identity_coefficient(m.q(), label.size()))
}

/// Variant with `Tr(A) = 1` and `Tr(A^2) = q`.
pub fn face_operator_unit_trace(m: &MubSet, label: &FaceLabel) -> Result<FaceOperator> {
    let (j, k) = unit_trace_coefficients(m.q(), label.size());
    assemble(m, label, j, k)
}

/// `q - Δ(r, s)`.
pub fn overlap_predicted(q: usize, r: &FaceLabel, s: &FaceLabel) -> Result<f64> {
    Ok(q as f64 - r.distance(s)? as f64)
}

/// `q - (q + 1) Δ(r, s) / |r|` for unit-trace operators.
pub fn overlap_predicted_unit_trace(q: usize, r: &FaceLabel, s: &FaceLabel) -> Result<f64> {
    let d = r.distance(s)? as f64;
    Ok(q as f64 - (q as f64 + 1.0) * d / r.size() as f64)
}

/// `Tr(A^r A^s)`.
pub fn overlap_matrix(a: &FaceOperator, b: &FaceOperator) -> Result<f64> {
    a.label.distance(&b.label)?;
    Ok(trace_product(&a.matrix, &b.matrix).re)
}

/// `sqrt(2 Δ)`.
pub fn hs_distance(r: &FaceLabel, s: &FaceLabel) -> Result<f64> {
    Ok((2.0 * r.distance(s)? as f64).sqrt())
}

/// `sqrt(Tr((A - B)^dagger (A - B)))`.
pub fn hs_distance_matrix(a: &FaceOperator, b: &FaceOperator) -> f64 {
    (&a.matrix - &b.matrix).frobenius_norm()
}

/// `(1/q) sqrt(2 q Δ - Δ^2)`.
pub fn trace_distance(q: usize, r: &FaceLabel, s: &FaceLabel) -> Result<f64> {
    let (q, d) = (q as f64, r.distance(s)? as f64);
    Ok((2.0 * q * d - d * d).max(0.0).sqrt() / q)
}

/// `sqrt(2 (1 - |1 - Δ/q|))`.
pub fn fs_distance(q: usize, r: &FaceLabel, s: &FaceLabel) -> Result<f64> {
    let (q, d) = (q as f64, r.distance(s)? as f64);
    Ok((2.0 * (1.0 - (1.0 - d / q).abs())).max(0.0).sqrt())
}

/// `|J^r> = (I ⊗ A^r) sum_k |kk> / sqrt(q)`.
#[derive(Clone, Debug)]
pub struct JamState {
    label: FaceLabel,
    vector: ComplexVector,
}

impl JamState {
    pub fn label(&self) -> &FaceLabel {
        &self.label
    }

    pub fn vector(&self) -> &ComplexVector {
        &self.vector
    }

    /// `Tr(rho_1^2)` of the reduced state, `Tr(A^4) / q^2`.
    pub fn subsystem_purity(&self) -> f64 {
        let q = (self.vector.dim() as f64).sqrt().round() as usize;
        // rho_1 = M M^dagger with M[k][l] = <kl|J>
        let m = ComplexMatrix::from_fn(q, q, |k, l| self.vector[k * q + l]);
        let rho = &m * &m.adjoint();
        trace_product(&rho, &rho).re
    }
}

pub fn jam_state(a: &FaceOperator) -> JamState {
    let q = a.dim();
    let norm = 1.0 / (q as f64).sqrt();
    let mut data = vec![Complex64::new(0.0, 0.0); q * q];
    for k in 0..q {
        for l in 0..q {
            data[k * q + l] = a.matrix[(l, k)] * norm;
        }
    }
    JamState { label: a.label.clone(), vector: ComplexVector::new(data) }
}

/// `sqrt(1 - |<a|b>|^2)`.
pub fn trace_distance_states(a: &JamState, b: &JamState) -> f64 {
    (1.0 - a.vector.inner(&b.vector).norm_sqr()).max(0.0).sqrt()
}

/// `sqrt(2 (1 - |<a|b>|))`.
pub fn fs_distance_states(a: &JamState, b: &JamState) -> f64 {
    (2.0 * (1.0 - a.vector.inner(&b.vector).norm())).max(0.0).sqrt()
}

#[derive(Clone, Debug, Serialize)]
pub struct DistanceReport {
    pub delta: usize,
    pub hs: f64,
    pub trace: f64,
    pub fs: f64,
}

pub fn distances(q: usize, r: &FaceLabel, s: &FaceLabel) -> Result<DistanceReport> {
    Ok(DistanceReport {
        delta: r.distance(s)?,
        hs: hs_distance(r, s)?,
        trace: trace_distance(q, r, s)?,
        fs: fs_distance(q, r, s)?,
    })
}

/// `r + x g_1 - z g_2` restricted to the bases of `r`; odd `q` only.
pub fn conjugate_label(field: &GaloisField, r: &FaceLabel, x: FieldElement, z: FieldElement) -> Result<FaceLabel> {
    if !field.is_odd() {
        return Err(Error::RequiresOddCharacteristic("label-level conjugation"));
    }
    let (g1, g2) = simplex_generators(field);
    let values = r
        .bases
        .iter()
        .zip(&r.values)
        .map(|(b, &v)| {
            let p = b.position(field);
            field.sub(field.add(v, field.mul(x, g1.symbols()[p])), field.mul(z, g2.symbols()[p]))
        })
        .collect();
    FaceLabel::new(field, r.bases.clone(), values)
}

/// Image of every projector of `r` under each `D_{x,z}`, identified by
/// overlap; `x` runs slowest.
pub fn wh_orbit(m: &MubSet, r: &FaceLabel) -> Result<Vec<FaceLabel>> {
    check_label(m, r)?;
    let f = m.field();
    let points: Vec<(FieldElement, FieldElement)> =
        f.elements().flat_map(|x| f.elements().map(move |z| (x, z))).collect();
    points
        .par_iter()
        .map(|&(x, z)| {
            let d = WeylOp::new(f, x, z);
            let values = r
                .bases
                .iter()
                .zip(&r.values)
                .map(|(&b, &v)| {
                    let image = d.matrix().apply(m.vector(b, v));
                    let overlaps: Vec<f64> = m.basis(b).iter().map(|u| u.inner(&image).norm_sqr()).collect();
                    let (best, &score) =
                        overlaps.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).expect("nonempty basis");
                    if score > 1.0 - 1e-6 {
                        Ok(f.wrap(best))
                    } else {
                        Err(Error::OrbitMatch { basis: b.to_string(), best: score })
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            FaceLabel::new(f, r.bases.clone(), values)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PurityStats {
    pub average: f64,
    pub lubkin: f64,
    pub labels: usize,
    pub exhaustive: bool,
    pub std_error: Option<f64>,
}

/// `2q / (q^2 + 1)`.
pub fn lubkin_purity(q: usize) -> f64 {
    let q = q as f64;
    2.0 * q / (q * q + 1.0)
}

fn facet_purity(m: &MubSet, values: &[usize]) -> f64 {
    let f = m.field();
    let label = FaceLabel::facet_from_indices(f, values).expect("indices in range");
    let a = face_operator(m, &label).expect("valid label");
    let a2 = a.matrix() * a.matrix();
    let q = m.q() as f64;
    trace_product(&a2, &a2).re / (q * q)
}

/// Average subsystem purity of facet Jamiołkowski states. Exhaustive when
/// `q^(q+1)` is at most [`PURITY_EXHAUSTIVE_LIMIT`]; otherwise `sampling`
/// (`samples`, `seed`) must be given.
pub fn purity_stats(m: &MubSet, sampling: Option<(usize, u64)>) -> Result<PurityStats> {
    let q = m.q();
    let n = q + 1;
    let total = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total <= PURITY_EXHAUSTIVE_LIMIT as u128 {
        let purities: Vec<f64> = (0..total as usize)
            .into_par_iter()
            .map(|mut i| {
                let mut v = vec![0; n];
                for slot in v.iter_mut().rev() {
                    *slot = i % q;
                    i /= q;
                }
                facet_purity(m, &v)
            })
            .collect();
        let average = purities.iter().sum::<f64>() / purities.len() as f64;
        return Ok(PurityStats {
            average,
            lubkin: lubkin_purity(q),
            labels: purities.len(),
            exhaustive: true,
            std_error: None,
        });
    }
    let Some((samples, seed)) = sampling else {
        return Err(Error::EnumerationBound { count: total, limit: PURITY_EXHAUSTIVE_LIMIT as u128 });
    };
    if samples < 2 {
        return Err(Error::InvalidParameters("sampling needs at least two labels".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels: Vec<Vec<usize>> = (0..samples).map(|_| (0..n).map(|_| rng.random_range(0..q)).collect()).collect();
    let purities: Vec<f64> = labels.par_iter().map(|v| facet_purity(m, v)).collect();
    let mean = purities.iter().sum::<f64>() / samples as f64;
    let var = purities.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (samples as f64 - 1.0);
    Ok(PurityStats {
        average: mean,
        lubkin: lubkin_purity(q),
        labels: samples,
        exhaustive: false,
        std_error: Some((var / samples as f64).sqrt()),
    })
}
