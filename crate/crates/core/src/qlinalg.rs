//! Dense complex linear algebra at dimensions `q` and `q^2`.
//!
//! Matrices are row-major. Arithmetic operators panic on shape mismatch;
//! the named functions that can receive user data return `Result`.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRecord", into = "MatrixRecord")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRecord {
    dim: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

impl TryFrom<MatrixRecord> for ComplexMatrix {
    type Error = Error;

    fn try_from(r: MatrixRecord) -> Result<Self> {
        if r.entries.len() != r.dim {
            return Err(Error::DimensionMismatch {
                expected: format!("{} rows", r.dim),
                found: format!("{} rows", r.entries.len()),
            });
        }
        let mut data = Vec::with_capacity(r.dim * r.dim);
        for (i, row) in r.entries.iter().enumerate() {
            if row.len() != r.dim {
                return Err(Error::DimensionMismatch {
                    expected: format!("{} entries in row {i}", r.dim),
                    found: format!("{}", row.len()),
                });
            }
            data.extend(row.iter().map(|[re, im]| Complex64::new(*re, *im)));
        }
        Ok(Self { rows: r.dim, cols: r.dim, data })
    }
}

impl From<ComplexMatrix> for MatrixRecord {
    fn from(m: ComplexMatrix) -> Self {
        // rectangular matrices are never serialized; `dim` is the row count
        Self {
            dim: m.rows,
            entries: m.data.chunks(m.cols.max(1)).map(|r| r.iter().map(|c| [c.re, c.im]).collect()).collect(),
        }
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                expected: format!("rows of length {c}"),
                found: "ragged rows".into(),
            });
        }
        Ok(Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    fn shape(&self) -> String {
        format!("{}x{}", self.rows, self.cols)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// `self += s * other`, the hot loop when summing projectors.
    pub fn add_scaled(&mut self, other: &Self, s: Complex64) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    /// `self += s |v><v|`.
    pub fn add_projector(&mut self, v: &ComplexVector, s: f64) {
        assert!(self.rows == v.dim() && self.cols == v.dim(), "shape mismatch");
        let d = v.dim();
        for i in 0..d {
            let vi = v[i] * s;
            for j in 0..d {
                self.data[i * d + j] += vi * v[j].conj();
            }
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: format!("{} rows", self.cols), found: other.shape() });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(self.cols, v.dim(), "shape mismatch");
        ComplexVector::new(
            (0..self.rows)
                .map(|i| self.data[i * self.cols..(i + 1) * self.cols].iter().zip(v.data()).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    /// `M A M^dagger`.
    pub fn conjugate_by(&self, m: &Self) -> Self {
        &(m * self) * &m.adjoint()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// `max |M - M^dagger|`; infinite for non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.clone();
        out.add_scaled(rhs, ONE);
        out
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.clone();
        out.add_scaled(rhs, -ONE);
        out
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_mul(rhs).expect("shape mismatch")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VectorRecord", into = "VectorRecord")]
pub struct ComplexVector {
    data: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct VectorRecord {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

impl TryFrom<VectorRecord> for ComplexVector {
    type Error = Error;

    fn try_from(r: VectorRecord) -> Result<Self> {
        if r.entries.len() != r.dim {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries", r.dim),
                found: format!("{}", r.entries.len()),
            });
        }
        Ok(Self::new(r.entries.iter().map(|[re, im]| Complex64::new(*re, *im)).collect()))
    }
}

impl From<ComplexVector> for VectorRecord {
    fn from(v: ComplexVector) -> Self {
        Self { dim: v.dim(), entries: v.data.iter().map(|c| [c.re, c.im]).collect() }
    }
}

impl ComplexVector {
    pub fn new(data: Vec<Complex64>) -> Self {
        Self { data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { data: vec![ZERO; dim] }
    }

    /// Computational basis vector `|index>`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.data[index] = ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self { data: self.data.iter().map(|c| c / n).collect() }
    }

    pub fn is_unit(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self { data: self.data.iter().flat_map(|a| other.data.iter().map(move |b| a * b)).collect() }
    }

    /// `|self><self|`.
    pub fn projector(&self) -> ComplexMatrix {
        let d = self.dim();
        ComplexMatrix::from_fn(d, d, |i, j| self.data[i] * self.data[j].conj())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.data[i]
    }
}

/// Hilbert-Schmidt inner product `Tr(A^dagger B)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    if !a.is_square() || (a.rows, a.cols) != (b.rows, b.cols) {
        return Err(Error::DimensionMismatch { expected: a.shape(), found: b.shape() });
    }
    Ok(a.data.iter().zip(&b.data).map(|(x, y)| x.conj() * y).sum())
}

/// `Tr(AB)` without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    assert!(a.cols == b.rows && a.rows == b.cols, "shape mismatch");
    let mut s = ZERO;
    for i in 0..a.rows {
        for k in 0..a.cols {
            s += a.data[i * a.cols + k] * b.data[k * b.cols + i];
        }
    }
    s
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.rows * b.rows, a.cols * b.cols, |i, j| {
        a[(i / b.rows, j / b.cols)] * b[(i % b.rows, j % b.cols)]
    })
}

/// Traces out the first tensor factor of a `q^2 x q^2` operator.
pub fn partial_trace_first(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let q = (m.rows as f64).sqrt().round() as usize;
    if !m.is_square() || q * q != m.rows {
        return Err(Error::DimensionMismatch { expected: "q^2 x q^2".into(), found: m.shape() });
    }
    Ok(ComplexMatrix::from_fn(q, q, |i, j| (0..q).map(|k| m[(k * q + i, k * q + j)]).sum()))
}

/// Traces out the second tensor factor of a `q^2 x q^2` operator.
pub fn partial_trace_second(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let q = (m.rows as f64).sqrt().round() as usize;
    if !m.is_square() || q * q != m.rows {
        return Err(Error::DimensionMismatch { expected: "q^2 x q^2".into(), found: m.shape() });
    }
    Ok(ComplexMatrix::from_fn(q, q, |i, j| (0..q).map(|k| m[(i * q + k, j * q + k)]).sum()))
}

/// `(1/sqrt q) sum_k |k>|k>`.
pub fn max_entangled(q: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(q * q);
    let amp = Complex64::new(1.0 / (q as f64).sqrt(), 0.0);
    for k in 0..q {
        v.data[k * q + k] = amp;
    }
    v
}

/// Haar-random unit vector: normalized i.i.d. complex Gaussians.
pub fn random_pure_state_with<R: Rng + ?Sized>(rng: &mut R, q: usize) -> ComplexVector {
    let data = (0..q).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
    ComplexVector::new(data).normalized()
}

/// Deterministic per seed.
pub fn random_pure_state(q: usize, seed: u64) -> ComplexVector {
    random_pure_state_with(&mut ChaCha8Rng::seed_from_u64(seed), q)
}

/// Hermitian matrix with Gaussian entries (GUE-like), not normalized.
pub fn random_hermitian_with<R: Rng + ?Sized>(rng: &mut R, q: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(q, q, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    (&g + &g.adjoint()).scale_real(0.5)
}

/// Random full-rank density matrix `G G^dagger / Tr(G G^dagger)`.
pub fn random_density_matrix_with<R: Rng + ?Sized>(rng: &mut R, q: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(q, q, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let m = &g * &g.adjoint();
    let t = m.trace().re;
    m.scale_real(1.0 / t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_inner_product_is_dimension() {
        for q in 1..6 {
            let i = ComplexMatrix::identity(q);
            assert_eq!(hs_inner(&i, &i).unwrap(), c(q as f64, 0.0));
        }
    }

    #[test]
    fn hs_inner_rejects_mismatched_shapes() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::identity(3);
        assert!(matches!(hs_inner(&a, &b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn kron_of_identities() {
        assert_eq!(kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2)), ComplexMatrix::identity(4));
    }

    #[test]
    fn partial_trace_of_product_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = random_hermitian_with(&mut rng, 3);
        let t = random_hermitian_with(&mut rng, 3);
        let pt = partial_trace_first(&kron(&s, &t)).unwrap();
        assert!(pt.max_abs_diff(&t.scale(s.trace())) < 1e-12);
        let pt2 = partial_trace_second(&kron(&s, &t)).unwrap();
        assert!(pt2.max_abs_diff(&s.scale(t.trace())) < 1e-12);
    }

    #[test]
    fn partial_trace_rejects_non_square_dimension() {
        assert!(partial_trace_first(&ComplexMatrix::identity(5)).is_err());
    }

    #[test]
    fn maximally_entangled_state() {
        let v = max_entangled(2);
        let h = 1.0 / 2f64.sqrt();
        assert_eq!(v.data(), &[c(h, 0.0), ZERO, ZERO, c(h, 0.0)]);
        for q in 2..6 {
            let omega = max_entangled(q);
            assert!(omega.is_unit(1e-12));
            let reduced = partial_trace_first(&omega.projector()).unwrap();
            assert!(reduced.max_abs_diff(&ComplexMatrix::identity(q).scale_real(1.0 / q as f64)) < 1e-12);
            let purity = trace_product(&reduced, &reduced).re;
            assert!((purity - 1.0 / q as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn random_states_are_unit_and_seeded() {
        for seed in 0..20 {
            let v = random_pure_state(5, seed);
            assert!(v.is_unit(1e-12));
            assert_eq!(v, random_pure_state(5, seed));
        }
        assert_ne!(random_pure_state(5, 1), random_pure_state(5, 2));
    }

    #[test]
    fn haar_first_moment() {
        // E|<0|psi>|^2 = 1/q, Var = (q-1) / (q^2 (q+1))
        let q = 4usize;
        let samples = 10_000;
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mean =
            (0..samples).map(|_| random_pure_state_with(&mut rng, q)[0].norm_sqr()).sum::<f64>() / samples as f64;
        let qf = q as f64;
        let sigma = ((qf - 1.0) / (qf * qf * (qf + 1.0)) / samples as f64).sqrt();
        assert!((mean - 1.0 / qf).abs() < 5.0 * sigma, "mean {mean}, sigma {sigma}");
    }

    #[test]
    fn json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_hermitian_with(&mut rng, 3);
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.starts_with("{\"dim\":3,\"entries\":[[["));
        let back = ComplexMatrix::from_json(&s).unwrap();
        assert!(back.max_abs_diff(&m) <= 1e-12);

        let v = random_pure_state(4, 9);
        let back = ComplexVector::from_json(&serde_json::to_string(&v).unwrap()).unwrap();
        assert!(back.max_abs_diff(&v) <= 1e-12);
    }

    #[test]
    fn json_rejects_ragged_matrix() {
        let err = ComplexMatrix::from_json(r#"{"dim": 2, "entries": [[[1,0],[0,0]], [[0,0]]]}"#);
        assert!(err.is_err());
        let err = ComplexMatrix::from_json(r#"{"dim": 2, "entries": [[[1,0],[0,0]]]}"#);
        assert!(err.is_err());
    }

    #[test]
    fn conjugation_and_adjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = random_hermitian_with(&mut rng, 4);
        assert!(h.is_hermitian(1e-12));
        let rho = random_density_matrix_with(&mut rng, 4);
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        assert!(rho.is_hermitian(1e-12));
        let u = ComplexMatrix::identity(4);
        assert!(h.conjugate_by(&u).max_abs_diff(&h) < 1e-15);
    }
}
