//! Linear codes over `GF(q)`: the length-`(q+1)` simplex and Hamming codes,
//! duals, Slepian coset tables, weight distributions and classical bounds.
//!
//! Codeword enumeration order: the message coefficient of generator row 0
//! varies fastest, each coefficient running through the canonical element
//! order. Word encodings treat coordinate 0 as the most significant digit.

use std::collections::HashSet;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gfield::{FieldElement, GaloisField};

/// Largest codeword list kept in memory.
pub const CODEWORD_CACHE_LIMIT: u128 = 1 << 20;
/// Largest code that will be walked codeword by codeword.
pub const ENUMERATION_LIMIT: u128 = 1_000_000_000;
/// Largest number of cosets a [`CosetTable`] may hold.
pub const COSET_LIMIT: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(Vec<FieldElement>);

impl Word {
    pub fn new(symbols: Vec<FieldElement>) -> Self {
        Self(symbols)
    }

    pub fn zero(field: &GaloisField, len: usize) -> Self {
        Self(vec![field.zero(); len])
    }

    /// Word from canonical element indices.
    pub fn from_indices(field: &GaloisField, indices: &[usize]) -> Result<Self> {
        indices.iter().map(|&i| field.element(i)).collect::<Result<Vec<_>>>().map(Self)
    }

    pub fn symbols(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn indices(&self) -> Vec<usize> {
        self.0.iter().map(|s| s.index()).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|s| !s.is_zero()).count()
    }

    /// Integer encoding with coordinate 0 most significant.
    pub fn encoding(&self, q: usize) -> u128 {
        self.0.iter().fold(0u128, |acc, s| acc * q as u128 + s.index() as u128)
    }

    pub fn add(&self, field: &GaloisField, other: &Word) -> Result<Word> {
        check_compatible(self, other)?;
        Ok(Word(self.0.iter().zip(&other.0).map(|(&a, &b)| field.add(a, b)).collect()))
    }

    pub fn scale(&self, field: &GaloisField, c: FieldElement) -> Word {
        Word(self.0.iter().map(|&a| field.mul(c, a)).collect())
    }

    /// Standard bilinear form `sum u_i v_i`.
    pub fn dot(&self, field: &GaloisField, other: &Word) -> Result<FieldElement> {
        check_compatible(self, other)?;
        Ok(self.0.iter().zip(&other.0).fold(field.zero(), |acc, (&a, &b)| field.add(acc, field.mul(a, b))))
    }
}

fn check_compatible(v: &Word, w: &Word) -> Result<()> {
    if v.len() != w.len() {
        return Err(Error::LengthMismatch { left: v.len(), right: w.len() });
    }
    if let Some(first) = v.0.first() {
        if v.0.iter().chain(&w.0).any(|s| !s.same_field(*first)) {
            return Err(Error::FieldMismatch);
        }
    }
    Ok(())
}

/// Number of coordinates in which `v` and `w` differ.
pub fn hamming_distance(v: &Word, w: &Word) -> Result<usize> {
    check_compatible(v, w)?;
    Ok(v.0.iter().zip(&w.0).filter(|(a, b)| a != b).count())
}

/// A linear code given by a full-rank generator matrix.
#[derive(Debug)]
pub struct LinearCode {
    field: Arc<GaloisField>,
    generator: Vec<Word>,
    length: usize,
    codewords: OnceLock<Vec<Word>>,
    min_distance: OnceLock<usize>,
}

impl Clone for LinearCode {
    fn clone(&self) -> Self {
        Self {
            field: Arc::clone(&self.field),
            generator: self.generator.clone(),
            length: self.length,
            codewords: self.codewords.clone(),
            min_distance: self.min_distance.clone(),
        }
    }
}

/// JSON summary of a code.
#[derive(Debug, Serialize)]
pub struct CodeSummary {
    #[serde(rename = "N")]
    pub length: usize,
    pub k: usize,
    pub d: Option<usize>,
    pub generator: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub codewords: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u128>>,
}

impl LinearCode {
    /// `length` is needed only when `generator` is empty.
    pub fn new(field: Arc<GaloisField>, generator: Vec<Word>, length: usize) -> Result<Self> {
        for row in &generator {
            if row.len() != length {
                return Err(Error::LengthMismatch { left: row.len(), right: length });
            }
            if row.symbols().iter().any(|&s| !field.contains(s)) {
                return Err(Error::FieldMismatch);
            }
        }
        if rank(&field, &generator) != generator.len() {
            return Err(Error::DependentGenerator);
        }
        Ok(Self { field, generator, length, codewords: OnceLock::new(), min_distance: OnceLock::new() })
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn generator(&self) -> &[Word] {
        &self.generator
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dimension(&self) -> usize {
        self.generator.len()
    }

    /// `q^k`.
    pub fn size(&self) -> u128 {
        (self.field.q() as u128).pow(self.dimension() as u32)
    }

    /// Encodes a message of length `k`.
    pub fn encode(&self, message: &[FieldElement]) -> Result<Word> {
        if message.len() != self.dimension() {
            return Err(Error::LengthMismatch { left: message.len(), right: self.dimension() });
        }
        let f = &self.field;
        let mut out = Word::zero(f, self.length);
        for (c, row) in message.iter().zip(&self.generator) {
            out = out.add(f, &row.scale(f, *c))?;
        }
        Ok(out)
    }

    /// Visits every codeword as canonical indices, in enumeration order.
    pub fn for_each_codeword(&self, mut visit: impl FnMut(&[usize])) -> Result<()> {
        let count = self.size();
        if count > ENUMERATION_LIMIT {
            return Err(Error::EnumerationBound { count, limit: ENUMERATION_LIMIT });
        }
        let f = &*self.field;
        let q = f.q();
        let k = self.dimension();
        let n = self.length;
        if k == 0 {
            visit(&vec![0; n]);
            return Ok(());
        }
        // multiples[i][c] = c * g_i
        let multiples: Vec<Vec<Vec<usize>>> = self
            .generator
            .iter()
            .map(|g| (0..q).map(|c| g.symbols().iter().map(|s| f.mul_idx(c, s.index())).collect()).collect())
            .collect();
        // prefix[i] = sum_{j >= i} m_j g_j ; prefix[k] = 0
        let mut digits = vec![0usize; k];
        let mut prefix = vec![vec![0usize; n]; k + 1];
        let mut word = vec![0usize; n];
        loop {
            for row0 in &multiples[0] {
                for ((w, &a), &b) in word.iter_mut().zip(&prefix[1]).zip(row0) {
                    *w = f.add_idx(a, b);
                }
                visit(&word);
            }
            // carry into the higher digits
            let mut i = 1;
            while i < k && digits[i] == q - 1 {
                digits[i] = 0;
                i += 1;
            }
            if i >= k {
                return Ok(());
            }
            digits[i] += 1;
            for level in (1..=i).rev() {
                let (lo, hi) = prefix.split_at_mut(level + 1);
                for ((dst, &a), &b) in lo[level].iter_mut().zip(&hi[0]).zip(&multiples[level][digits[level]]) {
                    *dst = f.add_idx(a, b);
                }
            }
        }
    }

    /// Cached codeword list in enumeration order.
    pub fn codewords(&self) -> Result<&[Word]> {
        if let Some(c) = self.codewords.get() {
            return Ok(c);
        }
        let count = self.size();
        if count > CODEWORD_CACHE_LIMIT {
            return Err(Error::EnumerationBound { count, limit: CODEWORD_CACHE_LIMIT });
        }
        let mut out = Vec::with_capacity(count as usize);
        self.for_each_codeword(|w| out.push(self.word_from_indices(w)))?;
        Ok(self.codewords.get_or_init(|| out))
    }

    fn word_from_indices(&self, w: &[usize]) -> Word {
        Word(w.iter().map(|&i| self.field.wrap(i)).collect())
    }

    pub fn contains(&self, w: &Word) -> Result<bool> {
        let h = dual(self)?;
        for row in h.generator() {
            if !row.dot(&self.field, w)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Exact minimum distance; equals the least nonzero weight.
    pub fn min_distance(&self) -> Result<usize> {
        if let Some(&d) = self.min_distance.get() {
            return Ok(d);
        }
        if self.dimension() == 0 {
            return Err(Error::TrivialCode);
        }
        let mut best = usize::MAX;
        self.for_each_codeword(|w| {
            let wt = w.iter().filter(|&&s| s != 0).count();
            if wt > 0 && wt < best {
                best = wt;
            }
        })?;
        Ok(*self.min_distance.get_or_init(|| best))
    }

    /// Same codeword set, compared by enumeration.
    pub fn same_codewords(&self, other: &LinearCode) -> Result<bool> {
        if self.length != other.length || self.size() != other.size() || *self.field != *other.field {
            return Ok(false);
        }
        let mut mine = HashSet::new();
        self.for_each_codeword(|w| {
            mine.insert(w.to_vec());
        })?;
        let mut all = true;
        other.for_each_codeword(|w| all &= mine.contains(w))?;
        Ok(all)
    }

    pub fn summary(&self, with_codewords: bool, with_weights: bool) -> Result<CodeSummary> {
        Ok(CodeSummary {
            length: self.length,
            k: self.dimension(),
            d: self.min_distance().ok(),
            generator: self.generator.iter().map(Word::indices).collect(),
            codewords: if with_codewords { Some(self.codewords()?.iter().map(Word::indices).collect()) } else { None },
            weights: if with_weights { Some(weight_distribution(self)?.counts) } else { None },
        })
    }
}

/// Reduced row echelon form in place; returns pivot columns.
fn row_reduce(field: &GaloisField, rows: &mut [Vec<FieldElement>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field.inv(rows[r][col]).expect("pivot is nonzero");
        for v in rows[r].iter_mut() {
            *v = field.mul(*v, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let factor = row[col];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = field.sub(*x, field.mul(factor, y));
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

fn rank(field: &GaloisField, rows: &[Word]) -> usize {
    let mut m: Vec<Vec<FieldElement>> = rows.iter().map(|w| w.0.clone()).collect();
    row_reduce(field, &mut m).len()
}

/// Orthogonal complement under `sum u_i v_i`.
pub fn dual(code: &LinearCode) -> Result<LinearCode> {
    let f = &code.field;
    let n = code.length;
    let mut m: Vec<Vec<FieldElement>> = code.generator.iter().map(|w| w.0.clone()).collect();
    let pivots = row_reduce(f, &mut m);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); n];
            v[fc] = f.one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = f.neg(row[fc]);
            }
            Word(v)
        })
        .collect();
    LinearCode::new(Arc::clone(f), basis, n)
}

/// Generator rows `g_1 = [1, 0, alpha, ..., alpha^(q-1)]`, `g_2 = [0, 1, 1, ..., 1]`.
pub fn simplex_generators(field: &GaloisField) -> (Word, Word) {
    let q = field.q();
    let mut g1 = vec![field.one(), field.zero()];
    g1.extend((1..q as u64).map(|k| field.alpha_power(k)));
    let mut g2 = vec![field.zero()];
    g2.extend(std::iter::repeat_n(field.one(), q));
    (Word(g1), Word(g2))
}

/// The `[q+1, 2, q]` simplex (doubly extended Reed-Solomon) code.
pub fn simplex_code(field: Arc<GaloisField>) -> LinearCode {
    let (g1, g2) = simplex_generators(&field);
    let n = field.q() + 1;
    LinearCode::new(field, vec![g1, g2], n).expect("simplex generators are independent")
}

/// The `[q+1, q-1, 3]` Hamming code, built as the dual of the simplex code.
pub fn hamming_code(field: Arc<GaloisField>) -> LinearCode {
    dual(&simplex_code(field)).expect("dual of a valid code")
}

/// `A_0 .. A_N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightDistribution {
    pub counts: Vec<u128>,
}

impl WeightDistribution {
    pub fn total(&self) -> u128 {
        self.counts.iter().sum()
    }
}

pub fn weight_distribution(code: &LinearCode) -> Result<WeightDistribution> {
    let mut counts = vec![0u128; code.length + 1];
    code.for_each_codeword(|w| counts[w.iter().filter(|&&s| s != 0).count()] += 1)?;
    Ok(WeightDistribution { counts })
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

fn checked_pow(base: u128, exp: usize) -> Result<u128> {
    base.checked_pow(exp as u32).ok_or_else(|| Error::InvalidParameters(format!("{base}^{exp} overflows")))
}

/// Hamming-ball volume `sum_{i <= t} C(N, i) (q-1)^i`.
pub fn sphere_volume(q: usize, length: usize, radius: usize) -> Result<u128> {
    (0..=radius.min(length))
        .try_fold(0u128, |acc, i| Ok(acc + binomial(length as u128, i as u128) * checked_pow(q as u128 - 1, i)?))
}

fn validate_bound_args(q: usize, length: usize, d: usize) -> Result<()> {
    if q < 2 || d == 0 || d > length {
        return Err(Error::InvalidParameters(format!("need q >= 2 and 1 <= d <= N (q={q}, N={length}, d={d})")));
    }
    Ok(())
}

/// `floor(q^N / V(N, floor((d-1)/2)))`.
pub fn hamming_bound(q: usize, length: usize, d: usize) -> Result<u128> {
    validate_bound_args(q, length, d)?;
    Ok(checked_pow(q as u128, length)? / sphere_volume(q, length, (d - 1) / 2)?)
}

/// `q^(N - d + 1)`.
pub fn singleton_bound(q: usize, length: usize, d: usize) -> Result<u128> {
    validate_bound_args(q, length, d)?;
    checked_pow(q as u128, length - d + 1)
}

/// Hamming-bound saturation at the true minimum distance.
pub fn is_perfect(code: &LinearCode) -> Result<bool> {
    let d = code.min_distance()?;
    let q = code.field.q();
    let n = code.length;
    Ok(code.size() * sphere_volume(q, n, (d - 1) / 2)? == checked_pow(q as u128, n)?)
}

/// Singleton-bound saturation at the true minimum distance.
pub fn is_mds(code: &LinearCode) -> Result<bool> {
    let d = code.min_distance()?;
    Ok(code.size() == singleton_bound(code.field.q(), code.length, d)?)
}

/// Slepian array: one row per coset, leader first.
#[derive(Debug)]
pub struct CosetTable {
    code: LinearCode,
    leaders: Vec<Word>,
    parity: LinearCode,
}

impl CosetTable {
    pub fn leaders(&self) -> &[Word] {
        &self.leaders
    }

    pub fn len(&self) -> usize {
        self.leaders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaders.is_empty()
    }

    /// Row `i`: `leader_i + c` over the codewords in enumeration order.
    pub fn row(&self, i: usize) -> Result<Vec<Word>> {
        let f = &self.code.field;
        let leader = &self.leaders[i];
        let mut out = Vec::new();
        self.code.for_each_codeword(|w| {
            out.push(Word(w.iter().zip(leader.symbols()).map(|(&c, &l)| f.add(f.wrap(c), l)).collect()));
        })?;
        Ok(out)
    }

    pub fn rows(&self) -> Result<Vec<Vec<Word>>> {
        (0..self.len()).map(|i| self.row(i)).collect()
    }

    /// Index of the coset containing `w`.
    pub fn coset_index(&self, w: &Word) -> Result<usize> {
        let s = syndrome_of(&self.parity, w)?;
        Ok(self
            .leaders
            .iter()
            .position(|l| syndrome_of(&self.parity, l).map(|t| t == s).unwrap_or(false))
            .expect("every syndrome has a leader"))
    }
}

fn syndrome_of(parity: &LinearCode, w: &Word) -> Result<Vec<usize>> {
    parity.generator().iter().map(|h| h.dot(&parity.field, w).map(|s| s.index())).collect()
}

/// Coset leaders of minimum weight, ties broken by smallest encoding.
pub fn cosets(code: &LinearCode) -> Result<CosetTable> {
    let f = &*code.field;
    let q = f.q();
    let n = code.length;
    let r = n - code.dimension();
    let count = (q as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
    if count > COSET_LIMIT {
        return Err(Error::EnumerationBound { count, limit: COSET_LIMIT });
    }
    let parity = dual(code)?;
    // columns[j][c] = syndrome contribution of symbol c at coordinate j
    let columns: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|j| {
            (0..q).map(|c| parity.generator().iter().map(|h| f.mul_idx(c, h.symbols()[j].index())).collect()).collect()
        })
        .collect();
    let encode = |s: &[usize]| s.iter().fold(0usize, |acc, &v| acc * q + v);

    let count = count as usize;
    let mut leaders: Vec<Option<Vec<usize>>> = vec![None; count];
    let mut found = 0usize;
    let mut word = vec![0usize; n];

    struct Search<'a> {
        f: &'a GaloisField,
        q: usize,
        n: usize,
        columns: &'a [Vec<Vec<usize>>],
    }

    // Lexicographic DFS over words of exactly `weight` nonzero symbols.
    #[allow(clippy::too_many_arguments)]
    fn visit(
        s: &Search,
        pos: usize,
        remaining: usize,
        syndrome: &[usize],
        word: &mut Vec<usize>,
        sink: &mut dyn FnMut(&[usize], &[usize]) -> bool,
    ) -> bool {
        if pos == s.n {
            return sink(word, syndrome);
        }
        for c in 0..s.q {
            if c == 0 && s.n - pos - 1 < remaining {
                continue;
            }
            if c != 0 && remaining == 0 {
                break;
            }
            word[pos] = c;
            let next: Vec<usize> = syndrome.iter().zip(&s.columns[pos][c]).map(|(&a, &b)| s.f.add_idx(a, b)).collect();
            if visit(s, pos + 1, remaining - usize::from(c != 0), &next, word, sink) {
                return true;
            }
        }
        false
    }

    let search = Search { f, q, n, columns: &columns };
    let zero_syndrome = vec![0usize; r];
    for weight in 0..=n {
        let mut sink = |w: &[usize], s: &[usize]| {
            let key = encode(s);
            if leaders[key].is_none() {
                leaders[key] = Some(w.to_vec());
                found += 1;
            }
            found == count
        };
        if visit(&search, 0, weight, &zero_syndrome, &mut word, &mut sink) {
            break;
        }
    }
    let mut leaders: Vec<Word> = leaders
        .into_iter()
        .map(|l| Word(l.expect("every coset is reached").iter().map(|&i| f.wrap(i)).collect()))
        .collect();
    leaders.sort_by_key(|l| (l.weight(), l.encoding(q)));
    Ok(CosetTable { code: code.clone(), leaders, parity })
}
