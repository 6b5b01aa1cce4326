//! Dense linear algebra over GF(2).
//!
//! Matrices are stored row-major with each row packed into `u64` words, so
//! row operations during elimination are word-wide XORs. The same matrix is
//! read as a real zero-one matrix by the LP-based modules through
//! [`Gf2Matrix::to_real_rows`].

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A bit vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Vector {
    len: usize,
    words: Vec<u64>,
}

impl Gf2Vector {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; words_for(len)] }
    }

    /// Builds a vector from 0/1 entries; anything nonzero counts as one.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &Gf2Vector) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Gf2Vector) -> Gf2Vector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Parity of the bitwise AND with `other`.
    pub fn dot(&self, other: &Gf2Vector) -> bool {
        assert_eq!(self.len, other.len);
        let ones: u32 = self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum();
        ones % 2 == 1
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    pub fn to_real(&self) -> Vec<f64> {
        (0..self.len).map(|i| if self.get(i) { 1.0 } else { 0.0 }).collect()
    }

    /// Compares entry sequences starting from index 0, with 0 < 1.
    pub fn cmp_lex(&self, other: &Gf2Vector) -> Ordering {
        for i in 0..self.len.min(other.len) {
            match (self.get(i), other.get(i)) {
                (false, true) => return Ordering::Less,
                (true, false) => return Ordering::Greater,
                _ => {}
            }
        }
        self.len.cmp(&other.len)
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "Gf2Vector({s})")
    }
}

/// A binary matrix, read either over GF(2) or as a real zero-one matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter(format!("matrix dimensions must be positive, got {rows}x{cols}")));
        }
        let stride = words_for(cols);
        Ok(Self { rows, cols, stride, bits: vec![0; rows * stride] })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, true);
        }
        Ok(m)
    }

    /// Builds a matrix from rows of 0/1 entries.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut out = Self::zeros(m, n)?;
        for (j, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.len() });
            }
            for (i, &b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => out.set(j, i, true),
                    _ => return Err(Error::InvalidParameter(format!("entry ({j}, {i}) = {b} is not binary"))),
                }
            }
        }
        Ok(out)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.bits[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "({r}, {c}) out of range");
        let mask = 1u64 << (c % WORD);
        let w = &mut self.bits[r * self.stride + c / WORD];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.bits[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> Gf2Vector {
        Gf2Vector { len: self.cols, words: self.row_words(r).to_vec() }
    }

    pub fn column(&self, c: usize) -> Gf2Vector {
        let mut v = Gf2Vector::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    /// Column indices of the ones in row `r`, ascending.
    pub fn row_support(&self, r: usize) -> Vec<usize> {
        (0..self.cols).filter(|&c| self.get(r, c)).collect()
    }

    /// Row indices of the ones in column `c`, ascending.
    pub fn col_support(&self, c: usize) -> Vec<usize> {
        (0..self.rows).filter(|&r| self.get(r, c)).collect()
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn col_weight(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c)).count()
    }

    pub fn to_bit_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c) as u8).collect()).collect()
    }

    /// The zero-one matrix as real rows.
    pub fn to_real_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| if self.get(r, c) { 1.0 } else { 0.0 }).collect())
            .collect()
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.cols, self.rows).expect("positive dimensions");
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// Number of ones in the matrix.
    pub fn ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn xor_rows(&mut self, dst: usize, src: usize) {
        let s = self.stride;
        for w in 0..s {
            let v = self.bits[src * s + w];
            self.bits[dst * s + w] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        for w in 0..s {
            self.bits.swap(a * s + w, b * s + w);
        }
    }

    /// Reduced row echelon form; returns the pivot column of each nonzero row.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(r, p);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_rows(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// A basis of the GF(2) nullspace, one vector per free column.
    pub fn nullspace_basis(&self) -> Vec<Gf2Vector> {
        let mut r = self.clone();
        let pivots = r.rref_in_place();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = Gf2Vector::unit(self.cols, free);
                for (row, &p) in pivots.iter().enumerate() {
                    if r.get(row, free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// All codewords of the code with this parity-check matrix, walked in
    /// Gray-code order over the nullspace basis.
    pub fn enumerate_codewords(&self, cap: u128) -> Result<Vec<Gf2Vector>> {
        let basis = self.nullspace_basis();
        let dim = basis.len();
        if dim >= 127 || (1u128 << dim) > cap {
            return Err(Error::CapExceeded { needed: 1u128.checked_shl(dim as u32).unwrap_or(u128::MAX), cap });
        }
        let count = 1usize << dim;
        let mut out = Vec::with_capacity(count);
        let mut current = Gf2Vector::zeros(self.cols);
        out.push(current.clone());
        for t in 1..count {
            current.xor_assign(&basis[t.trailing_zeros() as usize]);
            out.push(current.clone());
        }
        Ok(out)
    }

    /// `H v mod 2`.
    pub fn syndrome(&self, v: &Gf2Vector) -> Result<Gf2Vector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        let mut s = Gf2Vector::zeros(self.rows);
        for r in 0..self.rows {
            let ones: u32 = self.row_words(r).iter().zip(&v.words).map(|(a, b)| (a & b).count_ones()).sum();
            if ones % 2 == 1 {
                s.set(r, true);
            }
        }
        Ok(s)
    }

    pub fn is_codeword(&self, v: &Gf2Vector) -> bool {
        self.syndrome(v).map(|s| s.is_zero()).unwrap_or(false)
    }

    /// 64-bit fingerprint used to tie pseudo-codewords to the matrix they live in.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut feed = |x: u64| {
            h ^= x;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        };
        feed(self.rows as u64);
        feed(self.cols as u64);
        for &w in &self.bits {
            feed(w);
        }
        h
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let s: String = (0..self.cols).map(|c| if self.get(r, c) { '1' } else { '0' }).collect();
            writeln!(f, "  {s}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn rank_examples() {
        assert_eq!(corpus::hamming_7_4().rank(), 3);
        assert_eq!(Gf2Matrix::identity(4).unwrap().rank(), 4);
        assert_eq!(Gf2Matrix::zeros(2, 5).unwrap().rank(), 0);
    }

    #[test]
    fn nullspace_examples() {
        let pair = Gf2Matrix::from_rows(&[[1u8, 1]]).unwrap();
        assert_eq!(pair.nullspace_basis(), vec![Gf2Vector::from_bits(&[1, 1])]);
        assert!(Gf2Matrix::identity(3).unwrap().nullspace_basis().is_empty());
        let h = corpus::hamming_7_4();
        let basis = h.nullspace_basis();
        assert_eq!(basis.len(), 4);
        for b in &basis {
            assert!(h.syndrome(b).unwrap().is_zero());
        }
    }

    #[test]
    fn codeword_enumeration() {
        let pair = Gf2Matrix::from_rows(&[[1u8, 1]]).unwrap();
        let mut words: Vec<_> = pair.enumerate_codewords(16).unwrap().iter().map(|w| w.to_bits()).collect();
        words.sort();
        assert_eq!(words, vec![vec![0, 0], vec![1, 1]]);

        let h = corpus::hamming_7_4();
        let words = h.enumerate_codewords(16).unwrap();
        assert_eq!(words.len(), 16);
        let min = words.iter().filter(|w| !w.is_zero()).map(|w| w.weight()).min();
        assert_eq!(min, Some(3));
        assert!(matches!(h.enumerate_codewords(8), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn syndrome_examples() {
        let h = corpus::hamming_7_4();
        assert!(h.syndrome(&Gf2Vector::zeros(7)).unwrap().is_zero());
        for i in 0..7 {
            assert_eq!(h.syndrome(&Gf2Vector::unit(7, i)).unwrap(), h.column(i));
        }
        let words = h.enumerate_codewords(16).unwrap();
        assert!(h.syndrome(&words[3].xor(&words[9])).unwrap().is_zero());
        assert!(matches!(h.syndrome(&Gf2Vector::zeros(6)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn rejects_non_binary_and_empty() {
        assert!(Gf2Matrix::from_rows(&[[1u8, 2]]).is_err());
        assert!(Gf2Matrix::zeros(0, 3).is_err());
    }

    #[test]
    fn lexicographic_order() {
        let a = Gf2Vector::from_bits(&[0, 1, 1]);
        let b = Gf2Vector::from_bits(&[1, 0, 0]);
        assert_eq!(a.cmp_lex(&b), Ordering::Less);
    }

    #[test]
    fn wide_rows_cross_word_boundary() {
        let mut m = Gf2Matrix::zeros(2, 130).unwrap();
        m.set(0, 0, true);
        m.set(0, 129, true);
        m.set(1, 64, true);
        m.set(1, 129, true);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.nullspace_basis().len(), 128);
        for b in m.nullspace_basis() {
            assert!(m.syndrome(&b).unwrap().is_zero());
        }
    }
}
