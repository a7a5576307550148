//! Dense bit-packed GF(2) matrices and Gaussian elimination.
//!
//! Rows are stored row-major, 64 columns per word: column `j` of a row is bit
//! `j % 64` of word `j / 64`. Pad bits past `cols` are kept zero.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;

use crate::algebra::AlgebraElement;
use crate::bits::{self, words_for, BitVector, WORD_BITS};
use crate::error::{Error, Result};
use crate::limits;

/// Order in which pivot columns are tried during elimination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotOrder {
    /// Lowest column first.
    #[default]
    Ascending,
    /// Highest column first.
    Descending,
}

/// Knobs for [`BitMatrix::echelon_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EliminationOptions {
    pub order: PivotOrder,
    /// Spread row updates of each pivot step over the rayon pool. The sequence
    /// of row operations is the same as the serial path.
    pub parallel: bool,
}

#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Uniformly random matrix.
    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(rows, cols);
        rng.fill(&mut m.data[..]);
        m.clear_padding();
        m
    }

    pub fn from_rows(cols: usize, rows: &[BitVector]) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    left: r.len(),
                    right: cols,
                });
            }
            m.row_mut(i).copy_from_slice(r.words());
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / WORD_BITS];
        let bit = 1u64 << (c % WORD_BITS);
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / WORD_BITS] ^= 1u64 << (c % WORD_BITS);
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub(crate) fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row_vector(&self, r: usize) -> BitVector {
        BitVector::from_words(self.cols, self.row(r).to_vec())
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Appends the rows of `other` below `self`.
    pub fn stack(&mut self, other: &BitMatrix) -> Result<()> {
        if other.cols != self.cols {
            return Err(Error::DimensionMismatch {
                left: self.cols,
                right: other.cols,
            });
        }
        self.data.extend_from_slice(&other.data);
        self.rows += other.rows;
        Ok(())
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.iter_row_ones(r) {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Column `j` becomes column `cols - 1 - j`.
    pub fn reverse_columns(&self) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, self.cols);
        if self.cols.is_multiple_of(WORD_BITS) {
            for r in 0..self.rows {
                let src = self.row(r);
                let dst = out.row_mut(r);
                for (d, s) in dst.iter_mut().zip(src.iter().rev()) {
                    *d = s.reverse_bits();
                }
            }
        } else {
            for r in 0..self.rows {
                for c in self.iter_row_ones(r) {
                    out.set(r, self.cols - 1 - c, true);
                }
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    pub fn iter_row_ones(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(r).iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let t = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(w * WORD_BITS + t)
                }
            })
        })
    }

    /// `M x` for a column vector `x` of length `cols`.
    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                left: x.len(),
                right: self.cols,
            });
        }
        let mut out = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            if bits::dot_words(self.row(r), x.words()) {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// `c M` for a row vector `c` of length `rows`.
    pub fn vec_mul(&self, c: &BitVector) -> Result<BitVector> {
        if c.len() != self.rows {
            return Err(Error::DimensionMismatch {
                left: c.len(),
                right: self.rows,
            });
        }
        let mut out = BitVector::zeros(self.cols);
        for r in c.iter_ones() {
            bits::xor_words(out.words_mut(), self.row(r));
        }
        Ok(out)
    }

    /// GF(2) rank with the default (ascending, serial) elimination.
    pub fn rank(&self) -> usize {
        self.clone().echelon().rank()
    }

    pub fn echelon(self) -> EchelonForm {
        self.echelon_with(EliminationOptions::default())
    }

    /// Row-reduces to echelon form, consuming the matrix.
    pub fn echelon_with(self, opts: EliminationOptions) -> EchelonForm {
        match opts.order {
            PivotOrder::Ascending => self.eliminate(opts.parallel),
            PivotOrder::Descending => {
                let cols = self.cols;
                let mut e = self.reverse_columns().eliminate(opts.parallel);
                e.reversed = true;
                for p in e.pivots.iter_mut() {
                    *p = cols - 1 - *p;
                }
                e
            }
        }
    }

    /// Forward elimination. The pivot for column `c` is the first remaining
    /// row with bit `c` set; it is swapped up to position `rank` and cleared
    /// from every row below it.
    ///
    /// Columns are processed one word at a time: word `w` of every remaining
    /// row is gathered into a contiguous buffer so pivot search and target
    /// selection never stride through the row-major data.
    fn eliminate(mut self, parallel: bool) -> EchelonForm {
        let rows = self.rows;
        let stride = self.stride;
        let mut pivots = Vec::new();
        let mut rank = 0usize;
        let mut colbuf = vec![0u64; rows];
        let mut pivot_row = vec![0u64; stride];
        let mut targets: Vec<usize> = Vec::new();

        for w in 0..stride {
            if rank == rows {
                break;
            }
            for (r, c) in colbuf.iter_mut().enumerate().skip(rank) {
                *c = self.data[r * stride + w];
            }
            let bits_here = (self.cols - w * WORD_BITS).min(WORD_BITS);
            for b in 0..bits_here {
                let bit = 1u64 << b;
                let Some(p) = (rank..rows).find(|&r| colbuf[r] & bit != 0) else {
                    continue;
                };
                if p != rank {
                    let (head, tail) = self.data.split_at_mut(p * stride);
                    head[rank * stride..(rank + 1) * stride]
                        .swap_with_slice(&mut tail[..stride]);
                    colbuf.swap(p, rank);
                }
                let tail_len = stride - w;
                pivot_row[..tail_len]
                    .copy_from_slice(&self.data[rank * stride + w..(rank + 1) * stride]);
                let pivot_word = colbuf[rank];
                let pivot_tail = &pivot_row[..tail_len];

                if parallel {
                    let below = &mut self.data[(rank + 1) * stride..rows * stride];
                    below
                        .par_chunks_mut(stride)
                        .zip(colbuf[rank + 1..rows].par_iter_mut())
                        .for_each(|(row, cw)| {
                            if *cw & bit != 0 {
                                bits::xor_words(&mut row[w..], pivot_tail);
                                *cw ^= pivot_word;
                            }
                        });
                } else {
                    targets.clear();
                    targets.extend((rank + 1..rows).filter(|&r| colbuf[r] & bit != 0));
                    for &r in &targets {
                        bits::xor_words(
                            &mut self.data[r * stride + w..(r + 1) * stride],
                            pivot_tail,
                        );
                        colbuf[r] ^= pivot_word;
                    }
                }
                pivots.push(w * WORD_BITS + b);
                rank += 1;
                if rank == rows {
                    break;
                }
            }
        }

        self.data.truncate(rank * stride);
        self.data.shrink_to_fit();
        self.rows = rank;
        EchelonForm {
            matrix: self,
            pivots,
            reversed: false,
            reduced: false,
        }
    }

    /// Right kernel `{x : M x = 0}`.
    pub fn kernel(&self) -> SubspaceBasis {
        self.clone().echelon().kernel_basis()
    }

    /// Left nullspace `{c : c M = 0}`. For a symmetric matrix this equals the kernel.
    pub fn nullspace(&self) -> SubspaceBasis {
        self.transpose().kernel()
    }

    /// Text serialisation: `gf2 <rows> <cols>` then one line of hex words per
    /// row, least significant word first.
    pub fn to_text(&self) -> String {
        let mut s = format!("gf2 {} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(|w| format!("{w:016x}")).collect();
            let _ = writeln!(s, "{}", line.join(" "));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 || parts[0] != "gf2" {
            return Err(Error::parse(hl + 1, "expected `gf2 <rows> <cols>`"));
        }
        let rows: usize = parts[1]
            .parse()
            .map_err(|_| Error::parse(hl + 1, "bad row count"))?;
        let cols: usize = parts[2]
            .parse()
            .map_err(|_| Error::parse(hl + 1, "bad column count"))?;
        let mut m = BitMatrix::zeros(rows, cols);
        let mut r = 0;
        for (ln, line) in lines {
            if r == rows {
                return Err(Error::parse(ln + 1, "too many rows"));
            }
            let words: Vec<u64> = line
                .split_whitespace()
                .map(|t| u64::from_str_radix(t, 16))
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::parse(ln + 1, "bad hex word"))?;
            if words.len() != m.stride {
                return Err(Error::parse(ln + 1, "wrong number of words"));
            }
            m.row_mut(r).copy_from_slice(&words);
            r += 1;
        }
        if r != rows {
            return Err(Error::parse(0, format!("expected {rows} rows, found {r}")));
        }
        let before = m.data.clone();
        m.clear_padding();
        if before != m.data {
            return Err(Error::parse(0, "nonzero pad bits"));
        }
        Ok(m)
    }

    fn clear_padding(&mut self) {
        let rem = self.cols % WORD_BITS;
        if rem == 0 || self.stride == 0 {
            return;
        }
        let mask = (1u64 << rem) - 1;
        for r in 0..self.rows {
            self.data[r * self.stride + self.stride - 1] &= mask;
        }
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(64) {
            let s: String = (0..self.cols.min(128))
                .map(|c| if self.get(r, c) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

/// Result of forward elimination: `rank` independent rows, row `i` has its
/// first set bit at `pivots[i]` (in the chosen pivot order).
#[derive(Clone, Debug)]
pub struct EchelonForm {
    matrix: BitMatrix,
    pivots: Vec<usize>,
    // rows are stored with reversed columns
    reversed: bool,
    // every pivot column is zero outside its own row
    reduced: bool,
}

impl EchelonForm {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols
    }

    /// Pivot columns in original column numbering.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Echelon rows in original column numbering.
    pub fn rows(&self) -> BitMatrix {
        if self.reversed {
            self.matrix.reverse_columns()
        } else {
            self.matrix.clone()
        }
    }

    fn work_pivot(&self, i: usize) -> usize {
        if self.reversed {
            self.matrix.cols - 1 - self.pivots[i]
        } else {
            self.pivots[i]
        }
    }

    /// Overwrites the pivot coordinates of `x` so that `M x = 0`, keeping the
    /// free coordinates as given.
    pub fn solve_kernel(&self, x: &mut BitVector) {
        assert_eq!(x.len(), self.matrix.cols);
        if self.reversed {
            let mut rev = BitVector::zeros(x.len());
            for i in x.iter_ones() {
                rev.set(x.len() - 1 - i, true);
            }
            self.solve_kernel_work(&mut rev);
            let mut out = BitVector::zeros(x.len());
            for i in rev.iter_ones() {
                out.set(x.len() - 1 - i, true);
            }
            *x = out;
        } else {
            self.solve_kernel_work(x);
        }
    }

    fn solve_kernel_work(&self, x: &mut BitVector) {
        for i in (0..self.rank()).rev() {
            let p = self.work_pivot(i);
            x.set(p, false);
            let v = bits::dot_words(self.matrix.row(i), x.words());
            x.set(p, v);
        }
    }

    /// Uniformly random element of the kernel.
    pub fn random_kernel_vector<R: Rng + ?Sized>(&self, rng: &mut R) -> BitVector {
        let n = self.matrix.cols;
        let mut words = vec![0u64; words_for(n)];
        rng.fill(&mut words[..]);
        let mut x = BitVector::from_words(n, words);
        self.solve_kernel(&mut x);
        x
    }

    /// Columns without a pivot, ascending.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.matrix.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.matrix.cols).filter(|&c| !is_pivot[c]).collect()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Back-eliminates to reduced row echelon form.
    pub fn into_reduced(mut self) -> Self {
        if self.reduced {
            return self;
        }
        let stride = self.matrix.stride;
        let mut pivot_row = vec![0u64; stride];
        for i in (0..self.rank()).rev() {
            let p = self.work_pivot(i);
            let (w, bit) = (p / WORD_BITS, 1u64 << (p % WORD_BITS));
            let tail = stride - w;
            pivot_row[..tail].copy_from_slice(&self.matrix.data[i * stride + w..(i + 1) * stride]);
            for j in 0..i {
                let row = &mut self.matrix.data[j * stride..(j + 1) * stride];
                if row[w] & bit != 0 {
                    bits::xor_words(&mut row[w..], &pivot_row[..tail]);
                }
            }
        }
        self.reduced = true;
        self
    }

    /// One kernel vector per free column (unit on that column).
    pub fn kernel_vectors(&self) -> Vec<BitVector> {
        if self.reduced && !self.reversed {
            return self.reduced_kernel_vectors();
        }
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut x = BitVector::zeros(self.matrix.cols);
                x.set(f, true);
                self.solve_kernel(&mut x);
                x
            })
            .collect()
    }

    // x_f = 1, x_{p_i} = R[i][f] for each free column f
    fn reduced_kernel_vectors(&self) -> Vec<BitVector> {
        let cols = self.matrix.cols;
        let free = self.free_columns();
        let mut slot = vec![usize::MAX; cols];
        let mut out: Vec<BitVector> = free
            .iter()
            .enumerate()
            .map(|(s, &f)| {
                slot[f] = s;
                let mut v = BitVector::zeros(cols);
                v.set(f, true);
                v
            })
            .collect();
        for (i, &p) in self.pivots.iter().enumerate() {
            for c in self.matrix.iter_row_ones(i) {
                if c != p {
                    out[slot[c]].set(p, true);
                }
            }
        }
        out
    }

    pub fn kernel_basis(&self) -> SubspaceBasis {
        SubspaceBasis::span(self.matrix.cols, &self.kernel_vectors())
            .expect("kernel vectors have the ambient length")
    }

    /// Basis of the row space.
    pub fn row_space(&self) -> SubspaceBasis {
        let rows = self.rows();
        let vectors: Vec<BitVector> = (0..rows.rows()).map(|r| rows.row_vector(r)).collect();
        SubspaceBasis::span(self.matrix.cols, &vectors).expect("rows have the ambient length")
    }
}

/// A subspace of `F_2^ambient` held as an echelon basis: each vector's lowest
/// set bit is its pivot, pivots strictly increase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    ambient: usize,
    vectors: Vec<BitVector>,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    pub fn zero(ambient: usize) -> Self {
        SubspaceBasis {
            ambient,
            vectors: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// Span of arbitrary vectors.
    pub fn span(ambient: usize, vectors: &[BitVector]) -> Result<Self> {
        let m = BitMatrix::from_rows(ambient, vectors)?;
        let e = m.echelon();
        let vectors = (0..e.rank()).map(|r| e.matrix.row_vector(r)).collect();
        Ok(SubspaceBasis {
            ambient,
            vectors,
            pivots: e.pivots,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[BitVector] {
        &self.vectors
    }

    /// Reduces `v` against the basis; zero iff `v` is in the span.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut v = v.clone();
        for (row, &p) in self.vectors.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVector) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch {
                left: v.len(),
                right: self.ambient,
            });
        }
        Ok(self.reduce(v).is_zero())
    }

    pub fn contains_subspace(&self, other: &SubspaceBasis) -> Result<bool> {
        self.check_ambient(other)?;
        for v in &other.vectors {
            if !self.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Mutual containment.
    pub fn same_span(&self, other: &SubspaceBasis) -> Result<bool> {
        Ok(self.dim() == other.dim() && self.contains_subspace(other)?)
    }

    fn check_ambient(&self, other: &SubspaceBasis) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &SubspaceBasis) -> Result<SubspaceBasis> {
        self.check_ambient(other)?;
        let all: Vec<BitVector> = self.vectors.iter().chain(&other.vectors).cloned().collect();
        SubspaceBasis::span(self.ambient, &all)
    }

    /// Zassenhaus: reduce `[a | a]` stacked on `[b | 0]`; rows whose left half
    /// vanishes carry a basis of the intersection in their right half.
    pub fn intersection(&self, other: &SubspaceBasis) -> Result<SubspaceBasis> {
        self.check_ambient(other)?;
        let n = self.ambient;
        let mut m = BitMatrix::zeros(self.dim() + other.dim(), 2 * n);
        for (i, v) in self.vectors.iter().enumerate() {
            for c in v.iter_ones() {
                m.set(i, c, true);
                m.set(i, n + c, true);
            }
        }
        for (j, v) in other.vectors.iter().enumerate() {
            for c in v.iter_ones() {
                m.set(self.dim() + j, c, true);
            }
        }
        let e = m.echelon();
        let mut out = Vec::new();
        for (r, &p) in e.pivots.iter().enumerate() {
            if p >= n {
                let mut v = BitVector::zeros(n);
                for c in e.matrix.iter_row_ones(r) {
                    v.set(c - n, true);
                }
                out.push(v);
            }
        }
        SubspaceBasis::span(n, &out)
    }

    pub fn as_matrix(&self) -> BitMatrix {
        BitMatrix::from_rows(self.ambient, &self.vectors).expect("basis vectors have ambient length")
    }
}

/// Matrix of multiplication by `f` in the monomial basis: row `v` holds the
/// coefficients of `x^v * f`, the XOR-translate of `f` by `v`.
pub fn mult_operator_matrix(f: &AlgebraElement) -> Result<BitMatrix> {
    limits::check_dense_arity(f.arity())?;
    let n = f.dimension();
    let mut m = BitMatrix::zeros(n, n);
    let src = f.coeffs().words().to_vec();
    for v in 0..n {
        bits::xor_translate_into(m.row_mut(v), &src, v as u64);
    }
    Ok(m)
}
