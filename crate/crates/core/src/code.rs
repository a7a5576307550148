//! Cayley-graph storage codes.
//!
//! A connection set `S'` (always containing 0) defines the graph
//! `Cay(F_2^n, S' \ {0})` and its coset matrix `H = A + I` with
//! `H[u][v] = 1` iff `u ^ v ∈ S'`. The storage code is `{c : c H = 0}`:
//! every coordinate equals the XOR of its neighbours.

use std::fmt::Write as _;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraElement;
use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::limits;
use crate::matrix::{BitMatrix, EchelonForm, EliminationOptions};
use crate::rational::{self, Rational};

/// Default largest row-subset size tried by [`necessary_conditions`].
pub const DEFAULT_MAX_K: u32 = 3;

/// The support `S' = S ∪ {0}` of `f_S`, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionSet {
    arity: u32,
    masks: Vec<u64>,
}

impl ConnectionSet {
    /// Duplicates are merged. `0` must be present.
    pub fn new(arity: u32, masks: impl IntoIterator<Item = u64>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::Parameter("arity must be positive".into()));
        }
        limits::check_algebra_arity(arity)?;
        let mut masks: Vec<u64> = masks.into_iter().collect();
        if let Some(&m) = masks.iter().find(|&&m| m >> arity != 0) {
            return Err(Error::MaskOutOfRange { mask: m, arity });
        }
        masks.sort_unstable();
        masks.dedup();
        if masks.is_empty() {
            return Err(Error::EmptySet);
        }
        if masks[0] != 0 {
            return Err(Error::MissingZero);
        }
        Ok(ConnectionSet { arity, masks })
    }

    /// `S'` = support of `f`.
    pub fn from_element(f: &AlgebraElement) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::EmptySet);
        }
        if !f.constant_coeff() {
            return Err(Error::MissingZero);
        }
        Ok(ConnectionSet {
            arity: f.arity(),
            masks: f.support(),
        })
    }

    pub fn to_element(&self) -> AlgebraElement {
        AlgebraElement::from_monomials(self.arity, self.masks.iter().copied())
            .expect("masks validated on construction")
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn vertex_count(&self) -> usize {
        1 << self.arity
    }

    /// All of `S'`, including 0.
    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    /// `S` without the zero vector.
    pub fn nonzero(&self) -> &[u64] {
        &self.masks[1..]
    }

    pub fn contains(&self, m: u64) -> bool {
        self.masks.binary_search(&m).is_ok()
    }

    /// Neighbours of vertex `v` in the Cayley graph.
    pub fn neighbors(&self, v: u64) -> impl Iterator<Item = u64> + '_ {
        self.nonzero().iter().map(move |&w| v ^ w)
    }

    /// Parses the connection-set file: `n=<int>` header, one hex mask per line,
    /// `#` comments.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut arity = None;
        let mut masks = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let compact: String = line.chars().filter(|c| !c.is_whitespace()).collect();
            if let Some(rest) = compact.strip_prefix("n=") {
                if arity.is_some() {
                    return Err(Error::parse(i + 1, "duplicate arity header"));
                }
                arity = Some(
                    rest.parse::<u32>()
                        .map_err(|_| Error::parse(i + 1, format!("bad arity `{rest}`")))?,
                );
                continue;
            }
            let digits = compact
                .strip_prefix("0x")
                .or_else(|| compact.strip_prefix("0X"))
                .unwrap_or(&compact);
            let m = u64::from_str_radix(digits, 16)
                .map_err(|_| Error::parse(i + 1, format!("bad hex mask `{compact}`")))?;
            masks.push(m);
        }
        let arity = arity.ok_or_else(|| Error::parse(0, "missing `n=<int>` header"))?;
        ConnectionSet::new(arity, masks)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("n={}\n", self.arity);
        for m in &self.masks {
            let _ = writeln!(s, "{m:x}");
        }
        s
    }
}

/// True iff no three distinct nonzero masks XOR to zero, i.e. the Cayley
/// graph has no triangle.
pub fn is_triangle_free(s: &ConnectionSet) -> bool {
    let mut member = BitVector::zeros(s.vertex_count());
    for &m in s.masks() {
        member.set(m as usize, true);
    }
    let nz = s.nonzero();
    for (i, &a) in nz.iter().enumerate() {
        for &b in &nz[i + 1..] {
            let c = a ^ b;
            // c != 0 since a != b; c == a or b would force the other to be 0
            if member.get(c as usize) {
                return false;
            }
        }
    }
    true
}

/// Coset matrix `H`, built row by row from `S'`: row `v` has ones at `v ^ w`.
pub fn coset_matrix(s: &ConnectionSet) -> Result<BitMatrix> {
    limits::check_dense_arity(s.arity)?;
    let n = s.vertex_count();
    let mut h = BitMatrix::zeros(n, n);
    for v in 0..n {
        for &w in s.masks() {
            h.set(v, v ^ w as usize, true);
        }
    }
    Ok(h)
}

/// Vertex count, degree and edge count of the Cayley graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub vertices: u64,
    pub degree: u64,
    pub edges: u64,
}

pub fn graph_stats(s: &ConnectionSet) -> GraphStats {
    let vertices = 1u64 << s.arity;
    let degree = s.masks.len() as u64 - 1;
    GraphStats {
        vertices,
        degree,
        edges: vertices * degree / 2,
    }
}

/// Upper bound on the rate forced by the parity conditions on the matrix `M`
/// whose columns are the nonzero masks, together with the rows that force it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CeilingWitness {
    /// Size of the row subset; the ceiling is `(2^k - 1) / 2^k`.
    pub k: u32,
    /// 1-based variable indices of the offending rows (empty when the column
    /// count itself is even).
    pub rows: Vec<u32>,
    #[serde(with = "crate::rational")]
    pub ceiling: Rational,
}

/// Tightest ceiling implied by the necessary conditions, trying row subsets of
/// size up to `max_k`:
///
/// * an even number of columns or a row of odd weight caps the rate at 1/2;
/// * `k` rows with an odd number of common columns cap it at `(2^k - 1)/2^k`.
pub fn necessary_condition_witness(s: &ConnectionSet, max_k: u32) -> Option<CeilingWitness> {
    let cols = s.nonzero();
    if cols.len().is_multiple_of(2) {
        return Some(CeilingWitness {
            k: 1,
            rows: vec![],
            ceiling: rational::one_minus_pow2(1),
        });
    }
    let max_k = max_k.max(1).min(s.arity);
    for k in 1..=max_k {
        for rows in (0..s.arity).combinations(k as usize) {
            let sel: u64 = rows.iter().fold(0, |acc, &r| acc | 1 << r);
            let common = cols.iter().filter(|&&m| m & sel == sel).count();
            if common % 2 == 1 {
                return Some(CeilingWitness {
                    k,
                    rows: rows.iter().map(|r| r + 1).collect(),
                    ceiling: rational::one_minus_pow2(k),
                });
            }
        }
    }
    None
}

pub fn necessary_conditions(s: &ConnectionSet, max_k: u32) -> Option<Rational> {
    necessary_condition_witness(s, max_k).map(|w| w.ceiling)
}

/// Rate of a code, exact and as a float.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rate {
    #[serde(with = "crate::rational")]
    pub exact: Rational,
    pub float: f64,
}

impl Rate {
    pub fn new(exact: Rational) -> Self {
        Rate {
            exact,
            float: rational::to_f64(&exact),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeReport {
    pub arity: u32,
    pub code_length: u64,
    pub code_dim: u64,
    pub rate: Rate,
    pub triangle_free: bool,
    pub degree: u64,
    pub edge_count: u64,
    #[serde(with = "crate::rational::option")]
    pub ceiling_from_necessary_conditions: Option<Rational>,
    /// Set when `S' = {0}`: no edges, `H = I`.
    pub edgeless: bool,
}

/// A connection set together with the echelon form of its coset matrix.
#[derive(Debug, Clone)]
pub struct StorageCode {
    set: ConnectionSet,
    echelon: EchelonForm,
}

impl StorageCode {
    pub fn build(set: ConnectionSet) -> Result<Self> {
        Self::build_with(set, EliminationOptions::default())
    }

    pub fn build_with(set: ConnectionSet, opts: EliminationOptions) -> Result<Self> {
        let echelon = coset_matrix(&set)?.echelon_with(opts);
        Ok(StorageCode { set, echelon })
    }

    pub fn set(&self) -> &ConnectionSet {
        &self.set
    }

    pub fn echelon(&self) -> &EchelonForm {
        &self.echelon
    }

    /// Rank of `H`, the dimension of the dual code.
    pub fn check_rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn dimension(&self) -> usize {
        self.set.vertex_count() - self.echelon.rank()
    }

    pub fn rate(&self) -> Rational {
        rational::ratio(self.dimension() as u64, self.set.vertex_count() as u64)
    }

    pub fn report(&self, max_k: u32) -> CodeReport {
        let stats = graph_stats(&self.set);
        CodeReport {
            arity: self.set.arity,
            code_length: stats.vertices,
            code_dim: self.dimension() as u64,
            rate: Rate::new(self.rate()),
            triangle_free: is_triangle_free(&self.set),
            degree: stats.degree,
            edge_count: stats.edges,
            ceiling_from_necessary_conditions: necessary_conditions(&self.set, max_k),
            edgeless: stats.degree == 0,
        }
    }

    /// Uniform random codeword.
    pub fn random_codeword<R: Rng + ?Sized>(&self, rng: &mut R) -> BitVector {
        // H is symmetric, so {c : cH = 0} is its right kernel
        self.echelon.random_kernel_vector(rng)
    }

    /// `count` codewords from a ChaCha8 stream seeded with `seed`.
    pub fn sample_codewords(&self, count: usize, seed: u64) -> Vec<BitVector> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| self.random_codeword(&mut rng)).collect()
    }

    /// A basis of the code, one vector per free column of `H`.
    pub fn basis(&self) -> Vec<BitVector> {
        self.echelon.kernel_vectors()
    }
}

/// Builds the code and reports its rate.
pub fn code_rate(s: &ConnectionSet, max_k: u32) -> Result<CodeReport> {
    Ok(StorageCode::build(s.clone())?.report(max_k))
}

/// XOR of `word` over the neighbours of `v` (the value `v` is recovered as).
pub fn neighbor_sum(s: &ConnectionSet, word: &BitVector, v: u64) -> bool {
    s.neighbors(v)
        .fold(false, |acc, u| acc ^ word.get(u as usize))
}

/// True iff every coordinate equals the XOR of its neighbours (`c H = 0`).
pub fn check_storage_property(s: &ConnectionSet, c: &BitVector) -> Result<bool> {
    if c.len() != s.vertex_count() {
        return Err(Error::DimensionMismatch {
            left: c.len(),
            right: s.vertex_count(),
        });
    }
    Ok((0..s.vertex_count() as u64).all(|v| neighbor_sum(s, c, v) == c.get(v as usize)))
}

/// Recovers coordinate `v` of codeword `c` from its neighbours.
pub fn repair_coordinate(s: &ConnectionSet, c: &BitVector, v: u64) -> Result<bool> {
    if v as usize >= s.vertex_count() {
        return Err(Error::MaskOutOfRange {
            mask: v,
            arity: s.arity,
        });
    }
    if !check_storage_property(s, c)? {
        return Err(Error::RepairUnsound);
    }
    Ok(neighbor_sum(s, c, v))
}

/// Edge list, one `u v` line (decimal, `u < v`) per edge.
pub fn edge_list(s: &ConnectionSet) -> String {
    let mut out = String::new();
    for u in 0..s.vertex_count() as u64 {
        for v in s.neighbors(u).filter(|&v| v > u) {
            let _ = writeln!(out, "{u} {v}");
        }
    }
    out
}

/// DIMACS graph format with 1-based vertices.
pub fn dimacs(s: &ConnectionSet) -> String {
    let st = graph_stats(s);
    let mut out = format!(
        "c Cayley graph on F_2^{} with {} generators\np edge {} {}\n",
        s.arity,
        st.degree,
        st.vertices,
        st.edges
    );
    for u in 0..st.vertices {
        for v in s.neighbors(u).filter(|&v| v > u) {
            let _ = writeln!(out, "e {} {}", u + 1, v + 1);
        }
    }
    out
}

/// One bit string per codeword, coordinate 0 first.
pub fn codewords_text(words: &[BitVector]) -> String {
    let mut out = String::new();
    for w in words {
        out.push_str(&w.to_bit_string());
        out.push('\n');
    }
    out
}
