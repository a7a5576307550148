//! Arithmetic in the group algebra of `(Z/2)^n`, written as the quotient ring
//! `P_n = F_2[x_1, ..., x_n] / <x_i^2 - 1>`.
//!
//! A monomial `x_1^{s_1} ... x_n^{s_n}` is stored as the mask whose bit `i - 1`
//! is `s_i`, so the group operation on monomials is XOR of masks and an element
//! is a coefficient vector of length `2^n` indexed by mask.

use std::fmt;
use std::str::FromStr;

use crate::bits::{self, BitVector};
use crate::error::{Error, Result};
use crate::limits;

/// A group element of `(Z/2)^n`, i.e. a monomial of `P_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    /// The variable `x_index` (1-based).
    pub fn var(index: u32) -> Monomial {
        assert!(index >= 1, "variables are 1-indexed");
        Monomial(1 << (index - 1))
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn degree(self) -> u32 {
        self.0.count_ones()
    }

    /// 1-based indices of the variables present.
    pub fn variables(self) -> impl Iterator<Item = u32> {
        (0..64u32).filter(move |i| self.0 >> i & 1 == 1).map(|i| i + 1)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("1");
        }
        let mut first = true;
        for v in self.variables() {
            if !first {
                f.write_str("*")?;
            }
            write!(f, "x{v}")?;
            first = false;
        }
        Ok(())
    }
}

/// An element of `P_n`: a coefficient bit per monomial.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    arity: u32,
    coeffs: BitVector,
}

impl AlgebraElement {
    pub fn zero(arity: u32) -> Result<Self> {
        if arity == 0 {
            return Err(Error::Parameter("arity must be positive".into()));
        }
        limits::check_algebra_arity(arity)?;
        Ok(AlgebraElement {
            arity,
            coeffs: BitVector::zeros(1 << arity),
        })
    }

    pub fn one(arity: u32) -> Result<Self> {
        Self::monomial(arity, Monomial::ONE)
    }

    pub fn monomial(arity: u32, m: Monomial) -> Result<Self> {
        Self::from_monomials(arity, [m.0])
    }

    /// `x_index` in `P_arity`.
    pub fn variable(arity: u32, index: u32) -> Result<Self> {
        check_var(arity, index)?;
        Self::monomial(arity, Monomial::var(index))
    }

    /// `x_index + 1`, the generators of the augmentation ideal.
    pub fn var_plus_one(arity: u32, index: u32) -> Result<Self> {
        check_var(arity, index)?;
        Self::from_monomials(arity, [0, Monomial::var(index).0])
    }

    /// `(x_{i_1} + 1) ... (x_{i_t} + 1)`; the empty product is `1`.
    pub fn shifted_product(arity: u32, indices: &[u32]) -> Result<Self> {
        let mut mask = 0u64;
        for &i in indices {
            check_var(arity, i)?;
            mask |= 1 << (i - 1);
        }
        let mut e = Self::zero(arity)?;
        // expansion is the sum of all monomials on the variable set
        let mut sub = mask;
        loop {
            e.coeffs.flip(sub as usize);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mask;
        }
        Ok(e)
    }

    /// Sum of the given monomials; repeated masks cancel in pairs.
    pub fn from_monomials(arity: u32, masks: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut e = Self::zero(arity)?;
        for m in masks {
            if m >> arity != 0 {
                return Err(Error::MaskOutOfRange { mask: m, arity });
            }
            e.coeffs.flip(m as usize);
        }
        Ok(e)
    }

    pub fn from_coeffs(arity: u32, coeffs: BitVector) -> Result<Self> {
        limits::check_algebra_arity(arity)?;
        if arity == 0 {
            return Err(Error::Parameter("arity must be positive".into()));
        }
        if coeffs.len() != 1usize << arity {
            return Err(Error::DimensionMismatch {
                left: coeffs.len(),
                right: 1 << arity,
            });
        }
        Ok(AlgebraElement { arity, coeffs })
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    /// Number of monomials in the ambient ring, `2^n`.
    pub fn dimension(&self) -> usize {
        1 << self.arity
    }

    pub fn coeffs(&self) -> &BitVector {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> BitVector {
        self.coeffs
    }

    pub fn coeff(&self, m: Monomial) -> bool {
        self.coeffs.get(m.0 as usize)
    }

    pub fn constant_coeff(&self) -> bool {
        self.coeffs.get(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    /// Number of monomials with coefficient 1.
    pub fn weight(&self) -> usize {
        self.coeffs.count_ones()
    }

    /// Masks with coefficient 1, ascending.
    pub fn support(&self) -> Vec<u64> {
        self.coeffs.iter_ones().map(|i| i as u64).collect()
    }

    /// Bitwise OR of the support, i.e. the set of variables the element uses.
    pub fn variable_mask(&self) -> u64 {
        self.coeffs.iter_ones().fold(0, |acc, m| acc | m as u64)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: other.arity,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        out.coeffs.xor_assign(&other.coeffs);
        Ok(out)
    }

    /// Product in `P_n`: XOR-convolution of the coefficient vectors.
    ///
    /// Walks the support of the sparser operand and accumulates translates of
    /// the other, so the cost is `min(|a|, |b|) * 2^n / 64` word operations.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let (sparse, dense) = if self.weight() <= other.weight() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = BitVector::zeros(self.dimension());
        for u in sparse.coeffs.iter_ones() {
            bits::xor_translate_into(out.words_mut(), dense.coeffs.words(), u as u64);
        }
        Ok(AlgebraElement {
            arity: self.arity,
            coeffs: out,
        })
    }

    /// `m * self` for a monomial `m`.
    pub fn translate(&self, m: Monomial) -> Result<Self> {
        if m.0 >> self.arity != 0 {
            return Err(Error::MaskOutOfRange {
                mask: m.0,
                arity: self.arity,
            });
        }
        let mut out = BitVector::zeros(self.dimension());
        bits::xor_translate_into(out.words_mut(), self.coeffs.words(), m.0);
        Ok(AlgebraElement {
            arity: self.arity,
            coeffs: out,
        })
    }

    /// Coordinates in the shifted basis `prod (x_i + 1)^{s_i}`.
    pub fn to_b2(&self) -> B2Coordinates {
        let mut coords = self.coeffs.clone();
        superset_sum_transform(&mut coords, self.arity);
        B2Coordinates {
            arity: self.arity,
            coords,
        }
    }

    /// Rewrites `self` in the variables `x_{offset+1}, ...` of `P_arity`.
    pub fn embed(&self, arity: u32, offset: u32) -> Result<Self> {
        if offset + self.arity > arity {
            return Err(Error::Parameter(format!(
                "cannot embed arity {} at offset {offset} into arity {arity}",
                self.arity
            )));
        }
        Self::from_monomials(arity, self.support().into_iter().map(|m| m << offset))
    }

    /// Text form: `n=<arity>` header followed by the terms in ascending mask order.
    pub fn to_text(&self) -> String {
        format!("n={}\n{}\n", self.arity, self)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for m in self.coeffs.iter_ones() {
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "{}", Monomial(m as u64))?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P_{}[{}]", self.arity, self)
    }
}

impl FromStr for AlgebraElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_polynomial(s)
    }
}

fn check_var(arity: u32, index: u32) -> Result<()> {
    if index == 0 || index > arity {
        return Err(Error::Parameter(format!(
            "variable x{index} is outside P_{arity}"
        )));
    }
    Ok(())
}

/// Coefficients of an element in the basis `{prod (x_i + 1)^{s_i}}`, indexed by `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct B2Coordinates {
    arity: u32,
    coords: BitVector,
}

impl B2Coordinates {
    pub fn new(arity: u32, coords: BitVector) -> Result<Self> {
        if coords.len() != 1usize << arity {
            return Err(Error::DimensionMismatch {
                left: coords.len(),
                right: 1 << arity,
            });
        }
        Ok(B2Coordinates { arity, coords })
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn coords(&self) -> &BitVector {
        &self.coords
    }

    pub fn get(&self, subset: u64) -> bool {
        self.coords.get(subset as usize)
    }

    /// Subsets `s` with nonzero coefficient.
    pub fn support(&self) -> Vec<u64> {
        self.coords.iter_ones().map(|i| i as u64).collect()
    }

    pub fn from_b2(&self) -> AlgebraElement {
        let mut coeffs = self.coords.clone();
        superset_sum_transform(&mut coeffs, self.arity);
        AlgebraElement {
            arity: self.arity,
            coeffs,
        }
    }
}

/// `v[s] <- sum_{t ⊇ s} v[t]` over GF(2). The transform is an involution.
pub fn superset_sum_transform(v: &mut BitVector, arity: u32) {
    debug_assert_eq!(v.len(), 1usize << arity);
    const LOW: [u64; 6] = [
        0x5555_5555_5555_5555,
        0x3333_3333_3333_3333,
        0x0F0F_0F0F_0F0F_0F0F,
        0x00FF_00FF_00FF_00FF,
        0x0000_FFFF_0000_FFFF,
        0x0000_0000_FFFF_FFFF,
    ];
    let words = v.words_mut();
    for j in 0..arity.min(6) {
        let s = 1u32 << j;
        for w in words.iter_mut() {
            *w ^= (*w >> s) & LOW[j as usize];
        }
    }
    for j in 6..arity {
        let stride = 1usize << (j - 6);
        for w in 0..words.len() {
            if w & stride == 0 {
                words[w] ^= words[w | stride];
            }
        }
    }
}

/// Parses the polynomial text format.
///
/// ```text
/// # comment
/// n=5
/// x4*x5 + x4*x1*x2*x3 + 1
/// ```
///
/// Terms on all lines are summed. Without a header the arity is the largest
/// variable index (at least 1).
pub fn parse_polynomial(text: &str) -> Result<AlgebraElement> {
    let mut declared: Option<u32> = None;
    let mut terms: Vec<(usize, u64)> = Vec::new();
    let mut max_index = 0u32;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("");
        let compact: String = line.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            continue;
        }
        if let Some(rest) = compact.strip_prefix("n=") {
            if declared.is_some() {
                return Err(Error::parse(lineno, "duplicate arity header"));
            }
            let n: u32 = rest
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad arity `{rest}`")))?;
            if n == 0 {
                return Err(Error::parse(lineno, "arity must be positive"));
            }
            declared = Some(n);
            continue;
        }
        for term in compact.split('+') {
            if term.is_empty() || term == "0" {
                continue;
            }
            if term == "1" {
                terms.push((lineno, 0));
                continue;
            }
            let mut mask = 0u64;
            for var in term.split('*') {
                if var == "1" {
                    continue;
                }
                let digits = var
                    .strip_prefix('x')
                    .ok_or_else(|| Error::parse(lineno, format!("bad factor `{var}`")))?;
                let idx: u32 = digits
                    .parse()
                    .map_err(|_| Error::parse(lineno, format!("bad variable `{var}`")))?;
                if idx == 0 || idx > 64 {
                    return Err(Error::parse(lineno, format!("variable index {idx} out of range")));
                }
                // x_i^2 = 1
                mask ^= 1 << (idx - 1);
                max_index = max_index.max(idx);
            }
            terms.push((lineno, mask));
        }
    }

    let arity = match declared {
        Some(n) => {
            if max_index > n {
                return Err(Error::parse(
                    0,
                    format!("variable x{max_index} exceeds declared arity {n}"),
                ));
            }
            n
        }
        None => max_index.max(1),
    };
    AlgebraElement::from_monomials(arity, terms.into_iter().map(|(_, m)| m))
}

/// True iff `a` and `b` use disjoint sets of variables.
pub fn disjoint_variables(a: &AlgebraElement, b: &AlgebraElement) -> Result<bool> {
    a.check_same(b)?;
    Ok(a.variable_mask() & b.variable_mask() == 0)
}
