//! The three explicit triangle-free families and their proven rate bounds.
//!
//! Each element is a "short" product of shifted variables plus "long" terms
//! that cancel the short term's even-weight monomials, so the nonzero part of
//! the support only contains odd-weight monomials in the top variables.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, Monomial};
use crate::code::{graph_stats, ConnectionSet};
use crate::error::{Error, Result};
use crate::limits;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Hamming,
    SevenEighths,
    Generalized,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Hamming => "hamming",
            FamilyKind::SevenEighths => "seven_eighths",
            FamilyKind::Generalized => "generalized",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "hamming" => Ok(FamilyKind::Hamming),
            "seven_eighths" | "seveneighths" | "7/8" => Ok(FamilyKind::SevenEighths),
            "generalized" | "generalised" => Ok(FamilyKind::Generalized),
            other => Err(Error::Parameter(format!("unknown family `{other}`"))),
        }
    }
}

/// A constructed family member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyInstance {
    pub kind: FamilyKind,
    pub r: Option<u32>,
    pub k: Option<u32>,
    pub element: AlgebraElement,
    pub rate_lower: Rational,
    pub rate_upper: Rational,
    /// Variable blocks `B_1, ..., B_t` such that every product
    /// `prod_i (x_{b_i} + 1)` with `b_i ∈ B_i` annihilates the element.
    pub annihilator_blocks: Vec<Vec<u32>>,
}

impl FamilyInstance {
    pub fn arity(&self) -> u32 {
        self.element.arity()
    }

    pub fn connection_set(&self) -> ConnectionSet {
        ConnectionSet::from_element(&self.element).expect("family elements contain 1")
    }

    pub fn label(&self) -> String {
        match (self.r, self.k) {
            (Some(r), Some(k)) => format!("{} r={r} k={k}", self.kind),
            (Some(r), None) => format!("{} r={r}", self.kind),
            (None, Some(k)) => format!("{} k={k}", self.kind),
            (None, None) => self.kind.to_string(),
        }
    }

    pub fn sidecar(&self) -> FamilySidecar {
        FamilySidecar {
            family: self.kind,
            r: self.r,
            k: self.k,
            arity: self.arity(),
            vertices: 1u64 << self.arity(),
            degree: graph_stats(&self.connection_set()).degree,
            rate_lower: self.rate_lower,
            rate_upper: self.rate_upper,
            annihilator_blocks: self.annihilator_blocks.clone(),
        }
    }
}

/// JSON metadata written next to a family's polynomial file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySidecar {
    pub family: FamilyKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    pub arity: u32,
    pub vertices: u64,
    pub degree: u64,
    #[serde(with = "crate::rational")]
    pub rate_lower: Rational,
    #[serde(with = "crate::rational")]
    pub rate_upper: Rational,
    pub annihilator_blocks: Vec<Vec<u32>>,
}

fn check_arity(arity: u64) -> Result<u32> {
    if arity > limits::ALGEBRA_MAX_ARITY as u64 {
        return Err(Error::Resource {
            what: "algebra",
            arity: arity.min(u32::MAX as u64) as u32,
            limit: limits::ALGEBRA_MAX_ARITY,
        });
    }
    Ok(arity as u32)
}

fn range(lo: u32, hi: u32) -> Vec<u32> {
    (lo..=hi).collect()
}

/// `x^mask * prod_{i in vars} (x_i + 1)`.
fn shifted_term(arity: u32, mask: u64, vars: &[u32]) -> Result<AlgebraElement> {
    AlgebraElement::shifted_product(arity, vars)?.translate(Monomial(mask))
}

fn pow(base: Rational, e: u32) -> Rational {
    (0..e).fold(Rational::from_integer(1), |acc, _| acc * base)
}

/// `f_r = (x_r + 1)(x_{r+1} + 1) + x_r (x_1 + 1) ... (x_{r-1} + 1)` in `P_{r+1}`.
pub fn hamming_element(r: u32) -> Result<FamilyInstance> {
    if r < 2 {
        return Err(Error::Parameter(format!("hamming family needs r >= 2, got {r}")));
    }
    let n = check_arity(r as u64 + 1)?;
    let short = AlgebraElement::shifted_product(n, &[r, r + 1])?;
    let long = shifted_term(n, Monomial::var(r).0, &range(1, r - 1))?;
    Ok(FamilyInstance {
        kind: FamilyKind::Hamming,
        r: Some(r),
        k: None,
        element: short.add(&long)?,
        rate_lower: rational::ratio(3, 4) * rational::one_minus_pow2(r - 1),
        rate_upper: rational::ratio(3, 4),
        annihilator_blocks: vec![vec![r, r + 1], range(1, r - 1)],
    })
}

/// The rate-7/8 family `f_k` in `P_{3k+3}`.
pub fn seven_eighths_element(k: u32) -> Result<FamilyInstance> {
    if k < 1 {
        return Err(Error::Parameter(format!("seven_eighths family needs k >= 1, got {k}")));
    }
    let n = check_arity(3 * k as u64 + 3)?;
    let (a, b, c) = (3 * k + 1, 3 * k + 2, 3 * k + 3);
    let bit = |i: u32| Monomial::var(i).0;
    let mut f = AlgebraElement::shifted_product(n, &[a, b, c])?;
    f = f.add(&shifted_term(n, bit(a) | bit(b), &range(1, k))?)?;
    f = f.add(&shifted_term(n, bit(a) | bit(c), &range(k + 1, 2 * k))?)?;
    f = f.add(&shifted_term(n, bit(b) | bit(c), &range(2 * k + 1, 3 * k))?)?;
    let block_rate = rational::one_minus_pow2(k);
    Ok(FamilyInstance {
        kind: FamilyKind::SevenEighths,
        r: None,
        k: Some(k),
        element: f,
        rate_lower: rational::ratio(7, 8) * pow(block_rate, 3),
        rate_upper: rational::ratio(7, 8),
        annihilator_blocks: vec![
            vec![a, b, c],
            range(1, k),
            range(k + 1, 2 * k),
            range(2 * k + 1, 3 * k),
        ],
    })
}

/// `m = 2^{r-1} - 1`, the number of long terms of `f_{r,k}`.
pub fn long_term_count(r: u32) -> u64 {
    (1u64 << (r - 1)) - 1
}

/// Nonzero even-weight masks on `r` bits, ascending.
pub fn even_weight_masks(r: u32) -> Vec<u64> {
    (1..1u64 << r).filter(|m| m.count_ones() % 2 == 0).collect()
}

/// `f_{r,k} = prod_{j<=r} (x_{mk+j} + 1) + sum_i h_i prod_{j<=k} (x_{ik+j} + 1)`
/// in `P_{mk+r}`, with `h_i` the nonzero even-weight monomials in the top `r`
/// variables taken in ascending mask order.
pub fn generalized_element(r: u32, k: u32) -> Result<FamilyInstance> {
    if r < 2 || k < 1 {
        return Err(Error::Parameter(format!(
            "generalized family needs r >= 2 and k >= 1, got r={r} k={k}"
        )));
    }
    if r > limits::ALGEBRA_MAX_ARITY {
        return Err(Error::Resource {
            what: "algebra",
            arity: r,
            limit: limits::ALGEBRA_MAX_ARITY,
        });
    }
    let m = long_term_count(r);
    let n = check_arity(m * k as u64 + r as u64)?;
    let top = n - r;
    let mut f = AlgebraElement::shifted_product(n, &range(top + 1, n))?;
    let mut blocks = vec![range(top + 1, n)];
    for (i, h) in even_weight_masks(r).into_iter().enumerate() {
        let block = range(i as u32 * k + 1, i as u32 * k + k);
        f = f.add(&shifted_term(n, h << top, &block)?)?;
        blocks.push(block);
    }
    Ok(FamilyInstance {
        kind: FamilyKind::Generalized,
        r: Some(r),
        k: Some(k),
        element: f,
        rate_lower: rational::one_minus_pow2(r) * pow(rational::one_minus_pow2(k), m as u32),
        rate_upper: rational::one_minus_pow2(r),
        annihilator_blocks: blocks,
    })
}

/// Builds any family from its name and parameters.
pub fn build_family(kind: FamilyKind, r: Option<u32>, k: Option<u32>) -> Result<FamilyInstance> {
    let need = |v: Option<u32>, what: &str| {
        v.ok_or_else(|| Error::Parameter(format!("{kind} family needs --{what}")))
    };
    match kind {
        FamilyKind::Hamming => hamming_element(need(r, "r")?),
        FamilyKind::SevenEighths => seven_eighths_element(need(k, "k")?),
        FamilyKind::Generalized => generalized_element(need(r, "r")?, need(k, "k")?),
    }
}

pub fn family_bounds(instance: &FamilyInstance) -> (Rational, Rational) {
    (instance.rate_lower, instance.rate_upper)
}

/// Vertex and degree counts of `f_{r,k}` against the closed forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparsityReport {
    pub r: u32,
    pub k: u32,
    pub vertices: u64,
    /// `2^{r-1} + (2^{r-1} - 1) 2^k`, the closed form quoted for `|S|`.
    pub predicted_degree: u64,
    /// `2^{r-1} + (2^{r-1} - 1)(2^k - 1)`: each bare `h_i` cancels against
    /// the short term.
    pub corrected_degree: u64,
    /// Counted from the expanded element.
    pub actual_degree: u64,
    pub edges: u64,
    /// `ln |E| / ln N`.
    pub exponent_estimate: f64,
    /// `1 + 1 / (2^{r-1} - 1)`.
    pub limiting_exponent: f64,
}

pub fn sparsity_check(r: u32, k: u32) -> Result<SparsityReport> {
    let inst = generalized_element(r, k)?;
    let st = graph_stats(&inst.connection_set());
    let half = 1u64 << (r - 1);
    let m = half - 1;
    Ok(SparsityReport {
        r,
        k,
        vertices: st.vertices,
        predicted_degree: half + m * (1u64 << k),
        corrected_degree: half + m * ((1u64 << k) - 1),
        actual_degree: st.degree,
        edges: st.edges,
        exponent_estimate: (st.edges as f64).ln() / (st.vertices as f64).ln(),
        limiting_exponent: 1.0 + 1.0 / m as f64,
    })
}
