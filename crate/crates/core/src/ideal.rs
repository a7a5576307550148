//! Ideals and annihilators of `P_n`, computed from multiplication-operator
//! spans, and an executable check of the ideal-rate identities used to bound
//! the family rates.

use std::collections::HashMap;

use itertools::Itertools;
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::limits;
use crate::matrix::{mult_operator_matrix, BitMatrix, SubspaceBasis};
use crate::rational::{self, Rational};

/// Largest arity accepted by [`verify_ideal_identities`].
pub const VERIFY_MAX_ARITY: u32 = 12;

/// Default seed for partition sampling.
pub const DEFAULT_SEED: u64 = 0x5EED_2024;

/// Random partitions checked per arity.
pub const DEFAULT_PARTITIONS: usize = 50;

/// The ideal generated by a list of elements: the span of `m * g` over all
/// monomials `m` and generators `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealHandle {
    arity: u32,
    generators: Vec<AlgebraElement>,
}

impl IdealHandle {
    pub fn new(arity: u32, generators: Vec<AlgebraElement>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.arity() != arity) {
            return Err(Error::ArityMismatch {
                left: arity,
                right: g.arity(),
            });
        }
        Ok(IdealHandle { arity, generators })
    }

    pub fn principal(f: AlgebraElement) -> Self {
        IdealHandle {
            arity: f.arity(),
            generators: vec![f],
        }
    }

    /// `<x_i + 1>`.
    pub fn shifted_variable(arity: u32, i: u32) -> Result<Self> {
        Ok(Self::principal(AlgebraElement::var_plus_one(arity, i)?))
    }

    /// `sum_{i in vars} <x_i + 1>`.
    pub fn shifted_sum(arity: u32, vars: &[u32]) -> Result<Self> {
        let gens = vars
            .iter()
            .map(|&i| AlgebraElement::var_plus_one(arity, i))
            .collect::<Result<_>>()?;
        Self::new(arity, gens)
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn generators(&self) -> &[AlgebraElement] {
        &self.generators
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

    /// Generated by all pairwise products of generators.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut gens = Vec::with_capacity(self.generators.len() * other.generators.len());
        for a in &self.generators {
            for b in &other.generators {
                gens.push(a.mul(b)?);
            }
        }
        Ok(IdealHandle {
            arity: self.arity,
            generators: gens,
        })
    }

    /// Generated by the union of the generator lists.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Ok(IdealHandle {
            arity: self.arity,
            generators: gens,
        })
    }

    /// Echelon basis of the ideal as a subspace of `F_2^{2^n}`.
    pub fn span(&self) -> Result<SubspaceBasis> {
        limits::check_dense_arity(self.arity)?;
        let dim = 1usize << self.arity;
        let mut stacked = BitMatrix::zeros(0, dim);
        for g in self.generators.iter().filter(|g| !g.is_zero()) {
            stacked.stack(&mult_operator_matrix(g)?)?;
        }
        Ok(stacked.echelon().row_space())
    }

    pub fn dim(&self) -> Result<usize> {
        ideal_dim(self)
    }

    pub fn rate(&self) -> Result<Rational> {
        Ok(rational::ratio(self.dim()? as u64, 1u64 << self.arity))
    }

    pub fn contains(&self, f: &AlgebraElement) -> Result<bool> {
        if f.arity() != self.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: f.arity(),
            });
        }
        self.span()?.contains(f.coeffs())
    }
}

/// Dimension of the ideal: rank of the stacked multiplication operators.
pub fn ideal_dim(ideal: &IdealHandle) -> Result<usize> {
    limits::check_dense_arity(ideal.arity)?;
    let dim = 1usize << ideal.arity;
    let mut stacked = BitMatrix::zeros(0, dim);
    for g in ideal.generators.iter().filter(|g| !g.is_zero()) {
        stacked.stack(&mult_operator_matrix(g)?)?;
    }
    Ok(stacked.echelon().rank())
}

/// `dim ann(f)`: nullity of the multiplication-by-`f` operator.
pub fn annihilator_dim(f: &AlgebraElement) -> Result<usize> {
    let m = mult_operator_matrix(f)?;
    Ok(f.dimension() - m.echelon().rank())
}

/// `ann(f)` as a subspace.
pub fn annihilator_span(f: &AlgebraElement) -> Result<SubspaceBasis> {
    // the operator is symmetric: left and right kernels coincide
    Ok(mult_operator_matrix(f)?.kernel())
}

/// True iff `candidate * f = 0`.
pub fn annihilator_contains(f: &AlgebraElement, candidate: &AlgebraElement) -> Result<bool> {
    Ok(f.mul(candidate)?.is_zero())
}

pub fn ideal_product(a: &IdealHandle, b: &IdealHandle) -> Result<IdealHandle> {
    a.product(b)
}

pub fn ideal_sum(a: &IdealHandle, b: &IdealHandle) -> Result<IdealHandle> {
    a.sum(b)
}

/// `prod_i (sum_{j in B_i} <x_j + 1>)` for variable blocks `B_i`.
pub fn block_product_ideal(arity: u32, blocks: &[Vec<u32>]) -> Result<IdealHandle> {
    let mut acc = IdealHandle::principal(AlgebraElement::one(arity)?);
    for b in blocks {
        acc = acc.product(&IdealHandle::shifted_sum(arity, b)?)?;
    }
    Ok(acc)
}

/// Outcome of one identity family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemReport {
    pub item: String,
    pub description: String,
    pub passed: bool,
    pub cases: usize,
    pub counterexamples: Vec<String>,
}

impl ItemReport {
    fn new(item: &str, description: &str) -> Self {
        ItemReport {
            item: item.into(),
            description: description.into(),
            passed: true,
            cases: 0,
            counterexamples: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.passed = false;
            self.counterexamples.push(what());
        }
    }
}

/// One sampled partition and the dimensions found for it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionCase {
    pub blocks: Vec<Vec<u32>>,
    pub factor_dims: Vec<usize>,
    pub product_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealIdentityReport {
    pub n: u32,
    pub seed: u64,
    pub partitions_per_n: usize,
    pub passed: bool,
    pub items: Vec<ItemReport>,
    pub partitions: Vec<PartitionCase>,
}

/// Random partition of a random subset of the variables into 1-3 blocks.
/// Blocks are kept small enough that the product has at most 16 generators.
pub fn random_partition<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Vec<Vec<u32>> {
    let mut vars: Vec<u32> = (1..=n).collect();
    vars.shuffle(rng);
    let max_blocks = n.min(3) as usize;
    let blocks = rng.gen_range(1..=max_blocks);
    let mut out = Vec::with_capacity(blocks);
    let mut pos = 0usize;
    let mut generators = 1usize;
    for b in 0..blocks {
        let left = vars.len() - pos;
        let still_needed = blocks - b - 1;
        let cap = (left - still_needed).min(4).min(16 / generators).max(1);
        let size = rng.gen_range(1..=cap);
        let mut block = vars[pos..pos + size].to_vec();
        block.sort_unstable();
        pos += size;
        generators *= size;
        out.push(block);
    }
    out
}

/// Checks, at arity `n`:
///
/// * (a) `ann(x_i + 1) = <x_i + 1>` as subspaces, for every `i`;
/// * (b) `<x_1+1>...<x_k+1> ∩ <x_{k+1}+1>` equals the product ideal, and the
///   product `<x_1+1>...<x_k+1>` has dimension `2^{n-k}`;
/// * (c) `dim sum_{i<=k} <x_i + 1> = 2^n - 2^{n-k}` for `k = 1..n`;
/// * (d) for sampled variable blocks, the rate of the product of block sums is
///   the product of their rates (exactly, as integers).
///
/// Failures are reported, never raised.
pub fn verify_ideal_identities(n: u32, seed: u64, partitions: usize) -> Result<IdealIdentityReport> {
    if n == 0 {
        return Err(Error::Parameter("n must be positive".into()));
    }
    if n > VERIFY_MAX_ARITY {
        return Err(Error::Resource {
            what: "ideal verification",
            arity: n,
            limit: VERIFY_MAX_ARITY,
        });
    }
    limits::check_dense_arity(n)?;
    let full = 1usize << n;

    let mut shifted_spans = Vec::new();
    let mut a = ItemReport::new("annihilator_of_shift", "ann(x_i+1) = <x_i+1> as spans");
    for i in 1..=n {
        let y = AlgebraElement::var_plus_one(n, i)?;
        let ann = annihilator_span(&y)?;
        let ideal = IdealHandle::principal(y).span()?;
        let ok = ann.dim() == full / 2 && ann.same_span(&ideal)?;
        a.record(ok, || {
            format!("i={i}: dim ann={} dim ideal={}", ann.dim(), ideal.dim())
        });
        shifted_spans.push(ideal);
    }

    let mut b = ItemReport::new(
        "intersection_is_product",
        "<x_1+1>...<x_k+1> ∩ <x_{k+1}+1> = <x_1+1>...<x_{k+1}+1>",
    );
    let mut prefix = IdealHandle::shifted_variable(n, 1)?;
    for k in 1..n {
        let prefix_span = prefix.span()?;
        let next = IdealHandle::shifted_variable(n, k + 1)?;
        let meet = prefix_span.intersection(&shifted_spans[k as usize])?;
        let product = prefix.product(&next)?;
        let product_span = product.span()?;
        let ok = prefix_span.dim() == full >> k
            && meet.dim() == product_span.dim()
            && meet.contains_subspace(&product_span)?;
        b.record(ok, || {
            format!(
                "k={k}: dim prefix={} dim meet={} dim product={}",
                prefix_span.dim(),
                meet.dim(),
                product_span.dim()
            )
        });
        prefix = product;
    }

    let mut c = ItemReport::new("sum_rate", "dim sum_{i<=k} <x_i+1> = 2^n (1 - 2^-k)");
    let mut sum_span = SubspaceBasis::zero(full);
    for k in 1..=n {
        let direct = IdealHandle::shifted_sum(n, &(1..=k).collect::<Vec<_>>())?.dim()?;
        sum_span = sum_span.sum(&shifted_spans[k as usize - 1])?;
        let want = full - (full >> k);
        let ok = direct == want && sum_span.dim() == want;
        c.record(ok, || {
            format!("k={k}: generator dim={direct} subspace-sum dim={} want={want}", sum_span.dim())
        });
    }

    let mut d = ItemReport::new(
        "block_multiplicativity",
        "R(prod_i sum_{j in B_i} <x_j+1>) = prod_i R(sum_{j in B_i} <x_j+1>)",
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut cache: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut cases = Vec::with_capacity(partitions);
    for _ in 0..partitions {
        let blocks = random_partition(n, &mut rng);
        let mut factor_dims = Vec::with_capacity(blocks.len());
        for blk in &blocks {
            let dim = match cache.get(blk) {
                Some(&d) => d,
                None => {
                    let d = IdealHandle::shifted_sum(n, blk)?.dim()?;
                    cache.insert(blk.clone(), d);
                    d
                }
            };
            factor_dims.push(dim);
        }
        let product_dim = block_product_ideal(n, &blocks)?.dim()?;
        // dim(prod) / 2^n == prod(dim_i / 2^n)  <=>  dim(prod) * 2^{n(t-1)} == prod(dim_i)
        let lhs = BigUint::from(product_dim) << (n as usize * (blocks.len() - 1));
        let rhs = factor_dims
            .iter()
            .fold(BigUint::from(1u32), |acc, &x| acc * BigUint::from(x));
        d.record(lhs == rhs, || {
            format!("blocks={blocks:?} factor dims={factor_dims:?} product dim={product_dim}")
        });
        cases.push(PartitionCase {
            blocks,
            factor_dims,
            product_dim,
        });
    }

    let items = vec![a, b, c, d];
    Ok(IdealIdentityReport {
        n,
        seed,
        partitions_per_n: partitions,
        passed: items.iter().all(|i| i.passed),
        items,
        partitions: cases,
    })
}

/// Rank of the coefficient vectors of `{f_i g_j}`; equals `|f| * |g|` when
/// both sets are independent and on disjoint variables.
pub fn product_set_rank(fs: &[AlgebraElement], gs: &[AlgebraElement]) -> Result<usize> {
    let Some(first) = fs.first().or(gs.first()) else {
        return Ok(0);
    };
    let rows = fs
        .iter()
        .cartesian_product(gs)
        .map(|(f, g)| f.mul(g).map(AlgebraElement::into_coeffs))
        .collect::<Result<Vec<_>>>()?;
    Ok(BitMatrix::from_rows(first.dimension(), &rows)?.rank())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_and_simple_ideals() {
        for n in 1..=6 {
            let unit = IdealHandle::principal(AlgebraElement::one(n).unwrap());
            assert_eq!(unit.dim().unwrap(), 1 << n);
        }
        for k in 1..=5 {
            let vars: Vec<u32> = (1..=k).collect();
            let f = AlgebraElement::shifted_product(6, &vars).unwrap();
            assert_eq!(IdealHandle::principal(f).dim().unwrap(), 1 << (6 - k));
        }
        let s = IdealHandle::shifted_sum(2, &[1, 2]).unwrap();
        assert_eq!(s.dim().unwrap(), 3);
    }

    #[test]
    fn annihilator_dims() {
        assert_eq!(annihilator_dim(&AlgebraElement::zero(4).unwrap()).unwrap(), 16);
        for n in 1..=6 {
            let y = AlgebraElement::var_plus_one(n, 1).unwrap();
            assert_eq!(annihilator_dim(&y).unwrap(), 1 << (n - 1));
        }
    }

    #[test]
    fn products_and_sums() {
        let unit = IdealHandle::principal(AlgebraElement::one(3).unwrap());
        let a = IdealHandle::shifted_variable(3, 2).unwrap();
        let p = a.product(&unit).unwrap();
        assert_eq!(p.dim().unwrap(), a.dim().unwrap());
        assert!(p.span().unwrap().same_span(&a.span().unwrap()).unwrap());

        let y1 = IdealHandle::shifted_variable(2, 1).unwrap();
        let y2 = IdealHandle::shifted_variable(2, 2).unwrap();
        assert_eq!(ideal_product(&y1, &y2).unwrap().dim().unwrap(), 1);

        let alpha = IdealHandle::shifted_sum(4, &[1, 2]).unwrap();
        let beta = IdealHandle::shifted_sum(4, &[3, 4]).unwrap();
        let prod = ideal_product(&alpha, &beta).unwrap();
        assert_eq!(prod.dim().unwrap(), 9);
        assert_eq!(prod.rate().unwrap(), rational::ratio(9, 16));
        assert_eq!(ideal_sum(&alpha, &beta).unwrap().dim().unwrap(), 15);
        assert!(alpha.product(&IdealHandle::shifted_variable(3, 1).unwrap()).is_err());
    }

    #[test]
    fn annihilator_membership() {
        let y1 = AlgebraElement::var_plus_one(5, 1).unwrap();
        assert!(annihilator_contains(&y1, &y1).unwrap());
        let x2 = AlgebraElement::variable(5, 2).unwrap();
        assert!(!annihilator_contains(&y1, &x2).unwrap());
        let f4 = crate::families::hamming_element(4).unwrap().element;
        let g = AlgebraElement::shifted_product(5, &[4, 1]).unwrap();
        assert!(annihilator_contains(&f4, &g).unwrap());
        assert!(annihilator_contains(&f4, &AlgebraElement::one(4).unwrap()).is_err());
    }

    #[test]
    fn ideal_identities_small() {
        for n in 1..=6 {
            let rep = verify_ideal_identities(n, DEFAULT_SEED, 10).unwrap();
            assert!(rep.passed, "{rep:#?}");
        }
        assert!(verify_ideal_identities(13, 0, 1).unwrap_err().is_resource());
    }

    #[test]
    fn partitions_are_disjoint_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(1..=12);
            let p = random_partition(n, &mut rng);
            let all: Vec<u32> = p.iter().flatten().copied().collect();
            assert_eq!(all.iter().unique().count(), all.len());
            assert!(all.iter().all(|&v| v >= 1 && v <= n));
            assert!(p.iter().map(Vec::len).product::<usize>() <= 16);
        }
    }

    #[test]
    fn disjoint_products_stay_independent() {
        // independent sets on x1..x3 and x4..x6
        let f: Vec<AlgebraElement> = ["x1 + 1", "x1*x2", "x3 + x2 + 1"]
            .iter()
            .map(|s| format!("n=6\n{s}").parse().unwrap())
            .collect();
        let g: Vec<AlgebraElement> = ["x4", "x5*x6 + 1"]
            .iter()
            .map(|s| format!("n=6\n{s}").parse().unwrap())
            .collect();
        assert_eq!(product_set_rank(&f, &g).unwrap(), 6);
    }
}
