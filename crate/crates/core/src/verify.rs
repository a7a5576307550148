//! End-to-end checks on one connection set: triangle-freeness, sampled
//! storage/repair behaviour, the necessary-condition ceiling, and agreement
//! between the coset-matrix and group-algebra computations of the dimension.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitVector;
use crate::code::{
    check_storage_property, is_triangle_free, neighbor_sum, CodeReport, ConnectionSet,
    StorageCode, DEFAULT_MAX_K,
};
use crate::error::Result;
use crate::ideal::{annihilator_contains, annihilator_dim};
use crate::matrix::{mult_operator_matrix, EliminationOptions, PivotOrder};

/// Default seed for codeword sampling.
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub max_k: u32,
    pub seed: u64,
    /// Random codewords checked against the storage property.
    pub samples: usize,
    /// How many of those also get every vertex erased and repaired.
    pub repair_samples: usize,
    /// Check every basis vector of the code when the arity is at most this.
    pub full_basis_max_arity: u32,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_k: DEFAULT_MAX_K,
            seed: DEFAULT_SEED,
            samples: 100,
            repair_samples: 10,
            full_basis_max_arity: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub passed: bool,
    pub report: CodeReport,
    pub checks: Vec<CheckOutcome>,
}

fn outcome(name: &str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome {
        name: name.into(),
        passed,
        detail,
    }
}

/// Erases each coordinate of `c` in turn and recovers it from the neighbours.
/// Returns the first vertex that comes back wrong.
pub fn erase_and_repair_all(s: &ConnectionSet, c: &BitVector) -> Option<u64> {
    let mut word = c.clone();
    for v in 0..s.vertex_count() as u64 {
        let original = word.get(v as usize);
        word.set(v as usize, false);
        let recovered = neighbor_sum(s, &word, v);
        word.set(v as usize, original);
        if recovered != original {
            return Some(v);
        }
    }
    None
}

/// Runs every check on an already built code.
pub fn verify_code(code: &StorageCode, opts: &VerifyOptions) -> Result<VerifyReport> {
    let s = code.set();
    let f = s.to_element();
    let report = code.report(opts.max_k);
    let mut checks = Vec::new();

    checks.push(outcome(
        "triangle_free",
        is_triangle_free(s),
        format!("{} nonzero generators", s.nonzero().len()),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut bad_storage = None;
    let mut bad_repair = None;
    let mut bad_member = None;
    for i in 0..opts.samples {
        let c = code.random_codeword(&mut rng);
        if bad_storage.is_none() && !check_storage_property(s, &c)? {
            bad_storage = Some(i);
        }
        let as_elem = crate::AlgebraElement::from_coeffs(s.arity(), c.clone())?;
        if bad_member.is_none() && !annihilator_contains(&f, &as_elem)? {
            bad_member = Some(i);
        }
        if i < opts.repair_samples && bad_repair.is_none() {
            bad_repair = erase_and_repair_all(s, &c).map(|v| (i, v));
        }
    }
    checks.push(outcome(
        "storage_property",
        bad_storage.is_none(),
        match bad_storage {
            None => format!("{} sampled codewords satisfy c H = 0", opts.samples),
            Some(i) => format!("sample {i} violates c H = 0"),
        },
    ));
    checks.push(outcome(
        "single_erasure_repair",
        bad_repair.is_none(),
        match bad_repair {
            None => format!(
                "every vertex recovered in {} codewords",
                opts.repair_samples.min(opts.samples)
            ),
            Some((i, v)) => format!("sample {i}: vertex {v} recovered wrongly"),
        },
    ));
    checks.push(outcome(
        "annihilator_membership",
        bad_member.is_none(),
        match bad_member {
            None => "sampled codewords multiply f_S to zero".to_string(),
            Some(i) => format!("sample {i} does not annihilate f_S"),
        },
    ));

    if s.arity() <= opts.full_basis_max_arity {
        let basis = code.echelon().clone().into_reduced().kernel_vectors();
        let mut bad = None;
        for (i, v) in basis.iter().enumerate() {
            let e = crate::AlgebraElement::from_coeffs(s.arity(), v.clone())?;
            if !annihilator_contains(&f, &e)? {
                bad = Some(i);
                break;
            }
        }
        checks.push(outcome(
            "basis_membership",
            bad.is_none() && basis.len() == code.dimension(),
            format!("{} basis vectors checked", basis.len()),
        ));
    }

    let ceiling_ok = report
        .ceiling_from_necessary_conditions
        .is_none_or(|c| report.rate.exact <= c);
    checks.push(outcome(
        "rate_below_ceiling",
        ceiling_ok,
        match report.ceiling_from_necessary_conditions {
            Some(c) => format!("rate {} vs ceiling {c}", report.rate.exact),
            None => format!("no ceiling found up to k = {}", opts.max_k),
        },
    ));

    let rank_h = code.check_rank();
    let op = mult_operator_matrix(&f)?;
    let rank_op = op
        .echelon_with(EliminationOptions {
            order: PivotOrder::Descending,
            parallel: false,
        })
        .rank();
    let ann = annihilator_dim(&f)?;
    let n = s.vertex_count();
    checks.push(outcome(
        "isomorphism_consistency",
        rank_h == rank_op && n - rank_h == ann,
        format!("rank H = {rank_h}, dim <f_S> = {rank_op}, dim ann f_S = {ann}"),
    ));

    Ok(VerifyReport {
        seed: opts.seed,
        passed: checks.iter().all(|c| c.passed),
        report,
        checks,
    })
}

pub fn verify_connection_set(s: &ConnectionSet, opts: &VerifyOptions) -> Result<VerifyReport> {
    verify_code(&StorageCode::build(s.clone())?, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{hamming_element, seven_eighths_element};

    #[test]
    fn families_verify() {
        for inst in [hamming_element(4).unwrap(), seven_eighths_element(2).unwrap()] {
            let rep = verify_connection_set(&inst.connection_set(), &VerifyOptions::default()).unwrap();
            assert!(rep.passed, "{rep:#?}");
        }
    }

    #[test]
    fn dependent_triple_fails() {
        let s = ConnectionSet::new(2, [0, 1, 2, 3]).unwrap();
        let rep = verify_connection_set(&s, &VerifyOptions::default()).unwrap();
        assert!(!rep.passed);
        let tri = rep.checks.iter().find(|c| c.name == "triangle_free").unwrap();
        assert!(!tri.passed);
        assert!(rep.checks.iter().filter(|c| c.name != "triangle_free").all(|c| c.passed));
    }

    #[test]
    fn same_seed_same_report() {
        let s = hamming_element(3).unwrap().connection_set();
        let a = verify_connection_set(&s, &VerifyOptions::default()).unwrap();
        let b = verify_connection_set(&s, &VerifyOptions::default()).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
