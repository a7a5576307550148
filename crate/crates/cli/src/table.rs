use serde::Serialize;

use storagecode::code::{DEFAULT_MAX_K, StorageCode};
use storagecode::families::{build_family, FamilyInstance, FamilyKind};
use storagecode::rational::{self, Rational};
use storagecode::{is_triangle_free, limits};

use crate::args::{Format, ParamRange, TableArgs};
use crate::commands::{parse_kind, to_json};
use crate::{CliError, CliResult};

#[derive(Debug, Serialize)]
struct TableRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<u32>,
    arity: u32,
    vertices: u64,
    degree: u64,
    code_dim: u64,
    rate: storagecode::code::Rate,
    #[serde(with = "rational")]
    rate_lower: Rational,
    #[serde(with = "rational")]
    rate_upper: Rational,
    within_bounds: bool,
    triangle_free: bool,
    #[serde(with = "rational::option")]
    ceiling_from_necessary_conditions: Option<Rational>,
}

#[derive(Debug, Serialize)]
struct Table {
    family: FamilyKind,
    max_k: u32,
    rows: Vec<TableRow>,
}

fn required(range: Option<ParamRange>, name: &str, kind: FamilyKind) -> CliResult<ParamRange> {
    range.ok_or_else(|| CliError::Usage(format!("--{name} is required for the {kind} family")))
}

fn instances(kind: FamilyKind, a: &TableArgs) -> CliResult<Vec<FamilyInstance>> {
    let mut out = Vec::new();
    match kind {
        FamilyKind::Hamming => {
            for r in required(a.r, "r", kind)?.values() {
                out.push(build_family(kind, Some(r), None)?);
            }
        }
        FamilyKind::SevenEighths => {
            for k in required(a.k, "k", kind)?.values() {
                out.push(build_family(kind, None, Some(k))?);
            }
        }
        FamilyKind::Generalized => {
            let ks = required(a.k, "k", kind)?;
            for r in required(a.r, "r", kind)?.values() {
                for k in ks.values() {
                    out.push(build_family(kind, Some(r), Some(k))?);
                }
            }
        }
    }
    Ok(out)
}

pub fn run(a: TableArgs) -> CliResult<()> {
    let kind = parse_kind(&a.family)?;
    let insts = instances(kind, &a)?;
    for inst in &insts {
        limits::check_dense_arity(inst.arity())?;
    }
    let mut rows = Vec::with_capacity(insts.len());
    let mut max_k_used = a.max_k.unwrap_or(DEFAULT_MAX_K);
    for inst in insts {
        let max_k = a.max_k.unwrap_or_else(|| match kind {
            FamilyKind::Generalized => inst.r.unwrap_or(DEFAULT_MAX_K).max(DEFAULT_MAX_K),
            _ => DEFAULT_MAX_K,
        });
        max_k_used = max_k_used.max(max_k);
        let set = inst.connection_set();
        let triangle_free = is_triangle_free(&set);
        let code = StorageCode::build(set)?;
        let report = code.report(max_k);
        let rate = report.rate.exact;
        rows.push(TableRow {
            r: inst.r,
            k: inst.k,
            arity: inst.arity(),
            vertices: report.code_length,
            degree: report.degree,
            code_dim: report.code_dim,
            rate: report.rate,
            rate_lower: inst.rate_lower,
            rate_upper: inst.rate_upper,
            within_bounds: inst.rate_lower <= rate && rate <= inst.rate_upper,
            triangle_free,
            ceiling_from_necessary_conditions: report.ceiling_from_necessary_conditions,
        });
    }
    let table = Table {
        family: kind,
        max_k: max_k_used,
        rows,
    };
    match a.format {
        Format::Json => print!("{}", to_json(&table)),
        Format::Text => print!("{}", render(&table)),
    }
    Ok(())
}

fn render(t: &Table) -> String {
    let header = [
        "r", "k", "n", "N", "degree", "dim", "rate", "float", "lower", "upper", "ok", "tri_free",
        "ceiling",
    ];
    let opt = |v: Option<u32>| v.map_or("-".to_string(), |x| x.to_string());
    let cells: Vec<Vec<String>> = t
        .rows
        .iter()
        .map(|r| {
            vec![
                opt(r.r),
                opt(r.k),
                r.arity.to_string(),
                r.vertices.to_string(),
                r.degree.to_string(),
                r.code_dim.to_string(),
                r.rate.exact.to_string(),
                format!("{:.6}", r.rate.float),
                r.rate_lower.to_string(),
                r.rate_upper.to_string(),
                r.within_bounds.to_string(),
                r.triangle_free.to_string(),
                r.ceiling_from_necessary_conditions
                    .map_or("none".to_string(), |c| c.to_string()),
            ]
        })
        .collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let line = |row: Vec<String>| {
        let parts: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    let mut s = format!("# family: {}  max_k: {}\n", t.family, t.max_k);
    s.push_str(&line(header.iter().map(|h| h.to_string()).collect()));
    for row in cells {
        s.push_str(&line(row));
    }
    s
}
