use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use storagecode::families::{build_family, FamilyKind};
use storagecode::ideal::verify_ideal_identities;
use storagecode::verify::{verify_code, VerifyOptions, VerifyReport};
use storagecode::{
    code, limits, parse_polynomial, CodeReport, ConnectionSet, StorageCode,
};

use crate::args::{
    Command, ExportArgs, ExportKind, FamilyArgs, Format, IdealVerifyArgs, InputArgs, InputFormat,
    RateArgs, VerifyArgs,
};
use crate::{table, CliError, CliResult};

pub fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Family(a) => family(a),
        Command::Rate(a) => rate(a),
        Command::Verify(a) => verify(a),
        Command::Table(a) => table::run(a),
        Command::IdealVerify(a) => ideal_verify(a),
        Command::Export(a) => export(a),
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn check_writable(path: &Path) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    if !dir.is_dir() {
        return Err(CliError::Io(format!("{}: no such directory", dir.display())));
    }
    Ok(())
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

pub fn parse_kind(name: &str) -> CliResult<FamilyKind> {
    name.parse::<FamilyKind>().map_err(CliError::from)
}

fn load_set(input: &InputArgs) -> CliResult<ConnectionSet> {
    let text = read(&input.path)?;
    let set = match input.input_format {
        InputFormat::Poly => ConnectionSet::from_element(&parse_polynomial(&text)?)?,
        InputFormat::Masks => ConnectionSet::from_text(&text)?,
    };
    Ok(set)
}

fn family(a: FamilyArgs) -> CliResult<()> {
    let kind = parse_kind(&a.name)?;
    if let Some(out) = &a.out {
        check_writable(out)?;
    }
    let inst = build_family(kind, a.r, a.k)?;
    let poly = inst.element.to_text();
    let sidecar = to_json(&inst.sidecar());
    match &a.out {
        Some(out) => {
            let mut side = out.clone().into_os_string();
            side.push(".json");
            write(out, &poly)?;
            write(&PathBuf::from(side), &sidecar)?;
        }
        None => {
            // the sidecar goes out as comment lines so stdout still parses
            print!("{poly}");
            for line in sidecar.lines() {
                println!("# {line}");
            }
        }
    }
    Ok(())
}

pub fn ceiling_text(report: &CodeReport) -> String {
    match report.ceiling_from_necessary_conditions {
        Some(c) => c.to_string(),
        None => "none".into(),
    }
}

fn report_text(r: &CodeReport) -> String {
    format!(
        "arity: {}\ncode_length: {}\ncode_dim: {}\nrate: {} ({:.6})\ntriangle_free: {}\n\
         degree: {}\nedge_count: {}\nceiling_from_necessary_conditions: {}\n",
        r.arity,
        r.code_length,
        r.code_dim,
        r.rate.exact,
        r.rate.float,
        r.triangle_free,
        r.degree,
        r.edge_count,
        ceiling_text(r),
    )
}

fn emit(text: String, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(p) => write(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn rate(a: RateArgs) -> CliResult<()> {
    if let Some(out) = &a.out {
        check_writable(out)?;
    }
    let set = load_set(&a.input)?;
    let report = code::code_rate(&set, a.max_k)?;
    let text = match a.format {
        Format::Text => report_text(&report),
        Format::Json => to_json(&report),
    };
    emit(text, a.out.as_deref())
}

fn verify_text(v: &VerifyReport) -> String {
    let mut s = format!("seed: {}\n", v.seed);
    s.push_str(&report_text(&v.report));
    for c in &v.checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        s.push_str(&format!("{tag} {}: {}\n", c.name, c.detail));
    }
    s.push_str(if v.passed { "result: pass\n" } else { "result: fail\n" });
    s
}

fn verify(a: VerifyArgs) -> CliResult<()> {
    let set = load_set(&a.input)?;
    let opts = VerifyOptions {
        max_k: a.max_k,
        seed: a.seed,
        samples: a.samples,
        repair_samples: a.repair_samples,
        ..VerifyOptions::default()
    };
    let code = StorageCode::build(set)?;
    let report = verify_code(&code, &opts)?;
    let text = match a.format {
        Format::Text => verify_text(&report),
        Format::Json => to_json(&report),
    };
    print!("{text}");
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<_> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        Err(CliError::Failed(format!("failed checks: {}", failed.join(", "))))
    }
}

fn ideal_verify(a: IdealVerifyArgs) -> CliResult<()> {
    let report = verify_ideal_identities(a.n, a.seed, a.partitions)?;
    match a.format {
        Format::Json => print!("{}", to_json(&report)),
        Format::Text => {
            println!("n: {}\nseed: {}\npartitions: {}", report.n, report.seed, report.partitions_per_n);
            for item in &report.items {
                let tag = if item.passed { "PASS" } else { "FAIL" };
                println!("{tag} {} ({} cases): {}", item.item, item.cases, item.description);
                for c in &item.counterexamples {
                    println!("  counterexample: {c}");
                }
            }
            println!("result: {}", if report.passed { "pass" } else { "fail" });
        }
    }
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Failed(format!("ideal identities failed for n={}", a.n)))
    }
}

fn export(a: ExportArgs) -> CliResult<()> {
    if let Some(out) = &a.out {
        check_writable(out)?;
    }
    let set = load_set(&a.input)?;
    if a.kind != ExportKind::ConnectionSet {
        limits::check_dense_arity(set.arity())?;
    }
    let text = match a.kind {
        ExportKind::Matrix => code::coset_matrix(&set)?.to_text(),
        ExportKind::Graph => code::edge_list(&set),
        ExportKind::Dimacs => code::dimacs(&set),
        ExportKind::Codewords => code::codewords_text(&StorageCode::build(set)?.basis()),
        ExportKind::ConnectionSet => set.to_text(),
    };
    emit(text, a.out.as_deref())
}
