use std::io::Write;

use kloos3::builtin::{builtin_modulus, regenerate_table};
use kloos3::oracle::{val3, Oracle};
use kloos3::tower::Tower;
use kloos3::valuation::{descent, descent_full, kval};
use kloos3::{CurveParams, TowerReport, ValuationReport};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::OutputFormat;
use crate::context::{Failure, RunConfig};

/// The random stream used for element `index`; independent of how
/// elements are split across workers.
pub fn element_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn emit(out: &mut dyn Write, record: &Value) -> Result<(), Failure> {
    writeln!(out, "{record}")?;
    Ok(())
}

pub fn ksum(cfg: &RunConfig, a: Option<&str>, out: &mut dyn Write) -> Result<(), Failure> {
    let a = cfg.require_a(a)?;
    cfg.check_oracle_cap(cfg.field.degree())?;
    let k = kloos3::oracle::kloosterman_sum(&cfg.field, &a)?;
    let v = val3(k.value, cfg.field.degree());
    if cfg.table() {
        writeln!(
            out,
            "{:<16} {:>10} {:>24} {:>5}",
            "a", "K", "counts", "val3"
        )?;
        let counts = format!("{}/{}/{}", k.counts[0], k.counts[1], k.counts[2]);
        writeln!(
            out,
            "{:<16} {:>10} {:>24} {:>5}",
            cfg.fmt(&a),
            k.value,
            counts,
            v
        )?;
        return Ok(());
    }
    emit(
        out,
        &json!({"a": cfg.fmt(&a), "K": k.value, "counts": k.counts, "val3": v}),
    )
}

fn kval_record(cfg: &RunConfig, report: &ValuationReport) -> Value {
    json!({
        "a": cfg.fmt(&report.a),
        "k": report.k,
        "case": report.case.as_str(),
        "r": report.r,
        "trail": cfg.fmt_all(&report.trail),
        "u1": cfg.fmt(&report.u1),
        "seed": cfg.seed,
    })
}

pub fn kval_cmd(cfg: &RunConfig, a: Option<&str>, out: &mut dyn Write) -> Result<(), Failure> {
    let a = cfg.require_a(a)?;
    let curve = CurveParams::new(&cfg.field, a)?;
    let mut rng = element_rng(cfg.seed, a.index());
    let report = kval(&curve, &mut rng)?;
    if cfg.table() {
        writeln!(out, "a     {}", cfg.fmt(&a))?;
        writeln!(out, "k     {}", report.k)?;
        writeln!(out, "case  {}", report.case.as_str())?;
        if let Some(r) = report.r {
            writeln!(out, "r     {r}")?;
        }
        writeln!(out, "trail {}", cfg.fmt_all(&report.trail).join(" -> "))?;
        return Ok(());
    }
    emit(out, &kval_record(cfg, &report))
}

pub fn descent_cmd(cfg: &RunConfig, a: Option<&str>, out: &mut dyn Write) -> Result<(), Failure> {
    let a = cfg.require_a(a)?;
    let curve = CurveParams::new(&cfg.field, a)?;
    let graph = if cfg.full {
        descent_full(&curve)?
    } else {
        descent(&curve)?
    };
    match cfg.output {
        None | Some(OutputFormat::Dot) => {
            out.write_all(graph.to_dot(cfg.log.as_ref()).as_bytes())?;
        }
        Some(OutputFormat::Json) => {
            let levels: Vec<_> = graph.levels.iter().map(|l| cfg.fmt_all(l)).collect();
            let edges: Vec<_> = graph
                .edges
                .iter()
                .map(|(p, c)| [cfg.fmt(p), cfg.fmt(c)])
                .collect();
            emit(
                out,
                &json!({"a": cfg.fmt(&a), "t": graph.t, "levels": levels, "edges": edges}),
            )?;
        }
        Some(OutputFormat::Table) => {
            for (depth, level) in graph.levels.iter().enumerate() {
                writeln!(out, "{depth:>3}  {}", cfg.fmt_all(level).join(" "))?;
            }
        }
    }
    Ok(())
}

fn tower_record(cfg: &RunConfig, r: &TowerReport) -> Value {
    json!({
        "a": cfg.fmt(&r.a),
        "m": r.m,
        "n": r.n,
        "h": r.h,
        "s": r.s,
        "H": r.big_h,
        "H_n": r.big_h_n,
        "oracle_agrees": r.oracle_agrees,
        "consistent": r.consistent,
    })
}

/// Returns whether every checked element was consistent.
pub fn tower_cmd(
    cfg: &RunConfig,
    a: Option<&str>,
    n: Option<usize>,
    all: bool,
    out: &mut dyn Write,
) -> Result<bool, Failure> {
    let n = n.ok_or_else(|| Failure::Usage("--n is required for tower".into()))?;
    let elements = if all {
        cfg.field.elements().skip(1).collect()
    } else {
        vec![cfg.require_a(a)?]
    };
    let tower = Tower::new(&cfg.field, n)?;
    let tower = if tower.ext().degree() <= cfg.oracle_cap {
        tower.with_oracles(cfg.oracle_cap)?
    } else {
        tower
    };
    if cfg.table() {
        writeln!(
            out,
            "{:<16} {:>3} {:>3} {:>3} {:>5} {:>6} {:>10}",
            "a", "n", "h", "H", "H_n", "oracle", "consistent"
        )?;
    }
    let mut consistent = 0;
    for a in &elements {
        let report = tower.check(a, &mut element_rng(cfg.seed, a.index()))?;
        consistent += report.consistent as usize;
        if cfg.table() {
            let oracle = match report.oracle_agrees {
                Some(true) => "agree",
                Some(false) => "DIFFER",
                None => "-",
            };
            writeln!(
                out,
                "{:<16} {:>3} {:>3} {:>3} {:>5} {:>6} {:>10}",
                cfg.fmt(a),
                n,
                report.h,
                report.big_h,
                report.big_h_n,
                oracle,
                report.consistent
            )?;
        } else {
            emit(out, &tower_record(cfg, &report))?;
        }
    }
    let all_consistent = consistent == elements.len();
    if all && !cfg.table() {
        emit(
            out,
            &json!({
                "summary": true,
                "count": elements.len(),
                "consistent": consistent,
                "all_consistent": all_consistent,
            }),
        )?;
    }
    Ok(all_consistent)
}

/// Returns whether the regenerated table equals the builtin one.
pub fn moduli(out: &mut dyn Write) -> Result<bool, Failure> {
    let mut matches = true;
    for (i, modulus) in regenerate_table()?.iter().enumerate() {
        let m = i + 2;
        let same = builtin_modulus(m) == Some(modulus.as_slice());
        matches &= same;
        let trits: String = modulus.iter().map(|c| char::from(b'0' + c)).collect();
        emit(
            out,
            &json!({"m": m, "modulus": trits, "matches_builtin": same}),
        )?;
    }
    Ok(matches)
}

/// Brute-force K(a) for the scan's `--full` column.
pub fn oracle_for(cfg: &RunConfig) -> Result<Option<Oracle>, Failure> {
    if !cfg.full {
        return Ok(None);
    }
    cfg.check_oracle_cap(cfg.field.degree())?;
    Ok(Some(Oracle::new(&cfg.field)?))
}
