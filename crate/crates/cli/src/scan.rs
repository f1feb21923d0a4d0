use std::collections::BTreeMap;
use std::io::Write;
use std::ops::Range;
use std::thread;

use kloos3::oracle::Oracle;
use kloos3::valuation::kval;
use kloos3::{CurveParams, FieldSpec, Result, ValuationReport};
use serde_json::json;

use crate::commands::{element_rng, emit, oracle_for};
use crate::context::{Failure, RunConfig};

struct Row {
    report: ValuationReport,
    sum: Option<i64>,
}

fn scan_range(
    field: &FieldSpec,
    oracle: Option<&Oracle>,
    seed: u64,
    range: Range<u64>,
) -> Result<Vec<Row>> {
    range
        .map(|i| {
            let a = field.element(i);
            let curve = CurveParams::new(field, a)?;
            let report = kval(&curve, &mut element_rng(seed, i))?;
            let sum = match oracle {
                Some(o) => Some(o.kloosterman_sum(&a)?.value),
                None => None,
            };
            Ok(Row { report, sum })
        })
        .collect()
}

/// Contiguous index ranges covering 1..q, one per worker.
fn partition(q: u64, workers: usize) -> Vec<Range<u64>> {
    let total = q - 1;
    let chunk = total.div_ceil(workers as u64).max(1);
    (0..workers as u64)
        .map(|w| (1 + w * chunk).min(q)..(1 + (w + 1) * chunk).min(q))
        .filter(|r| !r.is_empty())
        .collect()
}

pub fn scan(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), Failure> {
    let field = &cfg.field;
    let oracle = oracle_for(cfg)?;
    let parts = partition(field.order(), cfg.workers);
    let results: Vec<Result<Vec<Row>>> = thread::scope(|s| {
        let handles: Vec<_> = parts
            .into_iter()
            .map(|range| {
                let oracle = oracle.as_ref();
                s.spawn(move || scan_range(field, oracle, cfg.seed, range))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scan worker panicked"))
            .collect()
    });

    let m = field.degree();
    let mut histogram: BTreeMap<usize, u64> = BTreeMap::new();
    let mut zeros = Vec::new();
    if cfg.table() {
        writeln!(
            out,
            "{:<16} {:>3} {:>14} {:>5} {:>8}",
            "a", "k", "case", "r", "K"
        )?;
    }
    for rows in results {
        for row in rows? {
            let rep = &row.report;
            *histogram.entry(rep.k).or_default() += 1;
            if rep.is_zero_sum(m) {
                zeros.push(cfg.fmt(&rep.a));
            }
            if cfg.table() {
                let r = rep.r.map_or("-".to_string(), |r| r.to_string());
                let k = row.sum.map_or("-".to_string(), |k| k.to_string());
                writeln!(
                    out,
                    "{:<16} {:>3} {:>14} {:>5} {:>8}",
                    cfg.fmt(&rep.a),
                    rep.k,
                    rep.case.as_str(),
                    r,
                    k
                )?;
            } else {
                let mut record = json!({
                    "a": cfg.fmt(&rep.a),
                    "k": rep.k,
                    "case": rep.case.as_str(),
                    "r": rep.r,
                });
                if let Some(k) = row.sum {
                    record["K"] = json!(k);
                }
                emit(out, &record)?;
            }
        }
    }
    let histogram: Vec<_> = histogram
        .into_iter()
        .map(|(k, count)| json!({"k": k, "count": count}))
        .collect();
    if cfg.table() {
        for h in &histogram {
            writeln!(out, "# k = {}: {}", h["k"], h["count"])?;
        }
        writeln!(out, "# zeros: {}", zeros.join(" "))?;
        return Ok(());
    }
    emit(
        out,
        &json!({
            "summary": true,
            "m": m,
            "elements": field.order() - 1,
            "histogram": histogram,
            "zeros": zeros,
        }),
    )
}
