use std::io::Write;

use kloos3::builtin::PHI_5;
use kloos3::curve::CUBIC_SEARCH_MAX_DEGREE;
use kloos3::oracle::{val3, Oracle};
use kloos3::tower::{adjudicate_k3, K3Formula, Tower};
use kloos3::valuation::{descent, descent_full, div27, div9, kval, kval_from, x0_x1_from_z};
use kloos3::{CurveParams, CurvePoint, FieldElement, FieldSpec, Result};
use rand::Rng;
use serde_json::{json, Value};

use crate::commands::{element_rng, emit};
use crate::context::{Failure, RunConfig};

/// Fields up to this degree are checked element by element.
const EXHAUSTIVE_MAX_DEGREE: usize = 7;
const SAMPLED_ELEMENTS: u64 = 100;
const GROUP_LAW_TRIPLES: usize = 1000;

struct Check {
    name: &'static str,
    skipped: bool,
    failures: Vec<String>,
    detail: Value,
}

impl Check {
    fn new(name: &'static str) -> Check {
        Check {
            name,
            skipped: false,
            failures: Vec::new(),
            detail: Value::Null,
        }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&self) -> Value {
        json!({
            "check": self.name,
            "passed": self.passed(),
            "skipped": self.skipped,
            "failure_count": self.failures.len(),
            "failures": self.failures.iter().take(20).collect::<Vec<_>>(),
            "detail": self.detail,
        })
    }
}

fn sorted(mut v: Vec<FieldElement>) -> Vec<FieldElement> {
    v.sort();
    v
}

fn worked_example() -> Result<Check> {
    let mut c = Check::new("worked_example");
    let f = FieldSpec::new(5, &PHI_5)?;
    let p = |k: u64| f.pow(&f.alpha(), k);
    let ps = |ks: &[u64]| sorted(ks.iter().map(|&k| p(k)).collect());
    let a = p(31);
    let curve = CurveParams::new(&f, a)?;

    let k = kloos3::oracle::kloosterman_sum(&f, &a)?.value;
    c.expect(k == 27, || format!("K(α^31) = {k}, expected 27"));
    let order = kloos3::oracle::curve_order(&f, &a)?;
    c.expect(order == 270, || {
        format!("|E(α^31)| = {order}, expected 270")
    });

    let zs = sorted(
        f.solve_artin_schreier(&a)?
            .iter()
            .map(|w| f.ninth_root(w))
            .collect(),
    );
    c.expect(zs == ps(&[16, 106, 231]), || "z set differs".into());
    let x1s = sorted(zs.iter().map(|z| x0_x1_from_z(&f, z).1).collect());
    c.expect(x1s == ps(&[7, 19, 105]), || "x_1 set differs".into());
    c.expect(x0_x1_from_z(&f, &p(16)).0 == p(91), || "x_0 differs".into());

    let kids = curve.solve_tripling_cubic(&p(7))?;
    c.expect(kids == ps(&[138, 196, 237]), || {
        "children of α^7 differ".into()
    });
    let obs = curve.div3_obstruction(&p(138))?;
    c.expect(obs == 1, || {
        format!("obstruction at α^138 = {obs}, expected 1")
    });
    c.expect(f.trace(&p(202)) == 1, || "Tr(α^202) != 1".into());

    for (start, trail, r) in [
        (159, vec![159, 15, 44, 162, 162], 1),
        (193, vec![193, 199, 50, 197, 223, 197], 2),
    ] {
        let rep = kval_from(&curve, &p(start))?;
        let expect: Vec<_> = trail.iter().map(|&k| p(k)).collect();
        c.expect(
            rep.k == 3 && rep.r == Some(r) && rep.trail == expect,
            || format!("walk from α^{start} differs"),
        );
    }
    c.expect(descent(&curve)?.t == 3, || "descent depth != 3".into());
    let full = descent_full(&curve)?;
    let nodes = sorted(full.levels.concat());
    let expect = ps(&[91, 7, 19, 105, 138, 196, 237, 9, 100, 175, 219, 202, 76]);
    c.expect(nodes == expect, || "full descent node set differs".into());
    c.expect(div9(&f, &a)? && div27(&f, &a)?, || {
        "divisibility of K(α^31)".into()
    });
    Ok(c)
}

fn group_law<R: Rng>(cfg: &RunConfig, rng: &mut R) -> Result<Check> {
    let mut c = Check::new("group_law");
    let f = &cfg.field;
    let with_order = f.degree() <= cfg.oracle_cap.min(kloos3::oracle::ORACLE_MAX_DEGREE);
    let oracle = if with_order {
        Some(Oracle::new(f)?)
    } else {
        None
    };
    let params: Vec<FieldElement> = (0..10)
        .map(|_| loop {
            let a = f.random(rng);
            if !a.is_zero() {
                break a;
            }
        })
        .collect();
    for a in &params {
        let curve = CurveParams::new(f, *a)?;
        let order = oracle.as_ref().map(|o| o.curve_order(a)).transpose()?;
        for _ in 0..GROUP_LAW_TRIPLES / params.len() {
            let p = curve.sample_point(rng, 256)?;
            let q = curve.sample_point(rng, 256)?;
            let s = curve.sample_point(rng, 256)?;
            let left = curve.add(&curve.add(&p, &q)?, &s)?;
            let right = curve.add(&p, &curve.add(&q, &s)?)?;
            c.expect(left == right, || format!("associativity fails for a = {a}"));
            if let Some(order) = order {
                let z = curve.scalar_mul(order, &p)?;
                c.expect(z.is_infinity(), || format!("|E| P != O for a = {a}"));
            }
            if let (CurvePoint::Affine { x, .. }, Some(x3)) = (p, curve.scalar_mul(3, &p)?.x()) {
                let t = curve.triple_x(&x)?;
                c.expect(t == x3, || format!("triple_x disagrees for a = {a}"));
            }
        }
    }
    Ok(c)
}

fn valuation(cfg: &RunConfig) -> Result<Check> {
    let mut c = Check::new("valuation_vs_oracle");
    let f = &cfg.field;
    let m = f.degree();
    if m > cfg.oracle_cap.min(kloos3::oracle::ORACLE_MAX_DEGREE) {
        c.skipped = true;
        return Ok(c);
    }
    let oracle = Oracle::new(f)?;
    let q = f.order();
    let exhaustive = m <= EXHAUSTIVE_MAX_DEGREE;
    let indices: Vec<u64> = if exhaustive {
        (1..q).collect()
    } else {
        let step = (q - 1) / SAMPLED_ELEMENTS;
        (0..SAMPLED_ELEMENTS).map(|i| 1 + i * step).collect()
    };
    let mut total = 0i64;
    for &i in &indices {
        let a = f.element(i);
        let k = oracle.kloosterman_sum(&a)?.value;
        total += k;
        let v = val3(k, m);
        let curve = CurveParams::new(f, a)?;
        let rep = kval(&curve, &mut element_rng(cfg.seed, i))?;
        c.expect(rep.k == v, || {
            format!("a = {a}: walk {} vs oracle {v}", rep.k)
        });
        let order = oracle.curve_order(&a)?;
        c.expect(order as i64 == q as i64 + k, || {
            format!("a = {a}: |E| = {order}, K = {k}")
        });
        c.expect(k * k <= 4 * q as i64, || {
            format!("a = {a}: Weil bound, K = {k}")
        });
        let tr0 = f.trace(&a) == 0;
        c.expect(div9(f, &a)? == tr0 && tr0 == (v >= 2), || {
            format!("a = {a}: div9")
        });
        if tr0 {
            c.expect(div27(f, &a)? == (v >= 3), || format!("a = {a}: div27"));
        }
        if m <= CUBIC_SEARCH_MAX_DEGREE {
            let t = descent(&curve)?.t;
            c.expect(t == v, || format!("a = {a}: descent depth {t} vs {v}"));
        }
    }
    if exhaustive {
        c.expect(total == q as i64, || {
            format!("sum of K(a) = {total}, expected {q}")
        });
    }
    c.detail = json!({"elements": indices.len(), "exhaustive": exhaustive});
    Ok(c)
}

fn towers(cfg: &RunConfig) -> Result<Check> {
    let mut c = Check::new("tower");
    let mut rows = Vec::new();
    for (m, n) in [(2, 2), (2, 3), (2, 6), (3, 2), (3, 3)] {
        let base = FieldSpec::builtin(m)?;
        let tower = Tower::new(&base, n)?.with_oracles(13)?;
        let (ext, e) = (tower.ext(), tower.embedding());
        for (x, y) in base.elements().zip(base.elements().skip(3)) {
            let ok = e.embed(&base.mul(&x, &y)) == ext.mul(&e.embed(&x), &e.embed(&y))
                && e.embed(&base.add(&x, &y)) == ext.add(&e.embed(&x), &e.embed(&y));
            c.expect(ok, || {
                format!("({m}, {n}): embedding is not a homomorphism")
            });
        }
        let mut consistent = 0;
        for a in base.elements().skip(1) {
            let r = tower.check(&a, &mut element_rng(cfg.seed, a.index()))?;
            consistent += r.consistent as usize;
            c.expect(r.consistent, || {
                format!("({m}, {n}) a = {a}: H = {}, H_n = {}", r.big_h, r.big_h_n)
            });
        }
        rows.push(json!({"m": m, "n": n, "consistent": consistent}));
    }
    c.detail = json!(rows);
    Ok(c)
}

fn k3_identity() -> Result<(Check, Option<K3Formula>)> {
    let mut c = Check::new("k3_identity");
    let mut winners = Vec::new();
    let mut rows = Vec::new();
    for m in [2, 3] {
        let v = adjudicate_k3(&FieldSpec::builtin(m)?)?;
        c.expect(v.winner.is_some(), || {
            format!(
                "m = {m}: split outcome, uncentered {} centered {} of {}",
                v.uncentered_matches,
                v.centered_matches,
                v.checks.len()
            )
        });
        rows.push(json!({
            "m": m,
            "elements": v.checks.len(),
            "uncentered_matches": v.uncentered_matches,
            "centered_matches": v.centered_matches,
            "winner": v.winner.map(K3Formula::as_str),
        }));
        winners.push(v.winner);
    }
    let winner = match winners.as_slice() {
        [w, rest @ ..] if rest.iter().all(|x| x == w) => *w,
        _ => None,
    };
    c.expect(winner.is_some(), || {
        "fields disagree on the K_3 form".into()
    });
    c.detail = json!({"fields": rows, "winner": winner.map(K3Formula::as_str)});
    Ok((c, winner))
}

fn subfield_nonzero(cfg: &RunConfig) -> Result<Check> {
    let mut c = Check::new("subfield_nonzero");
    for (m, n) in [(2, 2), (2, 3), (3, 2)] {
        let base = FieldSpec::builtin(m)?;
        let tower = Tower::new(&base, n)?;
        let mut rng = element_rng(cfg.seed, (m * 100 + n) as u64);
        for a in tower.nonzero_violations(&mut rng)? {
            c.failures
                .push(format!("({m}, {n}): K_n(a) = 0 for a = {a}"));
        }
    }
    Ok(c)
}

/// Runs every check; returns whether all passed.
pub fn verify(cfg: &RunConfig, out: &mut dyn Write) -> Result<bool, Failure> {
    let mut rng = element_rng(cfg.seed, u64::MAX);
    let (k3, winner) = k3_identity()?;
    let checks = vec![
        worked_example()?,
        group_law(cfg, &mut rng)?,
        valuation(cfg)?,
        towers(cfg)?,
        k3,
        subfield_nonzero(cfg)?,
    ];
    for check in &checks {
        emit(out, &check.record())?;
    }
    let failed: Vec<_> = checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| c.name)
        .collect();
    emit(
        out,
        &json!({
            "summary": true,
            "passed": failed.is_empty(),
            "failed": failed,
            "k3_winner": winner.map(K3Formula::as_str),
        }),
    )?;
    Ok(failed.is_empty())
}
