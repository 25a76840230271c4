use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use serde::Serialize;
use serde_json::Value;

use nilsep::canonical::FormJson;
use nilsep::counting::{
    brute_force_orbit_count_with, conjecture_scan as scan, formula_census, gamma, representatives_census,
    CensusRow, OrbitAlgorithm,
};
use nilsep::indicator::{build_h_set, verify_h_separating, PolyJson};
use nilsep::invariants::{
    build_set, check_minimality, check_separating, minimal_set_kind, replay_claims, ClaimCheck, SetKind,
    VerificationReport,
};
use nilsep::matrices::{tuple_from_json, tuple_to_json};
use nilsep::{canonicalize, field_make, AnyField, CanonicalForm, Field, GaloisField, Gf, Strategy};

use crate::output::{csv, csv_with_header, emit, json};
use crate::{Check, Common, Format, Verdict};

fn finite_field(spec: &str) -> Result<GaloisField> {
    let field = field_make(spec).with_context(|| format!("bad field `{spec}`"))?;
    Ok(field.as_finite().context("this command needs a finite field")?.clone())
}

fn check_m(m: usize) -> Result<()> {
    ensure!(m >= 1, "--m must be at least 1");
    Ok(())
}

fn show(form: &CanonicalForm<Gf>, f: &GaloisField) -> String {
    form.display(f).to_string()
}

fn codes(v: &[Gf]) -> String {
    let parts: Vec<String> = v.iter().map(|g| g.code().to_string()).collect();
    format!("({})", parts.join(","))
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Verified
    } else {
        Verdict::Violated
    }
}

#[derive(Serialize)]
struct OrbitListing {
    field: String,
    m: usize,
    count: usize,
    orbits: Vec<FormJson>,
}

#[derive(Serialize)]
struct OrbitRow {
    index: usize,
    tag: String,
    form: String,
}

pub fn orbits(common: &Common, m: usize) -> Result<Verdict> {
    check_m(m)?;
    let f = finite_field(&common.field)?;
    let reps = nilsep::orbit_representatives(&f, m)?;
    let content = match common.format {
        Format::Json => json(&OrbitListing {
            field: f.spec_string(),
            m,
            count: reps.len(),
            orbits: reps.iter().map(|r| r.to_json(&f)).collect(),
        })?,
        Format::Csv => {
            let rows: Vec<OrbitRow> = reps
                .iter()
                .enumerate()
                .map(|(index, r)| OrbitRow { index, tag: format!("{:?}", r.tag()), form: show(r, &f) })
                .collect();
            csv(&rows)?
        }
        Format::Text => reps.iter().map(|r| show(r, &f) + "\n").collect(),
    };
    emit(common.out.as_deref(), &content)?;
    Ok(Verdict::Verified)
}

#[derive(Serialize)]
struct CountReport {
    #[serde(flatten)]
    row: CensusRow,
    kappa_representatives: Option<u64>,
    #[serde(rename = "match")]
    agree: bool,
}

pub fn count(common: &Common, m: usize, n: usize, check: Check, budget: u128) -> Result<Verdict> {
    check_m(m)?;
    ensure!(n == 2 || n == 3, "--n must be 2 or 3");
    let f = finite_field(&common.field)?;
    let strategy = Strategy::default();
    let q = f.q() as u64;
    if n == 3 && matches!(check, Check::Formula | Check::Representatives) {
        bail!("only brute force is available for n = 3");
    }
    let formula = (n == 2).then(|| formula_census(&f, m)).transpose()?;
    let reps = (n == 2 && matches!(check, Check::Representatives | Check::All))
        .then(|| representatives_census(&f, m, strategy))
        .transpose()?;
    let brute = matches!(check, Check::BruteForce | Check::All)
        .then(|| brute_force_orbit_count_with(&f, n, m, budget, OrbitAlgorithm::default_for(f.q(), n), strategy))
        .transpose()?;
    let counts: Vec<u64> = [&formula, &reps, &brute].into_iter().flatten().map(|c| c.count).collect();
    let agree = counts.windows(2).all(|w| w[0] == w[1]);
    let report = CountReport {
        row: CensusRow {
            q,
            n,
            m,
            kappa_formula: formula.as_ref().map(|c| c.count.to_string()),
            kappa_bruteforce: brute.as_ref().map(|c| c.count),
            gamma: if n == 2 { Some(gamma(q, m as u32)?) } else { None },
        },
        kappa_representatives: reps.as_ref().map(|c| c.count),
        agree,
    };
    let content = match common.format {
        Format::Json => json(&report)?,
        Format::Csv => csv(std::slice::from_ref(&report.row))?,
        Format::Text => {
            let mut s = format!("q={q} n={n} m={m}\n");
            if let Some(c) = &formula {
                writeln!(s, "kappa={}", c.count)?;
            }
            if let Some(g) = report.row.gamma {
                writeln!(s, "gamma={g}")?;
            }
            if let Some(c) = &reps {
                writeln!(s, "representatives={}", c.count)?;
            }
            if let Some(c) = &brute {
                writeln!(s, "brute-force={}", c.count)?;
            }
            writeln!(s, "match={agree}")?;
            s
        }
    };
    emit(common.out.as_deref(), &content)?;
    Ok(verdict(agree))
}

pub fn verify_separating(common: &Common, m: usize, kind: SetKind) -> Result<Verdict> {
    check_m(m)?;
    let f = finite_field(&common.field)?;
    let set = build_set(kind, &f, m)?;
    let separation = check_separating(&set, &f, m)?;
    let minimality = if separation.separating { Some(check_minimality(&set, &f, m)?) } else { None };
    let report = VerificationReport::new(&set, &f, &separation, minimality.as_ref());
    let content = match common.format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let (a, b) = separation
                .counterexample
                .as_ref()
                .map(|(a, b)| (show(a, &f), show(b, &f)))
                .unwrap_or_default();
            let row = vec![
                kind.to_string(),
                f.q().to_string(),
                m.to_string(),
                set.len().to_string(),
                report.separating.to_string(),
                report.minimal.map(|x| x.to_string()).unwrap_or_default(),
                a,
                b,
            ];
            csv_with_header(&["set", "q", "m", "size", "separating", "minimal", "witness_a", "witness_b"], &[row])?
        }
        Format::Text => {
            let mut s = format!("set={kind} q={} m={m} size={}\n", f.q(), set.len());
            writeln!(s, "separating={}", report.separating)?;
            if let Some((a, b)) = &separation.counterexample {
                let va = set.eval(&a.materialize(&f), &f)?;
                writeln!(s, "witness={} | {}", show(a, &f), show(b, &f))?;
                writeln!(s, "values={}", codes(&va))?;
            }
            if let Some(r) = &minimality {
                writeln!(s, "minimal={}", r.minimal)?;
                for e in r.entries.iter().filter(|e| e.witness.is_none()) {
                    writeln!(s, "redundant={}", e.element)?;
                }
            }
            s
        }
    };
    emit(common.out.as_deref(), &content)?;
    Ok(verdict(separation.separating))
}

#[derive(Serialize)]
struct ClaimJson {
    claim: u8,
    element: String,
    a: Value,
    b: Value,
    value_a: Value,
    value_b: Value,
    holds: bool,
}

#[derive(Serialize)]
struct MinimalReport {
    field: String,
    set: String,
    report: Option<VerificationReport>,
    claims: Vec<ClaimJson>,
}

fn claim_json<F: Field>(c: &ClaimCheck<F::Elem>, f: &F) -> ClaimJson {
    let (va, vb) = c.element_values();
    ClaimJson {
        claim: c.claim,
        element: c.element.label(f),
        a: tuple_to_json(&c.a, f),
        b: tuple_to_json(&c.b, f),
        value_a: f.elem_to_json(&va),
        value_b: f.elem_to_json(&vb),
        holds: c.holds(),
    }
}

pub fn verify_minimal(common: &Common, m: Option<usize>, kind: SetKind) -> Result<Verdict> {
    let field = field_make(&common.field).with_context(|| format!("bad field `{}`", common.field))?;
    let (report, minimality, claims, f) = match &field {
        AnyField::Rational(q) => {
            ensure!(
                matches!(kind, SetKind::S | SetKind::S2),
                "only the trace sets S and S2 are defined over the rationals"
            );
            let mut checks = replay_claims(q)?;
            if kind == SetKind::S2 {
                checks.retain(|c| c.claim == 3);
            }
            let claims: Vec<ClaimJson> = checks.iter().map(|c| claim_json(c, q)).collect();
            (None, None, claims, None)
        }
        AnyField::Finite(f) => {
            let m = m.context("--m is required for finite fields")?;
            check_m(m)?;
            let set = build_set(kind, f, m)?;
            let separation = check_separating(&set, f, m)?;
            let minimality = check_minimality(&set, f, m)?;
            let report = VerificationReport::new(&set, f, &separation, Some(&minimality));
            let claims = if kind == minimal_set_kind(f) {
                replay_claims(f)?.iter().map(|c| claim_json(c, f)).collect()
            } else {
                Vec::new()
            };
            (Some(report), Some(minimality), claims, Some(f))
        }
    };
    let ok = report.as_ref().is_none_or(|r| r.minimal == Some(true)) && claims.iter().all(|c| c.holds);
    let content = match common.format {
        Format::Json => json(&MinimalReport { field: field.spec_string(), set: kind.to_string(), report, claims })?,
        Format::Csv => {
            let mut rows = Vec::new();
            if let (Some(r), Some(f)) = (&minimality, f) {
                for e in &r.entries {
                    let (a, b) = e.witness.as_ref().map(|(a, b)| (show(a, f), show(b, f))).unwrap_or_default();
                    rows.push(vec![e.element.clone(), a, b, String::new(), String::new(), e.witness.is_some().to_string()]);
                }
            }
            for c in &claims {
                rows.push(vec![
                    format!("claim {} {}", c.claim, c.element),
                    c.a.to_string(),
                    c.b.to_string(),
                    c.value_a.to_string(),
                    c.value_b.to_string(),
                    c.holds.to_string(),
                ]);
            }
            csv_with_header(&["item", "a", "b", "value_a", "value_b", "ok"], &rows)?
        }
        Format::Text => {
            let mut s = format!("field={} set={kind}\n", field.spec_string());
            if let (Some(r), Some(f)) = (&minimality, f) {
                writeln!(s, "separating={}", r.separating)?;
                writeln!(s, "minimal={}", r.minimal)?;
                for e in &r.entries {
                    match &e.witness {
                        Some((a, b)) => writeln!(s, "{}: {} | {}", e.element, show(a, f), show(b, f))?,
                        None => writeln!(s, "{}: none", e.element)?,
                    }
                }
            }
            for c in &claims {
                writeln!(
                    s,
                    "claim {} {}: {} vs {} on {} | {} holds={}",
                    c.claim, c.element, c.value_a, c.value_b, c.a, c.b, c.holds
                )?;
            }
            s
        }
    };
    emit(common.out.as_deref(), &content)?;
    Ok(verdict(ok))
}

#[derive(Serialize)]
struct HOrbit {
    form: FormJson,
    values: Vec<u32>,
}

#[derive(Serialize)]
struct HPoly {
    h: usize,
    degree: i64,
    poly: PolyJson,
}

#[derive(Serialize)]
struct HReport {
    field: String,
    m: usize,
    kappa: usize,
    gamma: usize,
    lower_bound: u32,
    separating: bool,
    no_smaller_subset: bool,
    counting_bound: bool,
    orbits: Vec<HOrbit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    polys: Option<Vec<HPoly>>,
}

pub fn build_h(common: &Common, m: usize, with_polys: bool) -> Result<Verdict> {
    check_m(m)?;
    let f = finite_field(&common.field)?;
    let strategy = Strategy::default();
    let h = build_h_set(&f, m, None, strategy)?;
    let v = verify_h_separating(&h);
    let polys = if with_polys {
        let mut out = Vec::with_capacity(h.len());
        for i in 0..h.len() {
            let p = h.poly(i, &f, strategy)?;
            out.push(HPoly { h: i + 1, degree: p.degree(), poly: p.to_json(&f) });
        }
        Some(out)
    } else {
        None
    };
    let reps = &h.table.reps;
    let content = match common.format {
        Format::Json => json(&HReport {
            field: f.spec_string(),
            m,
            kappa: h.kappa(),
            gamma: h.len(),
            lower_bound: v.lower_bound,
            separating: v.separating(),
            no_smaller_subset: v.no_smaller_subset,
            counting_bound: v.counting_bound,
            orbits: (0..h.kappa())
                .map(|j| HOrbit {
                    form: reps[j].to_json(&f),
                    values: h.orbit_vector(j).iter().map(|g| g.code()).collect(),
                })
                .collect(),
            polys,
        })?,
        Format::Csv => {
            let mut header = vec!["orbit".to_string(), "form".to_string()];
            header.extend((1..=h.len()).map(|i| format!("h{i}")));
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let rows: Vec<Vec<String>> = (0..h.kappa())
                .map(|j| {
                    let mut r = vec![j.to_string(), show(&reps[j], &f)];
                    r.extend(h.orbit_vector(j).iter().map(|g| g.code().to_string()));
                    r
                })
                .collect();
            csv_with_header(&header, &rows)?
        }
        Format::Text => {
            let mut s = format!("field={} m={m} kappa={} gamma={}\n", f.spec_string(), h.kappa(), h.len());
            writeln!(s, "separating={}", v.separating())?;
            writeln!(s, "no_smaller_subset={}", v.no_smaller_subset)?;
            writeln!(s, "counting_bound={}", v.counting_bound)?;
            for j in 0..h.kappa() {
                writeln!(s, "{} -> {}", show(&reps[j], &f), codes(&h.orbit_vector(j)))?;
            }
            if let Some(ps) = &polys {
                for p in ps {
                    writeln!(s, "h{} degree={} terms={}", p.h, p.degree, p.poly.terms.len())?;
                }
            }
            s
        }
    };
    emit(common.out.as_deref(), &content)?;
    Ok(verdict(v.holds()))
}

pub fn conjecture_scan(
    specs: &[String],
    n: usize,
    m: usize,
    budget: u128,
    format: Format,
    out: Option<&Path>,
) -> Result<Verdict> {
    check_m(m)?;
    ensure!(n == 2 || n == 3, "--n must be 2 or 3");
    let fields = specs.iter().map(|s| finite_field(s)).collect::<Result<Vec<_>>>()?;
    let report = scan(n, m, &fields, budget, Strategy::default())?;
    let content = match format {
        Format::Json => json(&report)?,
        Format::Csv => csv(&report.rows)?,
        Format::Text => {
            let mut s = String::new();
            for r in &report.rows {
                writeln!(s, "q={} n={} m={} orbits={}", r.q, r.n, r.m, r.kappa_bruteforce.unwrap_or_default())?;
            }
            writeln!(s, "note: {}", report.note)?;
            s
        }
    };
    emit(out, &content)?;
    Ok(Verdict::Verified)
}

#[derive(Serialize)]
struct EvalValue {
    element: String,
    value: Value,
}

#[derive(Serialize)]
struct EvalReport {
    field: String,
    form: FormJson,
    display: String,
    witness: Vec<Value>,
    values: Vec<EvalValue>,
}

fn eval_in<F: Field>(f: &F, tuple: &str, kind: Option<SetKind>) -> Result<EvalReport> {
    let raw: Value = serde_json::from_str(tuple).context("--tuple is not valid JSON")?;
    let t = tuple_from_json(&raw, f)?;
    let (form, witness) = canonicalize(&t, f)?;
    ensure!(witness.verify(&t, &form, f), "canonicalization witness failed to verify");
    let values = match kind {
        Some(k) => {
            let set = build_set(k, f, t.m())?;
            set.members
                .iter()
                .map(|g| Ok(EvalValue { element: g.label(f), value: f.elem_to_json(&g.eval(&t, f)?) }))
                .collect::<Result<Vec<_>>>()?
        }
        None => Vec::new(),
    };
    let display = form.display(f).to_string();
    Ok(EvalReport {
        field: f.spec_string(),
        form: form.to_json(f),
        display,
        witness: witness.g.entries.iter().map(|x| f.elem_to_json(x)).collect(),
        values,
    })
}

pub fn eval(common: &Common, tuple: &str, kind: Option<SetKind>) -> Result<Verdict> {
    let field = field_make(&common.field).with_context(|| format!("bad field `{}`", common.field))?;
    let report = match &field {
        AnyField::Finite(f) => eval_in(f, tuple, kind)?,
        AnyField::Rational(q) => eval_in(q, tuple, kind)?,
    };
    let content = match common.format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .values
                .iter()
                .map(|v| vec![report.display.clone(), v.element.clone(), v.value.to_string()])
                .collect();
            csv_with_header(&["form", "element", "value"], &rows)?
        }
        Format::Text => {
            let mut s = format!("form={}\n", report.display);
            let w: Vec<String> = report.witness.iter().map(Value::to_string).collect();
            writeln!(s, "witness=[{}]", w.join(","))?;
            for v in &report.values {
                writeln!(s, "{}={}", v.element, v.value)?;
            }
            s
        }
    };
    emit(common.out.as_deref(), &content)?;
    Ok(Verdict::Verified)
}
