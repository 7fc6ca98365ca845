//! Text and JSON renderings of catalog entries, reports and solver results.
//!
//! JSON values are built as `serde_json::Value`, whose object maps are
//! key-sorted, so identical inputs give byte-identical output.

use serde_json::{json, Map, Value};

use tremor_core::catalog::{CheckTable, EstimateReport, QuantitySource, SystemSpec, Verdict};
use tremor_core::estimator::keplerian_check;
use tremor_core::solver::{Exponents, MonomialDisplay};
use tremor_core::{Quantity, Rational};

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

pub fn quantity_json(q: &Quantity) -> Value {
    let (sig, decade) = q.sci_parts();
    let short = q.short();
    let text = short.split(' ').next().unwrap_or_default().to_string();
    json!({
        "value": text,
        "significand": round6(sig),
        "decade": decade,
        "log10": round6(q.log10),
        "unit": q.dim.unit_string(),
    })
}

fn opt_quantity(q: Option<&Quantity>) -> Value {
    q.map(quantity_json).unwrap_or(Value::Null)
}

fn exponents_json(exps: &[(String, Rational)]) -> Value {
    let map: Map<String, Value> = exps
        .iter()
        .map(|(n, e)| (n.clone(), Value::String(e.to_string())))
        .collect();
    Value::Object(map)
}

fn source_json(src: Option<&QuantitySource>) -> Value {
    src.map(|s| Value::String(s.text().to_string())).unwrap_or(Value::Null)
}

pub fn verdict_label(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
        Verdict::Informational => "INFO",
    }
}

pub fn report_json(r: &EstimateReport) -> Value {
    let breakdown = r.breakdown.as_ref().map(|b| {
        let mut map: Map<String, Value> = b
            .fields()
            .iter()
            .map(|(n, q)| (n.to_string(), quantity_json(q)))
            .collect();
        map.insert("count_n".into(), json!(b.count_n));
        map.insert("keplerian_check".into(), json!(round6(keplerian_check(b))));
        Value::Object(map)
    });
    json!({
        "system_id": r.system_id,
        "value_set": r.value_set.as_str(),
        "output": r.output_kind,
        "value": opt_quantity(r.value.as_ref()),
        "reference": {
            "label": r.reference_label,
            "quantity": opt_quantity(r.reference.as_ref()),
        },
        "decades": r.decades.map(round6),
        "expected": r.expected.map(|(d, t)| json!({ "decades": d, "tol": t })),
        "verdict": r.verdict.as_str(),
        "breakdown": breakdown,
        "thermal": r.thermal.as_ref().map(|(o, q)| json!({ "output": o.as_str(), "value": quantity_json(q) })),
        "notes": r.notes,
        "error": r.error,
    })
}

pub fn table_json(t: &CheckTable, tolerance: Option<f64>) -> Value {
    json!({
        "value_set": t.value_set.as_str(),
        "tolerance_override": tolerance,
        "summary": {
            "total": t.reports.len(),
            "pass": t.count(Verdict::Pass),
            "fail": t.count(Verdict::Fail),
            "informational": t.count(Verdict::Informational),
        },
        "reports": t.reports.iter().map(report_json).collect::<Vec<_>>(),
    })
}

pub fn spec_json(s: &SystemSpec) -> Value {
    let params: Map<String, Value> = s
        .params
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.text().to_string())))
        .collect();
    json!({
        "id": s.id,
        "description": s.description,
        "cite": s.citation,
        "mass": source_json(s.constituent_mass.as_ref()),
        "radius": source_json(s.radius.as_ref()),
        "n": s.count_n,
        "params": params,
        "force": s.force_law.as_ref().map(|law| json!({
            "constants": exponents_json(law.constants()),
            "r_exp": law.radius_exponent().to_string(),
            "action": exponents_json(&law.action_exponents()),
        })),
        "thermal": s.thermal.as_ref().map(|t| json!({
            "output": t.output.as_str(),
            "temperature": source_json(t.temperature.as_ref()),
            "global_time": source_json(t.global_time.as_ref()),
            "n": t.count_n,
        })),
        "expect": s.expect.as_ref().map(|e| json!({
            "reference": e.reference.as_ref().map(|r| r.text().to_string()).unwrap_or_else(|| "h".into()),
            "decades": e.decades,
            "tol": e.tol,
            "informational": e.informational,
        })),
        "notes": s.notes,
    })
}

pub fn solution_json(exps: &Exponents) -> Value {
    json!({
        "status": "solved",
        "exponents": exponents_json(exps),
        "monomial": MonomialDisplay(exps).to_string(),
    })
}

pub fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn qty_line(q: &Quantity) -> String {
    format!("{}  (log10 {:.4})", q.short(), q.log10)
}

pub fn report_text(r: &EstimateReport) -> String {
    let mut out = format!("{}  [{} values]\n", r.system_id, r.value_set);
    if let Some(e) = &r.error {
        out.push_str(&format!("  error: {e}\n  verdict: {}\n", verdict_label(r.verdict)));
        return out;
    }
    if let Some(v) = &r.value {
        out.push_str(&format!("  {:<22}{}\n", r.output_kind, qty_line(v)));
    }
    if let Some(q) = &r.reference {
        out.push_str(&format!(
            "  {:<22}{}\n",
            format!("reference {}", r.reference_label),
            qty_line(q)
        ));
    }
    if let Some(d) = r.decades {
        let expected = match r.expected {
            Some((e, t)) => format!("  (expected {e:+.2} ± {t:.2})"),
            None => String::new(),
        };
        out.push_str(&format!("  {:<22}{d:+.2}{expected}\n", "decades"));
    }
    out.push_str(&format!("  {:<22}{}\n", "verdict", verdict_label(r.verdict)));
    if let Some((o, q)) = &r.thermal {
        out.push_str(&format!("  {:<22}{}\n", o.as_str(), qty_line(q)));
    }
    if let Some(b) = &r.breakdown {
        out.push_str(&format!("  breakdown (N = {:e}):\n", b.count_n));
        for (name, q) in b.fields() {
            out.push_str(&format!("    {:<22}{}\n", name, qty_line(&q)));
        }
        out.push_str(&format!("    {:<22}{:.2e}\n", "keplerian_check", keplerian_check(b)));
    }
    for n in &r.notes {
        out.push_str(&format!("  note: {n}\n"));
    }
    out
}

pub fn table_text(t: &CheckTable) -> String {
    let mut out = format!(
        "{:<26} {:<18} {:>12} {:>8} {:>14}  {}\n",
        "id", "output", "value", "decades", "expected", "verdict"
    );
    for r in &t.reports {
        let value = r
            .value
            .map(|q| q.short().split(' ').next().unwrap_or_default().to_string());
        let expected = r
            .expected
            .map(|(e, tol)| format!("{e:+.2}±{tol:.2}"))
            .unwrap_or_else(|| "-".into());
        out.push_str(&format!(
            "{:<26} {:<18} {:>12} {:>8} {:>14}  {}\n",
            r.system_id,
            r.output_kind,
            value.unwrap_or_else(|| "-".into()),
            r.decades.map(|d| format!("{d:+.2}")).unwrap_or_else(|| "-".into()),
            expected,
            verdict_label(r.verdict),
        ));
        if let Some(e) = &r.error {
            out.push_str(&format!("    error: {e}\n"));
        }
        for n in &r.notes {
            out.push_str(&format!("    note: {n}\n"));
        }
    }
    out.push_str(&format!(
        "\n{} entries [{} values]: {} pass, {} fail, {} informational\n",
        t.reports.len(),
        t.value_set,
        t.count(Verdict::Pass),
        t.count(Verdict::Fail),
        t.count(Verdict::Informational),
    ));
    out
}

pub fn spec_text(s: &SystemSpec) -> String {
    let mut out = format!("{}\n  {}\n  cite: {}\n", s.id, s.description, s.citation);
    let mut line = |k: &str, v: String| out.push_str(&format!("  {k:<14}{v}\n"));
    if let Some(m) = &s.constituent_mass {
        line("mass", m.text().to_string());
    }
    if let Some(r) = &s.radius {
        line("radius", r.text().to_string());
    }
    if let Some(n) = s.count_n {
        line("n", format!("{n:e}"));
    }
    for (k, v) in &s.params {
        line(k, v.text().to_string());
    }
    if let Some(law) = &s.force_law {
        let mut exps = law.constants().to_vec();
        exps.push(("R".into(), law.radius_exponent()));
        line("force", MonomialDisplay(&exps).to_string());
        line("action", MonomialDisplay(&law.action_exponents()).to_string());
    }
    if let Some(t) = &s.thermal {
        line("thermal", t.output.as_str().to_string());
        if let Some(q) = &t.temperature {
            line("temperature", q.text().to_string());
        }
        if let Some(q) = &t.global_time {
            line("global_time", q.text().to_string());
        }
        if let Some(n) = t.count_n {
            line("thermal n", format!("{n:e}"));
        }
    }
    if let Some(e) = &s.expect {
        let reference = e.reference.as_ref().map(|r| r.text()).unwrap_or("h");
        let tag = if e.informational { " (informational)" } else { "" };
        line(
            "expect",
            format!("{:+.2} ± {:.2} decades from {reference}{tag}", e.decades, e.tol),
        );
    }
    for n in &s.notes {
        out.push_str(&format!("  note: {n}\n"));
    }
    out
}
