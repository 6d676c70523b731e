//! Deterministic serialization: JSON with sorted keys and floats rounded to
//! 12 significant digits, and CSV with fixed headers.

use serde::Serialize;
use serde_json::Value;

use crate::config::OutputFormat;
use crate::error::{Error, Result};
use crate::homology::PeriodChart;
use crate::saddle::SaddleConnection;
use crate::strata::StratumRow;
use crate::sweep::SweepTable;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to 12 significant digits; non-finite values become strings.
pub fn round_sig(x: f64) -> Value {
    if !x.is_finite() {
        return Value::String(format!("{x}"));
    }
    if x == 0.0 {
        return Value::from(0.0);
    }
    let r: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap();
    if r.fract() == 0.0 && r.abs() < 1e15 {
        // Keep integers integral so exact counts print without a decimal tail.
        Value::from(r as i64)
    } else {
        Value::from(r)
    }
}

fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => round_sig(n.as_f64().unwrap()),
        Value::Array(a) => Value::Array(a.into_iter().map(normalize).collect()),
        // serde_json's default map is ordered by key.
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, normalize(v))).collect()),
        other => other,
    }
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    normalize(serde_json::to_value(x).expect("report serializes"))
}

pub fn to_json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(&to_value(x)).expect("report serializes");
    s.push('\n');
    s
}

fn fmt_f(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let r: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap();
    format!("{r}")
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8 csv")
}

/// Columns `length,re,im,start,end`, in enumeration order (length, angle).
pub fn saddles_csv(list: &[SaddleConnection]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["length", "re", "im", "start", "end"]).unwrap();
    for sc in list {
        w.write_record([
            fmt_f(sc.length),
            fmt_f(sc.holonomy.re),
            fmt_f(sc.holonomy.im),
            sc.start_mark.to_string(),
            sc.end_mark.to_string(),
        ])
        .unwrap();
    }
    finish(w)
}

pub fn periods_csv(chart: &PeriodChart) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["cycle_id", "re", "im"]).unwrap();
    for (j, z) in chart.period_vector.iter().enumerate() {
        w.write_record([j.to_string(), fmt_f(z.re), fmt_f(z.im)]).unwrap();
    }
    finish(w)
}

pub fn format_signature(m: &[u32]) -> String {
    let parts: Vec<String> = m.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

pub fn strata_csv(rows: &[StratumRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["depth", "signature", "aut_order", "proj_dimension"]).unwrap();
    for r in rows {
        w.write_record([
            r.depth.to_string(),
            format_signature(&r.signature),
            r.aut_order.to_string(),
            r.proj_dimension.to_string(),
        ])
        .unwrap();
    }
    finish(w)
}

/// Columns `param,value,flags` (flags joined by `;`), then a footer of
/// `# slope,intercept,r2` lines.
pub fn sweep_csv(t: &SweepTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["param", "value", "flags"]).unwrap();
    for r in &t.rows {
        w.write_record([
            fmt_f(r.param),
            r.value.map(fmt_f).unwrap_or_else(|| "nan".into()),
            r.flags.join(";"),
        ])
        .unwrap();
    }
    let mut out = finish(w);
    match &t.fit {
        Some(f) => {
            out.push_str(&format!("# slope,{}\n", fmt_f(f.slope)));
            out.push_str(&format!("# intercept,{}\n", fmt_f(f.intercept)));
            out.push_str(&format!("# r2,{}\n", fmt_f(f.r2)));
        }
        None => out.push_str("# fit,unavailable\n"),
    }
    out
}

/// Anything that can be emitted by the CLI.
pub enum Report<'a> {
    Saddles(&'a [SaddleConnection]),
    Periods(&'a PeriodChart),
    Strata(&'a [StratumRow]),
    Sweep(&'a SweepTable),
    Json(Value),
}

pub fn emit(report: &Report<'_>, format: OutputFormat) -> Result<String> {
    match (report, format) {
        (Report::Saddles(l), OutputFormat::Csv) => Ok(saddles_csv(l)),
        (Report::Periods(c), OutputFormat::Csv) => Ok(periods_csv(c)),
        (Report::Strata(r), OutputFormat::Csv) => Ok(strata_csv(r)),
        (Report::Sweep(t), OutputFormat::Csv) => Ok(sweep_csv(t)),
        (Report::Json(_), OutputFormat::Csv) => Err(Error::UnsupportedFormat(
            "this report has no CSV form; use json".into(),
        )),
        (Report::Saddles(l), OutputFormat::Json) => Ok(to_json(l)),
        (Report::Periods(c), OutputFormat::Json) => Ok(to_json(c)),
        (Report::Strata(r), OutputFormat::Json) => Ok(to_json(r)),
        (Report::Sweep(t), OutputFormat::Json) => Ok(to_json(t)),
        (Report::Json(v), OutputFormat::Json) => Ok(to_json(v)),
    }
}
