//! Text, CSV and JSON renderings.

use std::io::Write;

use serde::{Deserialize, Serialize};
use tripart::qfield::{QuadExpr, Rational};
use tripart::scheduler::Schedule;

/// Significant digits for every decimal rendering of an exact value.
pub const DIGITS: usize = 30;

pub fn decimal(x: &QuadExpr) -> String {
    x.to_decimal(DIGITS)
}

pub fn rational(x: &Rational) -> String {
    decimal(&QuadExpr::rational(x.clone()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub n: u64,
    pub label: String,
    pub count_a: u64,
    pub count_b: u64,
    pub count_c: u64,
    pub deviation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub demands: [u64; 3],
    pub alpha: String,
    pub beta: String,
    pub gamma: String,
    /// Demand index used for the alpha, beta and gamma roles.
    pub roles: [usize; 3],
    pub fairness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleDoc {
    pub header: Header,
    pub rows: Vec<Row>,
}

pub fn rows(s: &Schedule) -> Vec<Row> {
    s.rows()
        .into_iter()
        .map(|r| Row {
            n: r.n,
            label: r.label.to_string(),
            count_a: r.counts[0],
            count_b: r.counts[1],
            count_c: r.counts[2],
            deviation: rational(&r.deviation),
        })
        .collect()
}

pub fn doc(s: &Schedule) -> ScheduleDoc {
    ScheduleDoc {
        header: Header {
            tool: "tripart".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            demands: s.spec.demands(),
            alpha: s.triple.alpha().value().to_string(),
            beta: s.triple.beta().value().to_string(),
            gamma: s.triple.gamma().value().to_string(),
            roles: s.roles,
            fairness: rational(&s.fairness),
        },
        rows: rows(s),
    }
}

pub fn write_csv<W: Write>(out: W, s: &Schedule) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows(s) {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(mut out: W, s: &Schedule) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, &doc(s))?;
    writeln!(out)
}
