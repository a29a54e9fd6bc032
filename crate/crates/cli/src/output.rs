use fatmod::enumeration::OrbifoldCensus;
use fatmod::integrals::IntegralReport;
use fatmod::rational;
use serde::Serialize;

use crate::Format;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct CensusSummary {
    pub descriptor: String,
    pub classes: usize,
    pub mass: String,
}

impl CensusSummary {
    pub fn of(c: &OrbifoldCensus) -> Self {
        CensusSummary { descriptor: c.descriptor.clone(), classes: c.len(), mass: rational::to_string(&c.mass()) }
    }
}

#[derive(Serialize)]
struct Document<'a, T> {
    schema_version: u32,
    #[serde(flatten)]
    body: &'a T,
}

#[derive(Serialize)]
struct Censuses<'a> {
    censuses: &'a [CensusSummary],
}

#[derive(Serialize)]
struct Reports<'a> {
    reports: &'a [IntegralReport],
}

fn json<T: Serialize>(body: &T) -> String {
    let mut s = serde_json::to_string_pretty(&Document { schema_version: SCHEMA_VERSION, body }).expect("serializable");
    s.push('\n');
    s
}

fn csv_text(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

pub fn render_census(cs: &[CensusSummary], format: Format) -> String {
    match format {
        Format::Json => json(&Censuses { censuses: cs }),
        Format::Csv => csv_text(
            &["descriptor", "classes", "mass"],
            cs.iter().map(|c| vec![c.descriptor.clone(), c.classes.to_string(), c.mass.clone()]),
        ),
        Format::Human => {
            let w = cs.iter().map(|c| c.descriptor.len()).max().unwrap_or(0).max(10);
            let mut s = format!("{:<w$}  {:>8}  {}\n", "census", "classes", "mass");
            for c in cs {
                s.push_str(&format!("{:<w$}  {:>8}  {}\n", c.descriptor, c.classes, c.mass));
            }
            s
        }
    }
}

fn checks_text(r: &IntegralReport) -> String {
    r.cross_checks
        .iter()
        .map(|c| format!("{}={}", c.path, rational::to_string(&c.value)))
        .collect::<Vec<_>>()
        .join("; ")
}

pub fn render_reports(rs: &[IntegralReport], format: Format) -> String {
    match format {
        Format::Json => json(&Reports { reports: rs }),
        Format::Csv => csv_text(
            &["identity", "parameter", "index", "value_closed", "value_assembled", "match", "provenance", "sources", "cross_checks"],
            rs.iter().map(|r| {
                vec![
                    r.identity.to_string(),
                    r.parameter.clone(),
                    r.index.to_string(),
                    rational::to_string(&r.value_closed),
                    rational::to_string(&r.value_assembled),
                    r.matched.to_string(),
                    r.provenance.to_string(),
                    r.sources.join(" | "),
                    checks_text(r),
                ]
            }),
        ),
        Format::Human => {
            let mut s = String::new();
            for r in rs {
                let verdict = if r.matched { "match" } else { "MISMATCH" };
                s.push_str(&format!(
                    "{:<13} {}={:<3} closed {:<24} assembled {:<24} {} ({})\n",
                    r.identity.name(),
                    r.parameter,
                    r.index,
                    rational::to_string(&r.value_closed),
                    rational::to_string(&r.value_assembled),
                    verdict,
                    r.provenance
                ));
            }
            s
        }
    }
}
