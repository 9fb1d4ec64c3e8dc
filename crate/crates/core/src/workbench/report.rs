//! CSV, JSON and markdown renderings of the cache.

use serde::Serialize;

use super::cache::Cache;
use super::claims::VerificationRun;
use crate::brutecount::CountRecord;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Markdown,
}

impl Format {
    pub fn parse(s: &str) -> Option<Format> {
        Some(match s {
            "csv" => Format::Csv,
            "json" => Format::Json,
            "markdown" | "md" => Format::Markdown,
            _ => return None,
        })
    }
}

#[derive(Serialize)]
struct Document<'a> {
    counts: Vec<&'a CountRecord>,
    runs: &'a [VerificationRun],
}

fn opt(p: Option<u32>) -> String {
    p.map_or_else(String::new, |p| p.to_string())
}

fn verdict(pass: bool, finding: bool) -> &'static str {
    if finding {
        "finding"
    } else if pass {
        "pass"
    } else {
        "FAIL"
    }
}

pub fn render(cache: &Cache, format: Format) -> Result<String> {
    if cache.is_empty() {
        return Err(Error::Data {
            path: cache.path().display().to_string(),
            reason: "cache is empty".into(),
        });
    }
    Ok(render_parts(cache.counts().collect(), cache.runs(), format))
}

pub fn render_parts(counts: Vec<&CountRecord>, runs: &[VerificationRun], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Json => {
            out = serde_json::to_string_pretty(&Document { counts, runs }).expect("plain data serializes");
            out.push('\n');
        }
        Format::Csv => {
            out.push_str("kind,id,p,method,item,predicted,counted,result,wall_ms\n");
            for c in counts {
                out.push_str(&format!(
                    "count,{},{},{},,,{},,{:.3}\n",
                    c.variety_id,
                    c.p,
                    c.method.as_str(),
                    c.count,
                    c.wall_ms
                ));
            }
            for run in runs {
                for r in &run.rows {
                    out.push_str(&format!(
                        "verify,{},{},{},{},{},{},{},{:.3}\n",
                        r.claim,
                        opt(r.p),
                        r.methods,
                        r.item.replace(',', ";"),
                        r.predicted,
                        r.counted,
                        verdict(r.pass, r.finding),
                        r.wall_ms
                    ));
                }
            }
        }
        Format::Markdown => {
            if !counts.is_empty() {
                out.push_str("## Point counts\n\n| variety | p | method | count | ms |\n|---|---|---|---|---|\n");
                for c in counts {
                    out.push_str(&format!(
                        "| {} | {} | {} | {} | {:.1} |\n",
                        c.variety_id,
                        c.p,
                        c.method.as_str(),
                        c.count,
                        c.wall_ms
                    ));
                }
                out.push('\n');
            }
            if !runs.is_empty() {
                out.push_str(
                    "## Verification runs\n\n| claim | p | item | predicted | counted | methods | result |\n|---|---|---|---|---|---|---|\n",
                );
                for run in runs {
                    for r in &run.rows {
                        let claim = if run.conjecture {
                            format!("{} (conjecture)", r.claim)
                        } else {
                            r.claim.clone()
                        };
                        out.push_str(&format!(
                            "| {} | {} | {} | {} | {} | {} | {} |\n",
                            claim,
                            opt(r.p),
                            r.item.replace('|', "\\|"),
                            r.predicted,
                            r.counted,
                            r.methods,
                            verdict(r.pass, r.finding)
                        ));
                    }
                }
            }
        }
    }
    out
}

/// A single run as a table, for the `verify` command.
pub fn render_run(run: &VerificationRun, format: Format) -> String {
    let mut out = render_parts(Vec::new(), std::slice::from_ref(run), format);
    if format == Format::Markdown {
        out.push_str(&format!("\n{}: {}\n", run.claim, run.summary));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brutecount::Method;
    use crate::workbench::claims::VerificationRow;

    fn sample() -> (CountRecord, VerificationRun) {
        let c = CountRecord {
            variety_id: "v32".into(),
            p: 3,
            method: Method::Brute,
            count: 364,
            wall_ms: 0.5,
        };
        let run = VerificationRun {
            claim: "thm-count-32".into(),
            statement: String::new(),
            conjecture: false,
            pmin: 3,
            pmax: 3,
            rows: vec![VerificationRow {
                claim: "thm-count-32".into(),
                p: Some(3),
                item: "v32".into(),
                predicted: 364,
                counted: 364,
                methods: "brute/formula".into(),
                pass: true,
                finding: false,
                wall_ms: 1.0,
            }],
            pass: true,
            summary: "1 of 1 rows pass".into(),
        };
        (c, run)
    }

    #[test]
    fn formats() {
        let (c, run) = sample();
        let runs = [run];
        let csv = render_parts(vec![&c], &runs, Format::Csv);
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.lines().all(|l| l.split(',').count() == 9));
        let md = render_parts(vec![&c], &runs, Format::Markdown);
        assert!(md.contains("| thm-count-32 | 3 | v32 | 364 | 364 | brute/formula | pass |"));
        let json: serde_json::Value = serde_json::from_str(&render_parts(vec![&c], &runs, Format::Json)).unwrap();
        assert_eq!(json["counts"][0]["method"], "brute");
        assert!(json["counts"][0]["wall_ms"].is_number());
    }
}
