use std::fmt::Write;

use clap::ValueEnum;
use numrad::bounds::{BoundReport, CatalogEntry, ProbeOutcome};
use numrad::ensemble::{StudyReport, TIGHT_THRESHOLD};
use numrad::radius::RadiusEstimate;
use numrad::Error;
use serde::Serialize;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Human,
    Json,
    Csv,
}

pub struct BoundRow {
    pub label: String,
    pub diagnostic: bool,
    pub outcome: ProbeOutcome,
}

/// Six significant digits.
fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        format!("{:.*}", (5 - exp).max(0) as usize, x)
    } else {
        format!("{x:.5e}")
    }
}

/// Seventeen significant digits.
fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String, Error> {
    let mut s =
        serde_json::to_string_pretty(value).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn status(r: &BoundReport) -> &'static str {
    if r.violated {
        "VIOLATED"
    } else if r.relative_slack() < TIGHT_THRESHOLD {
        "TIGHT"
    } else {
        "OK"
    }
}

#[derive(Serialize)]
struct RadiusView<'a> {
    lower: f64,
    upper: f64,
    width: f64,
    theta_star: f64,
    grid_points: usize,
    refinement_iters: usize,
    evaluations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<f64>,
    seed: u64,
    witness: &'a [num_complex::Complex64],
}

pub fn radius(est: &RadiusEstimate, output: Output) -> Result<String, Error> {
    let mut s = String::new();
    match output {
        Output::Human => {
            writeln!(s, "omega       {}", sig6(est.lower)).unwrap();
            writeln!(s, "lower       {}", sig6(est.lower)).unwrap();
            writeln!(s, "upper       {}", sig6(est.upper)).unwrap();
            writeln!(s, "width       {}", sig6(est.width())).unwrap();
            writeln!(s, "theta_star  {}", sig6(est.theta_star)).unwrap();
            writeln!(s, "grid_points {}", est.grid_points).unwrap();
            if let Some(o) = est.oracle {
                writeln!(s, "oracle      {}", sig6(o)).unwrap();
            }
        }
        Output::Json => {
            s = to_json(&RadiusView {
                lower: est.lower,
                upper: est.upper,
                width: est.width(),
                theta_star: est.theta_star,
                grid_points: est.grid_points,
                refinement_iters: est.refinement_iters,
                evaluations: est.evaluations,
                oracle: est.oracle,
                seed: est.seed,
                witness: &est.witness,
            })?;
        }
        Output::Csv => {
            s.push_str("lower,upper,theta_star,grid_points,refinement_iters,oracle\n");
            let oracle = est.oracle.map(sig17).unwrap_or_default();
            writeln!(
                s,
                "{},{},{},{},{},{oracle}",
                sig17(est.lower),
                sig17(est.upper),
                sig17(est.theta_star),
                est.grid_points,
                est.refinement_iters
            )
            .unwrap();
        }
    }
    Ok(s)
}

#[derive(Serialize)]
struct BoundsView<'a> {
    results: Vec<BoundEntryView<'a>>,
    skipped: &'a [String],
}

#[derive(Serialize)]
struct BoundEntryView<'a> {
    bound_id: &'a str,
    diagnostic: bool,
    violated: bool,
    #[serde(flatten)]
    outcome: &'a ProbeOutcome,
}

pub fn bounds(rows: &[BoundRow], skipped: &[String], output: Output) -> Result<String, Error> {
    let mut s = String::new();
    match output {
        Output::Human => {
            writeln!(
                s,
                "{:<12} {:>13} {:>13} {:>13}  status",
                "bound_id", "lhs", "rhs", "slack"
            )
            .unwrap();
            for row in rows {
                let r = row.outcome.summary();
                let note = if row.diagnostic { "  (diagnostic)" } else { "" };
                writeln!(
                    s,
                    "{:<12} {:>13} {:>13} {:>13}  {}{note}",
                    row.label,
                    sig6(r.lhs),
                    sig6(r.rhs),
                    sig6(r.slack),
                    status(r)
                )
                .unwrap();
            }
            for row in rows {
                for c in row.outcome.checks() {
                    let verdict = if c.holds { "holds" } else { "FAILS" };
                    writeln!(
                        s,
                        "check {}:{}  {} vs {}  {verdict}",
                        row.label,
                        c.check_id,
                        sig6(c.left),
                        sig6(c.right)
                    )
                    .unwrap();
                }
            }
            if !skipped.is_empty() {
                writeln!(s, "skipped (two-operand lemmas): {}", skipped.join(", ")).unwrap();
            }
        }
        Output::Json => {
            let results = rows
                .iter()
                .map(|r| BoundEntryView {
                    bound_id: &r.label,
                    diagnostic: r.diagnostic,
                    violated: r.outcome.violated(),
                    outcome: &r.outcome,
                })
                .collect();
            s = to_json(&BoundsView { results, skipped })?;
        }
        Output::Csv => {
            s.push_str("bound_id,lhs,rhs,slack,violated\n");
            for row in rows {
                let r = row.outcome.summary();
                writeln!(
                    s,
                    "{},{},{},{},{}",
                    row.label,
                    sig17(r.lhs),
                    sig17(r.rhs),
                    sig17(r.slack),
                    r.violated
                )
                .unwrap();
                for c in row.outcome.checks() {
                    writeln!(
                        s,
                        "{}:{},{},{},{},{}",
                        row.label,
                        c.check_id,
                        sig17(c.left),
                        sig17(c.right),
                        sig17(c.right - c.left),
                        !c.holds
                    )
                    .unwrap();
                }
            }
        }
    }
    Ok(s)
}

pub fn study(report: &StudyReport, output: Output) -> Result<String, Error> {
    Ok(match output {
        Output::Json => {
            let mut s = report.to_json()?;
            s.push('\n');
            s
        }
        Output::Csv => report.to_csv(),
        Output::Human => {
            let mut s = String::new();
            let spec = &report.spec;
            writeln!(
                s,
                "family {} dim {} count {} seed {}  ({:.2}s)",
                spec.family, spec.dimension, spec.count, spec.seed, report.elapsed_seconds
            )
            .unwrap();
            writeln!(
                s,
                "{:<16} {:>10} {:>13} {:>13} {:>13} {:>8}",
                "bound_id", "violations", "min slack", "median slack", "max slack", "tight"
            )
            .unwrap();
            for (label, count) in &report.violations {
                match report.slack_stats.get(label) {
                    Some(st) => writeln!(
                        s,
                        "{label:<16} {count:>10} {:>13} {:>13} {:>13} {:>7.1}%",
                        sig6(st.min),
                        sig6(st.median),
                        sig6(st.max),
                        100.0 * report.tight_fraction.get(label).copied().unwrap_or(0.0)
                    ),
                    None => writeln!(s, "{label:<16} {count:>10}"),
                }
                .unwrap();
            }
            if !report.failures.is_empty() {
                writeln!(
                    s,
                    "{} evaluations failed; first: {:?}",
                    report.failures.len(),
                    report.failures[0]
                )
                .unwrap();
            }
            s
        }
    })
}

#[derive(Serialize)]
struct CatalogView<'a> {
    id: &'a str,
    description: &'a str,
    arity: usize,
}

pub fn catalog(entries: &[CatalogEntry], output: Output) -> Result<String, Error> {
    let mut s = String::new();
    match output {
        Output::Json => {
            let view: Vec<_> = entries
                .iter()
                .map(|e| CatalogView {
                    id: e.id,
                    description: e.description,
                    arity: e.arity,
                })
                .collect();
            s = to_json(&view)?;
        }
        Output::Human => {
            for e in entries {
                writeln!(
                    s,
                    "{:<12} arity {}  {}  [{}]",
                    e.id, e.arity, e.description, e.origin
                )
                .unwrap();
            }
        }
        Output::Csv => {
            s.push_str("id,arity,description,origin\n");
            for e in entries {
                writeln!(
                    s,
                    "{},{},\"{}\",\"{}\"",
                    e.id, e.arity, e.description, e.origin
                )
                .unwrap();
            }
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_digits() {
        assert_eq!(sig6(0.25), "0.250000");
        assert_eq!(sig6(123.456789), "123.457");
        assert_eq!(sig6(1.0e-7), "1.00000e-7");
        assert_eq!(sig6(0.0), "0");
    }
}
