//! Report plumbing shared by all protocols.
//!
//! Reports serialize to JSON (schema shipped in `schema/report.schema.json`)
//! with snake_case field names, or to CSV with the same scalar fields
//! flattened into dotted column names. Every report embeds the schema and
//! artifact versions, the seed, and the full configuration, so a run can be
//! reproduced from its output alone.

use serde::Serialize;

/// Version of the report JSON layout.
pub const SCHEMA_VERSION: u32 = 1;

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MonteCarloStat {
    pub estimate: f64,
    pub std_error: f64,
}

impl MonteCarloStat {
    /// Estimate of a Bernoulli rate from `successes` out of `n`.
    pub fn rate(successes: u64, n: u64) -> MonteCarloStat {
        let p = successes as f64 / n as f64;
        MonteCarloStat {
            estimate: p,
            std_error: (p * (1.0 - p) / n as f64).sqrt(),
        }
    }

    /// Sample mean and standard error of the mean.
    pub fn mean(values_sum: f64, values_sq_sum: f64, n: u64) -> MonteCarloStat {
        let nf = n as f64;
        let mean = values_sum / nf;
        let var = (values_sq_sum / nf - mean * mean).max(0.0);
        MonteCarloStat {
            estimate: mean,
            std_error: (var / nf).sqrt(),
        }
    }

    /// True when `exact` lies within `k` standard errors (degenerate zero-
    /// error estimates must match exactly).
    pub fn agrees_with(&self, exact: f64, k: f64) -> bool {
        if self.std_error == 0.0 {
            (self.estimate - exact).abs() < 1e-12
        } else {
            (self.estimate - exact).abs() <= k * self.std_error
        }
    }
}

/// Pretty JSON with a trailing newline; field order follows the struct
/// definitions, so output is byte-identical for identical inputs.
pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

/// Two-line CSV: a header of dotted paths to every scalar leaf, then the
/// values, in the JSON field order.
pub fn to_csv<T: Serialize>(report: &T) -> String {
    let value = serde_json::to_value(report).expect("reports serialize");
    let mut columns = Vec::new();
    flatten("", &value, &mut columns);
    let header: Vec<&str> = columns.iter().map(|(k, _)| k.as_str()).collect();
    let row: Vec<String> = columns.iter().map(|(_, v)| v.clone()).collect();
    format!("{}\n{}\n", header.join(","), row.join(","))
}

fn flatten(prefix: &str, value: &serde_json::Value, out: &mut Vec<(String, String)>) {
    match value {
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                let path = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&path, v, out);
            }
        }
        serde_json::Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), v, out);
            }
        }
        serde_json::Value::Null => out.push((prefix.to_string(), String::new())),
        serde_json::Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
        serde_json::Value::Number(n) => out.push((prefix.to_string(), n.to_string())),
        serde_json::Value::String(s) => {
            let quoted = if s.contains(',') || s.contains('"') {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.clone()
            };
            out.push((prefix.to_string(), quoted));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Demo {
        name: &'static str,
        nested: Inner,
        values: [f64; 2],
    }

    #[derive(Serialize)]
    struct Inner {
        x: u32,
        flag: Option<bool>,
    }

    #[test]
    fn csv_flattens_scalars() {
        let demo = Demo {
            name: "demo",
            nested: Inner { x: 7, flag: None },
            values: [0.5, 1.5],
        };
        let csv = to_csv(&demo);
        assert_eq!(
            csv,
            "name,nested.x,nested.flag,values.0,values.1\ndemo,7,,0.5,1.5\n"
        );
    }

    #[test]
    fn stat_agreement() {
        let s = MonteCarloStat::rate(833, 1000);
        assert!(s.agrees_with(5.0 / 6.0, 4.0));
        assert!(!s.agrees_with(0.5, 4.0));
        let exact = MonteCarloStat::rate(0, 1000);
        assert!(exact.agrees_with(0.0, 4.0));
        assert!(!exact.agrees_with(0.001, 4.0));
    }

    #[test]
    fn json_is_deterministic() {
        let demo = Demo {
            name: "demo",
            nested: Inner { x: 7, flag: Some(true) },
            values: [0.5, 1.5],
        };
        assert_eq!(to_json(&demo), to_json(&demo));
    }
}
