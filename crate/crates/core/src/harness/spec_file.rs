//! Flat key=value sweep files. One `key = value` pair per line; blank
//! lines and lines starting with `#` are skipped; keys mirror the
//! `SweepSpec` fields. Unknown or duplicate keys are errors so a typo
//! cannot silently change an experiment.
//!
//! ```text
//! kind = crank_accuracy
//! n_grid = 10000, 40000, 100000
//! m_rule = power:1.0:0.55,0.6,0.65,0.7
//! k_list = 1
//! estimator = dyson
//! max_ratio = 2.0
//! out = reports/crank.csv
//! ```
//!
//! `m_rule` forms: `power:COEFF:E1,E2,...`, `sqrtlog:COEFF`,
//! `geometric:STEPS`, `list:V1,V2,...` (possibly empty), `all`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use super::{Estimator, MRule, PassThresholds, SweepKind, SweepSpec};
use crate::error::{Error, Result};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::SweepParse(msg.into())
}

fn parse_list<T: std::str::FromStr>(value: &str, key: &str) -> Result<Vec<T>> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(',')
        .map(|item| {
            item.trim()
                .parse::<T>()
                .map_err(|_| parse_err(format!("bad entry `{}` in {key}", item.trim())))
        })
        .collect()
}

fn parse_m_rule(value: &str) -> Result<MRule> {
    let (head, rest) = match value.split_once(':') {
        Some((h, r)) => (h.trim(), r),
        None => (value.trim(), ""),
    };
    match head {
        "power" => {
            let (coeff, exps) = rest
                .split_once(':')
                .ok_or_else(|| parse_err("power rule needs power:COEFF:E1,E2,..."))?;
            Ok(MRule::Power {
                coeff: coeff
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(format!("bad power coefficient `{coeff}`")))?,
                exponents: parse_list(exps, "m_rule exponents")?,
            })
        }
        "sqrtlog" => Ok(MRule::SqrtLog {
            coeff: rest
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("bad sqrtlog coefficient `{rest}`")))?,
        }),
        "geometric" => Ok(MRule::Geometric {
            steps: rest
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("bad geometric step count `{rest}`")))?,
        }),
        "list" => Ok(MRule::List(parse_list(rest, "m_rule list")?)),
        "all" if rest.is_empty() => Ok(MRule::All),
        other => Err(parse_err(format!("unknown m_rule form `{other}`"))),
    }
}

/// Parses a sweep description. Required keys: `kind`, `n_grid`. Optional:
/// `m_rule` (default empty list), `k_list` (default 1), `r` (default 0),
/// `estimator` (default dyson), `max_ratio`, `band_lo`+`band_hi`, `out`.
pub fn parse_sweep_spec(text: &str) -> Result<SweepSpec> {
    let mut pairs: BTreeMap<&str, &str> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err(format!("line {}: expected key = value", idx + 1)))?;
        let key = key.trim();
        if pairs.insert(key, value.trim()).is_some() {
            return Err(parse_err(format!("duplicate key `{key}`")));
        }
    }

    const KNOWN: [&str; 10] = [
        "kind",
        "n_grid",
        "m_rule",
        "k_list",
        "r",
        "estimator",
        "max_ratio",
        "band_lo",
        "band_hi",
        "out",
    ];
    for key in pairs.keys() {
        if !KNOWN.contains(key) {
            return Err(parse_err(format!("unknown key `{key}`")));
        }
    }

    let kind = SweepKind::parse(
        pairs
            .get("kind")
            .ok_or_else(|| parse_err("missing required key `kind`"))?,
    )?;
    let n_grid: Vec<u64> = parse_list(
        pairs
            .get("n_grid")
            .ok_or_else(|| parse_err("missing required key `n_grid`"))?,
        "n_grid",
    )?;
    let m_rule = match pairs.get("m_rule") {
        Some(v) => parse_m_rule(v)?,
        None => MRule::List(Vec::new()),
    };
    let k_list = match pairs.get("k_list") {
        Some(v) => parse_list(v, "k_list")?,
        None => vec![1],
    };
    let r = match pairs.get("r") {
        Some(v) => v
            .parse()
            .map_err(|_| parse_err(format!("bad difference order `{v}`")))?,
        None => 0,
    };
    let estimator = match pairs.get("estimator") {
        Some(v) => Estimator::parse(v)?,
        None => Estimator::default(),
    };
    let max_ratio = pairs
        .get("max_ratio")
        .map(|v| {
            v.parse::<f64>()
                .map_err(|_| parse_err(format!("bad max_ratio `{v}`")))
        })
        .transpose()?;
    let band_lo = pairs
        .get("band_lo")
        .map(|v| {
            v.parse::<f64>()
                .map_err(|_| parse_err(format!("bad band_lo `{v}`")))
        })
        .transpose()?;
    let band_hi = pairs
        .get("band_hi")
        .map(|v| {
            v.parse::<f64>()
                .map_err(|_| parse_err(format!("bad band_hi `{v}`")))
        })
        .transpose()?;
    let band = match (band_lo, band_hi) {
        (Some(lo), Some(hi)) if lo <= hi => Some((lo, hi)),
        (Some(lo), Some(hi)) => {
            return Err(parse_err(format!("empty band [{lo}, {hi}]")));
        }
        (None, None) => None,
        _ => return Err(parse_err("band_lo and band_hi must appear together")),
    };
    let out = pairs.get("out").map(PathBuf::from);

    Ok(SweepSpec {
        kind,
        n_grid,
        m_rule,
        k_list,
        r,
        estimator,
        thresholds: PassThresholds { max_ratio, band },
        out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_example_parses() {
        let text = "\
# accuracy of the sech^2 estimate on the declared grid
kind = crank_accuracy
n_grid = 10000, 40000, 100000
m_rule = power:1.0:0.55,0.6,0.65,0.7
k_list = 1
r = 0
estimator = dyson
max_ratio = 2.0
out = reports/crank.csv
";
        let spec = parse_sweep_spec(text).unwrap();
        assert_eq!(spec.kind, SweepKind::CrankAccuracy);
        assert_eq!(spec.n_grid, vec![10_000, 40_000, 100_000]);
        assert_eq!(
            spec.m_rule,
            MRule::Power {
                coeff: 1.0,
                exponents: vec![0.55, 0.6, 0.65, 0.7]
            }
        );
        assert_eq!(spec.k_list, vec![1]);
        assert_eq!(spec.estimator, Estimator::Dyson);
        assert_eq!(spec.thresholds.max_ratio, Some(2.0));
        assert_eq!(spec.thresholds.band, None);
        assert_eq!(spec.out, Some(PathBuf::from("reports/crank.csv")));
        assert!(spec.validate().is_ok());
    }

    #[test]
    fn defaults_fill_optional_keys() {
        let spec = parse_sweep_spec("kind = oracle_equivalence\nn_grid = 200\n").unwrap();
        assert_eq!(spec.m_rule, MRule::List(vec![]));
        assert_eq!(spec.k_list, vec![1]);
        assert_eq!(spec.r, 0);
        assert_eq!(spec.estimator, Estimator::Dyson);
        assert_eq!(spec.thresholds, PassThresholds::default());
        assert_eq!(spec.out, None);
    }

    #[test]
    fn m_rule_forms_parse() {
        let forms = [
            ("m_rule = all", MRule::All),
            ("m_rule = list:", MRule::List(vec![])),
            ("m_rule = list:1,2,3", MRule::List(vec![1, 2, 3])),
            ("m_rule = sqrtlog:3.0", MRule::SqrtLog { coeff: 3.0 }),
            ("m_rule = geometric:20", MRule::Geometric { steps: 20 }),
        ];
        for (line, want) in forms {
            let text = format!("kind = dprz_ratio\nn_grid = 100\n{line}\n");
            assert_eq!(parse_sweep_spec(&text).unwrap().m_rule, want, "{line}");
        }
    }

    #[test]
    fn rejects_malformed_input() {
        let cases = [
            "n_grid = 100\n",                                     // missing kind
            "kind = crank_accuracy\n",                            // missing n_grid
            "kind = bogus\nn_grid = 100\n",                       // unknown kind
            "kind = dprz_ratio\nn_grid = 100\nwhat = 1\n",        // unknown key
            "kind = dprz_ratio\nn_grid = 100\nkind = dprz_ratio\n", // duplicate
            "kind = dprz_ratio\nn_grid = 100\nno equals sign\n",  // bad line
            "kind = dprz_ratio\nn_grid = ten\n",                  // bad number
            "kind = dprz_ratio\nn_grid = -5\n",                   // negative
            "kind = dprz_ratio\nn_grid = 100\nm_rule = power:1.0\n", // short power
            "kind = dprz_ratio\nn_grid = 100\nm_rule = spiral:2\n", // unknown rule
            "kind = dprz_ratio\nn_grid = 100\nband_lo = 0.5\n",   // half a band
            "kind = dprz_ratio\nn_grid = 100\nband_lo = 2.0\nband_hi = 1.0\n", // empty band
            "kind = dprz_ratio\nn_grid = 100\nestimator = magic\n", // unknown estimator
        ];
        for text in cases {
            assert!(
                matches!(parse_sweep_spec(text), Err(Error::SweepParse(_))),
                "should reject: {text:?}"
            );
        }
    }

    #[test]
    fn comments_and_blanks_are_ignored() {
        let text = "\n# leading comment\n\nkind = finite_difference\n\n# middle\nn_grid = 500\nr = 2\nband_lo = 0.8\nband_hi = 1.2\n\n";
        let spec = parse_sweep_spec(text).unwrap();
        assert_eq!(spec.kind, SweepKind::FiniteDifference);
        assert_eq!(spec.r, 2);
        assert_eq!(spec.thresholds.band, Some((0.8, 1.2)));
    }
}
