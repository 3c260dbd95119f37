//! Small fixed scenarios for the hyperreal layer, driven by an explicit
//! horizon and tolerance.

use clap::ValueEnum;
use rnforge::hyperreal::{
    check_limit, check_uniform_continuity, classify, partition_agreement, rs_integral, standard_part, Classification,
    Direction, HyperReal, Modulus, PartitionSequence, RealFn, RsEstimate,
};
use rnforge::rational::{int, ratio};
use rnforge::Rational;
use serde_json::{json, Value};

use crate::commands::{within, Outcome};
use crate::report;
use crate::CliError;

/// Largest number of halvings accepted by the continuity demo.
const MAX_UCONT_LEVELS: u64 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Demo {
    /// Standard part of 1 + 1/ω.
    St,
    /// Limits of 1/(n+1) and (−1)ⁿ.
    Limit,
    /// Uniform continuity of x² and of a step.
    Ucont,
    /// Riemann–Stieltjes integrals over dyadic and triadic partitions.
    Rs,
}

fn class_name(c: Classification) -> &'static str {
    match c {
        Classification::Infinitesimal => "infinitesimal",
        Classification::Finite => "finite",
        Classification::Infinite => "infinite",
        Classification::Unknown => "unknown",
    }
}

fn optional(r: &Option<Rational>) -> Value {
    r.as_ref().map_or(Value::String("unknown".into()), report::ratio)
}

fn estimate(e: &RsEstimate) -> Value {
    let finest = e.sums.last().expect("at least one level");
    json!({
        "value": optional(&e.value),
        "levels": e.sums.len(),
        "finest_intervals": finest.intervals,
        "finest_sum": report::ratio(&finest.sum),
    })
}

fn inverse_successor() -> HyperReal {
    HyperReal::from_fn(|n| ratio(1, n as i64 + 1)).with_monotone(Direction::Decreasing, 0)
}

pub fn run(demo: Demo, horizon: u64, tol: &Rational) -> Result<Outcome, CliError> {
    if horizon == 0 {
        return Err(CliError::Input("--horizon must be at least 1".into()));
    }
    if tol <= &Rational::from_integer(0.into()) {
        return Err(CliError::Input("--tolerance must be positive".into()));
    }
    match demo {
        Demo::St => st(horizon, tol),
        Demo::Limit => limit(horizon),
        Demo::Ucont => ucont(horizon),
        Demo::Rs => rs(horizon, tol),
    }
}

fn st(horizon: u64, tol: &Rational) -> Result<Outcome, CliError> {
    let omega = HyperReal::omega();
    let inverse = omega.recip()?;
    let x = &HyperReal::from(1) + &inverse;
    let part = standard_part(&x, tol, horizon)?;
    let results = json!({
        "expression": "1 + 1/omega",
        "classification": class_name(classify(&x, horizon)),
        "standard_part": optional(&part),
        "omega": class_name(classify(&omega, horizon)),
        "inverse_omega": class_name(classify(&inverse, horizon)),
    });
    let ok = part.as_ref().is_some_and(|p| within(p, &int(1), tol));
    let verification = json!({ "standard_part_is_one": ok });
    Ok(Outcome {
        results,
        verification,
        failure: (!ok).then(|| "standard part of 1 + 1/omega is not 1".to_owned()),
    })
}

fn limit(horizon: u64) -> Result<Outcome, CliError> {
    let mut horizons: Vec<u64> = [horizon / 4, horizon / 2, horizon]
        .into_iter()
        .filter(|&h| h > 0)
        .collect();
    horizons.dedup();
    let wobble = HyperReal::from_fn(|n| int(if n % 2 == 0 { 1 } else { -1 }));
    let cases = [
        ("1/(n+1) -> 0", check_limit(&inverse_successor(), &int(0), &horizons)?),
        ("1/(n+1) -> 1", check_limit(&inverse_successor(), &int(1), &horizons)?),
        ("(-1)^n -> 0", check_limit(&wobble, &int(0), &horizons)?),
    ];
    let never_holds = !cases[2].1.holds();
    let results: Value = cases
        .iter()
        .map(|(name, v)| json!({ "case": name, "verdict": report::verdict(v) }))
        .collect();
    Ok(Outcome {
        results: json!({ "horizons": horizons, "cases": results }),
        verification: json!({ "oscillation_never_holds": never_holds }),
        failure: (!never_holds).then(|| "an oscillating sequence was certified".to_owned()),
    })
}

fn ucont(horizon: u64) -> Result<Outcome, CliError> {
    if horizon > MAX_UCONT_LEVELS {
        return Err(CliError::Input(format!(
            "ucont takes --horizon as a number of halvings, at most {MAX_UCONT_LEVELS}"
        )));
    }
    let levels = horizon as u32;
    let grid = 10;
    let square = RealFn::new(|x| Some(x * x));
    let cases = [
        (
            "x^2 with modulus 2d",
            check_uniform_continuity(&square.clone().with_modulus(Modulus::Lipschitz(int(2))), grid, levels)?,
        ),
        (
            "step at 1/2",
            check_uniform_continuity(&RealFn::step(ratio(1, 2)), grid, levels)?,
        ),
        ("x^2 without modulus", check_uniform_continuity(&square, grid, levels)?),
    ];
    let results: Value = cases
        .iter()
        .map(|(name, v)| json!({ "case": name, "verdict": report::verdict(v) }))
        .collect();
    Ok(Outcome {
        results: json!({ "grid": grid, "levels": levels, "cases": results }),
        verification: json!({ "modulus_case_holds": cases[0].1.holds() }),
        failure: None,
    })
}

fn rs(horizon: u64, tol: &Rational) -> Result<Outcome, CliError> {
    let x = RealFn::identity();
    let dyadic = PartitionSequence::dyadic();
    let thirds = PartitionSequence::uniform(3);
    let linear = rs_integral(&x, &x, &dyadic, tol, horizon)?;
    let quadratic = rs_integral(&RealFn::power(2), &x, &dyadic, tol, horizon)?;
    let agreement = partition_agreement(&x, &x, &dyadic, &thirds, tol, horizon)?;
    let close = |e: &RsEstimate, target: Rational| e.value.as_ref().is_some_and(|v| within(v, &target, tol));
    let results = json!({
        "horizon_intervals": horizon,
        "x_dx": estimate(&linear),
        "x2_dx": estimate(&quadratic),
        "dyadic_vs_thirds": {
            "dyadic": estimate(&agreement.first),
            "thirds": estimate(&agreement.second),
            "verdict": report::verdict(&agreement.verdict),
        },
    });
    let verification = json!({
        "x_dx_is_half": close(&linear, ratio(1, 2)),
        "x2_dx_is_third": close(&quadratic, ratio(1, 3)),
        "partitions_agree": agreement.verdict.holds(),
    });
    Ok(Outcome::ok(results, verification))
}
