use std::sync::Arc;

use num::{Signed, Zero};
use rnforge::construct::{
    approximation_report, dyadic_approximation, hahn_level_correspondence, level_band, rn_derive, verify_density,
    verify_density_sampled, Derivation, RefinementChain, SimpleDensity, DEFAULT_SAMPLES, EXHAUSTIVE_LIMIT,
};
use rnforge::measure::{
    hahn_decomposition, is_absolutely_continuous, jordan_decomposition, limsup_sets, AbsoluteContinuity, AtomSpace,
    MeasurableSet, Measure, SignedMeasure,
};
use rnforge::oracle::{self, ORACLE_LIMIT};
use rnforge::rational::fmt_ratio;
use rnforge::{Error, Rational};
use serde_json::{json, Value};

use crate::report;
use crate::spacefile::SpaceFile;
use crate::CliError;

/// Outcome of one command before it is wrapped into a report.
#[derive(Debug)]
pub struct Outcome {
    pub results: Value,
    pub verification: Value,
    /// Set when a check failed; carries the message naming the witness.
    pub failure: Option<String>,
}

impl Outcome {
    pub(crate) fn ok(results: Value, verification: Value) -> Self {
        Self {
            results,
            verification,
            failure: None,
        }
    }
}

fn lookup<'a>(file: &'a SpaceFile, name: &str) -> Result<&'a SignedMeasure, CliError> {
    file.measures
        .get(name)
        .ok_or_else(|| CliError::Input(format!("no measure named \"{name}\"")))
}

fn nonnegative(file: &SpaceFile, name: &str) -> Result<Measure, CliError> {
    Measure::try_from(lookup(file, name)?.clone())
        .map_err(|_| CliError::Input(format!("measure \"{name}\" must be nonnegative")))
}

fn counting(space: &Arc<AtomSpace>) -> Measure {
    Measure::new(space, vec![Rational::from_integer(1.into()); space.len()]).expect("positive weights")
}

fn labels(space: &AtomSpace) -> impl Iterator<Item = &str> {
    space.labels().iter().map(String::as_str)
}

fn density_map(space: &AtomSpace, f: &SimpleDensity) -> Value {
    report::weights(labels(space), &f.atom_values())
}

fn blocks_json(f: &SimpleDensity) -> Value {
    f.algebra()
        .blocks()
        .iter()
        .enumerate()
        .map(|(b, block)| json!({ "atoms": report::set(block), "value": report::ratio(f.block_value(b)) }))
        .collect()
}

fn oracle_skipped(space: &AtomSpace) -> Value {
    json!({ "exhaustive": false, "skipped": format!("{} atoms exceed the oracle limit of {ORACLE_LIMIT}", space.len()) })
}

pub fn hahn(file: &SpaceFile, name: &str, tiebreak: Option<&str>) -> Result<Outcome, CliError> {
    let mu = lookup(file, name)?;
    let nu = match tiebreak {
        Some(t) => nonnegative(file, t)?,
        None => counting(&file.space),
    };
    let h = hahn_decomposition(mu, &nu)?;
    let value = mu.measure_of(&h.positive)?;
    let results = json!({
        "positive": report::set(&h.positive),
        "negative": report::set(&h.negative),
        "value": report::ratio(&value),
        "tiebreak": tiebreak.unwrap_or("counting"),
    });
    if file.space.len() > ORACLE_LIMIT {
        return Ok(Outcome::ok(results, oracle_skipped(&file.space)));
    }
    let (best, best_value) = oracle::max_measure_subset(mu, Some(&nu))?;
    let positive_ok = oracle::all_subsets_nonnegative(mu, &h.positive)?;
    let negative_ok = oracle::all_subsets_nonnegative(&mu.negated(), &h.negative)?;
    let checks = [
        ("value_matches_oracle", best_value == value),
        ("set_matches_oracle", best == h.positive),
        ("positive_set_nonnegative", positive_ok),
        ("negative_set_nonpositive", negative_ok),
    ];
    let failure = checks
        .iter()
        .find(|(_, ok)| !ok)
        .map(|(check, _)| format!("{check} failed; oracle maximizer {:?}", best.sorted_labels()));
    let mut verification = json!({ "exhaustive": true });
    for (check, ok) in checks {
        verification[check] = json!(ok);
    }
    verification["oracle_maximizer"] = report::set(&best);
    Ok(Outcome {
        results,
        verification,
        failure,
    })
}

pub fn jordan(file: &SpaceFile, name: &str) -> Result<Outcome, CliError> {
    let mu = lookup(file, name)?;
    let j = jordan_decomposition(mu, &counting(&file.space))?;
    let (pos, neg) = (j.positive.as_signed(), j.negative.as_signed());
    let recombines = (0..file.space.len()).all(|a| pos.weight(a) - neg.weight(a) == *mu.weight(a));
    let singular = (0..file.space.len()).all(|a| pos.weight(a).is_zero() || neg.weight(a).is_zero());
    let results = json!({
        "positive": report::measure(pos),
        "negative": report::measure(neg),
        "positive_total": report::ratio(&pos.total()),
        "negative_total": report::ratio(&neg.total()),
        "total_variation": report::ratio(&(pos.total() + neg.total())),
    });
    let verification = json!({ "recombines": recombines, "mutually_singular": singular });
    let failure = (!(recombines && singular)).then(|| "Jordan parts do not recombine into a singular pair".to_owned());
    Ok(Outcome {
        results,
        verification,
        failure,
    })
}

fn ac_failure(space: &AtomSpace, witness: usize) -> String {
    format!("not absolutely continuous: witness atom \"{}\"", space.label(witness))
}

pub fn check_ac(file: &SpaceFile, num: &str, den: &str) -> Result<Outcome, CliError> {
    let lambda = lookup(file, num)?;
    let nu = nonnegative(file, den)?;
    let ac = is_absolutely_continuous(lambda, &nu)?;
    let (continuous, witness) = match ac {
        AbsoluteContinuity::Continuous => (true, Value::Null),
        AbsoluteContinuity::Violated { witness } => (false, json!(file.space.label(witness))),
    };
    let results = json!({ "absolutely_continuous": continuous, "witness": witness });
    let verification = if file.space.len() <= ORACLE_LIMIT {
        let exhaustive = oracle::exhaustive_absolute_continuity(lambda, &nu)?;
        json!({ "exhaustive": true, "oracle_agrees": exhaustive == continuous })
    } else {
        oracle_skipped(&file.space)
    };
    let failure = match ac {
        AbsoluteContinuity::Violated { witness } => Some(ac_failure(&file.space, witness)),
        AbsoluteContinuity::Continuous => None,
    };
    Ok(Outcome {
        results,
        verification,
        failure,
    })
}

fn derivation_json(space: &AtomSpace, d: &Derivation) -> Value {
    let levels: Vec<Value> = d
        .levels
        .iter()
        .map(|l| {
            json!({
                "level": l.level,
                "blocks": blocks_json(&l.density),
                "l1_to_final": report::ratio(&l.l1_to_final),
            })
        })
        .collect();
    json!({
        "density": density_map(space, &d.density),
        "levels": levels,
        "degenerate_reference": d.degenerate_reference,
    })
}

fn verify_part(
    lambda: &Measure,
    nu: &Measure,
    f: &SimpleDensity,
    seed: Option<u64>,
) -> Result<(Value, bool), CliError> {
    if lambda.space().len() <= EXHAUSTIVE_LIMIT {
        let check = verify_density(lambda, nu, f)?;
        let oracle_density = oracle::direct_density(lambda, nu)?;
        let agrees = oracle_density.values() == f.values();
        let identity = oracle::exhaustive_identity_check(lambda, nu, f)?;
        let ok = check.is_exact() && agrees && identity;
        let value = json!({
            "exact": check.is_exact(),
            "exhaustive": true,
            "subsets_checked": check.subsets_checked,
            "max_discrepancy": report::ratio(&check.max),
            "witness": report::set(&check.witness),
            "oracle_agreement": agrees,
            "identity_check": identity,
        });
        Ok((value, ok))
    } else {
        let seed = seed.unwrap_or(0);
        let check = verify_density_sampled(lambda, nu, f, DEFAULT_SAMPLES, seed)?;
        let value = json!({
            "exact": check.is_exact(),
            "exhaustive": false,
            "subsets_checked": check.subsets_checked,
            "seed": seed,
            "max_discrepancy": report::ratio(&check.max),
            "witness": report::set(&check.witness),
        });
        Ok((value, check.is_exact()))
    }
}

pub fn rn_derive_cmd(
    file: &SpaceFile,
    num: &str,
    den: &str,
    chain: Option<&str>,
    verify: bool,
    seed: Option<u64>,
) -> Result<Outcome, CliError> {
    let lambda = lookup(file, num)?;
    let nu = nonnegative(file, den)?;
    let chain = match chain {
        Some(c) => file
            .chains
            .get(c)
            .cloned()
            .ok_or_else(|| CliError::Input(format!("no chain named \"{c}\"")))?,
        None => RefinementChain::atomic(&file.space),
    };
    if let AbsoluteContinuity::Violated { witness } = is_absolutely_continuous(lambda, &nu)? {
        return Ok(Outcome {
            results: json!({ "absolutely_continuous": false, "witness": file.space.label(witness) }),
            verification: json!({ "performed": false }),
            failure: Some(ac_failure(&file.space, witness)),
        });
    }

    // a signed numerator is split into its Jordan parts, each derived separately
    let parts: Vec<(&str, Measure)> = match Measure::try_from(lambda.clone()) {
        Ok(m) => vec![("density", m)],
        Err(_) => {
            let j = jordan_decomposition(lambda, &nu)?;
            vec![("positive_part", j.positive), ("negative_part", j.negative)]
        }
    };
    let derivations = parts
        .iter()
        .map(|(_, m)| rn_derive(m, &nu, &chain))
        .collect::<rnforge::Result<Vec<_>>>()?;

    let results = if parts.len() == 1 {
        derivation_json(&file.space, &derivations[0])
    } else {
        let combined: Vec<Rational> = (0..file.space.len())
            .map(|a| derivations[0].density.value_at(a) - derivations[1].density.value_at(a))
            .collect();
        json!({
            "signed": true,
            "density": report::weights(labels(&file.space), &combined),
            "positive_part": derivation_json(&file.space, &derivations[0]),
            "negative_part": derivation_json(&file.space, &derivations[1]),
        })
    };

    if !verify {
        return Ok(Outcome::ok(results, json!({ "performed": false })));
    }
    let mut verification = json!({ "performed": true });
    let mut all_ok = true;
    let mut witness = None;
    for ((key, m), d) in parts.iter().zip(&derivations) {
        let (value, ok) = verify_part(m, &nu, &d.density, seed)?;
        if !ok && witness.is_none() {
            witness = Some(value["witness"].clone());
        }
        all_ok &= ok;
        if parts.len() == 1 {
            for (k, v) in value.as_object().expect("object") {
                verification[k] = v.clone();
            }
        } else {
            verification[*key] = value;
        }
    }
    verification["exact"] = json!(all_ok);
    let failure = (!all_ok).then(|| format!("density identity fails; witness subset {}", witness.unwrap_or_default()));
    Ok(Outcome {
        results,
        verification,
        failure,
    })
}

fn atomic_density(file: &SpaceFile, num: &str, den: &str) -> Result<(Measure, Measure, SimpleDensity), CliError> {
    let lambda = nonnegative(file, num)?;
    let nu = nonnegative(file, den)?;
    let d = rn_derive(&lambda, &nu, &RefinementChain::atomic(&file.space))?;
    Ok((lambda, nu, d.density))
}

pub fn approx(file: &SpaceFile, num: &str, den: &str, levels: u32) -> Result<Outcome, CliError> {
    if levels == 0 {
        return Err(CliError::Input("--levels must be at least 1".into()));
    }
    let (_, nu, f) = atomic_density(file, num, den)?;
    let mut rows = Vec::new();
    let mut monotone = true;
    let mut within_bound = true;
    let mut previous: Option<SimpleDensity> = None;
    for n in 1..=levels {
        let fn_ = dyadic_approximation(&f, n)?;
        let r = match approximation_report(&f, &nu, n) {
            Ok(r) => r,
            Err(Error::BoundViolated(_)) => {
                within_bound = false;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let below_f = fn_.values().iter().zip(f.values()).all(|(a, b)| a <= b);
        let above_prev = previous
            .as_ref()
            .is_none_or(|p| p.values().iter().zip(fn_.values()).all(|(a, b)| a <= b));
        monotone &= below_f && above_prev;
        rows.push(json!({
            "level": n,
            "approximant": density_map(&file.space, &fn_),
            "l1_error": report::ratio(&r.l1_error),
            "tail_mass": report::ratio(&r.tail_mass),
            "bound": report::ratio(&r.bound),
            "converged": r.converged,
        }));
        previous = Some(fn_);
    }
    let results = json!({ "density": density_map(&file.space, &f), "levels": rows });
    let verification = json!({ "monotone": monotone, "within_bound": within_bound });
    let failure =
        (!(monotone && within_bound)).then(|| "dyadic approximants violate monotonicity or the L1 bound".to_owned());
    Ok(Outcome {
        results,
        verification,
        failure,
    })
}

pub fn levelset(
    file: &SpaceFile,
    num: &str,
    den: &str,
    at: &Rational,
    band: Option<&Rational>,
) -> Result<Outcome, CliError> {
    let (lambda, nu, f) = atomic_density(file, num, den)?;
    let corr = hahn_level_correspondence(&lambda, &nu, &f, at)?;
    let mut results = json!({
        "at": report::ratio(at),
        "level_set": report::set(&corr.level_set),
        "hahn_positive": report::set(&corr.hahn_positive),
        "symmetric_difference": report::set(&corr.difference),
    });
    if let Some(b) = band {
        results["band"] = json!({ "upper": report::ratio(b), "set": report::set(&level_band(&f, at, b)?) });
    }
    let verification = json!({
        "nu_mass": report::ratio(&corr.nu_mass),
        "signed_mass": report::ratio(&corr.signed_mass),
        "null": corr.is_null(),
    });
    let failure = (!corr.is_null()).then(|| {
        format!(
            "level set and Hahn positive set differ on a non-null set {:?}",
            corr.difference.sorted_labels()
        )
    });
    Ok(Outcome {
        results,
        verification,
        failure,
    })
}

pub fn limsup(file: &SpaceFile, sequence: &str, measure: Option<&str>) -> Result<Outcome, CliError> {
    let spec = file
        .sequences
        .get(sequence)
        .ok_or_else(|| CliError::Input(format!("no sequence named \"{sequence}\"")))?;
    let set = limsup_sets(spec);
    // the union over two full periods after the prefix, computed index by index
    let start = spec.prefix().len();
    let mut direct = MeasurableSet::empty(&file.space);
    for k in start..start + 2 * spec.cycle().len() {
        direct = direct.union(spec.nth(k))?;
    }
    let mut results = json!({
        "limsup": report::set(&set),
        "prefix_length": spec.prefix().len(),
        "cycle_length": spec.cycle().len(),
    });
    let mut verification = json!({ "direct_union_agrees": direct == set });
    let mut failure = (direct != set).then(|| "limsup disagrees with the direct union".to_owned());
    if let Some(name) = measure {
        let nu = nonnegative(file, name)?;
        let mass = nu.measure_of(&set)?;
        results["measure"] = json!(name);
        results["mass"] = report::ratio(&mass);
        let min = nu.min_positive_mass();
        results["min_positive_mass"] = min.as_ref().map_or(Value::Null, report::ratio);
        let cycle_masses = spec
            .cycle()
            .iter()
            .map(|s| nu.measure_of(s))
            .collect::<rnforge::Result<Vec<_>>>()?;
        let thin = match &min {
            Some(m) => cycle_masses.iter().all(|c| c < m),
            None => true,
        };
        verification["thin_cycle"] = json!(thin);
        if thin {
            verification["null_limsup"] = json!(mass.is_zero());
            if !mass.is_zero() && failure.is_none() {
                failure = Some(format!("thin cycle but limsup has mass {}", fmt_ratio(&mass)));
            }
        }
    }
    Ok(Outcome {
        results,
        verification,
        failure,
    })
}

/// True if `r` is within `tol` of `target`.
pub(crate) fn within(r: &Rational, target: &Rational, tol: &Rational) -> bool {
    (r - target).abs() < *tol
}
