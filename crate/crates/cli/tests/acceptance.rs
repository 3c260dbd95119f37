//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runs without the libtest harness so the lines always print.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rnforge::construct::{
    approximation_report, atom_density, dyadic_approximation, hahn_level_correspondence, rn_derive, verify_density,
    RefinementChain,
};
use rnforge::hyperreal::{
    check_limit, infinitely_close, partition_agreement, rs_integral, standard_part, HyperReal, Outcome,
    PartitionSequence, RealFn,
};
use rnforge::measure::{
    construct_positive_subset, hahn_decomposition, limsup_sets, AtomSpace, FiniteAlgebra, MeasurableSet, Measure,
};
use rnforge::rational::{pow2, ratio};
use rnforge::{gen, oracle, Rational};
use serde_json::Value;

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(criterion: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + criterion)
}

/// A random space of 3–12 atoms with λ ≪ ν.
fn instance(rng: &mut ChaCha8Rng) -> (std::sync::Arc<AtomSpace>, Measure, Measure) {
    let space = gen::space(rng.gen_range(3..=12));
    let (lambda, nu) = gen::absolutely_continuous_pair(rng, &space);
    (space, lambda, nu)
}

/// λ(S) and ∫_S f dν accumulated along a Gray-code walk over every subset.
fn all_subsets_agree(lambda: &Measure, nu: &Measure, f_at: &[Rational]) -> Result<u64, String> {
    let n = f_at.len();
    let mut in_set = vec![false; n];
    let (mut lam_s, mut int_s) = (Rational::zero(), Rational::zero());
    for step in 1..1u64 << n {
        let atom = step.trailing_zeros() as usize;
        let term_l = lambda.weight(atom).clone();
        let term_i = &f_at[atom] * nu.weight(atom);
        if in_set[atom] {
            lam_s -= term_l;
            int_s -= term_i;
        } else {
            lam_s += term_l;
            int_s += term_i;
        }
        in_set[atom] = !in_set[atom];
        if lam_s != int_s {
            return Err(format!("subset {in_set:?}: λ(S) ≠ ∫_S f dν"));
        }
    }
    Ok(1 << n)
}

/// The 200 instances shared by criteria 1 and 2, each with a chain of 1–3 levels.
fn shared_instances() -> Vec<(std::sync::Arc<AtomSpace>, Measure, Measure, RefinementChain)> {
    let mut rng = rng(1);
    (0..200)
        .map(|_| {
            let (space, lambda, nu) = instance(&mut rng);
            let levels = rng.gen_range(1..=3);
            let chain = gen::chain(&mut rng, &space, levels);
            (space, lambda, nu, chain)
        })
        .collect()
}

fn criterion_1() -> Check {
    let started = Instant::now();
    let mut subsets = 0;
    for (space, lambda, nu, chain) in shared_instances() {
        let d = rn_derive(&lambda, &nu, &chain).map_err(|e| e.to_string())?;
        let disc = verify_density(&lambda, &nu, &d.density).map_err(|e| e.to_string())?;
        ensure(disc.is_exact() && disc.exhaustive, || {
            format!("discrepancy {}", disc.max)
        })?;
        let f_at: Vec<Rational> = (0..space.len()).map(|a| d.density.value_at(a).clone()).collect();
        subsets += all_subsets_agree(&lambda, &nu, &f_at)?;
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(10), || {
        format!("took {elapsed:?}, budget 10s")
    })?;
    println!("    200 spaces, {subsets} subsets, {elapsed:.2?}");
    Ok(())
}

fn criterion_2() -> Check {
    let mut rng = rng(2);
    for (space, _, nu, _) in shared_instances() {
        let mu = gen::signed_measure(&mut rng, &space);
        let h = hahn_decomposition(&mu, &nu).map_err(|e| e.to_string())?;
        let (best, max) = oracle::max_measure_subset(&mu, Some(&nu)).map_err(|e| e.to_string())?;
        let value = mu.measure_of(&h.positive).unwrap();
        ensure(value == max, || format!("μ(M⁺) = {value}, maximum {max}"))?;
        ensure(h.positive == best, || "M⁺ differs from the oracle's maximizer".into())?;
        let nu_plus = nu.measure_of(&h.positive).unwrap();
        for t in oracle::measure_maximizers(&mu).map_err(|e| e.to_string())? {
            ensure(nu_plus >= nu.measure_of(&t).unwrap(), || {
                "a maximizer has larger ν-mass".into()
            })?;
        }
    }
    Ok(())
}

fn criterion_3() -> Check {
    let mut rng = rng(3);
    let mut done = 0;
    while done < 100 {
        let space = gen::space(rng.gen_range(3..=12));
        let mu = gen::signed_measure(&mut rng, &space);
        let p0 = gen::subset(&mut rng, &space);
        if !mu.measure_of(&p0).unwrap().is_positive() {
            continue;
        }
        let p = construct_positive_subset(&mu, &p0).map_err(|e| e.to_string())?;
        ensure(p.is_subset(&p0).unwrap(), || "P ⊄ P₀".into())?;
        ensure(mu.measure_of(&p).unwrap().is_positive(), || "μ(P) ≤ 0".into())?;
        ensure(oracle::all_subsets_nonnegative(&mu, &p).unwrap(), || {
            "a subset of P is negative".into()
        })?;
        done += 1;
    }
    Ok(())
}

fn criterion_4() -> Check {
    let mut rng = rng(4);
    for _ in 0..100 {
        let (space, lambda, nu) = instance(&mut rng);
        let a = gen::rational(&mut rng, 24, 8);
        let f = atom_density(&lambda, &nu, &FiniteAlgebra::atomic(&space)).map_err(|e| e.to_string())?;
        let c = hahn_level_correspondence(&lambda, &nu, &f, &a).map_err(|e| e.to_string())?;
        let diff = &c.difference;
        let nu_mass: Rational = diff.atoms().map(|i| nu.weight(i).clone()).sum();
        let signed_mass: Rational = diff.atoms().map(|i| lambda.weight(i) - &a * nu.weight(i)).sum();
        ensure(nu_mass.is_zero() && signed_mass.is_zero(), || {
            format!("a = {a}: masses {nu_mass}, {signed_mass}")
        })?;
        ensure(c.is_null(), || "reported masses are not zero".into())?;
    }
    Ok(())
}

fn criterion_5() -> Check {
    let mut rng = rng(5);
    for _ in 0..100 {
        let (space, lambda, nu) = instance(&mut rng);
        let f = atom_density(&lambda, &nu, &FiniteAlgebra::atomic(&space)).map_err(|e| e.to_string())?;
        let total = nu.total();
        for n in 1..=8u32 {
            let fn0 = dyadic_approximation(&f, n).map_err(|e| e.to_string())?;
            let fn1 = dyadic_approximation(&f, n + 1).map_err(|e| e.to_string())?;
            let cutoff = Rational::from_integer(n.into());
            let mut l1 = Rational::zero();
            let mut tail = Rational::zero();
            for i in 0..space.len() {
                let (v, lo, hi) = (f.value_at(i), fn0.value_at(i), fn1.value_at(i));
                ensure(lo <= hi && hi <= v, || format!("n = {n}: approximants not monotone"))?;
                l1 += (v - lo).abs() * nu.weight(i);
                if *v >= cutoff {
                    tail += v * nu.weight(i);
                }
            }
            let bound = &tail + &total / pow2(n);
            ensure(l1 <= bound, || format!("n = {n}: {l1} > {bound}"))?;
            let r = approximation_report(&f, &nu, n).map_err(|e| e.to_string())?;
            ensure(r.l1_error == l1 && r.bound == bound, || {
                format!("n = {n}: report disagrees")
            })?;
        }
    }
    Ok(())
}

fn criterion_6() -> Check {
    let mut rng = rng(6);
    for _ in 0..100 {
        let (space, lambda, nu) = instance(&mut rng);
        let chain: RefinementChain = gen::chain(&mut rng, &space, 3);
        let d = rn_derive(&lambda, &nu, &chain).map_err(|e| e.to_string())?;
        for pair in d.levels.windows(2) {
            let (coarse, fine) = (&pair[0].density, &pair[1].density);
            for (b, block) in coarse.algebra().blocks().iter().enumerate() {
                let mass: Rational = block.atoms().map(|i| nu.weight(i).clone()).sum();
                let weighted: Rational = block.atoms().map(|i| fine.value_at(i) * nu.weight(i)).sum();
                let average = if mass.is_zero() {
                    Rational::zero()
                } else {
                    weighted / mass
                };
                ensure(coarse.block_value(b) == &average, || {
                    format!("level {} block {b}", pair[0].level)
                })?;
            }
        }
        let last = d.levels.last().expect("three levels");
        ensure(last.l1_to_final.is_zero(), || {
            "finest level is not at distance 0".into()
        })?;
    }
    Ok(())
}

fn criterion_7() -> Check {
    let mut rng = rng(7);
    for _ in 0..100 {
        let space = gen::space(rng.gen_range(3..=12));
        let nu = gen::measure(&mut rng, &space, 0.3);
        let spec = gen::thin_sequence(&mut rng, &nu);
        if let Some(m) = nu.min_positive_mass() {
            for set in spec.cycle() {
                let mass = nu.measure_of(set).unwrap();
                ensure(mass < m, || "cycle set is not thin".into())?;
            }
        }
        let limsup = limsup_sets(&spec);
        let recurring = spec
            .cycle()
            .iter()
            .fold(MeasurableSet::empty(&space), |acc, s| acc.union(s).unwrap());
        ensure(limsup == recurring, || "limsup differs from the recurring atoms".into())?;
        let mass = nu.measure_of(&limsup).unwrap();
        ensure(mass.is_zero(), || format!("ν(limsup) = {mass}"))?;
    }
    Ok(())
}

fn criterion_8() -> Check {
    let started = Instant::now();
    let err = |e: rnforge::Error| e.to_string();

    let near_one = &HyperReal::from(1) + &HyperReal::omega().recip().map_err(err)?;
    let st = standard_part(&near_one, &ratio(1, 1_000_000_000), 1 << 20).map_err(err)?;
    ensure(
        st.as_ref()
            .is_some_and(|s| (s - ratio(1, 1)).abs() < ratio(1, 1_000_000_000)),
        || format!("st(1 + 1/ω) = {st:?}"),
    )?;

    let tol = ratio(1, 1_000_000);
    let id = RealFn::identity();
    let dyadic = PartitionSequence::dyadic();
    for (f, exact, name) in [
        (RealFn::identity(), ratio(1, 2), "x dx"),
        (RealFn::power(2), ratio(1, 3), "x² dx"),
    ] {
        let est = rs_integral(&f, &id, &dyadic, &tol, 1 << 16).map_err(err)?;
        let finest = est.sums.last().expect("levels").intervals;
        ensure(finest <= 1 << 16, || format!("{name}: {finest} intervals"))?;
        ensure(est.value.as_ref().is_some_and(|v| (v - &exact).abs() <= tol), || {
            format!("{name} = {:?}", est.value)
        })?;
    }

    let agree = partition_agreement(&id, &id, &dyadic, &PartitionSequence::uniform(3), &tol, 1 << 14).map_err(err)?;
    ensure(agree.verdict.outcome == Outcome::Holds, || {
        format!("agreement: {}", agree.verdict.reason)
    })?;

    let alternating = HyperReal::from_fn(|n| if n % 2 == 0 { ratio(1, 1) } else { ratio(-1, 1) });
    let zero = HyperReal::from(0);
    let horizons = [1u64, 2, 3, 10, 100, 1000, 1 << 10, 1 << 16, 1 << 20];
    for &h in &horizons {
        let v = infinitely_close(&alternating, &zero, h).map_err(err)?;
        ensure(v.outcome == Outcome::Unknown, || {
            format!("(-1)^n ≈ 0 at horizon {h}: {}", v.outcome)
        })?;
    }
    let v = check_limit(&alternating, &ratio(0, 1), &horizons).map_err(err)?;
    ensure(v.outcome != Outcome::Holds, || "(-1)^n → 0 certified".into())?;

    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(5), || {
        format!("took {elapsed:?}, budget 5s")
    })?;
    println!("    {elapsed:.2?}");
    Ok(())
}

fn rnforge(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rnforge"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn criterion_9() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let root = dir.path().to_str().expect("utf-8 path");
    let (code, _, err) = rnforge(&["emit-examples", root]);
    ensure(code == 0, || format!("emit-examples exited {code}: {err}"))?;

    let three = format!("{root}/three_atom.json");
    let args = [
        "--input",
        &three,
        "rn-derive",
        "--num",
        "lam",
        "--den",
        "nu",
        "--chain",
        "c1",
        "--verify",
    ];
    let (code, first, err) = rnforge(&args);
    ensure(code == 0, || format!("rn-derive exited {code}: {err}"))?;
    let (_, second, _) = rnforge(&args);
    ensure(first == second, || "report is not byte-stable".into())?;
    let report: Value = serde_json::from_str(&first).map_err(|e| e.to_string())?;
    let density = &report["results"]["density"];
    let expected = [("a", "1/2"), ("b", "2/1"), ("c", "1/1")];
    ensure(expected.iter().all(|(k, v)| density[k] == *v), || {
        format!("density {density}")
    })?;
    ensure(report["verification"]["exact"] == true, || {
        "verification not exact".into()
    })?;

    let null = format!("{root}/null_atom.json");
    let (code, out, _) = rnforge(&[
        "--input",
        &null,
        "rn-derive",
        "--num",
        "lam",
        "--den",
        "nu",
        "--chain",
        "c1",
    ]);
    ensure(code == 1, || format!("null-atom example exited {code}"))?;
    let report: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    ensure(report["results"]["witness"] == "b", || {
        format!("witness {}", report["results"]["witness"])
    })?;
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 density identity on all subsets", criterion_1),
        ("2 Hahn optimality and ν-maximality", criterion_2),
        ("3 positive subset", criterion_3),
        ("4 level/Hahn correspondence", criterion_4),
        ("5 dyadic bound and monotone approximants", criterion_5),
        ("6 tower property and refinement", criterion_6),
        ("7 finite Borel–Cantelli", criterion_7),
        ("8 hyperreal calculus", criterion_8),
        ("9 CLI end to end", criterion_9),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(()) => println!("acceptance {name}: PASS"),
            Err(why) => {
                failed += 1;
                println!("acceptance {name}: FAIL ({why})");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
