//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use pars_cli::lam::parse_lam;
use pars_cli::report::TraceRecord;
use pars_cli::rules::{parse_rules, print_rules};
use pars_core::asymptotics::{limit_bound, meantime_bound};
use pars_core::checkers::random::{random_system, universe};
use pars_core::checkers::{check_better_global, check_locally_better, check_pointed_diamond, check_rd_global, Observation};
use pars_core::engine::{run, Atom, ParsSystem, Policy, Restrict};
use pars_core::lambda::{diamond_harness, random_term, LambdaSystem, Nameless, Strategy, Term};
use pars_core::prob::fmt_rational;
use pars_core::{MultiDistribution, Prob, Rational, SubDistribution};

/// Wall-clock budget per criterion.
const TIME_BUDGET: Duration = Duration::from_secs(10);
/// Criterion 4: distance of the rejoined bounds from `{true: 1/2, false: 1/2}`.
const REJOIN_TOLERANCE_EXP: u32 = 8;
/// Every other numeric comparison is exact rational equality.
const EXACT: u32 = 0;

const CAP: usize = 100_000;

type Outcome = Result<String, String>;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn pars(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pars")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8"))
}

fn pars_ok(args: &[&str]) -> Result<String, String> {
    match pars(args) {
        (0, out) => Ok(out),
        (code, out) => Err(format!("`pars {}` exited {code}: {out}", args.join(" "))),
    }
}

fn records(text: &str) -> Vec<TraceRecord> {
    text.lines().map(|l| serde_json::from_str(l).expect("valid record")).collect()
}

fn field<'a>(report: &'a str, key: &str) -> Option<&'a str> {
    report.lines().find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(' ')))
}

fn one_minus_dyadic(k: u32) -> Prob {
    Prob::dyadic(k).complement()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn load_rules(name: &str) -> ParsSystem {
    let text = std::fs::read_to_string(fixture(name)).expect("fixture");
    parse_rules(&text, name).expect("fixture parses")
}

fn load_term(name: &str) -> Term {
    let text = std::fs::read_to_string(fixture(name)).expect("fixture");
    parse_lam(&text).expect("fixture parses").get("main").expect("main").clone()
}

fn sym(s: &str) -> Atom {
    Atom::sym(s)
}

fn c1_geometric_termination() -> Outcome {
    let path = fixture("fig1.pars");
    let recs = records(&pars_ok(&["run", path.to_str().unwrap(), "--from", "c", "--depth", "20"])?);
    ensure(recs.len() == 21, || format!("{} records", recs.len()))?;
    for (n, r) in recs.iter().enumerate() {
        let want = one_minus_dyadic(n as u32).to_string();
        ensure(r.nnorm == want, || format!("step {n}: nnorm {} != {want}", r.nnorm))?;
    }
    Ok(format!("nnorm = 1 - 2^-n for n <= 20 (tolerance {EXACT})"))
}

fn c2_meantime() -> Outcome {
    let path = fixture("fig1.pars");
    let out = pars_ok(&["meantime", path.to_str().unwrap(), "--from", "c", "--depth", "30"])?;
    let want = Prob::one().into_rational() + one_minus_dyadic(29).into_rational();
    let got = field(&out, "partial").ok_or("no partial line")?;
    ensure(got == fmt_rational(&want), || format!("partial {got} != {}", fmt_rational(&want)))?;
    let two = Prob::one().into_rational() + Prob::one().into_rational();
    let mut sum: Rational = Prob::zero().into_rational();
    for line in out.lines().filter_map(|l| l.strip_prefix("contribution ")) {
        let c: Prob = line.split(' ').nth(1).ok_or("bad contribution")?.parse().map_err(|e| format!("{e}"))?;
        ensure(!c.is_zero(), || "partial sums not strictly increasing".into())?;
        sum += c.into_rational();
        ensure(sum <= two, || "partial sum exceeds 2".into())?;
    }
    ensure(sum == want, || "contributions do not add up".into())?;
    Ok(format!("partial = 2 - 2^-29, increasing, bounded by 2 (tolerance {EXACT})"))
}

fn c3_sn_failure() -> Outcome {
    let path = fixture("fig5.pars");
    let file = path.to_str().unwrap();
    for k in 0..=10u32 {
        let out = pars_ok(&["limit", file, "--from", "a", "--policy", "all-r0", "--depth", &k.to_string()])?;
        let want = format!("residual={}", Prob::dyadic(k));
        ensure(out.contains(&want), || format!("depth {k}: {out}"))?;
    }
    let recs = records(&pars_ok(&["run", file, "--from", "a", "--policy", "all-r2", "--depth", "10"])?);
    ensure(recs.iter().all(|r| r.nnorm == "0"), || "all-r2 reached a normal form".into())?;
    let out = pars_ok(&["classify", file, "--from", "a", "--depth", "8"])?;
    ensure(field(&out, "sn").is_some_and(|v| v.contains("refuted")), || format!("sn not refuted: {out}"))?;
    let best = one_minus_dyadic(8).to_string();
    ensure(field(&out, "wn-best") == Some(best.as_str()), || format!("wn-best: {out}"))?;
    ensure(field(&out, "greedy-nnorm") == Some(best.as_str()), || format!("greedy: {out}"))?;
    Ok("all-r0 residual 2^-k, all-r2 nnorm 0, SN refuted, WN best 1 - 2^-8".into())
}

fn mass_of(d: &SubDistribution<Atom>, e: &str) -> Prob {
    d.get(&sym(e))
}

fn c4_un_refutation() -> Outcome {
    let path = fixture("fig4.pars");
    let out = pars_ok(&["classify", path.to_str().unwrap(), "--from", "a", "--depth", "8"])?;
    ensure(field(&out, "un") == Some("conclusively-refuted"), || format!("un: {out}"))?;
    let witnesses: Vec<&str> = out.lines().filter(|l| l.starts_with("un-witness")).collect();
    let floor = one_minus_dyadic(8).to_string();
    ensure(witnesses.iter().any(|w| w.contains(&format!("lower={{true: {floor}}}"))), || out.clone())?;
    ensure(witnesses.iter().any(|w| w.contains(&format!("lower={{false: {floor}}}"))), || out.clone())?;

    // the two one-step reducts, each continued with the other rule forever
    let sys = load_rules("fig4.pars");
    let half = Prob::half();
    let t = MultiDistribution::new([(half.clone(), sym("a")), (half.clone(), sym("true"))]).unwrap();
    let s = MultiDistribution::new([(half.clone(), sym("a")), (half.clone(), sym("false"))]).unwrap();
    let target = SubDistribution::from_entries([(sym("true"), half.clone()), (sym("false"), half)]).unwrap();
    let tol = Prob::dyadic(REJOIN_TOLERANCE_EXP).into_rational();
    for (start, rule) in [(t, 1), (s, 0)] {
        let tr = run(&sys, start, &Policy::Uniform(rule), REJOIN_TOLERANCE_EXP as usize).unwrap();
        let lb = limit_bound(&tr);
        let mut dist: Rational = Prob::zero().into_rational();
        for e in ["true", "false"] {
            let (a, b) = (mass_of(&lb.lower, e).into_rational(), mass_of(&target, e).into_rational());
            dist += if a > b { a - b } else { b - a };
        }
        ensure(dist <= tol, || format!("rule {rule}: bound {} is {} away", lb.lower, fmt_rational(&dist)))?;
    }
    Ok(format!("UN conclusively refuted; rejoined bounds within 2^-{REJOIN_TOLERANCE_EXP} of {{true: 1/2, false: 1/2}}"))
}

fn lambda_runs() -> Vec<(String, LambdaSystem, Policy)> {
    let mut out = vec![
        ("leftmost".to_string(), LambdaSystem::new(Strategy::Leftmost), Policy::Uniform(0)),
        ("rightmost".to_string(), LambdaSystem::new(Strategy::Rightmost), Policy::Uniform(0)),
        ("full/all-r1".to_string(), LambdaSystem::new(Strategy::Full), Policy::Uniform(1)),
    ];
    for seed in 0..8 {
        out.push((format!("random({seed})"), LambdaSystem::new(Strategy::Random(seed)), Policy::Uniform(0)));
        out.push((format!("full/seed({seed})"), LambdaSystem::new(Strategy::Full), Policy::Seeded(seed)));
    }
    out
}

fn c5_lambda_limit() -> Outcome {
    let pr = Nameless::from_term(&load_term("pr.lam"));
    let f = Nameless::from_term(&parse_lam("F = \\x y. y;").unwrap().get("F").unwrap().clone());
    let want = SubDistribution::from_entries([(f, Prob::half())]).unwrap();
    let mut latest = 0;
    for (name, sys, policy) in lambda_runs() {
        let tr = run(&sys, MultiDistribution::unit(pr.clone()), &policy, 22).unwrap();
        let first = tr.nf.iter().position(|d| *d == want).ok_or_else(|| format!("{name}: never reaches {{F: 1/2}}"))?;
        ensure(first <= 12, || format!("{name}: reached at step {first}"))?;
        ensure(tr.nf[first..=first + 10].iter().all(|d| *d == want), || format!("{name}: not constant"))?;
        let residual = limit_bound(&tr).residual;
        ensure(residual == Prob::half(), || format!("{name}: residual {residual}"))?;
        latest = latest.max(first);
    }
    Ok(format!("nf = {{F: 1/2}} by step {latest} under every strategy, constant 10 more steps, residual 1/2"))
}

fn c6_lambda_ast() -> Outcome {
    let r = Nameless::from_term(&load_term("retry-loop.lam"));
    let t = Nameless::from_term(&parse_lam("T = \\x y. x;").unwrap().get("T").unwrap().clone());
    let tr = run(&LambdaSystem::new(Strategy::Leftmost), MultiDistribution::unit(r), &Policy::Uniform(0), 20).unwrap();
    for n in 0..=20u32 {
        let got = tr.nf[n as usize].get(&t);
        let want = one_minus_dyadic(n);
        ensure(got == want, || format!("depth {n}: true mass {got}, expected {want}"))?;
    }
    Ok("true mass = 1 - 2^-n for n <= 20".into())
}

fn c7_diamond_harness() -> Outcome {
    let corpus: Vec<Term> = (0..500).map(random_term).collect();
    let v = diamond_harness(&corpus, 3, CAP);
    ensure(v.holds(), || format!("{v:?}"))?;
    Ok("500 random closed terms: no pointed nf-diamond violation".into())
}

fn c8_same_termination_time() -> Outcome {
    for seed in 0..200 {
        let m = MultiDistribution::unit(Nameless::from_term(&random_term(seed)));
        let l = run(&LambdaSystem::new(Strategy::Leftmost), m.clone(), &Policy::Uniform(0), 30).unwrap();
        let r = run(&LambdaSystem::new(Strategy::Rightmost), m, &Policy::Uniform(0), 30).unwrap();
        ensure(l.nf == r.nf, || format!("seed {seed}: nf differs"))?;
        for k in 0..=30 {
            let (a, b) = (meantime_bound(&prefix(&l, k)).unwrap(), meantime_bound(&prefix(&r, k)).unwrap());
            ensure(a.partial == b.partial, || format!("seed {seed}: meantime differs at {k}"))?;
        }
    }
    Ok("200 random terms: leftmost and rightmost agree on nf and meantime up to 30 steps".into())
}

fn prefix<E: Ord + Clone>(t: &pars_core::engine::RewriteTrace<E>, k: usize) -> pars_core::engine::RewriteTrace<E> {
    let mut p = t.clone();
    p.states.truncate(k + 1);
    p.nf.truncate(k + 1);
    p.nnorm.truncate(k + 1);
    p
}

fn c9_local_global() -> Outcome {
    let (mut held, mut both_refuted, mut unresolved) = (0, 0, 0);
    for seed in 0..300 {
        let sys = random_system(seed);
        let elements = universe(&sys);
        let diamond = check_pointed_diamond(&sys, &elements, Observation::Nf, CAP);
        let global = |e: &Atom| check_rd_global(&sys, &MultiDistribution::unit(e.clone()), Observation::Nf, 8, CAP);
        if diamond.holds() {
            held += 1;
            for e in &elements {
                let g = global(e);
                ensure(!g.is_refuted(), || format!("seed {seed}: diamond holds, global fails from {e}"))?;
                unresolved += usize::from(!g.holds());
            }
        } else if diamond.is_refuted() && elements.iter().any(|e| global(e).is_refuted()) {
            both_refuted += 1;
        }
    }
    ensure(unresolved == 0, || format!("{unresolved} global checks hit the cap"))?;
    ensure(both_refuted >= 1, || "no system refutes both".into())?;
    Ok(format!("300 systems: {held} with the diamond all pass global RD at depth 8; {both_refuted} refute both"))
}

fn c10_locally_better() -> Outcome {
    let sys = load_rules("fig5.pars");
    let a = [sym("a")];
    let r0 = Restrict::new(&sys, 0);
    let local = check_locally_better(&r0, &sys, &a, Observation::NNorm, 10, CAP);
    ensure(local.holds(), || format!("always-r0: {local:?}"))?;
    let global = check_better_global(&r0, &sys, &MultiDistribution::unit(sym("a")), Observation::NNorm, 10, CAP);
    ensure(global.holds(), || format!("frontier comparison: {global:?}"))?;
    let r2 = Restrict::new(&sys, 2);
    let bad = check_locally_better(&r2, &sys, &a, Observation::NNorm, 10, CAP);
    let step = bad.witness.as_ref().map(|w| w.step);
    ensure(bad.is_refuted() && bad.conclusive && step == Some(1), || format!("always-r2: {bad:?}"))?;
    Ok("always-r0 locally better and dominating to depth 10; always-r2 refuted at step 1".into())
}

fn c11_round_trip_and_determinism() -> Outcome {
    for name in ["fig1.pars", "fig2.pars", "fig3.pars", "fig4.pars", "fig5.pars", "appendix-unconf.pars"] {
        let sys = load_rules(name);
        ensure(parse_rules(&print_rules(&sys), "other").as_ref() == Ok(&sys), || format!("{name} does not round-trip"))?;
        let printed = pars_ok(&["print", fixture(name).to_str().unwrap()])?;
        ensure(printed == print_rules(&sys), || format!("{name}: print differs"))?;
    }
    for name in ["booleans.lam", "pr.lam", "retry-loop.lam", "turing-fixpoint.lam", "two-redexes.lam"] {
        let file = parse_lam(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap();
        let printed = pars_ok(&["print", fixture(name).to_str().unwrap()])?;
        let back = parse_lam(&printed).map_err(|e| format!("{name}: {e}"))?;
        ensure(back.defs.len() == file.defs.len(), || format!("{name}: definitions lost"))?;
        for ((n1, t1), (n2, t2)) in file.defs.iter().zip(&back.defs) {
            ensure(n1 == n2 && Nameless::from_term(t1) == Nameless::from_term(t2), || format!("{name}: {n1} changed"))?;
        }
    }
    let fig5 = fixture("fig5.pars");
    let fig4 = fixture("fig4.pars");
    let pr = fixture("pr.lam");
    let (fig5, fig4, pr) = (fig5.to_str().unwrap(), fig4.to_str().unwrap(), pr.to_str().unwrap());
    let commands: Vec<Vec<&str>> = vec![
        vec!["run", fig5, "--from", "a", "--policy", "seed(42)", "--depth", "12", "--decimal", "4"],
        vec!["run", pr, "--strategy", "random(3)", "--policy", "seed(9)", "--depth", "12"],
        vec!["limit", fig5, "--from", "a", "--all", "--depth", "6"],
        vec!["classify", fig4, "--from", "a", "--depth", "6"],
        vec!["check", fig4, "--property", "global-rd", "--obs", "nf", "--depth", "2"],
        vec!["meantime", fig5, "--from", "a", "--policy", "lex(0101)", "--depth", "10"],
    ];
    for args in &commands {
        let (a, b) = (pars(args), pars(args));
        ensure(a == b, || format!("`pars {}` is not deterministic", args.join(" ")))?;
    }
    Ok(format!("11 fixtures round-trip; {} commands byte-identical across runs", commands.len()))
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "geometric termination", c1_geometric_termination),
        (2, "mean time", c2_meantime),
        (3, "SN failure and WN", c3_sn_failure),
        (4, "UN refutation", c4_un_refutation),
        (5, "lambda limit of PR", c5_lambda_limit),
        (6, "lambda almost-sure termination", c6_lambda_ast),
        (7, "diamond harness", c7_diamond_harness),
        (8, "same expected termination time", c8_same_termination_time),
        (9, "local vs global random descent", c9_local_global),
        (10, "locally better vs better", c10_locally_better),
        (11, "round trip and determinism", c11_round_trip_and_determinism),
    ];
    let mut failed = 0;
    for (n, name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > TIME_BUDGET => Err(format!("{msg}, but took {elapsed:.2?} (budget {TIME_BUDGET:?})")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("criterion {n:>2} PASS {name}: {msg} [{elapsed:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n:>2} FAIL {name}: {msg} [{elapsed:.2?}]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
