//! The twelve acceptance criteria, each with its size threshold and time
//! budget. Every criterion prints one line; the test fails if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::time::{Duration, Instant};

use oklab::{Catalog, Check, Report, RunConfig, RunError, Runner, Suite};
use oklab_core::inequalities::{check_cor13, cor15_check, injectivity_check, lemma61_check, DeltaMap};
use oklab_core::okounkov::BodyEngine;
use oklab_core::toric::{testbeds, AdmissibleFlag, ToricVariety};
use oklab_core::{Rat, RatVec};
use serde_json::Value;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Outcome {
        Outcome { pass, detail: detail.into() }
    }
}

fn cv(xs: &[i64]) -> RatVec {
    RatVec::from_ints(xs.iter().copied())
}

fn config(testbed: Option<&str>, flag: Option<&str>) -> RunConfig {
    RunConfig { testbed: testbed.map(str::to_string), flag: flag.map(str::to_string), ..RunConfig::default() }
}

fn run(cfg: RunConfig, suite: Suite) -> Result<Report, RunError> {
    let mut report = Report::new("verify", cfg.echo());
    let mut runner = Runner::new(cfg, Catalog::builtin())?;
    runner.run(suite, &mut report)?;
    Ok(report)
}

fn of<'a>(r: &'a Report, suite: &str) -> Vec<&'a Check> {
    r.checks.iter().filter(|c| c.suite == suite).collect()
}

fn all_pass(cs: &[&Check]) -> bool {
    cs.iter().all(|c| c.pass)
}

fn first_failure(cs: &[&Check]) -> String {
    cs.iter().find(|c| !c.pass).map(|c| format!("; first failure {}", c.key)).unwrap_or_default()
}

fn engine(x: ToricVariety, cone: &[usize]) -> BodyEngine {
    let flag = AdmissibleFlag::new(&x, cone.to_vec()).unwrap();
    BodyEngine::new(x, flag, 3).unwrap()
}

fn rat_of(v: &Value) -> Rat {
    oklab::encode::parse_rat_value(v).unwrap()
}

fn criterion1() -> Outcome {
    let r = match run(config(Some("p1"), None), Suite::Base) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let cs = of(&r, "base");
    let segments: Vec<&&Check> = cs.iter().filter(|c| c.key.contains("/segment/")).collect();
    let degrees: BTreeSet<String> = segments.iter().map(|c| rat_of(&c.data["degree"]).to_string()).collect();
    let expected: BTreeSet<String> = ["1/2", "1", "2", "3"].iter().map(|s| s.to_string()).collect();
    let pass = all_pass(&cs) && degrees == expected;
    Outcome::new(pass, format!("segments [0,q] for q in {{{}}}, {} degree-sum checks{}", degrees.into_iter().collect::<Vec<_>>().join(", "), cs.len() - segments.len(), first_failure(&cs)))
}

fn criterion2() -> Outcome {
    let r = match run(config(None, None), Suite::Volume) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let cs = of(&r, "volume");
    let beds: BTreeSet<&str> = cs.iter().map(|c| c.data["testbed"].as_str().unwrap()).collect();
    let pass = cs.len() >= 50 && all_pass(&cs) && beds.len() == testbeds::NAMES.len();
    Outcome::new(pass, format!("{} nef big classes on {} testbeds{}", cs.len(), beds.len(), first_failure(&cs)))
}

/// Criteria 3, 4 and 7 share the additivity sweep.
struct Sweep {
    additivity: Result<Report, RunError>,
    prop14: Result<Report, RunError>,
}

fn criterion3(s: &Sweep) -> Outcome {
    let r = match &s.additivity {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let cs = of(r, "additivity");
    let equal = cs.iter().filter(|c| c.data["verdict"]["status"] == "equal").count();
    let per_bed: BTreeMap<&str, usize> = cs.iter().fold(BTreeMap::new(), |mut m, c| {
        *m.entry(c.data["testbed"].as_str().unwrap()).or_default() += 1;
        m
    });
    let pass = cs.len() >= 100 && equal == cs.len() && all_pass(&cs);
    let beds: Vec<String> = per_bed.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    Outcome::new(pass, format!("{equal}/{} grid pairs equal ({}){}", cs.len(), beds.join(" "), first_failure(&cs)))
}

fn criterion4(s: &Sweep, strict: &[(String, Result<Report, RunError>)]) -> Outcome {
    let mut pairs = 0usize;
    let mut errors = Vec::new();
    match &s.additivity {
        Ok(r) => pairs += of(r, "additivity").len(),
        Err(e) => errors.push(e.to_string()),
    }
    for (name, r) in strict {
        match r {
            Ok(r) => pairs += of(r, "strict").iter().map(|c| c.data["pairs_checked"].as_u64().unwrap_or(0) as usize).sum::<usize>(),
            Err(RunError::Inclusion(w)) => errors.push(format!("{name}: inclusion violated at {w}")),
            Err(_) => {}
        }
    }
    Outcome::new(errors.is_empty() && pairs > 0, format!("inclusion held on {pairs} pairs (grid sweep and ample-box search){}", errors.first().map(|e| format!("; {e}")).unwrap_or_default()))
}

fn criterion5() -> Outcome {
    let r = match run(config(None, None), Suite::Slices) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let slices = of(&r, "slices");
    let endpoints = of(&r, "endpoint");
    let keys_s: BTreeSet<&str> = slices.iter().map(|c| c.key.as_str()).collect();
    let keys_e: BTreeSet<&str> = endpoints.iter().map(|c| c.key.as_str()).collect();
    let ts: u64 = slices.iter().map(|c| c.data["t_checked"].as_u64().unwrap()).sum();
    let dens_ok = slices.iter().all(|c| c.data["grid_den"].as_i64() == Some(12));
    let pass = slices.len() >= 20 && all_pass(&slices) && all_pass(&endpoints) && keys_s == keys_e && dens_ok;
    Outcome::new(
        pass,
        format!("{} (M, flag) cases, {ts} grid t checked, {} endpoint checks{}{}", slices.len(), endpoints.len(), first_failure(&slices), first_failure(&endpoints)),
    )
}

fn criterion6() -> Outcome {
    let r = match run(config(None, None), Suite::Replay) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let cs = of(&r, "replay");
    let ge: u64 = cs.iter().map(|c| c.data["cases"]["t_at_least_t0"].as_u64().unwrap()).sum();
    let lt: u64 = cs.iter().map(|c| c.data["cases"]["t_below_t0"].as_u64().unwrap()).sum();
    let positive_t0 = cs.iter().filter(|c| c.data["t0"].is_array() && rat_of(&c.data["t0"]).is_positive()).count();
    let pass = cs.len() >= 10 && all_pass(&cs) && ge > 0 && lt > 0 && positive_t0 > 0;
    Outcome::new(pass, format!("{} pairs replayed, {ge} steps with t >= t0, {lt} with t < t0, {positive_t0} pairs with t0 > 0{}", cs.len(), first_failure(&cs)))
}

fn criterion7(s: &Sweep) -> Outcome {
    let (a, p) = match (&s.additivity, &s.prop14) {
        (Ok(a), Ok(p)) => (a, p),
        (Err(e), _) | (_, Err(e)) => return Outcome::new(false, e.to_string()),
    };
    let additive: BTreeSet<&str> = of(a, "additivity").into_iter().filter(|c| c.data["verdict"]["status"] == "equal").map(|c| c.key.as_str()).collect();
    let cs = of(p, "prop14");
    let keys: BTreeSet<&str> = cs.iter().map(|c| c.key.as_str()).collect();
    let mu_ok = cs.iter().all(|c| rat_of(&c.data["mu_sum"]) == rat_of(&c.data["mu_l"]) + rat_of(&c.data["mu_m"]));
    let pass = additive.is_subset(&keys) && all_pass(&cs) && mu_ok && !additive.is_empty();
    Outcome::new(pass, format!("{} additive pairs: μ additive and [L°, M°] in the boundary on the 1/12 grid{}", additive.len(), first_failure(&cs)))
}

fn criterion8() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for bed in ["p2", "p1xp1", "p1xp1xp1"] {
        match run(config(Some(bed), None), Suite::Cor13) {
            Ok(r) => {
                let cs = of(&r, "cor13");
                let d = Catalog::builtin().get(bed).unwrap().variety.dim();
                let ks = cs.iter().filter(|c| c.key.contains("/L^")).count();
                pass &= all_pass(&cs) && ks == d + 1;
                notes.push(format!("{bed}: {} tuples", cs.len()));
            }
            Err(e) => {
                pass = false;
                notes.push(format!("{bed}: {e}"));
            }
        }
    }
    let mut inj = 0;
    for tb in Catalog::builtin().iter().filter(|t| t.variety.rho() >= 2) {
        match run(config(Some(tb.name()), None), Suite::Cor13) {
            Ok(r) => {
                let cs = of(&r, "injectivity");
                pass &= cs.len() == 1 && all_pass(&cs);
                inj += cs.len();
            }
            Err(e) => {
                pass = false;
                notes.push(format!("{}: {e}", tb.name()));
            }
        }
    }
    // Worked cases.
    let mut e = engine(testbeds::p1xp1(), &[1, 2]);
    let map = DeltaMap::new(&mut e, &cv(&[2, 1]), &cv(&[1, 2])).unwrap();
    let i = injectivity_check(&map).unwrap();
    let sq = i.sum_power == Rat::from(18) && i.lower == Rat::from(16) && i.upper == Rat::from(16) && i.holds();
    let c = check_cor13(&DeltaMap::new(&mut e, &cv(&[1, 0]), &cv(&[0, 1])).unwrap(), &[cv(&[1, 1]), cv(&[1, 1])]).unwrap();
    let c_ok = c.holds && c.lhs == Rat::from(1);
    let mut e = engine(testbeds::p2(), &[1, 2]);
    let c = check_cor13(&DeltaMap::new(&mut e, &cv(&[1]), &cv(&[1])).unwrap(), &[cv(&[1]), cv(&[2])]).unwrap();
    let p2_ok = c.holds && c.lhs == Rat::from(1) && c.rhs == Rat::from(1);
    let mut e = engine(testbeds::f1(), &[3, 0]);
    let f1_ok = injectivity_check(&DeltaMap::new(&mut e, &cv(&[2, 1]), &cv(&[3, 2])).unwrap()).unwrap().holds();
    pass &= sq && c_ok && p2_ok && f1_ok;
    Outcome::new(
        pass,
        format!("{}; injectivity on {inj} testbeds with rho >= 2; P1xP1 (L+M)^2 = {} vs {}; worked cases {}", notes.join(", "), i.sum_power, i.upper, if sq && c_ok && p2_ok && f1_ok { "ok" } else { "FAILED" }),
    )
}

fn criterion9() -> Outcome {
    let r = match run(config(None, None), Suite::Lemma61) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let cs = of(&r, "lemma61");
    let tight: Vec<&&Check> = cs.iter().filter(|c| c.data["tight"] == true).collect();
    let tight_zero = tight.iter().all(|c| rat_of(&c.data["slack"]).is_zero());
    let flags: BTreeSet<String> = cs.iter().map(|c| c.key.split('/').take(2).collect::<Vec<_>>().join("/")).collect();
    // The flag [1,2] corresponds to M = (1,0); V(Δ(L), Δ(M)) = (L·M)/2.
    let mut e = engine(testbeds::p1xp1(), &[1, 2]);
    let m = cv(&[1, 0]);
    let mut closed = true;
    for a in 1..=3 {
        for b in 1..=3 {
            let l = cv(&[a, b]);
            let x = e.variety().clone();
            let lm = x.intersection_number(&[x.lift(&l), x.lift(&m)]).unwrap();
            let rec = lemma61_check(&mut e, &l, &m).unwrap();
            closed &= rec.tight && rec.slack.is_zero() && rec.lhs == lm / Rat::from(2);
        }
    }
    let mut e = engine(testbeds::p2(), &[1, 2]);
    let rec = lemma61_check(&mut e, &cv(&[1]), &cv(&[2])).unwrap();
    let p2_ok = rec.tight && rec.slack.is_zero() && rec.lhs == Rat::from(1);
    let pass = cs.len() >= 100 && all_pass(&cs) && !tight.is_empty() && tight_zero && closed && p2_ok;
    Outcome::new(
        pass,
        format!("{} pairs over {} flags, {} on corresponding flags all with slack 0; P1xP1 V = (L·M)/2 for L in [1,3]^2 {}{}", cs.len(), flags.len(), tight.len(), if closed && p2_ok { "ok" } else { "FAILED" }, first_failure(&cs)),
    )
}

fn criterion10() -> Outcome {
    let cfg = RunConfig { seed: 7, ..config(None, None) };
    let r = match run(cfg, Suite::Cor15) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let cs = of(&r, "cor15");
    let mut per_bed: BTreeMap<&str, usize> = BTreeMap::new();
    for c in &cs {
        *per_bed.entry(c.key.split('/').next().unwrap()).or_default() += 1;
    }
    let dims_ok = Catalog::builtin().iter().filter(|t| matches!(t.variety.dim(), 2 | 3)).all(|t| per_bed.get(t.name()).copied().unwrap_or(0) >= 200);
    let mut e = engine(testbeds::p1xp1(), &[1, 2]);
    let t = cor15_check(&mut e, &cv(&[1, 1]), &cv(&[1, 0]), &cv(&[0, 1])).unwrap();
    let tight = t.pass() && t.direct.slack.is_zero() && t.direct.lhs == Rat::from(2) && t.direct.rhs == Rat::from(2);
    let pass = all_pass(&cs) && dims_ok && tight;
    let beds: Vec<String> = per_bed.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    Outcome::new(pass, format!("nef triples per testbed ({}); O(1,1),O(1,0),O(0,1) slack {}{}", beds.join(" "), t.direct.slack, first_failure(&cs)))
}

fn criterion11() -> Outcome {
    let r = match run(config(None, None), Suite::Lx) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let cs = of(&r, "lx");
    let mut triples: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for c in &cs {
        let parts: Vec<&str> = c.key.split('/').collect();
        triples.entry(parts[1].to_string()).or_default().insert(format!("{}/{}", parts[2], parts[3]));
    }
    let counts_ok = [("d2", 2usize), ("d3", 3)].iter().all(|(d, dim)| triples.get(*d).map_or(0, |s| s.len()) >= 200 * (dim + 1));
    let ders = of(&r, "derivative");
    let pass = counts_ok && all_pass(&cs) && ders.len() >= 10 && all_pass(&ders);
    let per: Vec<String> = triples.iter().map(|(d, s)| format!("{d}: {} (triple, k)", s.len())).collect();
    Outcome::new(pass, format!("{}; {} derivative checks{}{}", per.join(", "), ders.len(), first_failure(&cs), first_failure(&ders)))
}

fn strict_runs() -> Vec<(String, Result<Report, RunError>)> {
    [("blpq-p2", "cone:4,0"), ("p2", "cone:1,2"), ("p1xp1", "cone:1,2")]
        .iter()
        .map(|(bed, flag)| (bed.to_string(), run(config(Some(bed), Some(flag)), Suite::Strict)))
        .collect()
}

fn criterion12(strict: &[(String, Result<Report, RunError>)]) -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for (bed, r) in strict {
        let r = match r {
            Ok(r) => r,
            Err(e) => {
                pass = false;
                notes.push(format!("{bed}: {e}"));
                continue;
            }
        };
        let cs = of(r, "strict");
        let c = cs[0];
        let outcome = c.data["outcome"].as_str().unwrap();
        let ok = match (bed.as_str(), outcome) {
            ("blpq-p2", "strict") => c.pass && c.witness.is_some(),
            ("blpq-p2", "none_found") => c.pass && !r.notes.is_empty(),
            (_, "none_found") => c.pass,
            _ => false,
        };
        pass &= ok && cs.len() == 1;
        notes.push(format!("{bed}: {outcome} after {} pairs", c.data["pairs_checked"]));
    }
    Outcome::new(pass, notes.join(", "))
}

fn timed(f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let o = f();
    (o, start.elapsed())
}

#[test]
fn acceptance_criteria() {
    let mut results: Vec<(u8, &str, Outcome, Duration, Duration)> = Vec::new();
    let secs = Duration::from_secs;

    let (o, t) = timed(criterion1);
    results.push((1, "base case on P1", o, t, secs(1)));
    let (o, t) = timed(criterion2);
    results.push((2, "volume identity", o, t, secs(30)));

    let start = Instant::now();
    let additivity = run(config(None, None), Suite::Additivity);
    let t3 = start.elapsed();
    let start = Instant::now();
    let prop14 = run(config(None, None), Suite::Prop14);
    let t7 = start.elapsed();
    let sweep = Sweep { additivity, prop14 };
    results.push((3, "additivity sweep", criterion3(&sweep), t3, secs(120)));

    let start = Instant::now();
    let strict = strict_runs();
    let t12 = start.elapsed();
    results.push((4, "inclusion never fails", criterion4(&sweep, &strict), t3 + t12, secs(120 + 300)));

    let (o, t) = timed(criterion5);
    results.push((5, "slice formula and mu endpoint", o, t, secs(60)));
    let (o, t) = timed(criterion6);
    results.push((6, "slice-by-slice proof replay", o, t, secs(60)));
    results.push((7, "necessary condition", criterion7(&sweep), t7, secs(60)));
    let (o, t) = timed(criterion8);
    results.push((8, "intersection products and injectivity", o, t, secs(60)));
    let (o, t) = timed(criterion9);
    results.push((9, "mixed volume vs intersection bound", o, t, secs(120)));
    let (o, t) = timed(criterion10);
    results.push((10, "intersection-number inequality", o, t, secs(120)));
    let (o, t) = timed(criterion11);
    results.push((11, "Lehmann-Xiao and derivative", o, t, secs(120)));
    results.push((12, "strict-inclusion search", criterion12(&strict), t12, secs(300)));

    let mut err = std::io::stderr().lock();
    let mut failed = Vec::new();
    for (n, name, o, t, budget) in &results {
        let ok = o.pass && t <= budget;
        if !ok {
            failed.push(*n);
        }
        let timing = format!("{:.2}s of {}s", t.as_secs_f64(), budget.as_secs());
        writeln!(err, "criterion {n:>2} {} {name}: {} [{timing}]", if ok { "PASS" } else { "FAIL" }, o.detail).unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
