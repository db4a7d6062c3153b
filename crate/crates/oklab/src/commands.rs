//! The single-shot commands. Each builds a [`Report`]; classification of
//! errors into exit codes lives in [`RunError`].

use oklab_core::okounkov::OkounkovError;
use oklab_core::toric::{TDivisor, ToricError};
use oklab_core::exactgeom::mixed_volume;
use oklab_core::{Polytope, Rat, RatVec};
use serde_json::{json, Value};

use crate::catalog::{class_from, Testbed};
use crate::encode::{nobody, parse_list, parse_polytope, polytope, rat, ratvec};
use crate::report::{Check, Report};
use crate::suites::{key_of, RunError, Runner};

fn config_err(e: impl std::fmt::Display) -> RunError {
    RunError::Config(e.to_string())
}

/// Input errors (non-big class, wrong length, non-nef slot) are configuration
/// errors; anything else is an engine failure.
fn classify_okounkov(e: OkounkovError) -> RunError {
    match e {
        OkounkovError::NotBig | OkounkovError::NotEffective | OkounkovError::NotIntegral => config_err(e),
        OkounkovError::Toric(t) => classify_toric(t),
        other => RunError::Engine(other.to_string()),
    }
}

fn classify_toric(e: ToricError) -> RunError {
    match e {
        ToricError::NotBig | ToricError::NotNef(_) | ToricError::WrongLength { .. } | ToricError::NotAMaxCone(_) | ToricError::UnknownTestbed(_) => {
            config_err(e)
        }
        other => RunError::Engine(other.to_string()),
    }
}

fn one_testbed(runner: &Runner) -> Result<Testbed, RunError> {
    match &runner.cfg.testbed {
        Some(_) => Ok(runner.testbeds().remove(0)),
        None => Err(config_err("this command needs --testbed")),
    }
}

fn parse_class(tb: &Testbed, s: &str) -> Result<RatVec, RunError> {
    let coeffs = parse_list(s).map_err(config_err)?;
    class_from(&tb.variety, &coeffs).map_err(config_err)
}

pub fn body(runner: &mut Runner, class: &str, report: &mut Report) -> Result<(), RunError> {
    let tb = one_testbed(runner)?;
    let flag = runner.flag_for(&tb)?;
    let c = parse_class(&tb, class)?;
    if !tb.variety.is_big(&c) {
        return Err(config_err(format!("class {} is not big", key_of(&c))));
    }
    let e = runner.engine(&tb, &flag)?;
    let b = e.body(&c).map_err(classify_okounkov)?;
    report.extend([Check::new("body", format!("{}/{}", tb.name(), key_of(&c)), b.exact, json!({"testbed": tb.name(), "body": nobody(&b), "volume": rat(b.body.volume())}))]);
    Ok(())
}

pub fn mu(runner: &mut Runner, class: &str, report: &mut Report) -> Result<(), RunError> {
    let tb = one_testbed(runner)?;
    let flag = runner.flag_for(&tb)?;
    let c = parse_class(&tb, class)?;
    let e = runner.engine(&tb, &flag)?;
    let m = e.mu(&c).map_err(classify_okounkov)?;
    let ep = e.mu_endpoint_check(&c).map_err(classify_okounkov)?;
    report.extend([Check::new(
        "mu",
        format!("{}/{}", tb.name(), key_of(&c)),
        ep.holds,
        json!({"testbed": tb.name(), "flag": flag.cone(), "class": ratvec(&c), "e_class": ratvec(&e.e_class()), "mu": rat(m), "body_endpoint": rat(ep.endpoint)}),
    )]);
    Ok(())
}

/// `--classes "a;b;..."`, each a comma-separated list.
pub fn intersect(runner: &mut Runner, classes: &str, report: &mut Report) -> Result<(), RunError> {
    let tb = one_testbed(runner)?;
    let x = &tb.variety;
    let cs: Vec<RatVec> = classes.split(';').map(|s| parse_class(&tb, s)).collect::<Result<_, _>>()?;
    let divs: Vec<TDivisor> = cs.iter().map(|c| x.lift(c)).collect();
    let n = x.intersection_number(&divs).map_err(classify_toric)?;
    report.extend([Check::new(
        "intersect",
        format!("{}/{}", tb.name(), cs.iter().map(key_of).collect::<Vec<_>>().join("·")),
        true,
        json!({"testbed": tb.name(), "classes": cs.iter().map(ratvec).collect::<Vec<_>>(), "intersection": rat(n)}),
    )]);
    Ok(())
}

/// Mixed volume of explicit polytopes (a JSON array) or of the bodies of
/// `--classes` on the selected testbed.
pub fn mixedvol(runner: &mut Runner, classes: Option<&str>, polytopes: Option<&Value>, report: &mut Report) -> Result<(), RunError> {
    let (bodies, key, inputs): (Vec<Polytope>, String, Value) = match (classes, polytopes) {
        (Some(cs), None) => {
            let tb = one_testbed(runner)?;
            let flag = runner.flag_for(&tb)?;
            let cs: Vec<RatVec> = cs.split(';').map(|s| parse_class(&tb, s)).collect::<Result<_, _>>()?;
            let e = runner.engine(&tb, &flag)?;
            let mut bodies = Vec::new();
            for c in &cs {
                bodies.push(e.body_effective(c).map_err(classify_okounkov)?.body);
            }
            let key = format!("{}/{}", tb.name(), cs.iter().map(key_of).collect::<Vec<_>>().join(";"));
            (bodies, key, json!({"testbed": tb.name(), "classes": cs.iter().map(ratvec).collect::<Vec<_>>()}))
        }
        (None, Some(v)) => {
            let arr = v.as_array().ok_or_else(|| config_err("polytope file must hold a JSON array"))?;
            let bodies: Vec<Polytope> = arr.iter().map(parse_polytope).collect::<anyhow::Result<_>>().map_err(config_err)?;
            (bodies, "polytopes".into(), json!({}))
        }
        _ => return Err(config_err("give exactly one of --classes or --polytopes")),
    };
    let refs: Vec<&Polytope> = bodies.iter().collect();
    let v: Rat = mixed_volume(&refs).map_err(config_err)?;
    let mut data = inputs;
    data["bodies"] = Value::Array(bodies.iter().map(polytope).collect());
    data["mixed_volume"] = rat(v);
    report.extend([Check::new("mixedvol", key, true, data)]);
    Ok(())
}
