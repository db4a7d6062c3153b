use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use oklab_core::toric::{testbeds, AdmissibleFlag, Fan, ToricVariety};
use oklab_core::{Rat, RatVec};
use serde_json::Value;

use crate::encode;

/// A flag corresponding to `l` together with a companion class `m`; the
/// additivity sweeps run on `C_l(m)`.
#[derive(Clone, Debug)]
pub struct Setup {
    pub flag: AdmissibleFlag,
    pub l: RatVec,
    pub m: RatVec,
}

#[derive(Clone, Debug)]
pub struct Testbed {
    pub variety: ToricVariety,
    pub setup: Option<Setup>,
}

impl Testbed {
    pub fn name(&self) -> &str {
        self.variety.name()
    }

    pub fn default_flag(&self) -> AdmissibleFlag {
        match &self.setup {
            Some(s) => s.flag.clone(),
            None => AdmissibleFlag::standard(&self.variety),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Catalog {
    entries: BTreeMap<String, Testbed>,
}

fn ints(xs: &[i64]) -> RatVec {
    RatVec::from_ints(xs.iter().copied())
}

fn shipped(name: &str) -> Testbed {
    let variety = testbeds::builtin(name).expect("built-in name");
    let (cone, l, m): (&[usize], &[i64], &[i64]) = match name {
        "p1" => (&[0], &[1], &[1]),
        "p2" => (&[1, 2], &[1], &[1]),
        "p3" => (&[0, 1, 2], &[1], &[1]),
        "p1xp1" => (&[1, 2], &[1, 0], &[0, 1]),
        "p1xp1xp1" => (&[1, 3, 5], &[1, 0, 0], &[0, 1, 1]),
        "f1" => (&[3, 0], &[0, 1], &[2, 1]),
        "blpq-p2" => (&[4, 0], &[0, 0, 1], &[1, 2, 1]),
        _ => unreachable!(),
    };
    let flag = AdmissibleFlag::new(&variety, cone.to_vec()).expect("shipped flag is a maximal cone");
    Testbed { setup: Some(Setup { flag, l: ints(l), m: ints(m) }), variety }
}

impl Catalog {
    pub fn builtin() -> Catalog {
        let entries = testbeds::NAMES.iter().map(|n| (n.to_string(), shipped(n))).collect();
        Catalog { entries }
    }

    /// Built-ins extended by every `*.json` file in `dir` (sorted by file name).
    pub fn with_dir(dir: &Path) -> Result<Catalog> {
        let mut cat = Catalog::builtin();
        let mut files: Vec<_> = std::fs::read_dir(dir)
            .with_context(|| format!("reading catalog directory {}", dir.display()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|e| e == "json"))
            .collect();
        files.sort();
        for f in files {
            let text = std::fs::read_to_string(&f).with_context(|| format!("reading {}", f.display()))?;
            let v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", f.display()))?;
            let tb = parse_testbed(&v).with_context(|| format!("loading {}", f.display()))?;
            cat.entries.insert(tb.name().to_string(), tb);
        }
        Ok(cat)
    }

    pub fn get(&self, name: &str) -> Result<&Testbed> {
        self.entries.get(name).ok_or_else(|| anyhow!("unknown testbed {name:?}; known: {}", self.names().join(", ")))
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.keys().map(String::as_str).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Testbed> {
        self.entries.values()
    }
}

fn int_rows(v: &Value, what: &str) -> Result<Vec<Vec<i64>>> {
    v.as_array()
        .ok_or_else(|| anyhow!("{what} must be an array of arrays"))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| anyhow!("{what} entries must be arrays"))?
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| anyhow!("{what} entries must be integers")))
                .collect()
        })
        .collect()
}

pub fn parse_flag(x: &ToricVariety, v: &Value) -> Result<AdmissibleFlag> {
    let cone = v.get("cone").unwrap_or(v).as_array().ok_or_else(|| anyhow!("flag must be {{\"cone\": [...]}}"))?;
    let cone = cone.iter().map(|i| i.as_u64().map(|i| i as usize).ok_or_else(|| anyhow!("flag entries must be ray indices"))).collect::<Result<Vec<_>>>()?;
    Ok(AdmissibleFlag::new(x, cone)?)
}

/// Ray coefficients or `N¹` coordinates, returned as `N¹` coordinates.
pub fn class_from(x: &ToricVariety, coeffs: &[Rat]) -> Result<RatVec> {
    let d = x.divisor_from_input(coeffs)?;
    Ok(x.class_of(&d)?)
}

/// `{"name", "rays", "max_cones"}` with an optional `{"flag", "l", "m"}` setup.
pub fn parse_testbed(v: &Value) -> Result<Testbed> {
    let name = v.get("name").and_then(Value::as_str).ok_or_else(|| anyhow!("testbed needs a \"name\""))?;
    let rays = int_rows(v.get("rays").ok_or_else(|| anyhow!("testbed needs \"rays\""))?, "rays")?;
    let cones = int_rows(v.get("max_cones").ok_or_else(|| anyhow!("testbed needs \"max_cones\""))?, "max_cones")?;
    let Some(dim) = rays.first().map(Vec::len) else {
        bail!("testbed has no rays");
    };
    let cones = cones.into_iter().map(|c| c.into_iter().map(|i| i as usize).collect()).collect();
    let variety = ToricVariety::new(name, Fan::new(dim, rays, cones)?)?;
    let setup = match (v.get("flag"), v.get("l"), v.get("m")) {
        (Some(f), Some(l), Some(m)) => {
            let flag = parse_flag(&variety, f)?;
            let l = class_from(&variety, &encode::parse_divisor(l)?)?;
            let m = class_from(&variety, &encode::parse_divisor(m)?)?;
            Some(Setup { flag, l, m })
        }
        (None, None, None) => None,
        _ => bail!("\"flag\", \"l\" and \"m\" must be given together"),
    };
    Ok(Testbed { variety, setup })
}

/// `standard`, `cone:i,j,...` or a JSON flag object.
pub fn select_flag(tb: &Testbed, sel: Option<&str>) -> Result<AdmissibleFlag> {
    match sel {
        None => Ok(tb.default_flag()),
        Some("standard") => Ok(AdmissibleFlag::standard(&tb.variety)),
        Some(s) if s.starts_with("cone:") => {
            let cone = s[5..]
                .split(',')
                .map(|i| i.trim().parse::<usize>().with_context(|| format!("bad ray index in {s:?}")))
                .collect::<Result<Vec<_>>>()?;
            Ok(AdmissibleFlag::new(&tb.variety, cone)?)
        }
        Some(s) if s.trim_start().starts_with('{') => parse_flag(&tb.variety, &serde_json::from_str(s)?),
        Some(s) => bail!("flag selector must be \"standard\", \"cone:i,j,...\" or JSON, got {s:?}"),
    }
}
