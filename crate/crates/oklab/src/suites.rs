//! Verification sweeps. Each suite appends one [`Check`] per verified fact
//! (or per aggregated case) to a [`Report`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use oklab_core::additivity::{
    ample_box, check_additivity, cone_grid, in_cone, necessary_condition_check, search_strict, slice_decomposition_replay, AdditivityError,
    ConeCLM, Status, StrictSearch,
};
use oklab_core::inequalities::{
    check_cor13, cor15_check, derivative_of_bodies, injectivity_check, lehmann_xiao_check, lemma61_check, mixed_volume_derivative_check,
    DeltaMap, InequalityError,
};
use oklab_core::okounkov::{BodyEngine, OkounkovError};
use oklab_core::toric::{AdmissibleFlag, CurveModel, TDivisor, ToricError, ToricVariety};
use oklab_core::{Polytope, Rat, RatVec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::catalog::{select_flag, Catalog, Testbed};
use crate::config::RunConfig;
use crate::encode::{polytope, rat, ratvec, record, trace, verdict};
use crate::report::{Check, Report};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("inclusion Δ(N1)+Δ(N2) ⊆ Δ(N1+N2) violated: {0}")]
    Inclusion(String),
    #[error("{0}")]
    Engine(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Inclusion(_) => 3,
            RunError::Engine(_) => 1,
        }
    }
}

impl From<AdditivityError> for RunError {
    fn from(e: AdditivityError) -> Self {
        match e {
            AdditivityError::InclusionViolated(w) => RunError::Inclusion(format!("witness {w}")),
            other => RunError::Engine(other.to_string()),
        }
    }
}

impl From<InequalityError> for RunError {
    fn from(e: InequalityError) -> Self {
        RunError::Engine(e.to_string())
    }
}

impl From<OkounkovError> for RunError {
    fn from(e: OkounkovError) -> Self {
        RunError::Engine(e.to_string())
    }
}

impl From<ToricError> for RunError {
    fn from(e: ToricError) -> Self {
        RunError::Engine(e.to_string())
    }
}

impl From<oklab_core::GeomError> for RunError {
    fn from(e: oklab_core::GeomError) -> Self {
        RunError::Engine(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Base,
    Volume,
    Additivity,
    Slices,
    Replay,
    Prop14,
    Cor13,
    Lemma61,
    Cor15,
    Lx,
    Strict,
    All,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "base" => Suite::Base,
            "volume" => Suite::Volume,
            "additivity" => Suite::Additivity,
            "slices" => Suite::Slices,
            "replay" => Suite::Replay,
            "prop14" => Suite::Prop14,
            "cor13" => Suite::Cor13,
            "lemma61" => Suite::Lemma61,
            "cor15" => Suite::Cor15,
            "lx" => Suite::Lx,
            "strict" => Suite::Strict,
            "all" => Suite::All,
            other => return Err(format!("unknown suite {other:?}")),
        })
    }
}

impl Suite {
    /// What `all` expands to; the strict search has its own command.
    pub const ALL: [Suite; 10] = [
        Suite::Base,
        Suite::Volume,
        Suite::Additivity,
        Suite::Slices,
        Suite::Replay,
        Suite::Prop14,
        Suite::Cor13,
        Suite::Lemma61,
        Suite::Cor15,
        Suite::Lx,
    ];
}

pub fn key_of(v: &RatVec) -> String {
    let parts: Vec<String> = v.iter().map(|r| r.to_string()).collect();
    format!("({})", parts.join(","))
}

fn cone_key(f: &AdmissibleFlag) -> String {
    let parts: Vec<String> = f.cone().iter().map(|r| r.to_string()).collect();
    format!("cone:{}", parts.join(","))
}

/// Shared state of one run: configuration, catalog and body engines keyed
/// by testbed and flag.
pub struct Runner {
    pub cfg: RunConfig,
    pub catalog: Catalog,
    engines: BTreeMap<(String, Vec<usize>), BodyEngine>,
}

impl Runner {
    pub fn new(cfg: RunConfig, catalog: Catalog) -> Result<Runner, RunError> {
        cfg.validate().map_err(RunError::Config)?;
        if let Some(t) = &cfg.testbed {
            catalog.get(t).map_err(|e| RunError::Config(e.to_string()))?;
        }
        Ok(Runner { cfg, catalog, engines: BTreeMap::new() })
    }

    pub fn testbeds(&self) -> Vec<Testbed> {
        match &self.cfg.testbed {
            Some(t) => vec![self.catalog.get(t).expect("checked in new").clone()],
            None => self.catalog.iter().cloned().collect(),
        }
    }

    pub fn engine(&mut self, tb: &Testbed, flag: &AdmissibleFlag) -> Result<&mut BodyEngine, RunError> {
        let key = (tb.name().to_string(), flag.cone().to_vec());
        if !self.engines.contains_key(&key) {
            let e = BodyEngine::new(tb.variety.clone(), flag.clone(), self.cfg.m_max)?;
            self.engines.insert(key.clone(), e);
        }
        Ok(self.engines.get_mut(&key).unwrap())
    }

    /// The configured flag, or the testbed default.
    pub fn flag_for(&self, tb: &Testbed) -> Result<AdmissibleFlag, RunError> {
        select_flag(tb, self.cfg.flag.as_deref()).map_err(|e| RunError::Config(e.to_string()))
    }

    /// The setup flag for sweeps over `C_L(M)`; an explicit flag must still
    /// correspond to `L`.
    fn setup_of(&self, tb: &Testbed) -> Result<Option<(AdmissibleFlag, ConeCLM)>, RunError> {
        let Some(s) = &tb.setup else {
            return Ok(None);
        };
        let flag = match &self.cfg.flag {
            None => s.flag.clone(),
            Some(_) => {
                let f = self.flag_for(tb)?;
                let x = &tb.variety;
                if !x.flag_corresponds(&f, &x.lift(&s.l))?.corresponds {
                    return Err(RunError::Config(format!("flag {} does not correspond to L = {}", cone_key(&f), key_of(&s.l))));
                }
                f
            }
        };
        Ok(Some((flag, ConeCLM { l: s.l.clone(), m: s.m.clone() })))
    }

    pub fn run(&mut self, suite: Suite, report: &mut Report) -> Result<(), RunError> {
        match suite {
            Suite::All => {
                for s in Suite::ALL {
                    self.run(s, report)?;
                }
                Ok(())
            }
            Suite::Base => self.base(report),
            Suite::Volume => self.volume(report),
            Suite::Additivity => self.additivity(report),
            Suite::Slices => self.slices(report),
            Suite::Replay => self.replay(report),
            Suite::Prop14 => self.prop14(report),
            Suite::Cor13 => self.cor13(report),
            Suite::Lemma61 => self.lemma61(report),
            Suite::Cor15 => self.cor15(report),
            Suite::Lx => self.lx(report),
            Suite::Strict => self.strict(report),
        }
    }

    /// Bodies of degree-`q` divisors on curves, and degree additivity.
    fn base(&mut self, report: &mut Report) -> Result<(), RunError> {
        let degrees = [Rat::new(1, 2), Rat::from(1), Rat::from(2), Rat::from(3)];
        for tb in self.testbeds().into_iter().filter(|t| t.variety.dim() == 1) {
            let flag = self.flag_for(&tb)?;
            let e = self.engine(&tb, &flag)?;
            let unit = e.variety().class_of(&e.variety().ray_divisor(0))?;
            for &q in &degrees {
                let b = e.body(&unit.scale(q))?;
                let expected = Polytope::cuboid(&[(Rat::ZERO, q)]);
                let curve = CurveModel.body(q)?;
                let pass = b.exact && b.body == expected && curve == expected;
                report.extend([Check::new(
                    "base",
                    format!("{}/{}/segment/{}", tb.name(), cone_key(&flag), q),
                    pass,
                    json!({"testbed": tb.name(), "degree": rat(q), "body": polytope(&b.body), "exact": b.exact}),
                )]);
            }
            for (i, &a) in degrees.iter().enumerate() {
                for &b in &degrees[i..] {
                    let v = check_additivity(e, &unit.scale(a), &unit.scale(b))?;
                    let len = v.sum_body.max_coord(0).unwrap_or(Rat::ZERO);
                    report.extend([Check::new(
                        "base",
                        format!("{}/{}/degree-sum/{}+{}", tb.name(), cone_key(&flag), a, b),
                        v.status == Status::Equal && len == a + b,
                        json!({"testbed": tb.name(), "q1": rat(a), "q2": rat(b), "verdict": verdict(&v)}),
                    )]);
                }
            }
        }
        Ok(())
    }

    /// `d!·vol Δ(D) = D^d` against recursive restriction to ray divisors.
    fn volume(&mut self, report: &mut Report) -> Result<(), RunError> {
        for tb in self.testbeds() {
            let flag = self.flag_for(&tb)?;
            let x = tb.variety.clone();
            let d = x.dim();
            let classes = box_classes(x.rho(), 1, 4).into_iter().filter(|c| x.is_nef(c) && x.is_big(c));
            let e = self.engine(&tb, &flag)?;
            for c in classes {
                let body = e.body(&c)?;
                let lhs = body.body.volume() * factorial(d);
                let oracle = self_intersection(&x, &x.lift(&c))?;
                let pass = body.exact && lhs == oracle;
                report.extend([Check::new(
                    "volume",
                    format!("{}/{}/{}", tb.name(), cone_key(&flag), key_of(&c)),
                    pass,
                    json!({"testbed": tb.name(), "class": ratvec(&c), "d_factorial_vol": rat(lhs), "self_intersection": rat(oracle), "exact": body.exact}),
                )]);
            }
        }
        Ok(())
    }

    fn grid(&mut self, tb: &Testbed) -> Result<Option<(AdmissibleFlag, ConeCLM, Vec<RatVec>)>, RunError> {
        let Some((flag, cone)) = self.setup_of(tb)? else {
            return Ok(None);
        };
        let coeffs = self.cfg.coeffs.clone();
        let e = self.engine(tb, &flag)?;
        let classes = cone_grid(e, &cone, &coeffs);
        Ok(Some((flag, cone, classes)))
    }

    /// Every grid pair of `C_L(M) ∩ Amp` is additive.
    fn additivity(&mut self, report: &mut Report) -> Result<(), RunError> {
        for tb in self.testbeds() {
            let Some((flag, cone, classes)) = self.grid(&tb)? else { continue };
            let e = self.engine(&tb, &flag)?;
            for i in 0..classes.len() {
                for j in i..classes.len() {
                    let (a, b) = (&classes[i], &classes[j]);
                    let v = check_additivity(e, a, b)?;
                    let mut c = Check::new(
                        "additivity",
                        format!("{}/{}/{}+{}", tb.name(), cone_key(&flag), key_of(a), key_of(b)),
                        v.status == Status::Equal,
                        json!({"testbed": tb.name(), "flag": flag.cone(), "l": ratvec(&cone.l), "m": ratvec(&cone.m), "n1": ratvec(a), "n2": ratvec(b), "verdict": verdict(&v)}),
                    );
                    if let Some((p, n, o)) = &v.witness {
                        c = c.with_witness(json!({"vertex": ratvec(p), "normal": ratvec(n), "offset": rat(*o)}));
                    }
                    report.extend([c]);
                }
            }
        }
        Ok(())
    }

    /// `μ` additivity and the boundary segment for every additive grid pair.
    fn prop14(&mut self, report: &mut Report) -> Result<(), RunError> {
        let den = self.cfg.grid_den;
        for tb in self.testbeds() {
            let Some((flag, _, classes)) = self.grid(&tb)? else { continue };
            let e = self.engine(&tb, &flag)?;
            for i in 0..classes.len() {
                for j in i..classes.len() {
                    let (a, b) = (&classes[i], &classes[j]);
                    let status = check_additivity(e, a, b)?.status;
                    let rep = necessary_condition_check(e, a, b, status, den)?;
                    let mut c = Check::new(
                        "prop14",
                        format!("{}/{}/{}+{}", tb.name(), cone_key(&flag), key_of(a), key_of(b)),
                        rep.holds,
                        json!({
                            "testbed": tb.name(), "l": ratvec(a), "m": ratvec(b),
                            "status": format!("{status:?}").to_lowercase(),
                            "mu_l": rat(rep.mu_l), "mu_m": rat(rep.mu_m), "mu_sum": rat(rep.mu_sum),
                            "l_circ": ratvec(&rep.l_circ), "m_circ": ratvec(&rep.m_circ),
                            "grid_den": den as i64,
                        }),
                    );
                    if !rep.off_boundary.is_empty() {
                        c = c.with_witness(Value::Array(rep.off_boundary.iter().map(ratvec).collect()));
                    }
                    report.extend([c]);
                }
            }
        }
        Ok(())
    }

    /// Slice formula on the whole `t` grid and the `μ` endpoint, per
    /// `(M, flag)` case.
    fn slices(&mut self, report: &mut Report) -> Result<(), RunError> {
        let den = self.cfg.grid_den;
        for tb in self.testbeds().into_iter().filter(|t| t.variety.dim() >= 2) {
            let x = tb.variety.clone();
            let flags = match &self.cfg.flag {
                Some(_) => vec![self.flag_for(&tb)?],
                None => sweep_flags(&x),
            };
            for flag in flags {
                let e = self.engine(&tb, &flag)?;
                let ms: Vec<RatVec> = smallest(ample_box(e, 2), 2);
                for m in ms {
                    let mu = e.mu(&m)?;
                    let ec = e.e_class();
                    let (mut checked, mut skipped, mut failures) = (0usize, 0usize, Vec::new());
                    for t in rational_grid(Rat::ZERO, mu, den) {
                        if !x.is_ample(&(&m - &ec.scale(t))) {
                            skipped += 1;
                            continue;
                        }
                        let sc = e.slice_formula_check(&m, t)?;
                        checked += 1;
                        if !sc.holds {
                            failures.push(json!({"t": rat(t), "slice": polytope(&sc.slice), "restricted": polytope(&sc.restricted), "witness": sc.witness.as_ref().map(ratvec)}));
                        }
                    }
                    let key = format!("{}/{}/{}", tb.name(), cone_key(&flag), key_of(&m));
                    let mut c = Check::new(
                        "slices",
                        key.clone(),
                        failures.is_empty() && checked > 0,
                        json!({"testbed": tb.name(), "flag": flag.cone(), "m": ratvec(&m), "mu": rat(mu), "t_checked": checked, "t_skipped": skipped, "grid_den": den as i64}),
                    );
                    if !failures.is_empty() {
                        c = c.with_witness(Value::Array(failures));
                    }
                    let ep = e.mu_endpoint_check(&m)?;
                    report.extend([
                        c,
                        Check::new("endpoint", key, ep.holds, json!({"testbed": tb.name(), "m": ratvec(&m), "mu": rat(ep.mu), "endpoint": rat(ep.endpoint)})),
                    ]);
                }
            }
        }
        Ok(())
    }

    /// The slice-by-slice proof replayed on a few grid pairs per testbed,
    /// at `t = k/4` in `(0, μ(N1+N2))`.
    fn replay(&mut self, report: &mut Report) -> Result<(), RunError> {
        for tb in self.testbeds().into_iter().filter(|t| t.variety.dim() >= 2) {
            let Some((flag, cone, classes)) = self.grid(&tb)? else { continue };
            if classes.len() < 2 {
                continue;
            }
            let e = self.engine(&tb, &flag)?;
            if in_cone(e, &classes[0], &cone)?.mu.is_zero() {
                // L and M dependent; the decomposition needs μ > 0
                continue;
            }
            let n = classes.len();
            let mut pairs = vec![(0, n - 1), (n / 2, n - 1), (0, n / 2), (n / 3, n / 3)];
            pairs.dedup();
            for (i, j) in pairs {
                let (a, b) = (&classes[i], &classes[j]);
                let mu_sum = e.mu(&(a + b))?;
                let (mut ge, mut lt, mut skipped) = (0usize, 0usize, Vec::new());
                let mut traces = Vec::new();
                let mut t0 = None;
                let mut pass = true;
                let mut t = Rat::new(1, 4);
                while t < mu_sum {
                    match slice_decomposition_replay(e, &cone, a, b, t) {
                        Ok(tr) => {
                            t0 = Some(tr.t0);
                            if tr.case_at_least_t0 {
                                ge += 1;
                            } else {
                                lt += 1;
                            }
                            if !tr.passed() {
                                pass = false;
                                traces.push(trace(&tr));
                            }
                        }
                        Err(AdditivityError::Precondition(msg)) if msg.contains("non-ample") => skipped.push(rat(t)),
                        Err(other) => return Err(other.into()),
                    }
                    t += Rat::new(1, 4);
                }
                let mut c = Check::new(
                    "replay",
                    format!("{}/{}/{}+{}", tb.name(), cone_key(&flag), key_of(a), key_of(b)),
                    pass && ge + lt > 0,
                    json!({
                        "testbed": tb.name(), "n1": ratvec(a), "n2": ratvec(b),
                        "t0": t0.map(rat), "mu_sum": rat(mu_sum),
                        "cases": {"t_at_least_t0": ge, "t_below_t0": lt},
                        "skipped_t": skipped,
                    }),
                );
                if !traces.is_empty() {
                    c = c.with_witness(Value::Array(traces));
                }
                report.extend([c]);
            }
        }
        Ok(())
    }

    /// Intersection products against mixed volumes of Δ-images, and the
    /// Brunn–Minkowski strictness that makes `Δ` injective.
    fn cor13(&mut self, report: &mut Report) -> Result<(), RunError> {
        for tb in self.testbeds() {
            let Some((flag, cone, classes)) = self.grid(&tb)? else { continue };
            let x = tb.variety.clone();
            let d = x.dim();
            let e = self.engine(&tb, &flag)?;
            if !x.is_nef(&cone.l) {
                report.notes.push(json!({"suite": "cor13", "testbed": tb.name(), "skipped": "L is not nef, no Δ-map on its span", "l": ratvec(&cone.l)}));
            }
            let map = if x.is_nef(&cone.l) { Some(DeltaMap::new(e, &cone.l, &cone.m)?) } else { None };
            let mut tuples: Vec<(String, Vec<RatVec>)> = (0..=d)
                .map(|k| {
                    let mut v = vec![cone.l.clone(); k];
                    v.extend(std::iter::repeat_n(cone.m.clone(), d - k));
                    (format!("L^{k}M^{}", d - k), v)
                })
                .collect();
            let mixed = [&cone.l.scale(Rat::new(3, 2)) + &cone.m, &cone.m.scale(Rat::from(2)) + &cone.l, &cone.l + &cone.m];
            tuples.push(("mixed".into(), mixed.into_iter().take(d).collect()));
            if map.is_none() {
                tuples.clear();
            }
            for (name, classes) in tuples {
                let c = check_cor13(map.as_ref().expect("tuples are empty without a map"), &classes)?;
                report.extend([Check::new(
                    "cor13",
                    format!("{}/{}/{}", tb.name(), cone_key(&flag), name),
                    c.holds,
                    json!({
                        "testbed": tb.name(), "classes": classes.iter().map(ratvec).collect::<Vec<_>>(),
                        "intersection_over_d_factorial": rat(c.lhs), "mixed_volume": rat(c.rhs), "formal_mixed_volume": rat(c.rhs_formal),
                    }),
                )]);
            }
            if x.rho() >= 2 {
                let pair = classes
                    .iter()
                    .enumerate()
                    .flat_map(|(i, a)| classes[i + 1..].iter().map(move |b| (a, b)))
                    .find(|(a, b)| !proportional(a, b));
                if let Some((a, b)) = pair {
                    let e = self.engine(&tb, &flag)?;
                    let map = DeltaMap::new(e, a, b)?;
                    let inj = injectivity_check(&map)?;
                    report.extend([Check::new(
                        "injectivity",
                        format!("{}/{}/{}+{}", tb.name(), cone_key(&flag), key_of(a), key_of(b)),
                        inj.holds(),
                        json!({
                            "testbed": tb.name(), "l": ratvec(a), "m": ratvec(b),
                            "sum_power": rat(inj.sum_power), "bracket": [rat(inj.lower), rat(inj.upper)],
                            "strict": inj.strict, "not_homothetic": inj.not_homothetic,
                        }),
                    )]);
                }
            }
        }
        Ok(())
    }

    /// `V(Δ(L), Δ(M)^{d−1}) ≤ (1/d!)·L·M^{d−1}` over small ample pairs and
    /// every sweep flag, plus the nef boundary case `M = L_setup`.
    fn lemma61(&mut self, report: &mut Report) -> Result<(), RunError> {
        for tb in self.testbeds() {
            let x = tb.variety.clone();
            let flags = match &self.cfg.flag {
                Some(_) => vec![self.flag_for(&tb)?],
                None => sweep_flags(&x),
            };
            for flag in &flags {
                let e = self.engine(&tb, flag)?;
                let classes = smallest(ample_box(e, 2), 4);
                let mut pairs: Vec<(RatVec, RatVec)> = Vec::new();
                for a in &classes {
                    for b in &classes {
                        pairs.push((a.clone(), b.clone()));
                    }
                }
                if let Some(s) = &tb.setup {
                    if x.is_nef(&s.l) {
                        pairs.extend(classes.iter().map(|a| (a.clone(), s.l.clone())));
                    }
                }
                for (a, b) in pairs {
                    let rec = lemma61_check(e, &a, &b)?;
                    report.extend([Check::new(
                        "lemma61",
                        format!("{}/{}/{}+{}", tb.name(), cone_key(flag), key_of(&a), key_of(&b)),
                        rec.pass(),
                        record(&rec),
                    )]);
                }
            }
        }
        Ok(())
    }

    /// Random nef triples (coordinates in `0..=4`) on surfaces and threefolds.
    fn cor15(&mut self, report: &mut Report) -> Result<(), RunError> {
        let seed = self.cfg.seed;
        let n = self.cfg.samples;
        for tb in self.testbeds().into_iter().filter(|t| matches!(t.variety.dim(), 2 | 3)) {
            let x = tb.variety.clone();
            let flag = self.flag_for(&tb)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ name_hash(tb.name()));
            let e = self.engine(&tb, &flag)?;
            let mut triples: Vec<[RatVec; 3]> = (0..n).map(|_| [0, 1, 2].map(|_| random_nef(&x, &mut rng))).collect();
            if tb.name() == "p1xp1" {
                let c = |a: i64, b: i64| RatVec::from_ints([a, b]);
                triples.push([c(1, 1), c(1, 0), c(0, 1)]);
            }
            for (i, [l, m, nn]) in triples.iter().enumerate() {
                let c = cor15_check(e, l, m, nn)?;
                let mut data = record(&c.direct.clone().with_seed(seed));
                data["body_path"] = json!({
                    "bodies": record(&c.bodies),
                    "lemma_ml": record(&c.lemma_ml),
                    "lemma_ln": record(&c.lemma_ln),
                });
                report.extend([Check::new("cor15", format!("{}/{}/{i:04}", tb.name(), cone_key(&flag)), c.pass(), data)]);
            }
        }
        Ok(())
    }

    /// Lehmann–Xiao on random rational polytopes in `[0,4]^d`, `d = 2, 3`,
    /// for every `k`, and the derivative identity on body pairs.
    fn lx(&mut self, report: &mut Report) -> Result<(), RunError> {
        let seed = self.cfg.seed;
        if self.cfg.testbed.is_none() {
            for d in [2usize, 3] {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0x6c78 + d as u64));
                for i in 0..self.cfg.samples {
                    let [k_body, l_body, m_body] = [0, 1, 2].map(|_| random_polytope(d, &mut rng));
                    for k in 0..=d {
                        let rec = lehmann_xiao_check(&k_body, &l_body, &m_body, k)?.with_seed(seed);
                        report.extend([Check::new("lx", format!("random/d{d}/{i:04}/k{k}"), rec.pass(), record(&rec))]);
                    }
                    if i < 10 {
                        let dc = derivative_of_bodies(&k_body, &l_body)?;
                        report.extend([Check::new(
                            "derivative",
                            format!("random/d{d}/{i:04}"),
                            dc.holds,
                            json!({"k": polytope(&k_body), "l": polytope(&l_body), "polynomial": dc.polynomial.iter().map(|r| rat(*r)).collect::<Vec<_>>(), "expected": rat(dc.expected), "seed": seed}),
                        )]);
                    }
                }
            }
        }
        for tb in self.testbeds() {
            let Some((flag, _, classes)) = self.grid(&tb)? else { continue };
            let e = self.engine(&tb, &flag)?;
            let pairs: Vec<(RatVec, RatVec)> = classes.iter().zip(classes.iter().rev()).take(2).map(|(a, b)| (a.clone(), b.clone())).collect();
            for (a, b) in pairs {
                let dc = mixed_volume_derivative_check(e, &a, &b)?;
                report.extend([Check::new(
                    "derivative",
                    format!("{}/{}/{}+{}", tb.name(), cone_key(&flag), key_of(&a), key_of(&b)),
                    dc.holds,
                    json!({"testbed": tb.name(), "l": ratvec(&a), "m": ratvec(&b), "polynomial": dc.polynomial.iter().map(|r| rat(*r)).collect::<Vec<_>>(), "expected": rat(dc.expected)}),
                )]);
            }
        }
        Ok(())
    }

    /// First strict pair on the sweep order, or a bounded-exhaustion record.
    fn strict(&mut self, report: &mut Report) -> Result<(), RunError> {
        let bound = self.cfg.search_bound;
        for tb in self.testbeds() {
            let flag = self.flag_for(&tb)?;
            let e = self.engine(&tb, &flag)?;
            let key = format!("{}/{}", tb.name(), cone_key(&flag));
            match search_strict(e, bound)? {
                StrictSearch::Found { n1, n2, verdict: v, pairs_checked } => {
                    let (p, n, o) = v.witness.clone().expect("strict verdicts carry a witness");
                    let certified = v.sum_body.contains(&p) && n.dot(&p) > o && v.minkowski.vertices().iter().all(|q| n.dot(q) <= o);
                    report.extend([Check::new(
                        "strict",
                        key,
                        certified,
                        json!({"testbed": tb.name(), "outcome": "strict", "n1": ratvec(&n1), "n2": ratvec(&n2), "pairs_checked": pairs_checked, "verdict": verdict(&v)}),
                    )
                    .with_witness(json!({"vertex": ratvec(&p), "normal": ratvec(&n), "offset": rat(o)}))]);
                }
                StrictSearch::Exhausted { pairs_checked, classes, bound } => {
                    let data = json!({"testbed": tb.name(), "outcome": "none_found", "pairs_checked": pairs_checked, "classes": classes, "bound": bound as i64});
                    report.notes.push(data.clone());
                    report.extend([Check::new("strict", key, true, data)]);
                }
            }
        }
        Ok(())
    }
}

fn factorial(d: usize) -> Rat {
    Rat::from((1..=d as i128).product::<i128>())
}

/// `D^d = Σ_ρ a_ρ·(D|_{D_ρ})^{d−1}`, ending with degrees on curves.
pub fn self_intersection(x: &ToricVariety, d: &TDivisor) -> Result<Rat, RunError> {
    if x.dim() == 1 {
        return Ok(d.coeffs.iter().copied().fold(Rat::ZERO, |a, b| a + b));
    }
    let flags = AdmissibleFlag::all(x);
    let mut total = Rat::ZERO;
    for rho in 0..x.num_rays() {
        let a = d.coeffs[rho];
        if a.is_zero() {
            continue;
        }
        let flag = flags.iter().find(|f| f.first_ray() == rho).expect("every ray lies in a maximal cone");
        let star = x.star(flag, 1)?;
        let res = x.restrict(flag, &star, d);
        total += a * self_intersection(&star.variety, &res)?;
    }
    Ok(total)
}

/// All flags on surfaces and curves; one flag per first ray in higher
/// dimension.
pub fn sweep_flags(x: &ToricVariety) -> Vec<AdmissibleFlag> {
    let all = AdmissibleFlag::all(x);
    if x.dim() <= 2 {
        return all;
    }
    let mut seen = Vec::new();
    all.into_iter()
        .filter(|f| {
            if seen.contains(&f.first_ray()) {
                false
            } else {
                seen.push(f.first_ray());
                true
            }
        })
        .collect()
}

/// Integer vectors in `[lo, hi]^rho`, lexicographic.
pub fn box_classes(rho: usize, lo: i64, hi: i64) -> Vec<RatVec> {
    let mut out = Vec::new();
    let mut c = vec![lo; rho];
    loop {
        out.push(RatVec::from_ints(c.iter().copied()));
        let mut i = rho;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if c[i] < hi {
                c[i] += 1;
                break;
            }
            c[i] = lo;
        }
    }
}

/// The `n` classes with the smallest coordinate sum, ties lexicographic.
fn smallest(mut v: Vec<RatVec>, n: usize) -> Vec<RatVec> {
    v.sort_by_key(|c| (c.iter().fold(Rat::ZERO, |a, b| a + b.abs()), c.clone()));
    v.truncate(n);
    v
}

/// Distinct `k/q` in `[lo, hi)` with `q ≤ den`, ascending.
pub fn rational_grid(lo: Rat, hi: Rat, den: i128) -> Vec<Rat> {
    let mut out = Vec::new();
    for q in 1..=den {
        let qr = Rat::from(q);
        let mut k = (lo * qr).ceil();
        loop {
            let t = Rat::new(k, q);
            if t >= hi {
                break;
            }
            out.push(t);
            k += 1;
        }
    }
    out.sort();
    out.dedup();
    out
}

fn proportional(a: &RatVec, b: &RatVec) -> bool {
    let i = a.iter().position(|r| !r.is_zero()).unwrap_or(0);
    if a[i].is_zero() {
        return b.is_zero();
    }
    let s = b[i] / a[i];
    a.scale(s) == *b
}

fn name_hash(name: &str) -> u64 {
    // FNV-1a, stable across platforms and releases
    name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

fn random_nef(x: &ToricVariety, rng: &mut ChaCha8Rng) -> RatVec {
    loop {
        let c = RatVec((0..x.rho()).map(|_| Rat::from(rng.gen_range(0..=4i64))).collect());
        if x.is_nef(&c) {
            return c;
        }
    }
}

/// Hull of `d+1` to `d+4` random points with coordinates `k/q ∈ [0, 4]`, `q ≤ 3`.
pub fn random_polytope(d: usize, rng: &mut ChaCha8Rng) -> Polytope {
    let n = rng.gen_range(d + 1..=d + 4);
    let pts: Vec<RatVec> = (0..n)
        .map(|_| {
            RatVec(
                (0..d)
                    .map(|_| {
                        let q = rng.gen_range(1..=3i128);
                        Rat::new(rng.gen_range(0..=4 * q), q)
                    })
                    .collect(),
            )
        })
        .collect();
    Polytope::hull_in(d, &pts).expect("points share the dimension")
}

/// Human summary, one line per suite.
pub fn summary_text(report: &Report) -> String {
    let mut s = String::new();
    for (suite, c) in report.counts() {
        let _ = writeln!(s, "{suite:<12} {:>6} checks, {:>6} passed, {:>4} failed", c.total, c.passed, c.failed);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use oklab_core::toric::testbeds;

    #[test]
    fn rational_grid_is_sorted_and_distinct() {
        let g = rational_grid(Rat::ZERO, Rat::from(1), 4);
        let expect: Vec<Rat> = [(0, 1), (1, 4), (1, 3), (1, 2), (2, 3), (3, 4)].iter().map(|&(n, d)| Rat::new(n, d)).collect();
        assert_eq!(g, expect);
        assert!(rational_grid(Rat::ZERO, Rat::ZERO, 12).is_empty());
    }

    #[test]
    fn recursive_self_intersection() {
        let p2 = testbeds::p2();
        assert_eq!(self_intersection(&p2, &TDivisor::from_ints(&[0, 0, 3])).unwrap(), Rat::from(9));
        let q = testbeds::p1xp1xp1();
        let d = q.lift(&RatVec::from_ints([1, 2, 3]));
        assert_eq!(self_intersection(&q, &d).unwrap(), Rat::from(36));
        let f1 = testbeds::f1();
        // (H−E)^2 + 2(H−E)·E + E^2 with classes (a, a−b): 2H−E ↦ (2, 1), self-intersection 3
        assert_eq!(self_intersection(&f1, &f1.lift(&RatVec::from_ints([2, 1]))).unwrap(), Rat::from(3));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(RunError::Config(String::new()).exit_code(), 2);
        assert_eq!(RunError::Engine(String::new()).exit_code(), 1);
        let e: RunError = AdditivityError::InclusionViolated(RatVec::from_ints([1, 2])).into();
        assert_eq!(e.exit_code(), 3);
    }

    #[test]
    fn suites_parse() {
        assert_eq!("cor15".parse::<Suite>().unwrap(), Suite::Cor15);
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn box_and_proportionality() {
        assert_eq!(box_classes(2, 0, 1).len(), 4);
        assert!(proportional(&RatVec::from_ints([1, 2]), &RatVec::from_ints([2, 4])));
        assert!(!proportional(&RatVec::from_ints([1, 2]), &RatVec::from_ints([2, 3])));
    }
}
