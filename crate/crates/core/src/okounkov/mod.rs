//! Newton–Okounkov bodies of toric divisors along torus-invariant flags.
//!
//! A body is the hull of `Γ_m / m` over `m = 1..=m_max`. It is certified
//! exact when the per-level hulls agree for `m = 1, 2, 3` and, for nef
//! classes, `d!·vol = D^d`; for non-nef classes the second condition is
//! replaced by equality with the valuation image of `P_D`.

mod family;

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

pub use family::{GradedValuationFamily, ToricFamily};

use crate::exactgeom::{factorial, slice, symmetric_difference_witness, GeomError, Polytope};
use crate::rat::{Rat, RatVec};
use crate::toric::{AdmissibleFlag, StarVariety, TDivisor, ToricError, ToricVariety};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OkounkovError {
    #[error("class is not big")]
    NotBig,
    #[error("class is not ample")]
    NotAmple,
    #[error("class has no sections (empty divisor polytope)")]
    NotEffective,
    #[error("divisor must have integer coefficients here")]
    NotIntegral,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// A computed body with its exactness certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NOBody {
    pub body: Polytope,
    pub flag: AdmissibleFlag,
    pub class: RatVec,
    pub divisor: TDivisor,
    pub m_used: u32,
    pub exact: bool,
}

/// Hull of the union over levels together with each level's own hull `conv(Γ_m)/m`.
#[derive(Clone, Debug)]
pub struct LevelHulls {
    pub union: Polytope,
    pub levels: Vec<Polytope>,
}

pub fn hull_of_levels<F: GradedValuationFamily>(fam: &F, m_max: u32) -> LevelHulls {
    let dim = fam.dim();
    let mut all: Vec<RatVec> = Vec::new();
    let mut levels = Vec::new();
    for m in 1..=m_max {
        let inv = Rat::new(1, m as i128);
        let pts: Vec<RatVec> = fam
            .extremal_candidates(m)
            .into_iter()
            .map(|v| RatVec::from_ints(v).scale(inv))
            .collect();
        levels.push(Polytope::hull_in(dim, &pts).expect("points share the family dimension"));
        all.extend(pts);
    }
    LevelHulls { union: Polytope::hull_in(dim, &all).expect("points share the family dimension"), levels }
}

/// `φ(P_D)` for `φ(u) = (⟨u, v_i⟩ + a_{v_i})_i`, computed without lattice points.
pub fn valuation_image(x: &ToricVariety, flag: &AdmissibleFlag, d: &TDivisor) -> Result<Polytope, OkounkovError> {
    let p = x.polytope_of_divisor(d)?;
    let rows: Vec<Vec<Rat>> = flag.cone().iter().map(|&r| x.fan().ray(r).0).collect();
    let shift = RatVec(flag.cone().iter().map(|&r| d.coeffs[r]).collect());
    Ok(p.linear_image(&rows).translate(&shift))
}

fn body_impl(
    x: &ToricVariety,
    flag: &AdmissibleFlag,
    d: &TDivisor,
    m_max: u32,
    require_big: bool,
) -> Result<NOBody, OkounkovError> {
    if m_max == 0 {
        return Err(OkounkovError::Precondition("m_max must be at least 1".into()));
    }
    x.check_flag(flag)?;
    let class = x.class_of(d)?;
    if require_big && !x.is_big(&class) {
        return Err(OkounkovError::NotBig);
    }
    let p = d.denominator();
    let pd = d.scale(Rat::from(p));
    let fam = ToricFamily::new(x, flag, &pd)?;
    let hulls = hull_of_levels(&fam, m_max);
    let stable = hulls.levels.len() >= 3 && hulls.levels[1..3].iter().all(|h| *h == hulls.levels[0]);
    let consistent = if x.is_nef(&class) {
        let all: Vec<TDivisor> = (0..x.dim()).map(|_| pd.clone()).collect();
        factorial(x.dim()) * hulls.union.volume() == x.intersection_number(&all)?
    } else {
        hulls.union == valuation_image(x, flag, &pd)?
    };
    let body = crate::exactgeom::scale(&hulls.union, Rat::new(1, p))?;
    Ok(NOBody { body, flag: flag.clone(), class, divisor: d.clone(), m_used: m_max, exact: stable && consistent })
}

/// Body of a big integral divisor.
pub fn no_body(x: &ToricVariety, flag: &AdmissibleFlag, d: &TDivisor, m_max: u32) -> Result<NOBody, OkounkovError> {
    if !d.is_integral() {
        return Err(OkounkovError::NotIntegral);
    }
    body_impl(x, flag, d, m_max, true)
}

/// Body of a big Q-divisor via `Δ(D) = (1/p)·Δ(pD)`.
pub fn no_body_rational(
    x: &ToricVariety,
    flag: &AdmissibleFlag,
    d: &TDivisor,
    m_max: u32,
) -> Result<NOBody, OkounkovError> {
    body_impl(x, flag, d, m_max, true)
}

/// The same construction for any class with sections, big or not; used for
/// boundary classes such as fibre classes whose bodies are lower-dimensional.
pub fn no_body_effective(
    x: &ToricVariety,
    flag: &AdmissibleFlag,
    d: &TDivisor,
    m_max: u32,
) -> Result<NOBody, OkounkovError> {
    body_impl(x, flag, d, m_max, false)
}

/// Body of `N|_{Y_1}` along the induced flag of `Y_1`, for ample `N`.
pub fn restricted_body(
    x: &ToricVariety,
    flag: &AdmissibleFlag,
    n: &TDivisor,
    m_max: u32,
) -> Result<NOBody, OkounkovError> {
    let star = x.star(flag, 1)?;
    restricted_with(x, flag, &star, n, m_max)
}

fn restricted_with(
    x: &ToricVariety,
    flag: &AdmissibleFlag,
    star: &StarVariety,
    n: &TDivisor,
    m_max: u32,
) -> Result<NOBody, OkounkovError> {
    if !x.is_ample(&x.class_of(n)?) {
        return Err(OkounkovError::NotAmple);
    }
    let res = x.restrict(flag, star, n);
    no_body_rational(&star.variety, &star.flag(), &res, m_max)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceCheck {
    pub holds: bool,
    pub t: Rat,
    pub slice: Polytope,
    pub restricted: Polytope,
    pub witness: Option<RatVec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndpointCheck {
    pub holds: bool,
    pub mu: Rat,
    pub endpoint: Rat,
}

/// Caching front end over one variety and flag.
///
/// Bodies depend only on the numerical class, so the cache is keyed by
/// `N¹` coordinates.
#[derive(Debug)]
pub struct BodyEngine {
    x: ToricVariety,
    flag: AdmissibleFlag,
    m_max: u32,
    cache: BTreeMap<Vec<Rat>, NOBody>,
    star: Option<Box<(StarVariety, BodyEngine)>>,
}

impl BodyEngine {
    pub fn new(x: ToricVariety, flag: AdmissibleFlag, m_max: u32) -> Result<BodyEngine, OkounkovError> {
        x.check_flag(&flag)?;
        if m_max == 0 {
            return Err(OkounkovError::Precondition("m_max must be at least 1".into()));
        }
        Ok(BodyEngine { x, flag, m_max, cache: BTreeMap::new(), star: None })
    }

    pub fn variety(&self) -> &ToricVariety {
        &self.x
    }

    pub fn flag(&self) -> &AdmissibleFlag {
        &self.flag
    }

    pub fn m_max(&self) -> u32 {
        self.m_max
    }

    /// Class of `Y_1`.
    pub fn e_class(&self) -> RatVec {
        self.x.class_of(&self.x.ray_divisor(self.flag.first_ray())).expect("ray divisor has the right length")
    }

    fn lookup(&mut self, class: &RatVec, require_big: bool) -> Result<NOBody, OkounkovError> {
        if require_big && !self.x.is_big(class) {
            return Err(OkounkovError::NotBig);
        }
        if let Some(b) = self.cache.get(&class.0) {
            return Ok(b.clone());
        }
        let d = self.x.lift(class);
        let b = body_impl(&self.x, &self.flag, &d, self.m_max, false)?;
        self.cache.insert(class.0.clone(), b.clone());
        Ok(b)
    }

    /// Body of a big class.
    pub fn body(&mut self, class: &RatVec) -> Result<NOBody, OkounkovError> {
        self.lookup(class, true)
    }

    /// Body of any class with sections.
    pub fn body_effective(&mut self, class: &RatVec) -> Result<NOBody, OkounkovError> {
        self.lookup(class, false)
    }

    fn ensure_star(&mut self) -> Result<(), OkounkovError> {
        if self.star.is_none() {
            let star = self.x.star(&self.flag, 1)?;
            let engine = BodyEngine::new(star.variety.clone(), star.flag(), self.m_max)?;
            self.star = Some(Box::new((star, engine)));
        }
        Ok(())
    }

    /// Body of `N|_{Y_1}` for ample `N`.
    pub fn restricted(&mut self, class: &RatVec) -> Result<NOBody, OkounkovError> {
        if !self.x.is_ample(class) {
            return Err(OkounkovError::NotAmple);
        }
        let n = self.x.lift(class);
        self.ensure_star()?;
        let (star, engine) = &mut **self.star.as_mut().unwrap();
        let res = self.x.restrict(&self.flag, star, &n);
        let res_class = star.variety.class_of(&res)?;
        engine.body(&res_class)
    }

    pub fn mu(&self, class: &RatVec) -> Result<Rat, OkounkovError> {
        Ok(self.x.mu(class, &self.e_class())?)
    }

    /// `Δ(M)_{ν_1 = t} = Δ_{Y•|E}(M − tE)` for `0 ≤ t < μ(M; E)` with `M − tE` ample.
    pub fn slice_formula_check(&mut self, m: &RatVec, t: Rat) -> Result<SliceCheck, OkounkovError> {
        if self.x.dim() < 2 {
            return Err(ToricError::NoRestriction.into());
        }
        let mu = self.mu(m)?;
        if t.is_negative() || t >= mu {
            return Err(OkounkovError::Precondition(alloc::format!("t = {t} outside [0, {mu})")));
        }
        let shifted = m - &self.e_class().scale(t);
        if !self.x.is_ample(&shifted) {
            return Err(OkounkovError::Precondition(alloc::format!("M − {t}·E is not ample")));
        }
        let body = self.body(m)?;
        let restricted = self.restricted(&shifted)?;
        let sl = slice(&body.body, t)?;
        let holds = body.exact && restricted.exact && sl == restricted.body;
        let witness = if sl == restricted.body { None } else { symmetric_difference_witness(&sl, &restricted.body) };
        Ok(SliceCheck { holds, t, slice: sl, restricted: restricted.body, witness })
    }

    /// `μ(M; E)` against the largest first coordinate of `Δ(M)`.
    pub fn mu_endpoint_check(&mut self, m: &RatVec) -> Result<EndpointCheck, OkounkovError> {
        let mu = self.mu(m)?;
        let body = self.body(m)?;
        let endpoint = body.body.max_coord(0).ok_or(OkounkovError::NotEffective)?;
        Ok(EndpointCheck { holds: body.exact && mu == endpoint, mu, endpoint })
    }
}

/// `Δ(M)_{ν_1 = t} = Δ_{Y•|E}(M − tE)` without caching.
pub fn slice_formula_check(
    x: &ToricVariety,
    flag: &AdmissibleFlag,
    m: &TDivisor,
    t: Rat,
    m_max: u32,
) -> Result<SliceCheck, OkounkovError> {
    let mut engine = BodyEngine::new(x.clone(), flag.clone(), m_max)?;
    engine.slice_formula_check(&x.class_of(m)?, t)
}

pub fn mu_endpoint_check(
    x: &ToricVariety,
    flag: &AdmissibleFlag,
    m: &TDivisor,
    m_max: u32,
) -> Result<EndpointCheck, OkounkovError> {
    let mut engine = BodyEngine::new(x.clone(), flag.clone(), m_max)?;
    engine.mu_endpoint_check(&x.class_of(m)?)
}
