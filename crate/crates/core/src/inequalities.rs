//! The linear map `Δ` on a plane of classes, its compatibility with
//! intersection products, and the intersection-number inequalities that
//! follow from convex-body ones.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::exactgeom::{factorial, formal_mixed_volume, mixed_volume_powers, minkowski_sum, scale, FormalBody, GeomError, Polytope};
use crate::linalg::{rank, solve, transpose};
use crate::okounkov::{BodyEngine, OkounkovError};
use crate::rat::{Rat, RatVec};
use crate::toric::{TDivisor, ToricError, ToricVariety};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InequalityError {
    #[error("class is outside the plane spanned by L and M")]
    NotInSpan,
    #[error("L and M are linearly dependent")]
    Dependent,
    #[error("k = {k} is outside 0..={d}")]
    BadK { k: usize, d: usize },
    #[error("input {0} is not nef")]
    NotNef(usize),
    #[error("input {0} is not ample")]
    NotAmple(usize),
    #[error("body is not certified exact")]
    Uncertified,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Okounkov(#[from] OkounkovError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

impl From<ToricError> for InequalityError {
    fn from(e: ToricError) -> Self {
        InequalityError::Okounkov(e.into())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputValue {
    Class(RatVec),
    Vertices(Vec<RatVec>),
    Int(i64),
}

/// `lhs ≤ rhs` with `slack = rhs − lhs`. When `tight` is set the record
/// only passes with zero slack.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalityRecord {
    pub name: String,
    pub lhs: Rat,
    pub rhs: Rat,
    pub slack: Rat,
    pub tight: bool,
    pub inputs: Vec<(String, InputValue)>,
    pub seed: Option<u64>,
}

impl InequalityRecord {
    pub fn new(name: &str, lhs: Rat, rhs: Rat, inputs: Vec<(String, InputValue)>) -> InequalityRecord {
        InequalityRecord { name: name.into(), lhs, rhs, slack: rhs - lhs, tight: false, inputs, seed: None }
    }

    pub fn with_seed(mut self, seed: u64) -> InequalityRecord {
        self.seed = Some(seed);
        self
    }

    pub fn pass(&self) -> bool {
        !self.slack.is_negative() && (!self.tight || self.slack.is_zero())
    }
}

fn input(name: &str, v: InputValue) -> (String, InputValue) {
    (name.into(), v)
}

fn certified_body(engine: &mut BodyEngine, class: &RatVec, big: bool) -> Result<Polytope, InequalityError> {
    let b = if big { engine.body(class)? } else { engine.body_effective(class)? };
    if !b.exact {
        return Err(InequalityError::Uncertified);
    }
    Ok(b.body)
}

/// `D_1 ⋯ D_d` for nef classes given by `N¹` coordinates.
fn product(x: &ToricVariety, classes: &[&RatVec]) -> Result<Rat, InequalityError> {
    let divs: Vec<TDivisor> = classes.iter().map(|c| x.lift(c)).collect();
    Ok(x.intersection_number(&divs)?)
}

fn repeat<'a>(a: &'a RatVec, k: usize, b: &'a RatVec, d: usize) -> Vec<&'a RatVec> {
    let mut v = vec![a; k];
    v.extend(core::iter::repeat_n(b, d - k));
    v
}

/// `λL + μM ↦ λΔ(L) + μΔ(M)` on `U = ⟨L, M⟩`.
///
/// `L` must be nef. A non-nef `M` is handled through `M' = M + sL` with `s`
/// the least non-negative integer making `M'` nef. On Picard rank one `U`
/// is the line through `L`.
#[derive(Clone, Debug)]
pub struct DeltaMap {
    dim: usize,
    l: RatVec,
    m: RatVec,
    shift: Rat,
    body_l: Polytope,
    body_m: Polytope,
    /// `L^k · M'^{d−k}` for `k = 0..=d`.
    products: Vec<Rat>,
    /// `V(Δ(L)^k, Δ(M')^{d−k})` for `k = 0..=d`.
    mixed: Vec<Rat>,
    line: bool,
    ample: [bool; 2],
}

impl DeltaMap {
    pub fn new(engine: &mut BodyEngine, l: &RatVec, m: &RatVec) -> Result<DeltaMap, InequalityError> {
        let x = engine.variety().clone();
        let d = x.dim();
        if !x.is_nef(l) || l.is_zero() {
            return Err(InequalityError::NotNef(0));
        }
        let line = rank(&[l.0.clone(), m.0.clone()], x.rho()) < 2;
        if line && x.rho() > 1 {
            return Err(InequalityError::Dependent);
        }
        let (m_nef, shift) = if line {
            (l.clone(), Rat::ZERO)
        } else {
            let s = (0..=1024)
                .find(|&s| x.is_nef(&(m + &l.scale(Rat::from(s)))))
                .ok_or(InequalityError::NotNef(1))?;
            (m + &l.scale(Rat::from(s)), Rat::from(s))
        };
        let body_l = certified_body(engine, l, false)?;
        let body_m = certified_body(engine, &m_nef, false)?;
        let mut products = Vec::with_capacity(d + 1);
        let mut mixed = Vec::with_capacity(d + 1);
        for k in 0..=d {
            products.push(product(&x, &repeat(l, k, &m_nef, d))?);
            mixed.push(mixed_volume_powers(&body_l, k, &body_m)?);
        }
        Ok(DeltaMap { dim: d, l: l.clone(), m: m.clone(), shift, body_l, body_m, products, mixed, line, ample: [x.is_ample(l), x.is_ample(m)] })
    }

    pub fn l(&self) -> &RatVec {
        &self.l
    }

    pub fn m(&self) -> &RatVec {
        &self.m
    }

    /// `(λ, μ)` with `N = λL + μM`.
    pub fn coordinates(&self, n: &RatVec) -> Result<(Rat, Rat), InequalityError> {
        let rho = self.l.dim();
        if self.line {
            let s = solve(&transpose(core::slice::from_ref(&self.l.0), rho), &n.0, 1).ok_or(InequalityError::NotInSpan)?;
            return Ok((s[0], Rat::ZERO));
        }
        let a = transpose(&[self.l.0.clone(), self.m.0.clone()], rho);
        let s = solve(&a, &n.0, 2).ok_or(InequalityError::NotInSpan)?;
        Ok((s[0], s[1]))
    }

    /// Coordinates in the nef basis `(L, M')`.
    fn nef_coordinates(&self, n: &RatVec) -> Result<(Rat, Rat), InequalityError> {
        let (lambda, mu) = self.coordinates(n)?;
        Ok((lambda - mu * self.shift, mu))
    }

    pub fn apply(&self, n: &RatVec) -> Result<FormalBody, InequalityError> {
        let (a, b) = self.nef_coordinates(n)?;
        let fl = FormalBody::from_body(self.body_l.clone()).scale(a);
        let fm = FormalBody::from_body(self.body_m.clone()).scale(b);
        Ok(fl.add(&fm)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cor13Check {
    /// `(1/d!)·M_1 ⋯ M_d` expanded in the basis.
    pub lhs: Rat,
    /// The same expansion with basis mixed volumes.
    pub rhs: Rat,
    /// Mixed volume of the formal bodies `Δ(M_i)` directly.
    pub rhs_formal: Rat,
    pub holds: bool,
}

/// Coefficients of `∏ (a_i s + b_i)` in `s`, low degree first.
fn expand(coords: &[(Rat, Rat)]) -> Vec<Rat> {
    let mut poly = vec![Rat::ONE];
    for &(a, b) in coords {
        let mut next = vec![Rat::ZERO; poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k] += *c * b;
            next[k + 1] += *c * a;
        }
        poly = next;
    }
    poly
}

pub fn check_cor13(map: &DeltaMap, classes: &[RatVec]) -> Result<Cor13Check, InequalityError> {
    let d = map.dim;
    if classes.len() != d {
        return Err(InequalityError::Precondition(alloc::format!("expected {d} classes, got {}", classes.len())));
    }
    let coords = classes.iter().map(|c| map.nef_coordinates(c)).collect::<Result<Vec<_>, _>>()?;
    let poly = expand(&coords);
    let mut lhs = Rat::ZERO;
    let mut rhs = Rat::ZERO;
    for (k, c) in poly.iter().enumerate() {
        lhs += *c * map.products[k];
        rhs += *c * map.mixed[k];
    }
    lhs = lhs / factorial(d);
    let bodies = classes.iter().map(|c| map.apply(c)).collect::<Result<Vec<_>, _>>()?;
    let refs: Vec<&FormalBody> = bodies.iter().collect();
    let rhs_formal = formal_mixed_volume(&refs)?;
    Ok(Cor13Check { lhs, rhs, rhs_formal, holds: lhs == rhs && rhs == rhs_formal })
}

/// Integer `d`-th root when `n` is a perfect power.
fn int_root(n: i128, d: u32) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let (mut lo, mut hi) = (0i128, 1i128);
    while hi.checked_pow(d).is_some_and(|p| p <= n) {
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if mid.checked_pow(d).is_some_and(|p| p <= n) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo.pow(d) == n).then_some(lo)
}

fn rational_root(a: Rat, d: u32) -> Option<Rat> {
    Some(Rat::new(int_root(a.numer(), d)?, int_root(a.denom(), d)?))
}

/// `lo ≤ a^{1/d} ≤ hi` after `steps` bisections, exact for perfect powers.
fn root_bracket(a: Rat, d: u32, steps: u32) -> (Rat, Rat) {
    if let Some(r) = rational_root(a, d) {
        return (r, r);
    }
    let (mut lo, mut hi) = (Rat::ZERO, a.max(Rat::ONE));
    for _ in 0..steps {
        let mid = (lo + hi) / Rat::from(2);
        if mid.pow(d) <= a {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectivityCheck {
    /// `(L+M)^d`.
    pub sum_power: Rat,
    /// Bracket of `((L^d)^{1/d} + (M^d)^{1/d})^d`.
    pub lower: Rat,
    pub upper: Rat,
    /// `(L+M)^d` is shown to differ from the bracketed value.
    pub strict: bool,
    /// No positive multiple of `Δ(L)` is a translate of a multiple of `Δ(M)`.
    pub not_homothetic: bool,
}

impl InjectivityCheck {
    pub fn holds(&self) -> bool {
        self.strict && self.not_homothetic
    }
}

fn homothetic(p: &Polytope, q: &Polytope) -> bool {
    let d = p.dim() as u32;
    let (vp, vq) = (p.volume(), q.volume());
    if !vp.is_positive() || !vq.is_positive() {
        return false;
    }
    let Some(s) = rational_root(vq / vp, d) else {
        return false;
    };
    let sp = scale(p, s).expect("positive factor");
    let shift = q.vertices().iter().min().unwrap() - sp.vertices().iter().min().unwrap();
    sp.translate(&shift) == *q
}

/// `((L+M)^d)^{1/d} ≠ (L^d)^{1/d} + (M^d)^{1/d}` via `d`-th powers and
/// rational brackets of the roots.
pub fn injectivity_check(map: &DeltaMap) -> Result<InjectivityCheck, InequalityError> {
    if map.line {
        return Err(InequalityError::Dependent);
    }
    if !map.shift.is_zero() {
        return Err(InequalityError::NotAmple(1));
    }
    if let Some(i) = map.ample.iter().position(|a| !a) {
        return Err(InequalityError::NotAmple(i));
    }
    let d = map.dim;
    let dd = d as u32;
    let binom = |k: usize| factorial(d) / (factorial(k) * factorial(d - k));
    let sum_power = (0..=d).fold(Rat::ZERO, |acc, k| acc + binom(k) * map.products[k]);
    let (a, b) = (map.products[d], map.products[0]);
    let mut out = InjectivityCheck { sum_power, lower: Rat::ZERO, upper: Rat::ZERO, strict: false, not_homothetic: false };
    for steps in [4, 8, 12, 16, 20] {
        let (la, ha) = root_bracket(a, dd, steps);
        let (lb, hb) = root_bracket(b, dd, steps);
        out.lower = (la + lb).pow(dd);
        out.upper = (ha + hb).pow(dd);
        if sum_power > out.upper || sum_power < out.lower {
            out.strict = true;
            break;
        }
        if out.lower == out.upper {
            break;
        }
    }
    out.not_homothetic = !homothetic(&map.body_l, &map.body_m);
    Ok(out)
}

/// `V(Δ(L), Δ(M)^{d−1}) ≤ (1/d!)·L·M^{d−1}` for nef `L`, `M`, tight when
/// the flag corresponds to either class.
pub fn lemma61_check(engine: &mut BodyEngine, l: &RatVec, m: &RatVec) -> Result<InequalityRecord, InequalityError> {
    let x = engine.variety().clone();
    for (i, c) in [l, m].into_iter().enumerate() {
        if !x.is_nef(c) {
            return Err(InequalityError::NotNef(i));
        }
    }
    let mut rec = lemma61_record(engine, l, m, false)?;
    let flag = engine.flag().clone();
    rec.tight = x.flag_corresponds(&flag, &x.lift(l))?.corresponds || x.flag_corresponds(&flag, &x.lift(m))?.corresponds;
    Ok(rec)
}

fn lemma61_record(engine: &mut BodyEngine, l: &RatVec, m: &RatVec, big: bool) -> Result<InequalityRecord, InequalityError> {
    let x = engine.variety().clone();
    let d = x.dim();
    let bl = certified_body(engine, l, big)?;
    let bm = certified_body(engine, m, big)?;
    let lhs = mixed_volume_powers(&bl, 1, &bm)?;
    let rhs = product(&x, &repeat(l, 1, m, d))? / factorial(d);
    Ok(InequalityRecord::new("lemma61", lhs, rhs, vec![input("L", InputValue::Class(l.clone())), input("M", InputValue::Class(m.clone()))]))
}

/// `vol(L)·V(K^k, M^{d−k}) ≤ C(d,k)·V(K^k, L^{d−k})·V(L^k, M^{d−k})`.
pub fn lehmann_xiao_check(k_body: &Polytope, l_body: &Polytope, m_body: &Polytope, k: usize) -> Result<InequalityRecord, InequalityError> {
    let d = l_body.dim();
    if k > d {
        return Err(InequalityError::BadK { k, d });
    }
    let lhs = l_body.volume() * mixed_volume_powers(k_body, k, m_body)?;
    let binom = factorial(d) / (factorial(k) * factorial(d - k));
    let rhs = binom * mixed_volume_powers(k_body, k, l_body)? * mixed_volume_powers(l_body, k, m_body)?;
    Ok(InequalityRecord::new(
        "lehmann_xiao",
        lhs,
        rhs,
        vec![
            input("K", InputValue::Vertices(k_body.vertices().to_vec())),
            input("L", InputValue::Vertices(l_body.vertices().to_vec())),
            input("M", InputValue::Vertices(m_body.vertices().to_vec())),
            input("k", InputValue::Int(k as i64)),
        ],
    ))
}

/// Both routes to `L^d·(M·N^{d−1}) ≤ d·(M·L^{d−1})·(L·N^{d−1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cor15Check {
    pub direct: InequalityRecord,
    /// Convex-body inequality on `Δ(M), Δ(L), Δ(N)` with `k = 1`.
    pub bodies: InequalityRecord,
    /// `V(Δ(M), Δ(L)^{d−1})` against `(1/d!)·M·L^{d−1}`.
    pub lemma_ml: InequalityRecord,
    /// `V(Δ(L), Δ(N)^{d−1})` against `(1/d!)·L·N^{d−1}`.
    pub lemma_ln: InequalityRecord,
}

impl Cor15Check {
    pub fn pass(&self) -> bool {
        self.direct.pass() && self.bodies.pass() && self.lemma_ml.pass() && self.lemma_ln.pass()
    }
}

pub fn cor15_check(engine: &mut BodyEngine, l: &RatVec, m: &RatVec, n: &RatVec) -> Result<Cor15Check, InequalityError> {
    let x = engine.variety().clone();
    let d = x.dim();
    for (i, c) in [l, m, n].into_iter().enumerate() {
        if !x.is_nef(c) {
            return Err(InequalityError::NotNef(i));
        }
    }
    let ld = product(&x, &repeat(l, d, l, d))?;
    let mn = product(&x, &repeat(m, 1, n, d))?;
    let ml = product(&x, &repeat(m, 1, l, d))?;
    let ln = product(&x, &repeat(l, 1, n, d))?;
    let inputs = vec![
        input("L", InputValue::Class(l.clone())),
        input("M", InputValue::Class(m.clone())),
        input("N", InputValue::Class(n.clone())),
    ];
    let direct = InequalityRecord::new("cor15", ld * mn, Rat::from(d as i64) * ml * ln, inputs);
    let bl = certified_body(engine, l, false)?;
    let bm = certified_body(engine, m, false)?;
    let bn = certified_body(engine, n, false)?;
    let mut bodies = lehmann_xiao_check(&bm, &bl, &bn, 1)?;
    bodies.name = "cor15_bodies".into();
    let mut lemma_ml = lemma61_record(engine, m, l, false)?;
    lemma_ml.tight = x.flag_corresponds(engine.flag(), &x.lift(m))?.corresponds;
    let lemma_ln = lemma61_record(engine, l, n, false)?;
    Ok(Cor15Check { direct, bodies, lemma_ml, lemma_ln })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivativeCheck {
    /// Coefficients of `t ↦ vol(tΔ(L) + Δ(M))`, low degree first.
    pub polynomial: Vec<Rat>,
    /// `d·V(Δ(L), Δ(M)^{d−1})`.
    pub expected: Rat,
    pub holds: bool,
}

/// The linear coefficient of `vol(tΔ(L) + Δ(M))` against `d·V(Δ(L), Δ(M)^{d−1})`.
pub fn mixed_volume_derivative_check(engine: &mut BodyEngine, l: &RatVec, m: &RatVec) -> Result<DerivativeCheck, InequalityError> {
    let x = engine.variety().clone();
    for (i, c) in [l, m].into_iter().enumerate() {
        if !x.is_ample(c) {
            return Err(InequalityError::NotAmple(i));
        }
    }
    let bl = certified_body(engine, l, true)?;
    let bm = certified_body(engine, m, true)?;
    Ok(derivative_of_bodies(&bl, &bm)?)
}

pub fn derivative_of_bodies(bl: &Polytope, bm: &Polytope) -> Result<DerivativeCheck, GeomError> {
    let d = bl.dim();
    let mut rows = Vec::with_capacity(d + 1);
    let mut vols = Vec::with_capacity(d + 1);
    for t in 0..=d {
        let tr = Rat::from(t as i64);
        rows.push((0..=d).map(|j| tr.pow(j as u32)).collect::<Vec<_>>());
        vols.push(minkowski_sum(&scale(bl, tr)?, bm)?.volume());
    }
    let polynomial = solve(&rows, &vols, d + 1).expect("Vandermonde system is invertible").0;
    let expected = Rat::from(d as i64) * mixed_volume_powers(bl, 1, bm)?;
    Ok(DerivativeCheck { holds: polynomial[1] == expected, polynomial, expected })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::testbeds::{blpq_p2, f1, p1, p1xp1, p1xp1xp1, p2, p3};
    use crate::toric::AdmissibleFlag;

    fn cv(xs: &[i64]) -> RatVec {
        RatVec::from_ints(xs.iter().copied())
    }

    fn r(n: i128) -> Rat {
        Rat::from(n)
    }

    fn q(n: i128, d: i128) -> Rat {
        Rat::new(n, d)
    }

    fn engine(x: ToricVariety, cone: &[usize]) -> BodyEngine {
        let flag = AdmissibleFlag::new(&x, cone.to_vec()).unwrap();
        BodyEngine::new(x, flag, 3).unwrap()
    }

    fn square(s: i128) -> Polytope {
        Polytope::cuboid(&[(r(0), r(s)), (r(0), r(s))])
    }

    fn simplex2() -> Polytope {
        Polytope::hull(&[cv(&[0, 0]), cv(&[1, 0]), cv(&[0, 1])]).unwrap()
    }

    #[test]
    fn delta_map_examples() {
        let mut eng = engine(p1xp1(), &[1, 2]);
        let map = DeltaMap::new(&mut eng, &cv(&[1, 0]), &cv(&[0, 1])).unwrap();
        let fl = map.apply(&cv(&[1, 0])).unwrap();
        assert_eq!(fl.as_body().unwrap(), &eng.body_effective(&cv(&[1, 0])).unwrap().body);
        assert_eq!(fl.as_body().unwrap().affine_dim(), Some(1));
        let f = map.apply(&cv(&[2, 3])).unwrap();
        let direct = eng.body(&cv(&[2, 3])).unwrap().body;
        assert_eq!(direct, Polytope::cuboid(&[(r(0), r(2)), (r(0), r(3))]));
        assert!(f.equivalent(&FormalBody::from_body(direct)).unwrap());
        let neg = map.apply(&cv(&[0, -1])).unwrap();
        assert!(neg.equivalent(&FormalBody::from_body(map.body_m.clone()).neg()).unwrap());
        assert_eq!(map.coordinates(&cv(&[2, 3])).unwrap(), (r(2), r(3)));
        // linearity
        let a = map.apply(&cv(&[3, -1])).unwrap();
        let b = map.apply(&cv(&[-1, 4])).unwrap();
        assert!(a.add(&b).unwrap().equivalent(&map.apply(&cv(&[2, 3])).unwrap()).unwrap());
    }

    #[test]
    fn delta_map_rejects() {
        let mut eng = engine(blpq_p2(), &[4, 0]);
        let map = DeltaMap::new(&mut eng, &cv(&[1, 2, 1]), &cv(&[0, 0, 1])).unwrap();
        assert_eq!(map.apply(&cv(&[1, 0, 0])).unwrap_err(), InequalityError::NotInSpan);
        assert_eq!(DeltaMap::new(&mut eng, &cv(&[1, 2, 1]), &cv(&[2, 4, 2])).unwrap_err(), InequalityError::Dependent);
        assert_eq!(DeltaMap::new(&mut eng, &cv(&[0, 0, 1]), &cv(&[1, 2, 1])).unwrap_err(), InequalityError::NotNef(0));
    }

    #[test]
    fn cor13_examples() {
        let mut eng = engine(p1xp1(), &[1, 2]);
        let map = DeltaMap::new(&mut eng, &cv(&[1, 0]), &cv(&[0, 1])).unwrap();
        let c = check_cor13(&map, &[cv(&[1, 1]), cv(&[1, 1])]).unwrap();
        assert_eq!((c.lhs, c.rhs, c.rhs_formal, c.holds), (r(1), r(1), r(1), true));
        let c = check_cor13(&map, &[cv(&[2, -1]), cv(&[-1, 3])]).unwrap();
        assert!(c.holds);
        // (2,-1)·(-1,3) = 2·3 + (-1)(-1) = 7
        assert_eq!(c.lhs, q(7, 2));

        let mut eng = engine(p2(), &[1, 2]);
        let map = DeltaMap::new(&mut eng, &cv(&[1]), &cv(&[1])).unwrap();
        let c = check_cor13(&map, &[cv(&[1]), cv(&[2])]).unwrap();
        assert_eq!((c.lhs, c.rhs, c.holds), (r(1), r(1), true));
        assert_eq!(injectivity_check(&map).unwrap_err(), InequalityError::Dependent);
    }

    #[test]
    fn cor13_on_multidegrees() {
        for (x, cone, l, m) in [
            (p2(), vec![1, 2], cv(&[1]), cv(&[1])),
            (p1xp1(), vec![1, 2], cv(&[1, 0]), cv(&[0, 1])),
            (p1xp1xp1(), vec![1, 3, 5], cv(&[1, 0, 0]), cv(&[0, 1, 1])),
            (p3(), vec![0, 1, 2], cv(&[1]), cv(&[1])),
        ] {
            let d = x.dim();
            let mut eng = engine(x, &cone);
            let map = DeltaMap::new(&mut eng, &l, &m).unwrap();
            for k in 0..=d {
                let classes: Vec<RatVec> = repeat(&l, k, &m, d).into_iter().cloned().collect();
                let c = check_cor13(&map, &classes).unwrap();
                assert!(c.holds, "{k} {c:?}");
            }
            // permutation and rescaling leave the verdict unchanged
            let cs = vec![&l.scale(q(3, 2)) + &m, &m.scale(r(2)) - &l, l.clone()];
            let cs: Vec<RatVec> = cs.into_iter().take(d).collect();
            let mut rev = cs.clone();
            rev.reverse();
            let a = check_cor13(&map, &cs).unwrap();
            let b = check_cor13(&map, &rev).unwrap();
            assert!(a.holds && b.holds && a.lhs == b.lhs);
        }
    }

    #[test]
    fn injectivity_examples() {
        let mut eng = engine(p1xp1(), &[1, 2]);
        let map = DeltaMap::new(&mut eng, &cv(&[2, 1]), &cv(&[1, 2])).unwrap();
        let c = injectivity_check(&map).unwrap();
        assert_eq!((c.sum_power, c.lower, c.upper), (r(18), r(16), r(16)));
        assert!(c.holds());
        // 2H−E ↦ (2, 1), 3H−E ↦ (3, 2)
        let mut eng = engine(f1(), &[3, 0]);
        let map = DeltaMap::new(&mut eng, &cv(&[2, 1]), &cv(&[3, 2])).unwrap();
        let c = injectivity_check(&map).unwrap();
        assert_eq!(c.sum_power, r(21));
        assert!(c.lower <= c.upper && c.upper < r(21));
        assert!(c.holds());
        // proportional classes are rejected up front
        let mut eng = engine(p1xp1(), &[1, 2]);
        assert!(DeltaMap::new(&mut eng, &cv(&[1, 1]), &cv(&[2, 2])).is_err());
    }

    #[test]
    fn root_brackets() {
        assert_eq!(root_bracket(q(8, 27), 3, 10), (q(2, 3), q(2, 3)));
        let (lo, hi) = root_bracket(r(2), 2, 16);
        assert!(lo.pow(2) < r(2) && hi.pow(2) > r(2) && hi - lo <= q(1, 1 << 15));
        assert_eq!(int_root(1 << 60, 3), Some(1 << 20));
        assert_eq!(int_root(17, 2), None);
    }

    #[test]
    fn lemma61_examples() {
        // Y1 = D_1 has class O(1, 0)
        let mut eng = engine(p1xp1(), &[1, 2]);
        for (a, b) in [(1, 1), (2, 3), (4, 1)] {
            let rec = lemma61_check(&mut eng, &cv(&[a, b]), &cv(&[1, 0])).unwrap();
            assert_eq!((rec.lhs, rec.rhs, rec.tight), (q(b as i128, 2), q(b as i128, 2), true));
            let rec = lemma61_check(&mut eng, &cv(&[a, b]), &cv(&[3, 1])).unwrap();
            assert!(rec.pass());
        }
        assert_eq!(lemma61_check(&mut eng, &cv(&[1, -1]), &cv(&[1, 1])).unwrap_err(), InequalityError::NotNef(0));
        // closed form: V([0,a]×[0,b], [0,1]×{0}) = b/2
        let rect = Polytope::cuboid(&[(r(0), r(2)), (r(0), r(3))]);
        let seg = Polytope::cuboid(&[(r(0), r(1)), (r(0), r(0))]);
        assert_eq!(mixed_volume_powers(&rect, 1, &seg).unwrap(), q(3, 2));
        let mut eng = engine(p2(), &[1, 2]);
        let rec = lemma61_check(&mut eng, &cv(&[1]), &cv(&[2])).unwrap();
        assert_eq!((rec.lhs, rec.rhs, rec.tight, rec.pass()), (r(1), r(1), true, true));
        let mut eng = engine(blpq_p2(), &[0, 1]);
        let rec = lemma61_check(&mut eng, &cv(&[1, 2, 1]), &cv(&[2, 3, 1])).unwrap();
        assert!(rec.pass() && !rec.slack.is_negative());
    }

    #[test]
    fn lehmann_xiao_examples() {
        let sq = square(1);
        let rec = lehmann_xiao_check(&sq, &sq, &sq, 1).unwrap();
        assert_eq!((rec.lhs, rec.rhs, rec.slack), (r(1), r(2), r(1)));
        let rec = lehmann_xiao_check(&sq, &square(2), &simplex2(), 1).unwrap();
        // vol(L) = 4, V(K, M) = 1, V(K, L) = 2, V(L, M) = 2
        assert_eq!((rec.lhs, rec.rhs), (r(4), r(8)));
        let rec = lehmann_xiao_check(&sq, &square(2), &simplex2(), 0).unwrap();
        assert_eq!((rec.lhs, rec.rhs, rec.slack), (r(2), r(2), r(0)));
        assert_eq!(lehmann_xiao_check(&sq, &sq, &sq, 3).unwrap_err(), InequalityError::BadK { k: 3, d: 2 });
    }

    #[test]
    fn cor15_examples() {
        let mut eng = engine(p1xp1(), &[1, 2]);
        let c = cor15_check(&mut eng, &cv(&[1, 1]), &cv(&[1, 0]), &cv(&[0, 1])).unwrap();
        assert_eq!((c.direct.lhs, c.direct.rhs, c.direct.slack), (r(2), r(2), r(0)));
        assert!(c.pass());
        let c = cor15_check(&mut eng, &cv(&[1, 0]), &cv(&[1, 1]), &cv(&[2, 1])).unwrap();
        assert_eq!(c.direct.lhs, r(0));
        assert!(c.pass());
        assert_eq!(cor15_check(&mut eng, &cv(&[1, -1]), &cv(&[1, 1]), &cv(&[1, 1])).unwrap_err(), InequalityError::NotNef(0));
        let mut eng = engine(p2(), &[1, 2]);
        let c = cor15_check(&mut eng, &cv(&[1]), &cv(&[1]), &cv(&[1])).unwrap();
        assert_eq!((c.direct.lhs, c.direct.rhs, c.direct.slack), (r(1), r(2), r(1)));
        let mut eng = engine(p1xp1xp1(), &[0, 2, 4]);
        let c = cor15_check(&mut eng, &cv(&[1, 2, 0]), &cv(&[0, 1, 1]), &cv(&[3, 0, 1])).unwrap();
        assert!(c.pass(), "{c:?}");
    }

    #[test]
    fn derivative_examples() {
        let sq = square(1);
        let c = derivative_of_bodies(&sq, &sq).unwrap();
        assert_eq!(c.polynomial, vec![r(1), r(2), r(1)]);
        assert!(c.holds);
        let mut eng = engine(p2(), &[1, 2]);
        let c = mixed_volume_derivative_check(&mut eng, &cv(&[1]), &cv(&[2])).unwrap();
        assert_eq!((c.polynomial[1], c.expected, c.holds), (r(2), r(2), true));
        let mut eng = engine(p1xp1(), &[1, 2]);
        let c = mixed_volume_derivative_check(&mut eng, &cv(&[1, 1]), &cv(&[2, 3])).unwrap();
        assert!(c.holds);
        let mut eng = engine(p3(), &[0, 1, 2]);
        assert!(mixed_volume_derivative_check(&mut eng, &cv(&[1]), &cv(&[2])).unwrap().holds);
        let mut eng = engine(p1(), &[0]);
        let c = mixed_volume_derivative_check(&mut eng, &cv(&[2]), &cv(&[3])).unwrap();
        assert_eq!(c.polynomial, vec![r(3), r(2)]);
        assert!(c.holds);
    }

    #[test]
    fn all_flags_enumerates_orderings() {
        assert_eq!(AdmissibleFlag::all(&p2()).len(), 6);
        assert_eq!(AdmissibleFlag::all(&p1xp1xp1()).len(), 48);
        for f in AdmissibleFlag::all(&blpq_p2()) {
            assert!(AdmissibleFlag::new(&blpq_p2(), f.cone().to_vec()).is_ok());
        }
    }
}
