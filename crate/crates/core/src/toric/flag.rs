use alloc::format;
use alloc::vec::Vec;

use super::{Fan, TDivisor, ToricError, ToricVariety};
use crate::rat::{Rat, RatVec};

/// A torus-invariant flag `Y_i = D_{v_1} ∩ … ∩ D_{v_i}` given by the ordered
/// rays of a maximal cone.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdmissibleFlag {
    cone: Vec<usize>,
    ratios: Option<Vec<Rat>>,
}

/// Outcome of the correspondence test; `ratios` holds `r_0, …, r_{d−2}`
/// when every step is proportional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagCorrespondence {
    pub corresponds: bool,
    pub ratios: Vec<Rat>,
}

/// The orbit closure `Y_k` of a flag as a toric variety in its own right.
///
/// Its rays are ordered with the images of `v_{k+1}, …, v_d` first, so the
/// induced flag is the first maximal cone taken in order.
#[derive(Clone, Debug)]
pub struct StarVariety {
    pub variety: ToricVariety,
    /// Original ray index of each star ray.
    pub ray_map: Vec<usize>,
    pub depth: usize,
}

impl StarVariety {
    pub fn flag(&self) -> AdmissibleFlag {
        AdmissibleFlag { cone: (0..self.variety.dim()).collect(), ratios: None }
    }
}

impl AdmissibleFlag {
    pub fn new(x: &ToricVariety, cone: Vec<usize>) -> Result<AdmissibleFlag, ToricError> {
        if x.fan().find_cone(&cone).is_none() || cone.len() != x.dim() {
            return Err(ToricError::NotAMaxCone(cone));
        }
        Ok(AdmissibleFlag { cone, ratios: None })
    }

    /// The flag along the reference cone of `x`.
    pub fn standard(x: &ToricVariety) -> AdmissibleFlag {
        AdmissibleFlag { cone: x.reference_cone().to_vec(), ratios: None }
    }

    /// Every ordering of every maximal cone.
    pub fn all(x: &ToricVariety) -> Vec<AdmissibleFlag> {
        let mut out = Vec::new();
        for cone in x.fan().max_cones() {
            let mut perm = cone.clone();
            perm.sort_unstable();
            loop {
                out.push(AdmissibleFlag { cone: perm.clone(), ratios: None });
                if !next_permutation(&mut perm) {
                    break;
                }
            }
        }
        out
    }

    pub fn cone(&self) -> &[usize] {
        &self.cone
    }

    /// Ray index of `v_1`, the ray whose divisor is `Y_1`.
    pub fn first_ray(&self) -> usize {
        self.cone[0]
    }

    pub fn ratios(&self) -> Option<&[Rat]> {
        self.ratios.as_deref()
    }

    pub fn with_ratios(mut self, ratios: Vec<Rat>) -> AdmissibleFlag {
        self.ratios = Some(ratios);
        self
    }
}

impl ToricVariety {
    /// `u ↦ (⟨u, v_i⟩ + a_{v_i})_i` for a lattice point `u ∈ P_D`.
    pub fn flag_valuation(&self, flag: &AdmissibleFlag, d: &TDivisor, u: &[i64]) -> Result<RatVec, ToricError> {
        self.check_flag(flag)?;
        if d.len() != self.num_rays() {
            return Err(ToricError::WrongLength { expected: self.num_rays(), found: d.len() });
        }
        if u.len() != self.dim() {
            return Err(ToricError::WrongLength { expected: self.dim(), found: u.len() });
        }
        let uv = RatVec::from_ints(u.iter().copied());
        let fan = self.fan();
        let inside = (0..self.num_rays()).all(|r| !(uv.dot(&fan.ray(r)) + d.coeffs[r]).is_negative());
        if !inside {
            return Err(ToricError::OutsidePolytope);
        }
        Ok(RatVec(flag.cone.iter().map(|&r| uv.dot(&fan.ray(r)) + d.coeffs[r]).collect()))
    }

    pub(crate) fn check_flag(&self, flag: &AdmissibleFlag) -> Result<(), ToricError> {
        if flag.cone.len() != self.dim() || self.fan().find_cone(&flag.cone).is_none() {
            return Err(ToricError::NotAMaxCone(flag.cone.clone()));
        }
        Ok(())
    }

    /// The toric variety `Y_depth = V(v_1, …, v_depth)` for `1 ≤ depth < d`.
    pub fn star(&self, flag: &AdmissibleFlag, depth: usize) -> Result<StarVariety, ToricError> {
        self.check_flag(flag)?;
        let d = self.dim();
        if depth == 0 || depth >= d {
            return Err(ToricError::NoRestriction);
        }
        let fan = self.fan();
        let tau = &flag.cone[..depth];
        let containing: Vec<&Vec<usize>> =
            fan.max_cones().iter().filter(|c| tau.iter().all(|t| c.contains(t))).collect();
        let mut ray_map: Vec<usize> = flag.cone[depth..].to_vec();
        let mut others: Vec<usize> = containing
            .iter()
            .flat_map(|c| c.iter().copied())
            .filter(|r| !tau.contains(r) && !ray_map.contains(r))
            .collect();
        others.sort_unstable();
        others.dedup();
        ray_map.extend(others);
        let rays: Vec<Vec<i64>> = ray_map
            .iter()
            .map(|&r| {
                let c = fan.coords_in_cone(&flag.cone, &fan.ray(r));
                c.0[depth..]
                    .iter()
                    .map(|x| {
                        debug_assert!(x.is_integer());
                        x.numer() as i64
                    })
                    .collect()
            })
            .collect();
        let local = |r: usize| ray_map.iter().position(|&m| m == r).unwrap();
        let mut cones: Vec<Vec<usize>> = alloc::vec![(0..d - depth).collect()];
        let flag_sorted = {
            let mut s = flag.cone.clone();
            s.sort_unstable();
            s
        };
        for c in containing {
            let mut s = c.clone();
            s.sort_unstable();
            if s == flag_sorted {
                continue;
            }
            let mut loc: Vec<usize> = c.iter().filter(|r| !tau.contains(r)).map(|&r| local(r)).collect();
            loc.sort_unstable();
            cones.push(loc);
        }
        let star_fan = Fan::new(d - depth, rays, cones)?;
        let name = format!("{}/V{:?}", self.name(), tau);
        Ok(StarVariety { variety: ToricVariety::new(name, star_fan)?, ray_map, depth })
    }

    /// `D|_{Y_depth}` as a divisor on the star variety, using the
    /// representative that vanishes on `v_1, …, v_depth`.
    pub fn restrict(&self, flag: &AdmissibleFlag, star: &StarVariety, d: &TDivisor) -> TDivisor {
        let fan = self.fan();
        let tau = &flag.cone[..star.depth];
        TDivisor::new(
            star.ray_map
                .iter()
                .map(|&r| {
                    let c = fan.coords_in_cone(&flag.cone, &fan.ray(r));
                    let mut a = d.coeffs[r];
                    for (j, &t) in tau.iter().enumerate() {
                        a -= d.coeffs[t] * c[j];
                    }
                    a
                })
                .collect(),
        )
    }

    /// Whether `r_i·O_{Y_i}(Y_{i+1}) ≡ L|_{Y_i}` for `0 ≤ i ≤ d−2`, tested on
    /// every torus-invariant curve of `Y_i`.
    pub fn flag_corresponds(&self, flag: &AdmissibleFlag, l: &TDivisor) -> Result<FlagCorrespondence, ToricError> {
        self.check_flag(flag)?;
        let d = self.dim();
        let mut ratios = Vec::new();
        for i in 0..d.saturating_sub(1) {
            let (y_div, l_res, degrees_of): (TDivisor, TDivisor, &ToricVariety);
            let star;
            if i == 0 {
                y_div = self.ray_divisor(flag.cone[0]);
                l_res = l.clone();
                degrees_of = self;
            } else {
                star = self.star(flag, i)?;
                y_div = star.variety.ray_divisor(0);
                l_res = self.restrict(flag, &star, l);
                degrees_of = &star.variety;
            }
            let cy = degrees_of.curve_degrees(&y_div)?;
            let cl = degrees_of.curve_degrees(&l_res)?;
            match proportionality(&cy, &cl) {
                Some(r) => ratios.push(r),
                None => return Ok(FlagCorrespondence { corresponds: false, ratios }),
            }
        }
        Ok(FlagCorrespondence { corresponds: true, ratios })
    }
}

/// `r` with `r·a = b`, when one exists.
fn proportionality(a: &[Rat], b: &[Rat]) -> Option<Rat> {
    let r = match a.iter().position(|x| !x.is_zero()) {
        Some(j) => b[j] / a[j],
        None => Rat::ZERO,
    };
    a.iter().zip(b).all(|(x, y)| *x * r == *y).then_some(r)
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
