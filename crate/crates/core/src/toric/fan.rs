use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_integer::Integer;

use super::ToricError;
use crate::linalg::{det, inverse, mat_vec};
use crate::rat::{Rat, RatVec};

/// A complete smooth simplicial fan given by primitive rays and maximal cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

/// A codimension-one cone shared by two maximal cones; it corresponds to a
/// torus-invariant curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub rays: Vec<usize>,
    pub sides: [usize; 2],
    /// Coefficient of each ray divisor in `D_ρ · C`, indexed by ray.
    pub degrees: Vec<Rat>,
}

pub(crate) fn ray_rows(rays: &[Vec<i64>], idx: &[usize]) -> Vec<Vec<Rat>> {
    idx.iter().map(|&i| rays[i].iter().map(|&x| Rat::from(x)).collect()).collect()
}

impl Fan {
    /// Builds a fan and checks smoothness, the wall condition and that the
    /// cones cover space exactly once.
    pub fn new(dim: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Fan, ToricError> {
        if dim == 0 {
            return Err(ToricError::InvalidFan("dimension must be positive".into()));
        }
        for (i, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return Err(ToricError::InvalidFan(alloc::format!("ray {i} has length {}", r.len())));
            }
            let g = r.iter().fold(0i64, |acc, x| acc.gcd(x));
            if g != 1 {
                return Err(ToricError::InvalidFan(alloc::format!("ray {i} is not primitive")));
            }
        }
        let mut cones = max_cones;
        for (k, c) in cones.iter_mut().enumerate() {
            if c.len() != dim || c.iter().any(|&i| i >= rays.len()) {
                return Err(ToricError::InvalidFan(alloc::format!("cone {k} is not a set of {dim} ray indices")));
            }
            let mut sorted = c.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != dim {
                return Err(ToricError::InvalidFan(alloc::format!("cone {k} repeats a ray")));
            }
            let d = det(&ray_rows(&rays, c));
            if d.abs() != Rat::ONE {
                return Err(ToricError::NotSmooth { cone: k, det: d });
            }
        }
        if cones.is_empty() {
            return Err(ToricError::InvalidFan("no maximal cones".into()));
        }
        let fan = Fan { dim, rays, max_cones: cones };
        fan.check_walls()?;
        fan.check_covering_degree()?;
        for r in 0..fan.rays.len() {
            if !fan.max_cones.iter().any(|c| c.contains(&r)) {
                return Err(ToricError::InvalidFan(alloc::format!("ray {r} lies in no maximal cone")));
            }
        }
        Ok(fan)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> RatVec {
        RatVec::from_ints(self.rays[i].iter().copied())
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    /// Index of the maximal cone with exactly these rays.
    pub fn find_cone(&self, rays: &[usize]) -> Option<usize> {
        let mut want = rays.to_vec();
        want.sort_unstable();
        self.max_cones.iter().position(|c| {
            let mut have = c.clone();
            have.sort_unstable();
            have == want
        })
    }

    /// Coordinates of `v` in the basis formed by the rays of `cone` (in the given order).
    pub fn coords_in_cone(&self, cone: &[usize], v: &RatVec) -> RatVec {
        let basis = ray_rows(&self.rays, cone);
        // v = Σ c_i r_i  ⇔  Bᵀ c = v
        let bt = crate::linalg::transpose(&basis, self.dim);
        let inv = inverse(&bt).expect("maximal cone rays form a basis");
        mat_vec(&inv, &v.0)
    }

    fn wall_map(&self) -> BTreeMap<Vec<usize>, Vec<(usize, usize)>> {
        let mut walls: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
        for (k, c) in self.max_cones.iter().enumerate() {
            for &opposite in c {
                let mut w: Vec<usize> = c.iter().copied().filter(|&i| i != opposite).collect();
                w.sort_unstable();
                walls.entry(w).or_default().push((k, opposite));
            }
        }
        walls
    }

    fn check_walls(&self) -> Result<(), ToricError> {
        for (w, users) in self.wall_map() {
            if users.len() != 2 {
                return Err(ToricError::InvalidFan(alloc::format!(
                    "wall {w:?} lies in {} maximal cones (fan is not complete)",
                    users.len()
                )));
            }
            let (k0, a) = users[0];
            let (_, b) = users[1];
            let cb = self.coords_in_cone(&self.max_cones[k0], &self.ray(b));
            let pos = self.max_cones[k0].iter().position(|&i| i == a).unwrap();
            if !cb[pos].is_negative() {
                return Err(ToricError::InvalidFan(alloc::format!("cones across wall {w:?} overlap")));
            }
        }
        Ok(())
    }

    /// A complete fan covers a generic vector exactly once.
    fn check_covering_degree(&self) -> Result<(), ToricError> {
        let primes = [7i128, 11, 13, 17, 19, 23, 29, 31];
        'probe: for &p in &primes {
            let probe = RatVec((0..self.dim).map(|i| Rat::new(if i % 2 == 0 { 1 } else { -1 }, p.pow(i as u32))).collect());
            let mut count = 0;
            for c in &self.max_cones {
                let coords = self.coords_in_cone(c, &probe);
                if coords.iter().any(|x| x.is_zero()) {
                    continue 'probe;
                }
                if coords.iter().all(|x| x.is_positive()) {
                    count += 1;
                }
            }
            if count != 1 {
                return Err(ToricError::InvalidFan(alloc::format!("fan covers a generic vector {count} times")));
            }
            return Ok(());
        }
        Err(ToricError::InvalidFan("no generic probe vector found".into()))
    }

    /// Torus-invariant curves with their intersection numbers against each ray divisor.
    pub fn walls(&self) -> Vec<Wall> {
        self.wall_map()
            .into_iter()
            .map(|(rays, users)| {
                let (k0, a) = users[0];
                let (_, b) = users[1];
                let cone = &self.max_cones[k0];
                // v_b = Σ β_i v_i over the rays of cone k0, with β_a = −1
                let beta = self.coords_in_cone(cone, &self.ray(b));
                let mut degrees = alloc::vec![Rat::ZERO; self.rays.len()];
                degrees[a] = Rat::ONE;
                degrees[b] = Rat::ONE;
                for (j, &i) in cone.iter().enumerate() {
                    if i != a {
                        degrees[i] = -beta[j];
                    }
                }
                Wall { rays, sides: [a, b], degrees }
            })
            .collect()
    }
}
