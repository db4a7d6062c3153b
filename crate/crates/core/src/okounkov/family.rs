use alloc::vec::Vec;

use super::OkounkovError;
use crate::rat::Rat;
use crate::toric::{AdmissibleFlag, TDivisor, ToricVariety};

/// Valuation vectors of the sections of `mD`, level by level.
pub trait GradedValuationFamily {
    fn dim(&self) -> usize;

    /// All of `Γ_m = {ν(s) : s ∈ H⁰(mD) \ 0}`.
    fn level(&self, m: u32) -> Vec<Vec<i64>>;

    /// A subset of `Γ_m` with the same convex hull.
    fn extremal_candidates(&self, m: u32) -> Vec<Vec<i64>> {
        self.level(m)
    }
}

/// Monomial sections of an integral torus-invariant divisor, valued along a
/// torus-invariant flag.
#[derive(Clone, Debug)]
pub struct ToricFamily<'a> {
    x: &'a ToricVariety,
    flag: &'a AdmissibleFlag,
    coeffs: Vec<i64>,
    lo: Vec<Rat>,
    hi: Vec<Rat>,
}

impl<'a> ToricFamily<'a> {
    pub fn new(x: &'a ToricVariety, flag: &'a AdmissibleFlag, d: &TDivisor) -> Result<ToricFamily<'a>, OkounkovError> {
        if !d.is_integral() {
            return Err(OkounkovError::NotIntegral);
        }
        let p = x.polytope_of_divisor(d)?;
        if p.is_empty() {
            return Err(OkounkovError::NotEffective);
        }
        let dim = x.dim();
        let lo = (0..dim).map(|i| p.min_coord(i).unwrap()).collect();
        let hi = (0..dim).map(|i| p.max_coord(i).unwrap()).collect();
        let coeffs = d.coeffs.iter().map(|c| c.numer() as i64).collect();
        Ok(ToricFamily { x, flag, coeffs, lo, hi })
    }

    fn inside(&self, m: i64, u: &[i64]) -> bool {
        self.x.fan().rays().iter().zip(&self.coeffs).all(|(v, a)| {
            let s: i64 = v.iter().zip(u).map(|(x, y)| x * y).sum();
            s + m * a >= 0
        })
    }

    fn valuation(&self, m: i64, u: &[i64]) -> Vec<i64> {
        let rays = self.x.fan().rays();
        self.flag
            .cone()
            .iter()
            .map(|&r| rays[r].iter().zip(u).map(|(x, y)| x * y).sum::<i64>() + m * self.coeffs[r])
            .collect()
    }

    /// Calls `f(prefix, lo, hi)` for every nonempty fiber of `mP_D` along the
    /// last coordinate.
    fn fibers(&self, m: i64, mut f: impl FnMut(&[i64], i64, i64)) {
        let d = self.x.dim();
        let mr = Rat::from(m);
        let lo: Vec<i64> = self.lo.iter().map(|x| (*x * mr).ceil() as i64).collect();
        let hi: Vec<i64> = self.hi.iter().map(|x| (*x * mr).floor() as i64).collect();
        let mut u: Vec<i64> = lo[..d - 1].to_vec();
        if lo[..d - 1].iter().zip(&hi[..d - 1]).any(|(a, b)| a > b) {
            return;
        }
        let rays = self.x.fan().rays();
        loop {
            // ⟨u, v⟩ + m a ≥ 0 read as a bound on the last coordinate
            let mut l = lo[d - 1];
            let mut h = hi[d - 1];
            for (v, a) in rays.iter().zip(&self.coeffs) {
                let rest: i64 = v[..d - 1].iter().zip(&u).map(|(x, y)| x * y).sum::<i64>() + m * a;
                let c = v[d - 1];
                if c > 0 {
                    l = l.max(div_ceil(-rest, c));
                } else if c < 0 {
                    h = h.min(num_integer::Integer::div_floor(&rest, &-c));
                } else if rest < 0 {
                    h = l - 1;
                }
            }
            if l <= h {
                f(&u, l, h);
            }
            let mut i = 0;
            while i < d - 1 {
                if u[i] < hi[i] {
                    u[i] += 1;
                    break;
                }
                u[i] = lo[i];
                i += 1;
            }
            if i == d - 1 {
                return;
            }
        }
    }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -num_integer::Integer::div_floor(&-a, &b)
}

impl GradedValuationFamily for ToricFamily<'_> {
    fn dim(&self) -> usize {
        self.x.dim()
    }

    fn level(&self, m: u32) -> Vec<Vec<i64>> {
        let m = m as i64;
        let mut out = Vec::new();
        self.fibers(m, |prefix, l, h| {
            for t in l..=h {
                let mut u = prefix.to_vec();
                u.push(t);
                out.push(self.valuation(m, &u));
            }
        });
        out
    }

    /// Fiber endpoints, minus those that are midpoints of two sections.
    fn extremal_candidates(&self, m: u32) -> Vec<Vec<i64>> {
        let m = m as i64;
        let d = self.x.dim();
        let mut ends: Vec<Vec<i64>> = Vec::new();
        self.fibers(m, |prefix, l, h| {
            for t in if l == h { [l].to_vec() } else { [l, h].to_vec() } {
                let mut u = prefix.to_vec();
                u.push(t);
                ends.push(u);
            }
        });
        let dirs = half_directions(d);
        ends.into_iter()
            .filter(|u| {
                !dirs.iter().any(|w| {
                    let plus: Vec<i64> = u.iter().zip(w).map(|(a, b)| a + b).collect();
                    let minus: Vec<i64> = u.iter().zip(w).map(|(a, b)| a - b).collect();
                    self.inside(m, &plus) && self.inside(m, &minus)
                })
            })
            .map(|u| self.valuation(m, &u))
            .collect()
    }
}

/// Nonzero vectors in `{−1, 0, 1}^d` whose first nonzero entry is positive.
fn half_directions(d: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let total = 3usize.pow(d as u32);
    for code in 1..total {
        let mut w = Vec::with_capacity(d);
        let mut c = code;
        for _ in 0..d {
            w.push((c % 3) as i64 - 1);
            c /= 3;
        }
        if w.iter().find(|x| **x != 0) == Some(&1) {
            out.push(w);
        }
    }
    out
}
