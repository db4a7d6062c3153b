//! Exact convex-body arithmetic in `R^d`.
//!
//! Everything here works on [`Polytope`] values with [`Rat`] coordinates;
//! there is no rounding anywhere. Lower-dimensional and empty bodies are
//! ordinary values (volume zero).

mod formal;
mod hull;
mod polytope;

use alloc::vec::Vec;

pub use formal::{formal_mixed_volume, FormalBody};
pub use polytope::{HRep, Polytope};
pub(crate) use polytope::factorial;

use crate::rat::{Rat, RatVec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty point list has no ambient dimension")]
    NoAmbientDimension,
    #[error("negative scale factor {0}")]
    NegativeScale(Rat),
    #[error("mixed volume in R^{dim} needs {dim} bodies, got {got}")]
    WrongBodyCount { dim: usize, got: usize },
    #[error("halfspace system is unbounded")]
    Unbounded,
    #[error("slicing needs ambient dimension at least 2")]
    SliceDimension,
}

pub fn convex_hull(points: &[RatVec]) -> Result<Polytope, GeomError> {
    Polytope::hull(points)
}

fn same_dim(p: &Polytope, q: &Polytope) -> Result<(), GeomError> {
    if p.dim() != q.dim() {
        return Err(GeomError::DimensionMismatch { expected: p.dim(), found: q.dim() });
    }
    Ok(())
}

/// `P + Q = {p + q}`; the hull of pairwise vertex sums.
pub fn minkowski_sum(p: &Polytope, q: &Polytope) -> Result<Polytope, GeomError> {
    same_dim(p, q)?;
    let mut pts = Vec::with_capacity(p.vertices().len() * q.vertices().len());
    for a in p.vertices() {
        for b in q.vertices() {
            pts.push(a + b);
        }
    }
    Ok(Polytope::hull_unchecked(p.dim(), pts))
}

/// Minkowski sum of a list of bodies in a common `R^dim`; `{0}` when empty.
pub fn minkowski_sum_all(dim: usize, bodies: &[&Polytope]) -> Result<Polytope, GeomError> {
    bodies.iter().try_fold(Polytope::origin(dim), |acc, b| minkowski_sum(&acc, b))
}

/// `c · P` for `c >= 0`.
pub fn scale(p: &Polytope, c: Rat) -> Result<Polytope, GeomError> {
    if c.is_negative() {
        return Err(GeomError::NegativeScale(c));
    }
    Ok(scale_unchecked(p, c))
}

pub(crate) fn scale_unchecked(p: &Polytope, c: Rat) -> Polytope {
    if c.is_zero() {
        return if p.is_empty() { p.clone() } else { Polytope::origin(p.dim()) };
    }
    let pts: Vec<RatVec> = p.vertices().iter().map(|v| v.scale(c)).collect();
    Polytope::hull_unchecked(p.dim(), pts)
}

pub fn volume(p: &Polytope) -> Rat {
    p.volume()
}

/// Mixed volume by polarization:
/// `V(K_1..K_d) = (1/d!) Σ_J (-1)^{d-|J|} vol(Σ_{j∈J} K_j)`.
pub fn mixed_volume(bodies: &[&Polytope]) -> Result<Rat, GeomError> {
    let Some(first) = bodies.first() else {
        return Err(GeomError::WrongBodyCount { dim: 0, got: 0 });
    };
    let d = first.dim();
    if bodies.len() != d {
        return Err(GeomError::WrongBodyCount { dim: d, got: bodies.len() });
    }
    for b in bodies {
        same_dim(first, b)?;
    }
    // Subsets are grouped by the multiset of bodies they sum, so repeated
    // arguments (V(K^k, L^{d-k})) reuse one volume per distinct sum.
    let mut cache: alloc::collections::BTreeMap<Vec<usize>, Rat> = alloc::collections::BTreeMap::new();
    let canon: Vec<usize> = bodies
        .iter()
        .map(|b| bodies.iter().position(|o| *o == *b).unwrap())
        .collect();
    let mut total = Rat::ZERO;
    for mask in 1usize..(1 << d) {
        let mut key: Vec<usize> = (0..d).filter(|j| mask & (1 << j) != 0).map(|j| canon[j]).collect();
        key.sort_unstable();
        let size = key.len();
        let vol = match cache.get(&key) {
            Some(v) => *v,
            None => {
                let members: Vec<&Polytope> = key.iter().map(|&j| bodies[j]).collect();
                let v = minkowski_sum_all(d, &members)?.volume();
                cache.insert(key, v);
                v
            }
        };
        if (d - size).is_multiple_of(2) {
            total += vol;
        } else {
            total -= vol;
        }
    }
    Ok(total / factorial(d))
}

/// `V(K^k, L^{d-k})`.
pub fn mixed_volume_powers(k_body: &Polytope, k: usize, l_body: &Polytope) -> Result<Rat, GeomError> {
    same_dim(k_body, l_body)?;
    let d = k_body.dim();
    if k > d {
        return Err(GeomError::WrongBodyCount { dim: d, got: k });
    }
    let mut args: Vec<&Polytope> = Vec::with_capacity(d);
    args.extend(core::iter::repeat_n(k_body, k));
    args.extend(core::iter::repeat_n(l_body, d - k));
    mixed_volume(&args)
}

/// `{x ∈ R^{d-1} : (t, x) ∈ P}`.
///
/// Vertices on the hyperplane are kept and every vertex pair straddling
/// it contributes its crossing point; the hull of these is the slice.
pub fn slice(p: &Polytope, t: Rat) -> Result<Polytope, GeomError> {
    let d = p.dim();
    if d < 2 {
        return Err(GeomError::SliceDimension);
    }
    let verts = p.vertices();
    let mut pts: Vec<RatVec> = Vec::new();
    for v in verts {
        if v[0] == t {
            pts.push(RatVec(v.0[1..].to_vec()));
        }
    }
    for (i, a) in verts.iter().enumerate() {
        for b in &verts[i + 1..] {
            let (lo, hi) = if a[0] < b[0] { (a, b) } else { (b, a) };
            if lo[0] < t && t < hi[0] {
                let s = (t - lo[0]) / (hi[0] - lo[0]);
                let x: Vec<Rat> = (1..d).map(|j| lo[j] + s * (hi[j] - lo[j])).collect();
                pts.push(RatVec(x));
            }
        }
    }
    Ok(Polytope::hull_unchecked(d - 1, pts))
}

/// Exact set equality, decided on canonical vertex lists.
pub fn equals(p: &Polytope, q: &Polytope) -> Result<bool, GeomError> {
    same_dim(p, q)?;
    Ok(p == q)
}

/// A vertex of `p` outside `q` or of `q` outside `p`.
pub fn symmetric_difference_witness(p: &Polytope, q: &Polytope) -> Option<RatVec> {
    let hq = q.halfspaces();
    if let Some(v) = p.vertices().iter().find(|v| !hq.contains(v)) {
        return Some(v.clone());
    }
    let hp = p.halfspaces();
    q.vertices().iter().find(|v| !hp.contains(v)).cloned()
}
