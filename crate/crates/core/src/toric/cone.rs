use alloc::vec::Vec;

use crate::linalg::{nullspace, primitive, rank};
use crate::rat::{Rat, RatVec};

/// Position of a vector relative to a closed cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConePosition {
    Interior,
    Boundary,
    Outside,
}

/// A full-dimensional rational polyhedral cone with both descriptions:
/// extreme rays and inward facet normals (`⟨n, x⟩ ≥ 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatCone {
    dim: usize,
    rays: Vec<RatVec>,
    facets: Vec<RatVec>,
}

fn dedup_primitive(vs: impl IntoIterator<Item = RatVec>) -> Vec<RatVec> {
    let mut out: Vec<RatVec> = vs.into_iter().filter(|v| !v.is_zero()).map(|v| primitive(&v)).collect();
    out.sort();
    out.dedup();
    out
}

/// Vectors `n` with `⟨n, g⟩ ≥ 0` for every `g`, spanning a hyperplane through
/// `dim − 1` independent members. Brute force over subsets; fine for small inputs.
fn supporting_normals(dim: usize, gens: &[RatVec]) -> Vec<RatVec> {
    if dim == 1 {
        let mut out = Vec::new();
        for n in [RatVec(alloc::vec![Rat::ONE]), RatVec(alloc::vec![-Rat::ONE])] {
            if gens.iter().all(|g| !n.dot(g).is_negative()) {
                out.push(n);
            }
        }
        return out;
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..dim - 1).collect();
    if gens.len() < dim - 1 {
        return out;
    }
    loop {
        let rows: Vec<Vec<Rat>> = idx.iter().map(|&i| gens[i].0.clone()).collect();
        if rank(&rows, dim) == dim - 1 {
            let n = nullspace(&rows, dim).remove(0);
            let signs: Vec<i32> = gens.iter().map(|g| n.dot(g).signum()).collect();
            if signs.iter().all(|&s| s >= 0) {
                out.push(n);
            } else if signs.iter().all(|&s| s <= 0) {
                out.push(-&n);
            }
        }
        // next combination
        let k = idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                return dedup_primitive(out);
            }
            i -= 1;
            if idx[i] < gens.len() - (k - i) {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

impl RatCone {
    /// Cone spanned by `gens`; returns `None` unless it is full-dimensional and pointed.
    pub fn from_generators(dim: usize, gens: &[RatVec]) -> Option<RatCone> {
        let rows: Vec<Vec<Rat>> = gens.iter().map(|g| g.0.clone()).collect();
        if rank(&rows, dim) != dim {
            return None;
        }
        let facets = supporting_normals(dim, gens);
        let rays = supporting_normals(dim, &facets);
        let cone = RatCone { dim, rays, facets };
        cone.is_pointed().then_some(cone)
    }

    /// Cone `{x : ⟨n, x⟩ ≥ 0 for all n}`; `None` unless full-dimensional and pointed.
    pub fn from_inequalities(dim: usize, normals: &[RatVec]) -> Option<RatCone> {
        let rows: Vec<Vec<Rat>> = normals.iter().map(|g| g.0.clone()).collect();
        if rank(&rows, dim) != dim {
            return None;
        }
        let rays = supporting_normals(dim, normals);
        if rays.is_empty() {
            return None;
        }
        let facets = supporting_normals(dim, &rays);
        let cone = RatCone { dim, rays, facets };
        (cone.is_pointed() && cone.is_full()).then_some(cone)
    }

    fn is_pointed(&self) -> bool {
        let rows: Vec<Vec<Rat>> = self.facets.iter().map(|g| g.0.clone()).collect();
        rank(&rows, self.dim) == self.dim
    }

    fn is_full(&self) -> bool {
        let rows: Vec<Vec<Rat>> = self.rays.iter().map(|g| g.0.clone()).collect();
        rank(&rows, self.dim) == self.dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[RatVec] {
        &self.rays
    }

    pub fn facets(&self) -> &[RatVec] {
        &self.facets
    }

    pub fn position(&self, x: &RatVec) -> ConePosition {
        let mut on_boundary = false;
        for n in &self.facets {
            match n.dot(x).signum() {
                -1 => return ConePosition::Outside,
                0 => on_boundary = true,
                _ => {}
            }
        }
        if on_boundary {
            ConePosition::Boundary
        } else {
            ConePosition::Interior
        }
    }

    pub fn contains(&self, x: &RatVec) -> bool {
        self.position(x) != ConePosition::Outside
    }

    pub fn contains_interior(&self, x: &RatVec) -> bool {
        self.position(x) == ConePosition::Interior
    }

    pub fn is_subcone_of(&self, other: &RatCone) -> bool {
        self.rays.iter().all(|r| other.contains(r))
    }
}
