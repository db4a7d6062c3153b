use alloc::vec::Vec;

use super::hull::full_hull;
use super::GeomError;
use crate::linalg::{det, nullspace, primitive, rref};
use crate::rat::{Rat, RatVec};

/// A convex polytope in `R^d`, stored by its extreme points in
/// lexicographic order. The empty set is a valid polytope.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<RatVec>,
}

/// Halfspace description: `normal · x <= offset` for each inequality and
/// `normal · x == offset` for each equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRep {
    pub dim: usize,
    pub empty: bool,
    pub equalities: Vec<(RatVec, Rat)>,
    pub inequalities: Vec<(RatVec, Rat)>,
}

impl HRep {
    pub fn contains(&self, x: &RatVec) -> bool {
        !self.empty
            && self.equalities.iter().all(|(n, b)| n.dot(x) == *b)
            && self.inequalities.iter().all(|(n, b)| n.dot(x) <= *b)
    }

    /// First constraint violated by `x`, if any.
    pub fn violated_by(&self, x: &RatVec) -> Option<(RatVec, Rat)> {
        self.equalities
            .iter()
            .find(|(n, b)| n.dot(x) != *b)
            .or_else(|| self.inequalities.iter().find(|(n, b)| n.dot(x) > *b))
            .cloned()
    }
}

/// The affine hull of a point set: base point, rank and the coordinates
/// that parametrise it injectively.
struct AffineFrame {
    rank: usize,
    pivots: Vec<usize>,
}

fn affine_frame(points: &[RatVec], dim: usize) -> AffineFrame {
    let rows: Vec<Vec<Rat>> = points[1..].iter().map(|p| (p - &points[0]).0).collect();
    let (_, pivots) = rref(&rows, dim);
    AffineFrame { rank: pivots.len(), pivots }
}

fn project(p: &RatVec, coords: &[usize]) -> RatVec {
    RatVec(coords.iter().map(|&c| p[c]).collect())
}

/// Triangulated boundary of the projected full-dimensional body.
struct Frame {
    vertices: Vec<RatVec>,
    projected: Vec<RatVec>,
    pivots: Vec<usize>,
}

impl Polytope {
    pub fn empty(dim: usize) -> Polytope {
        Polytope { dim, vertices: Vec::new() }
    }

    pub fn point(p: RatVec) -> Polytope {
        Polytope { dim: p.dim(), vertices: alloc::vec![p] }
    }

    pub fn origin(dim: usize) -> Polytope {
        Polytope::point(RatVec::zeros(dim))
    }

    /// Axis-parallel box `[lo_1, hi_1] × … × [lo_d, hi_d]`.
    pub fn cuboid(bounds: &[(Rat, Rat)]) -> Polytope {
        let d = bounds.len();
        let mut pts = Vec::new();
        for mask in 0..(1usize << d) {
            pts.push(RatVec(
                bounds
                    .iter()
                    .enumerate()
                    .map(|(i, (lo, hi))| if mask & (1 << i) == 0 { *lo } else { *hi })
                    .collect(),
            ));
        }
        Polytope::hull_unchecked(d, pts)
    }

    /// Convex hull of finitely many points, with a minimal canonical vertex list.
    pub fn hull(points: &[RatVec]) -> Result<Polytope, GeomError> {
        let Some(first) = points.first() else {
            return Err(GeomError::NoAmbientDimension);
        };
        let dim = first.dim();
        if let Some(bad) = points.iter().find(|p| p.dim() != dim) {
            return Err(GeomError::DimensionMismatch { expected: dim, found: bad.dim() });
        }
        Ok(Polytope::hull_unchecked(dim, points.to_vec()))
    }

    /// Hull of points in `R^dim`; an empty input gives the empty polytope.
    pub fn hull_in(dim: usize, points: &[RatVec]) -> Result<Polytope, GeomError> {
        if let Some(bad) = points.iter().find(|p| p.dim() != dim) {
            return Err(GeomError::DimensionMismatch { expected: dim, found: bad.dim() });
        }
        Ok(Polytope::hull_unchecked(dim, points.to_vec()))
    }

    pub(crate) fn hull_unchecked(dim: usize, mut points: Vec<RatVec>) -> Polytope {
        points.sort();
        points.dedup();
        if points.len() <= 1 {
            return Polytope { dim, vertices: points };
        }
        let frame = affine_frame(&points, dim);
        let vertices = match frame.rank {
            0 => alloc::vec![points[0].clone()],
            1 => {
                let c = frame.pivots[0];
                let lo = points.iter().min_by_key(|p| p[c]).unwrap().clone();
                let hi = points.iter().max_by_key(|p| p[c]).unwrap().clone();
                alloc::vec![lo, hi]
            }
            k => {
                let projected: Vec<RatVec> = points.iter().map(|p| project(p, &frame.pivots)).collect();
                let hull = full_hull(&projected, k);
                hull.extreme_points(&projected, k).into_iter().map(|i| points[i].clone()).collect()
            }
        };
        let mut vertices = vertices;
        vertices.sort();
        Polytope { dim, vertices }
    }

    /// Bounded polytope `{x : normal · x <= offset}` by exhaustive vertex
    /// enumeration over `dim`-subsets of constraints.
    pub fn from_inequalities(dim: usize, ineqs: &[(RatVec, Rat)]) -> Result<Polytope, GeomError> {
        if let Some((bad, _)) = ineqs.iter().find(|(n, _)| n.dim() != dim) {
            return Err(GeomError::DimensionMismatch { expected: dim, found: bad.dim() });
        }
        if dim == 0 {
            let feasible = ineqs.iter().all(|(_, b)| !b.is_negative());
            return Ok(if feasible { Polytope::origin(0) } else { Polytope::empty(0) });
        }
        if !recession_is_trivial(dim, ineqs) {
            return Err(GeomError::Unbounded);
        }
        let mut pts = Vec::new();
        let mut subset: Vec<usize> = (0..dim).collect();
        let n = ineqs.len();
        if n < dim {
            return Err(GeomError::Unbounded);
        }
        loop {
            let a: Vec<Vec<Rat>> = subset.iter().map(|&i| ineqs[i].0 .0.clone()).collect();
            let b: Vec<Rat> = subset.iter().map(|&i| ineqs[i].1).collect();
            if let Some(inv) = crate::linalg::inverse(&a) {
                let x = crate::linalg::mat_vec(&inv, &b);
                if ineqs.iter().all(|(nrm, off)| nrm.dot(&x) <= *off) {
                    pts.push(x);
                }
            }
            // next combination
            let mut i = dim;
            loop {
                if i == 0 {
                    return Ok(Polytope::hull_unchecked(dim, pts));
                }
                i -= 1;
                if subset[i] < n - dim + i {
                    subset[i] += 1;
                    for j in i + 1..dim {
                        subset[j] = subset[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[RatVec] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Dimension of the affine hull, `None` for the empty set.
    pub fn affine_dim(&self) -> Option<usize> {
        if self.vertices.is_empty() {
            None
        } else {
            Some(affine_frame(&self.vertices, self.dim).rank)
        }
    }

    fn frame(&self) -> Frame {
        let fr = affine_frame(&self.vertices, self.dim);
        let projected = self.vertices.iter().map(|p| project(p, &fr.pivots)).collect();
        Frame { vertices: self.vertices.clone(), projected, pivots: fr.pivots }
    }

    pub fn halfspaces(&self) -> HRep {
        let dim = self.dim;
        if self.vertices.is_empty() {
            return HRep { dim, empty: true, equalities: Vec::new(), inequalities: Vec::new() };
        }
        let frame = self.frame();
        let k = frame.pivots.len();
        let base = &frame.vertices[0];
        let diffs: Vec<Vec<Rat>> = frame.vertices[1..].iter().map(|p| (p - base).0).collect();
        let mut equalities: Vec<(RatVec, Rat)> = nullspace(&diffs, dim)
            .into_iter()
            .map(|n| {
                let n = primitive(&n);
                let b = n.dot(base);
                (n, b)
            })
            .collect();
        equalities.sort();
        let lift = |n: &RatVec| {
            let mut full = RatVec::zeros(dim);
            for (j, &c) in frame.pivots.iter().enumerate() {
                full[c] = n[j];
            }
            full
        };
        let inequalities = match k {
            0 => Vec::new(),
            1 => {
                let c = frame.pivots[0];
                let lo = frame.vertices.iter().map(|v| v[c]).min().unwrap();
                let hi = frame.vertices.iter().map(|v| v[c]).max().unwrap();
                let e = RatVec::unit(dim, c);
                alloc::vec![(e.clone(), hi), (-&e, -lo)]
            }
            _ => full_hull(&frame.projected, k).planes().iter().map(|(n, b)| (lift(n), *b)).collect(),
        };
        HRep { dim, empty: false, equalities, inequalities }
    }

    pub fn contains(&self, x: &RatVec) -> bool {
        self.halfspaces().contains(x)
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Polytope) -> bool {
        let h = other.halfspaces();
        self.vertices.iter().all(|v| h.contains(v))
    }

    /// Lebesgue volume in `R^d`; zero for lower-dimensional or empty bodies.
    ///
    /// Cones from the first canonical vertex over a triangulation of the
    /// boundary, summed with exact determinants.
    pub fn volume(&self) -> Rat {
        let d = self.dim;
        if self.vertices.len() <= d {
            return Rat::ZERO;
        }
        let frame = self.frame();
        if frame.pivots.len() < d {
            return Rat::ZERO;
        }
        if d == 1 {
            return self.vertices[self.vertices.len() - 1][0] - self.vertices[0][0];
        }
        let hull = full_hull(&frame.projected, d);
        let apex = &frame.projected[0];
        let mut total = Rat::ZERO;
        for f in &hull.facets {
            if f.normal.dot(apex) == f.offset {
                continue;
            }
            let rows: Vec<Vec<Rat>> = f.verts.iter().map(|&i| (&frame.projected[i] - apex).0).collect();
            total += det(&rows).abs();
        }
        total / factorial(d)
    }

    pub fn translate(&self, v: &RatVec) -> Polytope {
        assert_eq!(v.dim(), self.dim, "translation dimension mismatch");
        let mut vertices: Vec<RatVec> = self.vertices.iter().map(|p| p + v).collect();
        vertices.sort();
        Polytope { dim: self.dim, vertices }
    }

    /// Linear image `x ↦ A x` (rows of `A`), re-hulled.
    pub fn linear_image(&self, rows: &[Vec<Rat>]) -> Polytope {
        let pts: Vec<RatVec> = self.vertices.iter().map(|p| crate::linalg::mat_vec(rows, &p.0)).collect();
        Polytope::hull_unchecked(rows.len(), pts)
    }

    /// `{t} × self` as a polytope one dimension up.
    pub fn prepend(&self, t: Rat) -> Polytope {
        Polytope { dim: self.dim + 1, vertices: self.vertices.iter().map(|v| v.insert(0, t)).collect() }
    }

    /// Largest `i`-th coordinate over the body, `None` when empty.
    pub fn max_coord(&self, i: usize) -> Option<Rat> {
        self.vertices.iter().map(|v| v[i]).max()
    }

    pub fn min_coord(&self, i: usize) -> Option<Rat> {
        self.vertices.iter().map(|v| v[i]).min()
    }
}

pub(crate) fn factorial(n: usize) -> Rat {
    Rat::int((1..=n as i128).product::<i128>().max(1))
}

/// True when `{y : normal · y <= 0 for all}` is `{0}`, i.e. the normals
/// positively span `R^dim`.
fn recession_is_trivial(dim: usize, ineqs: &[(RatVec, Rat)]) -> bool {
    let mut normals: Vec<RatVec> = ineqs.iter().map(|(n, _)| n.clone()).collect();
    normals.push(RatVec::zeros(dim));
    let hull = Polytope::hull_unchecked(dim, normals);
    if hull.affine_dim() != Some(dim) {
        return false;
    }
    let h = hull.halfspaces();
    let origin = RatVec::zeros(dim);
    h.inequalities.iter().all(|(n, b)| n.dot(&origin) < *b)
}

impl core::fmt::Debug for Polytope {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "conv[")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v:?}")?;
        }
        write!(f, "] in R^{}", self.dim)
    }
}
