//! Incremental beneath-beyond hull for full-dimensional point sets.
//!
//! The boundary is kept as a simplicial complex whose cells may be
//! coplanar. A point lying on the plane of a facet is treated as beneath
//! it, so the complex never contains flipped or overlapping cells.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::linalg::{nullspace, primitive, rank};
use crate::rat::{Rat, RatVec};

pub(crate) struct Facet {
    /// Sorted point indices spanning the facet.
    pub verts: Vec<usize>,
    /// Outward normal: `normal · x <= offset` on the hull.
    pub normal: RatVec,
    pub offset: Rat,
}

pub(crate) struct FullHull {
    pub facets: Vec<Facet>,
}

fn facet_through(points: &[RatVec], verts: Vec<usize>, interior: &RatVec) -> Facet {
    let base = &points[verts[0]];
    let rows: Vec<Vec<Rat>> = verts[1..].iter().map(|&i| (&points[i] - base).0).collect();
    let dim = base.dim();
    let ns = nullspace(&rows, dim);
    debug_assert_eq!(ns.len(), 1, "degenerate facet");
    let mut normal = primitive(&ns[0]);
    let mut offset = normal.dot(base);
    if normal.dot(interior) > offset {
        normal = -&normal;
        offset = -offset;
    }
    Facet { verts, normal, offset }
}

/// Indices of `dim + 1` affinely independent points, chosen greedily.
fn initial_simplex(points: &[RatVec], dim: usize) -> Vec<usize> {
    let mut chosen = alloc::vec![0usize];
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for i in 1..points.len() {
        if chosen.len() == dim + 1 {
            break;
        }
        let mut trial = rows.clone();
        trial.push((&points[i] - &points[0]).0);
        if rank(&trial, dim) == trial.len() {
            rows = trial;
            chosen.push(i);
        }
    }
    assert_eq!(chosen.len(), dim + 1, "point set is not full-dimensional");
    chosen
}

/// Hull of distinct points affinely spanning `R^dim`, `dim >= 2`.
pub(crate) fn full_hull(points: &[RatVec], dim: usize) -> FullHull {
    let simplex = initial_simplex(points, dim);
    let inv = Rat::new(1, (dim + 1) as i128);
    let mut interior = RatVec::zeros(dim);
    for &i in &simplex {
        interior = &interior + &points[i];
    }
    let interior = interior.scale(inv);

    let mut facets: Vec<Facet> = Vec::new();
    for skip in 0..simplex.len() {
        let mut verts: Vec<usize> = simplex.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, &v)| v).collect();
        verts.sort_unstable();
        facets.push(facet_through(points, verts, &interior));
    }

    // Farther points first shrinks the number of later visible-facet passes.
    let mut order: Vec<usize> = (0..points.len()).filter(|i| !simplex.contains(i)).collect();
    order.sort_by_cached_key(|&i| {
        let d = &points[i] - &interior;
        core::cmp::Reverse(d.dot(&d))
    });

    for p in order {
        let pt = &points[p];
        let visible: Vec<bool> = facets.iter().map(|f| f.normal.dot(pt) > f.offset).collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut ridge_count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for (f, _) in facets.iter().zip(&visible).filter(|(_, v)| **v) {
            for skip in 0..f.verts.len() {
                let ridge: Vec<usize> = f.verts.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, &v)| v).collect();
                *ridge_count.entry(ridge).or_insert(0) += 1;
            }
        }
        let mut kept: Vec<Facet> = facets
            .into_iter()
            .zip(visible)
            .filter(|(_, v)| !*v)
            .map(|(f, _)| f)
            .collect();
        for (ridge, count) in ridge_count {
            if count == 1 {
                let mut verts = ridge;
                verts.push(p);
                verts.sort_unstable();
                kept.push(facet_through(points, verts, &interior));
            }
        }
        facets = kept;
    }
    FullHull { facets }
}

impl FullHull {
    /// Distinct supporting planes, as primitive `(normal, offset)` pairs.
    pub fn planes(&self) -> Vec<(RatVec, Rat)> {
        let mut planes: Vec<(RatVec, Rat)> = self.facets.iter().map(|f| (f.normal.clone(), f.offset)).collect();
        planes.sort();
        planes.dedup();
        planes
    }

    /// Indices of the extreme points among `points`.
    pub fn extreme_points(&self, points: &[RatVec], dim: usize) -> Vec<usize> {
        let planes = self.planes();
        let mut on_boundary: Vec<usize> = self.facets.iter().flat_map(|f| f.verts.iter().copied()).collect();
        on_boundary.sort_unstable();
        on_boundary.dedup();
        on_boundary
            .into_iter()
            .filter(|&i| {
                let tight: Vec<Vec<Rat>> = planes
                    .iter()
                    .filter(|(n, b)| n.dot(&points[i]) == *b)
                    .map(|(n, _)| n.0.clone())
                    .collect();
                rank(&tight, dim) == dim
            })
            .collect()
    }
}
