use alloc::vec::Vec;

use super::{minkowski_sum, mixed_volume, scale_unchecked, GeomError, Polytope};
use crate::rat::Rat;

/// A formal difference `positive − negative` of convex bodies.
///
/// No canonical form exists; two values are equal when
/// `P + Q' = P' + Q` (the cancellation law for convex bodies).
#[derive(Clone, Debug)]
pub struct FormalBody {
    pub positive: Polytope,
    pub negative: Polytope,
}

impl FormalBody {
    pub fn new(positive: Polytope, negative: Polytope) -> Result<FormalBody, GeomError> {
        if positive.dim() != negative.dim() {
            return Err(GeomError::DimensionMismatch { expected: positive.dim(), found: negative.dim() });
        }
        Ok(FormalBody { positive, negative })
    }

    pub fn from_body(body: Polytope) -> FormalBody {
        let dim = body.dim();
        FormalBody { positive: body, negative: Polytope::origin(dim) }
    }

    pub fn zero(dim: usize) -> FormalBody {
        FormalBody { positive: Polytope::origin(dim), negative: Polytope::origin(dim) }
    }

    pub fn dim(&self) -> usize {
        self.positive.dim()
    }

    pub fn add(&self, other: &FormalBody) -> Result<FormalBody, GeomError> {
        Ok(FormalBody {
            positive: minkowski_sum(&self.positive, &other.positive)?,
            negative: minkowski_sum(&self.negative, &other.negative)?,
        })
    }

    /// Multiplication by any rational; a negative factor swaps the sides.
    pub fn scale(&self, c: Rat) -> FormalBody {
        if c.is_negative() {
            FormalBody { positive: scale_unchecked(&self.negative, -c), negative: scale_unchecked(&self.positive, -c) }
        } else {
            FormalBody { positive: scale_unchecked(&self.positive, c), negative: scale_unchecked(&self.negative, c) }
        }
    }

    pub fn neg(&self) -> FormalBody {
        FormalBody { positive: self.negative.clone(), negative: self.positive.clone() }
    }

    /// Equality in the vector space of formal differences.
    pub fn equivalent(&self, other: &FormalBody) -> Result<bool, GeomError> {
        let lhs = minkowski_sum(&self.positive, &other.negative)?;
        let rhs = minkowski_sum(&other.positive, &self.negative)?;
        Ok(lhs == rhs)
    }

    /// `Some(P)` when the value is represented by a genuine convex body.
    pub fn as_body(&self) -> Option<&Polytope> {
        let origin = Polytope::origin(self.dim());
        (self.negative == origin).then_some(&self.positive)
    }
}

/// Mixed volume extended multilinearly to formal differences.
pub fn formal_mixed_volume(args: &[&FormalBody]) -> Result<Rat, GeomError> {
    let d = args.len();
    let mut total = Rat::ZERO;
    for mask in 0usize..(1 << d) {
        let picks: Vec<&Polytope> = args
            .iter()
            .enumerate()
            .map(|(j, f)| if mask & (1 << j) == 0 { &f.positive } else { &f.negative })
            .collect();
        // a single point in any slot contributes zero
        if picks.iter().any(|p| p.vertices().len() <= 1) {
            continue;
        }
        let v = mixed_volume(&picks)?;
        // one sign per slot drawn from the negative side
        if mask.count_ones() % 2 == 0 {
            total += v;
        } else {
            total -= v;
        }
    }
    Ok(total)
}
