use super::ToricError;
use crate::exactgeom::Polytope;
use crate::rat::Rat;

/// A smooth projective curve seen only through degrees of divisors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CurveModel;

impl CurveModel {
    /// The body of a degree-`q` divisor is `[0, q]`; big means `q > 0`.
    pub fn body(&self, degree: Rat) -> Result<Polytope, ToricError> {
        if !degree.is_positive() {
            return Err(ToricError::NotBig);
        }
        Ok(Polytope::cuboid(&[(Rat::ZERO, degree)]))
    }

    pub fn volume(&self, degree: Rat) -> Rat {
        degree
    }
}
