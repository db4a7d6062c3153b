//! Smooth projective toric varieties: fans, torus-invariant divisors,
//! numerical classes, positivity cones, flags and intersection numbers.

mod cone;
mod curve;
mod fan;
mod flag;
pub mod testbeds;

use alloc::string::String;
use alloc::vec::Vec;

pub use cone::{ConePosition, RatCone};
pub use curve::CurveModel;
pub use fan::{Fan, Wall};
pub use flag::{AdmissibleFlag, FlagCorrespondence, StarVariety};

use crate::exactgeom::{factorial, mixed_volume, GeomError, Polytope};
use crate::linalg::{inverse, mat_vec};
use crate::rat::{Rat, RatVec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ToricError {
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("maximal cone {cone} is not smooth (determinant {det})")]
    NotSmooth { cone: usize, det: Rat },
    #[error("fan is not projective (nef cone is not full-dimensional)")]
    NotProjective,
    #[error("expected {expected} coefficients, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("divisor in slot {0} is not nef")]
    NotNef(usize),
    #[error("class is not big")]
    NotBig,
    #[error("class is not ample")]
    NotAmple,
    #[error("rays {0:?} do not form a maximal cone")]
    NotAMaxCone(Vec<usize>),
    #[error("lattice point lies outside the divisor polytope")]
    OutsidePolytope,
    #[error("divisor polytope is empty")]
    EmptyPolytope,
    #[error("no positive bound: the class never leaves the big cone")]
    MuUnbounded,
    #[error("a one-dimensional variety has no proper flag divisor to restrict to")]
    NoRestriction,
    #[error("unknown testbed {0:?}")]
    UnknownTestbed(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// A torus-invariant Q-divisor `Σ a_ρ D_ρ`, one coefficient per ray.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TDivisor {
    pub coeffs: Vec<Rat>,
}

impl TDivisor {
    pub fn new(coeffs: Vec<Rat>) -> TDivisor {
        TDivisor { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> TDivisor {
        TDivisor { coeffs: coeffs.iter().map(|&c| Rat::from(c)).collect() }
    }

    pub fn zero(n: usize) -> TDivisor {
        TDivisor { coeffs: alloc::vec![Rat::ZERO; n] }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &TDivisor) -> TDivisor {
        TDivisor { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| *a + *b).collect() }
    }

    pub fn sub(&self, other: &TDivisor) -> TDivisor {
        TDivisor { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| *a - *b).collect() }
    }

    pub fn scale(&self, c: Rat) -> TDivisor {
        TDivisor { coeffs: self.coeffs.iter().map(|a| *a * c).collect() }
    }

    /// Least positive integer `p` with `p·D` integral.
    pub fn denominator(&self) -> i128 {
        crate::rat::common_denominator(self.coeffs.iter())
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }
}

/// A smooth projective toric variety with its Néron–Severi data.
///
/// `N¹` coordinates: the first maximal cone is the reference cone, and the
/// ray divisors outside it form a basis of `N¹`. A class has coordinates
/// equal to the coefficients of the unique representative vanishing on the
/// reference rays.
#[derive(Clone, Debug)]
pub struct ToricVariety {
    name: String,
    fan: Fan,
    ref_cone: Vec<usize>,
    basis_rays: Vec<usize>,
    /// `rho × n` matrix sending ray coefficients to class coordinates.
    class_matrix: Vec<Vec<Rat>>,
    eff: RatCone,
    nef: RatCone,
    walls: Vec<Wall>,
}

impl ToricVariety {
    pub fn new(name: impl Into<String>, fan: Fan) -> Result<ToricVariety, ToricError> {
        let n = fan.num_rays();
        let ref_cone = fan.max_cones()[0].clone();
        let basis_rays: Vec<usize> = (0..n).filter(|i| !ref_cone.contains(i)).collect();
        let rho = basis_rays.len();
        let b = fan::ray_rows(fan.rays(), &ref_cone);
        let b_inv = inverse(&b).expect("smooth cone");
        let mut class_matrix = alloc::vec![alloc::vec![Rat::ZERO; n]; rho];
        for col in 0..n {
            let mut a = alloc::vec![Rat::ZERO; n];
            a[col] = Rat::ONE;
            let rhs: Vec<Rat> = ref_cone.iter().map(|&i| -a[i]).collect();
            let u = mat_vec(&b_inv, &rhs);
            for (j, &r) in basis_rays.iter().enumerate() {
                class_matrix[j][col] = a[r] + u.dot(&fan.ray(r));
            }
        }
        let ray_classes: Vec<RatVec> =
            (0..n).map(|c| RatVec(class_matrix.iter().map(|row| row[c]).collect())).collect();
        let eff = RatCone::from_generators(rho, &ray_classes).ok_or(ToricError::NotProjective)?;
        let mut x = ToricVariety {
            name: name.into(),
            fan,
            ref_cone,
            basis_rays,
            class_matrix,
            eff: eff.clone(),
            nef: eff,
            walls: Vec::new(),
        };
        let functionals = x.convexity_functionals();
        x.nef = RatCone::from_inequalities(rho, &functionals).ok_or(ToricError::NotProjective)?;
        x.walls = x.fan.walls();
        Ok(x)
    }

    /// For every maximal cone `σ` and ray `ρ ∉ σ`, the class functional
    /// `D ↦ ⟨u_σ, v_ρ⟩ + a_ρ` where `u_σ` is the linear piece of the support
    /// function on `σ`. `D` is nef iff all are nonnegative.
    fn convexity_functionals(&self) -> Vec<RatVec> {
        let rho = self.rho();
        let mut out = Vec::new();
        for sigma in self.fan.max_cones() {
            let b = fan::ray_rows(self.fan.rays(), sigma);
            let b_inv = inverse(&b).expect("smooth cone");
            for r in 0..self.fan.num_rays() {
                if sigma.contains(&r) {
                    continue;
                }
                let f = RatVec(
                    (0..rho)
                        .map(|j| {
                            let d = self.lift(&RatVec::unit(rho, j));
                            let rhs: Vec<Rat> = sigma.iter().map(|&i| -d.coeffs[i]).collect();
                            let u = mat_vec(&b_inv, &rhs);
                            u.dot(&self.fan.ray(r)) + d.coeffs[r]
                        })
                        .collect(),
                );
                if !f.is_zero() {
                    out.push(crate::linalg::primitive(&f));
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn dim(&self) -> usize {
        self.fan.dim()
    }

    pub fn num_rays(&self) -> usize {
        self.fan.num_rays()
    }

    /// Picard number.
    pub fn rho(&self) -> usize {
        self.basis_rays.len()
    }

    pub fn basis_rays(&self) -> &[usize] {
        &self.basis_rays
    }

    pub fn reference_cone(&self) -> &[usize] {
        &self.ref_cone
    }

    pub fn eff_cone(&self) -> &RatCone {
        &self.eff
    }

    pub fn nef_cone(&self) -> &RatCone {
        &self.nef
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    fn check_len(&self, d: &TDivisor) -> Result<(), ToricError> {
        if d.len() != self.num_rays() {
            return Err(ToricError::WrongLength { expected: self.num_rays(), found: d.len() });
        }
        Ok(())
    }

    pub fn ray_divisor(&self, i: usize) -> TDivisor {
        let mut d = TDivisor::zero(self.num_rays());
        d.coeffs[i] = Rat::ONE;
        d
    }

    pub fn class_of(&self, d: &TDivisor) -> Result<RatVec, ToricError> {
        self.check_len(d)?;
        Ok(mat_vec(&self.class_matrix, &d.coeffs))
    }

    /// The representative supported on the basis rays.
    pub fn lift(&self, class: &RatVec) -> TDivisor {
        let mut d = TDivisor::zero(self.num_rays());
        for (j, &r) in self.basis_rays.iter().enumerate() {
            d.coeffs[r] = class[j];
        }
        d
    }

    /// Reads a coefficient list either as `N¹` coordinates (length `rho`) or
    /// as ray coefficients (length = number of rays). When both lengths agree
    /// the ray reading wins.
    pub fn divisor_from_input(&self, coeffs: &[Rat]) -> Result<TDivisor, ToricError> {
        if coeffs.len() == self.num_rays() {
            Ok(TDivisor::new(coeffs.to_vec()))
        } else if coeffs.len() == self.rho() {
            Ok(self.lift(&RatVec(coeffs.to_vec())))
        } else {
            Err(ToricError::WrongLength { expected: self.num_rays(), found: coeffs.len() })
        }
    }

    /// `D + div(χ^w)`: a linearly equivalent divisor.
    pub fn shift(&self, d: &TDivisor, w: &RatVec) -> TDivisor {
        TDivisor {
            coeffs: d.coeffs.iter().enumerate().map(|(r, a)| *a + w.dot(&self.fan.ray(r))).collect(),
        }
    }

    pub fn is_nef(&self, class: &RatVec) -> bool {
        self.nef.contains(class)
    }

    pub fn is_ample(&self, class: &RatVec) -> bool {
        self.nef.contains_interior(class)
    }

    pub fn is_big(&self, class: &RatVec) -> bool {
        self.eff.contains_interior(class)
    }

    pub fn is_pseudo_effective(&self, class: &RatVec) -> bool {
        self.eff.contains(class)
    }

    pub fn boundary_membership(&self, class: &RatVec) -> ConePosition {
        self.eff.position(class)
    }

    /// `P_D = {u : ⟨u, v_ρ⟩ ≥ −a_ρ}`.
    pub fn polytope_of_divisor(&self, d: &TDivisor) -> Result<Polytope, ToricError> {
        self.check_len(d)?;
        let ineqs: Vec<(RatVec, Rat)> =
            (0..self.num_rays()).map(|r| (-&self.fan.ray(r), d.coeffs[r])).collect();
        Ok(Polytope::from_inequalities(self.dim(), &ineqs)?)
    }

    /// Top intersection product of nef divisors as `d!·V(P_{D_1},…,P_{D_d})`.
    pub fn intersection_number(&self, divisors: &[TDivisor]) -> Result<Rat, ToricError> {
        let d = self.dim();
        if divisors.len() != d {
            return Err(ToricError::WrongLength { expected: d, found: divisors.len() });
        }
        let mut polys = Vec::with_capacity(d);
        for (i, div) in divisors.iter().enumerate() {
            if !self.is_nef(&self.class_of(div)?) {
                return Err(ToricError::NotNef(i));
            }
            polys.push(self.polytope_of_divisor(div)?);
        }
        let refs: Vec<&Polytope> = polys.iter().collect();
        Ok(mixed_volume(&refs)? * factorial(d))
    }

    /// `D · C` for every torus-invariant curve, in wall order.
    pub fn curve_degrees(&self, d: &TDivisor) -> Result<Vec<Rat>, ToricError> {
        self.check_len(d)?;
        Ok(self.walls.iter().map(|w| crate::rat::dot(&w.degrees, &d.coeffs)).collect())
    }

    /// `sup{s > 0 : M − s·E big}`, with `M` big.
    pub fn mu(&self, m: &RatVec, e: &RatVec) -> Result<Rat, ToricError> {
        if !self.is_big(m) {
            return Err(ToricError::NotBig);
        }
        self.eff
            .facets()
            .iter()
            .filter(|n| n.dot(e).is_positive())
            .map(|n| n.dot(m) / n.dot(e))
            .min()
            .ok_or(ToricError::MuUnbounded)
    }
}
