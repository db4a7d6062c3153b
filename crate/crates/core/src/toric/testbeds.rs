//! Built-in testbeds. Ray orders are part of the contract: divisor
//! coefficients and flag cones refer to them.

use alloc::vec;
use alloc::vec::Vec;

use super::{Fan, ToricError, ToricVariety};

pub const NAMES: [&str; 7] = ["p1", "p2", "p3", "p1xp1", "p1xp1xp1", "f1", "blpq-p2"];

fn build(name: &str, dim: usize, rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>>) -> ToricVariety {
    let fan = Fan::new(dim, rays, cones).expect("built-in fan is valid");
    ToricVariety::new(name, fan).expect("built-in fan is projective")
}

/// Rays `1, −1`; `N¹` basis `D_1`.
pub fn p1() -> ToricVariety {
    build("p1", 1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]])
}

/// Rays `−e1−e2, e1, e2`; `N¹` basis `D_0 = H`.
pub fn p2() -> ToricVariety {
    build("p2", 2, vec![vec![-1, -1], vec![1, 0], vec![0, 1]], vec![vec![1, 2], vec![2, 0], vec![0, 1]])
}

/// Rays `e1, e2, e3, −e1−e2−e3`; `N¹` basis `D_3 = H`.
pub fn p3() -> ToricVariety {
    build(
        "p3",
        3,
        vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![-1, -1, -1]],
        vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
    )
}

/// Rays `e1, −e1, e2, −e2`; `N¹` basis `(D_1, D_3)` so `(a, b)` is `O(a, b)`.
pub fn p1xp1() -> ToricVariety {
    build(
        "p1xp1",
        2,
        vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]],
        vec![vec![0, 2], vec![2, 1], vec![1, 3], vec![3, 0]],
    )
}

/// Rays `e1, −e1, e2, −e2, e3, −e3`; `N¹` basis `(D_1, D_3, D_5)`.
pub fn p1xp1xp1() -> ToricVariety {
    let mut rays = Vec::new();
    for i in 0..3 {
        for s in [1, -1] {
            let mut r = vec![0; 3];
            r[i] = s;
            rays.push(r);
        }
    }
    let mut cones = Vec::new();
    for mask in 0..8usize {
        cones.push((0..3).map(|i| 2 * i + ((mask >> i) & 1)).collect());
    }
    build("p1xp1xp1", 3, rays, cones)
}

/// Hirzebruch surface `F_1`: rays `e2, −e1−e2, e1, e1+e2`.
/// `N¹` basis `(D_2, D_3) = (H − E, E)`, so `aH − bE` has coordinates `(a, a − b)`.
pub fn f1() -> ToricVariety {
    build(
        "f1",
        2,
        vec![vec![0, 1], vec![-1, -1], vec![1, 0], vec![1, 1]],
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
    )
}

/// `P²` blown up at two torus-fixed points: rays `e2, −e1, −e1−e2, e1, e1+e2`.
/// Ray 4 is `E_1`, ray 1 is `E_2`; `N¹` basis `(D_2, D_3, D_4) = (H − E_2, H − E_1, E_1)`.
pub fn blpq_p2() -> ToricVariety {
    build(
        "blpq-p2",
        2,
        vec![vec![0, 1], vec![-1, 0], vec![-1, -1], vec![1, 0], vec![1, 1]],
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 0]],
    )
}

pub fn builtin(name: &str) -> Result<ToricVariety, ToricError> {
    match name {
        "p1" => Ok(p1()),
        "p2" => Ok(p2()),
        "p3" => Ok(p3()),
        "p1xp1" => Ok(p1xp1()),
        "p1xp1xp1" => Ok(p1xp1xp1()),
        "f1" => Ok(f1()),
        "blpq-p2" => Ok(blpq_p2()),
        other => Err(ToricError::UnknownTestbed(other.into())),
    }
}
