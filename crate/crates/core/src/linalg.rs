//! Exact Gaussian elimination over [`Rat`].

use alloc::vec::Vec;

use crate::rat::{Rat, RatVec};

/// Reduced row echelon form. Returns the reduced rows (zero rows dropped)
/// and the pivot column of each.
pub fn rref(rows: &[Vec<Rat>], ncols: usize) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = *x * inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c];
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= f * *p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Rat>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : rows · x = 0}`.
pub fn nullspace(rows: &[Vec<Rat>], ncols: usize) -> Vec<RatVec> {
    let (m, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = RatVec::zeros(ncols);
            v[f] = Rat::ONE;
            for (row, &p) in m.iter().zip(&pivots) {
                v[p] = -row[f];
            }
            v
        })
        .collect()
}

/// Solves `a · x = b`. Returns `None` when inconsistent; free variables
/// are set to zero when the solution is not unique.
pub fn solve(a: &[Vec<Rat>], b: &[Rat], ncols: usize) -> Option<RatVec> {
    assert_eq!(a.len(), b.len());
    let aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(*bi);
            r
        })
        .collect();
    let (m, pivots) = rref(&aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = RatVec::zeros(ncols);
    for (row, &p) in m.iter().zip(&pivots) {
        x[p] = row[ncols];
    }
    Some(x)
}

/// Determinant of a square matrix.
pub fn det(rows: &[Vec<Rat>]) -> Rat {
    let n = rows.len();
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let mut result = Rat::ONE;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rat::ZERO;
        };
        if p != c {
            m.swap(p, c);
            result = -result;
        }
        let piv = m[c][c];
        result = result * piv;
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = m[i][c] / piv;
                let (top, bottom) = m.split_at_mut(i);
                for (a, b) in bottom[0][c..n].iter_mut().zip(&top[c][c..n]) {
                    *a -= f * *b;
                }
            }
        }
    }
    result
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse(rows: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = rows.len();
    let aug: Vec<Vec<Rat>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Rat::ONE } else { Rat::ZERO }));
            row
        })
        .collect();
    let (m, pivots) = rref(&aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn transpose(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    (0..ncols).map(|c| rows.iter().map(|r| r[c]).collect()).collect()
}

pub fn mat_vec(rows: &[Vec<Rat>], v: &[Rat]) -> RatVec {
    RatVec(rows.iter().map(|r| crate::rat::dot(r, v)).collect())
}

/// Scales a nonzero vector to a primitive integer vector with the same direction.
pub fn primitive(v: &RatVec) -> RatVec {
    use num_integer::Integer;
    let l = crate::rat::common_denominator(v.iter());
    let ints: Vec<i128> = v.iter().map(|x| (*x * Rat::int(l)).numer()).collect();
    let g = ints.iter().fold(0i128, |acc, x| acc.gcd(x));
    if g == 0 {
        return v.clone();
    }
    RatVec(ints.into_iter().map(|x| Rat::int(x / g)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter().map(|r| r.iter().map(|&x| Rat::from(x)).collect()).collect()
    }

    #[test]
    fn determinant_of_unimodular_matrix() {
        assert_eq!(det(&m(&[&[-1, -1], &[1, 0]])), Rat::ONE);
        assert_eq!(det(&m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])), Rat::ZERO);
        assert_eq!(det(&m(&[&[2, 0, 0], &[0, 3, 0], &[1, 1, 1]])), Rat::int(6));
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, m(&[&[1, -1], &[-1, 2]]));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn nullspace_of_plane() {
        let ns = nullspace(&m(&[&[1, 1, 1]]), 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(crate::rat::dot(&v.0, &[Rat::ONE; 3]).is_zero());
        }
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = m(&[&[1, 0], &[1, 0]]);
        assert!(solve(&a, &[Rat::ONE, Rat::int(2)], 2).is_none());
        let x = solve(&a, &[Rat::ONE, Rat::ONE], 2).unwrap();
        assert_eq!(x, RatVec(vec![Rat::ONE, Rat::ZERO]));
    }

    #[test]
    fn primitive_clears_denominators() {
        let v = RatVec(vec![Rat::new(1, 2), Rat::new(-3, 4)]);
        assert_eq!(primitive(&v), RatVec::from_ints([2, -3]));
    }
}
