//! Exact Gaussian elimination over a [`Scalar`] field.

use crate::scalar::Scalar;

/// Reduces `rows` in place to reduced row echelon form and returns the pivot
/// columns.
pub fn row_reduce<S: Scalar>(rows: &mut [Vec<S>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inverse().expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = x.clone() - f.clone() * y.clone();
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank<S: Scalar>(rows: &[Vec<S>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m).len()
}

/// Basis of `{x : M x = 0}` for an `m × ncols` matrix.
pub fn kernel<S: Scalar>(rows: &[Vec<S>], ncols: usize) -> Vec<Vec<S>> {
    let mut m = rows.to_vec();
    let pivots = row_reduce(&mut m);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![S::zero(); ncols];
            v[free] = S::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][free].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Gf;
    use num_rational::BigRational;

    fn q(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter().map(|r| r.iter().map(|&x| BigRational::from_i64(x)).collect()).collect()
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&q(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&q(&[&[1, 2, 3], &[0, 1, 1], &[1, 3, 5]])), 3);
        assert_eq!(rank::<BigRational>(&[]), 0);
        let gf: Vec<Vec<Gf<3>>> = vec![vec![Gf::new(1), Gf::new(1)], vec![Gf::new(2), Gf::new(-1)]];
        assert_eq!(rank(&gf), 1);
    }

    #[test]
    fn kernels_are_annihilated() {
        let m = q(&[&[1, 2, 3, 4], &[2, 4, 7, 9]]);
        let k = kernel(&m, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            for row in &m {
                let dot = row.iter().zip(v).fold(BigRational::from_i64(0), |a, (x, y)| a + x * y);
                assert_eq!(dot, BigRational::from_i64(0));
            }
        }
    }
}
