//! Exact integer matrix kernels shared by the lattice layer: fraction-free
//! determinants, a diagonalization that tracks the inverse column transform
//! (enough to saturate a span), row Hermite form, and rational congruence
//! diagonalization for signatures.

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::scalar::Scalar;

/// Determinant by the Bareiss fraction-free algorithm. All intermediate
/// divisions are exact, so this stays in `T` without rationals.
pub(crate) fn det_bareiss<T: Scalar>(m: &[Vec<T>]) -> T {
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    let mut a: Vec<Vec<T>> = m.to_vec();
    let mut flipped = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(sw) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return T::zero();
            };
            a.swap(k, sw);
            flipped = !flipped;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k].clone() * a[i][j].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = num / prev.clone();
            }
            a[i][k] = T::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if flipped {
        -d
    } else {
        d
    }
}

pub(crate) fn identity<T: Scalar>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { T::one() } else { T::zero() })
                .collect()
        })
        .collect()
}

/// Result of [`diagonalize`]: `P * A * Q = diag(d)` for unimodular `P`, `Q`.
/// `P` is discarded; `qinv` is `Q^{-1}`, whose first `rank` rows form a basis
/// of the saturation of the row span of `A`, and the row lattice of `A` has
/// index `prod |d_i|` inside that saturation.
pub(crate) struct Diagonalization<T> {
    pub diag: Vec<T>,
    pub rank: usize,
    pub qinv: Vec<Vec<T>>,
}

fn min_abs_nonzero<T: Scalar>(a: &[Vec<T>], p: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(p) {
        for (j, x) in row.iter().enumerate().skip(p) {
            if x.is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some((bi, bj)) => {
                    if x.abs() < a[bi][bj].abs() {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

/// Diagonalize an integer matrix by unimodular row and column operations,
/// Smith-style but without enforcing the divisibility chain (the saturation
/// use only needs the diagonal up to units and `Q^{-1}`).
pub(crate) fn diagonalize<T: Scalar>(mut a: Vec<Vec<T>>) -> Diagonalization<T> {
    let rows = a.len();
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut qinv = identity::<T>(cols);
    let mut p = 0;
    while p < rows.min(cols) {
        let Some((bi, bj)) = min_abs_nonzero(&a, p) else {
            break;
        };
        a.swap(p, bi);
        if bj != p {
            for row in a.iter_mut() {
                row.swap(p, bj);
            }
            qinv.swap(p, bj);
        }
        let mut dirty = false;
        for i in p + 1..rows {
            if a[i][p].is_zero() {
                continue;
            }
            let q = a[i][p].div_floor(&a[p][p]);
            if !q.is_zero() {
                for c in 0..cols {
                    let t = a[p][c].clone() * q.clone();
                    a[i][c] = a[i][c].clone() - t;
                }
            }
            if !a[i][p].is_zero() {
                dirty = true;
            }
        }
        for j in p + 1..cols {
            if a[p][j].is_zero() {
                continue;
            }
            let q = a[p][j].div_floor(&a[p][p]);
            if !q.is_zero() {
                // column op: col_j -= q * col_p, mirrored on qinv as
                // row_p += q * row_j
                for row in a.iter_mut() {
                    let t = row[p].clone() * q.clone();
                    row[j] = row[j].clone() - t;
                }
                for c in 0..cols {
                    let t = qinv[j][c].clone() * q.clone();
                    qinv[p][c] = qinv[p][c].clone() + t;
                }
            }
            if !a[p][j].is_zero() {
                dirty = true;
            }
        }
        if !dirty {
            p += 1;
        }
        // otherwise some remainder survived; the minimal absolute value in
        // the trailing block strictly decreased, so the loop terminates
    }
    let diag = (0..p).map(|i| a[i][i].clone()).collect();
    Diagonalization {
        diag,
        rank: p,
        qinv,
    }
}

/// Row Hermite normal form of the row span: pivots positive, entries above a
/// pivot reduced into `[0, pivot)`, zero rows dropped. Canonical for a given
/// row lattice, which is what makes saturations comparable by `==`.
pub(crate) fn row_hnf<T: Scalar>(mut rows: Vec<Vec<T>>) -> Vec<Vec<T>> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut p = 0;
    for col in 0..ncols {
        if p >= rows.len() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for r in p..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(r),
                    Some(b) => {
                        if rows[r][col].abs() < rows[b][col].abs() {
                            best = Some(r);
                        }
                    }
                }
            }
            let Some(b) = best else {
                break;
            };
            rows.swap(p, b);
            let mut clean = true;
            let piv = rows[p][col].clone();
            for r in p + 1..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                let q = rows[r][col].div_floor(&piv);
                if !q.is_zero() {
                    for c in 0..ncols {
                        let t = rows[p][c].clone() * q.clone();
                        rows[r][c] = rows[r][c].clone() - t;
                    }
                }
                if !rows[r][col].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            if rows[p][col].is_negative() {
                for c in 0..ncols {
                    rows[p][c] = -rows[p][c].clone();
                }
            }
            let piv = rows[p][col].clone();
            for r in 0..p {
                let q = rows[r][col].div_floor(&piv);
                if !q.is_zero() {
                    for c in 0..ncols {
                        let t = rows[p][c].clone() * q.clone();
                        rows[r][c] = rows[r][c].clone() - t;
                    }
                }
            }
            p += 1;
            break;
        }
    }
    rows.truncate(p);
    rows
}

/// Signature of a symmetric integer matrix as (positive, negative, zero)
/// inertia counts, computed by congruence diagonalization over the rationals.
pub(crate) fn signature_rational<T: Scalar>(gram: &[Vec<T>]) -> (usize, usize, usize) {
    let n = gram.len();
    let mut m: Vec<Vec<Ratio<T>>> = gram
        .iter()
        .map(|row| row.iter().map(|x| Ratio::from_integer(x.clone())).collect())
        .collect();
    let (mut pos, mut neg, mut zero) = (0usize, 0usize, 0usize);
    for k in 0..n {
        if m[k][k].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !m[i][i].is_zero()) {
                m.swap(k, i);
                for row in m.iter_mut() {
                    row.swap(k, i);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !m[k][j].is_zero()) {
                // every remaining diagonal entry vanishes, so adding row/col j
                // puts 2*m[k][j] on the diagonal
                for c in 0..n {
                    let t = m[j][c].clone();
                    m[k][c] = m[k][c].clone() + t;
                }
                for r in 0..n {
                    let t = m[r][j].clone();
                    m[r][k] = m[r][k].clone() + t;
                }
            } else {
                zero += 1;
                continue;
            }
        }
        let piv = m[k][k].clone();
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = m[i][k].clone() / piv.clone();
            for c in 0..n {
                let t = f.clone() * m[k][c].clone();
                m[i][c] = m[i][c].clone() - t;
            }
            for r in 0..n {
                let t = f.clone() * m[r][k].clone();
                m[r][i] = m[r][i].clone() - t;
            }
        }
        if piv.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
    }
    (pos, neg, zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<i64>> {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn determinants() {
        assert_eq!(det_bareiss(&m(&[&[8, 1], &[1, -2]])), -17);
        assert_eq!(det_bareiss(&m(&[&[8, 1], &[1, -4]])), -33);
        assert_eq!(det_bareiss(&m(&[&[8]])), 8);
        assert_eq!(det_bareiss(&m(&[&[8, 2], &[2, 4]])), 28);
        assert_eq!(det_bareiss(&m(&[&[8, 1, 0], &[1, -2, 1], &[0, 1, -2]])), 26);
        assert_eq!(det_bareiss(&m(&[&[2, 2], &[2, 2]])), 0);
        assert_eq!(det_bareiss(&m(&[&[0, 1], &[1, 0]])), -1);
        assert_eq!(det_bareiss(&m(&[&[0, 2], &[3, 5]])), -6);
    }

    #[test]
    fn diagonalize_tracks_saturation_data() {
        let d = diagonalize(m(&[&[1, 0], &[1, 2]]));
        assert_eq!(d.rank, 2);
        let index: i64 = d.diag.iter().map(|x| x.abs()).product();
        assert_eq!(index, 2);
        assert_eq!(det_bareiss(&d.qinv).abs(), 1);

        let d = diagonalize(m(&[&[2, 4]]));
        assert_eq!(d.rank, 1);
        assert_eq!(d.diag[0].abs(), 2);
        let basis = row_hnf(vec![d.qinv[0].clone()]);
        assert_eq!(basis, m(&[&[1, 2]]));
    }

    #[test]
    fn diagonalize_zero_matrix() {
        let d = diagonalize(m(&[&[0, 0], &[0, 0]]));
        assert_eq!(d.rank, 0);
        assert!(d.diag.is_empty());
    }

    #[test]
    fn hnf_is_canonical() {
        assert_eq!(
            row_hnf(m(&[&[1, 2], &[0, 3]])),
            m(&[&[1, 2], &[0, 3]])
        );
        assert_eq!(row_hnf(m(&[&[2, 1], &[3, 1]])), m(&[&[1, 0], &[0, 1]]));
        assert_eq!(row_hnf(m(&[&[-1, 0], &[0, -1]])), m(&[&[1, 0], &[0, 1]]));
        assert_eq!(row_hnf(m(&[&[0, 0], &[0, 5]])), m(&[&[0, 5]]));
    }

    #[test]
    fn signatures() {
        assert_eq!(signature_rational(&m(&[&[8, 1], &[1, -2]])), (1, 1, 0));
        assert_eq!(signature_rational(&m(&[&[8]])), (1, 0, 0));
        assert_eq!(signature_rational(&m(&[&[8, 2], &[2, 4]])), (2, 0, 0));
        assert_eq!(signature_rational(&m(&[&[2, 2], &[2, 2]])), (1, 0, 1));
        assert_eq!(signature_rational(&m(&[&[0, 0], &[0, 0]])), (0, 0, 2));
        assert_eq!(signature_rational(&m(&[&[0, 1], &[1, 0]])), (1, 1, 0));
        assert_eq!(
            signature_rational(&m(&[&[8, 1, 0], &[1, -2, 1], &[0, 1, -2]])),
            (1, 2, 0)
        );
    }
}
