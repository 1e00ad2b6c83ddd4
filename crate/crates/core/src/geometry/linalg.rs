use super::RationalPoint;
use crate::rational::Q;
use num_traits::{One, Zero};

/// Row-reduce `rows` in place to reduced echelon form; returns pivot columns.
pub fn row_reduce(rows: &mut [Vec<Q>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Q::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..ncols {
                    let t = &f * &rows[r][j];
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m).len()
}

/// Determinant by Gaussian elimination over the rationals.
pub fn determinant(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    det
}

/// Rank of the differences to the first point (0 for a single point).
pub fn affine_rank(points: &[RationalPoint]) -> usize {
    match points.split_first() {
        None => 0,
        Some((first, rest)) => rank(&rest.iter().map(|p| p.sub(first)).collect::<Vec<_>>()),
    }
}

/// Affine hull `origin + span(basis)` of a point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineHull {
    pub origin: RationalPoint,
    /// reduced row echelon basis of the direction space
    pub basis: Vec<Vec<Q>>,
    /// indices of input points that are affinely independent and span the hull
    pub spanning: Vec<usize>,
}

impl AffineHull {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn affine_hull(points: &[RationalPoint]) -> Option<AffineHull> {
    let (first, rest) = points.split_first()?;
    let diffs: Vec<Vec<Q>> = rest.iter().map(|p| p.sub(first)).collect();
    let mut basis = diffs.clone();
    let piv = row_reduce(&mut basis);
    basis.truncate(piv.len());
    // greedy choice of spanning points
    let mut spanning = vec![0];
    let mut chosen: Vec<Vec<Q>> = Vec::new();
    for (i, d) in diffs.iter().enumerate() {
        if chosen.len() == piv.len() {
            break;
        }
        chosen.push(d.clone());
        if rank(&chosen) == chosen.len() {
            spanning.push(i + 1);
        } else {
            chosen.pop();
        }
    }
    Some(AffineHull {
        origin: first.clone(),
        basis,
        spanning,
    })
}

/// Solve `a x = b` for square nonsingular `a`.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = row_reduce(&mut m);
    if piv.len() != n || piv.iter().any(|&c| c >= n) {
        return None;
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn pt(xs: &[i64]) -> RationalPoint {
        RationalPoint(xs.iter().map(|&x| qi(x)).collect())
    }

    #[test]
    fn ranks() {
        assert_eq!(affine_rank(&[pt(&[1, 2])]), 0);
        assert_eq!(affine_rank(&[pt(&[0, 0]), pt(&[1, 1]), pt(&[2, 2])]), 1);
        assert_eq!(
            affine_rank(&[pt(&[0, 0, 0]), pt(&[1, 0, 0]), pt(&[0, 1, 0]), pt(&[0, 0, 1])]),
            3
        );
    }

    #[test]
    fn determinants() {
        let m = vec![
            vec![qi(2), qi(0), qi(1)],
            vec![qi(1), qi(3), qi(2)],
            vec![qi(1), qi(1), qi(1)],
        ];
        assert_eq!(determinant(&m), qi(2 * 1 - 0 + (1 - 3)));
        let s = vec![vec![qi(0), qi(1)], vec![qi(1), qi(0)]];
        assert_eq!(determinant(&s), qi(-1));
    }

    #[test]
    fn affine_hull_of_a_line() {
        let h = affine_hull(&[pt(&[0, 0]), pt(&[2, 2]), pt(&[1, 1])]).unwrap();
        assert_eq!(h.dim(), 1);
        assert_eq!(h.basis, vec![vec![qi(1), qi(1)]]);
        assert_eq!(h.spanning, vec![0, 1]);
    }

    #[test]
    fn solves() {
        let a = vec![vec![qi(2), qi(1)], vec![qi(1), qi(3)]];
        assert_eq!(solve(&a, &[qi(3), qi(5)]).unwrap(), vec![q(4, 5), q(7, 5)]);
        assert!(solve(&[vec![qi(1), qi(1)], vec![qi(2), qi(2)]], &[qi(1), qi(2)]).is_none());
    }
}
