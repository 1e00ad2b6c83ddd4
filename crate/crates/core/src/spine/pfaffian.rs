use super::SpineSpec;
use crate::error::{Error, Result};
use crate::geometry::linalg::determinant;
use crate::rational::{factorial, Q};
use num_traits::{One, Zero};

const MAX_PFAFFIAN_SIZE: usize = 10;

/// Closed form `1/k! ∏_{i<j} (e_i - e_j)/(e_i + e_j)` with `e` descending.
pub fn pfaffian_product(spec: &SpineSpec) -> Result<Q> {
    let e = spec.descending();
    let k = e.len();
    let mut prod = Q::one();
    for i in 0..k {
        for j in i + 1..k {
            prod *= Q::new((e[i] - e[j]).into(), (e[i] + e[j]).into());
        }
    }
    Ok(prod / Q::from_integer(factorial(k as u64).into()))
}

/// `A_ij = (y_i - y_j)/(y_i + y_j)`, bordered by a row and column of ones
/// when the size is odd so that the Pfaffian is the same product.
pub fn schur_pfaffian_matrix(ys: &[u32]) -> Vec<Vec<Q>> {
    let k = ys.len();
    let size = k + k % 2;
    let mut a = vec![vec![Q::zero(); size]; size];
    for i in 0..k {
        for j in 0..k {
            if i != j {
                a[i][j] = Q::new(
                    (i64::from(ys[i]) - i64::from(ys[j])).into(),
                    (i64::from(ys[i]) + i64::from(ys[j])).into(),
                );
            }
        }
        if size > k {
            a[i][k] = Q::one();
            a[k][i] = -Q::one();
        }
    }
    a
}

/// Volume via the Pfaffian of [`schur_pfaffian_matrix`], divided by `k!`.
pub fn pfaffian_volume(spec: &SpineSpec) -> Result<Q> {
    let e = spec.descending();
    let pf = pfaffian_eval(&schur_pfaffian_matrix(&e))?;
    Ok(pf / Q::from_integer(factorial(e.len() as u64).into()))
}

/// Pfaffian by expansion along the first row; `Pf(A)^2 = det A` is checked.
pub fn pfaffian_eval(a: &[Vec<Q>]) -> Result<Q> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::invalid("Pfaffian needs a square matrix"));
    }
    if n % 2 == 1 {
        return Err(Error::invalid("Pfaffian needs an even-sized matrix"));
    }
    if n > MAX_PFAFFIAN_SIZE {
        return Err(Error::Capacity {
            what: "Pfaffian size",
            limit: MAX_PFAFFIAN_SIZE,
            got: n,
        });
    }
    for i in 0..n {
        for j in 0..=i {
            if a[i][j] != -a[j][i].clone() {
                return Err(Error::invalid(format!("matrix is not antisymmetric at ({i},{j})")));
            }
        }
    }
    let idx: Vec<usize> = (0..n).collect();
    let pf = expand(a, &idx);
    if &pf * &pf != determinant(a) {
        return Err(Error::Inconsistency("Pf(A)^2 differs from det(A)".into()));
    }
    Ok(pf)
}

fn expand(a: &[Vec<Q>], idx: &[usize]) -> Q {
    if idx.is_empty() {
        return Q::one();
    }
    let first = idx[0];
    let mut total = Q::zero();
    for (pos, &j) in idx.iter().enumerate().skip(1) {
        if a[first][j].is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&x| x != j).collect();
        let term = &a[first][j] * expand(a, &rest);
        // sign (-1)^(pos+1) for the pair (first, j) at 0-based position pos
        if pos % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use proptest::prelude::*;

    fn spec(e: &[u32]) -> SpineSpec {
        SpineSpec::new(e.to_vec()).unwrap()
    }

    #[test]
    fn closed_forms() {
        assert_eq!(pfaffian_product(&spec(&[2, 1])).unwrap(), q(1, 6));
        assert_eq!(pfaffian_product(&spec(&[3, 2, 1])).unwrap(), q(1, 180));
        assert_eq!(pfaffian_product(&spec(&[5, 4, 3])).unwrap(), q(1, 1512));
        assert_eq!(pfaffian_product(&spec(&[3, 4, 5])).unwrap(), q(1, 1512));
    }

    #[test]
    fn small_pfaffians() {
        let a = vec![vec![qi(0), qi(7)], vec![qi(-7), qi(0)]];
        assert_eq!(pfaffian_eval(&a).unwrap(), qi(7));
        let mut b = vec![vec![qi(0); 4]; 4];
        b[0][1] = qi(2);
        b[1][0] = qi(-2);
        b[2][3] = qi(5);
        b[3][2] = qi(-5);
        assert_eq!(pfaffian_eval(&b).unwrap(), qi(10));
        let not = vec![vec![qi(0), qi(1)], vec![qi(1), qi(0)]];
        assert!(pfaffian_eval(&not).is_err());
        assert!(pfaffian_eval(&[vec![qi(0)]]).is_err());
    }

    #[test]
    fn schur_identity() {
        let ys = [5, 4, 3, 2];
        let mut prod = Q::one();
        for i in 0..4 {
            for j in i + 1..4 {
                prod *= Q::new((ys[i] - ys[j]).into(), (ys[i] + ys[j]).into());
            }
        }
        assert_eq!(pfaffian_eval(&schur_pfaffian_matrix(&ys)).unwrap(), prod);
        for e in [&[1, 2, 3][..], &[2, 3, 4, 5], &[1, 3, 4, 5, 6]] {
            assert_eq!(pfaffian_volume(&spec(e)).unwrap(), pfaffian_product(&spec(e)).unwrap());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn square_is_determinant(m in 1usize..=4, entries in prop::collection::vec((-9i64..=9, 1i64..=4), 28)) {
            let n = 2 * m;
            let mut a = vec![vec![Q::zero(); n]; n];
            let mut it = entries.into_iter();
            for i in 0..n {
                for j in i + 1..n {
                    let (p, d) = it.next().unwrap();
                    a[i][j] = q(p, d);
                    a[j][i] = -q(p, d);
                }
            }
            prop_assert!(pfaffian_eval(&a).is_ok());
        }
    }
}
