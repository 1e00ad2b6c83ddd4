use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::{common_denominator, format_q, parse_q, to_f64, Q};
use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

/// Largest accepted kernel size.
pub const MAX_KERNEL_SIZE: usize = 256;

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("kernel size must be positive"));
    }
    if n > MAX_KERNEL_SIZE {
        return Err(Error::Capacity {
            what: "kernel size",
            limit: MAX_KERNEL_SIZE,
            got: n,
        });
    }
    Ok(())
}

/// Symmetric `n × n` matrix with entries in `[0,1]`, read as the step
/// function that is constant on the blocks `[i/n,(i+1)/n) × [j/n,(j+1)/n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepKernel {
    n: usize,
    entries: Vec<Q>,
    /// common denominator of the entries and the scaled integer numerators
    denom: BigInt,
    numer: Vec<BigInt>,
}

impl StepKernel {
    /// `entries` in row-major order.
    pub fn new(n: usize, entries: Vec<Q>) -> Result<Self> {
        check_size(n)?;
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        for i in 0..n {
            for j in 0..n {
                let v = &entries[i * n + j];
                if *v < Q::zero() || *v > Q::one() {
                    return Err(Error::invalid(format!("entry ({i},{j}) = {} outside [0,1]", format_q(v))));
                }
                if *v != entries[j * n + i] {
                    return Err(Error::invalid(format!("kernel not symmetric at ({i},{j})")));
                }
            }
        }
        let denom = common_denominator(&entries);
        let numer = entries
            .iter()
            .map(|v| v.numer() * (&denom / v.denom()))
            .collect();
        Ok(StepKernel {
            n,
            entries,
            denom,
            numer,
        })
    }

    pub fn constant(n: usize, p: Q) -> Result<Self> {
        check_size(n)?;
        Self::new(n, vec![p; n * n])
    }

    /// From the upper triangle (diagonal included), row by row.
    pub fn from_upper(n: usize, upper: &[Q]) -> Result<Self> {
        check_size(n)?;
        if upper.len() != n * (n + 1) / 2 {
            return Err(Error::DimensionMismatch {
                expected: n * (n + 1) / 2,
                got: upper.len(),
            });
        }
        let mut entries = vec![Q::zero(); n * n];
        let mut it = upper.iter();
        for i in 0..n {
            for j in i..n {
                let v = it.next().expect("length checked").clone();
                entries[i * n + j] = v.clone();
                entries[j * n + i] = v;
            }
        }
        Self::new(n, entries)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &Q {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Q] {
        &self.entries
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(to_f64).collect()
    }

    /// The same step function on a grid `k` times finer.
    pub fn refined(&self, k: usize) -> Result<Self> {
        let m = self.n * k;
        let entries = (0..m * m)
            .map(|idx| self.entry(idx / m / k, idx % m / k).clone())
            .collect();
        Self::new(m, entries)
    }

    /// Simultaneous row and column permutation: new `(i,j)` is old `(perm[i],perm[j])`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n || perm.iter().any(|&p| p >= self.n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::invalid("not a permutation of the kernel indices"));
        }
        let entries = (0..self.n * self.n)
            .map(|idx| self.entry(perm[idx / self.n], perm[idx % self.n]).clone())
            .collect();
        Self::new(self.n, entries)
    }

    pub fn to_doc(&self) -> KernelDoc {
        KernelDoc {
            n: self.n,
            entries: self.entries.iter().map(format_q).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("kernel serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: KernelDoc = serde_json::from_str(s)
            .map_err(|e| Error::parse(e.column(), format!("kernel JSON line {}: {e}", e.line())))?;
        doc.into_kernel()
    }
}

/// File form of a kernel: entries row-major as `"p/q"` or decimal strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelDoc {
    pub n: usize,
    pub entries: Vec<String>,
}

impl KernelDoc {
    pub fn into_kernel(self) -> Result<StepKernel> {
        let entries = self.entries.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>()?;
        StepKernel::new(self.n, entries)
    }
}

fn edge_plan(f: &Graph) -> Vec<Vec<usize>> {
    // earlier endpoints of the edges closed when vertex t is assigned
    (0..f.order()).map(|t| (0..t).filter(|&s| f.has_edge(s, t)).collect()).collect()
}

/// `t(F, W_M)`: the average over all maps `V(F) → [n]` of the product of
/// kernel entries over the edges of `F`.
pub fn p_eval(f: &Graph, kernel: &StepKernel) -> Q {
    let plan = edge_plan(f);
    let n = kernel.n;
    let mut phi = vec![0usize; f.order()];
    fn rec(t: usize, plan: &[Vec<usize>], phi: &mut [usize], k: &StepKernel, acc: &BigInt, sum: &mut BigInt) {
        if t == plan.len() {
            *sum += acc;
            return;
        }
        for v in 0..k.n {
            phi[t] = v;
            let mut next = acc.clone();
            for &s in &plan[t] {
                next *= &k.numer[phi[s] * k.n + v];
            }
            if !next.is_zero() {
                rec(t + 1, plan, phi, k, &next, sum);
            }
        }
    }
    let mut sum = BigInt::zero();
    rec(0, &plan, &mut phi, kernel, &BigInt::one(), &mut sum);
    let den = BigInt::from(n).pow(f.order() as u32) * kernel.denom.clone().pow(f.edge_count() as u32);
    Q::new(sum, den)
}

/// Floating-point [`p_eval`] on a row-major kernel of size `n`.
pub fn p_eval_f64(f: &Graph, n: usize, kernel: &[f64]) -> f64 {
    let plan = edge_plan(f);
    let mut phi = vec![0usize; f.order()];
    fn rec(t: usize, plan: &[Vec<usize>], phi: &mut [usize], n: usize, k: &[f64], acc: f64) -> f64 {
        if t == plan.len() {
            return acc;
        }
        let mut total = 0.0;
        for v in 0..n {
            phi[t] = v;
            let next = plan[t].iter().fold(acc, |a, &s| a * k[phi[s] * n + v]);
            if next != 0.0 {
                total += rec(t + 1, plan, phi, n, k, next);
            }
        }
        total
    }
    rec(0, &plan, &mut phi, n, kernel, 1.0) / (n as f64).powi(f.order() as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_pattern;
    use crate::rational::{q, qi};
    use proptest::prelude::*;

    fn kernel(n: usize, upper: &[(i64, i64)]) -> StepKernel {
        StepKernel::from_upper(n, &upper.iter().map(|&(a, b)| q(a, b)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn examples() {
        let k2 = parse_pattern("K2").unwrap();
        assert_eq!(p_eval(&k2, &StepKernel::constant(1, q(3, 7)).unwrap()), q(3, 7));
        let (a, b, c) = (q(1, 3), q(1, 5), q(1, 2));
        let m = StepKernel::from_upper(2, &[a.clone(), b.clone(), c.clone()]).unwrap();
        assert_eq!(p_eval(&k2, &m), (a + qi(2) * b + c) / qi(4));
        assert!((p_eval_f64(&k2, 2, &m.to_f64()) - crate::rational::to_f64(&p_eval(&k2, &m))).abs() < 1e-15);
    }

    #[test]
    fn validation_and_json() {
        assert!(StepKernel::new(2, vec![qi(0), qi(1), qi(0), qi(0)]).is_err());
        assert!(StepKernel::new(1, vec![q(3, 2)]).is_err());
        let k = StepKernel::from_json(r#"{"n": 2, "entries": ["1/2", "0.25", "1/4", "1"]}"#).unwrap();
        assert_eq!(k.entry(0, 1), &q(1, 4));
        assert_eq!(StepKernel::from_json(&k.to_json()).unwrap(), k);
        assert!(StepKernel::from_json(r#"{"n": 1, "entries": ["1"], "x": 0}"#).is_err());
        assert!(StepKernel::from_json(r#"{"n": 1, "entries": ["1/0"]}"#).is_err());
        assert!(matches!(
            StepKernel::from_json(r#"{"n": 33333333333333332, "entries": ["1/2", "1", "1/3", "1"]}"#),
            Err(Error::Capacity { .. })
        ));
        assert!(StepKernel::constant(usize::MAX, qi(1)).is_err());
    }

    #[test]
    fn constant_kernel_gives_spine() {
        for name in ["K3", "C4", "K4-e", "P3", "K2"] {
            let f = parse_pattern(name).unwrap();
            for n in 1..=3 {
                let k = StepKernel::constant(n, q(2, 3)).unwrap();
                assert_eq!(p_eval(&f, &k), q(2, 3).pow(f.edge_count() as i32));
            }
        }
    }

    fn arb_kernel() -> impl Strategy<Value = StepKernel> {
        (1usize..=3).prop_flat_map(|n| {
            prop::collection::vec(0i64..=8, n * (n + 1) / 2)
                .prop_map(move |v| kernel(n, &v.into_iter().map(|a| (a, 8)).collect::<Vec<_>>()))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn refinement_invariance(k in arb_kernel(), r in 2usize..=3, name in prop::sample::select(vec!["K3", "C4", "K4-e", "P4"])) {
            let f = parse_pattern(name).unwrap();
            prop_assert_eq!(p_eval(&f, &k), p_eval(&f, &k.refined(r).unwrap()));
        }

        #[test]
        fn permutation_invariance(k in arb_kernel(), seed in any::<u64>(), name in prop::sample::select(vec!["K3", "C4", "K4-e", "P3"])) {
            let f = parse_pattern(name).unwrap();
            let n = k.size();
            let mut perm: Vec<usize> = (0..n).collect();
            perm.rotate_left((seed % n as u64) as usize);
            if seed & 1 == 1 {
                perm.reverse();
            }
            prop_assert_eq!(p_eval(&f, &k), p_eval(&f, &k.permuted(&perm).unwrap()));
        }
    }
}
