//! Two-phase tableau simplex over exact rationals with Bland's rule.

use crate::error::{Error, Result};
use crate::rational::Q;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

/// `⟨normal, x⟩ (sense) offset`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub normal: Vec<Q>,
    pub offset: Q,
    pub sense: Sense,
}

impl Constraint {
    pub fn le(normal: Vec<Q>, offset: Q) -> Self {
        Constraint {
            normal,
            offset,
            sense: Sense::Le,
        }
    }

    pub fn ge(normal: Vec<Q>, offset: Q) -> Self {
        Constraint {
            normal,
            offset,
            sense: Sense::Ge,
        }
    }

    pub fn eq(normal: Vec<Q>, offset: Q) -> Self {
        Constraint {
            normal,
            offset,
            sense: Sense::Eq,
        }
    }

    pub fn holds(&self, x: &[Q]) -> bool {
        let lhs = super::dot(&self.normal, x);
        match self.sense {
            Sense::Le => lhs <= self.offset,
            Sense::Ge => lhs >= self.offset,
            Sense::Eq => lhs == self.offset,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Q, point: Vec<Q> },
    Infeasible,
    Unbounded,
}

/// Maximize `⟨objective, x⟩` over free variables `x` subject to `constraints`.
pub fn lp_optimize(objective: &[Q], constraints: &[Constraint]) -> Result<LpOutcome> {
    let n = objective.len();
    check_dims(n, constraints)?;
    // x = x⁺ - x⁻ with both parts nonnegative
    let split = |v: &[Q]| -> Vec<Q> { v.iter().cloned().chain(v.iter().map(|x| -x)).collect() };
    let cons: Vec<Constraint> = constraints
        .iter()
        .map(|c| Constraint {
            normal: split(&c.normal),
            offset: c.offset.clone(),
            sense: c.sense,
        })
        .collect();
    Ok(match solve_nonneg(&split(objective), &cons) {
        LpOutcome::Optimal { value, point } => LpOutcome::Optimal {
            value,
            point: (0..n).map(|j| &point[j] - &point[n + j]).collect(),
        },
        other => other,
    })
}

fn check_dims(n: usize, constraints: &[Constraint]) -> Result<()> {
    for c in constraints {
        if c.normal.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: c.normal.len(),
            });
        }
    }
    Ok(())
}

/// Maximize `⟨objective, x⟩` subject to `constraints` and `x ≥ 0`.
pub fn solve_nonneg(objective: &[Q], constraints: &[Constraint]) -> LpOutcome {
    let mut t = Tableau::new(objective.len(), constraints);
    if !t.phase_one() {
        return LpOutcome::Infeasible;
    }
    t.set_objective(objective);
    if !t.run(false) {
        return LpOutcome::Unbounded;
    }
    let point = t.solution();
    LpOutcome::Optimal {
        value: -t.obj[t.rhs_col()].clone(),
        point,
    }
}

/// Feasibility only: a point with `x ≥ 0` satisfying every constraint.
pub fn feasible_point(nvars: usize, constraints: &[Constraint]) -> Option<Vec<Q>> {
    let mut t = Tableau::new(nvars, constraints);
    t.phase_one().then(|| t.solution())
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    /// reduced costs; the last entry holds minus the objective value
    obj: Vec<Q>,
    nvars: usize,
    first_artificial: usize,
    ncols: usize,
}

impl Tableau {
    fn new(nvars: usize, constraints: &[Constraint]) -> Self {
        let m = constraints.len();
        let nslack = constraints.iter().filter(|c| c.sense != Sense::Eq).count();
        let nart = constraints
            .iter()
            .filter(|c| {
                let flipped = c.offset.is_negative();
                match c.sense {
                    Sense::Eq => true,
                    Sense::Le => flipped,
                    Sense::Ge => !flipped,
                }
            })
            .count();
        let first_artificial = nvars + nslack;
        let ncols = first_artificial + nart;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut s, mut a) = (nvars, first_artificial);
        for c in constraints {
            let mut row = vec![Q::zero(); ncols + 1];
            let flip = c.offset.is_negative();
            for (j, v) in c.normal.iter().enumerate() {
                row[j] = if flip { -v } else { v.clone() };
            }
            row[ncols] = c.offset.abs();
            let sense = match (c.sense, flip) {
                (Sense::Le, true) => Sense::Ge,
                (Sense::Ge, true) => Sense::Le,
                (sense, _) => sense,
            };
            match sense {
                Sense::Le => {
                    row[s] = Q::one();
                    basis.push(s);
                    s += 1;
                }
                Sense::Ge => {
                    row[s] = -Q::one();
                    s += 1;
                    row[a] = Q::one();
                    basis.push(a);
                    a += 1;
                }
                Sense::Eq => {
                    row[a] = Q::one();
                    basis.push(a);
                    a += 1;
                }
            }
            rows.push(row);
        }
        Tableau {
            rows,
            basis,
            obj: vec![Q::zero(); ncols + 1],
            nvars,
            first_artificial,
            ncols,
        }
    }

    fn rhs_col(&self) -> usize {
        self.ncols
    }

    /// Returns false when infeasible.
    fn phase_one(&mut self) -> bool {
        if self.first_artificial == self.ncols {
            return true;
        }
        // maximize -Σ artificials
        let mut cost = vec![Q::zero(); self.ncols];
        for c in cost.iter_mut().skip(self.first_artificial) {
            *c = -Q::one();
        }
        self.load_costs(&cost);
        let bounded = self.run(true);
        debug_assert!(bounded, "phase one is always bounded");
        if !self.obj[self.ncols].is_zero() {
            return false;
        }
        self.drive_out_artificials();
        true
    }

    fn drive_out_artificials(&mut self) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.first_artificial {
                match (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(j) => {
                        self.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        // redundant equality
                        self.rows.swap_remove(i);
                        self.basis.swap_remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    fn set_objective(&mut self, objective: &[Q]) {
        let mut cost = vec![Q::zero(); self.ncols];
        cost[..objective.len()].clone_from_slice(objective);
        self.load_costs(&cost);
    }

    fn load_costs(&mut self, cost: &[Q]) {
        let mut obj: Vec<Q> = cost.iter().cloned().chain([Q::zero()]).collect();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (o, v) in obj.iter_mut().zip(row) {
                if !v.is_zero() {
                    *o -= cb * v;
                }
            }
        }
        self.obj = obj;
    }

    /// Iterate to optimality; false when unbounded.
    fn run(&mut self, allow_artificial: bool) -> bool {
        let limit = if allow_artificial {
            self.ncols
        } else {
            self.first_artificial
        };
        loop {
            let Some(enter) = (0..limit).find(|&j| self.obj[j].is_positive()) else {
                return true;
            };
            let mut leave: Option<(usize, Q)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = &row[enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &row[self.ncols] / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((i, _)) => self.pivot(i, enter),
                None => return false,
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Q::one() / &self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let nz: Vec<usize> = (0..pivot_row.len())
            .filter(|&j| !pivot_row[j].is_zero())
            .collect();
        for row in self.rows.iter_mut().chain(std::iter::once(&mut self.obj)) {
            if row.is_empty() || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                let t = &f * &pivot_row[j];
                row[j] -= t;
            }
        }
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    fn solution(&self) -> Vec<Q> {
        let mut x = vec![Q::zero(); self.nvars];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.nvars {
                x[b] = row[self.ncols].clone();
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use proptest::prelude::*;

    #[test]
    fn unit_interval() {
        let cons = [Constraint::ge(vec![qi(1)], qi(0)), Constraint::le(vec![qi(1)], qi(1))];
        assert_eq!(
            lp_optimize(&[qi(1)], &cons).unwrap(),
            LpOutcome::Optimal {
                value: qi(1),
                point: vec![qi(1)]
            }
        );
    }

    #[test]
    fn triangle() {
        let cons = [
            Constraint::ge(vec![qi(1), qi(0)], qi(0)),
            Constraint::ge(vec![qi(0), qi(1)], qi(0)),
            Constraint::le(vec![qi(1), qi(1)], qi(1)),
        ];
        match lp_optimize(&[qi(1), qi(1)], &cons).unwrap() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, qi(1));
                assert!(cons.iter().all(|c| c.holds(&point)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let cons = [Constraint::ge(vec![qi(1)], qi(1)), Constraint::le(vec![qi(1)], qi(0))];
        assert_eq!(lp_optimize(&[qi(1)], &cons).unwrap(), LpOutcome::Infeasible);
        let cons = [Constraint::ge(vec![qi(1)], qi(0))];
        assert_eq!(lp_optimize(&[qi(1)], &cons).unwrap(), LpOutcome::Unbounded);
        assert!(matches!(
            lp_optimize(&[qi(1)], &[Constraint::le(vec![qi(1), qi(2)], qi(0))]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn equalities_and_redundancy() {
        // x + y = 1 stated twice, maximize x - y with x, y >= 0
        let cons = [
            Constraint::eq(vec![qi(1), qi(1)], qi(1)),
            Constraint::eq(vec![qi(2), qi(2)], qi(2)),
        ];
        match solve_nonneg(&[qi(1), qi(-1)], &cons) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, qi(1));
                assert_eq!(point, vec![qi(1), qi(0)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example, cycles under the textbook largest-coefficient rule
        let cons = [
            Constraint::le(vec![q(1, 4), qi(-60), q(-1, 25), qi(9)], qi(0)),
            Constraint::le(vec![q(1, 2), qi(-90), q(-1, 50), qi(3)], qi(0)),
            Constraint::le(vec![qi(0), qi(0), qi(1), qi(0)], qi(1)),
        ];
        match solve_nonneg(&[q(3, 4), qi(-150), q(1, 50), qi(-6)], &cons) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, q(1, 20)),
            other => panic!("{other:?}"),
        }
    }

    /// Brute-force LP oracle for 2 free variables: optimum over all vertices
    /// of the arrangement (pairs of tight constraints).
    fn brute_2d(obj: &[Q], cons: &[Constraint]) -> Option<Q> {
        let mut best: Option<Q> = None;
        for i in 0..cons.len() {
            for j in i + 1..cons.len() {
                let a = vec![cons[i].normal.clone(), cons[j].normal.clone()];
                if let Some(x) =
                    crate::geometry::linalg::solve(&a, &[cons[i].offset.clone(), cons[j].offset.clone()])
                {
                    if cons.iter().all(|c| c.holds(&x)) {
                        let v = crate::geometry::dot(obj, &x);
                        if best.as_ref().is_none_or(|b| v > *b) {
                            best = Some(v);
                        }
                    }
                }
            }
        }
        best
    }

    proptest! {
        #[test]
        fn matches_vertex_enumeration(
            rows in prop::collection::vec((-5i64..=5, -5i64..=5, 0i64..=6), 1..6),
            cx in -4i64..=4, cy in -4i64..=4,
        ) {
            // always add a box so the LP is bounded
            let mut cons: Vec<Constraint> = rows
                .iter()
                .map(|&(a, b, c)| Constraint::le(vec![qi(a), qi(b)], qi(c)))
                .collect();
            for (a, b) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                cons.push(Constraint::le(vec![qi(a), qi(b)], qi(10)));
            }
            let obj = [qi(cx), qi(cy)];
            match lp_optimize(&obj, &cons).unwrap() {
                LpOutcome::Optimal { value, point } => {
                    prop_assert!(cons.iter().all(|c| c.holds(&point)));
                    prop_assert_eq!(crate::geometry::dot(&obj, &point), value.clone());
                    prop_assert_eq!(Some(value), brute_2d(&obj, &cons));
                }
                LpOutcome::Infeasible => prop_assert!(brute_2d(&obj, &cons).is_none()),
                LpOutcome::Unbounded => prop_assert!(false, "boxed LP cannot be unbounded"),
            }
        }
    }
}
