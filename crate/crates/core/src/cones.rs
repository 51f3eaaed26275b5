//! Exact rational linear programming feasibility over homogeneous systems,
//! support computation for the nonnegative integer points of a rational
//! subspace, and nonnegative-cone membership.
//!
//! The solver is a phase-1 simplex with Bland's anti-cycling rule, run
//! entirely in exact rational arithmetic. No objective is ever optimized;
//! feasibility is the only question asked.

use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

use crate::exactq::{rref_rows, QMatrix, Rat};

/// Homogeneous equality constraints `E l = 0` over `Q^K`.
#[derive(Clone, Debug)]
pub struct HomogeneousSystem {
    k: usize,
    equalities: Vec<Vec<Rat>>,
}

impl HomogeneousSystem {
    pub fn new(k: usize, equalities: Vec<Vec<Rat>>) -> Self {
        for row in &equalities {
            assert_eq!(row.len(), k, "dimension mismatch");
        }
        HomogeneousSystem { k, equalities }
    }

    pub fn from_matrix(m: &QMatrix) -> Self {
        Self::new(m.cols(), (0..m.rows()).map(|i| m.row(i).to_vec()).collect())
    }

    pub fn num_vars(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.equalities
    }

    pub fn satisfied_by(&self, l: &[Rat]) -> bool {
        assert_eq!(l.len(), self.k, "dimension mismatch");
        self.equalities.iter().all(|row| {
            let dot: Rat = row.iter().zip(l).map(|(a, b)| a * b).sum();
            dot.is_zero()
        })
    }
}

/// Sorted set of 1-based indices.
pub type SupportSet = BTreeSet<usize>;

/// Finds `x >= 0` with `A x = b`, or None if infeasible. Exact phase-1
/// simplex with Bland's rule; rows are pre-reduced so inconsistent systems
/// are reported as infeasible rather than looping.
pub fn solve_feasible(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let ncols = a.first().map_or(0, Vec::len);
    // Row-reduce [A | b] to drop redundant rows and detect 0 = c.
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref_rows(&mut aug, ncols + 1);
    if pivots.contains(&ncols) {
        return None; // a pivot in the rhs column means 0 = 1
    }
    aug.truncate(pivots.len());
    let m = aug.len();
    if m == 0 {
        return Some(vec![Rat::zero(); ncols]);
    }

    // Orient rows to have nonnegative rhs, then add artificial variables.
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rat> = Vec::with_capacity(m);
    for r in aug {
        let (body, tail) = r.split_at(ncols);
        let bv = tail[0].clone();
        if bv.is_negative() {
            rows.push(body.iter().map(|x| -x.clone()).collect());
            rhs.push(-bv);
        } else {
            rows.push(body.to_vec());
            rhs.push(bv);
        }
    }

    // Tableau columns: 0..ncols structural, ncols..ncols+m artificial.
    let total = ncols + m;
    let mut t: Vec<Vec<Rat>> = rows;
    for (i, row) in t.iter_mut().enumerate() {
        for j in 0..m {
            row.push(if i == j { Rat::one() } else { Rat::zero() });
        }
    }
    let mut basis: Vec<usize> = (ncols..total).collect();
    // Phase-1 objective: minimize the sum of artificials. Reduced cost row:
    // z_j - c_j computed against the artificial basis = sum of rows.
    let mut obj: Vec<Rat> = vec![Rat::zero(); total];
    let mut obj_val = Rat::zero();
    for i in 0..m {
        for j in 0..total {
            let upd = &obj[j] + &t[i][j];
            obj[j] = upd;
        }
        obj_val = &obj_val + &rhs[i];
    }
    for j in ncols..total {
        obj[j] = Rat::zero(); // artificial columns have cost 1; z_j - c_j = 0 initially
    }

    loop {
        // Bland: entering = smallest index with positive reduced row value
        // (we are minimizing; artificial columns never re-enter).
        let entering = (0..ncols).find(|&j| obj[j].is_positive() && !basis.contains(&j));
        let Some(e) = entering else {
            break;
        };
        // Ratio test, ties by smallest basis variable (Bland).
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for i in 0..m {
            if t[i][e].is_positive() {
                let ratio = &rhs[i] / &t[i][e];
                let better = match &best {
                    None => true,
                    Some(cur) => {
                        ratio < *cur || (ratio == *cur && basis[i] < basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let Some(l) = leave else {
            // Unbounded phase-1 cannot happen (objective bounded below by 0);
            // entering column nonpositive means it cannot reduce the objective.
            break;
        };
        // Pivot on (l, e).
        let pv = t[l][e].clone();
        for j in 0..total {
            let upd = &t[l][j] / &pv;
            t[l][j] = upd;
        }
        let newr = &rhs[l] / &pv;
        rhs[l] = newr;
        for i in 0..m {
            if i != l && !t[i][e].is_zero() {
                let f = t[i][e].clone();
                for j in 0..total {
                    let upd = &t[i][j] - &(&f * &t[l][j]);
                    t[i][j] = upd;
                }
                let upd = &rhs[i] - &(&f * &rhs[l]);
                rhs[i] = upd;
            }
        }
        if !obj[e].is_zero() {
            let f = obj[e].clone();
            for j in 0..total {
                let upd = &obj[j] - &(&f * &t[l][j]);
                obj[j] = upd;
            }
            obj_val = &obj_val - &(&f * &rhs[l]);
        }
        basis[l] = e;
    }

    if !obj_val.is_zero() {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < ncols {
            x[bv] = rhs[i].clone();
        }
        // a basic artificial at value zero is harmless
    }
    Some(x)
}

/// A rational solution with `l >= 0`, `l_i = 1` (1-based `i`), and all
/// equalities satisfied, or None. Strictness of the i-th coordinate is
/// encoded as `l_i = 1` by homogeneity.
pub fn lp_feasible(system: &HomogeneousSystem, strict_index: usize) -> Option<Vec<Rat>> {
    let k = system.num_vars();
    assert!((1..=k).contains(&strict_index), "index out of range");
    let i0 = strict_index - 1;
    let mut a: Vec<Vec<Rat>> = system.equalities.clone();
    let mut b: Vec<Rat> = vec![Rat::zero(); a.len()];
    let mut pin = vec![Rat::zero(); k];
    pin[i0] = Rat::one();
    a.push(pin);
    b.push(Rat::one());
    let sol = solve_feasible(&a, &b)?;
    debug_assert!(system.satisfied_by(&sol));
    debug_assert!(sol.iter().all(|x| !x.is_negative()));
    debug_assert!(sol[i0].is_one());
    Some(sol)
}

/// Indices i with a nonnegative rational solution positive at i; equals the
/// support of the nonnegative integer points of the solution subspace.
pub fn support(system: &HomogeneousSystem) -> SupportSet {
    (1..=system.num_vars())
        .filter(|&i| lp_feasible(system, i).is_some())
        .collect()
}

/// Integer vector in the cone with support exactly `s`: the per-index
/// witnesses are summed and cleared to integers. Any positive multiple is
/// equally valid.
pub fn full_support_witness(system: &HomogeneousSystem, s: &SupportSet) -> Option<Vec<Rat>> {
    let k = system.num_vars();
    let mut total = vec![Rat::zero(); k];
    for &i in s {
        let w = lp_feasible(system, i)?;
        for (t, x) in total.iter_mut().zip(&w) {
            *t = &*t + x;
        }
    }
    // clear denominators
    let mut lcm = num_bigint::BigInt::one();
    for x in &total {
        lcm = num_integer::Integer::lcm(&lcm, x.denom());
    }
    let scale = Rat::from_integer(lcm);
    Some(total.iter().map(|x| x * &scale).collect())
}

/// Nonnegative coefficients expressing `target` in the cone generated by
/// `generators`, or None. The zero target always returns all-zero.
pub fn in_nonneg_cone(target: &[Rat], generators: &[Vec<Rat>]) -> Option<Vec<Rat>> {
    let dim = target.len();
    for g in generators {
        assert_eq!(g.len(), dim, "dimension mismatch");
    }
    // variables: alpha_s >= 0; constraints per coordinate.
    let a: Vec<Vec<Rat>> = (0..dim)
        .map(|t| generators.iter().map(|g| g[t].clone()).collect())
        .collect();
    let b: Vec<Rat> = target.to_vec();
    let sol = solve_feasible(&a, &b)?;
    debug_assert!({
        let mut recon = vec![Rat::zero(); dim];
        for (alpha, g) in sol.iter().zip(generators) {
            for (r, x) in recon.iter_mut().zip(g) {
                *r = &*r + &(alpha * x);
            }
        }
        recon == b
    });
    Some(sol)
}
