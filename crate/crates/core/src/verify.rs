//! Randomized exact verification battery: every identity is checked on
//! seeded deterministic instances with exact comparison, and each failure is
//! reported with enough detail to reproduce it.

use crate::bch;
use crate::liealg;
use crate::sample;
use crate::utgroup::{expm, logm, UTMatrix};

/// Runs every identity over `trials` seeded instances; returns descriptions
/// of failures (empty means everything held exactly).
pub fn identity_battery(seed: u64, trials: usize) -> Vec<String> {
    let mut rng = sample::rng_from_seed(seed);
    let mut failures = Vec::new();

    for t in 0..trials {
        // exp/log round trip, n up to 6
        for n in 2..=6 {
            let a = sample::random_ut(&mut rng, n, -2, 2);
            if expm(&logm(&a)) != a {
                failures.push(format!("trial {t}: exp(log A) != A for n={n}: {:?}", a.matrix()));
            }
            let x = sample::random_lie(&mut rng, n, -2, 2);
            if logm(&expm(&x)) != x {
                failures.push(format!("trial {t}: log(exp X) != X for n={n}: {:?}", x.matrix()));
            }
        }
        // Jacobi identity in u(5)
        let c = sample::random_lie_list(&mut rng, 3, 5, -2, 2);
        let jac = liealg::bracket(&c[0], &liealg::bracket(&c[1], &c[2]))
            .add(&liealg::bracket(&c[1], &liealg::bracket(&c[2], &c[0])))
            .add(&liealg::bracket(&c[2], &liealg::bracket(&c[0], &c[1])));
        if !jac.is_zero() {
            failures.push(format!("trial {t}: Jacobi identity violated: {:?}", jac.matrix()));
        }
        // antisymmetry of even terms
        for (k, m, n) in [(2usize, 3usize, 4usize), (4, 4, 5)] {
            let c = sample::random_lie_list(&mut rng, m, n, -1, 1);
            match bch::check_antisymmetry(k, &c) {
                Ok(chk) if chk.holds() => {}
                Ok(_) => failures.push(format!("trial {t}: antisymmetry k={k} m={m} violated")),
                Err(e) => failures.push(format!("trial {t}: antisymmetry k={k}: {e}")),
            }
        }
        // bracket-prefix identity through the mu weights
        for (k, m, n) in [(2usize, 2usize, 4usize), (3, 3, 5), (3, 4, 5), (4, 4, 6)] {
            let c = sample::random_lie_list(&mut rng, m, n, -1, 1);
            match bch::check_lieperm(k, &c) {
                Ok(chk) if chk.holds() => {}
                Ok(_) => {
                    failures.push(format!("trial {t}: bracket-prefix identity k={k} m={m} violated"))
                }
                Err(e) => failures.push(format!("trial {t}: bracket-prefix k={k}: {e}")),
            }
        }
        // symmetrized H_3 closed form
        for m in 2..=4usize {
            let c = sample::random_lie_list(&mut rng, m, 4, -2, 2);
            match bch::check_h3_identity(&c) {
                Ok(chk) if chk.holds() => {}
                Ok(_) => failures.push(format!("trial {t}: symmetrized H3 m={m} violated")),
                Err(e) => failures.push(format!("trial {t}: symmetrized H3 m={m}: {e}")),
            }
        }
        // full product-log expansion for words of length <= 4 in UT(4)
        let len = 2 + (t % 3);
        let bs: Vec<UTMatrix> = (0..len).map(|_| sample::random_ut(&mut rng, 4, -2, 2)).collect();
        if let Some(msg) = product_log_check(&bs, t) {
            failures.push(msg);
        }
    }
    failures
}

/// Checks `log(B_1 ... B_m) = sum log B_i + sum_k H_k(log B_1, ..., log B_m)`
/// exactly; returns a failure description if it does not hold.
pub fn product_log_check(bs: &[UTMatrix], trial: usize) -> Option<String> {
    let n = bs[0].dim();
    let mut prod = UTMatrix::identity(n);
    for b in bs {
        prod = prod.mul(b);
    }
    let lhs = logm(&prod);
    let logs: Vec<_> = bs.iter().map(logm).collect();
    let mut rhs = logs.iter().skip(1).fold(logs[0].clone(), |acc, x| acc.add(x));
    for k in 2..n {
        match bch::bch_term(k, &logs) {
            Ok(h) => rhs = rhs.add(&h),
            Err(e) => return Some(format!("trial {trial}: product-log term k={k}: {e}")),
        }
    }
    if lhs != rhs {
        return Some(format!(
            "trial {trial}: product-log expansion mismatch, difference {:?}",
            lhs.sub(&rhs).matrix()
        ));
    }
    None
}
