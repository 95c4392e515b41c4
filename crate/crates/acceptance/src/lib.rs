//! Data generators and direct-summation oracles shared by the acceptance
//! suite. Nothing here calls into `uaext`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A bounded LP `max c·x` s.t. `Ax = b`, `lo <= x <= hi`.
#[derive(Debug, Clone)]
pub struct RandomLp {
    pub objective: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

/// 2 to 6 variables in boxes, 1 to 8 equality rows. Every seventh seed
/// draws the right-hand side at random, so some instances are infeasible;
/// the rest are feasible by construction.
pub fn random_lp(seed: u64) -> RandomLp {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=6);
    let m = rng.gen_range(1..=8);
    let lower: Vec<f64> = (0..n).map(|_| if rng.gen_bool(0.7) { 0.0 } else { rng.gen_range(-3.0..0.0) }).collect();
    let upper: Vec<f64> = lower.iter().map(|l| l + rng.gen_range(0.5..5.0)).collect();
    let rows: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect();
    let rhs = if seed % 7 == 3 {
        (0..m).map(|_| rng.gen_range(-4.0..4.0)).collect()
    } else {
        let x: Vec<f64> = lower.iter().zip(&upper).map(|(l, u)| rng.gen_range(*l..*u)).collect();
        rows.iter().map(|r| r.iter().zip(&x).map(|(a, b)| a * b).sum()).collect()
    };
    let objective = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    RandomLp {
        objective,
        rows,
        rhs,
        lower,
        upper,
    }
}

/// `(1/M) Σ_j w_j^n` by direct summation.
pub fn power_mean(ws: &[Complex64], n: i32) -> Complex64 {
    ws.iter().map(|w| w.powi(n)).sum::<Complex64>() / ws.len() as f64
}

/// One acceptance line.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {} {}: {}",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.title,
            self.detail
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_lps_are_well_formed() {
        for seed in 0..50 {
            let lp = random_lp(seed);
            let n = lp.objective.len();
            assert!((2..=6).contains(&n));
            assert!(lp.rows.iter().all(|r| r.len() == n));
            assert!(lp.lower.iter().zip(&lp.upper).all(|(l, u)| l < u));
        }
    }

    #[test]
    fn power_means_on_roots_of_unity() {
        let ws: Vec<Complex64> = (0..8).map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 8.0)).collect();
        assert!((power_mean(&ws, 8) - 1.0).norm() < 1e-14);
        assert!(power_mean(&ws, 3).norm() < 1e-15);
    }
}
