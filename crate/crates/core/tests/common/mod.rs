//! Independent oracles and instance families shared by the oracle and
//! acceptance suites.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex;
use oneshot::states::CMatrix;
use minilp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const EPS_GRID: [f64; 4] = [0.0, 0.05, 0.1, 0.3];

/// Slack on the discarded mass, matching the library's comparison.
const DISCARD_SLACK: f64 = 1e-12;

/// `min D_inf(p~ || q)` over the total-variation ball, as a linear program in
/// `(p~, t, lambda)`: minimize `lambda` subject to `p~_i <= lambda q_i`,
/// `|p~_i - p_i| <= t_i`, `Σ t_i <= 2 eps`, `Σ p~_i = 1`, `p~ >= 0`.
pub fn lp_smooth_d_inf(p: &[f64], q: &[f64], eps: f64) -> f64 {
    let d = p.len();
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let lambda = lp.add_var(1.0, (0.0, f64::INFINITY));
    let pt: Vec<_> = (0..d).map(|_| lp.add_var(0.0, (0.0, 1.0))).collect();
    let t: Vec<_> = (0..d).map(|_| lp.add_var(0.0, (0.0, 1.0))).collect();
    for i in 0..d {
        lp.add_constraint(&[(pt[i], 1.0), (lambda, -q[i])], ComparisonOp::Le, 0.0);
        lp.add_constraint(&[(pt[i], 1.0), (t[i], -1.0)], ComparisonOp::Le, p[i]);
        lp.add_constraint(&[(pt[i], -1.0), (t[i], -1.0)], ComparisonOp::Le, -p[i]);
    }
    let mut budget = LinearExpr::empty();
    let mut total = LinearExpr::empty();
    for i in 0..d {
        budget.add(t[i], 1.0);
        total.add(pt[i], 1.0);
    }
    lp.add_constraint(budget, ComparisonOp::Le, 2.0 * eps);
    lp.add_constraint(total, ComparisonOp::Eq, 1.0);
    lp.solve().expect("feasible LP").objective().max(1.0).ln()
}

/// `min D_inf(p~ || q)` over grid points `p~ = k / m` of the simplex inside
/// the ball. Every grid point is feasible, so this bounds the exact value
/// from above.
pub fn grid_smooth_d_inf(p: &[f64], q: &[f64], eps: f64, m: usize) -> f64 {
    let d = p.len();
    let mut best = f64::INFINITY;
    let mut k = vec![0usize; d];
    fn rec(i: usize, left: usize, k: &mut Vec<usize>, m: usize, p: &[f64], q: &[f64], eps: f64, best: &mut f64) {
        let d = k.len();
        if i == d - 1 {
            k[i] = left;
            let pt: Vec<f64> = k.iter().map(|&x| x as f64 / m as f64).collect();
            let tv: f64 = pt.iter().zip(p).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0;
            if tv <= eps + 1e-12 {
                let r = pt.iter().zip(q).map(|(a, b)| a / b).fold(0.0, f64::max);
                *best = best.min(r.ln());
            }
            return;
        }
        for x in 0..=left {
            k[i] = x;
            rec(i + 1, left - x, k, m, p, q, eps, best);
        }
    }
    rec(0, m, &mut k, m, p, q, eps, &mut best);
    best.max(0.0)
}

/// `max D_0(p~ || q)` over the ball by enumerating every support set `T`
/// whose complement carries at most `eps` of `p`.
pub fn subset_smooth_d_0(p: &[f64], q: &[f64], eps: f64) -> f64 {
    let d = p.len();
    let mut best = f64::NEG_INFINITY;
    for mask in 1u32..(1 << d) {
        let dropped: f64 = (0..d).filter(|i| mask & (1 << i) == 0).map(|i| p[i]).sum();
        if dropped <= eps + DISCARD_SLACK {
            let kept: f64 = (0..d).filter(|i| mask & (1 << i) != 0).map(|i| q[i]).sum();
            best = best.max(-kept.ln());
        }
    }
    best
}

/// Compositions of `n` into `d` parts, scaled to distributions. With
/// `positive` every part is at least one.
pub fn compositions(n: usize, d: usize, positive: bool) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d);
    fn rec(left: usize, d: usize, n: usize, positive: bool, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if cur.len() == d - 1 {
            if positive && left == 0 {
                return;
            }
            cur.push(left);
            out.push(cur.iter().map(|&x| x as f64 / n as f64).collect());
            cur.pop();
            return;
        }
        let lo = usize::from(positive);
        for x in lo..=left {
            cur.push(x);
            rec(left - x, d, n, positive, cur, out);
            cur.pop();
        }
    }
    rec(n, d, n, positive, &mut cur, &mut out);
    out
}

fn random_dist(d: usize, rng: &mut ChaCha8Rng, zeros: bool) -> Vec<f64> {
    let w: Vec<f64> = (0..d)
        .map(|_| if zeros && rng.random::<f64>() < 0.2 { 0.0 } else { rng.random::<f64>() + 1e-3 })
        .collect();
    let w = if w.iter().all(|&x| x == 0.0) { vec![1.0; d] } else { w };
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// The smoothing instance family: every pair from a rational grid (`p` in
/// fifths with zeros allowed, `q` in positive sixths) for `d = 2..=4`, plus
/// 100 seeded random pairs per dimension.
pub fn smoothing_instances() -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for d in 2..=4 {
        for p in compositions(5, d, false) {
            for q in compositions(6, d, true) {
                out.push((p.clone(), q));
            }
        }
        for _ in 0..100 {
            let p = random_dist(d, &mut rng, true);
            let q = random_dist(d, &mut rng, false);
            out.push((p, q));
        }
    }
    out
}

pub fn random_complex(n: usize, rng: &mut ChaCha8Rng) -> CMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
}

pub fn random_density(n: usize, rng: &mut ChaCha8Rng) -> CMatrix<f64> {
    let a = random_complex(n, rng);
    let m = &a * a.adjoint();
    let tr = m.trace();
    m / tr
}

/// A unitary mixing only levels of equal total energy: a random unitary on
/// each degenerate block.
pub fn block_unitary(h: &[f64], rng: &mut ChaCha8Rng) -> CMatrix<f64> {
    let n = h.len();
    let mut u = CMatrix::<f64>::zeros(n, n);
    let mut seen = vec![false; n];
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let block: Vec<usize> = (0..n).filter(|&j| h[j] == h[i]).collect();
        for &j in &block {
            seen[j] = true;
        }
        let q = random_complex(block.len(), rng).qr().q();
        for (a, &r) in block.iter().enumerate() {
            for (b2, &s) in block.iter().enumerate() {
                u[(r, s)] = q[(a, b2)];
            }
        }
    }
    u
}

