//! Rényi entropies and divergences, their smoothed variants, and one-shot
//! compression lengths.
//!
//! All quantities are in nats. Smoothing is over the total-variation ball
//! `{p~ : (1/2) Σ |p~_i - p_i| <= eps}`; costs (`D_inf`) are minimized and
//! yields (`D_0`) maximized over it.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use nalgebra::RealField;

use crate::error::{Error, Result};
use crate::num::{log_sum_exp, Real};
use crate::states::{hermitian_eigenvalues, CMatrix};

/// Slack allowed when comparing a discarded mass against `eps`.
const DISCARD_TOL: f64 = 1e-12;

/// Order of a Rényi quantity: a nonnegative real or infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Alpha<T> {
    Finite(T),
    Infinity,
}

impl<T: Real> Alpha<T> {
    pub fn new(value: T) -> Result<Self> {
        if value == T::infinity() {
            Ok(Alpha::Infinity)
        } else if value.is_finite() && value >= T::zero() {
            Ok(Alpha::Finite(value))
        } else {
            Err(Error::InvalidParameter(format!("Renyi order must be >= 0, got {value}")))
        }
    }

    pub fn zero() -> Self {
        Alpha::Finite(T::zero())
    }

    pub fn one() -> Self {
        Alpha::Finite(T::one())
    }

    /// The order as a scalar, with `Infinity` mapped to `+inf`.
    pub fn value(self) -> T {
        match self {
            Alpha::Finite(a) => a,
            Alpha::Infinity => T::infinity(),
        }
    }
}

impl<T: Real> fmt::Display for Alpha<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Finite(a) => write!(f, "{a}"),
            Alpha::Infinity => f.write_str("inf"),
        }
    }
}

impl<T: Real> FromStr for Alpha<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Alpha::Infinity),
            other => {
                let v: f64 = other
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("cannot parse Renyi order '{s}'")))?;
                Alpha::new(T::from_f64(v).ok_or(Error::NonFinite("Renyi order"))?)
            }
        }
    }
}

/// Radius of the smoothing ball, in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SmoothingParameter<T>(T);

impl<T: Real> SmoothingParameter<T> {
    pub fn new(eps: T) -> Result<Self> {
        if eps >= T::zero() && eps <= T::one() {
            Ok(Self(eps))
        } else {
            Err(Error::InvalidParameter(format!("smoothing parameter must lie in [0, 1], got {eps}")))
        }
    }

    pub fn zero() -> Self {
        Self(T::zero())
    }

    pub fn value(self) -> T {
        self.0
    }
}

fn xlnx<T: Real>(p: T) -> T {
    if p > T::zero() {
        p * p.ln()
    } else {
        T::zero()
    }
}

/// `-Σ p_i ln p_i`, with `0 ln 0 = 0`.
pub fn shannon_entropy<T: Real>(p: &[T]) -> T {
    -p.iter().map(|&x| xlnx(x)).sum::<T>()
}

/// Shannon entropy of the eigenvalue spectrum of `rho`.
pub fn von_neumann_entropy<T: Real + RealField>(rho: &CMatrix<T>) -> T {
    let ev: Vec<T> = hermitian_eigenvalues(rho)
        .into_iter()
        .map(|x| num_traits::Float::max(x, T::zero()))
        .collect();
    shannon_entropy(&ev)
}

fn support_size<T: Real>(p: &[T]) -> usize {
    p.iter().filter(|&&x| x > T::zero()).count()
}

/// Order-`alpha` Rényi entropy of a distribution.
pub fn renyi_entropy<T: Real>(p: &[T], alpha: Alpha<T>) -> T {
    match alpha {
        Alpha::Infinity => -p.iter().copied().fold(T::zero(), T::max).ln(),
        Alpha::Finite(a) if a == T::zero() => T::from_usize_lossy(support_size(p)).ln(),
        Alpha::Finite(a) if a == T::one() => shannon_entropy(p),
        Alpha::Finite(a) => {
            let lse = log_sum_exp(p.iter().filter(|&&x| x > T::zero()).map(|&x| a * x.ln()));
            lse / (T::one() - a)
        }
    }
}

/// Order-`alpha` Rényi divergence `D_alpha(p || q)`, possibly `+inf`.
///
/// `D_0 = -ln Σ_{p_i>0} q_i`, `D_inf = ln max_{p_i>0} p_i / q_i`, `D_1` is
/// the relative entropy, and other orders use
/// `ln(Σ p_i^a q_i^(1-a)) / (a - 1)`. For `alpha >= 1` any `p_i > 0` with
/// `q_i = 0` gives `+inf`; for `0 < alpha < 1` the sum is finite unless `p`
/// and `q` have disjoint supports.
///
/// # Panics
/// If `p` and `q` differ in length.
pub fn renyi_divergence<T: Real>(p: &[T], q: &[T], alpha: Alpha<T>) -> T {
    assert_eq!(p.len(), q.len(), "divergence arguments differ in length");
    let zero = T::zero();
    let support = || p.iter().zip(q).filter(|(&pi, _)| pi > zero);
    let escapes = || support().any(|(_, &qi)| qi <= zero);
    match alpha {
        Alpha::Infinity => {
            if escapes() {
                return T::infinity();
            }
            support().map(|(&pi, &qi)| pi.ln() - qi.ln()).fold(T::neg_infinity(), T::max)
        }
        Alpha::Finite(a) if a == zero => {
            let mass: T = support().map(|(_, &qi)| qi).sum();
            if mass > zero {
                -mass.ln()
            } else {
                T::infinity()
            }
        }
        Alpha::Finite(a) if a == T::one() => {
            if escapes() {
                return T::infinity();
            }
            support().map(|(&pi, &qi)| pi * (pi.ln() - qi.ln())).sum()
        }
        Alpha::Finite(a) => {
            if a > T::one() && escapes() {
                return T::infinity();
            }
            let terms = support()
                .filter(|(_, &qi)| qi > zero)
                .map(|(&pi, &qi)| a * pi.ln() + (T::one() - a) * qi.ln());
            let lse = log_sum_exp(terms);
            if lse == T::neg_infinity() {
                return T::infinity();
            }
            lse / (a - T::one())
        }
    }
}

/// Smallest `lambda` with `Σ (p_i - lambda q_i)_+ <= eps`; `+inf` when mass
/// on `q`-null entries alone exceeds `eps`.
fn shaving_level<T: Real>(p: &[T], q: &[T], eps: T) -> T {
    let zero = T::zero();
    // ratios, descending; q-null entries first
    let mut idx: Vec<usize> = (0..p.len()).filter(|&i| p[i] > zero).collect();
    let ratio = |i: usize| if q[i] > zero { p[i] / q[i] } else { T::infinity() };
    idx.sort_by(|&i, &j| ratio(j).partial_cmp(&ratio(i)).unwrap_or(Ordering::Equal).then(i.cmp(&j)));

    let (mut mass, mut weight) = (zero, zero);
    for (k, &i) in idx.iter().enumerate() {
        mass = mass + p[i];
        weight = weight + q[i];
        let next = idx.get(k + 1).map_or(zero, |&j| ratio(j));
        if weight == zero {
            if next < T::infinity() && mass > eps {
                return T::infinity();
            }
            continue;
        }
        // excess at the next breakpoint
        if mass - next * weight > eps {
            return (mass - eps) / weight;
        }
    }
    zero
}

/// `min D_inf(p~ || q)` over the `eps` total-variation ball around `p`.
///
/// The largest ratios `p_i / q_i` are capped at a common level and the shaved
/// mass is moved onto entries below the cap. The optimum is
/// `ln max(lambda*, 1)` with `lambda*` the smallest cap whose shaved mass
/// fits in `eps`.
///
/// # Panics
/// If `p` and `q` differ in length.
pub fn smooth_d_inf<T: Real>(p: &[T], q: &[T], eps: SmoothingParameter<T>) -> T {
    assert_eq!(p.len(), q.len(), "divergence arguments differ in length");
    let eps = eps.value();
    if eps == T::zero() {
        return renyi_divergence(p, q, Alpha::Infinity);
    }
    if eps >= T::one() {
        return T::zero();
    }
    let lambda = shaving_level(p, q, eps);
    lambda.max(T::one()).ln()
}

/// Indices dropped from the support of `p` to maximize the `q`-mass removed,
/// subject to the dropped `p`-mass staying within `budget`. Exact.
fn best_drop_set<T: Real>(p: &[T], q: &[T], budget: T) -> Vec<usize> {
    let zero = T::zero();
    let mut items: Vec<usize> = (0..p.len()).filter(|&i| p[i] > zero && q[i] > zero).collect();
    let uniform = q.windows(2).all(|w| w[0] == w[1]);
    if uniform {
        // equal values: dropping the lightest entries first is optimal
        items.sort_by(|&i, &j| p[i].partial_cmp(&p[j]).unwrap_or(Ordering::Equal).then(i.cmp(&j)));
        let mut used = zero;
        let mut drop = Vec::new();
        for i in items {
            if used + p[i] > budget {
                break;
            }
            used = used + p[i];
            drop.push(i);
        }
        return drop;
    }
    // 0/1 knapsack by branch and bound: weights p_i, values q_i
    items.sort_by(|&i, &j| {
        (q[j] / p[j]).partial_cmp(&(q[i] / p[i])).unwrap_or(Ordering::Equal).then(i.cmp(&j))
    });
    let mut search = Knapsack {
        w: items.iter().map(|&i| p[i]).collect(),
        v: items.iter().map(|&i| q[i]).collect(),
        best_value: zero,
        best: Vec::new(),
        chosen: Vec::new(),
    };
    search.branch(0, budget, zero);
    search.best.into_iter().map(|k| items[k]).collect()
}

struct Knapsack<T> {
    w: Vec<T>,
    v: Vec<T>,
    best_value: T,
    best: Vec<usize>,
    chosen: Vec<usize>,
}

impl<T: Real> Knapsack<T> {
    /// Fractional relaxation from item `k` with `room` capacity left.
    fn bound(&self, k: usize, room: T) -> T {
        let mut room = room;
        let mut total = T::zero();
        for j in k..self.w.len() {
            if self.w[j] <= room {
                room = room - self.w[j];
                total = total + self.v[j];
            } else {
                return total + self.v[j] * room / self.w[j];
            }
        }
        total
    }

    fn branch(&mut self, k: usize, room: T, value: T) {
        if value > self.best_value {
            self.best_value = value;
            self.best = self.chosen.clone();
        }
        if k == self.w.len() || value + self.bound(k, room) <= self.best_value {
            return;
        }
        if self.w[k] <= room {
            self.chosen.push(k);
            self.branch(k + 1, room - self.w[k], value + self.v[k]);
            self.chosen.pop();
        }
        self.branch(k + 1, room, value);
    }
}

/// `max D_0(p~ || q)` over the `eps` total-variation ball around `p`.
///
/// Maximizing `D_0` means shrinking the `q`-mass of the support: entries of
/// `p` whose total mass fits in `eps` are dropped so as to remove as much
/// `q`-mass as possible. For uniform `q` that is smallest-first; otherwise an
/// exact branch and bound over drop sets is used.
///
/// # Panics
/// If `p` and `q` differ in length.
pub fn smooth_d_0<T: Real>(p: &[T], q: &[T], eps: SmoothingParameter<T>) -> T {
    assert_eq!(p.len(), q.len(), "divergence arguments differ in length");
    let eps = eps.value();
    if eps == T::zero() {
        return renyi_divergence(p, q, Alpha::zero());
    }
    let budget = eps + T::tol(DISCARD_TOL);
    if budget >= T::one() {
        // all of p may move onto any single entry
        let m = q.iter().copied().fold(T::infinity(), T::min);
        return if m > T::zero() { -m.ln() } else { T::infinity() };
    }
    let drop = best_drop_set(p, q, budget);
    let mut keep = vec![false; p.len()];
    for (i, &pi) in p.iter().enumerate() {
        keep[i] = pi > T::zero();
    }
    for i in drop {
        keep[i] = false;
    }
    let mass: T = q.iter().zip(&keep).filter(|(_, &k)| k).map(|(&qi, _)| qi).sum();
    if mass > T::zero() {
        -mass.ln()
    } else {
        T::infinity()
    }
}

/// Smallest support size reachable by discarding at most `eps` of the
/// probability, smallest entries first. At least one.
pub fn smooth_support_size<T: Real>(p: &[T], eps: SmoothingParameter<T>) -> usize {
    let budget = eps.value() + T::tol(DISCARD_TOL);
    let mut support: Vec<T> = p.iter().copied().filter(|&x| x > T::zero()).collect();
    support.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let mut used = T::zero();
    let mut dropped = 0;
    for &x in &support {
        if used + x > budget {
            break;
        }
        used = used + x;
        dropped += 1;
    }
    (support.len() - dropped).max(1)
}

/// Smooth max-entropy `H_0^eps = ln` of [`smooth_support_size`].
pub fn smooth_h0<T: Real>(p: &[T], eps: SmoothingParameter<T>) -> T {
    T::from_usize_lossy(smooth_support_size(p, eps)).ln()
}

/// Smooth min-entropy `H_inf^eps = ln d - D_inf^eps(p || u_d)`.
pub fn smooth_hinf<T: Real>(p: &[T], eps: SmoothingParameter<T>) -> T {
    if eps.value() == T::zero() {
        return renyi_entropy(p, Alpha::Infinity);
    }
    let d = T::from_usize_lossy(p.len());
    let u = vec![d.recip(); p.len()];
    d.ln() - smooth_d_inf(p, &u, eps)
}

/// Fewest bits `ceil(log2 s)` that encode `p` after discarding at most `eps`
/// of its probability, `s` being the surviving support size.
pub fn compression_length<T: Real>(p: &[T], eps: SmoothingParameter<T>) -> u32 {
    ceil_log2(smooth_support_size(p, eps))
}

pub(crate) fn ceil_log2(s: usize) -> u32 {
    debug_assert!(s >= 1);
    s.next_power_of_two().trailing_zeros()
}
