//! Thermal operations and quasiclassical transformability.
//!
//! A thermal operation draws a Gibbs bath, applies a unitary commuting with
//! the total Hamiltonian, and discards the bath. On quasiclassical states
//! its action is a Gibbs-preserving stochastic map; exact feasibility is
//! decided by thermomajorization (Lorenz curves), and the Rényi-divergence
//! monotones give a necessary condition.

use std::cmp::Ordering;

use nalgebra::RealField;
use num_complex::Complex;
use rand::Rng;

use crate::entropies::{renyi_divergence, Alpha};
use crate::error::{Error, Result};
use crate::num::Real;
use crate::states::{
    gibbs_state, max_abs, tensor_capped, CMatrix, DensityState, EnergyLevels, InverseTemperature,
    QuasiState, WorkBit, DEFAULT_DIM_CAP,
};

/// Conservation tolerance used by [`apply_thermal_operation`].
pub const CONSERVATION_TOL: f64 = 1e-9;

/// Tolerance for Lorenz-curve comparisons.
pub const CURVE_TOL: f64 = 1e-10;

/// Slack in the second-laws monotone comparison.
pub const MONOTONE_TOL: f64 = 1e-9;

/// Heat bath: a level set at inverse temperature `beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct BathSpec<T> {
    pub energies: EnergyLevels<T>,
    pub beta: InverseTemperature<T>,
}

impl<T: Real> BathSpec<T> {
    pub fn new(energies: EnergyLevels<T>, beta: InverseTemperature<T>) -> Self {
        Self { energies, beta }
    }

    pub fn gibbs(&self) -> QuasiState<T> {
        gibbs_state(&self.energies, self.beta)
    }
}

fn diag<T: Real + RealField>(values: &[T]) -> CMatrix<T> {
    CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        values.len(),
        values.iter().map(|&v| Complex::new(v, T::zero())),
    ))
}

/// Unitary permuting basis states: `|i> -> |perm[i]>`.
///
/// # Panics
/// If `perm` is not a permutation of `0..perm.len()`.
pub fn permutation_unitary<T: Real + RealField>(perm: &[usize]) -> CMatrix<T> {
    let d = perm.len();
    let mut seen = vec![false; d];
    let mut u = CMatrix::zeros(d, d);
    for (i, &j) in perm.iter().enumerate() {
        assert!(j < d && !seen[j], "not a permutation");
        seen[j] = true;
        u[(j, i)] = Complex::new(T::one(), T::zero());
    }
    u
}

/// Swap of two `d`-level systems: `|i, j> -> |j, i>`.
pub fn swap_unitary<T: Real + RealField>(d: usize) -> CMatrix<T> {
    let perm: Vec<usize> = (0..d * d).map(|k| (k % d) * d + k / d).collect();
    permutation_unitary(&perm)
}

/// `H ⊗ 1 + 1 ⊗ H_b`.
pub fn total_hamiltonian<T: Real + RealField>(system: &CMatrix<T>, bath: &CMatrix<T>) -> CMatrix<T> {
    let is = CMatrix::identity(system.nrows(), system.nrows());
    let ib = CMatrix::identity(bath.nrows(), bath.nrows());
    system.kronecker(&ib) + is.kronecker(bath)
}

/// Traces out the second factor of a `da * db` dimensional operator.
pub fn partial_trace_second<T: Real + RealField>(m: &CMatrix<T>, da: usize, db: usize) -> CMatrix<T> {
    assert_eq!(m.nrows(), da * db, "operator dimension does not split");
    CMatrix::from_fn(da, da, |i, j| {
        (0..db).fold(Complex::new(T::zero(), T::zero()), |acc, k| acc + m[(i * db + k, j * db + k)])
    })
}

/// Whether `u` commutes with `h_tot`, up to `tol` in the largest entry.
///
/// Fails with [`Error::NotUnitary`] if `u` is not unitary within `tol`.
pub fn check_energy_conserving<T: Real + RealField>(u: &CMatrix<T>, h_tot: &CMatrix<T>, tol: T) -> Result<bool> {
    if !u.is_square() || u.shape() != h_tot.shape() {
        return Err(Error::LengthMismatch { expected: h_tot.nrows(), found: u.nrows() });
    }
    let id = CMatrix::identity(u.nrows(), u.nrows());
    let defect = max_abs(&(u.adjoint() * u - id));
    if defect > tol {
        return Err(Error::NotUnitary(defect.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(max_abs(&(u * h_tot - h_tot * u)) <= tol)
}

/// `Tr_bath( U (rho ⊗ gamma_b) U† )`, paired with the system Hamiltonian.
pub fn apply_thermal_operation<T: Real + RealField>(
    system: &DensityState<T>,
    bath: &BathSpec<T>,
    u: &CMatrix<T>,
) -> Result<DensityState<T>> {
    let (ds, db) = (system.dim(), bath.energies.len());
    let h_b = diag(bath.energies.as_slice());
    let h_tot = total_hamiltonian(system.hamiltonian(), &h_b);
    if u.nrows() != ds * db {
        return Err(Error::LengthMismatch { expected: ds * db, found: u.nrows() });
    }
    let tol = T::tol(CONSERVATION_TOL);
    if !check_energy_conserving(u, &h_tot, tol)? {
        let comm = max_abs(&(u * &h_tot - &h_tot * u));
        return Err(Error::NotThermalOperation(comm.to_f64().unwrap_or(f64::NAN)));
    }
    let gamma = diag(bath.gibbs().probs());
    let joint = system.rho().kronecker(&gamma);
    let rotated = u * joint * u.adjoint();
    let mut reduced = partial_trace_second(&rotated, ds, db);
    // restore exact Hermiticity lost to rounding
    reduced = (&reduced + reduced.adjoint()) * Complex::new(T::lit(0.5), T::zero());
    DensityState::new(reduced, system.hamiltonian().clone())
}

/// Replaces the state by the Gibbs state of its own levels.
pub fn full_thermalization<T: Real>(s: &QuasiState<T>, beta: InverseTemperature<T>) -> QuasiState<T> {
    gibbs_state(s.energies(), beta)
}

/// `(1 - lambda) p + lambda gamma`, energies unchanged.
pub fn partial_thermalization<T: Real>(
    s: &QuasiState<T>,
    beta: InverseTemperature<T>,
    lambda: T,
) -> Result<QuasiState<T>> {
    check_lambda(lambda)?;
    let g = gibbs_state(s.energies(), beta);
    let probs = s
        .probs()
        .iter()
        .zip(g.probs())
        .map(|(&p, &gi)| (T::one() - lambda) * p + lambda * gi)
        .collect();
    Ok(QuasiState::from_parts_unchecked(probs, s.energies().clone()))
}

fn check_lambda<T: Real>(lambda: T) -> Result<()> {
    if lambda >= T::zero() && lambda <= T::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("thermalization strength must lie in [0, 1], got {lambda}")))
    }
}

/// Sudden switch to `new_energies`; occupations are frozen.
pub fn quench<T: Real>(s: &QuasiState<T>, new_energies: &EnergyLevels<T>) -> Result<QuasiState<T>> {
    s.with_energies(new_energies.clone())
}

/// Column-stochastic matrix acting on probability vectors; entry
/// `(to, from)` is the transition probability.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMap<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Real> StochasticMap<T> {
    /// Builds a map from rows, `rows[to][from]`.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidStochasticMap("matrix must be square and non-empty".into()));
        }
        let data: Vec<T> = rows.into_iter().flatten().collect();
        let map = Self { dim, data };
        map.validate()?;
        Ok(map)
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![T::zero(); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = T::one();
        }
        Self { dim, data }
    }

    /// Every column equal to `target`: replaces any input by `target`.
    pub fn replacement(target: &[T]) -> Self {
        let dim = target.len();
        let data = (0..dim * dim).map(|k| target[k / dim]).collect();
        Self { dim, data }
    }

    fn validate(&self) -> Result<()> {
        let neg = T::tol(1e-12);
        let col = T::tol(1e-10);
        if self.data.iter().any(|&x| !x.is_finite() || x < -neg) {
            return Err(Error::InvalidStochasticMap("entries must be finite and nonnegative".into()));
        }
        for j in 0..self.dim {
            let s: T = (0..self.dim).map(|i| self.get(i, j)).sum();
            if (s - T::one()).abs() > col {
                return Err(Error::InvalidStochasticMap(format!("column {j} sums to {s}")));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Transition probability `from -> to`.
    pub fn get(&self, to: usize, from: usize) -> T {
        self.data[to * self.dim + from]
    }

    /// # Panics
    /// If `p` has the wrong length.
    pub fn apply(&self, p: &[T]) -> Vec<T> {
        assert_eq!(p.len(), self.dim, "vector length does not match map");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * p[j]).sum())
            .collect()
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &Self) -> Self {
        assert_eq!(self.dim, first.dim);
        let d = self.dim;
        let data = (0..d * d)
            .map(|k| {
                let (i, j) = (k / d, k % d);
                (0..d).map(|m| self.get(i, m) * first.get(m, j)).sum()
            })
            .collect();
        Self { dim: d, data }
    }

    /// Convex combination `w self + (1 - w) other`.
    pub fn mix(&self, other: &Self, w: T) -> Self {
        assert_eq!(self.dim, other.dim);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| w * a + (T::one() - w) * b)
            .collect();
        Self { dim: self.dim, data }
    }

    /// Largest `|M(i <- j) g_j - M(j <- i) g_i|` against the stationary
    /// candidate `g`.
    pub fn detailed_balance_defect(&self, g: &[T]) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in 0..i {
                worst = worst.max((self.get(i, j) * g[j] - self.get(j, i) * g[i]).abs());
            }
        }
        worst
    }
}

/// Kernel of partial thermalization: `(1 - lambda) 1 + lambda gamma 1^T`.
pub fn thermalization_kernel<T: Real>(
    energies: &EnergyLevels<T>,
    beta: InverseTemperature<T>,
    lambda: T,
) -> Result<StochasticMap<T>> {
    check_lambda(lambda)?;
    let g = gibbs_state(energies, beta);
    Ok(StochasticMap::identity(energies.len()).mix(&StochasticMap::replacement(g.probs()), T::one() - lambda))
}

/// Whether `m` fixes the Gibbs state of `energies` within `tol`.
pub fn is_gibbs_stochastic<T: Real>(
    m: &StochasticMap<T>,
    energies: &EnergyLevels<T>,
    beta: InverseTemperature<T>,
    tol: T,
) -> bool {
    if m.dim() != energies.len() {
        return false;
    }
    let g = gibbs_state(energies, beta);
    let out = m.apply(g.probs());
    out.iter().zip(g.probs()).all(|(&a, &b)| (a - b).abs() <= tol)
}

/// Partial swap between levels `i` and `j` obeying detailed balance: rates
/// `strength * min(1, g_j / g_i)` for `i -> j` and the mirror for `j -> i`.
pub fn detailed_balance_swap<T: Real>(gibbs: &[T], i: usize, j: usize, strength: T) -> StochasticMap<T> {
    let mut m = StochasticMap::identity(gibbs.len());
    if i == j {
        return m;
    }
    let d = m.dim;
    let (gi, gj) = (gibbs[i], gibbs[j]);
    let up = if gi > T::zero() { strength * (gj / gi).min(T::one()) } else { strength };
    let down = if gj > T::zero() { strength * (gi / gj).min(T::one()) } else { strength };
    m.data[j * d + i] = up;
    m.data[i * d + i] = T::one() - up;
    m.data[i * d + j] = down;
    m.data[j * d + j] = T::one() - down;
    m
}

/// Random Gibbs-preserving map: a convex mixture of two products of
/// `n_primitives` random [`detailed_balance_swap`]s each.
pub fn random_gibbs_stochastic<T: Real, R: Rng + ?Sized>(
    energies: &EnergyLevels<T>,
    beta: InverseTemperature<T>,
    n_primitives: usize,
    rng: &mut R,
) -> StochasticMap<T> {
    let g = gibbs_state(energies, beta);
    let d = energies.len();
    let mut product = || {
        let mut m = StochasticMap::identity(d);
        if d < 2 {
            return m;
        }
        for _ in 0..n_primitives {
            let i = rng.random_range(0..d);
            let j = (i + rng.random_range(1..d)) % d;
            let t = T::lit(rng.random::<f64>());
            m = detailed_balance_swap(g.probs(), i, j, t).after(&m);
        }
        m
    };
    let a = product();
    let b = product();
    let w = T::lit(rng.random::<f64>());
    a.mix(&b, w)
}

/// A Rényi monotone that increased: `D_alpha(output || gamma) > D_alpha(input || gamma)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotoneViolation<T> {
    pub alpha: Alpha<T>,
    pub input: T,
    pub output: T,
}

/// Outcome of a transformability test.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformVerdict<T> {
    pub feasible: bool,
    /// Set when a passing verdict only certifies a necessary condition.
    pub necessary_only: bool,
    pub witness: Option<MonotoneViolation<T>>,
}

fn same_levels<T: Real>(p: &QuasiState<T>, q: &QuasiState<T>) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch { expected: p.len(), found: q.len() });
    }
    if p.energies() != q.energies() {
        return Err(Error::InvalidParameter("states must share energy levels".into()));
    }
    Ok(())
}

/// Necessary condition for `p -> q`: no `D_alpha(· || gamma)` on the grid
/// increases by more than `1e-9`.
pub fn second_laws_check<T: Real>(
    p: &QuasiState<T>,
    q: &QuasiState<T>,
    beta: InverseTemperature<T>,
    alpha_grid: &[Alpha<T>],
) -> Result<TransformVerdict<T>> {
    same_levels(p, q)?;
    let g = gibbs_state(p.energies(), beta);
    let slack = T::tol(MONOTONE_TOL);
    for &alpha in alpha_grid {
        let input = renyi_divergence(p.probs(), g.probs(), alpha);
        let output = renyi_divergence(q.probs(), g.probs(), alpha);
        let increased = if output == T::infinity() { input < T::infinity() } else { output > input + slack };
        if increased {
            return Ok(TransformVerdict {
                feasible: false,
                necessary_only: true,
                witness: Some(MonotoneViolation { alpha, input, output }),
            });
        }
    }
    Ok(TransformVerdict { feasible: true, necessary_only: true, witness: None })
}

/// Thermomajorization curve: cumulative Gibbs weight against cumulative
/// probability, levels taken in decreasing `p_i e^{beta E_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LorenzCurve<T> {
    vertices: Vec<(T, T)>,
}

impl<T: Real> LorenzCurve<T> {
    /// Vertices from the origin, `len + 1` of them.
    pub fn vertices(&self) -> &[(T, T)] {
        &self.vertices
    }

    /// The curve's height at `x`, clamped beyond its end.
    pub fn eval(&self, x: T) -> T {
        let mut best = T::zero();
        for w in self.vertices.windows(2) {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            if x >= x0 && x <= x1 {
                let y = if x1 > x0 { y0 + (y1 - y0) * (x - x0) / (x1 - x0) } else { y1 };
                best = best.max(y);
            }
        }
        let (xl, yl) = *self.vertices.last().expect("curve has vertices");
        if x >= xl {
            best = best.max(yl);
        }
        best
    }

    /// Whether this curve lies on or above `other` at every vertex of `other`.
    pub fn dominates(&self, other: &Self, tol: T) -> bool {
        other.vertices.iter().all(|&(x, y)| self.eval(x) >= y - tol)
    }
}

/// Level order used for thermomajorization: decreasing `ln p_i + beta E_i`,
/// ties broken by ascending index.
pub fn beta_order<T: Real>(s: &QuasiState<T>, beta: InverseTemperature<T>) -> Vec<usize> {
    let key = |i: usize| {
        let p = s.probs()[i];
        if p > T::zero() {
            p.ln() + beta.value() * s.energies().as_slice()[i]
        } else {
            T::neg_infinity()
        }
    };
    let mut idx: Vec<usize> = (0..s.len()).collect();
    idx.sort_by(|&i, &j| key(j).partial_cmp(&key(i)).unwrap_or(Ordering::Equal).then(i.cmp(&j)));
    idx
}

pub fn lorenz_curve<T: Real>(s: &QuasiState<T>, beta: InverseTemperature<T>) -> LorenzCurve<T> {
    let g = gibbs_state(s.energies(), beta);
    let mut vertices = Vec::with_capacity(s.len() + 1);
    let (mut x, mut y) = (T::zero(), T::zero());
    vertices.push((x, y));
    for i in beta_order(s, beta) {
        x = x + g.probs()[i];
        y = y + s.probs()[i];
        vertices.push((x, y));
    }
    LorenzCurve { vertices }
}

/// Exact feasibility of `p -> q` by thermal operations for states sharing
/// their levels: `p`'s curve must lie on or above `q`'s.
pub fn thermo_majorization_check<T: Real>(
    p: &QuasiState<T>,
    q: &QuasiState<T>,
    beta: InverseTemperature<T>,
) -> Result<bool> {
    same_levels(p, q)?;
    Ok(lorenz_curve(p, beta).dominates(&lorenz_curve(q, beta), T::tol(CURVE_TOL)))
}

fn work_bit_feasible<T: Real>(
    p: &QuasiState<T>,
    gamma: &QuasiState<T>,
    beta: InverseTemperature<T>,
    w: T,
) -> Result<bool> {
    let from = tensor_capped(p, &WorkBit::new(w, false)?.to_state(), DEFAULT_DIM_CAP)?;
    let to = tensor_capped(gamma, &WorkBit::new(w, true)?.to_state(), DEFAULT_DIM_CAP)?;
    thermo_majorization_check(&from, &to, beta)
}

/// Largest `W` (to within `precision`, approached from below) for which
/// `p ⊗ |0> -> gamma ⊗ |W>` thermomajorizes, with `gamma` the Gibbs state of
/// `p`'s levels. In energy units.
pub fn max_extractable_work<T: Real>(p: &QuasiState<T>, beta: InverseTemperature<T>, precision: T) -> Result<T> {
    if !(precision > T::zero()) {
        return Err(Error::InvalidParameter(format!("precision must be positive, got {precision}")));
    }
    let gamma = gibbs_state(p.energies(), beta);
    let mut lo = T::zero();
    if !work_bit_feasible(p, &gamma, beta, lo)? {
        return Ok(lo);
    }
    let mut hi = beta.temperature();
    let mut doublings = 0;
    while work_bit_feasible(p, &gamma, beta, hi)? {
        lo = hi;
        hi = hi + hi;
        doublings += 1;
        if doublings > 2000 || !hi.is_finite() {
            return Ok(lo);
        }
    }
    while hi - lo > precision {
        let mid = lo + (hi - lo) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if work_bit_feasible(p, &gamma, beta, mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
