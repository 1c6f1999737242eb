//! The palette Lagrangian: maximization of the cubic
//! `Σ_{(x,y,z)∈T} p(x)·p(y)·p(z)` over probability distributions on the
//! colors, by multi-start projected gradient ascent, together with an exact
//! grid-search lower-bound oracle.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::palette::{Palette, Rational};

/// Allowed deviation of a simplex point's coordinate sum from 1.
pub const SIMPLEX_SUM_TOLERANCE: f64 = 1e-12;
/// Default number of random restarts (the uniform start is always added).
pub const DEFAULT_RESTARTS: u32 = 200;
/// Default first-order stationarity tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
/// Iteration cap per start.
pub const MAX_ITERATIONS: usize = 10_000;
/// Color-count guard for the exhaustive grid oracle.
pub const GRID_ORACLE_MAX_COLORS: usize = 5;

/// A probability distribution over a palette's colors.
#[derive(Clone, PartialEq, Debug)]
pub struct SimplexPoint {
    weights: Vec<f64>,
}

#[derive(Clone, PartialEq, Debug, Error)]
pub enum SimplexError {
    #[error("a simplex point needs at least one weight")]
    Empty,
    #[error("weight {value} at index {index} lies outside [0, 1]")]
    OutOfRange { index: usize, value: f64 },
    #[error("weights sum to {sum}, not 1")]
    BadSum { sum: f64 },
}

impl SimplexPoint {
    pub fn new(weights: Vec<f64>) -> Result<Self, SimplexError> {
        if weights.is_empty() {
            return Err(SimplexError::Empty);
        }
        for (index, &value) in weights.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) || value.is_nan() {
                return Err(SimplexError::OutOfRange { index, value });
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_SUM_TOLERANCE {
            return Err(SimplexError::BadSum { sum });
        }
        Ok(SimplexPoint { weights })
    }

    /// The uniform distribution on `n ≥ 1` colors.
    pub fn uniform(n: usize) -> Self {
        assert!(n >= 1, "a palette has at least one color");
        SimplexPoint {
            weights: vec![1.0 / n as f64; n],
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dimension(&self) -> usize {
        self.weights.len()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
#[error("point has {point} weights but the palette has {palette} colors")]
pub struct DimensionMismatch {
    pub palette: usize,
    pub point: usize,
}

fn check_dimension(p: &Palette, x: &SimplexPoint) -> Result<(), DimensionMismatch> {
    if p.color_count() != x.dimension() {
        return Err(DimensionMismatch {
            palette: p.color_count(),
            point: x.dimension(),
        });
    }
    Ok(())
}

/// `Σ_{(x,y,z)∈T} w(x)·w(y)·w(z)` at the given point.
pub fn objective(p: &Palette, x: &SimplexPoint) -> Result<f64, DimensionMismatch> {
    check_dimension(p, x)?;
    Ok(objective_raw(p, x.weights()))
}

fn objective_raw(p: &Palette, w: &[f64]) -> f64 {
    p.triples()
        .iter()
        .map(|t| w[t.left.0] * w[t.middle.0] * w[t.right.0])
        .sum()
}

/// Gradient of the objective: component `c` sums, over every occurrence of
/// `c` in a triple, the product of the other two weights (a triple using `c`
/// twice contributes two terms).
pub fn gradient(p: &Palette, x: &SimplexPoint) -> Result<Vec<f64>, DimensionMismatch> {
    check_dimension(p, x)?;
    Ok(gradient_raw(p, x.weights()))
}

fn gradient_raw(p: &Palette, w: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; w.len()];
    for t in p.triples() {
        let (l, m, r) = (t.left.0, t.middle.0, t.right.0);
        g[l] += w[m] * w[r];
        g[m] += w[l] * w[r];
        g[r] += w[l] * w[m];
    }
    g
}

/// Euclidean projection onto the probability simplex by the standard
/// sort-and-threshold rule.
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("no NaN weights"));
    let mut cumulative = 0.0;
    let mut threshold = 0.0;
    for (j, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let candidate = (cumulative - 1.0) / (j + 1) as f64;
        if u - candidate > 0.0 {
            threshold = candidate;
        }
    }
    // The min(1) guards against one-ulp overshoot when a single coordinate
    // carries all the mass.
    v.iter().map(|&x| (x - threshold).clamp(0.0, 1.0)).collect()
}

/// Outcome of the multi-start maximization.
#[derive(Clone, Debug)]
pub struct LagrangianResult {
    /// Best objective value found; equals `objective(argmax)`.
    pub value: f64,
    pub argmax: SimplexPoint,
    /// Gradient at `argmax`.
    pub gradient: Vec<f64>,
    /// First-order optimality violation at `argmax`: spread of the gradient
    /// over the support plus any off-support excess.
    pub kkt_residual: f64,
    /// Number of ascent runs performed (random restarts plus the uniform
    /// start).
    pub restarts_used: u32,
}

/// Maximizes the palette objective over the simplex: `restarts` seeded
/// random starts plus the uniform start, each run by projected gradient
/// ascent with backtracking line search to stationarity within `tol`.
/// Deterministic for a fixed `(palette, restarts, tol, seed)`.
pub fn lagrangian(p: &Palette, restarts: u32, tol: f64, seed: u64) -> LagrangianResult {
    let n = p.color_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut runs = 0u32;
    let mut consider = |candidate: Vec<f64>, value: f64| {
        if best.as_ref().is_none_or(|(bv, _)| value > *bv) {
            best = Some((value, candidate));
        }
    };

    let (x, value) = ascend(p, vec![1.0 / n as f64; n], tol);
    runs += 1;
    consider(x, value);
    for _ in 0..restarts {
        let x0 = random_simplex_point(&mut rng, n);
        let (x, value) = ascend(p, x0, tol);
        runs += 1;
        consider(x, value);
    }

    let (mut value, mut weights) = best.expect("at least the uniform start ran");
    // First-order ascent resolves the argument only to ~sqrt(eps); a few
    // Newton steps on the support's stationarity system push the gradient
    // equality to machine precision. Kept only when it does not lose
    // objective value or optimality.
    if let Some(polished) = polish_on_support(p, &weights, tol) {
        let polished_value = objective_raw(p, &polished);
        let polished_gradient = gradient_raw(p, &polished);
        let current_gradient = gradient_raw(p, &weights);
        let polished_kkt = kkt_residual(&polished, &polished_gradient, tol);
        let current_kkt = kkt_residual(&weights, &current_gradient, tol);
        if polished_kkt <= current_kkt && polished_value >= value - 1e-12 {
            weights = polished;
            value = polished_value;
        }
    }
    let gradient = gradient_raw(p, &weights);
    let kkt_residual = kkt_residual(&weights, &gradient, tol);
    let argmax = SimplexPoint { weights };
    LagrangianResult {
        value,
        argmax,
        gradient,
        kkt_residual,
        restarts_used: runs,
    }
}

/// Hessian of the cubic objective at `w`.
fn hessian_raw(p: &Palette, w: &[f64]) -> Vec<Vec<f64>> {
    let n = w.len();
    let mut h = vec![vec![0.0; n]; n];
    for t in p.triples() {
        let (l, m, r) = (t.left.0, t.middle.0, t.right.0);
        h[l][m] += w[r];
        h[m][l] += w[r];
        h[l][r] += w[m];
        h[r][l] += w[m];
        h[m][r] += w[l];
        h[r][m] += w[l];
    }
    h
}

/// Damped Newton iteration on the stationarity system of the face spanned
/// by the support of `x`: gradient components equal to a multiplier on the
/// support, weights summing to one. The ridge term keeps the step defined
/// when flat optima make the Hessian singular; the best-residual iterate
/// wins. Returns the refined point, or `None` when nothing feasible
/// improves on the input.
fn polish_on_support(p: &Palette, x: &[f64], tol: f64) -> Option<Vec<f64>> {
    let support: Vec<usize> = (0..x.len()).filter(|&i| x[i] > tol).collect();
    let k = support.len();
    if k == 0 {
        return None;
    }
    let mut w = x.to_vec();
    for v in &mut w {
        if *v <= tol {
            *v = 0.0;
        }
    }
    let residual_of = |w: &[f64], multiplier: f64| -> f64 {
        let g = gradient_raw(p, w);
        let sum: f64 = support.iter().map(|&i| w[i]).sum();
        let mut r = (sum - 1.0).abs();
        for &i in &support {
            r = r.max((g[i] - multiplier).abs());
        }
        r
    };
    let mut multiplier = {
        let g = gradient_raw(p, &w);
        support.iter().map(|&i| g[i]).sum::<f64>() / k as f64
    };
    let mut best = (residual_of(&w, multiplier), w.clone());
    let mut ridge = 0.0f64;

    for _ in 0..80 {
        let residual = residual_of(&w, multiplier);
        if residual < best.0 {
            best = (residual, w.clone());
        }
        if residual <= 1e-15 {
            break;
        }
        let g = gradient_raw(p, &w);
        let h = hessian_raw(p, &w);
        let sum: f64 = support.iter().map(|&i| w[i]).sum();
        // KKT system: stationarity rows on the support plus the simplex
        // equality; unknowns are the support weights and the multiplier.
        let dim = k + 1;
        let mut matrix = vec![vec![0.0; dim + 1]; dim];
        for (row, &i) in support.iter().enumerate() {
            for (col, &j) in support.iter().enumerate() {
                matrix[row][col] = h[i][j];
            }
            matrix[row][row] += ridge;
            matrix[row][k] = -1.0;
            matrix[row][dim] = -(g[i] - multiplier);
        }
        matrix[k][..k].fill(1.0);
        matrix[k][dim] = -(sum - 1.0);

        let mut raise_ridge = || {
            if ridge == 0.0 {
                ridge = 1e-8;
                true
            } else {
                ridge *= 100.0;
                ridge <= 1.0
            }
        };
        let Some(delta) = solve_dense(&mut matrix) else {
            if raise_ridge() {
                continue;
            }
            break;
        };
        let mut next = w.clone();
        for (idx, &i) in support.iter().enumerate() {
            next[i] += delta[idx];
        }
        let next_multiplier = multiplier + delta[k];
        let feasible = next.iter().all(|&v| (-1e-9..=1.0 + 1e-9).contains(&v));
        if feasible && residual_of(&next, next_multiplier) <= residual {
            w = next;
            multiplier = next_multiplier;
            if ridge > 0.0 {
                ridge = if ridge <= 1e-12 { 0.0 } else { ridge / 10.0 };
            }
        } else if !raise_ridge() {
            break;
        }
    }

    let (_, mut w) = best;
    // Clamp float dust and insist on a genuine simplex point.
    for v in &mut w {
        if *v < 0.0 {
            if *v < -1e-9 {
                return None;
            }
            *v = 0.0;
        }
        if *v > 1.0 {
            if *v > 1.0 + 1e-9 {
                return None;
            }
            *v = 1.0;
        }
    }
    let sum: f64 = w.iter().sum();
    if (sum - 1.0).abs() > SIMPLEX_SUM_TOLERANCE {
        return None;
    }
    Some(w)
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn solve_dense(matrix: &mut [Vec<f64>]) -> Option<Vec<f64>> {
    let n = matrix.len();
    for col in 0..n {
        let pivot_row = (col..n).max_by(|&a, &b| {
            matrix[a][col]
                .abs()
                .partial_cmp(&matrix[b][col].abs())
                .expect("finite")
        })?;
        if matrix[pivot_row][col].abs() < 1e-12 {
            return None;
        }
        matrix.swap(col, pivot_row);
        let (pivot_rows, rest) = matrix.split_at_mut(col + 1);
        let pivot = &pivot_rows[col];
        for row in rest.iter_mut() {
            let factor = row[col] / pivot[col];
            for (target, &source) in row[col..=n].iter_mut().zip(&pivot[col..=n]) {
                *target -= factor * source;
            }
        }
    }
    let mut solution = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = matrix[row][n];
        for col in (row + 1)..n {
            acc -= matrix[row][col] * solution[col];
        }
        solution[row] = acc / matrix[row][row];
    }
    Some(solution)
}

fn random_simplex_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    // Normalized unit exponentials sample the simplex uniformly.
    let mut w: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let sum: f64 = w.iter().sum();
    if sum <= 0.0 {
        return vec![1.0 / n as f64; n];
    }
    for x in &mut w {
        *x /= sum;
    }
    w
}

/// One projected-gradient-ascent run. Stationarity is measured by the
/// unit-step probe `‖proj(x + g) − x‖_∞`.
fn ascend(p: &Palette, mut x: Vec<f64>, tol: f64) -> (Vec<f64>, f64) {
    let mut f = objective_raw(p, &x);
    for _ in 0..MAX_ITERATIONS {
        let g = gradient_raw(p, &x);
        let probe: Vec<f64> =
            project_to_simplex(&x.iter().zip(&g).map(|(a, b)| a + b).collect::<Vec<_>>());
        let residual = probe
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        if residual <= tol {
            break;
        }
        let mut step = 1.0;
        let mut advanced = false;
        while step >= 1e-16 {
            let candidate = if step == 1.0 {
                probe.clone()
            } else {
                project_to_simplex(
                    &x.iter()
                        .zip(&g)
                        .map(|(a, b)| a + step * b)
                        .collect::<Vec<_>>(),
                )
            };
            let gain: f64 = g
                .iter()
                .zip(candidate.iter().zip(&x))
                .map(|(gi, (c, xi))| gi * (c - xi))
                .sum();
            let value = objective_raw(p, &candidate);
            if gain <= 0.0 {
                // The projection arc has collapsed; the point is stationary.
                advanced = false;
                break;
            }
            if value >= f + 1e-4 * gain {
                x = candidate;
                f = value;
                advanced = true;
                break;
            }
            step *= 0.5;
        }
        if !advanced {
            break;
        }
    }
    (x, f)
}

/// First-order optimality violation: over the support (weights above `tol`)
/// the gradient components must coincide, and off the support they may not
/// exceed the common value.
fn kkt_residual(weights: &[f64], gradient: &[f64], tol: f64) -> f64 {
    let mut support_max = f64::NEG_INFINITY;
    let mut support_min = f64::INFINITY;
    let mut off_max = f64::NEG_INFINITY;
    for (&w, &g) in weights.iter().zip(gradient) {
        if w > tol {
            support_max = support_max.max(g);
            support_min = support_min.min(g);
        } else {
            off_max = off_max.max(g);
        }
    }
    if support_max == f64::NEG_INFINITY {
        return 0.0;
    }
    let spread = support_max - support_min;
    let excess = (off_max - support_max).max(0.0);
    spread.max(if off_max == f64::NEG_INFINITY {
        0.0
    } else {
        excess
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
pub enum GridOracleError {
    #[error("grid oracle supports at most {max} colors, palette has {got}")]
    TooManyColors { got: usize, max: usize },
    #[error("grid oracle needs at least one grid step")]
    ZeroGridSteps,
}

/// Exhaustive evaluation of the objective on every simplex grid point with
/// denominator `grid_steps`, in exact rational arithmetic. The returned
/// maximum is a certified lower bound on the Lagrangian.
pub fn brute_force_lagrangian(p: &Palette, grid_steps: u32) -> Result<Rational, GridOracleError> {
    if grid_steps == 0 {
        return Err(GridOracleError::ZeroGridSteps);
    }
    let n = p.color_count();
    if n > GRID_ORACLE_MAX_COLORS {
        return Err(GridOracleError::TooManyColors {
            got: n,
            max: GRID_ORACLE_MAX_COLORS,
        });
    }
    let g = grid_steps as u128;
    let mut best = Rational::new(0, 1);
    let mut counts = vec![0u32; n];
    enumerate_compositions(grid_steps, 0, &mut counts, &mut |counts| {
        let numerator: u128 = p
            .triples()
            .iter()
            .map(|t| {
                counts[t.left.0] as u128 * counts[t.middle.0] as u128 * counts[t.right.0] as u128
            })
            .sum();
        let value = Ratio::new(numerator, g * g * g);
        if value > best {
            best = value;
        }
    });
    Ok(best)
}

fn enumerate_compositions(
    remaining: u32,
    index: usize,
    counts: &mut Vec<u32>,
    visit: &mut impl FnMut(&[u32]),
) {
    if index + 1 == counts.len() {
        counts[index] = remaining;
        visit(counts);
        return;
    }
    for k in 0..=remaining {
        counts[index] = k;
        enumerate_compositions(remaining - k, index + 1, counts, visit);
    }
}
