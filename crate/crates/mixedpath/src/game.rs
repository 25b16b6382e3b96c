//! Mixed-path vectors over an action matrix and their optimal distributions.
//!
//! A mixed path assigns every enumerated momentum path a weight `alpha_j` and
//! every position path a weight `beta_k`, each in `[-1, 1]` and possibly
//! negative. The bilinear form `alpha^T S beta` is extremized three ways:
//! the closed-form equal-component solution, constrained first-order
//! stationarity (the dominant singular pair under the norm constraint), and
//! a classical zero-sum minimax LP for comparison.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::action::ActionMatrix;
use crate::error::{Error, Result};

/// Which normalization constrains a pair.
///
/// `SumForm` is `(sum alpha)^2 + (sum beta)^2 = 1`; `NormForm` is
/// `sum alpha^2 + sum beta^2 = 1`. Only the latter is preserved by the
/// amplitude module's balancing rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMode {
    SumForm,
    NormForm,
}

/// How a pair was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    EqualComponent,
    Stationary,
    MinimaxLp,
    Manual,
}

/// An (alpha, beta) weight pair over n paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedPathPair {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub norm_mode: NormMode,
    pub provenance: Provenance,
}

impl MixedPathPair {
    pub fn new(
        alpha: Vec<f64>,
        beta: Vec<f64>,
        norm_mode: NormMode,
        provenance: Provenance,
    ) -> Self {
        Self {
            alpha,
            beta,
            norm_mode,
            provenance,
        }
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// Post-hoc validation: component bounds and the norm-mode constraint.
    pub fn validate(&self) -> Result<()> {
        if self.alpha.len() != self.beta.len() {
            return Err(Error::DimensionMismatch {
                left: self.alpha.len(),
                right: self.beta.len(),
            });
        }
        for &v in self.alpha.iter().chain(self.beta.iter()) {
            if !(-1.0..=1.0).contains(&v) {
                return Err(Error::InvalidSpec(format!("component {v} outside [-1, 1]")));
            }
        }
        let value = self.constraint_value();
        if (value - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidSpec(format!(
                "{:?} constraint is {value}, expected 1",
                self.norm_mode
            )));
        }
        Ok(())
    }

    /// Value of the active normalization functional.
    pub fn constraint_value(&self) -> f64 {
        match self.norm_mode {
            NormMode::SumForm => {
                let sa: f64 = self.alpha.iter().sum();
                let sb: f64 = self.beta.iter().sum();
                sa * sa + sb * sb
            }
            NormMode::NormForm => {
                let na: f64 = self.alpha.iter().map(|v| v * v).sum();
                let nb: f64 = self.beta.iter().map(|v| v * v).sum();
                na + nb
            }
        }
    }
}

/// The bilinear form `alpha^T S beta`.
pub fn generalized_action(pair: &MixedPathPair, matrix: &ActionMatrix) -> Result<f64> {
    let n = matrix.n();
    if pair.alpha.len() != n || pair.beta.len() != n {
        return Err(Error::DimensionMismatch {
            left: pair.alpha.len(),
            right: n,
        });
    }
    let mut total = 0.0;
    for (j, &a) in pair.alpha.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        let mut row = 0.0;
        for (k, &b) in pair.beta.iter().enumerate() {
            row += matrix.entries[(j, k)] * b;
        }
        total += a * row;
    }
    Ok(total)
}

/// `(sum alpha)^2 + (sum beta)^2`; reduces to `alpha^2 + beta^2` for a
/// single path.
pub fn total_probability(pair: &MixedPathPair) -> f64 {
    let sa: f64 = pair.alpha.iter().sum();
    let sb: f64 = pair.beta.iter().sum();
    sa * sa + sb * sb
}

/// Closed-form extremum with every component of alpha equal and every
/// component of beta equal. The scale satisfies the norm-mode constraint with
/// |a| = |b|; signs follow `a >= 0`, `sign(b) = sign(sum of entries)` with
/// ties broken toward `b >= 0`.
pub fn solve_equal_component(matrix: &ActionMatrix, norm_mode: NormMode) -> MixedPathPair {
    let n = matrix.n();
    let a = match norm_mode {
        // (n a)^2 + (n b)^2 = 1 with |a| = |b|
        NormMode::SumForm => 1.0 / (n as f64 * std::f64::consts::SQRT_2),
        // n a^2 + n b^2 = 1 with |a| = |b|
        NormMode::NormForm => 1.0 / (2.0 * n as f64).sqrt(),
    };
    let b = if matrix.total() < 0.0 { -a } else { a };
    MixedPathPair::new(
        vec![a; n],
        vec![b; n],
        norm_mode,
        Provenance::EqualComponent,
    )
}

/// Solver report for [`solve_stationary`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StationarySolution {
    pub pair: MixedPathPair,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Set when the top two singular values agree to better than 1e-9
    /// relative (NormForm) or the linear system was singular (SumForm); the
    /// returned pair is then one member of a stationary family.
    pub degenerate: bool,
}

/// First-order stationary pair of `alpha^T S beta` under the constraint of
/// `init.norm_mode`.
///
/// NormForm runs alternating power updates `alpha <- S beta`,
/// `beta <- S^T alpha` with renormalization each sweep, converging to the
/// dominant singular pair (so `alpha` ends up parallel to `S beta`). SumForm
/// stationarity demands `S beta` and `S^T alpha` proportional to the ones
/// vector, which is a direct linear solve.
pub fn solve_stationary(
    matrix: &ActionMatrix,
    init: &MixedPathPair,
    tol: f64,
    max_iter: usize,
) -> Result<StationarySolution> {
    if tol <= 0.0 {
        return Err(Error::InvalidSpec("tol must be positive".into()));
    }
    if max_iter == 0 {
        return Err(Error::InvalidSpec("max_iter must be >= 1".into()));
    }
    let n = matrix.n();
    if init.alpha.len() != n || init.beta.len() != n {
        return Err(Error::DimensionMismatch {
            left: init.alpha.len(),
            right: n,
        });
    }
    match init.norm_mode {
        NormMode::NormForm => solve_stationary_norm_form(matrix, init, tol, max_iter),
        NormMode::SumForm => solve_stationary_sum_form(matrix, tol),
    }
}

fn solve_stationary_norm_form(
    matrix: &ActionMatrix,
    init: &MixedPathPair,
    tol: f64,
    max_iter: usize,
) -> Result<StationarySolution> {
    let n = matrix.n();
    let s = &matrix.entries;
    let half = 0.5f64.sqrt();

    let mut beta = Array1::from_vec(init.beta.clone());
    if norm(&beta) < 1e-300 {
        beta = Array1::from_elem(n, 1.0);
    }
    scale_to(&mut beta, half);
    let mut alpha = s.dot(&beta);
    if norm(&alpha) < 1e-300 {
        // zero matrix (or beta in the kernel): the gradient vanishes, every
        // normalized pair is stationary
        let mut alpha = Array1::from_vec(init.alpha.clone());
        if norm(&alpha) < 1e-300 {
            alpha = Array1::from_elem(n, 1.0);
        }
        scale_to(&mut alpha, half);
        let pair = MixedPathPair::new(
            alpha.to_vec(),
            beta.to_vec(),
            NormMode::NormForm,
            Provenance::Stationary,
        );
        let residual = stationarity_residual(matrix, &pair)?;
        return Ok(StationarySolution {
            pair,
            residual,
            iterations: 0,
            converged: residual <= tol,
            degenerate: true,
        });
    }
    scale_to(&mut alpha, half);

    let mut best: Option<(f64, Array1<f64>, Array1<f64>)> = None;
    for iteration in 1..=max_iter {
        let mut new_alpha = s.dot(&beta);
        if norm(&new_alpha) < 1e-300 {
            new_alpha = alpha.clone();
        }
        scale_to(&mut new_alpha, half);
        let mut new_beta = s.t().dot(&new_alpha);
        if norm(&new_beta) < 1e-300 {
            new_beta = beta.clone();
        }
        scale_to(&mut new_beta, half);
        alpha = new_alpha;
        beta = new_beta;

        let pair = MixedPathPair::new(
            alpha.to_vec(),
            beta.to_vec(),
            NormMode::NormForm,
            Provenance::Stationary,
        );
        let residual = stationarity_residual(matrix, &pair)?;
        if best.as_ref().is_none_or(|(r, _, _)| residual < *r) {
            best = Some((residual, alpha.clone(), beta.clone()));
        }
        if residual <= tol {
            return Ok(StationarySolution {
                pair,
                residual,
                iterations: iteration,
                converged: true,
                degenerate: top_gap_degenerate(matrix, &alpha, &beta),
            });
        }
    }

    // out of iterations: hand back the best iterate, flagged
    let (residual, alpha, beta) = best.expect("max_iter >= 1");
    let degenerate = top_gap_degenerate(matrix, &alpha, &beta);
    Ok(StationarySolution {
        pair: MixedPathPair::new(
            alpha.to_vec(),
            beta.to_vec(),
            NormMode::NormForm,
            Provenance::Stationary,
        ),
        residual,
        iterations: max_iter,
        converged: false,
        degenerate,
    })
}

/// Detects a near-degenerate dominant singular pair by deflated power
/// iteration: the flagged tie is `(sigma1 - sigma2)/sigma1 < 1e-9`.
fn top_gap_degenerate(matrix: &ActionMatrix, alpha: &Array1<f64>, beta: &Array1<f64>) -> bool {
    let s = &matrix.entries;
    let n = matrix.n();
    if n < 2 {
        return false;
    }
    let mut u = alpha.clone();
    scale_to(&mut u, 1.0);
    let mut v = beta.clone();
    scale_to(&mut v, 1.0);
    let sigma1 = u.dot(&s.dot(&v)).abs();
    if sigma1 < 1e-300 {
        return true;
    }
    let proj = |w: &mut Array1<f64>, dir: &Array1<f64>| {
        let c = w.dot(dir);
        for (wi, di) in w.iter_mut().zip(dir.iter()) {
            *wi -= c * di;
        }
    };
    // power-iterate S with the dominant pair projected out
    let mut x = Array1::from_shape_fn(n, |i| (((i + 1) * 2654435761 % 997) as f64) / 997.0 + 0.1);
    proj(&mut x, &v);
    if norm(&x) < 1e-300 {
        return false;
    }
    scale_to(&mut x, 1.0);
    let mut sigma2 = 0.0;
    for _ in 0..300 {
        let mut y = s.dot(&x);
        proj(&mut y, &u);
        let ny = norm(&y);
        if ny < 1e-300 {
            sigma2 = 0.0;
            break;
        }
        sigma2 = ny;
        let mut x_next = s.t().dot(&y.mapv(|w| w / ny));
        proj(&mut x_next, &v);
        if norm(&x_next) < 1e-300 {
            break;
        }
        x = x_next;
        scale_to(&mut x, 1.0);
    }
    (sigma1 - sigma2).abs() < 1e-9 * sigma1
}

fn solve_stationary_sum_form(matrix: &ActionMatrix, tol: f64) -> Result<StationarySolution> {
    let n = matrix.n();
    let s = &matrix.entries;
    let ones = vec![1.0; n];
    let w = solve_linear(s, &ones);
    let u = solve_linear(&s.t().to_owned(), &ones);
    match (w, u) {
        (Some(w), Some(u)) => {
            let total: f64 = w.iter().sum();
            if total.abs() < 1e-12 {
                return Err(Error::NoConvergence {
                    iterations: 0,
                    residual: f64::INFINITY,
                });
            }
            let scale = 1.0 / (total.abs() * std::f64::consts::SQRT_2);
            let sign = total.signum();
            let alpha: Vec<f64> = u.iter().map(|&x| x * scale).collect();
            let beta: Vec<f64> = w.iter().map(|&x| x * scale * sign).collect();
            let pair = MixedPathPair::new(alpha, beta, NormMode::SumForm, Provenance::Stationary);
            let residual = stationarity_residual(matrix, &pair)?;
            Ok(StationarySolution {
                converged: residual <= tol.max(1e-8),
                pair,
                residual,
                iterations: 1,
                degenerate: false,
            })
        }
        _ => {
            // singular action matrix: fall back to the equal-component family
            let pair = solve_equal_component(matrix, NormMode::SumForm);
            let pair = MixedPathPair {
                provenance: Provenance::Stationary,
                ..pair
            };
            let residual = stationarity_residual(matrix, &pair)?;
            Ok(StationarySolution {
                converged: residual <= tol.max(1e-8),
                pair,
                residual,
                iterations: 1,
                degenerate: true,
            })
        }
    }
}

/// Norm of the gradient of `alpha^T S beta` projected onto the tangent space
/// of the norm-mode constraint at the pair. Zero exactly at first-order
/// stationary points.
pub fn stationarity_residual(matrix: &ActionMatrix, pair: &MixedPathPair) -> Result<f64> {
    let n = matrix.n();
    if pair.alpha.len() != n || pair.beta.len() != n {
        return Err(Error::DimensionMismatch {
            left: pair.alpha.len(),
            right: n,
        });
    }
    let s = &matrix.entries;
    let alpha = Array1::from_vec(pair.alpha.clone());
    let beta = Array1::from_vec(pair.beta.clone());
    let grad_alpha = s.dot(&beta);
    let grad_beta = s.t().dot(&alpha);

    let (h_alpha, h_beta): (Array1<f64>, Array1<f64>) = match pair.norm_mode {
        NormMode::NormForm => (2.0 * &alpha, 2.0 * &beta),
        NormMode::SumForm => {
            let sa: f64 = pair.alpha.iter().sum();
            let sb: f64 = pair.beta.iter().sum();
            (
                Array1::from_elem(n, 2.0 * sa),
                Array1::from_elem(n, 2.0 * sb),
            )
        }
    };
    let hh = h_alpha.dot(&h_alpha) + h_beta.dot(&h_beta);
    let (r_alpha, r_beta) = if hh < 1e-300 {
        (grad_alpha, grad_beta)
    } else {
        let fh = grad_alpha.dot(&h_alpha) + grad_beta.dot(&h_beta);
        let c = fh / hh;
        (grad_alpha - c * &h_alpha, grad_beta - c * &h_beta)
    };
    Ok((r_alpha.dot(&r_alpha) + r_beta.dot(&r_beta)).sqrt())
}

/// Optimal mixed strategies and value of the zero-sum game with the action
/// matrix as payoffs (row player maximizes).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MinimaxSolution {
    pub row_strategy: Vec<f64>,
    pub col_strategy: Vec<f64>,
    pub value: f64,
}

/// Solves the matrix game by linear programming (simplex with Bland's rule
/// on the positivized payoff matrix). Always feasible; the offset used to
/// positivize cancels out of the strategies, so adding a constant to every
/// entry shifts the value and leaves the strategies bit-identical.
pub fn solve_minimax(matrix: &ActionMatrix) -> MinimaxSolution {
    let m = matrix.entries.nrows();
    let n = matrix.entries.ncols();
    let min_entry = matrix
        .entries
        .iter()
        .fold(f64::INFINITY, |acc, &v| acc.min(v));
    let offset = 1.0 - min_entry; // entries + offset >= 1
    let positive = matrix.entries.mapv(|v| v + offset);

    // maximize 1^T w  s.t.  positive * w <= 1, w >= 0
    let cols = n + m;
    let mut tableau = Array2::<f64>::zeros((m, cols + 1));
    for i in 0..m {
        for j in 0..n {
            tableau[(i, j)] = positive[(i, j)];
        }
        tableau[(i, n + i)] = 1.0;
        tableau[(i, cols)] = 1.0;
    }
    let mut objective = vec![0.0; cols + 1];
    for item in objective.iter_mut().take(n) {
        *item = -1.0;
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Bland: entering = lowest-index column with negative reduced cost
    while let Some(entering) = (0..cols).find(|&j| objective[j] < -1e-12) {
        // ratio test, ties broken by lowest basis label
        let mut pivot_row: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for i in 0..m {
            let t = tableau[(i, entering)];
            if t > 1e-12 {
                let ratio = tableau[(i, cols)] / t;
                let better = ratio < best_ratio - 1e-15
                    || ((ratio - best_ratio).abs() <= 1e-15
                        && pivot_row.is_none_or(|r| basis[i] < basis[r]));
                if better {
                    best_ratio = ratio;
                    pivot_row = Some(i);
                }
            }
        }
        let row = pivot_row.expect("positivized game LP is bounded");
        let pivot = tableau[(row, entering)];
        for j in 0..=cols {
            tableau[(row, j)] /= pivot;
        }
        for i in 0..m {
            if i != row {
                let factor = tableau[(i, entering)];
                if factor != 0.0 {
                    for j in 0..=cols {
                        tableau[(i, j)] -= factor * tableau[(row, j)];
                    }
                }
            }
        }
        let factor = objective[entering];
        if factor != 0.0 {
            for j in 0..=cols {
                objective[j] -= factor * tableau[(row, j)];
            }
        }
        basis[row] = entering;
    }

    let mut w = vec![0.0; n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            w[b] = tableau[(i, cols)];
        }
    }
    let total_w: f64 = w.iter().sum();
    let duals: Vec<f64> = (0..m).map(|i| objective[n + i]).collect();
    let total_u: f64 = duals.iter().sum();

    let value_positive = 1.0 / total_w;
    let col_strategy: Vec<f64> = w.iter().map(|&x| x * value_positive).collect();
    let row_strategy: Vec<f64> = if total_u > 0.0 {
        duals.iter().map(|&x| x / total_u).collect()
    } else {
        vec![1.0 / m as f64; m]
    };
    MinimaxSolution {
        row_strategy,
        col_strategy,
        value: value_positive - offset,
    }
}

/// Numbers of positive, negative, and (numerically) zero eigenvalues of the
/// bordered Hessian of the constrained extremization at a pair. Exposed as a
/// report; the extremum type is left to the reader of the inertia.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

pub fn bordered_hessian_inertia(matrix: &ActionMatrix, pair: &MixedPathPair) -> Result<Inertia> {
    let n = matrix.n();
    if pair.alpha.len() != n || pair.beta.len() != n {
        return Err(Error::DimensionMismatch {
            left: pair.alpha.len(),
            right: n,
        });
    }
    let s = &matrix.entries;
    let alpha = Array1::from_vec(pair.alpha.clone());
    let beta = Array1::from_vec(pair.beta.clone());

    // constraint gradient and the multiplier of the projected gradient
    let (h_alpha, h_beta): (Array1<f64>, Array1<f64>) = match pair.norm_mode {
        NormMode::NormForm => (2.0 * &alpha, 2.0 * &beta),
        NormMode::SumForm => {
            let sa: f64 = pair.alpha.iter().sum();
            let sb: f64 = pair.beta.iter().sum();
            (
                Array1::from_elem(n, 2.0 * sa),
                Array1::from_elem(n, 2.0 * sb),
            )
        }
    };
    let grad_alpha = s.dot(&beta);
    let grad_beta = s.t().dot(&alpha);
    let hh = h_alpha.dot(&h_alpha) + h_beta.dot(&h_beta);
    let mu = if hh < 1e-300 {
        0.0
    } else {
        (grad_alpha.dot(&h_alpha) + grad_beta.dot(&h_beta)) / hh
    };

    let dim = 2 * n + 1;
    let mut bordered = Array2::<f64>::zeros((dim, dim));
    for i in 0..n {
        bordered[(0, 1 + i)] = h_alpha[i];
        bordered[(1 + i, 0)] = h_alpha[i];
        bordered[(0, 1 + n + i)] = h_beta[i];
        bordered[(1 + n + i, 0)] = h_beta[i];
    }
    // Hessian of the Lagrangian: [[ -mu Hg_aa, S ], [ S^T, -mu Hg_bb ]]
    for i in 0..n {
        for j in 0..n {
            bordered[(1 + i, 1 + n + j)] = s[(i, j)];
            bordered[(1 + n + j, 1 + i)] = s[(i, j)];
        }
    }
    match pair.norm_mode {
        NormMode::NormForm => {
            for i in 0..n {
                bordered[(1 + i, 1 + i)] -= 2.0 * mu;
                bordered[(1 + n + i, 1 + n + i)] -= 2.0 * mu;
            }
        }
        NormMode::SumForm => {
            for i in 0..n {
                for j in 0..n {
                    bordered[(1 + i, 1 + j)] -= 2.0 * mu;
                    bordered[(1 + n + i, 1 + n + j)] -= 2.0 * mu;
                }
            }
        }
    }

    let eigenvalues = jacobi_eigenvalues(&bordered);
    let max_abs = eigenvalues.iter().fold(0.0f64, |m, &l| m.max(l.abs()));
    let threshold = 1e-9 * max_abs.max(1e-300);
    let mut inertia = Inertia {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    for l in eigenvalues {
        if l > threshold {
            inertia.positive += 1;
        } else if l < -threshold {
            inertia.negative += 1;
        } else {
            inertia.zero += 1;
        }
    }
    Ok(inertia)
}

fn norm(v: &Array1<f64>) -> f64 {
    v.dot(v).sqrt()
}

fn scale_to(v: &mut Array1<f64>, target: f64) {
    let n = norm(v);
    if n > 0.0 {
        *v *= target / n;
    }
}

/// Gaussian elimination with partial pivoting; `None` on a (near-)singular
/// system.
pub(crate) fn solve_linear(a: &Array2<f64>, b: &[f64]) -> Option<Vec<f64>> {
    let n = a.nrows();
    if a.ncols() != n || b.len() != n {
        return None;
    }
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    let scale = a.iter().fold(0.0f64, |acc, &v| acc.max(v.abs())).max(1.0);
    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_val = m[(col, col)].abs();
        for row in col + 1..n {
            let v = m[(row, col)].abs();
            if v > pivot_val {
                pivot_val = v;
                pivot_row = row;
            }
        }
        if pivot_val <= 1e-12 * scale {
            return None;
        }
        if pivot_row != col {
            for j in 0..n {
                let tmp = m[(col, j)];
                m[(col, j)] = m[(pivot_row, j)];
                m[(pivot_row, j)] = tmp;
            }
            rhs.swap(col, pivot_row);
        }
        for row in col + 1..n {
            let factor = m[(row, col)] / m[(col, col)];
            if factor != 0.0 {
                for j in col..n {
                    m[(row, j)] -= factor * m[(col, j)];
                }
                rhs[row] -= factor * rhs[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut sum = rhs[row];
        for j in row + 1..n {
            sum -= m[(row, j)] * x[j];
        }
        x[row] = sum / m[(row, row)];
    }
    Some(x)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub(crate) fn jacobi_eigenvalues(sym: &Array2<f64>) -> Vec<f64> {
    let n = sym.nrows();
    let mut a = sym.clone();
    for _ in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].abs();
            }
        }
        if off < 1e-14 {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let diff = a[(q, q)] - a[(p, p)];
                let t = if diff.abs() < 1e-300 {
                    1.0
                } else {
                    let theta = 0.5 * diff / apq;
                    let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[(i, i)]).collect()
}
