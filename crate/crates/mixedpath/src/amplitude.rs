//! From optimal mixed paths to complex amplitudes and propagators.
//!
//! The balancing rotation finds an orthogonal change of basis in which every
//! component pair satisfies `alpha_j^2 + beta_j^2 = |a|^2`, so the pair can
//! be read as one complex amplitude per path, `phi_j = alpha_j + i beta_j =
//! |a| exp(i theta_j)`. Summing the amplitudes gives the propagator K;
//! propagators over consecutive intervals compose by grid multiplication.

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::action::HamiltonianModel;
use crate::error::{Error, Result};
use crate::game::{MixedPathPair, NormMode};
use crate::reference::GridSpec;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Result of the diagonal-balancing rotation.
#[derive(Debug, Clone)]
pub struct BalancedPair {
    /// Orthogonal matrix Q with `alpha_rot = Q alpha`, `beta_rot = Q beta`.
    pub rotation: Array2<f64>,
    pub alpha_rot: Vec<f64>,
    pub beta_rot: Vec<f64>,
    /// Common per-component magnitude `|a|`, with
    /// `alpha_rot_j^2 + beta_rot_j^2 = |a|^2` for every j.
    pub magnitude: f64,
}

impl BalancedPair {
    /// Largest deviation of `alpha_j^2 + beta_j^2` from `|a|^2`.
    pub fn diagonal_spread(&self) -> f64 {
        let target = self.magnitude * self.magnitude;
        self.alpha_rot
            .iter()
            .zip(&self.beta_rot)
            .map(|(a, b)| (a * a + b * b - target).abs())
            .fold(0.0, f64::max)
    }

    /// Largest entry of `Q^T Q - I`.
    pub fn orthogonality_defect(&self) -> f64 {
        let q = &self.rotation;
        let n = q.nrows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut dot = 0.0;
                for k in 0..n {
                    dot += q[(k, i)] * q[(k, j)];
                }
                let expected = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - expected).abs());
            }
        }
        worst
    }
}

/// How an amplitude set was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmplitudeMode {
    FromRotation,
    PaperPhases,
}

/// Per-path complex amplitudes of equal magnitude.
#[derive(Debug, Clone)]
pub struct AmplitudeSet {
    pub phis: Vec<Complex64>,
    pub scale: f64,
    /// Phases in `[0, 2 pi)`, atan2 branch.
    pub phases: Vec<f64>,
    pub mode: AmplitudeMode,
}

impl AmplitudeSet {
    pub fn len(&self) -> usize {
        self.phis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phis.is_empty()
    }

    /// CSV rows `index,re,im,modulus,phase`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,re,im,modulus,phase\n");
        for (j, (phi, theta)) in self.phis.iter().zip(&self.phases).enumerate() {
            out.push_str(&format!(
                "{j},{},{},{},{theta}\n",
                phi.re,
                phi.im,
                phi.norm()
            ));
        }
        out
    }
}

/// JSON view of an amplitude set.
#[derive(Debug, Serialize, Deserialize)]
pub struct AmplitudeSetJson {
    pub scale: f64,
    pub mode: AmplitudeMode,
    pub amplitudes: Vec<AmplitudeJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AmplitudeJson {
    pub re: f64,
    pub im: f64,
    pub modulus: f64,
    pub phase: f64,
}

impl From<&AmplitudeSet> for AmplitudeSetJson {
    fn from(set: &AmplitudeSet) -> Self {
        AmplitudeSetJson {
            scale: set.scale,
            mode: set.mode,
            amplitudes: set
                .phis
                .iter()
                .zip(&set.phases)
                .map(|(phi, &phase)| AmplitudeJson {
                    re: phi.re,
                    im: phi.im,
                    modulus: phi.norm(),
                    phase,
                })
                .collect(),
        }
    }
}

/// Space-time endpoints a propagator refers to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Endpoints {
    pub x_a: f64,
    pub t_a: f64,
    pub x_b: f64,
    pub t_b: f64,
}

/// A single propagator amplitude K.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagator {
    pub value: Complex64,
    pub endpoints: Option<Endpoints>,
}

/// A table of K values over endpoint pairs of one grid.
#[derive(Debug, Clone)]
pub struct PropagatorGrid {
    pub grid: GridSpec,
    /// Total time the kernel spans.
    pub time_span: f64,
    /// `values[(i, j)] = K(x_i, x_j)`.
    pub values: Array2<Complex64>,
}

impl PropagatorGrid {
    /// K at a pair of grid points.
    pub fn at(&self, x_a: f64, x_b: f64) -> Result<Propagator> {
        let i = self.grid.index_of(x_a)?;
        let j = self.grid.index_of(x_b)?;
        Ok(Propagator {
            value: self.values[(i, j)],
            endpoints: Some(Endpoints {
                x_a,
                t_a: 0.0,
                x_b,
                t_b: self.time_span,
            }),
        })
    }

    /// CSV rows `x_a,x_b,re,im,modulus,phase`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x_a,x_b,re,im,modulus,phase\n");
        for i in 0..self.grid.num_points {
            for j in 0..self.grid.num_points {
                let v = self.values[(i, j)];
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    self.grid.point(i),
                    self.grid.point(j),
                    v.re,
                    v.im,
                    v.norm(),
                    v.arg()
                ));
            }
        }
        out
    }
}

/// JSON view of a propagator grid: real and imaginary parts as row-major
/// matrices.
#[derive(Debug, Serialize, Deserialize)]
pub struct PropagatorGridJson {
    pub grid: GridSpec,
    pub time_span: f64,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&PropagatorGrid> for PropagatorGridJson {
    fn from(k: &PropagatorGrid) -> Self {
        let rows = |f: fn(&Complex64) -> f64| {
            k.values
                .outer_iter()
                .map(|row| row.iter().map(f).collect())
                .collect()
        };
        PropagatorGridJson {
            grid: k.grid.clone(),
            time_span: k.time_span,
            re: rows(|v| v.re),
            im: rows(|v| v.im),
        }
    }
}

/// Finds an orthogonal Q equalizing the diagonal of
/// `M = alpha alpha^T + beta beta^T`, so the rotated components satisfy the
/// per-path equal-magnitude condition with `|a|^2 = trace(M)/n`.
///
/// Each step picks the most-spread diagonal pair and applies the plane
/// rotation that lands the high entry exactly on the target; the constant
/// diagonal is majorized by M's spectrum, so at most n-1 rotations are
/// needed. Requires `NormForm` pairs, the normalization the rotation
/// preserves.
pub fn balance_rotation(pair: &MixedPathPair) -> Result<BalancedPair> {
    if pair.norm_mode != NormMode::NormForm {
        return Err(Error::WrongNormMode {
            expected: NormMode::NormForm,
            found: pair.norm_mode,
        });
    }
    let n = pair.alpha.len();
    if n == 0 || pair.beta.len() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: pair.beta.len(),
        });
    }

    let mut alpha = pair.alpha.clone();
    let mut beta = pair.beta.clone();
    let mut m = Array2::from_shape_fn((n, n), |(i, j)| alpha[i] * alpha[j] + beta[i] * beta[j]);
    let mut q = Array2::eye(n);
    let trace: f64 = (0..n).map(|i| m[(i, i)]).sum();
    let target = trace / n as f64;
    let tol = 1e-12 * target.abs().max(1e-3);

    let sweep_limit = 100 * n;
    let mut iterations = 0;
    loop {
        let (mut hi, mut lo) = (0, 0);
        for k in 1..n {
            if m[(k, k)] > m[(hi, hi)] {
                hi = k;
            }
            if m[(k, k)] < m[(lo, lo)] {
                lo = k;
            }
        }
        let spread = (m[(hi, hi)] - target)
            .abs()
            .max((m[(lo, lo)] - target).abs());
        if spread <= tol {
            break;
        }
        iterations += 1;
        if iterations > sweep_limit {
            return Err(Error::NoConvergence {
                iterations,
                residual: spread,
            });
        }
        // rotate in the (hi, lo) plane so the hi diagonal entry becomes the
        // target exactly
        let (i, j) = (hi, lo);
        let a = m[(i, i)];
        let b = m[(j, j)];
        let c = m[(i, j)];
        let mean = 0.5 * (a + b);
        let radius = (0.25 * (a - b) * (a - b) + c * c).sqrt();
        let tau = ((target - mean) / radius).clamp(-1.0, 1.0);
        let two_theta = c.atan2(0.5 * (a - b)) + tau.acos();
        let (s, cos) = (0.5 * two_theta).sin_cos();

        rotate_rows(&mut alpha, i, j, cos, s);
        rotate_rows(&mut beta, i, j, cos, s);
        apply_plane_rotation(&mut m, i, j, cos, s);
        rotate_matrix_rows(&mut q, i, j, cos, s);
    }

    Ok(BalancedPair {
        rotation: q,
        alpha_rot: alpha,
        beta_rot: beta,
        magnitude: target.max(0.0).sqrt(),
    })
}

fn rotate_rows(v: &mut [f64], i: usize, j: usize, c: f64, s: f64) {
    let (vi, vj) = (v[i], v[j]);
    v[i] = c * vi + s * vj;
    v[j] = -s * vi + c * vj;
}

fn rotate_matrix_rows(q: &mut Array2<f64>, i: usize, j: usize, c: f64, s: f64) {
    let n = q.ncols();
    for k in 0..n {
        let qi = q[(i, k)];
        let qj = q[(j, k)];
        q[(i, k)] = c * qi + s * qj;
        q[(j, k)] = -s * qi + c * qj;
    }
}

/// `M <- G M G^T` for the plane rotation G in rows (i, j).
fn apply_plane_rotation(m: &mut Array2<f64>, i: usize, j: usize, c: f64, s: f64) {
    let n = m.nrows();
    for k in 0..n {
        let mik = m[(i, k)];
        let mjk = m[(j, k)];
        m[(i, k)] = c * mik + s * mjk;
        m[(j, k)] = -s * mik + c * mjk;
    }
    for k in 0..n {
        let mki = m[(k, i)];
        let mkj = m[(k, j)];
        m[(k, i)] = c * mki + s * mkj;
        m[(k, j)] = -s * mki + c * mkj;
    }
}

/// Reads the rotated pair as complex amplitudes `phi_j = alpha_j + i beta_j`.
pub fn build_amplitudes(balanced: &BalancedPair) -> AmplitudeSet {
    let phis: Vec<Complex64> = balanced
        .alpha_rot
        .iter()
        .zip(&balanced.beta_rot)
        .map(|(&a, &b)| Complex64::new(a, b))
        .collect();
    let phases = phis.iter().map(|phi| wrap_phase(phi.arg())).collect();
    AmplitudeSet {
        phis,
        scale: balanced.magnitude,
        phases,
        mode: AmplitudeMode::FromRotation,
    }
}

/// Assigns each path the phase `theta_j = S_j / hbar` (equivalently
/// `2 pi S_j / h`) from its matched-pair action, at a common magnitude.
pub fn assign_paper_phases(
    diagonal_actions: &[f64],
    model: &HamiltonianModel,
    scale: f64,
) -> Result<AmplitudeSet> {
    if scale <= 0.0 || scale.is_nan() {
        return Err(Error::InvalidSpec("scale must be positive".into()));
    }
    let phases: Vec<f64> = diagonal_actions
        .iter()
        .map(|s| wrap_phase(s / model.hbar))
        .collect();
    let phis = phases
        .iter()
        .map(|&theta| Complex64::from_polar(scale, theta))
        .collect();
    Ok(AmplitudeSet {
        phis,
        scale,
        phases,
        mode: AmplitudeMode::PaperPhases,
    })
}

fn wrap_phase(theta: f64) -> f64 {
    let wrapped = theta.rem_euclid(TWO_PI);
    if wrapped >= TWO_PI {
        0.0
    } else {
        wrapped
    }
}

/// `K = sum_j phi_j` between the given endpoints.
pub fn sum_propagator(amps: &AmplitudeSet, endpoints: Option<Endpoints>) -> Result<Propagator> {
    if amps.is_empty() {
        return Err(Error::InvalidSpec("amplitude set is empty".into()));
    }
    let value = amps.phis.iter().sum();
    Ok(Propagator { value, endpoints })
}

/// `K K*`.
pub fn probability(k: &Propagator) -> f64 {
    k.value.norm_sqr()
}

/// Composes two kernels over their shared grid:
/// `K_ac(x_a, x_c) = sum_b K_ab(x_a, x_b) K_bc(x_b, x_c) * measure`.
///
/// The intermediate sum carries composite-trapezoid weights: interior points
/// weigh `measure`, the two window-boundary points `measure / 2`. Output
/// rows fill in parallel.
pub fn compose_propagators(
    k_ab: &PropagatorGrid,
    k_bc: &PropagatorGrid,
    measure: f64,
) -> Result<PropagatorGrid> {
    if measure <= 0.0 || measure.is_nan() {
        return Err(Error::InvalidSpec("measure must be positive".into()));
    }
    if k_ab.values.ncols() != k_bc.values.nrows()
        || k_ab.grid.num_points != k_bc.grid.num_points
        || (k_ab.grid.spacing() - k_bc.grid.spacing()).abs() > 1e-12 * k_ab.grid.spacing()
    {
        return Err(Error::GridMismatch {
            left: k_ab.values.ncols(),
            right: k_bc.values.nrows(),
        });
    }
    let n = k_ab.values.nrows();
    let inner = k_ab.values.ncols();
    let m = k_bc.values.ncols();
    let mut out = Array2::zeros((n, m));
    let b_slice = k_bc.values.as_slice().expect("contiguous");
    out.as_slice_mut()
        .expect("contiguous")
        .par_chunks_mut(m)
        .enumerate()
        .for_each(|(i, out_row)| {
            for b in 0..inner {
                let weight = if b == 0 || b + 1 == inner { 0.5 } else { 1.0 };
                let scale = k_ab.values[(i, b)] * weight * measure;
                if scale == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let b_row = &b_slice[b * m..(b + 1) * m];
                for (o, &bv) in out_row.iter_mut().zip(b_row) {
                    *o += scale * bv;
                }
            }
        });
    Ok(PropagatorGrid {
        grid: k_ab.grid.clone(),
        time_span: k_ab.time_span + k_bc.time_span,
        values: out,
    })
}
