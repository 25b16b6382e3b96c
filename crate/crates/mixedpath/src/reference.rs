//! Independent oracles: closed-form propagators and a brute-force
//! time-sliced kernel composition on a position grid.
//!
//! These are the yardsticks the amplitude pipeline is measured against and
//! share no code with it. The square-root branch is `sqrt(1/i) =
//! exp(-i pi/4)` throughout.

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::action::{HamiltonianModel, ModelKind};
use crate::error::{Error, Result};

/// Uniform position grid `x_min + i * spacing`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub num_points: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, num_points: usize) -> Result<Self> {
        if num_points < 3 {
            return Err(Error::InvalidSpec("grid needs at least 3 points".into()));
        }
        if x_min >= x_max || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidSpec("grid requires x_min < x_max".into()));
        }
        Ok(Self {
            x_min,
            x_max,
            num_points,
        })
    }

    /// Symmetric grid around zero with an odd point count, so grid points
    /// land on integer multiples of `spacing` and index `(num_points-1)/2`
    /// sits at the origin.
    pub fn symmetric(half_width: f64, spacing: f64) -> Result<Self> {
        if spacing <= 0.0 || half_width <= 0.0 || !spacing.is_finite() || !half_width.is_finite() {
            return Err(Error::InvalidSpec(
                "half_width and spacing must be positive".into(),
            ));
        }
        let side = (half_width / spacing).round().max(1.0) as usize;
        let num_points = 2 * side + 1;
        let edge = side as f64 * spacing;
        Ok(Self {
            x_min: -edge,
            x_max: edge,
            num_points,
        })
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.num_points - 1) as f64
    }

    pub fn point(&self, index: usize) -> f64 {
        self.x_min + index as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.num_points).map(|i| self.point(i)).collect()
    }

    /// Index whose grid point coincides with `x`, or an error when `x` is
    /// off-grid.
    pub fn index_of(&self, x: f64) -> Result<usize> {
        let spacing = self.spacing();
        let raw = (x - self.x_min) / spacing;
        let idx = raw.round();
        if idx < 0.0 || idx as usize >= self.num_points || (raw - idx).abs() > 1e-6 {
            return Err(Error::DomainError(format!("{x} is not a grid point")));
        }
        Ok(idx as usize)
    }

    /// Signed site index of a grid index on a zero-centered grid, matching
    /// the lattice convention `x = site * spacing`.
    pub fn site_of(&self, index: usize) -> i64 {
        index as i64 - ((self.num_points - 1) / 2) as i64
    }

    pub fn is_zero_centered(&self) -> bool {
        self.num_points % 2 == 1 && (self.x_min + self.x_max).abs() <= 1e-9 * self.spacing()
    }
}

/// Closed-form free-particle propagator
/// `sqrt(m/(2 pi i hbar T)) exp(i m (x_b-x_a)^2 / (2 hbar T))`.
pub fn free_particle_propagator(
    mass: f64,
    t: f64,
    x_a: f64,
    x_b: f64,
    hbar: f64,
) -> Result<Complex64> {
    check_positive(mass, t, hbar)?;
    let modulus = (mass / (2.0 * std::f64::consts::PI * hbar * t)).sqrt();
    let phase = mass * (x_b - x_a) * (x_b - x_a) / (2.0 * hbar * t) - std::f64::consts::FRAC_PI_4;
    Ok(Complex64::from_polar(modulus, phase))
}

/// Closed-form harmonic-oscillator propagator away from caustics
/// (`omega T` at integer multiples of pi).
pub fn harmonic_propagator(
    mass: f64,
    omega: f64,
    t: f64,
    x_a: f64,
    x_b: f64,
    hbar: f64,
) -> Result<Complex64> {
    check_positive(mass, t, hbar)?;
    if omega <= 0.0 || omega.is_nan() {
        return Err(Error::DomainError("omega must be positive".into()));
    }
    let s = (omega * t).sin();
    if s.abs() < 1e-9 {
        return Err(Error::Caustic { sin_abs: s.abs() });
    }
    let modulus = (mass * omega / (2.0 * std::f64::consts::PI * hbar * s.abs())).sqrt();
    let classical = mass * omega / (2.0 * hbar * s)
        * ((x_a * x_a + x_b * x_b) * (omega * t).cos() - 2.0 * x_a * x_b);
    // one extra factor exp(-i pi/2) per caustic passed
    let caustics = (omega * t / std::f64::consts::PI).floor();
    let phase = classical - std::f64::consts::FRAC_PI_4 - std::f64::consts::FRAC_PI_2 * caustics;
    Ok(Complex64::from_polar(modulus, phase))
}

/// Time-sliced brute-force propagator: builds the one-slice kernel
/// `k(x,y) = sqrt(m/(2 pi i hbar eps)) exp(i [m(y-x)^2/(2 eps) - eps V((x+y)/2)]/hbar)`
/// and composes it `slices` times over the grid (trapezoid-weighted sum,
/// measure = spacing), returning the `(x_a, x_b)` entry.
///
/// `damping` tilts the slice width onto the contour `eps (1 - i*damping)`;
/// 0 is the plain real-time kernel. A small positive value suppresses the
/// grid-boundary reflections that otherwise contaminate multi-slice
/// compositions at any practical grid size.
pub fn time_sliced_propagator(
    model: &HamiltonianModel,
    grid: &GridSpec,
    slices: usize,
    t: f64,
    x_a: f64,
    x_b: f64,
    damping: f64,
) -> Result<Complex64> {
    check_positive(model.mass, t, model.hbar)?;
    if slices == 0 {
        return Err(Error::DomainError("slices must be >= 1".into()));
    }
    if damping < 0.0 {
        return Err(Error::DomainError("damping must be >= 0".into()));
    }
    let row = grid.index_of(x_a)?;
    let col = grid.index_of(x_b)?;
    let kernel = one_slice_kernel(model, grid, t / slices as f64, damping)?;
    let composed = kernel_power(&kernel, slices, grid.spacing());
    Ok(composed[(row, col)])
}

/// Stationary-phase undersampling heuristic `spacing^2 * m / (hbar * eps)`;
/// above 1 the one-slice kernel oscillates faster than the grid resolves.
pub fn undersampling_ratio(
    model: &HamiltonianModel,
    grid: &GridSpec,
    slices: usize,
    t: f64,
) -> f64 {
    let eps = t / slices.max(1) as f64;
    grid.spacing() * grid.spacing() * model.mass / (model.hbar * eps)
}

fn check_positive(mass: f64, t: f64, hbar: f64) -> Result<()> {
    if t <= 0.0 || t.is_nan() {
        return Err(Error::DomainError("T must be positive".into()));
    }
    if mass <= 0.0 || mass.is_nan() {
        return Err(Error::DomainError("mass must be positive".into()));
    }
    if hbar <= 0.0 || hbar.is_nan() {
        return Err(Error::DomainError("hbar must be positive".into()));
    }
    Ok(())
}

fn potential_on_midpoint(
    model: &HamiltonianModel,
    grid: &GridSpec,
    i: usize,
    j: usize,
) -> Result<f64> {
    match model.kind {
        ModelKind::FreeParticle | ModelKind::HarmonicOscillator => {
            Ok(model.potential_at(0.5 * (grid.point(i) + grid.point(j))))
        }
        ModelKind::TabulatedPotential => {
            if !grid.is_zero_centered() {
                return Err(Error::DomainError(
                    "tabulated potentials need a zero-centered grid".into(),
                ));
            }
            let table = model
                .potential_table
                .as_ref()
                .expect("tabulated model carries a table");
            let a = grid.site_of(i);
            let b = grid.site_of(j);
            let va = *table.get(&a).ok_or(Error::ModelDomain { index: a })?;
            let vb = *table.get(&b).ok_or(Error::ModelDomain { index: b })?;
            Ok(0.5 * (va + vb))
        }
    }
}

fn one_slice_kernel(
    model: &HamiltonianModel,
    grid: &GridSpec,
    eps: f64,
    damping: f64,
) -> Result<Array2<Complex64>> {
    let n = grid.num_points;
    let eps_c = Complex64::new(eps, -eps * damping);
    let prefactor = (Complex64::new(model.mass, 0.0)
        / (2.0 * std::f64::consts::PI * model.hbar * Complex64::i() * eps_c))
        .sqrt();
    let i_over_hbar = Complex64::i() / model.hbar;

    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let dx = grid.point(j) - grid.point(i);
                let v = potential_on_midpoint(model, grid, i, j)?;
                let action = Complex64::new(0.5 * model.mass * dx * dx, 0.0) / eps_c - eps_c * v;
                row.push(prefactor * (i_over_hbar * action).exp());
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut kernel = Array2::zeros((n, n));
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate() {
            kernel[(i, j)] = v;
        }
    }
    Ok(kernel)
}

/// `slices`-fold kernel composition, accumulated by repeated squaring. Each
/// composition is the trapezoid-weighted grid sum with measure = spacing.
fn kernel_power(kernel: &Array2<Complex64>, slices: usize, spacing: f64) -> Array2<Complex64> {
    let mut result: Option<Array2<Complex64>> = None;
    let mut base = kernel.clone();
    let mut k = slices;
    while k > 0 {
        if k & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => compose(&r, &base, spacing),
            });
        }
        k >>= 1;
        if k > 0 {
            base = compose(&base, &base, spacing);
        }
    }
    result.expect("slices >= 1")
}

fn compose(a: &Array2<Complex64>, b: &Array2<Complex64>, spacing: f64) -> Array2<Complex64> {
    let (n, inner) = (a.nrows(), a.ncols());
    let m = b.ncols();
    let mut out = Array2::zeros((n, m));
    let b_slice = b.as_slice().expect("contiguous");
    out.as_slice_mut()
        .expect("contiguous")
        .par_chunks_mut(m)
        .enumerate()
        .for_each(|(i, out_row)| {
            for k in 0..inner {
                let weight = if k == 0 || k + 1 == inner { 0.5 } else { 1.0 };
                let scale = a[(i, k)] * weight * spacing;
                if scale == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let b_row = &b_slice[k * m..(k + 1) * m];
                for (o, &bv) in out_row.iter_mut().zip(b_row) {
                    *o += scale * bv;
                }
            }
        });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn free_propagator_hand_values() {
        let k = free_particle_propagator(1.0, 1.0, 0.3, 0.3, 1.0).unwrap();
        assert_relative_eq!(
            k.norm(),
            (1.0 / (2.0 * std::f64::consts::PI)).sqrt(),
            epsilon = 1e-15
        );
        assert_relative_eq!(k.arg(), -std::f64::consts::FRAC_PI_4, epsilon = 1e-15);
    }

    #[test]
    fn free_modulus_independent_of_displacement() {
        let a = free_particle_propagator(1.0, 1.0, 0.0, 0.0, 1.0).unwrap();
        let b = free_particle_propagator(1.0, 1.0, -2.0, 3.5, 1.0).unwrap();
        assert_relative_eq!(a.norm(), b.norm(), epsilon = 1e-15);
    }

    #[test]
    fn free_modulus_scales_as_inverse_sqrt_time() {
        let a = free_particle_propagator(1.0, 1.0, 0.0, 1.0, 1.0).unwrap();
        let b = free_particle_propagator(1.0, 2.0, 0.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(a.norm() / b.norm(), 2.0f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn free_propagator_rejects_bad_domain() {
        assert!(free_particle_propagator(1.0, 0.0, 0.0, 0.0, 1.0).is_err());
        assert!(free_particle_propagator(-1.0, 1.0, 0.0, 0.0, 1.0).is_err());
        assert!(free_particle_propagator(1.0, 1.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn harmonic_small_omega_approaches_free() {
        let free = free_particle_propagator(1.0, 1.0, 0.2, 0.7, 1.0).unwrap();
        let harm = harmonic_propagator(1.0, 1e-8, 1.0, 0.2, 0.7, 1.0).unwrap();
        assert!((free - harm).norm() / free.norm() < 1e-6);
    }

    #[test]
    fn harmonic_quarter_period_modulus() {
        let omega = 2.0;
        let t = std::f64::consts::FRAC_PI_2 / omega; // omega T = pi/2
        let k = harmonic_propagator(1.0, omega, t, 0.0, 0.0, 1.0).unwrap();
        assert_relative_eq!(
            k.norm(),
            (omega / (2.0 * std::f64::consts::PI)).sqrt(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn harmonic_caustic_is_reported() {
        let err = harmonic_propagator(1.0, 1.0, std::f64::consts::PI, 0.0, 0.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::Caustic { .. }));
    }

    #[test]
    fn grid_spec_spacing_and_lookup() {
        let grid = GridSpec::new(-1.0, 1.0, 5).unwrap();
        assert_relative_eq!(grid.spacing(), 0.5);
        assert_eq!(grid.index_of(0.0).unwrap(), 2);
        assert_eq!(grid.index_of(-1.0).unwrap(), 0);
        assert!(grid.index_of(0.3).is_err());
        assert!(GridSpec::new(1.0, -1.0, 5).is_err());
        assert!(GridSpec::new(-1.0, 1.0, 2).is_err());
    }

    #[test]
    fn symmetric_grid_is_zero_centered() {
        let grid = GridSpec::symmetric(10.0, 0.04).unwrap();
        assert!(grid.is_zero_centered());
        assert_eq!(grid.num_points % 2, 1);
        assert_relative_eq!(grid.spacing(), 0.04, epsilon = 1e-12);
        let mid = (grid.num_points - 1) / 2;
        assert_eq!(grid.site_of(mid), 0);
        assert_relative_eq!(grid.point(mid), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn single_slice_equals_analytic_exactly() {
        let model = HamiltonianModel::free(1.0, 1.0).unwrap();
        let grid = GridSpec::symmetric(4.0, 0.5).unwrap();
        for &(xa, xb) in &[(0.0, 0.0), (0.0, 1.5), (-2.0, 2.0)] {
            let sliced = time_sliced_propagator(&model, &grid, 1, 1.0, xa, xb, 0.0).unwrap();
            let exact = free_particle_propagator(1.0, 1.0, xa, xb, 1.0).unwrap();
            assert!((sliced - exact).norm() <= 1e-14 * exact.norm());
        }
    }

    #[test]
    fn sixteen_slices_match_analytic_within_two_percent() {
        let model = HamiltonianModel::free(1.0, 1.0).unwrap();
        let grid = GridSpec::symmetric(10.0, 0.04).unwrap();
        let k = time_sliced_propagator(&model, &grid, 16, 1.0, 0.0, 0.0, 0.035).unwrap();
        let exact = free_particle_propagator(1.0, 1.0, 0.0, 0.0, 1.0).unwrap();
        let rel = (k.norm() - exact.norm()).abs() / exact.norm();
        assert!(rel <= 0.02, "modulus error {rel}");
    }

    #[test]
    fn harmonic_sixty_four_slices_match_analytic_within_two_percent() {
        let model = HamiltonianModel::harmonic(1.0, 1.0, 1.0).unwrap();
        let grid = GridSpec::symmetric(10.0, 0.018).unwrap();
        let k = time_sliced_propagator(&model, &grid, 64, 1.0, 0.0, 0.0, 0.035).unwrap();
        let exact = harmonic_propagator(1.0, 1.0, 1.0, 0.0, 0.0, 1.0).unwrap();
        let rel = (k.norm() - exact.norm()).abs() / exact.norm();
        assert!(rel <= 0.02, "modulus error {rel}");
    }

    #[test]
    fn semigroup_same_epsilon() {
        // composing k^2 then k^3 equals k^5 with the same slice width
        let model = HamiltonianModel::free(1.0, 1.0).unwrap();
        let grid = GridSpec::symmetric(3.0, 0.1).unwrap();
        let eps = 0.25;
        let kernel = one_slice_kernel(&model, &grid, eps, 0.02).unwrap();
        let spacing = grid.spacing();
        let a = kernel_power(&kernel, 2, spacing);
        let b = kernel_power(&kernel, 3, spacing);
        let direct = kernel_power(&kernel, 5, spacing);
        let via = compose(&a, &b, spacing);
        let mut worst = 0.0f64;
        for (x, y) in direct.iter().zip(via.iter()) {
            let denom = x.norm().max(1e-12);
            worst = worst.max((x - y).norm() / denom);
        }
        assert!(worst <= 1e-10, "semigroup defect {worst}");
    }

    #[test]
    fn free_convergence_ladder_is_monotone() {
        let model = HamiltonianModel::free(1.0, 1.0).unwrap();
        let exact = free_particle_propagator(1.0, 1.0, 0.0, 0.0, 1.0).unwrap();
        let mut errors = Vec::new();
        for spacing in [0.4, 0.2, 0.1] {
            let grid = GridSpec::symmetric(10.0, spacing).unwrap();
            let k = time_sliced_propagator(&model, &grid, 16, 1.0, 0.0, 0.0, 0.035).unwrap();
            errors.push((k.norm() - exact.norm()).abs() / exact.norm());
        }
        assert!(
            errors[0] > errors[1] && errors[1] > errors[2],
            "ladder {errors:?}"
        );
    }

    #[test]
    fn unit_consistency_under_rescaling() {
        // |K| sqrt(hbar T / m) is dimensionless and invariant
        for &(m, t, hbar) in &[(1.0, 1.0, 1.0), (2.0, 0.5, 1.0), (3.0, 2.0, 0.7)] {
            let k = free_particle_propagator(m, t, 0.0, 0.0, hbar).unwrap();
            let invariant = k.norm() * (hbar * t / m).sqrt();
            assert_relative_eq!(
                invariant,
                1.0 / (2.0 * std::f64::consts::PI).sqrt(),
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn undersampling_heuristic() {
        let model = HamiltonianModel::free(1.0, 1.0).unwrap();
        let coarse = GridSpec::symmetric(10.0, 0.5).unwrap();
        assert!(undersampling_ratio(&model, &coarse, 16, 1.0) > 1.0);
        let fine = GridSpec::symmetric(10.0, 0.04).unwrap();
        assert!(undersampling_ratio(&model, &fine, 16, 1.0) < 1.0);
    }

    #[test]
    fn off_grid_endpoints_are_domain_errors() {
        let model = HamiltonianModel::free(1.0, 1.0).unwrap();
        let grid = GridSpec::symmetric(2.0, 0.5).unwrap();
        assert!(matches!(
            time_sliced_propagator(&model, &grid, 2, 1.0, 0.3, 0.0, 0.0),
            Err(Error::DomainError(_))
        ));
    }
}
