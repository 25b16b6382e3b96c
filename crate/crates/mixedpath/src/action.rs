//! Classical actions on discrete path pairs and the action matrix.
//!
//! Both actions are rectangle-rule sums over slices with the momentum sample
//! on the half-slot and the position midpoint feeding the Hamiltonian, so a
//! matched pair obeys the discrete integration-by-parts identity
//! `S - R = p·q|end - p·q|start` exactly (the Hamiltonian terms cancel).

use std::collections::BTreeMap;

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, PPath, PathSet, QPath};

/// Which potential the Hamiltonian carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    FreeParticle,
    HarmonicOscillator,
    TabulatedPotential,
}

/// `H(p, q) = p^2 / (2 mass) + V(q)` with `V` selected by [`ModelKind`].
///
/// `hbar` rides along here because phase assignment needs it; the action
/// evaluation itself is purely classical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianModel {
    pub kind: ModelKind,
    pub mass: f64,
    /// Angular frequency; only read for the harmonic oscillator.
    pub omega: f64,
    /// Energy per grid index; only read for tabulated potentials.
    pub potential_table: Option<BTreeMap<i64, f64>>,
    pub hbar: f64,
}

impl HamiltonianModel {
    pub fn free(mass: f64, hbar: f64) -> Result<Self> {
        Self::build(ModelKind::FreeParticle, mass, 0.0, None, hbar)
    }

    pub fn harmonic(mass: f64, omega: f64, hbar: f64) -> Result<Self> {
        Self::build(ModelKind::HarmonicOscillator, mass, omega, None, hbar)
    }

    pub fn tabulated(mass: f64, table: BTreeMap<i64, f64>, hbar: f64) -> Result<Self> {
        Self::build(ModelKind::TabulatedPotential, mass, 0.0, Some(table), hbar)
    }

    fn build(
        kind: ModelKind,
        mass: f64,
        omega: f64,
        potential_table: Option<BTreeMap<i64, f64>>,
        hbar: f64,
    ) -> Result<Self> {
        if mass <= 0.0 || !mass.is_finite() {
            return Err(Error::InvalidSpec("mass must be a positive real".into()));
        }
        if hbar <= 0.0 || !hbar.is_finite() {
            return Err(Error::InvalidSpec("hbar must be a positive real".into()));
        }
        if omega < 0.0 || !omega.is_finite() {
            return Err(Error::InvalidSpec("omega must be >= 0".into()));
        }
        if kind == ModelKind::TabulatedPotential && potential_table.is_none() {
            return Err(Error::InvalidSpec(
                "tabulated potential requires a table".into(),
            ));
        }
        Ok(Self {
            kind,
            mass,
            omega,
            potential_table,
            hbar,
        })
    }

    /// Planck constant `h = 2 pi hbar`.
    pub fn planck(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.hbar
    }

    /// Potential at a physical position (length units). Tabulated models are
    /// keyed by grid index, so the caller supplies the index instead via
    /// [`Self::potential_between_sites`].
    pub fn potential_at(&self, x: f64) -> f64 {
        match self.kind {
            ModelKind::FreeParticle => 0.0,
            ModelKind::HarmonicOscillator => 0.5 * self.mass * self.omega * self.omega * x * x,
            ModelKind::TabulatedPotential => unreachable!("tabulated potentials use site indices"),
        }
    }

    /// Potential on the midpoint between two adjacent sites. Tabulated
    /// potentials average the two site entries, which is the midpoint rule a
    /// grid-index table supports; analytic potentials evaluate at the
    /// physical midpoint.
    pub fn potential_between_sites(&self, a: i64, b: i64, dq: f64) -> Result<f64> {
        match self.kind {
            ModelKind::FreeParticle => Ok(0.0),
            ModelKind::HarmonicOscillator => {
                let mid = 0.5 * (a + b) as f64 * dq;
                Ok(self.potential_at(mid))
            }
            ModelKind::TabulatedPotential => {
                let table = self.potential_table.as_ref().expect("checked in build");
                let va = *table.get(&a).ok_or(Error::ModelDomain { index: a })?;
                let vb = *table.get(&b).ok_or(Error::ModelDomain { index: b })?;
                Ok(0.5 * (va + vb))
            }
        }
    }
}

/// Dense matrix of actions: row `j` pairs momentum path `j` with every
/// position path `k`.
#[derive(Debug, Clone)]
pub struct ActionMatrix {
    pub entries: Array2<f64>,
    /// Indices into the source [`PathSet`] for rows (momentum paths).
    pub row_paths: Vec<usize>,
    /// Indices into the source [`PathSet`] for columns (position paths).
    pub col_paths: Vec<usize>,
}

impl ActionMatrix {
    pub const DEFAULT_CAP: usize = 4096;

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn from_entries(entries: Array2<f64>) -> Self {
        let n = entries.nrows();
        let m = entries.ncols();
        Self {
            entries,
            row_paths: (0..n).collect(),
            col_paths: (0..m).collect(),
        }
    }

    /// Matched-pair actions `S[p_j, q_j]`.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n().min(self.entries.ncols()))
            .map(|j| self.entries[(j, j)])
            .collect()
    }

    /// Sum of all entries.
    pub fn total(&self) -> f64 {
        self.entries.iter().sum()
    }

    /// CSV rendering: header row of column path ids, then one row per
    /// momentum path, row id first.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p_path");
        for k in &self.col_paths {
            out.push_str(&format!(",q{k}"));
        }
        out.push('\n');
        for (i, row) in self.entries.outer_iter().enumerate() {
            out.push_str(&format!("p{}", self.row_paths[i]));
            for v in row {
                out.push_str(&format!(",{v}"));
            }
            out.push('\n');
        }
        out
    }
}

/// JSON view of an action matrix.
#[derive(Debug, Serialize, Deserialize)]
pub struct ActionMatrixJson {
    pub row_paths: Vec<usize>,
    pub col_paths: Vec<usize>,
    pub entries: Vec<Vec<f64>>,
}

impl From<&ActionMatrix> for ActionMatrixJson {
    fn from(m: &ActionMatrix) -> Self {
        ActionMatrixJson {
            row_paths: m.row_paths.clone(),
            col_paths: m.col_paths.clone(),
            entries: m.entries.outer_iter().map(|r| r.to_vec()).collect(),
        }
    }
}

fn check_pair(ppath: &PPath, qpath: &QPath, spec: &LatticeSpec) -> Result<()> {
    if ppath.levels.len() != spec.num_steps || qpath.sites.len() != spec.num_steps + 1 {
        return Err(Error::DimensionMismatch {
            left: ppath.levels.len(),
            right: qpath.sites.len(),
        });
    }
    Ok(())
}

/// Action `S = sum_j [ p_j qdot_j - H(p_j, qbar_j) ] dt` over the slices.
///
/// The momentum path need not be the matched partner of the position path;
/// off-diagonal matrix entries pair arbitrary `p_j` with `q_k`.
pub fn evaluate_action_s(
    ppath: &PPath,
    qpath: &QPath,
    model: &HamiltonianModel,
    spec: &LatticeSpec,
) -> Result<f64> {
    check_pair(ppath, qpath, spec)?;
    let mut total = 0.0;
    for (j, &level) in ppath.levels.iter().enumerate() {
        let p = spec.momentum(level);
        let q_dot = (qpath.sites[j + 1] - qpath.sites[j]) as f64 * spec.dq / spec.dt;
        let v = model.potential_between_sites(qpath.sites[j], qpath.sites[j + 1], spec.dq)?;
        let h = p * p / (2.0 * model.mass) + v;
        total += (p * q_dot - h) * spec.dt;
    }
    Ok(total)
}

/// Companion action `R = sum_j [ -q_{j+1} pdot_j - H(p_j, qbar_j) ] dt`.
///
/// `pdot_j` is the forward difference of the half-slot momenta with the final
/// slot set to zero; pairing it with the slice's ending position makes the
/// telescoping identity `S - R = p·q|end - p·q|start` exact.
pub fn evaluate_action_r(
    ppath: &PPath,
    qpath: &QPath,
    model: &HamiltonianModel,
    spec: &LatticeSpec,
) -> Result<f64> {
    check_pair(ppath, qpath, spec)?;
    let n = ppath.levels.len();
    let mut total = 0.0;
    for j in 0..n {
        let p = spec.momentum(ppath.levels[j]);
        let p_dot = if j + 1 < n {
            (spec.momentum(ppath.levels[j + 1]) - p) / spec.dt
        } else {
            0.0
        };
        let q_next = qpath.sites[j + 1] as f64 * spec.dq;
        let v = model.potential_between_sites(qpath.sites[j], qpath.sites[j + 1], spec.dq)?;
        let h = p * p / (2.0 * model.mass) + v;
        total += (-q_next * p_dot - h) * spec.dt;
    }
    Ok(total)
}

/// Boundary term `p·q|end - p·q|start` of a matched pair, for checking the
/// telescoping identity against `S - R`.
pub fn boundary_term(ppath: &PPath, qpath: &QPath, spec: &LatticeSpec) -> f64 {
    let n = ppath.levels.len();
    if n == 0 {
        return 0.0;
    }
    let p_first = spec.momentum(ppath.levels[0]);
    let p_last = spec.momentum(ppath.levels[n - 1]);
    let q_first = qpath.sites[0] as f64 * spec.dq;
    let q_last = qpath.sites[n] as f64 * spec.dq;
    p_last * q_last - p_first * q_first
}

/// Fill `entries[j][k] = S[p_j, q_k]` over all path pairs. Rows fill in
/// parallel; each entry is a pure function of its pair, so parallel and
/// serial fills agree bit-for-bit.
pub fn build_action_matrix(pathset: &PathSet, model: &HamiltonianModel) -> Result<ActionMatrix> {
    build_action_matrix_capped(pathset, model, ActionMatrix::DEFAULT_CAP)
}

pub fn build_action_matrix_capped(
    pathset: &PathSet,
    model: &HamiltonianModel,
    cap: usize,
) -> Result<ActionMatrix> {
    let n = pathset.len();
    if n == 0 {
        return Err(Error::InvalidSpec("path set is empty".into()));
    }
    if n > cap {
        return Err(Error::MatrixTooLarge { n, cap });
    }
    let rows: Vec<Vec<f64>> = pathset
        .ppaths
        .par_iter()
        .map(|ppath| {
            pathset
                .qpaths
                .iter()
                .map(|qpath| evaluate_action_s(ppath, qpath, model, &pathset.spec))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut entries = Array2::zeros((n, n));
    for (j, row) in rows.into_iter().enumerate() {
        for (k, v) in row.into_iter().enumerate() {
            entries[(j, k)] = v;
        }
    }
    Ok(ActionMatrix {
        entries,
        row_paths: (0..n).collect(),
        col_paths: (0..n).collect(),
    })
}
