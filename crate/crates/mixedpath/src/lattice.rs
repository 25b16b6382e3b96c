//! Discrete space-time grid and path enumeration.
//!
//! A particle hops on an integer position grid with spacing `dq`, one hop per
//! time slice of width `dt`. Each hop moves by a signed number of sites
//! bounded by the branching parameter, so a path's velocity is quantized:
//! a hop of `l` sites carries momentum `l * mass * dq / dt`. Position samples
//! live on the slice boundaries; momentum samples live on the half-slots
//! between them, so the two samplings are offset by `dt / 2` and a position
//! path determines its momentum path exactly (and vice versa).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Time orientation of a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

/// Grid geometry and enumeration bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    /// Number of time slices.
    pub num_steps: usize,
    /// Slice width (time units).
    pub dt: f64,
    /// Grid spacing (length units).
    pub dq: f64,
    /// Odd number of momentum levels per site; levels run
    /// `-(branching-1)/2 ..= (branching-1)/2`.
    pub branching: u32,
    /// Particle mass.
    pub mass: f64,
    /// Grid index of the fixed initial position.
    pub endpoint_start: i64,
    /// Grid index of the final position; `None` leaves it free.
    pub endpoint_end: Option<i64>,
    /// Enumeration guard: `enumerate_paths` refuses to materialize more.
    pub max_paths: u64,
}

impl LatticeSpec {
    pub const DEFAULT_MAX_PATHS: u64 = 1_000_000;

    pub fn new(
        num_steps: usize,
        dt: f64,
        dq: f64,
        branching: u32,
        mass: f64,
        endpoint_start: i64,
        endpoint_end: Option<i64>,
    ) -> Result<Self> {
        let spec = Self {
            num_steps,
            dt,
            dq,
            branching,
            mass,
            endpoint_start,
            endpoint_end,
            max_paths: Self::DEFAULT_MAX_PATHS,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_max_paths(mut self, max_paths: u64) -> Self {
        self.max_paths = max_paths;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_steps == 0 {
            return Err(Error::InvalidSpec("num_steps must be >= 1".into()));
        }
        if self.dt <= 0.0 || !self.dt.is_finite() {
            return Err(Error::InvalidSpec("dt must be a positive real".into()));
        }
        if self.dq <= 0.0 || !self.dq.is_finite() {
            return Err(Error::InvalidSpec("dq must be a positive real".into()));
        }
        if self.mass <= 0.0 || !self.mass.is_finite() {
            return Err(Error::InvalidSpec("mass must be a positive real".into()));
        }
        if self.branching == 0 || self.branching & 1 == 0 {
            return Err(Error::InvalidSpec(format!(
                "branching must be a positive odd integer, got {}",
                self.branching
            )));
        }
        if self.max_paths == 0 {
            return Err(Error::InvalidSpec("max_paths must be >= 1".into()));
        }
        Ok(())
    }

    /// Largest site hop per slice, `(branching - 1) / 2`.
    pub fn max_level(&self) -> i64 {
        i64::from((self.branching - 1) / 2)
    }

    /// Physical momentum carried by a hop of `level` sites.
    pub fn momentum(&self, level: i64) -> f64 {
        level as f64 * self.mass * self.dq / self.dt
    }
}

/// A position path: one grid index per slice boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QPath {
    pub sites: Vec<i64>,
    pub direction: Direction,
}

impl QPath {
    pub fn forward(sites: Vec<i64>) -> Self {
        Self {
            sites,
            direction: Direction::Forward,
        }
    }
}

/// The paired momentum path: one level per half-slot between slice boundaries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PPath {
    pub levels: Vec<i64>,
}

impl PPath {
    /// Rebuild the position path by cumulative summation from `start`.
    pub fn integrate(&self, start: i64) -> Vec<i64> {
        let mut sites = Vec::with_capacity(self.levels.len() + 1);
        let mut site = start;
        sites.push(site);
        for &level in &self.levels {
            site += level;
            sites.push(site);
        }
        sites
    }
}

/// All admissible paths of a spec, position paths paired one-to-one with
/// momentum paths, in lexicographic site order.
#[derive(Debug, Clone)]
pub struct PathSet {
    pub spec: LatticeSpec,
    pub qpaths: Vec<QPath>,
    pub ppaths: Vec<PPath>,
}

impl PathSet {
    pub fn len(&self) -> usize {
        self.qpaths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qpaths.is_empty()
    }
}

/// JSON view matching the on-disk schema:
/// `{"spec": {...}, "paths": [{"sites": [...], "levels": [...], "direction": "forward"}]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct PathSetJson {
    pub spec: LatticeSpec,
    pub paths: Vec<PathRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PathRecord {
    pub sites: Vec<i64>,
    pub levels: Vec<i64>,
    pub direction: Direction,
}

impl From<&PathSet> for PathSetJson {
    fn from(set: &PathSet) -> Self {
        let paths = set
            .qpaths
            .iter()
            .zip(&set.ppaths)
            .map(|(q, p)| PathRecord {
                sites: q.sites.clone(),
                levels: p.levels.clone(),
                direction: q.direction,
            })
            .collect();
        PathSetJson {
            spec: set.spec.clone(),
            paths,
        }
    }
}

/// Infer the momentum path of a position path via forward differences.
pub fn infer_p_path(qpath: &QPath, spec: &LatticeSpec) -> Result<PPath> {
    let max_level = spec.max_level();
    let mut levels = Vec::with_capacity(qpath.sites.len().saturating_sub(1));
    for (index, window) in qpath.sites.windows(2).enumerate() {
        let delta = window[1] - window[0];
        if delta.abs() > max_level {
            return Err(Error::StepOutOfRange {
                index,
                delta,
                max_level,
            });
        }
        levels.push(delta);
    }
    Ok(PPath { levels })
}

/// Exact path count by dynamic programming over reachable sites per slice,
/// without materializing any path.
pub fn count_paths(spec: &LatticeSpec) -> Result<u128> {
    spec.validate()?;
    let max_level = spec.max_level();
    // counts[i] = number of partial paths ending at offset (i + lo) from start
    let mut lo = 0i64;
    let mut counts: Vec<u128> = vec![1];
    for step in 0..spec.num_steps {
        let new_lo = lo - max_level;
        let new_len = counts.len() + 2 * max_level as usize;
        let mut next = vec![0u128; new_len];
        for (i, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for l in -max_level..=max_level {
                let j = (i as i64 + l - (new_lo - lo)) as usize;
                next[j] = next[j].saturating_add(c);
            }
        }
        // with a pinned endpoint, prune offsets that can no longer reach it
        if let Some(end) = spec.endpoint_end {
            let target = end - spec.endpoint_start;
            let remaining = (spec.num_steps - step - 1) as i64;
            for (j, slot) in next.iter_mut().enumerate() {
                let offset = new_lo + j as i64;
                if (target - offset).abs() > remaining * max_level {
                    *slot = 0;
                }
            }
        }
        counts = next;
        lo = new_lo;
    }
    match spec.endpoint_end {
        Some(end) => {
            let offset = end - spec.endpoint_start;
            let idx = offset - lo;
            if idx < 0 || idx as usize >= counts.len() {
                Ok(0)
            } else {
                Ok(counts[idx as usize])
            }
        }
        None => Ok(counts.iter().fold(0u128, |a, &c| a.saturating_add(c))),
    }
}

/// Enumerate every admissible position path in lexicographic site order,
/// paired with its momentum path. All paths are tagged `Forward`.
///
/// Subtrees are split by first-step level and enumerated independently;
/// ascending-level merge preserves the lexicographic order.
pub fn enumerate_paths(spec: &LatticeSpec) -> Result<PathSet> {
    spec.validate()?;
    let predicted = count_paths(spec)?;
    if predicted > u128::from(spec.max_paths) {
        return Err(Error::PathExplosion {
            predicted,
            max_paths: spec.max_paths,
        });
    }
    if predicted == 0 {
        return Err(Error::InfeasibleEndpoints {
            start: spec.endpoint_start,
            end: spec.endpoint_end.unwrap_or(spec.endpoint_start),
            steps: spec.num_steps,
            branching: spec.branching,
        });
    }

    let max_level = spec.max_level();
    let first_levels: Vec<i64> = (-max_level..=max_level).collect();
    let subtrees: Vec<Vec<Vec<i64>>> = first_levels
        .par_iter()
        .map(|&level| {
            let mut paths = Vec::new();
            let mut sites = Vec::with_capacity(spec.num_steps + 1);
            sites.push(spec.endpoint_start);
            sites.push(spec.endpoint_start + level);
            extend_paths(spec, max_level, &mut sites, &mut paths);
            paths
        })
        .collect();

    let mut qpaths = Vec::with_capacity(predicted as usize);
    let mut ppaths = Vec::with_capacity(predicted as usize);
    for subtree in subtrees {
        for sites in subtree {
            let levels = sites.windows(2).map(|w| w[1] - w[0]).collect();
            qpaths.push(QPath::forward(sites));
            ppaths.push(PPath { levels });
        }
    }
    debug_assert_eq!(qpaths.len() as u128, predicted);
    Ok(PathSet {
        spec: spec.clone(),
        qpaths,
        ppaths,
    })
}

fn extend_paths(spec: &LatticeSpec, max_level: i64, sites: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    let depth = sites.len() - 1;
    if depth == spec.num_steps {
        match spec.endpoint_end {
            Some(end) if *sites.last().unwrap() != end => {}
            _ => out.push(sites.clone()),
        }
        return;
    }
    let remaining = (spec.num_steps - depth - 1) as i64;
    let current = *sites.last().unwrap();
    for level in -max_level..=max_level {
        let next = current + level;
        if let Some(end) = spec.endpoint_end {
            if (end - next).abs() > remaining * max_level {
                continue;
            }
        }
        sites.push(next);
        extend_paths(spec, max_level, sites, out);
        sites.pop();
    }
}

/// Produce the backward-evolving class: every site sequence reversed and
/// tagged `Backward`, re-sorted lexicographically with its momentum pairing.
pub fn time_reverse(set: &PathSet) -> PathSet {
    let mut reversed: Vec<Vec<i64>> = set
        .qpaths
        .iter()
        .map(|q| {
            let mut sites = q.sites.clone();
            sites.reverse();
            sites
        })
        .collect();
    reversed.sort_unstable();
    let ppaths = reversed
        .iter()
        .map(|sites| PPath {
            levels: sites.windows(2).map(|w| w[1] - w[0]).collect(),
        })
        .collect();
    let qpaths = reversed
        .into_iter()
        .map(|sites| QPath {
            sites,
            direction: match set.qpaths.first().map(|q| q.direction) {
                Some(Direction::Backward) => Direction::Forward,
                _ => Direction::Backward,
            },
        })
        .collect();
    PathSet {
        spec: set.spec.clone(),
        qpaths,
        ppaths,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2_spec() -> LatticeSpec {
        LatticeSpec::new(2, 1.0, 1.0, 3, 1.0, 0, Some(0)).unwrap()
    }

    /// Exhaustive oracle: generate all branching^n level tuples and filter.
    fn brute_force_count(spec: &LatticeSpec) -> u128 {
        let max_level = spec.max_level();
        let levels_per_step = (2 * max_level + 1) as u128;
        let total: u128 = levels_per_step.pow(spec.num_steps as u32);
        let mut count = 0u128;
        for code in 0..total {
            let mut c = code;
            let mut site = spec.endpoint_start;
            for _ in 0..spec.num_steps {
                let level = (c % levels_per_step) as i64 - max_level;
                c /= levels_per_step;
                site += level;
            }
            match spec.endpoint_end {
                Some(end) if site != end => {}
                _ => count += 1,
            }
        }
        count
    }

    #[test]
    fn fig2_has_three_paths() {
        let set = enumerate_paths(&fig2_spec()).unwrap();
        assert_eq!(set.len(), 3);
        let sites: Vec<&[i64]> = set.qpaths.iter().map(|q| q.sites.as_slice()).collect();
        assert_eq!(sites, vec![&[0, -1, 0][..], &[0, 0, 0][..], &[0, 1, 0][..]]);
    }

    #[test]
    fn free_endpoint_two_steps_gives_nine() {
        let spec = LatticeSpec::new(2, 1.0, 1.0, 3, 1.0, 0, None).unwrap();
        assert_eq!(count_paths(&spec).unwrap(), 9);
        assert_eq!(enumerate_paths(&spec).unwrap().len(), 9);
    }

    #[test]
    fn four_steps_zero_net_displacement_gives_nineteen() {
        let spec = LatticeSpec::new(4, 1.0, 1.0, 3, 1.0, 0, Some(0)).unwrap();
        assert_eq!(brute_force_count(&spec), 19);
        assert_eq!(count_paths(&spec).unwrap(), 19);
        assert_eq!(enumerate_paths(&spec).unwrap().len(), 19);
    }

    #[test]
    fn count_matches_brute_force_on_assorted_specs() {
        for (steps, branching, end) in [
            (1usize, 3u32, None),
            (3, 3, Some(1)),
            (3, 5, Some(-2)),
            (4, 5, None),
            (5, 3, Some(0)),
            (2, 7, Some(3)),
        ] {
            let spec = LatticeSpec::new(steps, 0.5, 0.25, branching, 2.0, 0, end).unwrap();
            assert_eq!(
                count_paths(&spec).unwrap(),
                brute_force_count(&spec),
                "steps={steps} branching={branching} end={end:?}"
            );
        }
    }

    #[test]
    fn enumeration_matches_count_and_is_sorted() {
        let spec = LatticeSpec::new(4, 1.0, 1.0, 5, 1.0, -1, Some(2)).unwrap();
        let set = enumerate_paths(&spec).unwrap();
        assert_eq!(set.len() as u128, count_paths(&spec).unwrap());
        let mut sorted = set.qpaths.clone();
        sorted.sort_by(|a, b| a.sites.cmp(&b.sites));
        assert_eq!(sorted, set.qpaths);
        // two runs are byte-identical
        let again = enumerate_paths(&spec).unwrap();
        assert_eq!(
            serde_json::to_vec(&PathSetJson::from(&set)).unwrap(),
            serde_json::to_vec(&PathSetJson::from(&again)).unwrap()
        );
    }

    #[test]
    fn infer_p_path_hand_cases() {
        let spec = LatticeSpec::new(2, 1.0, 1.0, 3, 1.0, 0, None).unwrap();
        let p = infer_p_path(&QPath::forward(vec![0, 1, 2]), &spec).unwrap();
        assert_eq!(p.levels, vec![1, 1]);
        assert_eq!(spec.momentum(p.levels[0]), 1.0);

        let p = infer_p_path(&QPath::forward(vec![0, 0, 0]), &spec).unwrap();
        assert_eq!(p.levels, vec![0, 0]);

        let p = infer_p_path(&QPath::forward(vec![0, 1, 0]), &spec).unwrap();
        assert_eq!(p.levels, vec![1, -1]);
    }

    #[test]
    fn infer_p_path_rejects_wide_steps() {
        let spec = LatticeSpec::new(1, 1.0, 1.0, 3, 1.0, 0, None).unwrap();
        let err = infer_p_path(&QPath::forward(vec![0, 2]), &spec).unwrap_err();
        assert!(matches!(err, Error::StepOutOfRange { delta: 2, .. }));
    }

    #[test]
    fn momentum_paths_integrate_back_to_position_paths() {
        let spec = LatticeSpec::new(5, 1.0, 1.0, 5, 1.0, 3, None).unwrap();
        let set = enumerate_paths(&spec).unwrap();
        for (q, p) in set.qpaths.iter().zip(&set.ppaths) {
            assert_eq!(p.integrate(spec.endpoint_start), q.sites);
        }
    }

    #[test]
    fn time_reverse_is_involution_on_sites() {
        let set = enumerate_paths(&fig2_spec()).unwrap();
        let back = time_reverse(&set);
        assert_eq!(back.len(), 3);
        assert!(back
            .qpaths
            .iter()
            .all(|q| q.direction == Direction::Backward));
        let twice = time_reverse(&back);
        let a: Vec<_> = set.qpaths.iter().map(|q| &q.sites).collect();
        let b: Vec<_> = twice.qpaths.iter().map(|q| &q.sites).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn palindromic_path_reverses_to_itself() {
        let set = PathSet {
            spec: fig2_spec(),
            qpaths: vec![QPath::forward(vec![0, 1, 0])],
            ppaths: vec![PPath {
                levels: vec![1, -1],
            }],
        };
        let back = time_reverse(&set);
        assert_eq!(back.qpaths[0].sites, vec![0, 1, 0]);
        assert_eq!(back.qpaths[0].direction, Direction::Backward);
        assert_eq!(back.ppaths[0].levels, vec![1, -1]);
    }

    #[test]
    fn explosion_guard_reports_predicted_count() {
        let spec = LatticeSpec::new(10, 1.0, 1.0, 3, 1.0, 0, None)
            .unwrap()
            .with_max_paths(100);
        match enumerate_paths(&spec) {
            Err(Error::PathExplosion {
                predicted,
                max_paths,
            }) => {
                assert_eq!(predicted, 3u128.pow(10));
                assert_eq!(max_paths, 100);
            }
            other => panic!("expected PathExplosion, got {other:?}"),
        }
    }

    #[test]
    fn unreachable_endpoint_is_infeasible() {
        let spec = LatticeSpec::new(2, 1.0, 1.0, 3, 1.0, 0, Some(5)).unwrap();
        assert!(matches!(
            enumerate_paths(&spec),
            Err(Error::InfeasibleEndpoints { .. })
        ));
    }

    #[test]
    fn free_count_is_branching_to_the_steps() {
        for (n, k) in [(3usize, 3u32), (4, 5), (6, 3)] {
            let spec = LatticeSpec::new(n, 1.0, 1.0, k, 1.0, 0, None).unwrap();
            assert_eq!(count_paths(&spec).unwrap(), u128::from(k).pow(n as u32));
        }
    }

    #[test]
    fn rejects_even_branching_and_bad_spacings() {
        assert!(LatticeSpec::new(2, 1.0, 1.0, 4, 1.0, 0, None).is_err());
        assert!(LatticeSpec::new(2, 0.0, 1.0, 3, 1.0, 0, None).is_err());
        assert!(LatticeSpec::new(2, 1.0, -1.0, 3, 1.0, 0, None).is_err());
        assert!(LatticeSpec::new(0, 1.0, 1.0, 3, 1.0, 0, None).is_err());
        assert!(LatticeSpec::new(2, 1.0, 1.0, 3, 0.0, 0, None).is_err());
    }
}
