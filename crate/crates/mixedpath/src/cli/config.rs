//! Experiment configuration: a flat key=value text format with section
//! headers.
//!
//! ```text
//! # comment
//! [lattice]
//! num_steps = 2
//! dt = 1.0
//! dq = 1.0
//! branching = 3
//! mass = 1.0
//! endpoint_start = 0
//! endpoint_end = 0        # omit the key for a free endpoint
//! max_paths = 1000000
//!
//! [model]
//! kind = free             # free | harmonic | table
//! mass = 1.0
//! omega = 1.0             # harmonic only
//! hbar = 1.0
//! table = -1:0.5, 0:0.0, 1:0.5   # table only, site:energy pairs
//!
//! [solver]
//! mode = equal            # equal | stationary | minimax
//! norm_mode = sum         # sum | norm
//! tol = 1e-10
//! max_iter = 10000
//!
//! [amplitude]
//! mode = rotation         # rotation | paper
//! include_backward = false
//! scale = 1.0             # paper mode magnitude
//!
//! [output]
//! directory = out
//! formats = json,csv
//! ```
//!
//! Unknown sections or keys are rejected.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;

use crate::action::HamiltonianModel;
use crate::error::{Error, Result};
use crate::game::NormMode;
use crate::lattice::LatticeSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverMode {
    Equal,
    Stationary,
    Minimax,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AmplitudeConfigMode {
    Rotation,
    Paper,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolverConfig {
    pub mode: SolverMode,
    pub norm_mode: NormMode,
    pub tol: f64,
    pub max_iter: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct AmplitudeConfig {
    pub mode: AmplitudeConfigMode,
    pub include_backward: bool,
    pub scale: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub json: bool,
    pub csv: bool,
}

/// A fully validated experiment description.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub lattice: LatticeSpec,
    pub model: HamiltonianModel,
    pub solver: SolverConfig,
    pub amplitude: AmplitudeConfig,
    pub output: OutputConfig,
    /// The canonicalized text this config was parsed from; hashed into
    /// artifacts for provenance.
    #[serde(skip)]
    pub source: String,
}

impl ExperimentConfig {
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (line_no, raw) in text.lines().enumerate() {
            let line = strip_comment(raw).trim().to_string();
            if line.is_empty() {
                continue;
            }
            if line.starts_with('[') {
                if !line.ends_with(']') {
                    return Err(Error::Config(format!(
                        "line {}: malformed section header `{raw}`",
                        line_no + 1
                    )));
                }
                let name = line[1..line.len() - 1].trim().to_string();
                if !matches!(
                    name.as_str(),
                    "lattice" | "model" | "solver" | "amplitude" | "output"
                ) {
                    return Err(Error::Config(format!("unknown section [{name}]")));
                }
                sections.entry(name.clone()).or_default();
                current = Some(name);
                continue;
            }
            let section = current.as_ref().ok_or_else(|| {
                Error::Config(format!("line {}: key before any section", line_no + 1))
            })?;
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value", line_no + 1))
            })?;
            let prev = sections
                .get_mut(section)
                .expect("section inserted above")
                .insert(key.trim().to_string(), value.trim().to_string());
            if prev.is_some() {
                return Err(Error::Config(format!(
                    "duplicate key `{}` in [{section}]",
                    key.trim()
                )));
            }
        }

        let lattice = parse_lattice(sections.remove("lattice"))?;
        let model = parse_model(sections.remove("model"))?;
        let solver = parse_solver(sections.remove("solver"))?;
        let amplitude = parse_amplitude(sections.remove("amplitude"))?;
        let output = parse_output(sections.remove("output"))?;
        Ok(ExperimentConfig {
            lattice,
            model,
            solver,
            amplitude,
            output,
            source: canonicalize(text),
        })
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_text(&text)
    }

    /// Hex SHA-256 of the canonicalized config text.
    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let digest = Sha256::digest(self.source.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find(['#', ';']) {
        Some(pos) => &line[..pos],
        None => line,
    }
}

/// Comments and blank lines dropped, whitespace normalized: configs that
/// differ only in formatting hash identically.
fn canonicalize(text: &str) -> String {
    let mut out = String::new();
    for raw in text.lines() {
        let line = strip_comment(raw).trim().to_string();
        if line.is_empty() {
            continue;
        }
        if let Some((k, v)) = line.split_once('=') {
            out.push_str(&format!("{} = {}\n", k.trim(), v.trim()));
        } else {
            out.push_str(&line);
            out.push('\n');
        }
    }
    out
}

struct Section {
    name: &'static str,
    keys: BTreeMap<String, String>,
}

impl Section {
    fn new(name: &'static str, keys: Option<BTreeMap<String, String>>) -> Result<Self> {
        Ok(Self {
            name,
            keys: keys.ok_or_else(|| Error::Config(format!("missing section [{name}]")))?,
        })
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.keys.remove(key)
    }

    fn required(&mut self, key: &str) -> Result<String> {
        self.take(key)
            .ok_or_else(|| Error::Config(format!("[{}] is missing `{key}`", self.name)))
    }

    fn parse<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let raw = self.required(key)?;
        raw.parse()
            .map_err(|_| Error::Config(format!("[{}] {key} = {raw}: cannot parse", self.name)))
    }

    fn parse_or<T: std::str::FromStr>(&mut self, key: &str, default: T) -> Result<T> {
        match self.take(key) {
            None => Ok(default),
            Some(raw) => raw
                .parse()
                .map_err(|_| Error::Config(format!("[{}] {key} = {raw}: cannot parse", self.name))),
        }
    }

    fn finish(self) -> Result<()> {
        if let Some(key) = self.keys.keys().next() {
            return Err(Error::Config(format!(
                "unknown key `{key}` in [{}]",
                self.name
            )));
        }
        Ok(())
    }
}

fn parse_lattice(keys: Option<BTreeMap<String, String>>) -> Result<LatticeSpec> {
    let mut s = Section::new("lattice", keys)?;
    let num_steps: usize = s.parse("num_steps")?;
    let dt: f64 = s.parse("dt")?;
    let dq: f64 = s.parse("dq")?;
    let branching: u32 = s.parse("branching")?;
    let mass: f64 = s.parse("mass")?;
    let endpoint_start: i64 = s.parse("endpoint_start")?;
    let endpoint_end: Option<i64> =
        match s.take("endpoint_end") {
            None => None,
            Some(raw) if raw.eq_ignore_ascii_case("free") => None,
            Some(raw) => Some(raw.parse().map_err(|_| {
                Error::Config(format!("[lattice] endpoint_end = {raw}: cannot parse"))
            })?),
        };
    let max_paths: u64 = s.parse_or("max_paths", LatticeSpec::DEFAULT_MAX_PATHS)?;
    s.finish()?;
    Ok(LatticeSpec::new(
        num_steps,
        dt,
        dq,
        branching,
        mass,
        endpoint_start,
        endpoint_end,
    )?
    .with_max_paths(max_paths))
}

fn parse_model(keys: Option<BTreeMap<String, String>>) -> Result<HamiltonianModel> {
    let mut s = Section::new("model", keys)?;
    let kind = s.required("kind")?;
    let mass: f64 = s.parse("mass")?;
    let hbar: f64 = s.parse_or("hbar", 1.0)?;
    let model = match kind.as_str() {
        "free" => {
            let model = HamiltonianModel::free(mass, hbar)?;
            if let Some(omega) = s.take("omega") {
                let _: f64 = omega
                    .parse()
                    .map_err(|_| Error::Config("omega: cannot parse".into()))?;
            }
            model
        }
        "harmonic" => {
            let omega: f64 = s.parse("omega")?;
            HamiltonianModel::harmonic(mass, omega, hbar)?
        }
        "table" => {
            let raw = s.required("table")?;
            let mut table = BTreeMap::new();
            for entry in raw.split(',') {
                let (site, energy) = entry.trim().split_once(':').ok_or_else(|| {
                    Error::Config(format!("table entry `{entry}`: expected site:energy"))
                })?;
                let site: i64 = site
                    .trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("table site `{site}`: cannot parse")))?;
                let energy: f64 = energy
                    .trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("table energy `{energy}`: cannot parse")))?;
                table.insert(site, energy);
            }
            HamiltonianModel::tabulated(mass, table, hbar)?
        }
        other => {
            return Err(Error::Config(format!(
                "model kind `{other}` is not free | harmonic | table"
            )))
        }
    };
    s.finish()?;
    Ok(model)
}

fn parse_solver(keys: Option<BTreeMap<String, String>>) -> Result<SolverConfig> {
    let mut s = Section::new("solver", keys)?;
    let mode = match s.parse_or::<String>("mode", "equal".into())?.as_str() {
        "equal" => SolverMode::Equal,
        "stationary" => SolverMode::Stationary,
        "minimax" => SolverMode::Minimax,
        other => {
            return Err(Error::Config(format!(
                "solver mode `{other}` is not equal | stationary | minimax"
            )))
        }
    };
    let norm_mode = match s.parse_or::<String>("norm_mode", "sum".into())?.as_str() {
        "sum" => NormMode::SumForm,
        "norm" => NormMode::NormForm,
        other => {
            return Err(Error::Config(format!(
                "norm_mode `{other}` is not sum | norm"
            )))
        }
    };
    let tol: f64 = s.parse_or("tol", 1e-10)?;
    let max_iter: usize = s.parse_or("max_iter", 10_000)?;
    s.finish()?;
    if tol <= 0.0 || tol.is_nan() {
        return Err(Error::Config("solver tol must be positive".into()));
    }
    if max_iter == 0 {
        return Err(Error::Config("solver max_iter must be >= 1".into()));
    }
    Ok(SolverConfig {
        mode,
        norm_mode,
        tol,
        max_iter,
    })
}

fn parse_amplitude(keys: Option<BTreeMap<String, String>>) -> Result<AmplitudeConfig> {
    let mut s = Section::new("amplitude", keys)?;
    let mode = match s.parse_or::<String>("mode", "rotation".into())?.as_str() {
        "rotation" => AmplitudeConfigMode::Rotation,
        "paper" => AmplitudeConfigMode::Paper,
        other => {
            return Err(Error::Config(format!(
                "amplitude mode `{other}` is not rotation | paper"
            )))
        }
    };
    let include_backward: bool = s.parse_or("include_backward", false)?;
    let scale: f64 = s.parse_or("scale", 1.0)?;
    s.finish()?;
    if scale <= 0.0 || scale.is_nan() {
        return Err(Error::Config("amplitude scale must be positive".into()));
    }
    Ok(AmplitudeConfig {
        mode,
        include_backward,
        scale,
    })
}

fn parse_output(keys: Option<BTreeMap<String, String>>) -> Result<OutputConfig> {
    let mut s = Section::new("output", keys)?;
    let directory: PathBuf = PathBuf::from(s.parse_or::<String>("directory", "out".into())?);
    let formats = s.parse_or::<String>("formats", "json,csv".into())?;
    s.finish()?;
    let mut json = false;
    let mut csv = false;
    for f in formats.split(',') {
        match f.trim() {
            "json" => json = true,
            "csv" => csv = true,
            "" => {}
            other => {
                return Err(Error::Config(format!(
                    "output format `{other}` is not json | csv"
                )))
            }
        }
    }
    if !json && !csv {
        return Err(Error::Config("output formats selects nothing".into()));
    }
    Ok(OutputConfig {
        directory,
        json,
        csv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG2: &str = "\
# two steps, three momentum levels, pinned equal endpoints
[lattice]
num_steps = 2
dt = 1.0
dq = 1.0
branching = 3
mass = 1.0
endpoint_start = 0
endpoint_end = 0

[model]
kind = free
mass = 1.0
hbar = 1.0

[solver]
mode = equal
norm_mode = sum

[amplitude]
mode = paper

[output]
directory = out
formats = json,csv
";

    #[test]
    fn parses_fig2_config() {
        let config = ExperimentConfig::parse_text(FIG2).unwrap();
        assert_eq!(config.lattice.num_steps, 2);
        assert_eq!(config.lattice.branching, 3);
        assert_eq!(config.lattice.endpoint_end, Some(0));
        assert_eq!(config.solver.mode, SolverMode::Equal);
        assert_eq!(config.amplitude.mode, AmplitudeConfigMode::Paper);
        assert!(config.output.json && config.output.csv);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let bad = FIG2.replace("branching = 3", "branching = 3\nwidth = 7");
        let err = ExperimentConfig::parse_text(&bad).unwrap_err();
        assert!(err.to_string().contains("width"), "{err}");
    }

    #[test]
    fn unknown_sections_are_rejected() {
        let bad = format!("{FIG2}\n[plotting]\nstyle = dark\n");
        assert!(ExperimentConfig::parse_text(&bad).is_err());
    }

    #[test]
    fn missing_sections_are_reported() {
        assert!(ExperimentConfig::parse_text("[lattice]\nnum_steps = 1\n").is_err());
    }

    #[test]
    fn invariants_checked_on_load() {
        let bad = FIG2.replace("branching = 3", "branching = 4");
        assert!(ExperimentConfig::parse_text(&bad).is_err());
    }

    #[test]
    fn hash_ignores_formatting_but_not_values() {
        let a = ExperimentConfig::parse_text(FIG2).unwrap();
        let reformatted = FIG2.replace("num_steps = 2", "num_steps   =    2   # comment");
        let b = ExperimentConfig::parse_text(&reformatted).unwrap();
        assert_eq!(a.hash(), b.hash());
        let c =
            ExperimentConfig::parse_text(&FIG2.replace("num_steps = 2", "num_steps = 3")).unwrap();
        assert_ne!(a.hash(), c.hash());
    }

    #[test]
    fn table_model_parses() {
        let cfg = FIG2.replace(
            "kind = free\nmass = 1.0\nhbar = 1.0",
            "kind = table\nmass = 1.0\nhbar = 1.0\ntable = -1:0.5, 0:0.0, 1:0.5",
        );
        let config = ExperimentConfig::parse_text(&cfg).unwrap();
        let table = config.model.potential_table.unwrap();
        assert_eq!(table.len(), 3);
        assert_eq!(table[&-1], 0.5);
    }
}
