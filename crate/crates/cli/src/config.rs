//! Run configuration: flat `key = value` text with dotted sections.
//!
//! ```text
//! # comment
//! problem.alpha = 3
//! [grid]
//! nx = 1024        # same as grid.nx
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use halfline_nls::solver::{compatibility_check, critical_exponent, criticality, Criticality, ProblemSpec, SobolevIndex, SolverConfig};
use halfline_nls::{SpatialGrid, TimeGrid, C64};

use crate::presets::{BoundaryPreset, InitialPreset};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Problem {
    pub lambda: C64,
    pub alpha: f64,
    pub s: f64,
    pub t_final: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub nt: usize,
}

impl GridConfig {
    pub fn spatial(&self) -> Result<SpatialGrid, CliError> {
        Ok(SpatialGrid::new(self.x_min, self.x_max, self.nx)?)
    }

    pub fn time(&self, t_final: f64) -> Result<TimeGrid, CliError> {
        Ok(TimeGrid::new(t_final, self.nt)?)
    }

    /// Both node counts multiplied by `2^level`.
    pub fn refined(&self, level: usize) -> Self {
        Self { nx: self.nx << level, nt: self.nt << level, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub formats: Formats,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: Problem,
    pub phi: InitialPreset,
    pub f: BoundaryPreset,
    pub grid: GridConfig,
    pub solver: SolverConfig,
    pub output: OutputConfig,
}

const KEYS: &[&str] = &[
    "problem.lambda_re",
    "problem.lambda_im",
    "problem.alpha",
    "problem.s",
    "problem.T",
    "phi.preset",
    "phi.center",
    "phi.width",
    "phi.amplitude",
    "phi.path",
    "f.preset",
    "f.amplitude",
    "f.omega",
    "f.phase",
    "f.path",
    "grid.x_min",
    "grid.x_max",
    "grid.nx",
    "grid.nt",
    "solver.tol",
    "solver.max_iter",
    "solver.ratio_cap",
    "solver.delta_crit",
    "solver.max_halvings",
    "output.directory",
    "output.formats",
];

/// Raw key/value table with the file's directory for relative paths.
pub struct Table {
    entries: BTreeMap<String, (usize, String)>,
    base: PathBuf,
}

impl Table {
    pub fn parse(text: &str, base: &Path) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        let mut section = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| CliError::Config(format!("line {line_no}: unterminated section header")))?;
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {line_no}: expected `key = value`")))?;
            let key = key.trim();
            let full = if section.is_empty() || key.contains('.') { key.to_string() } else { format!("{section}.{key}") };
            if !KEYS.contains(&full.as_str()) {
                return Err(CliError::Config(format!("line {line_no}: unknown key `{full}`")));
            }
            let value = value.trim().trim_matches('"').to_string();
            if entries.insert(full.clone(), (line_no, value)).is_some() {
                return Err(CliError::Config(format!("line {line_no}: duplicate key `{full}`")));
            }
        }
        Ok(Self { entries, base: base.to_path_buf() })
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    pub fn number(&self, key: &str) -> Result<Option<f64>, CliError> {
        let Some((line, v)) = self.entries.get(key) else { return Ok(None) };
        let x: f64 = v
            .parse()
            .map_err(|_| CliError::Config(format!("line {line}: `{key}` is not a number: `{v}`")))?;
        if !x.is_finite() {
            return Err(CliError::Config(format!("line {line}: `{key}` must be finite")));
        }
        Ok(Some(x))
    }

    pub fn required(&self, key: &str) -> Result<f64, CliError> {
        self.number(key)?.ok_or_else(|| CliError::Config(format!("missing key `{key}`")))
    }

    pub fn or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        Ok(self.number(key)?.unwrap_or(default))
    }

    pub fn count(&self, key: &str) -> Result<Option<usize>, CliError> {
        let Some((line, v)) = self.entries.get(key) else { return Ok(None) };
        v.parse()
            .map(Some)
            .map_err(|_| CliError::Config(format!("line {line}: `{key}` is not a non-negative integer: `{v}`")))
    }

    pub fn path(&self, key: &str) -> Result<PathBuf, CliError> {
        let p = self.text(key).ok_or_else(|| CliError::Config(format!("missing key `{key}`")))?;
        Ok(self.base.join(p))
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self, CliError> {
        let t = Table::parse(text, base)?;
        let problem = Problem {
            lambda: C64::new(t.or("problem.lambda_re", 0.0)?, t.or("problem.lambda_im", 0.0)?),
            alpha: t.required("problem.alpha")?,
            s: t.required("problem.s")?,
            t_final: t.required("problem.T")?,
        };
        let grid = GridConfig {
            x_min: t.required("grid.x_min")?,
            x_max: t.required("grid.x_max")?,
            nx: t.count("grid.nx")?.ok_or_else(|| CliError::Config("missing key `grid.nx`".into()))?,
            nt: t.count("grid.nt")?.ok_or_else(|| CliError::Config("missing key `grid.nt`".into()))?,
        };
        let defaults = SolverConfig::default();
        let solver = SolverConfig {
            tol: t.or("solver.tol", defaults.tol)?,
            max_iter: t.count("solver.max_iter")?.unwrap_or(defaults.max_iter),
            ratio_cap: t.or("solver.ratio_cap", defaults.ratio_cap)?,
            delta_crit: t.or("solver.delta_crit", defaults.delta_crit)?,
            max_halvings: t.count("solver.max_halvings")?.unwrap_or(defaults.max_halvings),
            ..defaults
        };
        let output = OutputConfig {
            directory: PathBuf::from(t.text("output.directory").unwrap_or("out")),
            formats: parse_formats(t.text("output.formats").unwrap_or("csv,json"))?,
        };
        let cfg = Self {
            problem,
            phi: InitialPreset::from_table(&t)?,
            f: BoundaryPreset::from_table(&t)?,
            grid,
            solver,
            output,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let p = &self.problem;
        if !(p.t_final > 0.0) {
            return Err(CliError::Config(format!("problem.T must be positive, got {}", p.t_final)));
        }
        let sg = self.grid.spatial()?;
        if !sg.is_zero_aligned() {
            return Err(CliError::Config("the grid must have a node at x = 0".into()));
        }
        self.grid.time(p.t_final)?;
        let s = SobolevIndex::new(p.s)?;
        if criticality(p.s, p.alpha)? == Criticality::Supercritical {
            return Err(halfline_nls::Error::Supercritical { s: p.s, alpha: p.alpha, limit: critical_exponent(p.s) }.into());
        }
        let sv = &self.solver;
        if !(sv.tol > 0.0 && sv.ratio_cap > 0.0 && sv.ratio_cap < 1.0 && sv.delta_crit > 0.0 && sv.max_iter > 0) {
            return Err(CliError::Config(
                "solver settings need tol > 0, 0 < ratio_cap < 1, delta_crit > 0 and max_iter > 0".into(),
            ));
        }
        let spec = self.spec()?;
        if !compatibility_check(&spec.phi, &spec.f, s, sv.compat_tol) {
            return Err(halfline_nls::Error::Incompatible { gap: (spec.phi.at_origin() - spec.f.values[0]).norm() }.into());
        }
        Ok(())
    }

    /// Problem data sampled on the configured grids.
    pub fn spec(&self) -> Result<ProblemSpec, CliError> {
        self.spec_on(&self.grid)
    }

    pub fn spec_on(&self, grid: &GridConfig) -> Result<ProblemSpec, CliError> {
        let p = &self.problem;
        let sg = grid.spatial()?;
        let tg = grid.time(p.t_final)?;
        let phi = self.phi.sample(sg)?;
        let f = self.f.sample(tg)?;
        Ok(ProblemSpec::new(p.lambda, p.alpha, SobolevIndex::new(p.s)?, phi, f)?)
    }
}

fn parse_formats(list: &str) -> Result<Formats, CliError> {
    let mut formats = Formats { csv: false, json: false };
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item {
            "csv" => formats.csv = true,
            "json" => formats.json = true,
            other => return Err(CliError::Config(format!("unknown output format `{other}`"))),
        }
    }
    Ok(formats)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SOLITON: &str = "
        [problem]
        lambda_re = 2
        alpha = 3
        s = 1
        T = 0.5
        phi.preset = sech   # dotted key inside a section
        phi.center = 6
        f.preset = constant
        f.amplitude = 0.004957473893560379
        f.phase = 1
        [grid]
        x_min = -32
        x_max = 32
        nx = 256
        nt = 64
    ";

    #[test]
    fn sections_and_dotted_keys() {
        let cfg = RunConfig::parse(SOLITON, Path::new(".")).unwrap();
        assert_eq!(cfg.problem.lambda, C64::new(2.0, 0.0));
        assert_eq!(cfg.grid.nx, 256);
        assert_eq!(cfg.phi, InitialPreset::Sech { center: 6.0, amplitude: 1.0 });
        assert_eq!(cfg.solver, SolverConfig::default());
        assert_eq!(cfg.output.formats, Formats { csv: true, json: true });
    }

    #[test]
    fn rejects_unknown_and_duplicate_keys() {
        let e = RunConfig::parse(&format!("{SOLITON}\nproblem.beta = 1"), Path::new(".")).unwrap_err();
        assert!(e.to_string().contains("unknown key"), "{e}");
        let e = RunConfig::parse(&format!("{SOLITON}\ngrid.nx = 512"), Path::new(".")).unwrap_err();
        assert!(e.to_string().contains("duplicate"), "{e}");
    }

    #[test]
    fn rejects_supercritical_and_incompatible() {
        let text = SOLITON.replace("s = 1", "s = 0").replace("alpha = 3", "alpha = 6");
        let e = RunConfig::parse(&text, Path::new(".")).unwrap_err();
        assert!(matches!(e, CliError::Core(halfline_nls::Error::Supercritical { .. })), "{e}");
        let text = SOLITON.replace("f.amplitude = 0.004957473893560379", "f.amplitude = 0.5");
        let e = RunConfig::parse(&text, Path::new(".")).unwrap_err();
        assert!(matches!(e, CliError::Core(halfline_nls::Error::Incompatible { .. })), "{e}");
    }

    #[test]
    fn rejects_bad_numbers_and_grids() {
        assert!(RunConfig::parse(&SOLITON.replace("nx = 256", "nx = 300"), Path::new(".")).is_err());
        assert!(RunConfig::parse(&SOLITON.replace("T = 0.5", "T = soon"), Path::new(".")).is_err());
        assert!(RunConfig::parse(&SOLITON.replace("x_min = -32", "x_min = -31"), Path::new(".")).is_err());
    }
}
