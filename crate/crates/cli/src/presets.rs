//! Initial and boundary data presets.

use std::path::{Path, PathBuf};

use halfline_nls::special::smooth_step;
use halfline_nls::{HalfLineFunction, SpatialGrid, TimeGrid, TimeSignal, C64};

use crate::config::Table;
use crate::output::read_signal_csv;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum InitialPreset {
    /// `amplitude * exp(-((x - center) / width)^2)`
    Gaussian { center: f64, width: f64, amplitude: f64 },
    /// `amplitude * sech(x - center)`
    Sech { center: f64, amplitude: f64 },
    Zero,
    /// CSV `x,re,im` with one row per node `x >= 0`.
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryShape {
    /// `16 t^2 (T - t)^2 / T^4`, unit peak at `T/2`.
    Bump,
    /// `sin(omega t)` times a smooth ramp over `[0, T/4]`.
    SinusoidWindowed { omega: f64 },
    Constant,
    Zero,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryPreset {
    /// `amplitude * shape(t) * exp(i phase t)`
    Shaped { shape: BoundaryShape, amplitude: f64, phase: f64 },
    /// CSV `t,re,im` with one row per time node.
    File(PathBuf),
}

impl InitialPreset {
    pub fn from_table(t: &Table) -> Result<Self, CliError> {
        let preset = t.text("phi.preset").unwrap_or("zero");
        Ok(match preset {
            "gaussian" => Self::Gaussian {
                center: t.or("phi.center", 0.0)?,
                width: t.or("phi.width", 1.0)?,
                amplitude: t.or("phi.amplitude", 1.0)?,
            },
            "sech" => Self::Sech { center: t.or("phi.center", 0.0)?, amplitude: t.or("phi.amplitude", 1.0)? },
            "zero" => Self::Zero,
            "file" => Self::File(t.path("phi.path")?),
            other => return Err(CliError::Config(format!("unknown phi.preset `{other}`"))),
        })
    }

    pub fn sample(&self, grid: SpatialGrid) -> Result<HalfLineFunction, CliError> {
        Ok(match *self {
            Self::Gaussian { center, width, amplitude } => {
                if !(width > 0.0) {
                    return Err(CliError::Config("phi.width must be positive".into()));
                }
                HalfLineFunction::from_fn(grid, |x| C64::new(amplitude * (-((x - center) / width).powi(2)).exp(), 0.0))
            }
            Self::Sech { center, amplitude } => {
                HalfLineFunction::from_fn(grid, |x| C64::new(amplitude / (x - center).cosh(), 0.0))
            }
            Self::Zero => HalfLineFunction::from_fn(grid, |_| C64::new(0.0, 0.0)),
            Self::File(ref path) => {
                let z = grid.zero_index();
                let nodes: Vec<f64> = (z..grid.n()).map(|j| grid.x(j)).collect();
                let values = read_on_nodes(path, "phi", &nodes, grid.dx())?;
                HalfLineFunction::new(grid, values)?
            }
        })
    }
}

impl BoundaryPreset {
    pub fn from_table(t: &Table) -> Result<Self, CliError> {
        let preset = t.text("f.preset").unwrap_or("zero");
        let shape = match preset {
            "bump" => BoundaryShape::Bump,
            "sinusoid_windowed" => BoundaryShape::SinusoidWindowed { omega: t.or("f.omega", 1.0)? },
            "constant" => BoundaryShape::Constant,
            "zero" => BoundaryShape::Zero,
            "file" => return Ok(Self::File(t.path("f.path")?)),
            other => return Err(CliError::Config(format!("unknown f.preset `{other}`"))),
        };
        Ok(Self::Shaped { shape, amplitude: t.or("f.amplitude", 1.0)?, phase: t.or("f.phase", 0.0)? })
    }

    pub fn sample(&self, grid: TimeGrid) -> Result<TimeSignal, CliError> {
        let t_max = grid.t_max();
        Ok(match self {
            Self::Shaped { shape, amplitude, phase } => {
                let shape = shape.clone();
                let (a, w) = (*amplitude, *phase);
                TimeSignal::from_fn(grid, move |t| {
                    let g = match shape {
                        BoundaryShape::Bump => 16.0 * (t * (t_max - t)).max(0.0).powi(2) / t_max.powi(4),
                        BoundaryShape::SinusoidWindowed { omega } => (omega * t).sin() * smooth_step(4.0 * t / t_max),
                        BoundaryShape::Constant => 1.0,
                        BoundaryShape::Zero => 0.0,
                    };
                    C64::from_polar(a * g, w * t)
                })
            }
            Self::File(path) => {
                let values = read_on_nodes(path, "f", &grid.nodes(), grid.dt())?;
                TimeSignal::new(grid, values)?
            }
        })
    }

    pub fn is_file(&self) -> bool {
        matches!(self, Self::File(_))
    }
}

/// Reads a three-column CSV and checks its first column against `nodes`.
fn read_on_nodes(path: &Path, what: &str, nodes: &[f64], h: f64) -> Result<Vec<C64>, CliError> {
    let (coords, values) = read_signal_csv(path)?;
    if coords.len() != nodes.len() {
        return Err(CliError::Config(format!(
            "{what} file {} has {} rows, the grid needs {}",
            path.display(),
            coords.len(),
            nodes.len()
        )));
    }
    if let Some((i, (a, b))) = coords.iter().zip(nodes).enumerate().find(|(_, (a, b))| (*a - *b).abs() > 1e-9 * h.max(1.0)) {
        return Err(CliError::Config(format!("{what} file {}: row {} is at {a}, expected {b}", path.display(), i + 1)));
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_shapes_start_at_zero() {
        let tg = TimeGrid::new(2.0, 64).unwrap();
        for shape in [BoundaryShape::Bump, BoundaryShape::SinusoidWindowed { omega: 3.0 }, BoundaryShape::Zero] {
            let f = BoundaryPreset::Shaped { shape, amplitude: 2.0, phase: 1.0 }.sample(tg).unwrap();
            assert_eq!(f.values[0], C64::new(0.0, 0.0));
        }
        let bump = BoundaryPreset::Shaped { shape: BoundaryShape::Bump, amplitude: 2.0, phase: 0.0 };
        assert!((bump.sample(tg).unwrap().values[32].re - 2.0).abs() < 1e-14);
    }

    #[test]
    fn constant_with_phase() {
        let tg = TimeGrid::new(1.0, 16).unwrap();
        let f = BoundaryPreset::Shaped { shape: BoundaryShape::Constant, amplitude: 0.5, phase: 1.0 }
            .sample(tg)
            .unwrap();
        let want = C64::from_polar(0.5, 1.0);
        assert!((f.values[16] - want).norm() < 1e-15);
    }
}
