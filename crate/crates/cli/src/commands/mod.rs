mod converge;
mod solve;
mod verify;

pub use converge::{cmd_converge, soliton_reference};
pub use solve::{cmd_solve, SolveSummary};
pub use verify::{cmd_verify, Check};

use std::path::Path;

use crate::CliError;

fn prepare_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))
}

/// `||a - b|| / max(||a||, ||b||)`, zero when both vanish.
fn rel_l2(a: &[halfline_nls::C64], b: &[halfline_nls::C64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let na: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let nb: f64 = b.iter().map(|z| z.norm_sqr()).sum();
    let scale = na.max(nb);
    if scale > 0.0 {
        (d / scale).sqrt()
    } else {
        0.0
    }
}
