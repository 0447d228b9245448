//! Turns catalog entries from the config into callables.

use std::path::Path;
use std::sync::Arc;

use tscale_core::parabolic::{Forcing, Profile};
use tscale_core::solver::{ConstantRhs, FnRhs, LinearRhs};
use tscale_core::{Grid, GridFunction, Rhs, TsInterval};

use crate::config::{ForcingCfg, FunctionCfg, ProfileCfg, RhsCfg, ScalarFn};
use crate::error::CliError;

pub type Scalar = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

pub fn scalar(f: &ScalarFn) -> Scalar {
    match *f {
        ScalarFn::Constant { value } => Arc::new(move |_| value),
        ScalarFn::Poly { ref coefficients } => {
            let c = coefficients.clone();
            Arc::new(move |t| c.iter().rev().fold(0.0, |acc, k| acc * t + k))
        }
        ScalarFn::Exp { amplitude, rate } => Arc::new(move |t| amplitude * (rate * t).exp()),
        ScalarFn::Sin { amplitude, frequency, phase } => Arc::new(move |t| amplitude * (frequency * t + phase).sin()),
        ScalarFn::Point { at, value } => Arc::new(move |t| if t == at { value } else { 0.0 }),
        ScalarFn::Step { at, left, right } => Arc::new(move |t| if t <= at { left } else { right }),
    }
}

fn read(base: &Path, file: &Path) -> Result<String, CliError> {
    let path = base.join(file);
    std::fs::read_to_string(&path).map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))
}

/// Grid function from `function` components or `function_csv`.
pub fn grid_function(cfg: &FunctionCfg, interval: &TsInterval, base: &Path) -> Result<GridFunction, CliError> {
    match (&cfg.function, &cfg.function_csv) {
        (Some(components), None) => {
            if components.is_empty() {
                return Err(CliError::Validation("function needs at least one component".into()));
            }
            let grid = Arc::new(Grid::build(interval, cfg.h)?);
            let fs: Vec<Scalar> = components.iter().map(scalar).collect();
            Ok(GridFunction::from_fn(grid, fs.len(), |t, out| {
                for (o, f) in out.iter_mut().zip(&fs) {
                    *o = f(t);
                }
            })?)
        }
        (None, Some(file)) => Ok(GridFunction::from_csv(&read(base, file)?, interval)?),
        _ => Err(CliError::Validation("give exactly one of `function` and `function_csv`".into())),
    }
}

/// Scalar grid function from an inline catalog entry or a CSV file.
pub fn scalar_grid_function(
    f: Option<&ScalarFn>,
    csv: Option<&Path>,
    interval: &TsInterval,
    h: f64,
    base: &Path,
) -> Result<GridFunction, CliError> {
    let u = match (f, csv) {
        (Some(f), None) => {
            let f = scalar(f);
            GridFunction::scalar(Arc::new(Grid::build(interval, h)?), |t| f(t))?
        }
        (None, Some(file)) => GridFunction::from_csv(&read(base, file)?, interval)?,
        _ => return Err(CliError::Validation("give exactly one inline function or CSV file".into())),
    };
    if u.dim() != 1 {
        return Err(CliError::Validation(format!("expected a scalar function, got {} columns", u.dim())));
    }
    Ok(u)
}

pub fn rhs(cfg: &RhsCfg) -> Result<Arc<dyn Rhs>, CliError> {
    Ok(match cfg {
        RhsCfg::Linear { matrix, offset } => {
            let d = matrix.len();
            if matrix.iter().any(|row| row.len() != d) {
                return Err(CliError::Validation("linear rhs matrix must be square".into()));
            }
            let offset = offset.clone().unwrap_or_else(|| vec![0.0; d]);
            Arc::new(LinearRhs::new(matrix.concat(), offset)?)
        }
        RhsCfg::Constant { value } => Arc::new(ConstantRhs(value.clone())),
        RhsCfg::Forcing { components } => {
            let fs: Vec<Scalar> = components.iter().map(scalar).collect();
            Arc::new(FnRhs::new(fs.len(), move |t: f64, _: &[f64], out: &mut [f64]| {
                for (o, f) in out.iter_mut().zip(&fs) {
                    *o = f(t);
                }
            }))
        }
    })
}

pub fn profile(cfg: &ProfileCfg, dx: f64, base: &Path) -> Result<Profile, CliError> {
    Ok(match *cfg {
        ProfileCfg::Zero => Arc::new(|_| 0.0),
        ProfileCfg::Geometric { amplitude, ratio } => Arc::new(move |x| amplitude * ratio.powf(x)),
        ProfileCfg::Gaussian { amplitude, center, width } => {
            if !(width > 0.0) {
                return Err(CliError::Validation(format!("gaussian width must be positive, got {width}")));
            }
            Arc::new(move |x| amplitude * (-(x - center).powi(2) / (2.0 * width * width)).exp())
        }
        ProfileCfg::Table { ref values, ref file } => {
            let table = match (values, file) {
                (Some(v), None) => v.clone(),
                (None, Some(f)) => parse_table(&read(base, f)?)?,
                _ => return Err(CliError::Validation("table profile needs exactly one of `values` and `file`".into())),
            };
            Arc::new(move |x| {
                let k = (x / dx).round() as usize;
                if k >= 1 { table.get(k - 1).copied().unwrap_or(0.0) } else { 0.0 }
            })
        }
    })
}

fn parse_table(text: &str) -> Result<Vec<f64>, CliError> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| {
            l.parse::<f64>()
                .map_err(|e| CliError::Validation(format!("table line {}: {e}", i + 1)))
        })
        .collect()
}

pub fn forcing(cfg: &ForcingCfg, dx: f64, base: &Path) -> Result<Forcing, CliError> {
    let space = profile(&cfg.profile, dx, base)?;
    let time: Scalar = cfg.time.as_ref().map_or_else(|| Arc::new(|_| 1.0) as Scalar, scalar);
    Ok(Arc::new(move |t, x| time(t) * space(x)))
}
