//! Log density of a two-dimensional target on a regular grid, for contour
//! plots underneath sampler output.

use std::path::Path;

use stein_core::targets::Target;
use stein_core::{Error, Result};

use crate::output::{num, Table};

#[derive(Debug, Clone)]
pub struct Config {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub resolution: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            x_range: (-2.0, 3.0),
            y_range: (-3.0, 3.0),
            resolution: 200,
        }
    }
}

pub fn run(target: &dyn Target, config: &Config) -> Result<Table> {
    if target.dim() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            actual: target.dim(),
        });
    }
    if config.resolution < 2 {
        return Err(Error::Parameter("grid resolution must be at least 2".into()));
    }
    let axis = |(lo, hi): (f64, f64), k: usize| lo + (hi - lo) * k as f64 / (config.resolution - 1) as f64;
    let mut table = Table::new(&["theta1", "theta2", "log_density"]);
    for i in 0..config.resolution {
        for j in 0..config.resolution {
            let x = [axis(config.x_range, i), axis(config.y_range, j)];
            table.push(vec![num(x[0]), num(x[1]), num(target.log_density(&x))]);
        }
    }
    Ok(table)
}

pub fn write(table: &Table, dir: &Path, target_name: &str) -> Result<()> {
    table.write(&dir.join("density_grid.csv"), "density-grid", &format!("target={target_name}"))
}
