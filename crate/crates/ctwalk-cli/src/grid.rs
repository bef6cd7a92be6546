//! Shared time-grid flags for the evolve-style subcommands.

use clap::Args;

use ctwalk::classical::log_time_grid;
use ctwalk::{Error, Result};

use crate::config::Config;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum GridKind {
    Log,
    Linear,
}

#[derive(Args, Debug)]
pub struct GridArgs {
    /// First sample time (default from config, 1e-3).
    #[arg(long)]
    pub t_min: Option<f64>,
    /// Last sample time (default from config, 1e2).
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Number of samples (default from config, 50).
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, value_enum, default_value = "log")]
    pub grid: GridKind,
}

impl GridArgs {
    pub fn build(&self, config: &Config) -> Result<Vec<f64>> {
        let t_min = self.t_min.unwrap_or(config.t_min);
        let t_max = self.t_max.unwrap_or(config.t_max);
        let points = self.points.unwrap_or(config.points);
        if points < 2 {
            return Err(Error::Spec("time grid needs at least 2 points".into()));
        }
        if t_max <= t_min || t_max.is_nan() || t_min.is_nan() {
            return Err(Error::Spec(format!(
                "time grid needs t_max > t_min, got [{t_min}, {t_max}]"
            )));
        }
        match self.grid {
            GridKind::Log => {
                if t_min <= 0.0 {
                    return Err(Error::Spec(
                        "logarithmic grids need t_min > 0; use --grid linear".into(),
                    ));
                }
                Ok(log_time_grid(t_min, t_max, points))
            }
            GridKind::Linear => Ok((0..points)
                .map(|i| t_min + (t_max - t_min) * i as f64 / (points - 1) as f64)
                .collect()),
        }
    }
}
