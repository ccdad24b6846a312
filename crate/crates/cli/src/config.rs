//! JSON run configuration shared by all subcommands.

use serde::Deserialize;
use spectraflow::spectra::{converge_truncation_capped, linspace, TruncationReport};
use spectraflow::{Error, FockTruncation, ModelKind, ModelParams};

use crate::CliError;

/// Fock truncation selector: `"auto"` lets the convergence controller
/// choose, an integer pins it.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(try_from = "NCutRaw")]
pub enum NCutSpec {
    #[default]
    Auto,
    Fixed(usize),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NCutRaw {
    Num(usize),
    Text(String),
}

impl TryFrom<NCutRaw> for NCutSpec {
    type Error = String;

    fn try_from(raw: NCutRaw) -> Result<Self, String> {
        match raw {
            NCutRaw::Num(n) => Ok(NCutSpec::Fixed(n)),
            NCutRaw::Text(s) if s == "auto" => Ok(NCutSpec::Auto),
            NCutRaw::Text(s) => Err(format!("n_cut must be \"auto\" or an integer, got \"{s}\"")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelName {
    Rabi,
    Jc,
    AsymRabi,
}

impl From<ModelName> for ModelKind {
    fn from(m: ModelName) -> ModelKind {
        match m {
            ModelName::Rabi => ModelKind::Rabi,
            ModelName::Jc => ModelKind::Jc,
            ModelName::AsymRabi => ModelKind::AsymRabi,
        }
    }
}

fn default_omega() -> f64 {
    1.0
}
fn default_g_max() -> f64 {
    1.5
}
fn default_g_steps() -> usize {
    151
}
fn default_levels() -> usize {
    50
}
fn default_histogram_g() -> f64 {
    1.2
}
fn default_n_bins() -> usize {
    25
}
fn default_out_dir() -> String {
    ".".to_string()
}
fn default_converge_tol() -> f64 {
    1e-8
}
fn default_n_cut_cap() -> usize {
    spectraflow::spectra::N_CUT_CAP
}

/// One flat JSON document drives every subcommand.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelName,
    #[serde(default = "default_omega")]
    pub omega: f64,
    /// Defaults to `omega` (resonance) when omitted.
    #[serde(default)]
    pub omega0: Option<f64>,
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default)]
    pub g_min: f64,
    #[serde(default = "default_g_max")]
    pub g_max: f64,
    #[serde(default = "default_g_steps")]
    pub g_steps: usize,
    /// Number of retained levels `M`.
    #[serde(default = "default_levels")]
    pub levels: usize,
    #[serde(default)]
    pub n_cut: NCutSpec,
    #[serde(default = "default_histogram_g")]
    pub histogram_g: f64,
    #[serde(default = "default_n_bins")]
    pub n_bins: usize,
    #[serde(default = "default_out_dir")]
    pub out_dir: String,
    /// Tolerance used when `n_cut` is `"auto"` and by `converge`.
    #[serde(default = "default_converge_tol")]
    pub converge_tol: f64,
    /// Ceiling for the truncation controller.
    #[serde(default = "default_n_cut_cap")]
    pub n_cut_cap: usize,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("bad config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let fail = |msg: String| Err(CliError::Config(msg));
        if self.g_min.is_nan() || self.g_max.is_nan() || self.g_min >= self.g_max {
            return fail(format!(
                "g_min ({}) must be below g_max ({})",
                self.g_min, self.g_max
            ));
        }
        if self.g_steps < 2 {
            return fail(format!("g_steps must be at least 2, got {}", self.g_steps));
        }
        if self.levels < 1 {
            return fail("levels must be at least 1".into());
        }
        if self.n_bins < 2 {
            return fail(format!("n_bins must be at least 2, got {}", self.n_bins));
        }
        if self.converge_tol.is_nan() || self.converge_tol <= 0.0 {
            return fail(format!(
                "converge_tol must be positive, got {}",
                self.converge_tol
            ));
        }
        if let NCutSpec::Fixed(n) = self.n_cut {
            if n < 2 {
                return fail(format!("n_cut must be at least 2, got {n}"));
            }
            if self.levels > n {
                return fail(format!(
                    "levels ({}) exceeds n_cut ({n}); only the lower half of the \
                     truncated spectrum is trustworthy",
                    self.levels
                ));
            }
        }
        if self.n_cut_cap < 2 {
            return fail(format!("n_cut_cap must be at least 2, got {}", self.n_cut_cap));
        }
        // Model-parameter invariants (positive frequencies, epsilon use)
        // are config errors when they arrive through the config file.
        self.params()
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(())
    }

    /// Model parameters with the coupling left for the sweep to set.
    pub fn params(&self) -> ModelParams {
        ModelParams {
            model: self.model.into(),
            omega: self.omega,
            omega0: self.omega0.unwrap_or(self.omega),
            g: 0.0,
            epsilon: self.epsilon,
        }
    }

    pub fn grid(&self) -> Vec<f64> {
        linspace(self.g_min, self.g_max, self.g_steps)
    }

    /// Resolve the truncation, running the convergence controller for
    /// `"auto"` with `probe_g` as the most demanding coupling.
    pub fn resolve_truncation(
        &self,
        probe_g: f64,
    ) -> Result<(FockTruncation, Option<TruncationReport>), Error> {
        match self.n_cut {
            NCutSpec::Fixed(n) => Ok((FockTruncation::new(n)?, None)),
            NCutSpec::Auto => {
                let report = converge_truncation_capped(
                    &self.params(),
                    self.levels,
                    self.converge_tol,
                    probe_g,
                    self.n_cut_cap,
                )?;
                Ok((FockTruncation::new(report.n_cut)?, Some(report)))
            }
        }
    }
}
