use std::path::Path;
use std::sync::Arc;

use ncbundle_core::connection::{ConnectionFamily, ConnectionSpec};
use ncbundle_core::sampling::{random_theta, rng};
use ncbundle_core::ThetaMatrix;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::run::Stage;

/// Operators whose spectra can be written.
pub const SPECTRUM_OPERATORS: [&str; 5] = ["D", "D_v", "D_h", "D_omega", "script_D_omega"];

const PRESETS: [(&str, &str); 5] = [
    ("t3-over-s1", include_str!("../scenarios/t3-over-s1.json")),
    (
        "commutative-t2",
        include_str!("../scenarios/commutative-t2.json"),
    ),
    ("t3-constant", include_str!("../scenarios/t3-constant.json")),
    ("t4-over-t2", include_str!("../scenarios/t4-over-t2.json")),
    (
        "xfail-t3-nonconstant",
        include_str!("../scenarios/xfail-t3-nonconstant.json"),
    ),
];

/// Name of the preset that runs the base KR sweep instead of a scenario.
pub const KR_SWEEP_PRESET: &str = "kr-sweep";

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS
        .iter()
        .map(|(name, _)| *name)
        .chain(std::iter::once(KR_SWEEP_PRESET))
}

/// θ as explicit rows, as its strict upper triangle (row-major), or a name:
/// `"zero"` or `"random"` (drawn from the scenario seed).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ThetaConfig {
    Rows(Vec<Vec<f64>>),
    Upper { upper: Vec<f64> },
    Named(String),
}

/// `"canonical"`, `"constant:[c_11, ..., c_nm]"`, `"coefficients:{...}"` or an inline connection object.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConnectionConfig {
    Preset(String),
    Spec(ConnectionSpec),
}

impl Default for ConnectionConfig {
    fn default() -> Self {
        ConnectionConfig::Preset("canonical".into())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default = "default_report")]
    pub report: String,
    #[serde(default = "default_spectra")]
    pub spectra: Vec<String>,
}

impl Default for Outputs {
    fn default() -> Self {
        Outputs {
            report: default_report(),
            spectra: default_spectra(),
        }
    }
}

fn default_report() -> String {
    "report.json".into()
}

fn default_spectra() -> Vec<String> {
    ["D", "D_h", "D_omega", "script_D_omega"]
        .map(String::from)
        .to_vec()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub id: String,
    pub theta: ThetaConfig,
    pub n: usize,
    pub m: usize,
    pub lambda: u32,
    #[serde(default = "default_gamma_sign")]
    pub gamma_sign: i8,
    #[serde(default)]
    pub connection: ConnectionConfig,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// When false the compatibility stage is reported but does not decide the exit code.
    #[serde(default = "default_true")]
    pub require_compatible: bool,
    /// Sectors |q|∞ ≤ this radius are checked.
    #[serde(default = "default_sector_radius")]
    pub sector_radius: u32,
    #[serde(default)]
    pub outputs: Outputs,
}

fn default_gamma_sign() -> i8 {
    1
}

fn default_tolerance() -> f64 {
    1e-12
}

fn default_seed() -> u64 {
    1
}

fn default_true() -> bool {
    true
}

fn default_sector_radius() -> u32 {
    1
}

/// Command-line overrides applied on top of a config.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub tolerance: Option<f64>,
    pub lambda: Option<u32>,
    pub seed: Option<u64>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid config: {e}")))
    }

    /// Reads a config file, or a bundled preset when `arg` names one and is not a file.
    pub fn load(arg: &str) -> Result<Self, CliError> {
        let path = Path::new(arg);
        if path.exists() {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            return Self::from_json(&text);
        }
        match PRESETS.iter().find(|(name, _)| *name == arg) {
            Some((_, text)) => Self::from_json(text),
            None => Err(CliError::Usage(format!(
                "{arg}: no such file or preset (presets: {})",
                preset_names().collect::<Vec<_>>().join(", ")
            ))),
        }
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(t) = o.tolerance {
            self.tolerance = t;
        }
        if let Some(l) = o.lambda {
            self.lambda = l;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
    }

    pub fn theta(&self) -> Result<Arc<ThetaMatrix>, CliError> {
        let k = self.n + self.m;
        let th = match &self.theta {
            ThetaConfig::Rows(rows) => ThetaMatrix::from_rows(rows).map_err(usage)?,
            ThetaConfig::Upper { upper } => ThetaMatrix::from_upper(k, upper).map_err(usage)?,
            ThetaConfig::Named(name) => match name.as_str() {
                "zero" => ThetaMatrix::zero(k),
                "random" => random_theta(k, &mut rng(self.seed)),
                other => return Err(CliError::Usage(format!("unknown theta preset {other:?}"))),
            },
        };
        if th.dim() != k {
            return Err(CliError::Usage(format!(
                "theta has dimension {}, but n + m = {k}",
                th.dim()
            )));
        }
        Ok(Arc::new(th))
    }

    pub fn connection(&self, theta: &Arc<ThetaMatrix>) -> Result<ConnectionFamily, CliError> {
        let (n, m) = (self.n, self.m);
        let family = match &self.connection {
            ConnectionConfig::Spec(spec) => ConnectionFamily::from_spec(theta, spec),
            ConnectionConfig::Preset(s) if s == "canonical" => {
                ConnectionFamily::canonical(theta, n, m)
            }
            ConnectionConfig::Preset(s) => {
                if let Some(list) = s.strip_prefix("constant:") {
                    let c: Vec<f64> = serde_json::from_str(list)
                        .map_err(|e| CliError::Usage(format!("constant connection: {e}")))?;
                    ConnectionFamily::constant(theta, n, m, &c)
                } else if let Some(json) = s.strip_prefix("coefficients:") {
                    let spec: ConnectionSpec = serde_json::from_str(json)
                        .map_err(|e| CliError::Usage(format!("connection coefficients: {e}")))?;
                    ConnectionFamily::from_spec(theta, &spec)
                } else {
                    return Err(CliError::Usage(format!("unknown connection preset {s:?}")));
                }
            }
        }
        .map_err(usage)?;
        if family.n() != n || family.m() != m {
            return Err(CliError::Usage(format!(
                "connection is for (n, m) = ({}, {}), scenario has ({n}, {m})",
                family.n(),
                family.m()
            )));
        }
        if !family.is_selfadjoint() {
            return Err(CliError::Usage(
                "connection coefficients must be selfadjoint".into(),
            ));
        }
        Ok(family)
    }

    /// Checks everything that can be checked without building operators.
    pub fn validate(&self) -> Result<(Arc<ThetaMatrix>, ConnectionFamily), CliError> {
        if self.n == 0 {
            return Err(CliError::Usage("n must be at least 1".into()));
        }
        if self.gamma_sign.abs() != 1 {
            return Err(CliError::Usage(format!(
                "gamma_sign must be 1 or -1, got {}",
                self.gamma_sign
            )));
        }
        if !(self.tolerance.is_finite() && self.tolerance >= 0.0) {
            return Err(CliError::Usage(format!(
                "tolerance must be a non-negative number, got {}",
                self.tolerance
            )));
        }
        for op in &self.outputs.spectra {
            if !SPECTRUM_OPERATORS.contains(&op.as_str()) {
                return Err(CliError::Usage(format!(
                    "unknown spectrum operator {op:?} (expected one of {})",
                    SPECTRUM_OPERATORS.join(", ")
                )));
            }
        }
        let theta = self.theta()?;
        let family = self.connection(&theta)?;
        let need = family.coefficient_degree() + 2;
        if self.lambda < need {
            return Err(CliError::Usage(format!(
                "lambda = {} is below connection degree + 2 = {need}",
                self.lambda
            )));
        }
        Ok((theta, family))
    }
}

pub(crate) fn usage(e: ncbundle_core::Error) -> CliError {
    CliError::Usage(e.to_string())
}

/// Parses a stage name as accepted by `--only`.
pub fn parse_stage(s: &str) -> Result<Stage, CliError> {
    Stage::ALL
        .into_iter()
        .find(|st| st.name() == s)
        .ok_or_else(|| {
            CliError::Usage(format!(
                "unknown check {s:?} (expected one of {})",
                Stage::ALL.map(|s| s.name()).join(", ")
            ))
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse_and_validate() {
        for (name, text) in PRESETS {
            let c = ScenarioConfig::from_json(text).unwrap();
            assert_eq!(c.id, name);
            c.validate().unwrap();
        }
    }

    #[test]
    fn constant_preset_string() {
        let mut c = ScenarioConfig::load("t3-over-s1").unwrap();
        c.connection = ConnectionConfig::Preset("constant:[1, -2]".into());
        let (th, fam) = c.validate().unwrap();
        assert_eq!(
            fam.coefficient(0, 2),
            &ncbundle_core::AlgebraElement::one(&th)
        );
        assert_eq!(fam.coefficient(1, 2).coeff(&[0, 0, 0]), (-2.0).into());
    }

    #[test]
    fn invalid_configs_are_usage_errors() {
        let base = ScenarioConfig::load("t3-over-s1").unwrap();
        let cases: Vec<fn(&mut ScenarioConfig)> = vec![
            |c| c.n = 3,
            |c| c.gamma_sign = 0,
            |c| c.lambda = 1,
            |c| c.connection = ConnectionConfig::Preset("flat".into()),
            |c| c.connection = ConnectionConfig::Preset("constant:[1]".into()),
            |c| c.theta = ThetaConfig::Named("golden".into()),
            |c| c.outputs.spectra.push("D_x".into()),
        ];
        for f in cases {
            let mut c = base.clone();
            f(&mut c);
            assert!(matches!(c.validate(), Err(CliError::Usage(_))), "{c:?}");
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let err = ScenarioConfig::from_json(
            r#"{"id":"x","theta":"zero","n":1,"m":1,"lambda":2,"lamda":3}"#,
        );
        assert!(matches!(err, Err(CliError::Usage(_))));
    }
}
