use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use ncbundle_core::algebra::check_principality;
use ncbundle_core::connection::{
    check_compatibility, check_nabla, check_sector_equivalence, check_strong_connection,
    twisted_dirac, verify_reprojection, verify_twisted_dirac, TwistData,
};
use ncbundle_core::gns::{spectrum, spectrum_csv};
use ncbundle_core::projection::{
    check_grading, check_isometric_fibres, restrict_to_h0, select_module, verify_base_kr,
    BaseRecipe, JChoice, ProjectabilityData,
};
use ncbundle_core::sampling::Samples;
use ncbundle_core::triple::{build_flat_triple_with, verify_equivariant_real_triple};
use ncbundle_core::{LinearOperator, VerificationReport};
use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Principality,
    Triple,
    Projectability,
    Fibres,
    BaseKr,
    Connection,
    Compatibility,
    Sectors,
    Reprojection,
}

impl Stage {
    pub const ALL: [Stage; 9] = [
        Stage::Principality,
        Stage::Triple,
        Stage::Projectability,
        Stage::Fibres,
        Stage::BaseKr,
        Stage::Connection,
        Stage::Compatibility,
        Stage::Sectors,
        Stage::Reprojection,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Principality => "principality",
            Stage::Triple => "triple",
            Stage::Projectability => "projectability",
            Stage::Fibres => "fibres",
            Stage::BaseKr => "base-kr",
            Stage::Connection => "connection",
            Stage::Compatibility => "compatibility",
            Stage::Sectors => "sectors",
            Stage::Reprojection => "reprojection",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StageReport {
    pub stage: &'static str,
    /// Whether this stage decides the exit code.
    pub required: bool,
    pub pass: bool,
    pub checks: VerificationReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumFile {
    pub operator: String,
    pub path: String,
    pub dimension: usize,
    pub distinct: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub n: usize,
    pub m: usize,
    pub lambda: u32,
    pub seed: u64,
    pub tolerance: f64,
    pub gamma_sign: i8,
    pub recipe: BaseRecipe,
    pub j0_used: JChoice,
    pub stages: Vec<StageReport>,
    pub spectra: Vec<SpectrumFile>,
    pub pass: bool,
    /// Printed, never serialized, so reports stay byte-identical across runs.
    #[serde(skip)]
    pub wall_time: Duration,
}

/// A finished run: the report plus the spectra still to be written.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub report: RunReport,
    pub spectra: Vec<(String, Vec<f64>)>,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.pass {
            0
        } else {
            1
        }
    }
}

fn degrees(n: usize, r: u32) -> Vec<Vec<i32>> {
    let r = r as i32;
    let side = (2 * r + 1) as usize;
    (0..side.pow(n as u32))
        .map(|mut x| {
            (0..n)
                .map(|_| {
                    let v = (x % side) as i32 - r;
                    x /= side;
                    v
                })
                .collect()
        })
        .collect()
}

struct Pipeline<'a> {
    config: &'a ScenarioConfig,
    p: ProjectabilityData,
    tw: TwistData,
    samples: Samples,
}

impl Pipeline<'_> {
    fn stage(&self, stage: Stage) -> Result<VerificationReport, CliError> {
        let c = self.config;
        let (p, tw, t) = (&self.p, &self.tw, &self.p.triple);
        let tol = c.tolerance;
        let r = match stage {
            Stage::Principality => check_principality(&t.theta, t.n, &degrees(t.n, 2), tol)?,
            Stage::Triple => verify_equivariant_real_triple(t, &self.samples, tol)?,
            Stage::Projectability => check_grading(t, &p.gamma, tol)?,
            Stage::Fibres => check_isometric_fibres(p, &self.samples, tol)?,
            Stage::BaseKr => {
                let (base, restriction) = restrict_to_h0(p, &self.samples, tol)?;
                let mut r = VerificationReport::new(tol);
                r.extend_prefixed("H_0: ", restriction);
                r.extend_prefixed("base: ", verify_base_kr(&base, &tw.recipe, tol)?);
                r
            }
            Stage::Connection => {
                let mut r = VerificationReport::new(tol);
                r.extend(check_strong_connection(&tw.family, t, &self.samples, tol)?);
                r.extend(check_nabla(
                    &tw.family,
                    t,
                    &degrees(t.n, 1),
                    c.seed.wrapping_add(1),
                    tol,
                )?);
                r.extend(verify_twisted_dirac(tw, p, &self.samples, tol)?);
                r
            }
            Stage::Compatibility => check_compatibility(tw, p, tol)?,
            Stage::Sectors => check_sector_equivalence(
                tw,
                p,
                &degrees(t.n, c.sector_radius),
                c.seed.wrapping_add(2),
                tol,
            )?,
            Stage::Reprojection => verify_reprojection(tw, p, &self.samples, tol)?,
        };
        Ok(r)
    }

    fn operator(&self, name: &str) -> &LinearOperator {
        match name {
            "D" => &self.p.triple.d,
            "D_v" => &self.p.d_v,
            "D_h" => &self.p.d_h,
            "D_omega" => &self.tw.d_omega,
            "script_D_omega" => &self.tw.script_d_omega,
            other => unreachable!("operator {other} passed validation"),
        }
    }
}

/// Builds the scenario and runs `only` (or every stage), then diagonalizes
/// the requested operators unless a single stage was selected.
pub fn run_scenario(config: &ScenarioConfig, only: Option<Stage>) -> Result<RunOutcome, CliError> {
    let start = Instant::now();
    let (theta, family) = config.validate()?;
    let module = select_module(config.n, config.m)?;
    let t = build_flat_triple_with(&theta, config.n, config.m, config.lambda, module, None)?;
    let p = ProjectabilityData::flat(&t, f64::from(config.gamma_sign), config.tolerance)?;
    let tw = twisted_dirac(&p, &family)?;
    let samples = Samples::generate(&theta, config.n, 2, 1, config.seed);
    let pipeline = Pipeline {
        config,
        p,
        tw,
        samples,
    };

    let stages: Vec<Stage> = match only {
        Some(s) => vec![s],
        None => Stage::ALL.to_vec(),
    };
    let mut reports = Vec::with_capacity(stages.len());
    for stage in stages {
        let checks = pipeline.stage(stage)?;
        reports.push(StageReport {
            stage: stage.name(),
            required: stage != Stage::Compatibility || config.require_compatible,
            pass: checks.all_pass(),
            checks,
        });
    }

    let mut spectra = Vec::new();
    if only.is_none() {
        for name in &config.outputs.spectra {
            let mut s = spectrum(pipeline.operator(name))?;
            s.sort_by(f64::total_cmp);
            spectra.push((name.clone(), s));
        }
    }

    let pass = reports.iter().all(|s| s.pass || !s.required);
    Ok(RunOutcome {
        report: RunReport {
            scenario: config.id.clone(),
            n: config.n,
            m: config.m,
            lambda: config.lambda,
            seed: config.seed,
            tolerance: config.tolerance,
            gamma_sign: config.gamma_sign,
            recipe: pipeline.tw.recipe,
            j0_used: pipeline.tw.j0_used,
            stages: reports,
            spectra: Vec::new(),
            pass,
            wall_time: start.elapsed(),
        },
        spectra,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Writes `<operator>.csv` per spectrum and then the report JSON into `out_dir`.
pub fn write_outputs(
    outcome: &mut RunOutcome,
    config: &ScenarioConfig,
    out_dir: &Path,
) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    outcome.report.spectra.clear();
    for (name, values) in &outcome.spectra {
        let file = format!("{name}.csv");
        let csv = spectrum_csv(values);
        write(&out_dir.join(&file), &csv)?;
        outcome.report.spectra.push(SpectrumFile {
            operator: name.clone(),
            path: file,
            dimension: values.len(),
            distinct: csv.lines().count() - 1,
        });
    }
    let path = out_dir.join(&config.outputs.report);
    let json = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
    write(&path, &(json + "\n"))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_box() {
        let d = degrees(2, 1);
        assert_eq!(d.len(), 9);
        assert!(d.contains(&vec![-1, 1]));
        assert_eq!(degrees(1, 0), vec![vec![0]]);
    }

    #[test]
    fn only_runs_one_stage() {
        let c = ScenarioConfig::load("t3-over-s1").unwrap();
        let out = run_scenario(&c, Some(Stage::Compatibility)).unwrap();
        assert_eq!(out.report.stages.len(), 1);
        assert!(out.report.pass);
        assert!(out.spectra.is_empty());
    }
}
