use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use ramanpump_core::analytic::{
    chi3, chi3_from_cross_section, chi3_resonant_part, coherent_bracket, coherent_quanta,
    coherent_quanta_exact, coherent_sideband_weights, coherent_stokes_antistokes_ratio,
    coherent_vibration_amplitude, incoherent_spectrum, incoherent_stokes_antistokes_ratio,
    resonant_to_background_ratio, stokes_cross_section, stokes_cross_section_quadrature, Branch,
    SpectrumModel,
};
use ramanpump_core::ensemble::{coherence_length, enhancement_factor, wavevector_mismatch};
use ramanpump_core::spectrum::{
    integrated_line_power, sample, sample_with, FrequencyGrid, SampleOptions,
};
use ramanpump_core::{DriveParams, PhysicsError};
use ramanpump_oracle::{compare_with_analytic, emission_spectrum, simulate, RowStatus};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::output::{sci, OutputFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Coherence,
    Chi3,
    Xsection,
    Enhance,
    Validate,
    Sweep,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Coherence => "coherence",
            Command::Chi3 => "chi3",
            Command::Xsection => "xsection",
            Command::Enhance => "enhance",
            Command::Validate => "validate",
            Command::Sweep => "sweep",
        }
    }
}

/// What a command produced, before anything is written.
#[derive(Debug)]
pub struct Outcome {
    pub result: Value,
    pub files: Vec<OutputFile>,
    /// Set when the command completed but a check failed.
    pub failure: Option<String>,
}

impl Outcome {
    fn ok(result: Value, files: Vec<OutputFile>) -> Outcome {
        Outcome {
            result,
            files,
            failure: None,
        }
    }
}

fn domain(e: PhysicsError) -> CliError {
    CliError::physics("parameters", e)
}

fn complex(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im, "abs": z.norm(), "arg": z.arg() })
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

pub fn run(command: Command, cfg: &RunConfig) -> Result<Outcome> {
    match command {
        Command::Spectrum => spectrum(cfg),
        Command::Coherence => coherence(cfg),
        Command::Chi3 => chi3_table(cfg),
        Command::Xsection => xsection(cfg),
        Command::Enhance => enhance(cfg),
        Command::Validate => validate(cfg),
        Command::Sweep => sweep(cfg),
    }
}

fn spectrum(cfg: &RunConfig) -> Result<Outcome> {
    let (mol, drive, env) = (&cfg.molecule, &cfg.drive, &cfg.environment);
    let n_bar = env.occupation(mol.omega_v).map_err(domain)?;
    let model = incoherent_spectrum(mol, drive, env)
        .map_err(domain)?
        .merged(&coherent_sideband_weights(mol, drive).map_err(domain)?);
    let grid = match &cfg.output.grid {
        Some(g) => g.grid()?,
        None => FrequencyGrid::probe_centered(mol, drive).map_err(domain)?,
    };
    let opts = SampleOptions {
        render_delta_as: cfg.output.render_delta_width,
    };
    let total = sample_with(&model, &grid, opts);

    let mut csv = String::from("omega_eV,intensity_arb,component\n");
    for line in &model.lorentz_lines {
        let single = SpectrumModel {
            delta_lines: vec![],
            lorentz_lines: vec![*line],
        };
        for p in sample(&single, &grid).points {
            let _ = writeln!(csv, "{},{},{}", sci(p.omega), sci(p.intensity), line.label);
        }
    }
    for p in &total.points {
        let _ = writeln!(csv, "{},{},total", sci(p.omega), sci(p.intensity));
    }

    let oracle = if cfg.oracle.spectrum.enabled {
        let s = emission_spectrum(mol, drive, env, &cfg.oracle, &grid).map_err(CliError::oracle)?;
        for p in &s.points {
            let _ = writeln!(csv, "{},{},oracle", sci(p.omega), sci(p.intensity));
        }
        Some(json!({
            "tau_step": s.tau_step,
            "tau_max": s.tau_max,
            "window": s.window,
            "period": s.period,
            "samples": s.samples,
        }))
    } else {
        None
    };

    let mut deltas = String::from("omega_eV,weight_arb,component\n");
    for d in &total.delta_markers {
        let _ = writeln!(deltas, "{},{},{}", sci(d.omega), sci(d.weight), d.label);
    }

    let lines: Vec<Value> = model
        .lorentz_lines
        .iter()
        .map(|l| (l.label, "lorentzian", l.center, l.weight))
        .chain(model.delta_lines.iter().map(|d| (d.label, "delta", d.center, d.weight)))
        .map(|(label, kind, center, weight)| {
            let power = integrated_line_power(&model, label).map(|p| p.value).ok();
            json!({
                "component": label,
                "kind": kind,
                "omega_eV": center,
                "weight_arb": weight,
                "integrated_power_arb": power,
            })
        })
        .collect();

    let model_json = serde_json::to_string_pretty(&model).expect("model serializes");
    Ok(Outcome::ok(
        json!({
            "n_bar": n_bar,
            "grid": {
                "omega_min_eV": grid.points()[0],
                "omega_max_eV": grid.points()[grid.len() - 1],
                "points": grid.len(),
            },
            "lines": lines,
            "metadata": total.metadata,
            "oracle": oracle,
        }),
        vec![
            OutputFile::new("spectrum.csv", csv),
            OutputFile::new("spectrum.deltas.csv", deltas),
            OutputFile::new("spectrum.model.json", model_json + "\n"),
        ],
    ))
}

fn coherence_values(cfg: &RunConfig) -> Result<Value> {
    let (mol, drive, env) = (&cfg.molecule, &cfg.drive, &cfg.environment);
    let b = coherent_vibration_amplitude(mol, drive).map_err(domain)?;
    let n_coh = coherent_quanta(mol, drive).map_err(domain)?;
    let n_incoh = env.occupation(mol.omega_v).map_err(domain)?;
    Ok(json!({
        "b_coh": complex(b.amplitude),
        "b_frequency_eV": b.frequency,
        "n_coh": n_coh,
        "n_coh_exact": coherent_quanta_exact(mol, drive).map_err(domain)?,
        "n_incoh": n_incoh,
        "ratio": finite(n_coh / n_incoh),
        "incoherent_antistokes_stokes_ratio": incoherent_stokes_antistokes_ratio(env, mol).ok(),
        "coherent_stokes_antistokes_ratio": coherent_stokes_antistokes_ratio(mol, drive).ok(),
        "resonant_to_background_antistokes": resonant_to_background_ratio(mol, drive, Branch::AntiStokes).ok(),
    }))
}

fn coherence(cfg: &RunConfig) -> Result<Outcome> {
    Ok(Outcome::ok(coherence_values(cfg)?, vec![]))
}

fn at_detuning(cfg: &RunConfig, detuning: f64) -> DriveParams {
    DriveParams {
        omega_ir: 0.5 * (cfg.molecule.omega_v - detuning),
        ..cfg.drive
    }
}

fn chi3_table(cfg: &RunConfig) -> Result<Outcome> {
    let conc = cfg.ensemble("chi3")?.concentration_cm3;
    let mol = &cfg.molecule;
    let at = |drive: &DriveParams| -> Result<Value> {
        let mut out = serde_json::Map::new();
        for (key, branch) in [("antistokes", Branch::AntiStokes), ("stokes", Branch::Stokes)] {
            let full = chi3(mol, drive, conc, branch).map_err(domain)?;
            let res = chi3_resonant_part(mol, drive, conc, branch).map_err(domain)?;
            out.insert(
                key.into(),
                json!({
                    "omega_eV": branch.frequency(drive),
                    "chi3_nm3_per_eV": complex(full.value),
                    "chi3_esu": complex(full.to_esu()),
                    "resonant_part_nm3_per_eV": complex(res.value),
                    "bracket": complex(coherent_bracket(mol, drive, branch).map_err(domain)?),
                }),
            );
        }
        Ok(Value::Object(out))
    };

    let mut csv = String::from("detuning_eV,omega_ir_eV,branch,chi3_re,chi3_im,chi3_abs,chi3_re_esu,chi3_im_esu\n");
    for det in cfg.detunings() {
        let d = at_detuning(cfg, det);
        for (name, branch) in [("antistokes", Branch::AntiStokes), ("stokes", Branch::Stokes)] {
            let v = chi3(mol, &d, conc, branch).map_err(domain)?;
            let esu = v.to_esu();
            let _ = writeln!(
                csv,
                "{},{},{name},{},{},{},{},{}",
                sci(det),
                sci(d.omega_ir),
                sci(v.value.re),
                sci(v.value.im),
                sci(v.value.norm()),
                sci(esu.re),
                sci(esu.im)
            );
        }
    }
    Ok(Outcome::ok(
        json!({ "concentration_cm3": conc, "at_drive": at(&cfg.drive)? }),
        vec![OutputFile::new("chi3.csv", csv)],
    ))
}

fn xsection(cfg: &RunConfig) -> Result<Outcome> {
    let (mol, drive, env) = (&cfg.molecule, &cfg.drive, &cfg.environment);
    let sigma = stokes_cross_section(mol, drive).map_err(domain)?;
    let n_bar = env.occupation(mol.omega_v).map_err(domain)?;
    let quad = stokes_cross_section_quadrature(mol, drive, n_bar).map_err(domain)?;
    let mut files = Vec::new();
    let mut result = json!({
        "omega_stokes_eV": drive.omega_vis - mol.omega_v,
        "sigma_nm2": sigma,
        "sigma_quadrature_nm2": quad.sigma,
        "quadrature_error_nm2": quad.quadrature_error,
        "n_bar": n_bar,
        "relative_difference": finite((quad.sigma - sigma) / sigma),
    });

    if let Some(ens) = cfg.ensemble {
        let conc = ens.concentration_cm3;
        let mut csv = String::from(
            "detuning_eV,omega_ir_eV,chi3_from_sigma_re,chi3_from_sigma_im,chi3_resonant_re,chi3_resonant_im\n",
        );
        for det in cfg.detunings() {
            let d = at_detuning(cfg, det);
            let from_sigma = chi3_from_cross_section(mol, &d, conc, sigma).map_err(domain)?;
            let direct = chi3_resonant_part(mol, &d, conc, Branch::Stokes).map_err(domain)?;
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{}",
                sci(det),
                sci(d.omega_ir),
                sci(from_sigma.value.re),
                sci(from_sigma.value.im),
                sci(direct.value.re),
                sci(direct.value.im)
            );
        }
        let from_sigma = chi3_from_cross_section(mol, drive, conc, sigma).map_err(domain)?;
        result["chi3_from_sigma_nm3_per_eV"] = complex(from_sigma.value);
        result["concentration_cm3"] = json!(conc);
        files.push(OutputFile::new("xsection.csv", csv));
    }
    Ok(Outcome::ok(result, files))
}

fn enhance(cfg: &RunConfig) -> Result<Outcome> {
    let ens = cfg.ensemble("enhance")?;
    let (mol, drive, env) = (&cfg.molecule, &cfg.drive, &cfg.environment);
    let molecules = ens.params().molecule_count().map_err(|e| CliError::physics("ensemble", e))?;
    let n_coh = coherent_quanta(mol, drive).map_err(domain)?;
    let n_incoh = env.occupation(mol.omega_v).map_err(domain)?;
    let factor = enhancement_factor(&ens.params(), n_coh, n_incoh).map_err(domain)?;
    let phase = match &ens.dispersion {
        Some(d) => {
            let dk = wavevector_mismatch(d, drive).map_err(|e| CliError::physics("ensemble", e))?;
            let lc = coherence_length(dk);
            json!({
                "delta_k_per_nm": dk.per_nm(),
                "delta_k_per_m": dk.per_m(),
                "coherence_length": lc.length,
                "negative_mismatch": lc.negative_mismatch,
            })
        }
        None => Value::Null,
    };
    Ok(Outcome::ok(
        json!({
            "molecules": molecules,
            "n_coh": n_coh,
            "n_incoh": n_incoh,
            "enhancement_factor": factor,
            "phase_matching": phase,
        }),
        vec![],
    ))
}

fn validate(cfg: &RunConfig) -> Result<Outcome> {
    let report = compare_with_analytic(&cfg.molecule, &cfg.drive, &cfg.environment, &cfg.oracle)
        .map_err(CliError::oracle)?;
    let mut csv = String::from("observable,analytic,oracle,error,tolerance,status\n");
    for r in &report.rows {
        let status = match r.status {
            RowStatus::Pass => "pass",
            RowStatus::Fail => "fail",
            RowStatus::Skipped => "skipped",
        };
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{status}",
            r.observable,
            sci(r.analytic),
            sci(r.oracle),
            sci(r.error),
            sci(r.tolerance)
        );
    }
    let failed: Vec<&str> = report
        .rows
        .iter()
        .filter(|r| r.status == RowStatus::Fail)
        .map(|r| r.observable)
        .collect();
    let o = &report.oracle;
    let result = json!({
        "rows": report.rows,
        "perturbation_breakdown": report.perturbation_breakdown,
        "power_law_points": report.power_law_points,
        "oracle": {
            "b_amplitude": complex(o.b_amplitude),
            "n_b_mean": o.n_b_mean,
            "sigma_population": o.sigma_population,
            "top_fock_population": o.top_fock_population,
            "reliable": o.reliable,
            "n_bar": o.n_bar,
            "schedule": o.schedule,
            "invariants": o.invariants,
            "steps": o.stats,
        },
    });
    Ok(Outcome {
        result,
        files: vec![OutputFile::new("validate.csv", csv)],
        failure: (!failed.is_empty()).then(|| format!("rows out of tolerance: {}", failed.join(", "))),
    })
}

fn sweep_point(cfg: &RunConfig, with_oracle: bool) -> Result<Vec<(&'static str, f64)>> {
    cfg.check()?;
    let (mol, drive, env) = (&cfg.molecule, &cfg.drive, &cfg.environment);
    let diag = ramanpump_core::validate_params(mol, drive, env, &cfg.thresholds);
    let b = coherent_vibration_amplitude(mol, drive).map_err(domain)?.amplitude;
    let n_coh = coherent_quanta(mol, drive).map_err(domain)?;
    let n_incoh = env.occupation(mol.omega_v).map_err(domain)?;
    let mut out = vec![
        ("epsilon", diag.epsilon),
        ("valid", if diag.valid { 1.0 } else { 0.0 }),
        ("b_coh_abs", b.norm()),
        ("n_coh", n_coh),
        ("n_incoh", n_incoh),
        ("ratio", n_coh / n_incoh),
    ];
    if let Some(ens) = cfg.ensemble {
        let c = chi3(mol, drive, ens.concentration_cm3, Branch::AntiStokes).map_err(domain)?;
        out.push(("chi3_antistokes_abs", c.value.norm()));
    }
    if with_oracle {
        let r = simulate(mol, drive, env, &cfg.oracle).map_err(CliError::oracle)?;
        out.push(("oracle_b_abs", r.b_amplitude.norm()));
        out.push(("oracle_n_b_mean", r.n_b_mean));
        out.push(("oracle_reliable", if r.reliable { 1.0 } else { 0.0 }));
    }
    Ok(out)
}

fn sweep(cfg: &RunConfig) -> Result<Outcome> {
    let spec = cfg
        .sweep
        .clone()
        .ok_or_else(|| CliError::Config("`sweep` needs a `sweep` section".into()))?;
    let values = spec.values();
    let points: Vec<(f64, Result<Vec<(&'static str, f64)>>)> = values
        .par_iter()
        .map(|&v| (v, cfg.with_value(&spec.parameter, v).and_then(|c| sweep_point(&c, spec.oracle))))
        .collect();

    let mut csv = format!("{},observable,value\n", spec.parameter);
    let mut errors = Vec::new();
    for (v, r) in &points {
        match r {
            Ok(obs) => {
                for (name, x) in obs {
                    let _ = writeln!(csv, "{},{name},{}", sci(*v), sci(*x));
                }
            }
            Err(e) => errors.push(json!({ "value": v, "error": e.to_string() })),
        }
    }
    Ok(Outcome::ok(
        json!({
            "parameter": spec.parameter,
            "values": values,
            "failed_points": errors,
        }),
        vec![OutputFile::new("sweep.csv", csv)],
    ))
}
