use std::fs;
use std::path::Path;

use qutrit_core::choi::{analytic_choi, choi_direct, choi_fidelity, choi_linear_from_circuit, ChoiMatrix};
use qutrit_core::decomp::prep_basis_circuit;
use qutrit_core::numkit::{eigvalsh, project_to_density, ComplexMatrix};
use qutrit_core::qutrit::basis_densities;
use qutrit_core::tomography::{collect, reconstruct_qutrit, sweep_all_pairs};
use serde::Serialize;
use serde_json::json;

use crate::config::{ChoiMethod, ExperimentConfig, Method};
use crate::CliError;

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::config(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))
}

/// `Φ(ρ_i)` and leakage for the nine inputs.
pub fn channel_outputs(cfg: &ExperimentConfig) -> Result<(Vec<ComplexMatrix>, Vec<f64>), CliError> {
    let inputs = basis_densities();
    match cfg.method {
        Method::Analytic => {
            let rep = cfg.channel_rep();
            let outs = inputs.iter().map(|r| rep.map(r)).collect::<Result<Vec<_>, _>>()?;
            Ok((outs, vec![0.0; 9]))
        }
        Method::Circuit => {
            let cc = cfg.channel_circuit(cfg.coupling.as_ref())?;
            let mut outs = Vec::with_capacity(9);
            let mut leaks = Vec::with_capacity(9);
            for i in 1..=9 {
                let mut c = prep_basis_circuit(i)?.embedded(cc.n_qubits(), &cc.system)?;
                c.append(&cc.circuit)?;
                let seed = cfg.seed.wrapping_add(i as u64);
                let rec = collect(&c, &cc.system, cfg.shots, seed, cfg.noise())?;
                let (rho, leak) = reconstruct_qutrit(&rec)?;
                outs.push(rho);
                leaks.push(leak);
            }
            Ok((outs, leaks))
        }
    }
}

pub fn cmd_apply(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let (outputs, leakage) = channel_outputs(cfg)?;
    let path = cfg.output_path("apply.json")?;
    write_json(
        &path,
        &json!({
            "channel": cfg.channel,
            "method": cfg.method,
            "shots": cfg.shots,
            "seed": cfg.seed,
            "outputs": outputs,
            "leakage": leakage,
        }),
    )?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn estimate_choi(cfg: &ExperimentConfig) -> Result<(ChoiMatrix, f64), CliError> {
    let noise = cfg.noise();
    let est = match cfg.choi_method {
        ChoiMethod::Analytic => (analytic_choi(&cfg.channel_rep())?, 0.0),
        ChoiMethod::Linear => {
            let cc = cfg.channel_circuit(cfg.coupling.as_ref())?;
            choi_linear_from_circuit(&cc, cfg.shots, cfg.seed, noise)?
        }
        ChoiMethod::Direct => {
            let cc = cfg.channel_circuit(None)?;
            choi_direct(&cc, cfg.shots, cfg.seed, noise, cfg.coupling.as_ref())?
        }
    };
    Ok(est)
}

pub fn cmd_choi(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let (omega, leakage) = estimate_choi(cfg)?;
    let omega = omega.projected()?;
    let reference = analytic_choi(&cfg.channel_rep())?;
    let fid = choi_fidelity(&reference, &omega)?;
    let eigenvalues = eigvalsh(omega.matrix())?;
    let path = cfg.output_path("choi.json")?;
    write_json(
        &path,
        &json!({
            "channel": cfg.channel,
            "choi_method": cfg.choi_method,
            "shots": cfg.shots,
            "seed": cfg.seed,
            "choi": omega,
            "fidelity": fid,
            "eigenvalues": eigenvalues,
            "leakage": leakage,
        }),
    )?;
    println!("wrote {} (fidelity {fid:.6})", path.display());
    Ok(())
}

/// Reads a Choi matrix from a `choi` command output or a bare Choi JSON object.
pub fn read_choi(path: &Path) -> Result<ChoiMatrix, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::config(format!("invalid JSON in {}: {e}", path.display())))?;
    let inner = value.get("choi").cloned().unwrap_or(value);
    serde_json::from_value(inner)
        .map_err(|e| CliError::config(format!("invalid Choi matrix in {}: {e}", path.display())))
}

pub fn cmd_sweep(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let omega = match &cfg.choi_file {
        Some(p) => read_choi(p)?,
        None => return Err(CliError::config("sweep needs --choi-file")),
    };
    let omega = ChoiMatrix::new(project_to_density(omega.matrix())?)?;
    let reference = cfg.channel_rep();
    let rows = sweep_all_pairs(&omega, &reference, cfg.grid)?;
    let overall = choi_fidelity(&analytic_choi(&reference)?, &omega)?;
    let path = cfg.output_path("sweep.csv")?;
    let mut w = csv::Writer::from_path(&path).map_err(|e| CliError::config(e.to_string()))?;
    let csv_err = |e: csv::Error| CliError::config(e.to_string());
    w.write_record(["pair_a", "pair_b", "min", "max", "mean"])
        .map_err(csv_err)?;
    for r in &rows {
        w.write_record([
            r.pair_a.to_string(),
            r.pair_b.to_string(),
            r.min.to_string(),
            r.max.to_string(),
            r.mean.to_string(),
        ])
        .map_err(csv_err)?;
    }
    let f = overall.to_string();
    w.write_record(["choi", "choi", &f, &f, &f]).map_err(csv_err)?;
    w.flush().map_err(|e| CliError::config(e.to_string()))?;
    println!(
        "wrote {} ({} pairs, Choi fidelity {overall:.6})",
        path.display(),
        rows.len()
    );
    Ok(())
}

/// Writes the named circuit manifest as one JSON object.
pub fn cmd_export(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let path = cfg.output_path("circuits.json")?;
    let text = qutrit_core::decomp::manifest_json()?;
    fs::write(&path, text + "\n").map_err(|e| CliError::config(e.to_string()))?;
    println!("wrote {}", path.display());
    Ok(())
}
