use anyhow::{bail, Result};
use hbac::config::Config;
use hbac::pulse::{optimize_pulse, PulseModel, PulseRecord, RfDistribution, RfPoint};
use hbac::spin::Unitary;
use serde_json::json;

use crate::output::{Format, Output, Table};
use crate::Status;

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Objective evaluations; overrides the config.
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    segments: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
}

pub fn run(args: &Args, config: &Config, out: &Output) -> Result<Status> {
    let pc = &config.pulse;
    let sys = config.system.subsystem(&pc.register)?;
    if !sys.is_homonuclear() {
        bail!("pulse register must be a single species");
    }
    let mut cfg = pc.optimizer.clone();
    if let Some(b) = args.budget {
        cfg.budget = b;
    }
    if let Some(s) = args.segments {
        cfg.segments = s;
    }
    if let Some(r) = args.restarts {
        cfg.restarts = r;
    }
    let Some(perm) = pc.target.permutation(sys.len())? else {
        bail!("pulse target must be a gate, not a refresh");
    };
    let dist = pc.distribution()?;
    let result = optimize_pulse(&sys, &perm, &cfg, &dist)?;

    let target = format!("{:?}", pc.target);
    let record = PulseRecord {
        target: target.clone(),
        mean_fidelity: result.fidelity.mean,
        worst_fidelity: result.fidelity.worst,
        distribution: dist.as_pairs(),
        seed: cfg.seed,
        segments: result.pulse.segments().to_vec(),
    };
    match out.format() {
        Format::Json => {
            out.json("pulse", &record)?;
        }
        Format::Csv => {
            let mut table = Table::new([
                "segment",
                "duration_ms",
                "amplitude_khz",
                "phase_rad",
                "offset_khz",
            ]);
            for (i, s) in record.segments.iter().enumerate() {
                table.push(vec![
                    json!(i + 1),
                    json!(s.duration_ms),
                    json!(s.amplitude_khz),
                    json!(s.phase_rad),
                    json!(s.offset_khz),
                ]);
            }
            let meta = [
                ("target", target.clone()),
                ("mean_fidelity", record.mean_fidelity.to_string()),
                ("worst_fidelity", record.worst_fidelity.to_string()),
                ("seed", record.seed.to_string()),
            ];
            out.csv("pulse", &table, &meta)?;
        }
    }

    let model = PulseModel::with_form(&sys, cfg.coupling_form)?;
    let gate = Unitary::from_permutation(&perm)?;
    let mut report = Table::new(["rf_scale", "weight", "fidelity"]);
    for p in dist.points() {
        let single = RfDistribution::new(vec![RfPoint {
            scale: p.scale,
            weight: 1.0,
        }])?;
        let f = model.gate_fidelity(&result.pulse, &gate, &single)?;
        report.push(vec![json!(p.scale), json!(p.weight), json!(f.mean)]);
    }
    out.table("fidelity", &report)?;

    println!(
        "target={target} mean_fidelity={:.6} worst_fidelity={:.6} duration={:.4} ms evaluations={}",
        result.fidelity.mean,
        result.fidelity.worst,
        result.pulse.total_duration(),
        result.evaluations
    );
    Ok(if result.reached_floor {
        Status::Done
    } else {
        eprintln!(
            "warning: best effort, mean fidelity {:.6} below floor {}",
            result.fidelity.mean, cfg.fidelity_floor
        );
        Status::BestEffort
    })
}
