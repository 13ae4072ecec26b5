use std::path::PathBuf;

use anyhow::{Context, Result};
use hbac::config::Config;
use hbac::experiment::{
    fit_error_model_with, gate_state_fidelity, protocol_fidelity, run_protocol, ErrorModel,
    FreeParameters, Observation, Quantity, StepReport,
};
use serde::Deserialize;
use serde_json::json;

use crate::output::{Output, Table};
use crate::{plot, Status};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Run without errors.
    #[arg(long, conflicts_with = "fit")]
    ideal: bool,
    /// Fit the error model to a CSV with columns step, quantity
    /// (polarization | gate_fidelity), qubit, value[, uncertainty].
    #[arg(long)]
    fit: Option<PathBuf>,
    /// Parameters varied by the fit.
    #[arg(long, value_enum, default_value_t = Free::All)]
    free: Free,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum Free {
    All,
    DecayAndRetention,
    DecayAndGate,
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum Kind {
    Polarization,
    GateFidelity,
}

#[derive(Deserialize)]
struct Row {
    step: usize,
    quantity: Kind,
    qubit: Option<usize>,
    value: f64,
    uncertainty: Option<f64>,
}

impl Row {
    fn observation(self) -> Result<Observation> {
        let u = self.uncertainty.unwrap_or(0.0);
        Ok(match (self.quantity, self.qubit) {
            (Kind::Polarization, Some(q)) => Observation::polarization(self.step, q, self.value, u),
            (Kind::Polarization, None) => {
                anyhow::bail!("polarization at step {} has no qubit", self.step)
            }
            (Kind::GateFidelity, _) => Observation::gate_fidelity(self.step, self.value, u),
        })
    }
}

fn read_observations(path: &PathBuf) -> Result<Vec<Observation>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let rows = reader
        .deserialize()
        .collect::<Result<Vec<Row>, _>>()
        .with_context(|| format!("parsing {}", path.display()))?;
    rows.into_iter().map(Row::observation).collect()
}

pub fn run(args: &Args, config: &Config, out: &Output) -> Result<Status> {
    let schedule = &config.experiment.schedule;
    let bath = config.bath.parameters()?;
    let mut measured = Vec::new();
    let mut residual = None;
    let mut chi_squared = None;
    let model = if args.ideal {
        ErrorModel::ideal()
    } else if let Some(path) = &args.fit {
        measured = read_observations(path)?;
        let free = match args.free {
            Free::All => FreeParameters::All,
            Free::DecayAndRetention => FreeParameters::DecayAndRetention,
            Free::DecayAndGate => FreeParameters::DecayAndGate,
        };
        let fit = fit_error_model_with(&measured, schedule, &bath, free)?;
        residual = Some(fit.residual_rms);
        chi_squared = fit.chi_squared;
        fit.model
    } else {
        config.experiment.error_model
    };
    let ideal = run_protocol(schedule, &bath, &ErrorModel::ideal())?;
    let reports = run_protocol(schedule, &bath, &model)?;
    let uncertainty = residual.unwrap_or(0.0);

    let mut steps = Table::new([
        "step",
        "label",
        "qubit",
        "polarization",
        "uncertainty",
        "ideal",
    ]);
    for (r, i) in reports.iter().zip(&ideal) {
        for (q, (p, pi)) in r.polarizations.iter().zip(&i.polarizations).enumerate() {
            steps.push(vec![
                json!(r.step),
                json!(r.label),
                json!(q + 1),
                json!(p),
                json!(uncertainty),
                json!(pi),
            ]);
        }
    }
    out.table("steps", &steps)?;

    let f = protocol_fidelity(&reports)?;
    let last_gate = (1..=schedule.len())
        .rev()
        .find(|&s| !schedule.steps()[s - 1].is_refresh());
    let gate_fidelity = match last_gate {
        Some(s) => Some(gate_state_fidelity(schedule, &bath, &model, s)?),
        None => None,
    };
    let mut summary = Table::new([
        "fidelity",
        "per_step_error",
        "boost_percent",
        "final_polarization",
        "refresh_decay",
        "gate_efficiency",
        "register_retention",
        "final_gate_fidelity",
        "residual_rms",
        "chi_squared",
    ]);
    let last = |r: &[StepReport]| r.last().map(|s| s.polarizations[0]).unwrap_or(f64::NAN);
    summary.push(vec![
        json!(f.fidelity),
        json!(f.per_step_error),
        json!(f.boost * 100.0),
        json!(last(&reports)),
        json!(model.refresh_decay()),
        json!(model.gate_efficiency()),
        json!(model.register_retention()),
        json!(gate_fidelity),
        json!(residual),
        json!(chi_squared),
    ]);
    out.table("summary", &summary)?;

    let grid = |rs: &[StepReport]| {
        rs.iter()
            .map(|r| r.polarizations.clone())
            .collect::<Vec<_>>()
    };
    let points: Vec<_> = measured
        .iter()
        .filter_map(|o| match o.quantity {
            Quantity::Polarization(q) => Some((o.step, q, o.value, o.uncertainty)),
            Quantity::GateFidelity => None,
        })
        .collect();
    out.svg("steps", |path| {
        plot::grouped_bars(
            path,
            "register polarization per step",
            schedule.labels(),
            &grid(&ideal),
            &grid(&reports),
            &points,
        )
    })?;

    for r in &reports {
        let pols: Vec<String> = r.polarizations.iter().map(|p| format!("{p:.4}")).collect();
        println!("step {} {:<16} {}", r.step, r.label, pols.join(" "));
    }
    println!(
        "F={:.4} per_step_error={:.4} boost={:.1}% (c={:.5} g={:.5} r={:.5})",
        f.fidelity,
        f.per_step_error,
        f.boost * 100.0,
        model.refresh_decay(),
        model.gate_efficiency(),
        model.register_retention()
    );
    if let Some(g) = gate_fidelity {
        println!("final gate state-correlation fidelity {g:.4}");
    }
    Ok(Status::Done)
}
