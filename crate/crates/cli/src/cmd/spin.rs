use anyhow::{anyhow, Context, Result};
use hbac::config::{Config, SequenceKind};
use hbac::spin::{
    exchange_hamiltonian, natural_hamiltonian, peak_transfer_time, toggling_average,
    transfer_efficiency,
};
use serde_json::json;

use crate::output::{Output, Table};
use crate::{plot, Status};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Toggle sequence; overrides the config.
    #[arg(long, value_enum)]
    sequence: Option<Sequence>,
    /// Length of the transfer curve in ms; overrides the config.
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum Sequence {
    BalancedXyz,
    SpinLockX,
    Custom,
}

pub fn run(args: &Args, config: &Config, out: &Output) -> Result<Status> {
    let tc = &config.transfer;
    let sys = config.system.subsystem(&tc.spins)?;
    let index = |label: &str| {
        sys.index_of(label)
            .ok_or_else(|| anyhow!("transfer spin {label:?} is not in [transfer].spins"))
    };
    let (source, target) = (index(&tc.source)?, index(&tc.target)?);
    let t_max = args.t_max.unwrap_or(tc.t_max_ms);
    let samples = args.samples.unwrap_or(tc.samples);
    if !(t_max > 0.0) || samples < 3 {
        anyhow::bail!("need t_max > 0 and at least 3 samples");
    }

    let mut toggle = config.toggle.clone();
    if let Some(s) = args.sequence {
        toggle.sequence = match s {
            Sequence::BalancedXyz => SequenceKind::BalancedXyz,
            Sequence::SpinLockX => SequenceKind::SpinLockX,
            Sequence::Custom => SequenceKind::Custom,
        };
    }
    let seq = toggle.build()?;
    let natural = natural_hamiltonian(&sys)?;
    let average = toggling_average(&natural, &seq, &sys.species()).context("toggle sequence")?;
    let exchange = exchange_hamiltonian(&sys)?;
    let deviation = average.max_abs_diff(&exchange);

    let mut curve = Table::new(["time_ms", "efficiency"]);
    let mut pts = Vec::with_capacity(samples);
    for i in 0..samples {
        let t = t_max * i as f64 / (samples - 1) as f64;
        let eta = transfer_efficiency(&sys, source, target, t)?;
        curve.push(vec![json!(t), json!(eta)]);
        pts.push((t, eta));
    }
    out.table("transfer", &curve)?;
    let peak = peak_transfer_time(&sys, source, target, t_max, samples)?;

    let mut matrix = Table::new(["row", "col", "re", "im"]);
    let m = average.matrix();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            matrix.push(vec![
                json!(i),
                json!(j),
                json!(m[(i, j)].re),
                json!(m[(i, j)].im),
            ]);
        }
    }
    out.table("average_hamiltonian", &matrix)?;

    let mut summary = Table::new([
        "source",
        "target",
        "tau_ms",
        "efficiency",
        "sequence",
        "cycle_ms",
        "max_abs_diff_from_exchange",
    ]);
    summary.push(vec![
        json!(tc.source),
        json!(tc.target),
        json!(peak.time),
        json!(peak.efficiency),
        json!(format!("{:?}", toggle.sequence)),
        json!(seq.cycle_time()),
        json!(deviation),
    ]);
    out.table("summary", &summary)?;
    out.svg("transfer", |path| {
        plot::lines(
            path,
            &format!("{} -> {} transfer", tc.source, tc.target),
            ("time (ms)", "efficiency"),
            &[("efficiency".to_string(), pts)],
        )
    })?;

    println!(
        "tau*={:.7} ms efficiency={:.9} ({} -> {})",
        peak.time, peak.efficiency, tc.source, tc.target
    );
    println!("average Hamiltonian (kHz, real part):");
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|j| format!("{:9.5}", m[(i, j)].re))
            .collect();
        println!("  {}", row.join(" "));
    }
    println!("max |average - exchange| = {deviation:e}");
    Ok(Status::Done)
}
