use std::ops::RangeInclusive;
use std::str::FromStr;

use anyhow::{bail, Result};
use hbac::config::Config;
use hbac::cooling::{
    regime_estimate, run_ppa, BathParameters, Trajectory, DEFAULT_MAX_ROUNDS, DEFAULT_TOLERANCE,
};
use serde_json::json;

use crate::output::{Output, Table};
use crate::{plot, Status};

/// Inclusive register-size range, `n=2..6` or `2..6`.
#[derive(Debug, Clone)]
pub struct SizeRange(RangeInclusive<usize>);

impl FromStr for SizeRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let body = s.strip_prefix("n=").unwrap_or(s);
        let (a, b) = body
            .split_once("..")
            .ok_or_else(|| format!("expected n=LO..HI, got {s:?}"))?;
        let b = b.strip_prefix('=').unwrap_or(b);
        let lo: usize = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
        let hi: usize = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
        if lo == 0 || lo > hi {
            return Err(format!("empty or invalid range {s:?}"));
        }
        Ok(Self(lo..=hi))
    }
}

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Register size.
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Refresh polarization P'; defaults to eta * P_H from the config.
    #[arg(long)]
    p_refresh: Option<f64>,
    /// Reset qubit (1-based); defaults to the last qubit.
    #[arg(long)]
    reset_qubit: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_MAX_ROUNDS)]
    max_rounds: usize,
    /// Convergence threshold on the per-round L1 change of the state.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Sweep register sizes instead of a single run, e.g. `n=2..6`.
    #[arg(long)]
    sweep: Option<SizeRange>,
    /// Refresh polarizations for the sweep (comma separated); defaults to --p-refresh.
    #[arg(long, value_delimiter = ',')]
    sweep_p: Vec<f64>,
}

fn trajectory(args: &Args, n: usize, p: f64) -> Result<Trajectory<f64>> {
    let bath = BathParameters::ideal(p)?;
    Ok(run_ppa(
        n,
        &bath,
        args.reset_qubit.unwrap_or(n),
        args.max_rounds,
        args.tolerance,
    )?)
}

pub fn run(args: &Args, config: &Config, out: &Output) -> Result<Status> {
    let p = match args.p_refresh {
        Some(p) => p,
        None => *config.bath.parameters()?.refresh_polarization().value(),
    };
    if !(p > 0.0) {
        bail!("refresh polarization must be positive, got {p}");
    }
    match &args.sweep {
        Some(range) => sweep(args, range, p, out),
        None => single(args, p, out),
    }
}

fn single(args: &Args, p: f64, out: &Output) -> Result<Status> {
    let n = args.n;
    let traj = trajectory(args, n, p)?;

    let mut table = Table::new(
        ["round".to_string()]
            .into_iter()
            .chain((1..=n).map(|q| format!("p{q}"))),
    );
    for (r, pols) in traj.rounds.iter().enumerate() {
        let mut row = vec![json!(r + 1)];
        row.extend(pols.iter().map(|v| json!(v)));
        table.push(row);
    }
    out.table("trajectory", &table)?;

    let mut summary = Table::new([
        "n",
        "p_refresh",
        "asymptote",
        "asymptote_over_p",
        "regime_estimate",
        "converged",
        "rounds",
        "last_change",
    ]);
    summary.push(vec![
        json!(n),
        json!(p),
        json!(traj.asymptote),
        json!(traj.asymptote / p),
        json!(regime_estimate(n, &p)),
        json!(traj.converged),
        json!(traj.rounds.len()),
        json!(traj.last_change),
    ]);
    out.table("summary", &summary)?;

    let series: Vec<_> = (0..n)
        .map(|q| {
            let pts = traj
                .rounds
                .iter()
                .enumerate()
                .map(|(r, pols)| ((r + 1) as f64, pols[q] / p))
                .collect();
            (format!("qubit {}", q + 1), pts)
        })
        .collect();
    out.svg("trajectory", |path| {
        plot::lines(
            path,
            &format!("PPA, n = {n}"),
            ("round", "polarization / P'"),
            &series,
        )
    })?;

    println!(
        "n={n} P'={p:e} asymptote={:e} ({:.6} P') rounds={} converged={}",
        traj.asymptote,
        traj.asymptote / p,
        traj.rounds.len(),
        traj.converged
    );
    Ok(if traj.converged {
        Status::Done
    } else {
        eprintln!("warning: no convergence after {} rounds", traj.rounds.len());
        Status::BestEffort
    })
}

fn sweep(args: &Args, range: &SizeRange, p: f64, out: &Output) -> Result<Status> {
    let ps = if args.sweep_p.is_empty() {
        vec![p]
    } else {
        args.sweep_p.clone()
    };
    let mut table = Table::new([
        "n",
        "p_refresh",
        "asymptote",
        "asymptote_over_p",
        "regime_ratio",
        "converged",
        "rounds",
    ]);
    let mut series = Vec::new();
    let mut all_converged = true;
    for &p in &ps {
        if !(p > 0.0) {
            bail!("refresh polarization must be positive, got {p}");
        }
        for n in range.0.clone() {
            let traj = trajectory(args, n, p)?;
            all_converged &= traj.converged;
            table.push(vec![
                json!(n),
                json!(p),
                json!(traj.asymptote),
                json!(traj.asymptote / p),
                json!(regime_estimate(n, &p) / p),
                json!(traj.converged),
                json!(traj.rounds.len()),
            ]);
            println!(
                "n={n} P'={p:e} asymptote/P'={:.6} rounds={}",
                traj.asymptote / p,
                traj.rounds.len()
            );
            let pts = traj
                .target_series()
                .enumerate()
                .map(|(r, v)| ((r + 1) as f64, v / p))
                .collect();
            series.push((format!("n = {n}, P' = {p:e}"), pts));
        }
    }
    out.table("sweep", &table)?;
    out.svg("sweep", |path| {
        plot::lines(
            path,
            "PPA qubit-1 trajectories",
            ("round", "polarization / P'"),
            &series,
        )
    })?;
    Ok(if all_converged {
        Status::Done
    } else {
        eprintln!("warning: some runs did not converge");
        Status::BestEffort
    })
}
