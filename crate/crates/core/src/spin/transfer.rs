use super::hamiltonian::exchange_hamiltonian;
use super::operator::{evolve, pauli, Axis, Operator};
use super::system::SpinSystem;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Polarization reaching `target` after `t` ms of exchange evolution, with the
/// `source` spin fully polarized and every other spin maximally mixed.
pub fn transfer_efficiency<T: Real>(
    sys: &SpinSystem<T>,
    source: usize,
    target: usize,
    t: T,
) -> Result<T> {
    let h = exchange_hamiltonian(sys)?;
    let (zs, zt) = probes(sys, source, target)?;
    Ok(transfer_with(&h, &zs, &zt, t))
}

fn probes<T: Real>(
    sys: &SpinSystem<T>,
    source: usize,
    target: usize,
) -> Result<(Operator<T>, Operator<T>)> {
    sys.check_index(source)?;
    sys.check_index(target)?;
    if source == target {
        return Err(Error::RepeatedIndex(source));
    }
    Ok((
        pauli(source, Axis::Z, sys.len())?,
        pauli(target, Axis::Z, sys.len())?,
    ))
}

// Tr(U z_s U† z_t) / 2^m; the identity part of the initial state is invariant.
fn transfer_with<T: Real>(h: &Operator<T>, zs: &Operator<T>, zt: &Operator<T>, t: T) -> T {
    let u = evolve(h, t);
    let rotated = u.matrix() * zs.matrix() * u.matrix().adjoint();
    let tr = (rotated * zt.matrix()).trace();
    tr.re / T::from_usize(h.dim()).expect("small dimension")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferPeak<T> {
    pub time: T,
    pub efficiency: T,
}

/// Locates the first maximum of the transfer curve on `(0, t_max]`: a grid
/// scan with `samples` points, then golden-section refinement around the best
/// grid point.
pub fn peak_transfer_time<T: Real>(
    sys: &SpinSystem<T>,
    source: usize,
    target: usize,
    t_max: T,
    samples: usize,
) -> Result<TransferPeak<T>> {
    if !(t_max > T::zero()) || samples < 3 {
        return Err(Error::InvalidConfig(
            "peak search needs t_max > 0 and at least 3 samples".into(),
        ));
    }
    let h = exchange_hamiltonian(sys)?;
    let (zs, zt) = probes(sys, source, target)?;
    let f = |t: T| transfer_with(&h, &zs, &zt, t);
    let step = t_max / T::from_usize(samples).expect("sample count");
    let grid: Vec<T> = (1..=samples)
        .map(|k| f(step * T::from_usize(k).expect("index")))
        .collect();
    let best = grid
        .iter()
        .enumerate()
        .fold(0, |b, (k, v)| if *v > grid[b] { k } else { b });
    let mut lo = step * T::from_usize(best).expect("index");
    let mut hi = (step * T::from_usize(best + 2).expect("index")).min(t_max);
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    let tol = t_max * T::default_epsilon().sqrt() * T::lit(1e-2);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if fa > fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b);
        }
    }
    let time = (lo + hi) / T::lit(2.0);
    Ok(TransferPeak {
        time,
        efficiency: f(time),
    })
}
