//! Nelder–Mead simplex minimizer with in-place restarts.

use std::cell::Cell;

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    /// Objective value at the starting point.
    pub start_value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Minimizes `f` from `x0` with initial simplex edges `steps`.
///
/// Whenever the simplex collapses (spread of values below `tol`) before the
/// evaluation budget runs out, a fresh simplex is built around the best point
/// with the original edge lengths; a restart that fails to improve by more
/// than `tol` ends the search. The returned value never exceeds `f(x0)`.
pub fn nelder_mead<F>(f: F, x0: &[f64], steps: &[f64], max_evals: usize, tol: f64) -> SimplexOutcome
where
    F: Fn(&[f64]) -> f64,
{
    let dim = x0.len();
    assert_eq!(steps.len(), dim, "one step per coordinate");
    // dimension-adaptive coefficients; reduce to the classic (1, 2, 1/2, 1/2) at dim = 2
    let n = dim.max(2) as f64;
    let (reflect, expand, contract, shrink) = (1.0, 1.0 + 2.0 / n, 0.75 - 0.5 / n, 1.0 - 1.0 / n);
    let evals = Cell::new(0usize);
    let eval = |x: &[f64]| {
        evals.set(evals.get() + 1);
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let start_value = eval(x0);
    let mut best = (x0.to_vec(), start_value);
    let mut converged = false;

    'restart: while evals.get() < max_evals {
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
        simplex.push(best.clone());
        for i in 0..dim {
            let mut x = best.0.clone();
            x[i] += steps[i];
            let v = eval(&x);
            simplex.push((x, v));
        }
        let restart_from = best.1;
        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if simplex[0].1 < best.1 {
                best = simplex[0].clone();
            }
            let spread = simplex[dim].1 - simplex[0].1;
            if spread.abs() <= tol {
                if restart_from - best.1 <= tol {
                    converged = true;
                    break 'restart;
                }
                continue 'restart;
            }
            if evals.get() >= max_evals {
                break 'restart;
            }
            let centroid: Vec<f64> = (0..dim)
                .map(|k| simplex[..dim].iter().map(|p| p.0[k]).sum::<f64>() / dim as f64)
                .collect();
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&simplex[dim].0)
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };
            let xr = along(reflect);
            let fr = eval(&xr);
            if fr < simplex[0].1 {
                let xe = along(expand);
                let fe = eval(&xe);
                simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < simplex[dim - 1].1 {
                simplex[dim] = (xr, fr);
            } else {
                let (xc, fc) = if fr < simplex[dim].1 {
                    let xc = along(contract);
                    let fc = eval(&xc);
                    (xc, fc)
                } else {
                    let xc = along(-contract);
                    let fc = eval(&xc);
                    (xc, fc)
                };
                if fc < simplex[dim].1.min(fr) {
                    simplex[dim] = (xc, fc);
                } else {
                    let x0 = simplex[0].0.clone();
                    for p in simplex.iter_mut().skip(1) {
                        let x: Vec<f64> = x0
                            .iter()
                            .zip(&p.0)
                            .map(|(b, y)| b + shrink * (y - b))
                            .collect();
                        let v = eval(&x);
                        *p = (x, v);
                    }
                }
            }
        }
    }
    SimplexOutcome {
        x: best.0,
        value: best.1,
        start_value,
        evaluations: evals.get(),
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_rosenbrock() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let out = nelder_mead(rosen, &[-1.2, 1.0], &[0.5, 0.5], 20_000, 1e-16);
        assert!(
            (out.x[0] - 1.0).abs() < 1e-5 && (out.x[1] - 1.0).abs() < 1e-5,
            "{:?}",
            out.x
        );
        assert!(out.value <= out.start_value);
    }

    #[test]
    fn respects_budget_and_never_worsens() {
        let f = |x: &[f64]| x.iter().map(|v| (v - 3.0).powi(2)).sum::<f64>();
        let out = nelder_mead(f, &[0.0; 6], &[1.0; 6], 50, 1e-12);
        assert!(out.evaluations <= 50 + 7);
        assert!(out.value <= out.start_value);
        assert!(!out.converged);
    }

    #[test]
    fn nan_treated_as_infinite() {
        let f = |x: &[f64]| {
            if x[0] < 0.0 {
                f64::NAN
            } else {
                (x[0] - 1.0).powi(2) + x[1] * x[1]
            }
        };
        let out = nelder_mead(f, &[0.5, 0.5], &[0.3, 0.3], 5000, 1e-14);
        assert!((out.x[0] - 1.0).abs() < 1e-5);
    }
}
