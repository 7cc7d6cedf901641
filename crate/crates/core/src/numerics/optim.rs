//! Nelder-Mead simplex minimization and central finite differences.

use super::NumericsError;

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;
const SPREAD_TOL: f64 = 1e-9;

/// Minimizes `f` from `start` with at most `budget` function evaluations.
///
/// Returns the best point ever evaluated, so the result never exceeds
/// `f(start)`. Non-finite objective values after the start are treated as
/// +inf; a non-finite value at the start itself is an error.
pub fn nelder_mead_min(
    mut f: impl FnMut(&[f64]) -> f64,
    start: &[f64],
    budget: usize,
) -> Result<(Vec<f64>, f64), NumericsError> {
    assert!(budget >= 1, "budget must be at least 1");
    let n = start.len();
    let mut evals = 0usize;
    let mut best: (Vec<f64>, f64) = (start.to_vec(), f64::INFINITY);

    let mut eval = |x: &[f64], evals: &mut usize, best: &mut (Vec<f64>, f64)| -> f64 {
        *evals += 1;
        let v = f(x);
        let v = if v.is_finite() { v } else { f64::INFINITY };
        if v < best.1 {
            *best = (x.to_vec(), v);
        }
        v
    };

    let f0 = eval(start, &mut evals, &mut best);
    if !f0.is_finite() {
        return Err(NumericsError::NonFiniteObjective {
            context: "nelder_mead_min start".into(),
        });
    }
    if n == 0 || budget == 1 {
        return Ok(best);
    }

    // initial simplex: start plus one perturbed vertex per coordinate
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((start.to_vec(), f0));
    for i in 0..n {
        if evals >= budget {
            return Ok(best);
        }
        let mut x = start.to_vec();
        x[i] += if x[i] != 0.0 { 0.05 * x[i].abs() } else { 0.00025 };
        let v = eval(&x, &mut evals, &mut best);
        simplex.push((x, v));
    }

    while evals < budget {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let spread = simplex[n].1 - simplex[0].1;
        if spread.is_finite() && spread < SPREAD_TOL {
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|(x, _)| x[j]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();

        let reflect_pt: Vec<f64> = (0..n)
            .map(|j| centroid[j] + REFLECT * (centroid[j] - worst.0[j]))
            .collect();
        let fr = eval(&reflect_pt, &mut evals, &mut best);

        if fr < simplex[0].1 {
            if evals < budget {
                let expand_pt: Vec<f64> = (0..n)
                    .map(|j| centroid[j] + EXPAND * (reflect_pt[j] - centroid[j]))
                    .collect();
                let fe = eval(&expand_pt, &mut evals, &mut best);
                simplex[n] = if fe < fr {
                    (expand_pt, fe)
                } else {
                    (reflect_pt, fr)
                };
            } else {
                simplex[n] = (reflect_pt, fr);
            }
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflect_pt, fr);
        } else {
            // contraction: outside toward the reflection if it improved on
            // the worst point, inside otherwise
            if evals >= budget {
                break;
            }
            let (anchor, f_anchor) = if fr < worst.1 {
                (&reflect_pt, fr)
            } else {
                (&worst.0, worst.1)
            };
            let contract_pt: Vec<f64> = (0..n)
                .map(|j| centroid[j] + CONTRACT * (anchor[j] - centroid[j]))
                .collect();
            let fc = eval(&contract_pt, &mut evals, &mut best);
            if fc < f_anchor {
                simplex[n] = (contract_pt, fc);
            } else {
                // shrink everything toward the current best vertex
                let best_vertex = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    if evals >= budget {
                        return Ok(best);
                    }
                    for j in 0..n {
                        vertex.0[j] = best_vertex[j] + SHRINK * (vertex.0[j] - best_vertex[j]);
                    }
                    vertex.1 = eval(&vertex.0, &mut evals, &mut best);
                }
            }
        }
    }
    Ok(best)
}

/// Central-difference gradient: component i is `(f(x+h e_i) - f(x-h e_i)) / 2h`.
pub fn finite_diff_grad(
    mut f: impl FnMut(&[f64]) -> f64,
    x: &[f64],
    h: f64,
) -> Result<Vec<f64>, NumericsError> {
    let mut grad = Vec::with_capacity(x.len());
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        probe[i] = x[i] + h;
        let fp = f(&probe);
        probe[i] = x[i] - h;
        let fm = f(&probe);
        probe[i] = x[i];
        if !fp.is_finite() || !fm.is_finite() {
            return Err(NumericsError::NonFiniteObjective {
                context: format!("finite_diff_grad component {i}"),
            });
        }
        grad.push((fp - fm) / (2.0 * h));
    }
    Ok(grad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_minimum_found() {
        let (x, v) = nelder_mead_min(|x| (x[0] - 1.0).powi(2), &[5.0], 200).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-4, "argmin {}", x[0]);
        assert!(v < 1e-8);
    }

    #[test]
    fn constant_objective_returns_start() {
        let (x, v) = nelder_mead_min(|_| 3.5, &[1.0, 2.0], 100).unwrap();
        assert_eq!(x, vec![1.0, 2.0]);
        assert_eq!(v, 3.5);
    }

    #[test]
    fn rosenbrock_descends_from_origin() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let start = [0.0, 0.0];
        let f_start = rosen(&start);
        let (_, v) = nelder_mead_min(rosen, &start, 5000).unwrap();
        assert!(v < f_start);
        assert!(v < 1e-3, "rosenbrock value {v}");
    }

    #[test]
    fn non_finite_start_is_an_error() {
        let res = nelder_mead_min(|_| f64::NAN, &[0.0], 10);
        assert!(matches!(
            res,
            Err(NumericsError::NonFiniteObjective { .. })
        ));
    }

    #[test]
    fn budget_bounds_evaluations() {
        let mut count = 0usize;
        let _ = nelder_mead_min(
            |x| {
                count += 1;
                x[0] * x[0] + x[1] * x[1]
            },
            &[3.0, -2.0],
            37,
        )
        .unwrap();
        assert!(count <= 37, "used {count} evaluations");
    }

    #[test]
    fn returned_value_never_exceeds_start() {
        // a nasty discontinuous objective still satisfies the contract
        let f = |x: &[f64]| if x[0] > 5.0 { -1.0 } else { x[0].abs() + 2.0 };
        let (_, v) = nelder_mead_min(f, &[5.0], 60).unwrap();
        assert!(v <= 7.0);
    }

    #[test]
    fn gradient_of_square() {
        let g = finite_diff_grad(|x| x[0] * x[0], &[3.0], 1e-5).unwrap();
        assert!((g[0] - 6.0).abs() < 1e-6);
    }

    #[test]
    fn gradient_of_constant_is_zero() {
        let g = finite_diff_grad(|_| 42.0, &[1.0, 2.0, 3.0], 1e-5).unwrap();
        assert_eq!(g, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn gradient_of_product() {
        let g = finite_diff_grad(|x| x[0] * x[1], &[2.0, 3.0], 1e-5).unwrap();
        assert!((g[0] - 3.0).abs() < 1e-6);
        assert!((g[1] - 2.0).abs() < 1e-6);
    }

    #[test]
    fn cubic_polynomial_matches_analytic_gradient() {
        // f = x^3 - 2x^2 y + y^3, df/dx = 3x^2 - 4xy, df/dy = -2x^2 + 3y^2
        let f = |x: &[f64]| x[0].powi(3) - 2.0 * x[0].powi(2) * x[1] + x[1].powi(3);
        let p = [1.3, -0.7];
        let g = finite_diff_grad(f, &p, 1e-5).unwrap();
        let exact = [
            3.0 * p[0] * p[0] - 4.0 * p[0] * p[1],
            -2.0 * p[0] * p[0] + 3.0 * p[1] * p[1],
        ];
        for (a, b) in g.iter().zip(exact) {
            assert!((a - b).abs() / b.abs().max(1.0) < 1e-5);
        }
    }
}
