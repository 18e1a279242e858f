//! Derivative-free minimization via the Nelder-Mead simplex method.

/// Result of a simplex minimization.
#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimizes `f` starting from `x0` with initial simplex scale `scale`.
/// Stops when the simplex collapses below `xtol` in diameter and the
/// function spread falls below `ftol`, or after `max_iter` iterations.
pub fn nelder_mead(
    f: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    scale: f64,
    xtol: f64,
    ftol: f64,
    max_iter: usize,
) -> Minimum {
    let n = x0.len();
    assert!(n > 0, "need at least one variable");
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += if p[i].abs() > 1e-12 {
            scale * p[i].abs()
        } else {
            scale
        };
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];

        let diameter = simplex
            .iter()
            .map(|p| {
                p.iter()
                    .zip(&simplex[best])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max)
            })
            .fold(0.0f64, f64::max);
        if diameter < xtol && (values[worst] - values[best]).abs() < ftol {
            converged = true;
            break;
        }

        let mut centroid = vec![0.0; n];
        for (i, p) in simplex.iter().enumerate() {
            if i == worst {
                continue;
            }
            for j in 0..n {
                centroid[j] += p[j] / n as f64;
            }
        }

        let point_along = |t: f64| -> Vec<f64> {
            (0..n)
                .map(|j| centroid[j] + t * (centroid[j] - simplex[worst][j]))
                .collect()
        };

        let reflected = point_along(alpha);
        let fr = f(&reflected);
        if fr < values[best] {
            let expanded = point_along(gamma);
            let fe = f(&expanded);
            if fe < fr {
                simplex[worst] = expanded;
                values[worst] = fe;
            } else {
                simplex[worst] = reflected;
                values[worst] = fr;
            }
        } else if fr < values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = fr;
        } else {
            let contracted = if fr < values[worst] {
                point_along(rho)
            } else {
                point_along(-rho)
            };
            let fc = f(&contracted);
            if fc < values[worst].min(fr) {
                simplex[worst] = contracted;
                values[worst] = fc;
            } else {
                // shrink toward the best vertex
                let best_point = simplex[best].clone();
                for i in 0..=n {
                    if i == best {
                        continue;
                    }
                    for j in 0..n {
                        simplex[i][j] = best_point[j] + sigma * (simplex[i][j] - best_point[j]);
                    }
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }

    let mut best = 0;
    for i in 1..=n {
        if values[i] < values[best] {
            best = i;
        }
    }
    Minimum {
        x: simplex[best].clone(),
        value: values[best],
        iterations,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let m = nelder_mead(
            |x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2),
            &[5.0, 5.0],
            0.5,
            1e-12,
            1e-14,
            5000,
        );
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-8);
        assert!((m.x[1] + 2.0).abs() < 1e-8);
        assert!(m.value < 1e-14);
    }

    #[test]
    fn rosenbrock() {
        let m = nelder_mead(
            |x| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            &[-1.2, 1.0],
            0.5,
            1e-12,
            1e-14,
            10_000,
        );
        assert!((m.x[0] - 1.0).abs() < 1e-6);
        assert!((m.x[1] - 1.0).abs() < 1e-6);
    }
}
