//! Derivative-free simplex minimizer (Nelder–Mead) used by the
//! channel-output optimizations. Deterministic given the initial point.

/// Stopping and budget knobs.
#[derive(Debug, Clone, Copy)]
pub struct NmOptions {
    /// Converged when both the simplex diameter and the value spread fall
    /// below this.
    pub tolerance: f64,
    pub max_evals: usize,
    /// Initial simplex step per coordinate.
    pub step: f64,
}

impl Default for NmOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-8,
            max_evals: 20_000,
            step: 0.25,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NmResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Minimize `f` from `x0` with reflection 1, expansion 2, contraction 1/2,
/// shrink 1/2.
pub fn minimize<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], opts: NmOptions) -> NmResult {
    let n = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = eval(x0, &mut evals);
    simplex.push((x0.to_vec(), v0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += opts.step * (1.0 + x[i].abs());
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }

    let mut converged = false;
    while evals < opts.max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[n].1 - simplex[0].1;
        let diam = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max)
            })
            .fold(0.0f64, f64::max);
        if spread.abs() < opts.tolerance && diam < opts.tolerance {
            converged = true;
            break;
        }

        // centroid of all but the worst
        let mut centroid = vec![0.0f64; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let reflect: Vec<f64> = centroid
            .iter()
            .zip(&worst.0)
            .map(|(c, w)| 2.0 * c - w)
            .collect();
        let fr = eval(&reflect, &mut evals);

        if fr < simplex[0].1 {
            // try expansion
            let expand: Vec<f64> = centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| 3.0 * c - 2.0 * w)
                .collect();
            let fe = eval(&expand, &mut evals);
            simplex[n] = if fe < fr { (expand, fe) } else { (reflect, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflect, fr);
        } else {
            // contraction (outside if reflection helped, inside otherwise)
            let toward = if fr < worst.1 { &reflect } else { &worst.0 };
            let contract: Vec<f64> = centroid
                .iter()
                .zip(toward)
                .map(|(c, t)| 0.5 * (c + t))
                .collect();
            let fc = eval(&contract, &mut evals);
            if fc < worst.1.min(fr) {
                simplex[n] = (contract, fc);
            } else {
                // shrink toward the best
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = entry
                        .0
                        .iter()
                        .zip(&best)
                        .map(|(xi, bi)| 0.5 * (xi + bi))
                        .collect();
                    let v = eval(&x, &mut evals);
                    *entry = (x, v);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    NmResult {
        x: simplex[0].0.clone(),
        value: simplex[0].1,
        evals,
        converged,
    }
}
