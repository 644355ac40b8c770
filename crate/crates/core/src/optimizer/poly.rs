//! Real polynomial roots through companion-matrix eigenvalues.
//!
//! Coefficients are stored lowest degree first: `c[k]` multiplies `x^k`.

use nalgebra::{Complex, DMatrix, Schur};

/// Value and first derivative at `x`.
pub fn horner(c: &[f64], x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &ck in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + ck;
    }
    (p, dp)
}

/// Sum of |c_k·x^k|, the natural scale for judging `p(x) ≈ 0`.
pub fn magnitude(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ck| acc * x.abs() + ck.abs())
}

fn trim(c: &[f64]) -> &[f64] {
    let end = c.iter().rposition(|&ck| ck != 0.0).map_or(0, |i| i + 1);
    &c[..end]
}

/// All complex roots, from the eigenvalues of the monic companion matrix.
///
/// Falls back to Aberth–Ehrlich iteration when the Schur decomposition does
/// not converge (e.g. for xⁿ − a, whose companion matrix is a scaled cycle).
pub fn complex_roots(c: &[f64]) -> Vec<Complex<f64>> {
    let c = trim(c);
    if c.len() < 2 {
        return Vec::new();
    }
    let degree = c.len() - 1;
    let lead = c[degree];
    let companion = DMatrix::from_fn(degree, degree, |i, j| {
        if j == degree - 1 {
            -c[i] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    match Schur::try_new(companion, f64::EPSILON, 200 * degree) {
        Some(schur) => schur.complex_eigenvalues().iter().copied().collect(),
        None => aberth(c),
    }
}

fn eval_complex(c: &[f64], z: Complex<f64>) -> (Complex<f64>, Complex<f64>) {
    let mut p = Complex::new(0.0, 0.0);
    let mut dp = Complex::new(0.0, 0.0);
    for &ck in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ck;
    }
    (p, dp)
}

/// Simultaneous Aberth–Ehrlich iteration for all roots of a trimmed `c`.
fn aberth(c: &[f64]) -> Vec<Complex<f64>> {
    let degree = c.len() - 1;
    let lead = c[degree].abs();
    let radius = 1.0 + c[..degree].iter().fold(0.0f64, |m, ck| m.max(ck.abs() / lead));
    let mut z: Vec<Complex<f64>> = (0..degree)
        .map(|k| Complex::from_polar(0.5 * radius, 0.4 + std::f64::consts::TAU * k as f64 / degree as f64))
        .collect();
    for _ in 0..1000 {
        let mut largest = 0.0f64;
        for k in 0..degree {
            let (p, dp) = eval_complex(c, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex<f64> = (0..degree)
                .filter(|&j| j != k)
                .map(|j| Complex::new(1.0, 0.0) / (z[k] - z[j]))
                .sum();
            let step = ratio / (Complex::new(1.0, 0.0) - ratio * repulsion);
            z[k] -= step;
            largest = largest.max(step.norm() / z[k].norm().max(1e-300));
        }
        if largest < 4.0 * f64::EPSILON {
            break;
        }
    }
    z
}

/// Newton iteration on `p` from `x0`, stopping once the correction stalls or
/// `|p| ≤ tol·Σ|c_k x^k|`.
pub fn polish(c: &[f64], x0: f64, tol: f64) -> f64 {
    let mut x = x0;
    let mut last_step = f64::INFINITY;
    for _ in 0..60 {
        let (p, dp) = horner(c, x);
        if p == 0.0 || p.abs() <= tol * magnitude(c, x) || dp == 0.0 {
            break;
        }
        let step = p / dp;
        // Stagnation: round-off now dominates the Newton correction.
        if step.abs() >= last_step {
            break;
        }
        x -= step;
        last_step = step.abs();
    }
    x
}

/// Real roots, ascending. Eigenvalues whose imaginary part is below
/// `imag_tol·max(1, |z|)` count as real and are polished with Newton.
pub fn real_roots(c: &[f64], imag_tol: f64) -> Vec<f64> {
    let mut roots: Vec<f64> = complex_roots(c)
        .into_iter()
        .filter(|z| z.im.abs() <= imag_tol * z.norm().max(1.0))
        .map(|z| polish(c, z.re, 1e-15))
        .collect();
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300));
    roots
}
