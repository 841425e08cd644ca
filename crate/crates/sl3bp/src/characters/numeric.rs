//! Floating-point modularity checks for Bershadsky-Polyakov characters.

use num_complex::Complex64;

use super::qhr::qhr_character;
use super::series::QSeries;
use crate::error::{Error, Result};
use crate::modular::{bp_smatrix, bp_tmatrix, to_f64};
use crate::weights::{enumerate_p, level_k, Label};

pub const DEFAULT_ORDER: i64 = 25;

#[derive(Clone, Debug, PartialEq)]
pub struct SCheckReport {
    /// Largest relative discrepancy of `ch_l / ch_vac` between the two sides.
    pub max_rel_error: f64,
    /// Estimated relative size of the omitted tails.
    pub tail_estimate: f64,
    /// Absolute comparison after dividing by `exp(pi i kappa zeta^2 / tau)`, with the charge
    /// shifted by `kappa/2`; not asserted.
    pub kappa_residual: f64,
    pub order: i64,
}

fn eval(ch: &QSeries, zeta: Complex64, tau: Complex64) -> Complex64 {
    ch.eval(&[zeta, Complex64::from(0.0)], tau)
}

/// Size of the last computed layer relative to the whole sum, times the geometric tail factor.
fn tail(ch: &QSeries, zeta: Complex64, tau: Complex64) -> f64 {
    let r = (-std::f64::consts::TAU * tau.im).exp();
    let n = ch.order();
    let off = to_f64(ch.offset());
    let last = (n - 2..=n).map(|k| ch.layer_abs(k, &[zeta, Complex64::from(0.0)]) * r.powf(off + k as f64)).fold(0.0, f64::max);
    let total = eval(ch, zeta, tau).norm().max(f64::MIN_POSITIVE);
    last * r / (1.0 - r).max(1e-300) / total
}

pub fn characters(u: i64, order: i64) -> Result<Vec<(Label, QSeries)>> {
    enumerate_p(u).into_iter().map(|l| Ok((l, qhr_character(u, &l, order)?))).collect()
}

/// Compares `ch(zeta/tau; -1/tau)` with `sum S ch(zeta; tau)` through ratios to the vacuum.
pub fn numeric_s_check(u: i64, zeta: Complex64, tau: Complex64, order: i64, tol: f64) -> Result<SCheckReport> {
    if tau.im <= 0.0 {
        return Err(Error::Parse(format!("tau = {tau} is not in the upper half plane")));
    }
    let chars = characters(u, order)?;
    let s = bp_smatrix(u)?.to_complex();
    let (zt, tt) = (zeta / tau, -1.0 / tau);
    let mut tail_est: f64 = 0.0;
    for (_, ch) in &chars {
        tail_est = tail_est.max(tail(ch, zeta, tau)).max(tail(ch, zt, tt));
    }
    if tail_est > tol {
        let r = (-std::f64::consts::TAU * tau.im.min(tt.im)).exp();
        let need = order as f64 + (tail_est / tol).ln() / -r.ln();
        return Err(Error::Series(format!(
            "truncation tail {tail_est:.2e} exceeds tolerance {tol:.0e}; order of at least {} needed",
            need.ceil()
        )));
    }
    let lhs: Vec<Complex64> = chars.iter().map(|(_, c)| eval(c, zt, tt)).collect();
    let base: Vec<Complex64> = chars.iter().map(|(_, c)| eval(c, zeta, tau)).collect();
    let rhs: Vec<Complex64> = s.iter().map(|row| row.iter().zip(&base).map(|(a, b)| a * b).sum()).collect();
    let vac = 0;
    let mut err: f64 = 0.0;
    for i in 0..lhs.len() {
        let (a, b) = (lhs[i] / lhs[vac], rhs[i] / rhs[vac]);
        err = err.max((a - b).norm() / b.norm().max(1e-300));
    }
    let kappa = (2.0 * to_f64(level_k(u)) + 3.0) / 3.0;
    let ipk = Complex64::new(0.0, std::f64::consts::PI * kappa);
    let auto = (ipk * zeta * zeta / tau).exp();
    let (sl, sr) = ((ipk * zt).exp(), (ipk * zeta).exp());
    let kappa_residual =
        lhs.iter().zip(&rhs).map(|(a, b)| (a * sl / auto - b * sr).norm() / (b * sr).norm().max(1e-300)).fold(0.0, f64::max);
    Ok(SCheckReport { max_rel_error: err, tail_estimate: tail_est, kappa_residual, order })
}

/// `max_l |ch_l(zeta; tau + 1) - T_l ch_l(zeta; tau)| / |ch_l|`.
pub fn t_check(u: i64, zeta: Complex64, tau: Complex64, order: i64) -> Result<f64> {
    let mut err: f64 = 0.0;
    for (l, ch) in characters(u, order)? {
        let t = bp_tmatrix(u, &l)?.to_complex();
        let a = eval(&ch, zeta, tau + 1.0);
        let b = eval(&ch, zeta, tau) * t;
        err = err.max((a - b).norm() / b.norm().max(1e-300));
    }
    Ok(err)
}

/// Smallest-to-largest pivot ratio of the matrix `ch_l(zeta_p; tau_p)`, via partial pivoting.
pub fn gram_pivot_ratio(u: i64, points: &[(Complex64, Complex64)], order: i64) -> Result<f64> {
    let chars = characters(u, order)?;
    let n = chars.len();
    if points.len() != n {
        return Err(Error::Parse(format!("need {n} sample points")));
    }
    let mut m: Vec<Vec<Complex64>> = chars.iter().map(|(_, c)| points.iter().map(|(z, t)| eval(c, *z, *t)).collect()).collect();
    let mut pivots = Vec::with_capacity(n);
    for col in 0..n {
        let p = (col..n).max_by(|a, b| m[*a][col].norm().total_cmp(&m[*b][col].norm())).unwrap_or(col);
        m.swap(col, p);
        let piv = m[col][col];
        pivots.push(piv.norm());
        if piv.norm() == 0.0 {
            return Ok(0.0);
        }
        for r in col + 1..n {
            let f = m[r][col] / piv;
            for c in col..n {
                let v = m[col][c];
                m[r][c] -= f * v;
            }
        }
    }
    let max = pivots.iter().cloned().fold(0.0, f64::max);
    let min = pivots.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(min / max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_transform_ratios() {
        let i = Complex64::new(0.0, 1.0);
        for zeta in [Complex64::from(0.1), Complex64::from(0.23), Complex64::new(0.1, 0.05)] {
            let r = numeric_s_check(5, zeta, i, DEFAULT_ORDER, 1e-8).unwrap();
            assert!(r.max_rel_error < 1e-8, "{zeta}: {r:?}");
        }
        for u in [5, 7] {
            let r = numeric_s_check(u, Complex64::new(0.19, 0.02), Complex64::new(0.2, 1.1), DEFAULT_ORDER, 1e-8).unwrap();
            assert!(r.max_rel_error < 1e-8 && r.kappa_residual < 1e-8, "{r:?}");
        }
        let r = numeric_s_check(3, Complex64::from(0.1), i, 10, 1e-8).unwrap();
        assert_eq!(r.max_rel_error, 0.0);
    }

    #[test]
    fn t_transform_and_independence() {
        let tau = Complex64::new(0.1, 0.8);
        assert!(t_check(5, Complex64::from(0.17), tau, 20).unwrap() < 1e-10);
        let pts: Vec<_> = (0..6).map(|k| (Complex64::new(0.05 + 0.07 * k as f64, 0.01), Complex64::new(0.03 * k as f64, 0.9))).collect();
        assert!(gram_pivot_ratio(5, &pts, 20).unwrap() > 1e-12);
    }

    #[test]
    fn refuses_short_truncation() {
        let tau = Complex64::new(0.0, 0.3);
        assert!(matches!(numeric_s_check(5, Complex64::from(0.1), tau, 3, 1e-8), Err(Error::Series(_))));
    }
}
