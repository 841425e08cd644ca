//! Bershadsky-Polyakov characters from admissible sl(3) characters by specialisation.

use num_traits::Zero;

use super::orbit::{dyn_mono, highest_root_factor, integral_weyl_orbit, kw_offset, weyl_kac_factors, AffineOrbitTerm};
use super::series::{mono, Mono, QSeries};
use crate::error::{Error, Result};
use crate::weights::{c_bp, check_u_odd, level_k, q, qi, AdmFamily, Admissible, AffineWeight, FiniteWeight, Label, Q};

/// `1 - x^m q^s` in the variables of one side of the specialisation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Factor {
    m: Mono,
    s: Q,
}

/// `z1^a z2^b -> z^{(b - a)/3} q^{-(2a + b)/3}`.
pub fn specialize(m: &Mono) -> (Q, Q) {
    ((m[1] - m[0]) / 3, -(qi(2) * m[0] + m[1]) / 3)
}

fn spec_factor(f: &Factor) -> Factor {
    let (z, s) = specialize(&f.m);
    Factor { m: mono(z, Q::zero()), s: f.s + s }
}

fn take(list: &mut Vec<Factor>, f: &Factor) -> bool {
    match list.iter().position(|g| g == f) {
        Some(i) => {
            list.remove(i);
            true
        }
        None => false,
    }
}

fn f_factors(y: Mono, n: i64) -> Vec<Factor> {
    let mut v = Vec::new();
    for i in 1..=n {
        v.push(Factor { m: y, s: qi(i) });
        v.push(Factor { m: [-y[0], -y[1]], s: qi(i - 1) });
    }
    v
}

fn one_minus(f: &Factor, order: i64) -> QSeries {
    QSeries::one_minus(1, f.m, f.s.to_integer(), order)
}

/// `q^{(2k+3)/6} (z1 z2)^{1/2}` times the two `q^{1/12}` of the ghost products.
fn prefactor(u: i64) -> Q {
    (qi(2) * level_k(u) + qi(3)) / 6 + q(1, 6) - q(1, 2)
}

fn orbit_spec(t: &AffineOrbitTerm, base: Q) -> (Q, Q) {
    let (z, s) = specialize(&dyn_mono(&t.weight));
    (z, base + qi(t.grade) + s)
}

/// Runs the reduction on an explicit list of numerator terms of `ch(mu)`.
fn reduce(u: i64, mu: &AffineWeight, terms: &[AffineOrbitTerm], target: Q, order: i64, geo: Option<i64>) -> Result<QSeries> {
    let base = kw_offset(mu) + prefactor(u);
    let spec: Vec<(Q, Q, i8)> = terms
        .iter()
        .map(|t| {
            let (z, e) = orbit_spec(t, base);
            (z, e, t.sign)
        })
        .collect();
    let low = spec.iter().map(|t| t.1).fold(target, |a, b| if b < a { b } else { a });
    let slack = target - low;
    if !slack.is_integer() {
        return Err(Error::Invariant(format!("q-exponents {low} and {target} differ by a non-integer")));
    }
    let work = order + slack.to_integer();

    let nf = work + 3;
    let mut den: Vec<Factor> = weyl_kac_factors(nf).into_iter().map(|(m, n)| Factor { m, s: qi(n) }).collect();
    let mut num: Vec<Factor> = f_factors(dyn_mono(&FiniteWeight::alpha(3)), nf);
    let (hm, hn) = highest_root_factor();
    let h = Factor { m: hm, s: qi(hn) };
    if !take(&mut den, &h) || !take(&mut num, &h) {
        return Err(Error::Invariant("highest-root factor not found for cancellation".into()));
    }
    let mut den: Vec<Factor> = den.iter().map(spec_factor).collect();
    let mut num: Vec<Factor> = num.iter().map(spec_factor).collect();
    num.extend(f_factors(mono(qi(1), Q::zero()), nf));
    num.retain(|f| {
        !take(&mut den, f)
    });

    let mut series = QSeries::zero(1, low, work);
    for (z, e, s) in &spec {
        let step = *e - low;
        if !step.is_integer() {
            return Err(Error::Invariant(format!("non-integer q-step {step}")));
        }
        series.add_term(step.to_integer(), mono(*z, Q::zero()), *s as i128);
    }
    let mut inv = QSeries::one(1, work);
    let mut exact = Vec::new();
    for f in &den {
        if !f.s.is_integer() {
            return Err(Error::Invariant(format!("fractional q-power {} in a denominator factor", f.s)));
        }
        if f.s.is_zero() {
            if f.m[0].is_zero() {
                return Err(Error::Invariant("uncancelled vanishing denominator factor".into()));
            }
            exact.push(f.m);
        } else if f.s < Q::zero() {
            return Err(Error::Invariant(format!("denominator factor with q-power {}", f.s)));
        } else if f.s <= qi(work) {
            inv = inv.mul(&one_minus(f, work))?;
        }
    }
    for f in &num {
        if !f.s.is_integer() || f.s < Q::zero() {
            return Err(Error::Invariant(format!("bad numerator factor q-power {}", f.s)));
        }
        if f.s <= qi(work) {
            series = series.mul(&one_minus(f, work))?;
        }
    }
    series = series.mul(&inv.inverse()?)?;
    for m in exact {
        series = match geo {
            None => series.div_one_minus(&m)?,
            Some(d) => {
                let mut g = QSeries::zero(1, Q::zero(), work);
                for r in 0..=d {
                    g.add_term(0, mono(m[0] * qi(r), Q::zero()), 1);
                }
                series.mul(&g)?
            }
        };
    }
    let series = series.reoffset(target)?;
    if series.min_step().is_some_and(|s| s < 0) {
        return Err(Error::Invariant(format!("terms below the expected offset {target}")));
    }
    if series.min_step() != Some(0) {
        return Err(Error::Invariant(format!("leading exponent differs from {target}")));
    }
    Ok(series.truncate(order))
}

/// `Delta - c/24` for the irreducible with label `lambda`.
pub fn bp_offset(u: i64, lambda: &Label) -> Q {
    lambda.delta(u) - c_bp(u) / 24
}

fn weight(u: i64, lambda: &Label) -> Result<AffineWeight> {
    check_u_odd(u)?;
    lambda.check(u)?;
    Ok(Admissible::new(u, AdmFamily::Zero, *lambda).weight)
}

/// Character of the irreducible module with label `lambda`, as a series in `z` and `q`.
pub fn qhr_character(u: i64, lambda: &Label, order: i64) -> Result<QSeries> {
    let mu = weight(u, lambda)?;
    let target = bp_offset(u, lambda);
    let base = kw_offset(&mu) + prefactor(u);
    let mut cut = order + 4;
    loop {
        let small = integral_weyl_orbit(&mu, cut)?;
        let big = integral_weyl_orbit(&mu, 2 * cut)?;
        let bound = |t: &AffineOrbitTerm| orbit_spec(t, base).1;
        let low = big.iter().map(bound).fold(target, |a, b| if b < a { b } else { a });
        let limit = target + qi(order) + (target - low);
        let stable = big.iter().filter(|t| t.grade > cut).all(|t| bound(t) > limit);
        if stable {
            let keep: Vec<AffineOrbitTerm> = small.into_iter().filter(|t| bound(t) <= limit).collect();
            return reduce(u, &mu, &keep, target, order, None);
        }
        cut *= 2;
    }
}

/// The same reduction applied to the leading orbit term alone, with `1/(1 - z^{-1})` expanded to depth `depth`.
pub fn qhr_verma_character(u: i64, lambda: &Label, order: i64, depth: i64) -> Result<QSeries> {
    let mu = weight(u, lambda)?;
    let seed = AffineOrbitTerm { grade: 0, weight: mu.finite(), sign: 1 };
    reduce(u, &mu, &[seed], bp_offset(u, lambda), order, Some(depth))
}

/// `z^{kappa l} q^{kappa l (l + 1)/2} ch(z q^l; q)` with `kappa = (2k + 3)/3`.
pub fn bp_sf_transport(u: i64, ell: i64, ch: &QSeries) -> Result<QSeries> {
    let kappa = (qi(2) * level_k(u) + qi(3)) / 3;
    let l = qi(ell);
    ch.flow(kappa * l * (l + qi(1)) / 2, |m| (mono(m[0] + kappa * l, Q::zero()), l * m[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::series::mono0;
    use crate::weights::enumerate_p;

    #[test]
    fn vacuum_low_grades() {
        let ch = qhr_character(5, &Label::vacuum(5), 6).unwrap();
        assert_eq!(ch.offset(), -c_bp(5) / 24);
        assert_eq!(ch.layer(0), super::super::series::LPoly::constant(1));
        let g1 = ch.layer(1);
        assert_eq!(g1.len(), 2);
        assert_eq!(g1.coeff(&mono(qi(0), qi(0))), 1);
        assert_eq!(g1.coeff(&mono(qi(-1), qi(0))), 1);
        assert!(ch.all_nonnegative());
    }

    #[test]
    fn trivial_model() {
        let ch = qhr_character(3, &Label::vacuum(3), 12).unwrap();
        assert_eq!(ch, QSeries::one(1, 12));
    }

    #[test]
    fn tops_and_offsets() {
        for u in [5, 7] {
            for l in enumerate_p(u) {
                let ch = qhr_character(u, &l, 8).unwrap();
                assert!(ch.all_nonnegative(), "{l}");
                assert_eq!(ch.offset(), l.delta(u) - c_bp(u) / 24);
                let top = ch.layer(0);
                assert_eq!(top.len() as i64, l.0[2] + 1);
                for r in 0..=l.0[2] {
                    assert_eq!(top.coeff(&mono(l.j() - qi(r), Q::zero())), 1, "{l}");
                }
            }
        }
    }

    #[test]
    fn verma_shape() {
        let u = 5;
        let l = Label::new(0, 1, 1);
        let v = qhr_verma_character(u, &l, 12, 40).unwrap();
        let mut want = QSeries::one(1, 12);
        for n in 1..=12 {
            for m in [mono0(), mono0(), mono(qi(1), Q::zero()), mono(qi(-1), Q::zero())] {
                want = want.mul(&QSeries::one_minus(1, m, n, 12)).unwrap();
            }
        }
        let mut geo = QSeries::zero(1, Q::zero(), 12);
        for r in 0..=40 {
            geo.add_term(0, mono(qi(-r), Q::zero()), 1);
        }
        let all = want.inverse().unwrap().mul(&geo).unwrap().shift(&mono(l.j(), Q::zero())).with_offset(bp_offset(u, &l));
        let floor = l.j() - qi(20);
        for n in 0..=12 {
            for (a, b) in [(&v, &all), (&all, &v)] {
                for (m, c) in a.layer(n).iter().filter(|(m, _)| m[0] >= floor) {
                    assert_eq!(*c, b.coeff(n, m), "grade {n} charge {}", m[0]);
                }
            }
        }
    }

    #[test]
    fn spectral_flow_permutes_characters() {
        let u = 5;
        for l in enumerate_p(u) {
            let ch = qhr_character(u, &l, 24).unwrap();
            for ell in [-1i64, 1] {
                let t = bp_sf_transport(u, ell, &ch).unwrap();
                assert!(t.order() >= 10);
                assert_eq!(t.truncate(10), qhr_character(u, &l.nabla(ell), 10).unwrap(), "{l} {ell}");
            }
        }
    }
}
