//! Integral affine Weyl orbits and Kac-Wakimoto characters.

use std::collections::{BTreeMap, VecDeque};

use num_traits::{Signed, ToPrimitive, Zero};

use super::series::{mono, mono0, Mono, QSeries};
use crate::error::{Error, Result};
use crate::weights::{conformal_weight, qi, AffineWeight, FiniteWeight, Q};

/// `det(w) e^{w . mu}` with its finite weight and grade drop.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct AffineOrbitTerm {
    pub grade: i64,
    pub weight: FiniteWeight,
    pub sign: i8,
}

const ROOTS: [usize; 3] = [1, 2, 3];

/// Orbit of `mu` under the shifted action of the integral Weyl group, up to grade drop `cutoff`.
pub fn integral_weyl_orbit(mu: &AffineWeight, cutoff: i64) -> Result<Vec<AffineOrbitTerm>> {
    let kappa = mu.level() + qi(3);
    if !kappa.is_positive() {
        return Err(Error::NotAdmissible(format!("{:?}", mu.l), 0));
    }
    let kf = kappa.to_f64().unwrap_or(1.0);
    let seed = mu.finite() + FiniteWeight::rho();
    let mut seen: BTreeMap<(FiniteWeight, i64), i8> = BTreeMap::new();
    let mut queue = VecDeque::new();
    seen.insert((seed, 0), 1);
    queue.push_back((seed, 0i64, 1i8));
    while let Some((lam, d, s)) = queue.pop_front() {
        for i in ROOTS {
            let base = lam.dynkin_label(i);
            let bf = base.abs().to_f64().unwrap_or(0.0);
            let room = (cutoff - d).max(0) as f64;
            let nmax = ((bf + (bf * bf + 4.0 * kf * room).sqrt()) / (2.0 * kf)).ceil() as i64 + 1;
            for n in -nmax..=nmax {
                let a = base + kappa * qi(n);
                if !a.is_integer() {
                    continue;
                }
                let a = a.to_integer();
                if a == 0 {
                    return Err(Error::Invariant(format!("sign conflict: {:?} lies on a reflection wall", mu.l)));
                }
                let d2 = d + a * n;
                if d2 > cutoff {
                    continue;
                }
                let lam2 = lam - FiniteWeight::alpha(i).scale(qi(a));
                match seen.get(&(lam2, d2)) {
                    Some(&s2) if s2 != -s => {
                        return Err(Error::Invariant(format!("sign conflict at weight {lam2}, grade {d2}")));
                    }
                    Some(_) => {}
                    None => {
                        seen.insert((lam2, d2), -s);
                        queue.push_back((lam2, d2, -s));
                    }
                }
            }
        }
    }
    let mut out: Vec<AffineOrbitTerm> = seen
        .into_iter()
        .map(|((w, grade), sign)| AffineOrbitTerm { grade, weight: w - FiniteWeight::rho(), sign })
        .collect();
    out.sort();
    Ok(out)
}

pub(crate) fn dyn_mono(w: &FiniteWeight) -> Mono {
    mono(w.a1, w.a2)
}

/// `q^{h - c/24}` for a weight of the given level.
pub fn kw_offset(mu: &AffineWeight) -> Q {
    let k = mu.level();
    let kappa = k + qi(3);
    conformal_weight(&mu.finite(), kappa) - qi(8) * k / kappa / 24
}

/// Positive affine-root factors `(x^{-a}, n)` standing for `1 - x^{-a} q^n`, `n <= order`.
pub(crate) fn weyl_kac_factors(order: i64) -> Vec<(Mono, i64)> {
    let mut f = Vec::new();
    for i in ROOTS {
        f.push((dyn_mono(&-FiniteWeight::alpha(i)), 0));
    }
    for n in 1..=order {
        f.push((mono0(), n));
        f.push((mono0(), n));
        for i in ROOTS {
            f.push((dyn_mono(&-FiniteWeight::alpha(i)), n));
            f.push((dyn_mono(&FiniteWeight::alpha(i)), n));
        }
    }
    f
}

/// The highest-root factor `1 - x^{theta} q`.
pub fn highest_root_factor() -> (Mono, i64) {
    (dyn_mono(&FiniteWeight::alpha(3)), 1)
}

/// Weyl-Kac denominator without the finite factors, truncated.
pub fn weyl_kac_denominator(order: i64, omit_highest: bool) -> Result<QSeries> {
    let mut den = QSeries::one(2, order);
    let mut skip = omit_highest;
    for (m, n) in weyl_kac_factors(order) {
        if n == 0 {
            continue;
        }
        if skip && (m, n) == highest_root_factor() {
            skip = false;
            continue;
        }
        den = den.mul(&QSeries::one_minus(2, m, n, order))?;
    }
    Ok(den)
}

/// Kac-Wakimoto character in `z1 = e^{w1}`-type variables (Dynkin-label exponents), offset `h - c/24`.
///
/// With `omit_highest` the result is multiplied by `1 - z1 z2 q`.
pub fn sl3_adm_character(mu: &AffineWeight, order: i64, omit_highest: bool) -> Result<QSeries> {
    let orbit = integral_weyl_orbit(mu, order)?;
    let mut num = QSeries::zero(2, Q::zero(), order);
    for t in &orbit {
        num.add_term(t.grade, dyn_mono(&(t.weight - mu.finite())), t.sign as i128);
    }
    let mut ch = num.mul(&weyl_kac_denominator(order, omit_highest)?.inverse()?)?;
    for i in ROOTS {
        ch = ch.div_one_minus(&dyn_mono(&-FiniteWeight::alpha(i)))?;
    }
    Ok(ch.shift(&dyn_mono(&mu.finite())).with_offset(kw_offset(mu)))
}

/// Kac-Wakimoto character with the finite denominators expanded as geometric series in
/// the negative simple roots; layer `n` is exact for weights at most `depth - 2n` below the top.
pub fn sl3_adm_character_truncated(mu: &AffineWeight, order: i64, depth: i64) -> Result<QSeries> {
    let orbit = integral_weyl_orbit(mu, order)?;
    let mut num = QSeries::zero(2, Q::zero(), order);
    for t in &orbit {
        num.add_term(t.grade, dyn_mono(&(t.weight - mu.finite())), t.sign as i128);
    }
    let mut ch = num.mul(&weyl_kac_denominator(order, false)?.inverse()?)?;
    let height = |m: &Mono| {
        let (c1, c2) = FiniteWeight::new(m[0], m[1]).root_coords();
        -(c1 + c2)
    };
    for i in ROOTS {
        let a = dyn_mono(&-FiniteWeight::alpha(i));
        let mut geo = super::series::LPoly::zero();
        let mut m = mono0();
        for _ in 0..=depth {
            geo.add_term(m, 1);
            m = [m[0] + a[0], m[1] + a[1]];
        }
        let mut next = QSeries::zero(2, ch.offset(), ch.order());
        for (n, p) in ch.layers() {
            let keep = p.mul(&geo)?;
            for (m, c) in keep.iter() {
                if height(m) <= qi(depth) {
                    next.add_term(*n, *m, *c);
                }
            }
        }
        ch = next;
    }
    let mut out = QSeries::zero(2, kw_offset(mu), order);
    for (n, p) in ch.layers() {
        for (m, c) in p.iter() {
            if height(m) <= qi(depth - 2 * n) {
                out.add_term(*n, *m, *c);
            }
        }
    }
    Ok(out.shift(&dyn_mono(&mu.finite())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{bilinear, q, Admissible, AdmFamily, Label, Weyl};
    use std::collections::BTreeSet;

    fn brute(mu: &AffineWeight, v: i64, cutoff: i64, range: i64) -> BTreeSet<AffineOrbitTerm> {
        let kappa = mu.level() + qi(3);
        let lam = mu.finite() + FiniteWeight::rho();
        let mut out = BTreeSet::new();
        for w in Weyl::ALL {
            let wl = w.act(&lam);
            for b1 in -range..=range {
                for b2 in -range..=range {
                    let beta = FiniteWeight::from_root_coords(qi(v * b1), qi(v * b2));
                    let d = bilinear(&wl, &beta) + kappa * beta.norm2() / 2;
                    assert!(d.is_integer());
                    let d = d.to_integer();
                    if d <= cutoff {
                        let weight = wl + beta.scale(kappa) - FiniteWeight::rho();
                        out.insert(AffineOrbitTerm { grade: d, weight, sign: w.det() as i8 });
                    }
                }
            }
        }
        out
    }

    #[test]
    fn orbit_matches_brute_force() {
        let u = 5;
        for l in [Label::new(2, 0, 0), Label::new(0, 1, 1), Label::new(1, 0, 1)] {
            let mu = Admissible::new(u, AdmFamily::Zero, l).weight;
            let orbit: BTreeSet<_> = integral_weyl_orbit(&mu, 10).unwrap().into_iter().collect();
            assert_eq!(orbit, brute(&mu, 2, 10, 12), "{l}");
            assert_eq!(orbit.iter().filter(|t| t.grade == 0).count(), 6);
            assert!(orbit.iter().all(|t| t.grade >= 0));
        }
        let int = AffineWeight::int(1, 1, 0);
        let orbit: BTreeSet<_> = integral_weyl_orbit(&int, 12).unwrap().into_iter().collect();
        assert_eq!(orbit, brute(&int, 1, 12, 12));
    }

    #[test]
    fn non_regular_seed_is_rejected() {
        let mu = AffineWeight::new(q(-3, 2), qi(-1), qi(0));
        assert!(integral_weyl_orbit(&mu, 5).is_err());
    }

    #[test]
    fn integrable_vacuum_has_adjoint_at_grade_one() {
        let ch = sl3_adm_character(&AffineWeight::int(1, 0, 0), 4, false).unwrap();
        assert_eq!(ch.layer(0).total(), 1);
        assert_eq!(ch.layer(1).total(), 8);
        // level-1 vacuum: theta function of the root lattice over eta^2
        let mut two_colored = [0i128; 5];
        two_colored[0] = 1;
        for _ in 0..2 {
            for part in 1..5 {
                for n in part..5 {
                    two_colored[n] += two_colored[n - part];
                }
            }
        }
        for n in 0..5usize {
            let mut want = 0;
            for a in -4i64..=4 {
                for b in -4i64..=4 {
                    let h = FiniteWeight::from_root_coords(qi(a), qi(b)).norm2() / 2;
                    if h <= qi(n as i64) {
                        want += two_colored[n - h.to_integer() as usize];
                    }
                }
            }
            assert_eq!(ch.layer(n as i64).total(), want, "grade {n}");
        }
        assert!(ch.all_nonnegative());
    }

    #[test]
    fn admissible_top_spaces() {
        let u = 5;
        for l in [Label::new(2, 0, 0), Label::new(0, 1, 1), Label::new(1, 0, 1)] {
            let mu = Admissible::new(u, AdmFamily::Zero, l).weight;
            let ch = sl3_adm_character(&mu, 3, false).unwrap();
            let (a, b) = (l.0[1], l.0[2]);
            assert_eq!(ch.layer(0).total(), ((a + 1) * (b + 1) * (a + b + 2) / 2) as i128);
            assert!(ch.all_nonnegative());
            let num = sl3_adm_character(&mu, 3, true).unwrap();
            let back = num.mul(&QSeries::one_minus(2, highest_root_factor().0, 1, 3).inverse().unwrap()).unwrap();
            assert_eq!(back, ch);
            let tr = sl3_adm_character_truncated(&mu, 3, 12).unwrap();
            assert_eq!(tr.layer(0), ch.layer(0));
        }
        for l in [Label::new(2, 0, 0), Label::new(0, 1, 1), Label::new(0, 0, 2), Label::new(1, 1, 0)] {
            let mu = Admissible::new(u, AdmFamily::One, l).weight;
            assert!(sl3_adm_character(&mu, 0, false).is_err());
            let top = sl3_adm_character_truncated(&mu, 0, 10).unwrap().layer(0);
            assert_eq!(top.iter().map(|(_, c)| *c).max().unwrap(), (l.0[2] + 1) as i128, "{l}");
            assert!(top.iter().all(|(_, c)| *c > 0));
        }
    }
}
