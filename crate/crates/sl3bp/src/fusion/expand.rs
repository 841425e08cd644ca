//! Grothendieck-group identities between relaxed, semirelaxed and highest-weight classes.

use crate::error::{Error, Result};
use crate::fusion::classes::{GrothSum, ModuleLabel};
use crate::fusion::kform::{Family, Step};
use crate::modular::RelaxedLabel;
use crate::weights::{atypical, check_atypical, gamma1, gamma2, q, qi, AdmFamily, Coweight, FiniteWeight, GammaCoset, Label, Weyl};

fn w(i: usize) -> Coweight {
    Coweight::omega(i)
}

fn shift(gamma: &GammaCoset, x: FiniteWeight, s: num_rational::Ratio<i64>) -> GammaCoset {
    gamma.shift(&x.scale(s))
}

/// `sigma^g w(S^lambda_gamma)` as one alternating family.
pub fn semirelaxed_family(u: i64, v: Weyl, g: Coweight, lambda: Label, gamma: GammaCoset) -> Result<Family> {
    check_atypical(u, &lambda, &gamma)?;
    let f = Family {
        coeff: 1,
        base: RelaxedLabel::new(Coweight::ZERO, lambda, gamma),
        steps: vec![Step { h: w(3), m: 1, alternating: true }],
    };
    Ok(f.twist_flow(v, g))
}

/// `L(lambda - u w0/2)` as two doubly infinite families.
pub fn l0_families(u: i64, lambda: Label) -> Vec<Family> {
    let outer = Step { h: w(2).scale(-2), m: 1, alternating: false };
    let uw2 = FiniteWeight::omega(2).scale(qi(u));
    vec![
        Family {
            coeff: 1,
            base: RelaxedLabel::new(-w(2), lambda, gamma1(u, &lambda).weyl(Weyl::S1)),
            steps: vec![outer, Step { h: Weyl::S1.act_co(&w(3)), m: 1, alternating: true }],
        },
        Family {
            coeff: -1,
            base: RelaxedLabel::new(w(3) - w(2), lambda.nabla(1), gamma2(u, &lambda).shift(&uw2)),
            steps: vec![outer, Step { h: w(3), m: 1, alternating: true }],
        },
    ]
}

/// `L(Lambda^1_lambda) = w1(S^lambda_{gamma^2}) - sigma^{w3} L(lambda - u w0/2)`.
pub fn l1_families(u: i64, lambda: Label) -> Result<Vec<Family>> {
    let mut out = vec![semirelaxed_family(u, Weyl::S1, Coweight::ZERO, lambda, gamma2(u, &lambda))?];
    out.extend(l0_families(u, lambda).into_iter().map(|f| f.twist_flow(Weyl::E, w(3)).scaled(-1)));
    Ok(out)
}

/// Complete expansion of a class into relaxed families.
pub fn families(u: i64, label: &ModuleLabel) -> Result<Vec<Family>> {
    label.validate(u)?;
    match label.canonical() {
        ModuleLabel::Bp(_) => Err(Error::Unsupported("BP classes have no relaxed expansion".into())),
        ModuleLabel::Relaxed { g, lambda, gamma } => Ok(vec![Family::relaxed(RelaxedLabel::new(g, lambda, gamma))]),
        ModuleLabel::Semirelaxed { w, g, lambda, gamma } => Ok(vec![semirelaxed_family(u, w, g, lambda, gamma)?]),
        ModuleLabel::HighestWeight { w, g, family, lambda } => {
            let base = match family {
                AdmFamily::Zero => l0_families(u, lambda),
                AdmFamily::W1 => l1_families(u, lambda)?,
                _ => unreachable!("canonical classes use the w0 and w1 families"),
            };
            Ok(base.into_iter().map(|f| f.twist_flow(w, g)).collect())
        }
    }
}

pub type LazyTerm = Box<dyn Fn(u64) -> GrothSum + Send + Sync>;

/// An infinite sum `sum_{n >= 0} term(n)`, never summed by the engine.
pub struct LazySum {
    pub description: String,
    term: LazyTerm,
}

impl LazySum {
    pub fn term(&self, n: u64) -> GrothSum {
        (self.term)(n)
    }

    pub fn partial(&self, n_max: u64) -> GrothSum {
        let mut s = GrothSum::new();
        for n in 0..=n_max {
            s.extend(&self.term(n), 1);
        }
        s
    }
}

pub enum Expansion {
    Finite(GrothSum),
    Lazy(LazySum),
}

/// `[R^lambda_gamma] = [S^lambda_gamma] + [sigma^{w3} S^{nabla lambda}_{gamma - u w3/2}]`.
pub fn expand_relaxed(u: i64, g: Coweight, lambda: Label, gamma: GammaCoset) -> Result<GrothSum> {
    check_atypical(u, &lambda, &gamma)?;
    let mut s = GrothSum::new();
    s.add(ModuleLabel::semi(Weyl::E, g, lambda, gamma), 1);
    s.add(ModuleLabel::semi(Weyl::E, g + w(3), lambda.nabla(1), shift(&gamma, FiniteWeight::omega(3), q(-u, 2))), 1);
    Ok(s)
}

/// Semirelaxed classes at the degenerate points `gamma^1_lambda`, `gamma^2_lambda`.
pub fn expand_semi_degenerate(u: i64, v: Weyl, g: Coweight, lambda: Label, gamma: GammaCoset) -> Result<GrothSum> {
    let mut s = GrothSum::new();
    if gamma == gamma1(u, &lambda) {
        s.add(ModuleLabel::hw(Weyl::S1S2, Coweight::ZERO, AdmFamily::W1, lambda), 1);
        s.add(ModuleLabel::hw(Weyl::S1, Coweight::ZERO, AdmFamily::Two, lambda.nabla(1)), 1);
    } else if gamma == gamma2(u, &lambda) {
        s.add(ModuleLabel::hw(Weyl::S1, Coweight::ZERO, AdmFamily::W1, lambda), 1);
        s.add(ModuleLabel::hw(Weyl::S1, -w(1), AdmFamily::Zero, lambda), 1);
    } else {
        return Err(Error::Unsupported(format!("S:{lambda}:gamma={gamma} is not at a degenerate point")));
    }
    Ok(s.twisted(v).flowed(g))
}

/// `[L(Lambda^1_lambda)] = [w1 S^lambda_{gamma^2}] - [sigma^{w3} L(lambda - u w0/2)]`.
pub fn expand_lambda1(u: i64, v: Weyl, g: Coweight, lambda: Label) -> GrothSum {
    let mut s = GrothSum::new();
    s.add(ModuleLabel::semi(Weyl::S1, Coweight::ZERO, lambda, gamma2(u, &lambda)), 1);
    s.add(ModuleLabel::hw(Weyl::E, w(3), AdmFamily::Zero, lambda), -1);
    s.twisted(v).flowed(g)
}

/// `[v S^lambda_gamma] = sum_n (-1)^n [sigma^{n v(w3)} R^{nabla^n lambda}_{v(gamma - n u w3/2)}]`.
pub fn expand_semi_series(u: i64, v: Weyl, g: Coweight, lambda: Label, gamma: GammaCoset) -> Result<LazySum> {
    let f = semirelaxed_family(u, v, g, lambda, gamma)?;
    Ok(LazySum {
        description: format!("alternating relaxed series of {}", ModuleLabel::semi(v, g, lambda, gamma)),
        term: Box::new(move |n| {
            let (c, r) = f.term(u, &[n]);
            let mut s = GrothSum::new();
            s.add(ModuleLabel::relaxed(r.g, r.lambda, r.gamma), c);
            s
        }),
    })
}

/// `[L(lambda - u w0/2)] = sum_n ([sigma^{-(2n+1) w2} w1 S^{nabla^n lambda}_{gamma^1 + n u w2}]
///  - [sigma^{w3 - (2n+1) w2} S^{nabla^{n+1} lambda}_{gamma^2 + (n+1) u w2}])`.
pub fn expand_l0_series(u: i64, v: Weyl, g: Coweight, lambda: Label) -> LazySum {
    let g1 = gamma1(u, &lambda);
    let g2 = gamma2(u, &lambda);
    let uw2 = FiniteWeight::omega(2);
    LazySum {
        description: format!("semirelaxed series of {}", ModuleLabel::hw(v, g, AdmFamily::Zero, lambda)),
        term: Box::new(move |n| {
            let n = n as i64;
            let mut s = GrothSum::new();
            s.add(ModuleLabel::semi(Weyl::S1, w(2).scale(-(2 * n + 1)), lambda.nabla(n), shift(&g1, uw2, qi(n * u))), 1);
            s.add(
                ModuleLabel::semi(Weyl::E, w(3) - w(2).scale(2 * n + 1), lambda.nabla(n + 1), shift(&g2, uw2, qi((n + 1) * u))),
                -1,
            );
            s.twisted(v).flowed(g)
        }),
    }
}

/// One step of the rewriting system.
pub fn groth_expand(u: i64, label: &ModuleLabel) -> Result<Expansion> {
    label.validate(u)?;
    match label.canonical() {
        ModuleLabel::Relaxed { g, lambda, gamma } => {
            if !atypical(u, &lambda, &gamma) {
                return Err(Error::Unsupported(format!("{label} has typical gamma; no finite expansion")));
            }
            Ok(Expansion::Finite(expand_relaxed(u, g, lambda, gamma)?))
        }
        ModuleLabel::Semirelaxed { w, g, lambda, gamma } => {
            if gamma == gamma1(u, &lambda) || gamma == gamma2(u, &lambda) {
                Ok(Expansion::Finite(expand_semi_degenerate(u, w, g, lambda, gamma)?))
            } else {
                Ok(Expansion::Lazy(expand_semi_series(u, w, g, lambda, gamma)?))
            }
        }
        ModuleLabel::HighestWeight { w, g, family: AdmFamily::W1, lambda } => Ok(Expansion::Finite(expand_lambda1(u, w, g, lambda))),
        ModuleLabel::HighestWeight { w, g, lambda, .. } => Ok(Expansion::Lazy(expand_l0_series(u, w, g, lambda))),
        ModuleLabel::Bp(_) => Err(Error::Unsupported("BP classes have no expansion".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::kform::KernelForm;
    use crate::modular::{bp_smatrix, hw_terms, HwVariant};
    use crate::weights::{enumerate_p, gamma_of};

    fn kf(u: i64, s: &GrothSum) -> KernelForm {
        let sbp = bp_smatrix(u).unwrap();
        let mut fs = Vec::new();
        for (l, c) in s.iter() {
            fs.extend(families(u, l).unwrap().into_iter().map(|f| f.scaled(*c)));
        }
        KernelForm::from_families(u, &sbp, &fs).unwrap()
    }

    #[test]
    fn hw_expansions_match_direct_kernels() {
        let u = 5;
        let sbp = bp_smatrix(u).unwrap();
        for l in enumerate_p(u) {
            for (var, fam) in [(HwVariant::Omega0, AdmFamily::Zero), (HwVariant::Lambda1, AdmFamily::W1), (HwVariant::Omega1, AdmFamily::One), (HwVariant::Omega2, AdmFamily::Two)] {
                let g = Coweight::new(1, -1);
                let direct = KernelForm::from_terms(u, &sbp, &hw_terms(u, var, Coweight::ZERO, &l).unwrap()).unwrap();
                let fam_k = kf(u, &GrothSum::single(ModuleLabel::hw(Weyl::E, Coweight::ZERO, fam, l)));
                assert!(direct.same(&fam_k), "{var:?} {l}");
                let tw = hw_terms(u, var, Coweight::ZERO, &l).unwrap().iter().map(|t| t.twist_flow(Weyl::S2S1, g)).collect::<Vec<_>>();
                let direct = KernelForm::from_terms(u, &sbp, &tw).unwrap();
                let fam_k = kf(u, &GrothSum::single(ModuleLabel::hw(Weyl::S2S1, g, fam, l)));
                assert!(direct.same(&fam_k), "twisted {var:?} {l}");
            }
        }
    }

    #[test]
    fn finite_identities_hold_on_kernels() {
        let u = 5;
        for l in enumerate_p(u) {
            let gamma = gamma_of(u, &l, qi(0), q(2, 7));
            let g = Coweight::new(0, 1);
            let lhs = GrothSum::single(ModuleLabel::relaxed(g, l, gamma));
            assert!(kf(u, &lhs).same(&kf(u, &expand_relaxed(u, g, l, gamma).unwrap())));
            for gm in [gamma1(u, &l), gamma2(u, &l)] {
                for v in [Weyl::E, Weyl::S2] {
                    let lhs = GrothSum::single(ModuleLabel::semi(v, g, l, gm));
                    let rhs = expand_semi_degenerate(u, v, g, l, gm).unwrap();
                    assert!(kf(u, &lhs).same(&kf(u, &rhs)), "{l} {gm} {v}");
                }
            }
            let lhs = GrothSum::single(ModuleLabel::hw(Weyl::S1, g, AdmFamily::W1, l));
            assert!(kf(u, &lhs).same(&kf(u, &expand_lambda1(u, Weyl::S1, g, l))));
        }
    }

    #[test]
    fn lazy_terms() {
        let u = 5;
        let l = Label::new(0, 1, 1);
        let gamma = gamma_of(u, &l, qi(0), q(1, 3));
        let s = expand_semi_series(u, Weyl::E, Coweight::ZERO, l, gamma).unwrap();
        assert_eq!(s.term(0), GrothSum::single(ModuleLabel::relaxed(Coweight::ZERO, l, gamma)));
        let t1 = s.term(1);
        let (lab, c) = t1.iter().next().unwrap();
        assert_eq!(*c, -1);
        assert_eq!(lab.flow(), Coweight::omega(3));
        assert_eq!(lab.lambda(), l.nabla(1));
        assert_eq!(s.partial(3).len(), 4);
        let h = expand_l0_series(u, Weyl::E, Coweight::ZERO, l);
        assert_eq!(h.partial(2).len(), 6);
        assert!(h.partial(2).iter().all(|(x, _)| x.validate(u).is_ok()));
    }
}
