//! Mechanical evaluation of the standard Verlinde formula for Grothendieck fusion.
//!
//! The integrand `S_A S_B / S_vac` is written as a finite sum of terms
//! `c e^{-2 pi i (<x, G> + <h, Gamma> + m j_Lambda)} S_{lambda_A Lambda} S_{lambda_B Lambda} / S_{vac Lambda}`.
//! Integrating against `conj S_{(g'', lambda'', gamma'')}` forces `g'' = h`, the coweight sum forces
//! `[gamma''] = [x - u h/2]`, and the `Lambda` sum yields BP fusion coefficients once the
//! `m j_Lambda` phase is absorbed into `nabla^m`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::fusion::classes::{GrothSum, ModuleLabel};
use crate::fusion::verlinde::FusionTable;
use crate::modular::{
    base_order, expi, hw_factors, hw_terms, semirelaxed_terms, to_f64, DenFactor, HwVariant, KernelTerm, RelaxedLabel,
};
use crate::weights::{frac, q, AdmFamily, Coweight, GammaCoset, Label, Q};

/// Exponential polynomial in `(G, Lambda, Gamma)`, keyed by `(h, m, [x])`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExpPoly {
    n: u32,
    terms: BTreeMap<(Coweight, i64, GammaCoset), CycNum>,
}

impl ExpPoly {
    pub fn one(n: u32) -> Self {
        Self::monomial(n, CycNum::one(n), Coweight::ZERO, 0, GammaCoset::zero())
    }

    pub fn monomial(n: u32, c: CycNum, h: Coweight, m: i64, x: GammaCoset) -> Self {
        let mut p = ExpPoly { n, terms: BTreeMap::new() };
        p.push((h, m, x), c);
        p
    }

    /// `e^{2 pi i (<h, Gamma> + m j + c)}`.
    fn unit(n: u32, f: &DenFactor) -> Self {
        Self::monomial(n, expi(n, frac(f.c)), -f.h, -f.m, GammaCoset::zero())
    }

    /// `1 + e^{2 pi i (<h, Gamma> + m j + c)}`.
    fn one_plus(n: u32, f: &DenFactor) -> Self {
        let mut p = Self::one(n);
        for (k, v) in Self::unit(n, f).terms {
            p.push(k, v);
        }
        p
    }

    /// `e^{-2 pi i (<gamma + u g/2, G> + <g, Gamma>)}`, or its inverse.
    fn relaxed(n: u32, u: i64, row: &RelaxedLabel, inverse: bool) -> Self {
        let key = row.gamma.shift(&row.g.as_weight().scale(q(u, 2)));
        if inverse {
            Self::monomial(n, CycNum::one(n), -row.g, 0, -key)
        } else {
            Self::monomial(n, CycNum::one(n), row.g, 0, key)
        }
    }

    fn push(&mut self, k: (Coweight, i64, GammaCoset), c: CycNum) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_insert_with(|| CycNum::zero(self.n));
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn mul(&self, o: &ExpPoly) -> ExpPoly {
        let mut p = ExpPoly { n: self.n, terms: BTreeMap::new() };
        for ((h1, m1, x1), c1) in &self.terms {
            for ((h2, m2, x2), c2) in &o.terms {
                p.push((*h1 + *h2, m1 + m2, *x1 + *x2), c1 * c2);
            }
        }
        p
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Coweight, i64, GammaCoset), &CycNum)> {
        self.terms.iter()
    }

    /// Numeric value at a coweight `G`, a charge `j`, and `Gamma` given by `(<w1^v,Gamma>, <w2^v,Gamma>)`.
    pub fn eval(&self, g: &Coweight, j: Q, gamma: [Complex64; 2]) -> Complex64 {
        let tau = std::f64::consts::TAU;
        self.terms
            .iter()
            .map(|((h, m, x), c)| {
                let e = Complex64::from(to_f64(x.pair(g)) + *m as f64 * to_f64(j))
                    + gamma[0] * h.g1 as f64
                    + gamma[1] * h.g2 as f64;
                c.to_complex() * (Complex64::new(0.0, -tau) * e).exp()
            })
            .sum()
    }
}

fn inverse(f: &DenFactor) -> DenFactor {
    DenFactor { h: -f.h, m: -f.m, c: -f.c }
}

fn same_unit(a: &DenFactor, b: &DenFactor) -> bool {
    a.h == b.h && a.m == b.m && frac(a.c) == frac(b.c)
}

/// Kernel terms of a class, each with its own denominators.
pub fn kernel_terms(u: i64, label: &ModuleLabel) -> Result<Vec<KernelTerm>> {
    label.validate(u)?;
    match label.canonical() {
        ModuleLabel::Relaxed { g, lambda, gamma } => {
            Ok(vec![KernelTerm { sign: 1, row: RelaxedLabel::new(g, lambda, gamma), factors: vec![] }])
        }
        ModuleLabel::Semirelaxed { w, g, lambda, gamma } => semirelaxed_terms(u, w, &RelaxedLabel::new(g, lambda, gamma)),
        ModuleLabel::HighestWeight { w, g, family, lambda } => {
            let var = match family {
                AdmFamily::W1 => HwVariant::Lambda1,
                _ => HwVariant::Omega0,
            };
            Ok(hw_terms(u, var, Coweight::ZERO, &lambda)?.iter().map(|t| t.twist_flow(w, g)).collect())
        }
        ModuleLabel::Bp(_) => Err(Error::Unsupported("BP classes have no S-kernel".into())),
    }
}

/// `S_A S_B / S_vac` for one pair of kernel terms, with all denominators cancelled.
pub fn integrand(u: i64, a: &KernelTerm, b: &KernelTerm) -> Result<ExpPoly> {
    let n = base_order(u);
    let vac = hw_terms(u, HwVariant::Vacuum, Coweight::ZERO, &Label::vacuum(u))?;
    let vac = &vac[0];
    let mut remaining: Vec<DenFactor> = hw_factors(u).to_vec();
    let mut p = ExpPoly::relaxed(n, u, &a.row, false)
        .mul(&ExpPoly::relaxed(n, u, &b.row, false))
        .mul(&ExpPoly::relaxed(n, u, &vac.row, true));
    for f in a.factors.iter().chain(&b.factors) {
        if let Some(i) = remaining.iter().position(|d| same_unit(d, f)) {
            remaining.remove(i);
        } else if let Some(i) = remaining.iter().position(|d| same_unit(d, &inverse(f))) {
            // 1 + U = U (1 + U^{-1})
            let d = remaining.remove(i);
            p = p.mul(&ExpPoly::unit(n, &d));
        } else {
            return Err(Error::Unsupported(format!("denominator {f} does not cancel against the vacuum")));
        }
    }
    for d in &remaining {
        p = p.mul(&ExpPoly::one_plus(n, d));
    }
    Ok(p)
}

/// Evaluates the Verlinde integral for `A x B`.
pub fn standard_verlinde_reduce(u: i64, table: &FusionTable, a: &ModuleLabel, b: &ModuleLabel) -> Result<GrothSum> {
    let n = base_order(u);
    let mut out = GrothSum::new();
    for ta in kernel_terms(u, a)? {
        for tb in kernel_terms(u, b)? {
            let p = integrand(u, &ta, &tb)?;
            let prod = table.product(&ta.row.lambda, &tb.row.lambda);
            for ((h, m, x), c) in p.terms() {
                let residual = c * &expi(n, frac(q(-m * u, 3)));
                let k = residual.as_integer().filter(|k| *k > 0).ok_or_else(|| {
                    Error::Invariant(format!("residual coefficient {residual} at g'' = {h}, m = {m}, [x] = {x}"))
                })?;
                let gamma = x.shift(&h.as_weight().scale(q(-u, 2)));
                for (l, nn) in &prod {
                    out.add(ModuleLabel::relaxed(*h, l.nabla(*m), gamma), ta.sign * tb.sign * k * *nn as i64);
                }
            }
        }
    }
    if !out.all_nonnegative() {
        return Err(Error::Invariant(format!("negative multiplicity in {a} x {b}: {out}")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::rules::{groth_fuse, relfus};
    use crate::fusion::verlinde::bp_fusion;
    use crate::modular::{hw_skernel, relaxed_skernel_numeric, to_f64};
    use crate::weights::{enumerate_p, gamma_of, qi, Weyl};

    #[test]
    fn relaxed_pairs_match_closed_form() {
        let u = 5;
        let t = bp_fusion(u).unwrap();
        let ps = enumerate_p(u);
        for (i, (a, b)) in [(ps[1], ps[4]), (ps[3], ps[5]), (ps[2], ps[2])].iter().enumerate() {
            let ra = RelaxedLabel::new(Coweight::new(i as i64, -1), *a, GammaCoset::from_root_coords(q(1, 3), q(1, 6 + i as i64)));
            let rb = RelaxedLabel::new(Coweight::ZERO, *b, GammaCoset::from_root_coords(q(2, 9), q(3, 7)));
            let la = ModuleLabel::relaxed(ra.g, ra.lambda, ra.gamma);
            let lb = ModuleLabel::relaxed(rb.g, rb.lambda, rb.gamma);
            assert_eq!(standard_verlinde_reduce(u, &t, &la, &lb).unwrap(), relfus(u, &t, &ra, &rb));
        }
    }

    #[test]
    fn mixed_pairs_match_closed_form() {
        let u = 5;
        let t = bp_fusion(u).unwrap();
        let l = Label::new(0, 1, 1);
        let r = ModuleLabel::relaxed(Coweight::ZERO, Label::new(1, 1, 0), GammaCoset::from_root_coords(q(1, 5), q(1, 4)));
        let s = ModuleLabel::semi(Weyl::S2, Coweight::new(1, 0), l, gamma_of(u, &l, qi(0), q(3, 11)));
        for a in [s, ModuleLabel::vacuum(u), ModuleLabel::l0(l), ModuleLabel::l1(l)] {
            assert_eq!(standard_verlinde_reduce(u, &t, &a, &r).unwrap(), groth_fuse(u, &t, &a, &r).unwrap(), "{a}");
        }
        assert_eq!(standard_verlinde_reduce(u, &t, &ModuleLabel::vacuum(u), &r).unwrap(), GrothSum::single(r));
        assert!(matches!(standard_verlinde_reduce(u, &t, &ModuleLabel::l0(l), &ModuleLabel::l0(l)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn integrand_numeric() {
        let u = 5;
        let a = KernelTerm {
            sign: 1,
            row: RelaxedLabel::new(Coweight::new(1, 0), Label::new(0, 1, 1), GammaCoset::from_root_coords(q(1, 4), q(1, 3))),
            factors: vec![],
        };
        let b = KernelTerm { sign: 1, row: RelaxedLabel::new(Coweight::ZERO, Label::new(2, 0, 0), GammaCoset::from_root_coords(q(1, 7), q(0, 1))), factors: vec![] };
        let p = integrand(u, &a, &b).unwrap();
        assert_eq!(p.len(), 8);
        let col = RelaxedLabel::new(Coweight::new(1, -1), Label::new(1, 0, 1), GammaCoset::from_root_coords(q(2, 9), q(1, 10)));
        let (c1, c2) = col.gamma.root_coords();
        let gam = [Complex64::from(to_f64(c1)), Complex64::from(to_f64(c2))];
        let sa = relaxed_skernel_numeric(u, &a.row, col.g, &col.lambda, gam);
        let sb = relaxed_skernel_numeric(u, &b.row, col.g, &col.lambda, gam);
        let sv = hw_skernel(u, HwVariant::Vacuum, Coweight::ZERO, &Label::vacuum(u), &col).unwrap().numeric(u).unwrap();
        let bp = |l: &Label| crate::modular::bp_entry(u, l, &col.lambda).to_complex();
        let ratio = bp(&a.row.lambda) * bp(&b.row.lambda) / bp(&Label::vacuum(u));
        let lhs = sa * sb / sv;
        let rhs = p.eval(&col.g, col.lambda.j(), gam) * ratio;
        assert!((lhs - rhs).norm() < 1e-9, "{lhs} vs {rhs}");
    }
}
