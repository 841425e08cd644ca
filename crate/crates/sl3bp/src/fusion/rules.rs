//! Closed-form Grothendieck fusion rules and the independent derivation from the relaxed rule.

use crate::error::{Error, Result};
use crate::fusion::classes::{GrothSum, ModuleLabel};
use crate::fusion::expand::families;
use crate::fusion::kform::{Family, KernelForm};
use crate::fusion::verlinde::FusionTable;
use crate::modular::{RelaxedLabel, SMatrix};
use crate::weights::{q, qi, AdmFamily, Coweight, FiniteWeight, GammaCoset, Label, Weyl};

fn cw(i: usize) -> Coweight {
    Coweight::omega(i)
}

/// `gamma + s (u/2) x`.
fn sh(u: i64, gamma: &GammaCoset, x: FiniteWeight, s: i64) -> GammaCoset {
    gamma.shift(&x.scale(q(s * u, 2)))
}

fn om(i: usize) -> FiniteWeight {
    FiniteWeight::omega(i)
}

fn al(i: usize) -> FiniteWeight {
    FiniteWeight::alpha(i)
}

/// One summand of the relaxed rule: `coeff * sigma^g R^{nabla^k lambda''}_{Gamma + delta}`.
#[derive(Clone, Copy, Debug)]
pub struct RelfusTerm {
    pub coeff: i64,
    pub g: Coweight,
    pub k: i64,
    pub delta: FiniteWeight,
}

/// The seven summands, with `delta = -(u/2) g`.
pub fn relfus_terms(u: i64) -> [RelfusTerm; 7] {
    let t = |coeff, g: Coweight, k| RelfusTerm { coeff, g, k, delta: g.as_weight().scale(q(-u, 2)) };
    [
        t(2, Coweight::ZERO, -1),
        t(1, -cw(1), 0),
        t(1, -cw(2), 1),
        t(1, -cw(3), 1),
        t(1, cw(1), 1),
        t(1, cw(2), 0),
        t(1, cw(3), 0),
    ]
}

/// `sigma^g R^lambda_gamma x sigma^g' R^lambda'_gamma'`.
pub fn relfus(u: i64, table: &FusionTable, a: &RelaxedLabel, b: &RelaxedLabel) -> GrothSum {
    let gamma = a.gamma + b.gamma;
    let mut s = GrothSum::new();
    for (l, n) in table.product(&a.lambda, &b.lambda) {
        for t in relfus_terms(u) {
            let lab = ModuleLabel::relaxed(a.g + b.g + t.g, l.nabla(t.k), gamma.shift(&t.delta));
            s.add(lab, t.coeff * n as i64);
        }
    }
    s
}

/// Untwisted, unflowed core of a class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Core {
    R(Label, GammaCoset),
    S(Label, GammaCoset),
    L0(Label),
    L1(Label),
}

fn split(label: &ModuleLabel) -> Result<(Weyl, Coweight, Core)> {
    match label.canonical() {
        ModuleLabel::Relaxed { g, lambda, gamma } => Ok((Weyl::E, g, Core::R(lambda, gamma))),
        ModuleLabel::Semirelaxed { w, g, lambda, gamma } => Ok((w, g, Core::S(lambda, gamma))),
        ModuleLabel::HighestWeight { w, g, family: AdmFamily::Zero, lambda } => Ok((w, g, Core::L0(lambda))),
        ModuleLabel::HighestWeight { w, g, family: AdmFamily::W1, lambda } => Ok((w, g, Core::L1(lambda))),
        x => Err(Error::Unsupported(format!("no closed-form rule for {x}"))),
    }
}

/// Which closed form produced a result.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum Rule {
    Bp,
    RelaxedRelaxed,
    SemiRelaxed,
    SemiSemi,
    W1SemiSemi,
    L0Relaxed,
    L0Semi,
    L0L0,
    L0L1,
    L1Relaxed,
    L1Semi,
    L1W1Semi,
    L1L1,
}

impl Rule {
    pub const GROTHENDIECK: [Rule; 11] = [
        Rule::SemiRelaxed,
        Rule::SemiSemi,
        Rule::W1SemiSemi,
        Rule::L0Relaxed,
        Rule::L0Semi,
        Rule::L0L0,
        Rule::L0L1,
        Rule::L1Relaxed,
        Rule::L1Semi,
        Rule::L1W1Semi,
        Rule::L1L1,
    ];
}

struct Ctx<'a> {
    u: i64,
    table: &'a FusionTable,
}

impl Ctx<'_> {
    fn each(&self, a: &Label, b: &Label, mut f: impl FnMut(&mut GrothSum, Label)) -> GrothSum {
        let mut s = GrothSum::new();
        for (l, n) in self.table.product(a, b) {
            let mut t = GrothSum::new();
            f(&mut t, l);
            s.extend(&t, n as i64);
        }
        s
    }

    /// `3 j_lambda w2`.
    fn tj(&self, l: &Label) -> FiniteWeight {
        om(2).scale(qi(3) * l.j())
    }

    fn semi_relaxed(&self, w: Weyl, l: &Label, gamma: &GammaCoset, lp: &Label, gp: &GammaCoset) -> GrothSum {
        let u = self.u;
        let big = gamma.weyl(w) + *gp;
        let r = |g, l, x| ModuleLabel::relaxed(g, l, x);
        let wo = |i| w.act(&om(i));
        let wc = |i| w.act_co(&cw(i));
        self.each(l, lp, |s, m| {
            s.add(r(Coweight::ZERO, m.nabla(-1), big), 1);
            s.add(r(-wc(1), m, sh(u, &big, wo(1), 1)), 1);
            s.add(r(wc(2), m, sh(u, &big, wo(2), -1)), 1);
            s.add(r(-wc(3), m.nabla(1), sh(u, &big, wo(3), 1)), 1);
        })
    }

    fn semi_semi(&self, l: &Label, gamma: &GammaCoset, lp: &Label, gp: &GammaCoset) -> GrothSum {
        let u = self.u;
        let big = *gamma + *gp;
        self.each(l, lp, |s, m| {
            s.add(ModuleLabel::semi(Weyl::E, -cw(1), m, sh(u, &big, om(1), 1)), 1);
            s.add(ModuleLabel::semi(Weyl::E, cw(2), m, sh(u, &big, om(2), -1)), 1);
            s.add(ModuleLabel::relaxed(-cw(3), m.nabla(1), sh(u, &big, om(3), 1)), 1);
        })
    }

    /// `w1 S^lambda_gamma x S^lambda'_gamma'`.
    fn w1semi_semi(&self, l: &Label, gamma: &GammaCoset, lp: &Label, gp: &GammaCoset) -> GrothSum {
        let u = self.u;
        let big = gamma.weyl(Weyl::S1) + *gp;
        self.each(l, lp, |s, m| {
            s.add(ModuleLabel::relaxed(Coweight::ZERO, m.nabla(-1), big), 1);
            s.add(ModuleLabel::relaxed(cw(2), m, sh(u, &big, om(2), -1)), 1);
        })
    }

    fn l0_relaxed(&self, l: &Label, lp: &Label, gp: &GammaCoset) -> GrothSum {
        let x = gp.shift(&self.tj(l));
        self.each(l, lp, |s, m| s.add(ModuleLabel::relaxed(Coweight::ZERO, m, x), 1))
    }

    fn l0_semi(&self, l: &Label, w: Weyl, lp: &Label, gp: &GammaCoset) -> GrothSum {
        let x = gp.shift(&self.tj(l));
        self.each(l, lp, |s, m| s.add(ModuleLabel::semi(w, Coweight::ZERO, m, x), 1))
    }

    fn l0_l0(&self, l: &Label, lp: &Label) -> GrothSum {
        self.each(l, lp, |s, m| s.add(ModuleLabel::l0(m), 1))
    }

    fn l0_l1(&self, l: &Label, lp: &Label) -> GrothSum {
        self.each(l, lp, |s, m| s.add(ModuleLabel::l1(m), 1))
    }

    fn l1_relaxed(&self, l: &Label, lp: &Label, gp: &GammaCoset) -> GrothSum {
        let u = self.u;
        let x = gp.shift(&self.tj(l));
        self.each(l, lp, |s, m| {
            s.add(ModuleLabel::relaxed(Coweight::ZERO, m.nabla(-1), sh(u, &x, om(3), 1)), 1);
            s.add(ModuleLabel::relaxed(cw(1), m.nabla(1), sh(u, &x, om(2), -1)), 1);
            s.add(ModuleLabel::relaxed(cw(2), m, sh(u, &x, al(2), -1)), 1);
        })
    }

    fn l1_semi(&self, l: &Label, lp: &Label, gp: &GammaCoset) -> GrothSum {
        let u = self.u;
        let x = gp.shift(&self.tj(l));
        self.each(l, lp, |s, m| {
            s.add(ModuleLabel::semi(Weyl::E, Coweight::ZERO, m.nabla(-1), sh(u, &x, om(3), 1)), 1);
            s.add(ModuleLabel::relaxed(cw(2), m, sh(u, &x, al(2), -1)), 1);
        })
    }

    /// `L(Lambda^1_lambda) x w1 S^lambda'_gamma'`.
    fn l1_w1semi(&self, l: &Label, lp: &Label, gp: &GammaCoset) -> GrothSum {
        let u = self.u;
        let x = gp.shift(&self.tj(l));
        let xw = gp.weyl(Weyl::S1).shift(&self.tj(l));
        self.each(l, lp, |s, m| {
            s.add(ModuleLabel::relaxed(cw(1), m.nabla(1), sh(u, &xw, om(2), -1)), 1);
            s.add(ModuleLabel::semi(Weyl::S1, cw(2), m, sh(u, &x, al(3), -1)), 1);
        })
    }

    fn l1_l1(&self, l: &Label, lp: &Label) -> GrothSum {
        let hw = |w, g, f, l| ModuleLabel::hw(w, g, f, l);
        self.each(l, lp, |s, m| {
            s.add(hw(Weyl::E, Coweight::ZERO, AdmFamily::Zero, m.nabla(1)), 1);
            s.add(hw(Weyl::E, cw(1).scale(2), AdmFamily::Zero, m.nabla(-1)), 1);
            s.add(hw(Weyl::E, cw(2).scale(2), AdmFamily::Zero, m), 1);
            // c L(Lambda^1_{d lambda''}) = s3 L(Lambda^1_{nabla^{-1} lambda''})
            s.add(hw(Weyl::S3, Coweight::alpha(3), AdmFamily::W1, m.nabla(-1)), 2);
        })
    }

    /// `w X x w' Y` with flows stripped; `None` if no rule applies in this order.
    fn dispatch(&self, w: Weyl, x: Core, wp: Weyl, y: Core) -> Option<(Rule, GrothSum)> {
        let rel = w.inverse().compose(wp);
        let undo = |gp: &GammaCoset| gp.weyl(w.inverse());
        let out = match (x, y) {
            (Core::R(l, g), Core::R(lp, gp)) => {
                let a = RelaxedLabel::new(Coweight::ZERO, l, g);
                let b = RelaxedLabel::new(Coweight::ZERO, lp, gp);
                (Rule::RelaxedRelaxed, relfus(self.u, self.table, &a, &b))
            }
            (Core::S(l, g), Core::R(lp, gp)) => (Rule::SemiRelaxed, self.semi_relaxed(w, &l, &g, &lp, &gp)),
            (Core::L0(l), Core::R(lp, gp)) => (Rule::L0Relaxed, self.l0_relaxed(&l, &lp, &undo(&gp)).twisted(w)),
            (Core::L1(l), Core::R(lp, gp)) => (Rule::L1Relaxed, self.l1_relaxed(&l, &lp, &undo(&gp)).twisted(w)),
            (Core::S(l, g), Core::S(lp, gp)) if rel == Weyl::E => (Rule::SemiSemi, self.semi_semi(&l, &g, &lp, &gp).twisted(w)),
            // w X x w' Y = w' (w1 X x Y) when w'^{-1} w = s1
            (Core::S(l, g), Core::S(lp, gp)) if rel == Weyl::S1 => {
                (Rule::W1SemiSemi, self.w1semi_semi(&l, &g, &lp, &gp).twisted(wp))
            }
            (Core::L0(l), Core::S(lp, gp)) => (Rule::L0Semi, self.l0_semi(&l, rel, &lp, &gp).twisted(w)),
            (Core::L0(l), Core::L0(lp)) if rel == Weyl::E => (Rule::L0L0, self.l0_l0(&l, &lp).twisted(w)),
            (Core::L0(l), Core::L1(lp)) if rel == Weyl::E => (Rule::L0L1, self.l0_l1(&l, &lp).twisted(w)),
            (Core::L1(l), Core::S(lp, gp)) if rel == Weyl::E => (Rule::L1Semi, self.l1_semi(&l, &lp, &gp).twisted(w)),
            (Core::L1(l), Core::S(lp, gp)) if rel == Weyl::S1 => (Rule::L1W1Semi, self.l1_w1semi(&l, &lp, &gp).twisted(w)),
            (Core::L1(l), Core::L1(lp)) if rel == Weyl::E => (Rule::L1L1, self.l1_l1(&l, &lp).twisted(w)),
            _ => return None,
        };
        Some(out)
    }
}

/// Grothendieck fusion of two classes by the closed-form rules.
pub fn groth_fuse_rule(u: i64, table: &FusionTable, a: &ModuleLabel, b: &ModuleLabel) -> Result<(Rule, GrothSum)> {
    a.validate(u)?;
    b.validate(u)?;
    if let (ModuleLabel::Bp(x), ModuleLabel::Bp(y)) = (a, b) {
        let mut s = GrothSum::new();
        for (l, n) in table.product(x, y) {
            s.add(ModuleLabel::Bp(l), n as i64);
        }
        return Ok((Rule::Bp, s));
    }
    let (wa, ga, ca) = split(a)?;
    let (wb, gb, cb) = split(b)?;
    let ctx = Ctx { u, table };
    let (rule, s) = ctx
        .dispatch(wa, ca, wb, cb)
        .or_else(|| ctx.dispatch(wb, cb, wa, ca))
        .ok_or_else(|| Error::Unsupported(format!("no closed-form rule for {a} x {b}")))?;
    if !s.all_nonnegative() {
        return Err(Error::Invariant(format!("negative multiplicity in {a} x {b}: {s}")));
    }
    Ok((rule, s.flowed(ga + gb)))
}

pub fn groth_fuse(u: i64, table: &FusionTable, a: &ModuleLabel, b: &ModuleLabel) -> Result<GrothSum> {
    Ok(groth_fuse_rule(u, table, a, b)?.1)
}

/// Product of two relaxed families by the relaxed rule, keeping all steps.
pub fn family_product(u: i64, table: &FusionTable, fa: &Family, fb: &Family) -> Vec<Family> {
    let mut out = Vec::new();
    let gamma = fa.base.gamma + fb.base.gamma;
    let mut steps = fa.steps.clone();
    steps.extend(fb.steps.iter().copied());
    for (l, n) in table.product(&fa.base.lambda, &fb.base.lambda) {
        for t in relfus_terms(u) {
            out.push(Family {
                coeff: fa.coeff * fb.coeff * t.coeff * n as i64,
                base: RelaxedLabel::new(fa.base.g + fb.base.g + t.g, l.nabla(t.k), gamma.shift(&t.delta)),
                steps: steps.clone(),
            });
        }
    }
    out
}

pub fn sum_families(u: i64, s: &GrothSum) -> Result<Vec<Family>> {
    let mut out = Vec::new();
    for (l, c) in s.iter() {
        out.extend(families(u, l)?.into_iter().map(|f| f.scaled(*c)));
    }
    Ok(out)
}

/// Kernel form of `A x B` obtained by expanding both factors into relaxed families and fusing
/// those with the relaxed rule.
pub fn derived_kernel(u: i64, table: &FusionTable, sbp: &SMatrix<Label>, a: &ModuleLabel, b: &ModuleLabel) -> Result<KernelForm> {
    let fa = families(u, a)?;
    let fb = families(u, b)?;
    let mut k = KernelForm::zero(u, sbp);
    for x in &fa {
        for y in &fb {
            for f in family_product(u, table, x, y) {
                k.add_family(sbp, &f)?;
            }
        }
    }
    Ok(k)
}

pub fn kernel_of(u: i64, sbp: &SMatrix<Label>, s: &GrothSum) -> Result<KernelForm> {
    KernelForm::from_families(u, sbp, &sum_families(u, s)?)
}

/// Outcome of checking one closed-form product.
#[derive(Clone, Debug)]
pub struct RuleCheck {
    pub rule: Rule,
    pub result: GrothSum,
    /// closed form and derived expansion agree
    pub derived: bool,
    /// `S_A S_B = S_vac sum N S_C` on kernels
    pub verlinde: bool,
    pub nonnegative: bool,
}

pub fn check_rule(u: i64, table: &FusionTable, sbp: &SMatrix<Label>, a: &ModuleLabel, b: &ModuleLabel) -> Result<RuleCheck> {
    let (rule, result) = groth_fuse_rule(u, table, a, b)?;
    let closed = kernel_of(u, sbp, &result)?;
    let derived = derived_kernel(u, table, sbp, a, b)?.same(&closed);
    let ka = kernel_of(u, sbp, &GrothSum::single(*a))?;
    let kb = kernel_of(u, sbp, &GrothSum::single(*b))?;
    let kv = kernel_of(u, sbp, &GrothSum::single(ModuleLabel::vacuum(u)))?;
    let verlinde = ka.mul(&kb).same(&kv.mul(&closed));
    let nonnegative = result.all_nonnegative();
    Ok(RuleCheck { rule, result, derived, verlinde, nonnegative })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::verlinde::bp_fusion;
    use crate::modular::bp_smatrix;
    use crate::weights::{enumerate_p, gamma_of};

    fn sample(u: i64, kind: &str, l: Label, seed: i64) -> ModuleLabel {
        let g = GammaCoset::from_root_coords(q(seed, 7), q(2 * seed + 1, 11));
        match kind {
            "R" => ModuleLabel::relaxed(Coweight::ZERO, l, g),
            "S" => ModuleLabel::semi(Weyl::E, Coweight::ZERO, l, gamma_of(u, &l, qi(0), q(seed, 13))),
            "wS" => ModuleLabel::semi(Weyl::S1, Coweight::ZERO, l, gamma_of(u, &l, qi(0), q(seed, 13))),
            "L0" => ModuleLabel::l0(l),
            "L1" => ModuleLabel::l1(l),
            _ => unreachable!(),
        }
    }

    #[test]
    fn all_rules_small() {
        let u = 5;
        let t = bp_fusion(u).unwrap();
        let sbp = bp_smatrix(u).unwrap();
        let ps = enumerate_p(u);
        let pairs = [("R", "R"), ("S", "R"), ("wS", "R"), ("S", "S"), ("wS", "S"), ("L0", "R"), ("L0", "S"), ("L0", "wS"), ("L0", "L0"), ("L0", "L1"), ("L1", "R"), ("L1", "S"), ("L1", "wS"), ("L1", "L1")];
        let mut bad = Vec::new();
        for (x, y) in pairs {
            for (i, (la, lb)) in [(ps[1], ps[4]), (ps[3], ps[2]), (ps[5], ps[5])].iter().enumerate() {
                let a = sample(u, x, *la, i as i64 + 1);
                let b = sample(u, y, *lb, i as i64 + 3);
                let c = check_rule(u, &t, &sbp, &a, &b).unwrap();
                if !(c.derived && c.verlinde && c.nonnegative) {
                    bad.push(format!("{x}x{y} {:?} derived={} verlinde={}", c.rule, c.derived, c.verlinde));
                }
            }
        }
        assert!(bad.is_empty(), "{bad:#?}");
    }
}
