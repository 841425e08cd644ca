//! Verification suites shared by the command line and the integration tests.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use crate::characters::{bp_offset, mono, numeric_s_check, qhr_character};
use crate::cyclo::Phase;
use crate::error::{Error, Result};
use crate::fusion::rules::check_rule;
use crate::fusion::{
    bp_fusion, groth_fuse, kac_walton_table, relfus, standard_verlinde_reduce, verlinde_wzw, FusionTable, GrothSum,
    ModuleLabel, Rule,
};
use crate::io::envelope;
use crate::modular::{
    base_order, bp_entry, bp_smatrix, expi, galois_apply, galois_permutation, sl3_adm_smatrix, sl3_tmatrix, wzw_smatrix,
    GaloisChoice, RelaxedLabel, SMatrix,
};
use crate::weights::{
    admissible_weights, atypical, bilinear, c_bp, check_u, degeneration_params, enumerate_p, find_admissible, frac,
    gamma_of, q, qi, Coweight, FiniteWeight, GammaCoset, Label, Weyl, Q,
};

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {} ({:.2}s): {}", self.name, self.seconds, self.detail)
    }
}

/// Runs `f`, timing it; an error is a failed check.
pub fn timed(name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    let t = Instant::now();
    let r = f();
    let seconds = t.elapsed().as_secs_f64();
    match r {
        Ok((passed, detail)) => Check { name: name.into(), passed, detail, seconds },
        Err(e) => Check { name: name.into(), passed: false, detail: format!("error: {e}"), seconds },
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, clap::ValueEnum)]
pub enum Suite {
    All,
    Modular,
    Fusion,
    Characters,
    Galois,
    Admissible,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub order: i64,
    pub tol: f64,
    pub instances: usize,
    pub seed: u64,
    pub tau: Complex64,
    pub zetas: Vec<Complex64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            order: 15,
            tol: 1e-8,
            instances: 5,
            seed: 7,
            tau: Complex64::new(0.0, 1.0),
            zetas: vec![Complex64::new(0.1, 0.0), Complex64::new(0.23, 0.0), Complex64::new(0.1, 0.05)],
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub u: i64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        envelope(
            "verify",
            json!({
                "u": self.u,
                "passed": self.passed(),
                "checks": self.checks.iter().map(|c| json!({
                    "name": c.name,
                    "passed": c.passed,
                    "detail": c.detail,
                })).collect::<Vec<_>>(),
            }),
        )
    }
}

pub fn run_suite(u: i64, suite: Suite, opts: &VerifyOptions) -> Result<Report> {
    check_u(u)?;
    let odd = u % 2 == 1;
    let has = |s: Suite| suite == Suite::All || suite == s;
    let mut checks = Vec::new();
    if has(Suite::Modular) {
        checks.push(check_unitarity(u, "wzw"));
        if odd {
            checks.push(check_unitarity(u, "bp"));
            checks.push(check_unitarity(u, "sl3-adm"));
            checks.push(check_automorphism_identities(u));
        }
    }
    if has(Suite::Galois) && odd {
        checks.push(check_galois(u));
    }
    if has(Suite::Fusion) {
        checks.push(check_fusion_oracles(u));
        if odd {
            checks.push(check_reducer(u, opts.instances.max(3), opts.seed));
            checks.push(check_rules(u, opts.instances, opts.seed));
        }
    }
    if has(Suite::Characters) && odd {
        checks.push(check_qhr_characters(u, opts.order));
        checks.push(check_s_transform(u, opts.tau, &opts.zetas, opts.order.max(25), opts.tol));
    }
    if has(Suite::Admissible) {
        checks.push(check_counts(u));
        if odd {
            checks.push(check_degenerations(u, opts.instances, opts.seed));
        }
    }
    if checks.is_empty() {
        return Err(Error::Unsupported(format!("suite {suite:?} needs odd u")));
    }
    Ok(Report { u, checks })
}

fn smatrix_check<L: Clone + PartialEq + fmt::Display>(s: &SMatrix<L>) -> (bool, String) {
    let (un, sy) = (s.is_unitary(), s.is_symmetric());
    (un && sy, format!("{0}x{0}, unitary={un}, symmetric={sy}", s.dim()))
}

/// `S S^dagger = 1` and `S = S^T` exactly.
pub fn check_unitarity(u: i64, algebra: &str) -> Check {
    timed(&format!("unitarity {algebra} u={u}"), || match algebra {
        "wzw" => Ok(smatrix_check(&wzw_smatrix(u)?)),
        "bp" => Ok(smatrix_check(&bp_smatrix(u)?)),
        "sl3-adm" => Ok(smatrix_check(&sl3_adm_smatrix(u)?)),
        _ => Err(Error::Parse(format!("unknown algebra {algebra:?}"))),
    })
}

/// Galois relation on every pair and the permutation identity.
pub fn check_galois(u: i64) -> Check {
    timed(&format!("galois u={u}"), || {
        let w = wzw_smatrix(u)?;
        let b = bp_smatrix(u)?;
        let gp = galois_permutation(u)?;
        let n = base_order(u);
        let (mut pairs, mut bad) = (0, Vec::new());
        for (i, l) in w.labels.iter().enumerate() {
            for (k, lp) in w.labels.iter().enumerate() {
                pairs += 1;
                let g = galois_apply(u, &w.entries[i][k], GaloisChoice::Standard)?;
                if g != w.entries[i][gp.pi[k]].scale_int(gp.eps[k]) {
                    bad.push(format!("permutation ({l}, {lp})"));
                }
                if b.entries[i][k] != &expi(n, frac(l.j() + lp.j() - q(u, 3))) * &g {
                    bad.push(format!("relation ({l}, {lp})"));
                }
            }
        }
        Ok((bad.is_empty(), format!("{pairs} pairs, {} failures {bad:?}", bad.len())))
    })
}

/// BP-Verlinde = WZW-Verlinde = Kac-Walton, with ring axioms.
pub fn check_fusion_oracles(u: i64) -> Check {
    timed(&format!("fusion oracles u={u}"), || {
        let v = verlinde_wzw(u)?;
        let k = kac_walton_table(u)?;
        let mut bad = Vec::new();
        if let Some(d) = v.first_difference(&k) {
            bad.push(format!("verlinde vs kac-walton at {d:?}"));
        }
        if u % 2 == 1 {
            match bp_fusion(u) {
                Ok(b) if b == v => {}
                Ok(_) => bad.push("bp table differs".into()),
                Err(e) => bad.push(e.to_string()),
            }
        }
        let (unit, assoc, sym) = (v.vacuum_is_unit(), v.is_associative(), v.is_symmetric());
        if !(unit && assoc && sym) {
            bad.push(format!("unit={unit} associative={assoc} symmetric={sym}"));
        }
        let n = v.dim();
        Ok((bad.is_empty(), format!("{} triples, {bad:?}", n * n * n)))
    })
}

/// `nabla`, `d` shifts of the BP S-matrix and the two T-matrix identities.
pub fn check_automorphism_identities(u: i64) -> Check {
    timed(&format!("automorphism identities u={u}"), || {
        let n = base_order(u);
        let ps = enumerate_p(u);
        let mut bad = Vec::new();
        for l in &ps {
            for lp in &ps {
                let s = bp_entry(u, l, lp);
                for m in -2..=2 {
                    let ph = expi(n, frac(-qi(m) * (lp.j() - q(u, 3))));
                    if bp_entry(u, &l.nabla(m), lp) != &ph * &s {
                        bad.push(format!("nabla^{m} ({l}, {lp})"));
                    }
                }
                let ph = expi(n, frac(l.j() + lp.j()));
                if bp_entry(u, &l.dynkin(), &lp.dynkin()) != &ph * &s {
                    bad.push(format!("d ({l}, {lp})"));
                }
            }
        }
        let adm = admissible_weights(u)?;
        for nu in &adm {
            let f = nu.weight.finite();
            let t = sl3_tmatrix(u, &f);
            let a3 = f.dynkin_label(3);
            if sl3_tmatrix(u, &nu.weight.reflect_shifted(0).finite()) != t + Phase::new(q(u, 2) - a3) {
                bad.push(format!("T s0 {nu}"));
            }
            let w1 = bilinear(&f, &FiniteWeight::omega(1));
            if sl3_tmatrix(u, &nu.weight.nabla(1).finite()) != t + Phase::new(q(u, 6) - w1) {
                bad.push(format!("T nabla {nu}"));
            }
        }
        let detail = format!("{} S pairs x 6 identities, {} T weights x 2, failures {bad:?}", ps.len() * ps.len(), adm.len());
        Ok((bad.is_empty(), detail))
    })
}

/// Positivity, top spaces and offsets of the reduced characters.
pub fn check_qhr_characters(u: i64, order: i64) -> Check {
    timed(&format!("qhr characters u={u} order={order}"), || {
        let mut bad = Vec::new();
        let ps = enumerate_p(u);
        for l in &ps {
            let ch = qhr_character(u, l, order)?;
            if u == 3 {
                if ch != crate::characters::QSeries::one(1, order) {
                    bad.push(format!("{l}: not identically 1"));
                }
                continue;
            }
            if !ch.all_nonnegative() {
                bad.push(format!("{l}: negative coefficient"));
            }
            if ch.offset() != bp_offset(u, l) || ch.offset() != l.delta(u) - c_bp(u) / 24 {
                bad.push(format!("{l}: offset {}", ch.offset()));
            }
            let top = ch.layer(0);
            let want = l.0[2] + 1;
            let charges_ok = (0..want).all(|r| top.coeff(&mono(l.j() - qi(r), Q::from(0))) == 1);
            if top.len() as i64 != want || !charges_ok {
                bad.push(format!("{l}: top {top:?}"));
            }
        }
        Ok((bad.is_empty(), format!("{} characters, failures {bad:?}", ps.len())))
    })
}

/// Ratio form of the S-transform at the given points.
pub fn check_s_transform(u: i64, tau: Complex64, zetas: &[Complex64], order: i64, tol: f64) -> Check {
    timed(&format!("s-transform u={u} order={order}"), || {
        let mut worst: f64 = 0.0;
        for z in zetas {
            worst = worst.max(numeric_s_check(u, *z, tau, order, tol)?.max_rel_error);
        }
        Ok((worst < tol, format!("tau={tau}, {} points, max relative error {worst:.3e} (tol {tol:.0e})", zetas.len())))
    })
}

fn random_gamma(rng: &mut StdRng) -> GammaCoset {
    let mut r = || q(rng.gen_range(0..60), rng.gen_range(2..14));
    GammaCoset::from_root_coords(r(), r())
}

fn random_coweight(rng: &mut StdRng) -> Coweight {
    Coweight::new(rng.gen_range(-2..=2), rng.gen_range(-2..=2))
}

fn random_label(rng: &mut StdRng, ps: &[Label]) -> Label {
    ps[rng.gen_range(0..ps.len())]
}

/// Symbolic Verlinde reduction against the closed relaxed rule, term by term.
pub fn check_reducer(u: i64, instances: usize, seed: u64) -> Check {
    timed(&format!("verlinde reduction u={u} x{instances}"), || {
        let t = bp_fusion(u)?;
        let ps = enumerate_p(u);
        let mut rng = StdRng::seed_from_u64(seed);
        let mut bad = Vec::new();
        let mut terms = 0;
        for _ in 0..instances {
            let a = RelaxedLabel::new(random_coweight(&mut rng), random_label(&mut rng, &ps), random_gamma(&mut rng));
            let b = RelaxedLabel::new(random_coweight(&mut rng), random_label(&mut rng, &ps), random_gamma(&mut rng));
            let la = ModuleLabel::relaxed(a.g, a.lambda, a.gamma);
            let lb = ModuleLabel::relaxed(b.g, b.lambda, b.gamma);
            let got = standard_verlinde_reduce(u, &t, &la, &lb)?;
            let want = relfus(u, &t, &a, &b);
            let prod = t.product(&a.lambda, &b.lambda);
            terms += got.len();
            let doubled = prod.iter().all(|(nu, n)| {
                got.coeff(&ModuleLabel::relaxed(a.g + b.g, nu.nabla(-1), a.gamma + b.gamma)) == 2 * *n as i64
            });
            if got != want || got.len() != 7 * prod.len() || !doubled {
                bad.push(format!("{la} x {lb}"));
            }
        }
        Ok((bad.is_empty(), format!("{instances} instances, {terms} classes, failures {bad:?}")))
    })
}

fn sample(u: i64, rng: &mut StdRng, kind: &str, l: Label) -> ModuleLabel {
    let g = random_coweight(rng);
    let nu = q(rng.gen_range(1..40), rng.gen_range(2..15));
    match kind {
        "R" => ModuleLabel::relaxed(g, l, random_gamma(rng)),
        "S" => ModuleLabel::semi(Weyl::E, g, l, gamma_of(u, &l, qi(0), nu)),
        "wS" => ModuleLabel::semi(Weyl::S1, g, l, gamma_of(u, &l, qi(0), nu)),
        "L0" => ModuleLabel::l0(l).flowed(g),
        "L1" => ModuleLabel::l1(l).flowed(g),
        _ => unreachable!("sample kind"),
    }
}

const PAIRS: [(&str, &str); 14] = [
    ("R", "R"),
    ("S", "R"),
    ("wS", "R"),
    ("S", "S"),
    ("wS", "S"),
    ("L0", "R"),
    ("L0", "S"),
    ("L0", "wS"),
    ("L0", "L0"),
    ("L0", "L1"),
    ("L1", "R"),
    ("L1", "S"),
    ("L1", "wS"),
    ("L1", "L1"),
];

fn equivariant(u: i64, t: &FusionTable, a: &ModuleLabel, b: &ModuleLabel, res: &GrothSum, rng: &mut StdRng) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    let (h, h2) = (random_coweight(rng), random_coweight(rng));
    if groth_fuse(u, t, &a.flowed(h), &b.flowed(h2))? != res.flowed(h + h2) {
        bad.push(format!("flow {h} {h2}"));
    }
    let w = Weyl::ALL[rng.gen_range(0..6)];
    if groth_fuse(u, t, &a.twisted(w), &b.twisted(w))? != res.twisted(w) {
        bad.push(format!("twist {w}"));
    }
    let hw = |x: &ModuleLabel| matches!(x, ModuleLabel::HighestWeight { .. });
    if hw(a) && hw(b) && groth_fuse(u, t, &a.dynkin()?, &b.dynkin()?)? != res.try_map(ModuleLabel::dynkin)? {
        bad.push("conjugation".into());
    }
    Ok(bad)
}

/// Every closed-form rule against the expansion path and the kernel Verlinde identity.
pub fn check_rules(u: i64, instances: usize, seed: u64) -> Check {
    timed(&format!("grothendieck rules u={u} x{instances}"), || {
        let t = bp_fusion(u)?;
        let sbp = bp_smatrix(u)?;
        let ps = enumerate_p(u);
        let mut rng = StdRng::seed_from_u64(seed);
        let mut seen: BTreeMap<Rule, usize> = BTreeMap::new();
        let mut bad = Vec::new();
        for (x, y) in PAIRS {
            for _ in 0..instances {
                let (la, lb) = (random_label(&mut rng, &ps), random_label(&mut rng, &ps));
                let a = sample(u, &mut rng, x, la);
                let b = sample(u, &mut rng, y, lb);
                let c = check_rule(u, &t, &sbp, &a, &b)?;
                *seen.entry(c.rule).or_default() += 1;
                if !(c.derived && c.verlinde && c.nonnegative) {
                    bad.push(format!("{a} x {b}: derived={} verlinde={} nonneg={}", c.derived, c.verlinde, c.nonnegative));
                }
                for e in equivariant(u, &t, &a, &b, &c.result, &mut rng)? {
                    bad.push(format!("{a} x {b}: {e}"));
                }
            }
        }
        let missing: Vec<_> = Rule::GROTHENDIECK.iter().filter(|r| seen.get(r).copied().unwrap_or(0) < instances).collect();
        if !missing.is_empty() {
            bad.push(format!("rules with too few instances: {missing:?}"));
        }
        Ok((bad.is_empty(), format!("rule counts {seen:?}, failures {bad:?}")))
    })
}

/// `|P| = (u-1)(u-2)/2`, `2(u-1)(u-2)` distinct admissible weights.
pub fn check_counts(u: i64) -> Check {
    timed(&format!("counts u={u}"), || {
        let p = enumerate_p(u).len() as i64;
        let pd = p == (u - 1) * (u - 2) / 2;
        if u % 2 == 0 {
            return Ok((pd, format!("|P| = {p}")));
        }
        let adm = admissible_weights(u)?;
        let distinct = adm.iter().map(|a| a.weight).collect::<HashSet<_>>().len() == adm.len();
        let ad = adm.len() as i64 == 2 * (u - 1) * (u - 2);
        Ok((pd && ad && distinct, format!("|P| = {p}, admissible = {}, distinct = {distinct}", adm.len())))
    })
}

/// `t1 - t2 = u/2 mod 1`, `Lambda^i` admissible, atypicality of `gamma(lambda, 0, nu)`.
pub fn check_degenerations(u: i64, instances: usize, seed: u64) -> Check {
    timed(&format!("degenerations u={u}"), || {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut bad = Vec::new();
        let ps = enumerate_p(u);
        for l in &ps {
            let d = degeneration_params(u, l)?;
            if frac(d.t1 - d.t2) != frac(q(u, 2)) {
                bad.push(format!("{l}: t1 - t2 = {}", d.t1 - d.t2));
            }
            for big in [d.big_lambda1, d.big_lambda2] {
                if find_admissible(u, &big.weight).is_err() {
                    bad.push(format!("{l}: {big} not admissible"));
                }
            }
            if gamma_of(u, l, qi(0), d.t1) != d.gamma1 || gamma_of(u, l, qi(0), d.t2) != d.gamma2 {
                bad.push(format!("{l}: degenerate cosets"));
            }
            for _ in 0..instances {
                let nu = q(rng.gen_range(-50..50), rng.gen_range(1..20));
                if !atypical(u, l, &gamma_of(u, l, qi(0), nu)) {
                    bad.push(format!("{l}: nu = {nu} not atypical"));
                }
            }
        }
        Ok((bad.is_empty(), format!("{} labels, failures {bad:?}", ps.len())))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites() {
        let opts = VerifyOptions { instances: 2, ..VerifyOptions::default() };
        for u in [3, 4, 5] {
            let r = run_suite(u, Suite::All, &opts).unwrap();
            assert!(r.passed(), "{:#?}", r.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
        }
    }
}
