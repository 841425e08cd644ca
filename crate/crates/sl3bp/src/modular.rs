//! S- and T-data: admissible sl(3), level-(u-3) WZW, Bershadsky-Polyakov, and
//! the relaxed, semirelaxed and highest-weight S-kernels.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cyclo::{CycNum, Phase};
use crate::error::{Error, Result};
use crate::weights::{
    bilinear, check_u, check_u_odd, enumerate_p, frac, gamma1, q, qi, Admissible, Coweight, FiniteWeight,
    GammaCoset, Label, Weyl, Alcove, alcove_reduce, check_atypical, Q,
};

/// `N = 12u`.
pub fn base_order(u: i64) -> u32 {
    (12 * u) as u32
}

/// `e^{2 pi i r}` in `Q(zeta_n)`; the denominator of `r` must divide `n`.
pub fn expi(n: u32, r: Q) -> CycNum {
    let k = r * qi(n as i64);
    assert!(k.is_integer(), "phase {r} does not live in order {n}");
    CycNum::root_of_unity(n, k.to_integer())
}

fn lift_order(n: u32, r: Q) -> u32 {
    (n as i64).lcm(r.denom()) as u32
}

/// `i / (sqrt3 u)` in `Q(zeta_{12u})`.
fn i_over_sqrt3_u(u: i64) -> CycNum {
    let n = base_order(u);
    let sqrt3 = CycNum::root_of_unity(n, u) + CycNum::root_of_unity(n, -u);
    let i = CycNum::root_of_unity(n, 3 * u);
    (&i * &sqrt3).scale(&BigRational::new(BigInt::one(), BigInt::from(3 * u)))
}

/// `sum_w det(w) e^{-2 pi i s <w x, y> / u}`.
fn weyl_sum(u: i64, x: &FiniteWeight, y: &FiniteWeight, s: i64) -> CycNum {
    let n = base_order(u);
    let terms = Weyl::ALL.iter().map(|w| {
        let r = -qi(s) * bilinear(&w.act(x), y) / u;
        let k = r * qi(n as i64);
        assert!(k.is_integer());
        (k.to_integer(), BigRational::from_integer(BigInt::from(w.det())))
    });
    CycNum::from_terms(n, terms)
}

/// A square matrix of cyclotomic numbers indexed by an ordered label list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SMatrix<L> {
    pub labels: Vec<L>,
    pub entries: Vec<Vec<CycNum>>,
}

impl<L: Clone + PartialEq + fmt::Display> SMatrix<L> {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn index(&self, l: &L) -> Option<usize> {
        self.labels.iter().position(|x| x == l)
    }

    pub fn get(&self, a: &L, b: &L) -> Option<&CycNum> {
        Some(&self.entries[self.index(a)?][self.index(b)?])
    }

    pub fn order(&self) -> u32 {
        self.entries[0][0].order()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// `S S^dagger`.
    pub fn gram(&self) -> Vec<Vec<CycNum>> {
        let n = self.dim();
        let conj: Vec<Vec<CycNum>> = self.entries.iter().map(|r| r.iter().map(|x| x.conj()).collect()).collect();
        let ord = self.order();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut acc = CycNum::zero(ord);
                        for k in 0..n {
                            acc += &(&self.entries[i][k] * &conj[j][k]);
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    }

    pub fn is_unitary(&self) -> bool {
        self.gram()
            .iter()
            .enumerate()
            .all(|(i, r)| r.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() }))
    }

    pub fn square(&self) -> Vec<Vec<CycNum>> {
        let n = self.dim();
        let ord = self.order();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut acc = CycNum::zero(ord);
                        for k in 0..n {
                            acc += &(&self.entries[i][k] * &self.entries[k][j]);
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    }

    /// The permutation `S^2` realises, if it is one.
    pub fn square_permutation(&self) -> Option<Vec<usize>> {
        let sq = self.square();
        sq.iter()
            .map(|row| {
                let ones: Vec<usize> = row.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, _)| j).collect();
                if ones.len() == 1 && row[ones[0]].is_one() {
                    Some(ones[0])
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn to_complex(&self) -> Vec<Vec<Complex64>> {
        self.entries.iter().map(|r| r.iter().map(|x| x.to_complex()).collect()).collect()
    }
}

/// Entry of the level-`(u-3)` WZW S-matrix for arbitrary integral weights
/// (the extension to the whole weight lattice).
pub fn wzw_entry(u: i64, l: &FiniteWeight, lp: &FiniteWeight) -> CycNum {
    let rho = FiniteWeight::rho();
    -(&i_over_sqrt3_u(u) * &weyl_sum(u, &(*l + rho), &(*lp + rho), 1))
}

pub fn wzw_smatrix(u: i64) -> Result<SMatrix<Label>> {
    check_u(u)?;
    let labels = enumerate_p(u);
    let entries = labels
        .iter()
        .map(|a| labels.iter().map(|b| wzw_entry(u, &a.finite(), &b.finite())).collect())
        .collect();
    Ok(SMatrix { labels, entries })
}

pub fn bp_entry(u: i64, l: &Label, lp: &Label) -> CycNum {
    let n = base_order(u);
    let rho = FiniteWeight::rho();
    let ph = expi(n, frac(l.j() + lp.j() - q(u, 3)));
    let s = weyl_sum(u, &(l.finite() + rho), &(lp.finite() + rho), 2);
    &(&i_over_sqrt3_u(u) * &ph) * &s
}

pub fn bp_smatrix(u: i64) -> Result<SMatrix<Label>> {
    check_u_odd(u)?;
    let labels = enumerate_p(u);
    let entries = labels
        .iter()
        .map(|a| labels.iter().map(|b| bp_entry(u, a, b)).collect())
        .collect();
    Ok(SMatrix { labels, entries })
}

/// `e^{2 pi i (Delta - c/24)}`.
pub fn bp_tmatrix(u: i64, l: &Label) -> Result<Phase> {
    let b = crate::weights::bp_weight(u, l)?;
    Ok(Phase::new(b.delta - crate::weights::c_bp(u) / 24))
}

/// Entry of the admissible S-matrix at denominator 2.
pub fn sl3_adm_entry(u: i64, mu: &Admissible, nu: &Admissible) -> CycNum {
    let n = base_order(u);
    let rho = FiniteWeight::rho();
    let (mi, mf) = (mu.mu_i() + rho, mu.mu_f());
    let (ni, nf) = (nu.mu_i() + rho, nu.mu_f());
    let r = bilinear(&mi, &nf) + bilinear(&mf, &ni) - bilinear(&mf, &nf) * q(u, 2);
    let ph = expi(n, frac(r));
    let s = weyl_sum(u, &mi, &ni, 2);
    let pref = i_over_sqrt3_u(u).scale(&BigRational::new(BigInt::from(-mu.y().det() * nu.y().det()), BigInt::from(2)));
    &(&pref * &ph) * &s
}

pub fn sl3_adm_smatrix(u: i64) -> Result<SMatrix<Admissible>> {
    let labels = crate::weights::admissible_weights(u)?;
    let entries = labels
        .iter()
        .map(|a| labels.iter().map(|b| sl3_adm_entry(u, a, b)).collect())
        .collect();
    Ok(SMatrix { labels, entries })
}

/// `e^{-2 pi i/3} e^{pi i |mu + rho|^2 2/u}`.
pub fn sl3_tmatrix(u: i64, mu: &FiniteWeight) -> Phase {
    let x = *mu + FiniteWeight::rho();
    Phase::new(q(-1, 3) + bilinear(&x, &x) / u)
}

/// `T_l` for the integrable weight `l` at level `u - 3`.
pub fn wzw_tmatrix(u: i64, l: &Label) -> Phase {
    let x = l.finite() + FiniteWeight::rho();
    Phase::new(bilinear(&x, &x) / (2 * u) - q(1, 3))
}

/// Which Galois automorphism of `Q(zeta_{12u})` to use.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum GaloisChoice {
    /// `zeta -> zeta^{3u+2}`
    #[default]
    Standard,
    /// `zeta -> zeta^{9u+2}`
    Alternate,
}

impl GaloisChoice {
    pub fn exponent(self, u: i64) -> i64 {
        match self {
            GaloisChoice::Standard => 3 * u + 2,
            GaloisChoice::Alternate => 9 * u + 2,
        }
    }
}

/// Applies `zeta_{12u} -> zeta_{12u}^{a}` to an element whose order is a multiple of `12u`
/// (extended trivially on the complementary roots when `N/12u` is coprime to `a`).
pub fn galois_apply(u: i64, x: &CycNum, choice: GaloisChoice) -> Result<CycNum> {
    let n = base_order(u);
    if !x.order().is_multiple_of(n) {
        return Err(Error::Invariant(format!("order {} is not a multiple of 12u = {}", x.order(), n)));
    }
    let a = choice.exponent(u);
    if x.order() == n {
        return Ok(x.galois(a)?);
    }
    // pick an exponent that is a mod 12u and 1 modulo the remaining part of the order
    let m = x.order() as i64;
    let rest = m / (n as i64).gcd(&m).max(1);
    let mut b = a;
    while b.rem_euclid(rest) != 1 % rest.max(1) || b.gcd(&m) != 1 {
        b += n as i64;
        if b > a + (n as i64) * m {
            return Err(Error::Invariant("no compatible Galois lift".into()));
        }
    }
    Ok(x.galois(b)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisPermutation {
    pub labels: Vec<Label>,
    pub pi: Vec<usize>,
    pub eps: Vec<i64>,
}

/// `(pi, eps)` with `sigma(S_{l,l'}) = eps(l') S_{l, pi(l')}` for the WZW S-matrix.
pub fn galois_permutation(u: i64) -> Result<GaloisPermutation> {
    check_u_odd(u)?;
    let labels = enumerate_p(u);
    let mut pi = Vec::new();
    let mut eps = Vec::new();
    for l in &labels {
        let x = l.finite().scale(qi(2)) + FiniteWeight::rho();
        match alcove_reduce(&x, u) {
            Alcove::Inside { label, det } => {
                pi.push(crate::weights::p_index(u, &label).expect("reduced label lies in P"));
                eps.push(-det);
            }
            Alcove::OnWall => return Err(Error::Invariant(format!("2 lambda' + rho on a wall for {l}"))),
        }
    }
    let mut seen = vec![false; labels.len()];
    for &p in &pi {
        if std::mem::replace(&mut seen[p], true) {
            return Err(Error::Invariant("Galois map is not a permutation".into()));
        }
    }
    Ok(GaloisPermutation { labels, pi, eps })
}

/// A row or column label `(g, lambda, [gamma])` of a spectrally flowed fully relaxed module.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RelaxedLabel {
    pub g: Coweight,
    pub lambda: Label,
    pub gamma: GammaCoset,
}

impl RelaxedLabel {
    pub fn new(g: Coweight, lambda: Label, gamma: GammaCoset) -> Self {
        RelaxedLabel { g, lambda, gamma }
    }
}

impl fmt::Display for RelaxedLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R:{}:g={}:gamma={}", self.lambda, self.g, self.gamma)
    }
}

/// `<g, g'> u/2 + <gamma, g'> + <g, gamma'>` modulo 1.
pub fn relaxed_phase(u: i64, row: &RelaxedLabel, col: &RelaxedLabel) -> Q {
    frac(row.g.pair_co(&col.g) * q(u, 2) + col.gamma.pair(&row.g) + row.gamma.pair(&col.g))
}

/// A denominator factor `1 + e^{2 pi i (<h, gamma'> + m j_{lambda'} + c)}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct DenFactor {
    pub h: Coweight,
    pub m: i64,
    pub c: Q,
}

impl DenFactor {
    pub fn exponent(&self, col: &RelaxedLabel) -> Q {
        frac(col.gamma.pair(&self.h) + qi(self.m) * col.lambda.j() + self.c)
    }

    pub fn exponent_numeric(&self, lambda: &Label, gamma: [Complex64; 2]) -> Complex64 {
        gamma[0] * self.h.g1 as f64 + gamma[1] * self.h.g2 as f64 + Complex64::from(self.m as f64 * to_f64(lambda.j()))
            + to_f64(self.c)
    }

    pub fn value(&self, col: &RelaxedLabel, n: u32) -> CycNum {
        let e = self.exponent(col);
        let n = lift_order(n, e);
        CycNum::one(n) + expi(n, e)
    }

    pub fn vanishes_at(&self, col: &RelaxedLabel) -> bool {
        self.exponent(col) == q(1, 2)
    }
}

impl fmt::Display for DenFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1 + e(<{}, gamma'> + {} j' + {})", self.h, self.m, self.c)
    }
}

pub fn to_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// One summand `numerator / prod factors` of an S-kernel entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelTerm {
    pub sign: i64,
    pub row: RelaxedLabel,
    pub factors: Vec<DenFactor>,
}

/// A kernel entry given as a signed sum of relaxed entries over denominator products,
/// evaluated at a fixed column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SKernelValue {
    pub col: RelaxedLabel,
    pub terms: Vec<KernelTerm>,
}

impl KernelTerm {
    /// The term of `sigma^g w(M)` given the term of `M`.
    pub fn twist_flow(&self, w: Weyl, g: Coweight) -> KernelTerm {
        KernelTerm {
            sign: self.sign,
            row: RelaxedLabel::new(g + w.act_co(&self.row.g), self.row.lambda, self.row.gamma.weyl(w)),
            factors: self.factors.iter().map(|f| DenFactor { h: w.act_co(&f.h), ..*f }).collect(),
        }
    }
}

impl SKernelValue {
    pub fn is_pole(&self) -> bool {
        self.terms.iter().any(|t| t.factors.iter().any(|f| f.vanishes_at(&self.col)))
    }

    /// Exact value; a vanishing denominator is reported as a pole.
    pub fn exact(&self, u: i64) -> Result<CycNum> {
        let mut acc: Option<CycNum> = None;
        for t in &self.terms {
            let mut num = relaxed_skernel(u, &t.row, &self.col);
            for f in &t.factors {
                if f.vanishes_at(&self.col) {
                    return Err(Error::Pole(format!("{f} at {}", self.col)));
                }
                let d = f.value(&self.col, base_order(u));
                let m = num.order().lcm(&d.order());
                num = num.lift_to(m)?.checked_div(&d.lift_to(m)?)?;
            }
            let num = num.scale_int(t.sign);
            acc = Some(match acc {
                None => num,
                Some(a) => {
                    let m = a.order().lcm(&num.order());
                    a.lift_to(m)? + num.lift_to(m)?
                }
            });
        }
        Ok(acc.unwrap_or_else(|| CycNum::zero(base_order(u))))
    }

    /// The numerator of the first term with all denominators cleared.
    pub fn cleared(&self, u: i64) -> CycNum {
        relaxed_skernel(u, &self.terms[0].row, &self.col)
    }

    pub fn numeric(&self, u: i64) -> Result<Complex64> {
        Ok(self.exact(u)?.to_complex())
    }
}

/// `e^{-2 pi i(<g,g'> u/2 + <gamma,g'> + <g,gamma'>)} S^BP_{lambda,lambda'}`.
pub fn relaxed_skernel(u: i64, row: &RelaxedLabel, col: &RelaxedLabel) -> CycNum {
    let r = frac(-relaxed_phase(u, row, col));
    let n = lift_order(base_order(u), r);
    let s = bp_entry(u, &row.lambda, &col.lambda).lift_to(n).expect("lift");
    &expi(n, r) * &s
}

/// The same kernel at a complex `gamma'`, given by its root coordinates.
pub fn relaxed_skernel_numeric(u: i64, row: &RelaxedLabel, g: Coweight, lambda: &Label, gamma: [Complex64; 2]) -> Complex64 {
    let pg = row.g.pair_co(&g) * q(u, 2) + row.gamma.pair(&g);
    let e = Complex64::from(to_f64(pg)) + gamma[0] * row.g.g1 as f64 + gamma[1] * row.g.g2 as f64;
    (Complex64::new(0.0, -std::f64::consts::TAU) * e).exp() * bp_entry(u, &row.lambda, lambda).to_complex()
}

fn semi_factor(u: i64, w: Weyl) -> DenFactor {
    // 1 + e^{-2 pi i(<w(w3), gamma'> + j' - u/3)}
    DenFactor { h: -w.act_co(&Coweight::omega(3)), m: -1, c: q(u, 3) }
}

/// Row data `(g, lambda, [gamma])` of `sigma^g w(S^lambda_gamma)`; `gamma` must satisfy the
/// semirelaxed constraint.
pub fn semirelaxed_skernel(u: i64, w: Weyl, row: &RelaxedLabel, col: &RelaxedLabel) -> Result<SKernelValue> {
    Ok(SKernelValue { col: *col, terms: semirelaxed_terms(u, w, row)? })
}

pub fn semirelaxed_terms(u: i64, w: Weyl, row: &RelaxedLabel) -> Result<Vec<KernelTerm>> {
    check_atypical(u, &row.lambda, &row.gamma)?;
    let twisted = RelaxedLabel { gamma: row.gamma.weyl(w), ..*row };
    Ok(vec![KernelTerm { sign: 1, row: twisted, factors: vec![semi_factor(u, w)] }])
}

/// The three factors of the `Lambda^2` kernel.
pub fn hw_factors(u: i64) -> [DenFactor; 3] {
    [
        DenFactor { h: Coweight::omega(1), m: -1, c: q(u, 3) },
        DenFactor { h: Coweight::omega(2), m: 1, c: -q(u, 3) },
        semi_factor(u, Weyl::E),
    ]
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HwVariant {
    /// `sigma^g L(Lambda^2_lambda)`
    Lambda2,
    /// `sigma^g L(Lambda^1_lambda)`
    Lambda1,
    /// `sigma^g L(lambda - u w0/2)`
    Omega0,
    /// `sigma^g L(lambda - u w1/2)`
    Omega1,
    /// `sigma^g L(lambda - u w2/2)`
    Omega2,
    /// the vacuum, `L(k w0)`; `g` and `lambda` are ignored
    Vacuum,
}

pub fn hw_skernel(u: i64, variant: HwVariant, g: Coweight, lambda: &Label, col: &RelaxedLabel) -> Result<SKernelValue> {
    Ok(SKernelValue { col: *col, terms: hw_terms(u, variant, g, lambda)? })
}

pub fn hw_terms(u: i64, variant: HwVariant, g: Coweight, lambda: &Label) -> Result<Vec<KernelTerm>> {
    check_u_odd(u)?;
    lambda.check(u)?;
    match variant {
        HwVariant::Lambda2 => {
            let row = RelaxedLabel::new(g, *lambda, gamma1(u, lambda));
            Ok(vec![KernelTerm { sign: 1, row, factors: hw_factors(u).to_vec() }])
        }
        // L(l - u w0/2) = sigma^{-w2} L(Lambda^2_l)
        HwVariant::Omega0 => hw_terms(u, HwVariant::Lambda2, g - Coweight::omega(2), lambda),
        // L(l - u w1/2) = sigma^{w3} L(Lambda^2_{nabla l})
        HwVariant::Omega1 => hw_terms(u, HwVariant::Lambda2, g + Coweight::omega(3), &lambda.nabla(1)),
        // L(l - u w2/2) = L(Lambda^2_{nabla^{-1} l})
        HwVariant::Omega2 => hw_terms(u, HwVariant::Lambda2, g, &lambda.nabla(-1)),
        HwVariant::Vacuum => hw_terms(u, HwVariant::Omega0, Coweight::ZERO, &Label::vacuum(u)),
        // L(Lambda^1_l) = w1(S^l_{gamma^2}) - sigma^{w3} L(l - u w0/2)
        HwVariant::Lambda1 => {
            let g2 = crate::weights::gamma2(u, lambda);
            let mut terms = semirelaxed_terms(u, Weyl::S1, &RelaxedLabel::new(g, *lambda, g2))?;
            for mut t in hw_terms(u, HwVariant::Omega0, g + Coweight::omega(3), lambda)? {
                t.sign = -t.sign;
                terms.push(t);
            }
            Ok(terms)
        }
    }
}

/// The closed cosine form of the vacuum kernel, evaluated numerically.
pub fn vacuum_kernel_cosine(u: i64, col: &RelaxedLabel) -> Complex64 {
    let (c1, c2) = col.gamma.root_coords();
    let j = to_f64(col.lambda.j());
    let u3 = u as f64 / 3.0;
    let g1 = to_f64(c1);
    let g2 = to_f64(c2);
    let g3 = g1 - g2;
    let tau = std::f64::consts::TAU;
    let a = (tau * (g1 - j + u3)).cos();
    let b = (tau * (g2 + j - u3)).cos();
    let c = (tau * (g3 + j - u3)).cos();
    let s = bp_entry(u, &Label::vacuum(u), &col.lambda).to_complex();
    let ph = Complex64::from_polar(1.0, -tau * (j - u3));
    ph * s / (2.0 * (1.0 + a + b + c))
}

/// `(j, conformal weight of the top)` bookkeeping shared with the character module.
pub fn vacuum_t_phase(u: i64) -> Phase {
    Phase::new(-crate::weights::c_sl3(u) / 24)
}

/// Complex matrix product check `S S^dagger = 1` with tolerance, for numeric matrices.
pub fn numeric_unitarity_defect(m: &[Vec<Complex64>]) -> f64 {
    let n = m.len();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::zero();
            for k in 0..n {
                acc += m[i][k] * m[j][k].conj();
            }
            let target = if i == j { Complex64::one() } else { Complex64::zero() };
            worst = worst.max((acc - target).norm());
        }
    }
    worst
}
