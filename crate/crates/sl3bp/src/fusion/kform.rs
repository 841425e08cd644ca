//! Exact S-kernel forms of (infinite) sums of relaxed classes.
//!
//! Against a column `(G, Lambda, Gamma)` the kernel of `sigma^g R^lambda_gamma` is
//! `e^{-2 pi i <gamma + u g/2, G>} X^{-g1} Y^{-g2} S^BP_{lambda Lambda}` with
//! `X = e^{2 pi i <w1^v, Gamma>}`, `Y = e^{2 pi i <w2^v, Gamma>}`.  A family of relaxed classes
//! sums to a rational function of `X, Y`; a [`KernelForm`] stores one rational function per coset
//! `[gamma + u g/2]` and per `Lambda`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::modular::{base_order, expi, KernelTerm, RelaxedLabel, SMatrix};
use crate::weights::{frac, q, qi, Coweight, GammaCoset, Label, Q};

/// Laurent polynomial in `X, Y` with cyclotomic coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly(BTreeMap<(i64, i64), CycNum>);

impl Poly {
    pub fn monomial(c: CycNum, a: i64, b: i64) -> Self {
        let mut p = Poly::default();
        p.push(a, b, c);
        p
    }

    fn push(&mut self, a: i64, b: i64, c: CycNum) {
        if c.is_zero() {
            return;
        }
        match self.0.get_mut(&(a, b)) {
            Some(x) => {
                *x += &c;
                if x.is_zero() {
                    self.0.remove(&(a, b));
                }
            }
            None => {
                self.0.insert((a, b), c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &CycNum)> {
        self.0.iter()
    }

    pub fn scale(&self, c: &CycNum) -> Poly {
        let mut p = Poly::default();
        for (k, v) in &self.0 {
            p.push(k.0, k.1, v * c);
        }
        p
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut p = self.clone();
        for (k, v) in &o.0 {
            p.push(k.0, k.1, v.clone());
        }
        p
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly(self.0.iter().map(|(k, v)| (*k, -v)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut p = Poly::default();
        for (k1, v1) in &self.0 {
            for (k2, v2) in &o.0 {
                p.push(k1.0 + k2.0, k1.1 + k2.1, v1 * v2);
            }
        }
        p
    }
}

/// `1 - e^{2 pi i p} X^a Y^b` with `(a, b)` lexicographically positive.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Factor {
    pub p: Q,
    pub a: i64,
    pub b: i64,
}

impl Factor {
    fn poly(&self, n: u32) -> Poly {
        let mut p = Poly::monomial(CycNum::one(n), 0, 0);
        p.push(self.a, self.b, -expi(n, self.p));
        p
    }
}

/// A numerator over a product of [`Factor`]s.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFunc {
    n: u32,
    pub num: Poly,
    pub den: BTreeMap<Factor, u32>,
}

impl RatFunc {
    pub fn zero(n: u32) -> Self {
        RatFunc { n, num: Poly::default(), den: BTreeMap::new() }
    }

    pub fn monomial(c: CycNum, a: i64, b: i64) -> Self {
        RatFunc { n: c.order(), num: Poly::monomial(c, a, b), den: BTreeMap::new() }
    }

    /// Divides by `1 - e^{2 pi i p} X^a Y^b`.
    pub fn div_factor(&self, p: Q, a: i64, b: i64) -> Result<Self> {
        let p = frac(p);
        let mut r = self.clone();
        if (a, b) == (0, 0) {
            if p == qi(0) {
                return Err(Error::Pole("constant factor 1 - 1".into()));
            }
            let d = CycNum::one(self.n) - expi(self.n, p);
            r.num = r.num.scale(&d.inv()?);
            return Ok(r);
        }
        let f = if (a, b) > (0, 0) {
            Factor { p, a, b }
        } else {
            // 1/(1 - c X^a Y^b) = -c^{-1} X^{-a} Y^{-b} / (1 - c^{-1} X^{-a} Y^{-b})
            r.num = &r.num * &Poly::monomial(-expi(self.n, -p), -a, -b);
            Factor { p: frac(-p), a: -a, b: -b }
        };
        *r.den.entry(f).or_default() += 1;
        Ok(r)
    }

    fn with_den(&self, den: &BTreeMap<Factor, u32>) -> Poly {
        let mut num = self.num.clone();
        for (f, k) in den {
            let have = self.den.get(f).copied().unwrap_or(0);
            for _ in have..*k {
                num = &num * &f.poly(self.n);
            }
        }
        num
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let mut den = self.den.clone();
        for (f, k) in &o.den {
            let e = den.entry(*f).or_default();
            *e = (*e).max(*k);
        }
        let num = &self.with_den(&den) + &o.with_den(&den);
        RatFunc { n: self.n, num, den }
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { n: self.n, num: -&self.num, den: self.den.clone() }
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        let mut den = self.den.clone();
        for (f, k) in &o.den {
            *den.entry(*f).or_default() += k;
        }
        RatFunc { n: self.n, num: &self.num * &o.num, den }
    }
}

/// One step of a relaxed family: `g += h`, `lambda -> nabla^m lambda`, `gamma -= u h/2`,
/// with sign `-1` per step when alternating.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Step {
    pub h: Coweight,
    pub m: i64,
    pub alternating: bool,
}

/// `coeff * sum_{n in N^steps} (+-) [sigma^{g + n.h} R^{nabla^{n.m} lambda}_{gamma - u n.h/2}]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Family {
    pub coeff: i64,
    pub base: RelaxedLabel,
    pub steps: Vec<Step>,
}

fn shift_gamma(u: i64, gamma: &GammaCoset, h: &Coweight, s: Q) -> GammaCoset {
    gamma.shift(&h.as_weight().scale(s * q(u, 2)))
}

impl Family {
    pub fn relaxed(base: RelaxedLabel) -> Self {
        Family { coeff: 1, base, steps: vec![] }
    }

    /// The family of `sigma^g v(F)`.
    pub fn twist_flow(&self, v: crate::weights::Weyl, g: Coweight) -> Self {
        Family {
            coeff: self.coeff,
            base: RelaxedLabel::new(g + v.act_co(&self.base.g), self.base.lambda, self.base.gamma.weyl(v)),
            steps: self.steps.iter().map(|s| Step { h: v.act_co(&s.h), ..*s }).collect(),
        }
    }

    pub fn scaled(&self, c: i64) -> Self {
        Family { coeff: self.coeff * c, ..self.clone() }
    }

    /// The member with step counts `n`.
    pub fn term(&self, u: i64, n: &[u64]) -> (i64, RelaxedLabel) {
        let mut sign = self.coeff;
        let mut g = self.base.g;
        let mut m = 0;
        for (s, &k) in self.steps.iter().zip(n) {
            if s.alternating && k % 2 == 1 {
                sign = -sign;
            }
            g = g + s.h.scale(k as i64);
            m += s.m * k as i64;
        }
        let dg = g - self.base.g;
        let gamma = shift_gamma(u, &self.base.gamma, &dg, qi(-1));
        (sign, RelaxedLabel::new(g, self.base.lambda.nabla(m), gamma))
    }

    /// `[gamma + u g/2]`, constant along the family.
    pub fn key(&self, u: i64) -> GammaCoset {
        shift_gamma(u, &self.base.gamma, &self.base.g, qi(1))
    }
}

/// Kernel of a relaxed label against every `Lambda`, as rational functions of `X, Y`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KernelForm {
    u: i64,
    labels: Vec<Label>,
    map: BTreeMap<GammaCoset, Vec<RatFunc>>,
}

impl KernelForm {
    pub fn zero(u: i64, sbp: &SMatrix<Label>) -> Self {
        KernelForm { u, labels: sbp.labels.clone(), map: BTreeMap::new() }
    }

    fn n(&self) -> u32 {
        base_order(self.u)
    }

    fn add_row(&mut self, key: GammaCoset, row: Vec<RatFunc>) {
        match self.map.get_mut(&key) {
            Some(r) => {
                for (a, b) in r.iter_mut().zip(&row) {
                    *a = &*a + b;
                }
            }
            None => {
                self.map.insert(key, row);
            }
        }
        if self.map[&key].iter().all(RatFunc::is_zero) {
            self.map.remove(&key);
        }
    }

    fn base_row(&self, sbp: &SMatrix<Label>, coeff: i64, row: &RelaxedLabel) -> Result<Vec<RatFunc>> {
        let i = sbp.index(&row.lambda).ok_or_else(|| Error::NotInAlcove(row.lambda.to_string(), self.u - 3))?;
        Ok(sbp.entries[i].iter().map(|s| RatFunc::monomial(s.scale_int(coeff), -row.g.g1, -row.g.g2)).collect())
    }

    pub fn add_family(&mut self, sbp: &SMatrix<Label>, f: &Family) -> Result<()> {
        let mut row = self.base_row(sbp, f.coeff, &f.base)?;
        let u3 = q(self.u, 3);
        for (k, r) in row.iter_mut().enumerate() {
            let j = self.labels[k].j();
            for s in &f.steps {
                let p = -qi(s.m) * (j - u3) + if s.alternating { q(1, 2) } else { qi(0) };
                *r = r.div_factor(p, -s.h.g1, -s.h.g2)?;
            }
        }
        self.add_row(f.key(self.u), row);
        Ok(())
    }

    /// Adds a kernel term `sign * relaxed(row) / prod (1 + e^{2 pi i (<h, Gamma> + m j + c)})`.
    pub fn add_term(&mut self, sbp: &SMatrix<Label>, t: &KernelTerm) -> Result<()> {
        let mut row = self.base_row(sbp, t.sign, &t.row)?;
        for (k, r) in row.iter_mut().enumerate() {
            let j = self.labels[k].j();
            for d in &t.factors {
                *r = r.div_factor(qi(d.m) * j + d.c + q(1, 2), d.h.g1, d.h.g2)?;
            }
        }
        let key = shift_gamma(self.u, &t.row.gamma, &t.row.g, qi(1));
        self.add_row(key, row);
        Ok(())
    }

    pub fn from_families(u: i64, sbp: &SMatrix<Label>, fs: &[Family]) -> Result<Self> {
        let mut k = KernelForm::zero(u, sbp);
        for f in fs {
            k.add_family(sbp, f)?;
        }
        Ok(k)
    }

    pub fn from_terms(u: i64, sbp: &SMatrix<Label>, ts: &[KernelTerm]) -> Result<Self> {
        let mut k = KernelForm::zero(u, sbp);
        for t in ts {
            k.add_term(sbp, t)?;
        }
        Ok(k)
    }

    pub fn is_zero(&self) -> bool {
        self.map.is_empty()
    }

    pub fn sub(&self, o: &KernelForm) -> KernelForm {
        let mut r = self.clone();
        for (k, row) in &o.map {
            r.add_row(*k, row.iter().map(|x| -x).collect());
        }
        r
    }

    pub fn same(&self, o: &KernelForm) -> bool {
        self.sub(o).is_zero()
    }

    /// Pointwise product; cosets add.
    pub fn mul(&self, o: &KernelForm) -> KernelForm {
        let mut r = KernelForm { u: self.u, labels: self.labels.clone(), map: BTreeMap::new() };
        for (k1, r1) in &self.map {
            for (k2, r2) in &o.map {
                r.add_row(*k1 + *k2, r1.iter().zip(r2).map(|(a, b)| a * b).collect());
            }
        }
        r
    }

    pub fn keys(&self) -> impl Iterator<Item = &GammaCoset> {
        self.map.keys()
    }

    pub fn zero_like(&self) -> KernelForm {
        KernelForm { u: self.u, labels: self.labels.clone(), map: BTreeMap::new() }
    }

    pub fn n_order(&self) -> u32 {
        self.n()
    }
}
