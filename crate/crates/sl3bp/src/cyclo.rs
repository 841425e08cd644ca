//! Exact arithmetic in cyclotomic fields `Q(z)` with `z = exp(2 pi i / N)`.
//!
//! Elements are kept in the canonical power basis `1, z, ..., z^(phi(N)-1)`,
//! i.e. reduced modulo the `N`-th cyclotomic polynomial, with a single
//! positive common denominator.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycError {
    #[error("cyclotomic orders differ ({0} vs {1}); lift to a common order first")]
    OrderMismatch(u32, u32),
    #[error("division by zero in Q(zeta_{0})")]
    DivisionByZero(u32),
    #[error("exponent {exp} is not a unit modulo {order}")]
    NotAUnit { exp: i64, order: u32 },
    #[error("order {from} does not divide {to}")]
    NotADivisor { from: u32, to: u32 },
    #[error("invalid cyclotomic order {0}")]
    BadOrder(u32),
}

struct Table {
    phi: usize,
    // red[m] = z^m mod Phi_N, for 0 <= m < N
    red: Vec<Vec<i64>>,
}

fn cyclo_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<i64>>>> {
    static C: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

fn table_cache() -> &'static Mutex<HashMap<u32, Arc<Table>>> {
    static C: OnceLock<Mutex<HashMap<u32, Arc<Table>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (constant term first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    if let Some(p) = cyclo_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let q = cyclotomic_polynomial(d);
            p = exact_div_monic(&p, &q);
        }
    }
    let p = Arc::new(p);
    cyclo_cache().lock().unwrap().insert(n, p.clone());
    p
}

fn exact_div_monic(a: &[i64], b: &[i64]) -> Vec<i64> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let da = r.len() - 1;
    let mut q = vec![0i64; da - db + 1];
    for i in (0..=da - db).rev() {
        let c = r[i + db];
        q[i] = c;
        if c != 0 {
            for (j, bj) in b.iter().enumerate() {
                r[i + j] -= c * bj;
            }
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0), "inexact cyclotomic division");
    q
}

fn table(n: u32) -> Arc<Table> {
    if let Some(t) = table_cache().lock().unwrap().get(&n) {
        return t.clone();
    }
    let phi_poly = cyclotomic_polynomial(n);
    let phi = phi_poly.len() - 1;
    let mut red = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..n {
        red.push(cur.clone());
        let top = cur[phi - 1];
        let mut next = vec![0i64; phi];
        next[1..phi].copy_from_slice(&cur[..phi - 1]);
        if top != 0 {
            for i in 0..phi {
                next[i] -= top * phi_poly[i];
            }
        }
        cur = next;
    }
    let t = Arc::new(Table { phi, red });
    table_cache().lock().unwrap().insert(n, t.clone());
    t
}

/// Euler's totient of `n`, i.e. the dimension of `Q(zeta_n)` over `Q`.
pub fn totient(n: u32) -> usize {
    table(n).phi
}

/// An element of `Q(zeta_N)` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    order: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycNum {
    pub fn zero(order: u32) -> Self {
        let phi = totient(order);
        CycNum { order, num: vec![BigInt::zero(); phi], den: BigInt::one() }
    }

    pub fn one(order: u32) -> Self {
        Self::from_int(order, 1)
    }

    pub fn from_int(order: u32, k: i64) -> Self {
        let mut z = Self::zero(order);
        z.num[0] = BigInt::from(k);
        z.normalize();
        z
    }

    pub fn from_rational(order: u32, q: &BigRational) -> Self {
        let mut z = Self::zero(order);
        z.num[0] = q.numer().clone();
        z.den = q.denom().clone();
        z.normalize();
        z
    }

    pub fn from_ratio(order: u32, q: Ratio<i64>) -> Self {
        Self::from_rational(order, &BigRational::new((*q.numer()).into(), (*q.denom()).into()))
    }

    /// `zeta_N^k`, with `k` reduced modulo `N`.
    pub fn root_of_unity(order: u32, k: i64) -> Self {
        let t = table(order);
        let m = k.rem_euclid(order as i64) as usize;
        CycNum {
            order,
            num: t.red[m].iter().map(|&c| BigInt::from(c)).collect(),
            den: BigInt::one(),
        }
    }

    /// Builds `sum_k c_k zeta^k` from arbitrary exponents.
    pub fn from_terms<I>(order: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, BigRational)>,
    {
        let t = table(order);
        let mut acc = vec![BigRational::zero(); t.phi];
        for (k, c) in terms {
            if c.is_zero() {
                continue;
            }
            let m = k.rem_euclid(order as i64) as usize;
            for (i, &r) in t.red[m].iter().enumerate() {
                if r != 0 {
                    acc[i] += &c * BigInt::from(r);
                }
            }
        }
        Self::from_rational_coeffs(order, &acc)
    }

    /// Dense coefficients `c_k` of `sum c_k zeta^k` (any length, read modulo `N`).
    pub fn from_dense(order: u32, coeffs: &[BigRational]) -> Self {
        Self::from_terms(order, coeffs.iter().enumerate().map(|(k, c)| (k as i64, c.clone())))
    }

    fn from_rational_coeffs(order: u32, acc: &[BigRational]) -> Self {
        let mut den = BigInt::one();
        for c in acc {
            den = den.lcm(c.denom());
        }
        let num = acc.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        let mut z = CycNum { order, num, den };
        z.normalize();
        z
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -self.den.clone();
            for c in self.num.iter_mut() {
                *c = -c.clone();
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if self.num.iter().all(|c| c.is_zero()) {
            self.den = BigInt::one();
            return;
        }
        if !g.is_one() {
            self.den = &self.den / &g;
            for c in self.num.iter_mut() {
                *c = &*c / &g;
            }
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Canonical coefficients in the basis `1, zeta, ..., zeta^(phi-1)`.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num.iter().map(|c| BigRational::new(c.clone(), self.den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    /// The value as a machine integer, if it is one.
    pub fn as_integer(&self) -> Option<i64> {
        if self.is_rational() && self.den.is_one() {
            self.num[0].to_i64()
        } else {
            None
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, CycError> {
        self.same_order(o)?;
        let num = self
            .num
            .iter()
            .zip(&o.num)
            .map(|(a, b)| a * &o.den + b * &self.den)
            .collect();
        let mut z = CycNum { order: self.order, num, den: &self.den * &o.den };
        z.normalize();
        Ok(z)
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self, CycError> {
        self.checked_add(&-o)
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, CycError> {
        self.same_order(o)?;
        let t = table(self.order);
        let phi = t.phi;
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero(self.order));
        }
        let mut prod = vec![BigInt::zero(); 2 * phi - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut num: Vec<BigInt> = prod[..phi].to_vec();
        for (m, c) in prod.iter().enumerate().skip(phi) {
            if c.is_zero() {
                continue;
            }
            let r = &t.red[m % self.order as usize];
            for (i, &ri) in r.iter().enumerate() {
                if ri != 0 {
                    num[i] += c * ri;
                }
            }
        }
        let mut z = CycNum { order: self.order, num, den: &self.den * &o.den };
        z.normalize();
        Ok(z)
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, CycError> {
        self.checked_mul(&o.inv()?)
    }

    fn same_order(&self, o: &Self) -> Result<(), CycError> {
        if self.order == o.order {
            Ok(())
        } else {
            Err(CycError::OrderMismatch(self.order, o.order))
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let mut z = CycNum {
            order: self.order,
            num: self.num.iter().map(|c| c * q.numer()).collect(),
            den: &self.den * q.denom(),
        };
        z.normalize();
        z
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&BigRational::from_integer(k.into()))
    }

    fn substitute(&self, f: impl Fn(usize) -> usize, target: u32) -> Self {
        let t = table(target);
        let mut num = vec![BigInt::zero(); t.phi];
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, &r) in t.red[f(k) % target as usize].iter().enumerate() {
                if r != 0 {
                    num[i] += c * r;
                }
            }
        }
        let mut z = CycNum { order: target, num, den: self.den.clone() };
        z.normalize();
        z
    }

    /// Complex conjugation, `zeta^k -> zeta^(-k)`.
    pub fn conj(&self) -> Self {
        let n = self.order as usize;
        self.substitute(|k| (n - k % n) % n, self.order)
    }

    /// The field automorphism `zeta -> zeta^a` (`a` must be a unit mod `N`).
    pub fn galois(&self, a: i64) -> Result<Self, CycError> {
        let n = self.order as i64;
        if a.gcd(&n) != 1 {
            return Err(CycError::NotAUnit { exp: a, order: self.order });
        }
        let a = a.rem_euclid(n) as usize;
        Ok(self.substitute(|k| k * a, self.order))
    }

    /// Re-expresses the element in `Q(zeta_M)`, `N | M`.
    pub fn lift_to(&self, target: u32) -> Result<Self, CycError> {
        if target == 0 || !target.is_multiple_of(self.order) {
            return Err(CycError::NotADivisor { from: self.order, to: target });
        }
        if target == self.order {
            return Ok(self.clone());
        }
        let s = (target / self.order) as usize;
        Ok(self.substitute(|k| k * s, target))
    }

    /// Multiplicative inverse via a linear solve over `Q` in the power basis.
    pub fn inv(&self) -> Result<Self, CycError> {
        if self.is_zero() {
            return Err(CycError::DivisionByZero(self.order));
        }
        let phi = self.num.len();
        // columns: self * zeta^j
        let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); phi + 1]; phi];
        for j in 0..phi {
            let col = self.checked_mul(&Self::root_of_unity(self.order, j as i64))?;
            for (i, c) in col.coeffs().into_iter().enumerate() {
                m[i][j] = c;
            }
        }
        m[0][phi] = BigRational::one();
        for col in 0..phi {
            let piv = (col..phi).find(|&r| !m[r][col].is_zero()).ok_or(CycError::DivisionByZero(self.order))?;
            m.swap(col, piv);
            let p = m[col][col].clone();
            for x in m[col].iter_mut() {
                *x = &*x / &p;
            }
            let pivot_row = m[col].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != col && !row[col].is_zero() {
                    let f = row[col].clone();
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        *x -= &f * y;
                    }
                }
            }
        }
        let sol: Vec<BigRational> = m.iter().map(|r| r[phi].clone()).collect();
        Ok(Self::from_rational_coeffs(self.order, &sol))
    }

    pub fn pow(&self, e: i64) -> Result<Self, CycError> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = self.order as f64;
        let d = self.den.to_f64().unwrap_or(f64::INFINITY);
        let mut z = Complex64::new(0.0, 0.0);
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let x = c.to_f64().unwrap_or(f64::NAN) / d;
            z += Complex64::from_polar(x, std::f64::consts::TAU * k as f64 / n);
        }
        z
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "cyclotomic_order": self.order,
            "coeffs": self.coeffs().iter().map(fmt_rational).collect::<Vec<_>>(),
        })
    }
}

/// Lifts two elements to `Q(zeta_lcm)`.
pub fn lift_common(a: &CycNum, b: &CycNum) -> (CycNum, CycNum) {
    let m = a.order.lcm(&b.order);
    (a.lift_to(m).unwrap(), b.lift_to(m).unwrap())
}

pub fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "{}", fmt_rational(c))?;
            } else {
                write!(f, "{}*z^{}", fmt_rational(c), k)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&CycNum> for &CycNum {
            type Output = CycNum;
            fn $m(self, o: &CycNum) -> CycNum {
                self.$checked(o).expect("cyclotomic order mismatch")
            }
        }
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, o: CycNum) -> CycNum {
                (&self).$checked(&o).expect("cyclotomic order mismatch")
            }
        }
        impl $tr<&CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, o: &CycNum) -> CycNum {
                (&self).$checked(o).expect("cyclotomic order mismatch")
            }
        }
    };
}
binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, o: &CycNum) {
        *self = &*self + o;
    }
}
impl SubAssign<&CycNum> for CycNum {
    fn sub_assign(&mut self, o: &CycNum) {
        *self = &*self - o;
    }
}
impl MulAssign<&CycNum> for CycNum {
    fn mul_assign(&mut self, o: &CycNum) {
        *self = &*self * o;
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum { order: self.order, num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}
impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

/// A root of unity `e^(2 pi i r)` stored as `r mod 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase(Ratio<i64>);

impl Phase {
    pub fn new(r: Ratio<i64>) -> Self {
        let f = r - r.floor();
        Phase(f)
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Self::new(Ratio::new(n, d))
    }

    pub fn zero() -> Self {
        Phase(Ratio::from_integer(0))
    }

    pub fn value(&self) -> Ratio<i64> {
        self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0 == Ratio::from_integer(0)
    }

    pub fn inv(&self) -> Self {
        Self::new(-self.0)
    }

    /// Smallest order `lcm(hint, den)` in which the phase lives.
    pub fn order_with(&self, hint: u32) -> u32 {
        (hint as i64).lcm(self.0.denom()) as u32
    }

    pub fn embed(&self, hint: u32) -> CycNum {
        let n = self.order_with(hint);
        let k = (self.0 * Ratio::from_integer(n as i64)).to_integer();
        CycNum::root_of_unity(n, k)
    }

    pub fn to_complex(&self) -> Complex64 {
        let r = *self.0.numer() as f64 / *self.0.denom() as f64;
        Complex64::from_polar(1.0, std::f64::consts::TAU * r)
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, o: Phase) -> Phase {
        Phase::new(self.0 + o.0)
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        self.inv()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(totient(60), 16);
    }

    #[test]
    fn roots() {
        assert!(CycNum::root_of_unity(12, 0).is_one());
        for u in [3u32, 5, 7] {
            let i = CycNum::root_of_unity(12 * u, 3 * u as i64);
            assert_eq!(&i * &i, CycNum::from_int(12 * u, -1));
            let s3 = CycNum::root_of_unity(12 * u, u as i64) + CycNum::root_of_unity(12 * u, -(u as i64));
            assert_eq!(&s3 * &s3, CycNum::from_int(12 * u, 3));
            assert!((s3.to_complex().re - 3f64.sqrt()).abs() < 1e-12);
        }
        let p = CycNum::root_of_unity(36, 7) * CycNum::root_of_unity(36, 29);
        assert!(p.is_one());
    }

    #[test]
    fn canonical_forms() {
        for n in [2u32, 6, 12, 36, 60] {
            let s = CycNum::from_dense(n, &vec![q(1, 1); n as usize]);
            assert!(s.is_zero());
        }
        let s = CycNum::from_dense(2, &[q(1, 1), q(1, 1)]);
        assert!(s.is_zero());
        let phi = cyclotomic_polynomial(30);
        let coeffs: Vec<BigRational> = phi.iter().map(|&c| q(c, 1)).collect();
        assert!(CycNum::from_dense(30, &coeffs).is_zero());
        let i = CycNum::root_of_unity(4, 1);
        let c = i.to_complex();
        assert!((c.re).abs() < 1e-15 && (c.im - 1.0).abs() < 1e-15);
        assert_eq!(CycNum::zero(7).to_complex(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn conj_and_galois() {
        let n = 60u32;
        for k in 0..n as i64 {
            let z = CycNum::root_of_unity(n, k);
            assert_eq!(z.conj(), CycNum::root_of_unity(n, (n as i64 - k) % n as i64));
            assert!((&z.conj() * &z).is_one());
        }
        let x = CycNum::root_of_unity(n, 7) + CycNum::from_int(n, 3);
        assert_eq!(x.galois(-1).unwrap(), x.conj());
        assert!(x.galois(5).is_err());
    }

    #[test]
    fn inverse_and_lift() {
        let n = 36;
        let x = CycNum::root_of_unity(n, 5).scale(&q(3, 7)) + CycNum::from_int(n, 2) - CycNum::root_of_unity(n, 11);
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        assert!(CycNum::zero(n).inv().is_err());
        let l = x.lift_to(72).unwrap();
        assert!((l.to_complex() - x.to_complex()).norm() < 1e-12);
        assert!(x.checked_add(&l).is_err());
        let (a, b) = lift_common(&x, &CycNum::root_of_unity(8, 1));
        assert_eq!(a.order(), 72);
        assert_eq!(b.order(), 72);
    }

    #[test]
    fn phases() {
        let p = Phase::from_frac(5, 4);
        assert_eq!(p.value(), Ratio::new(1, 4));
        assert_eq!(p + Phase::from_frac(3, 4), Phase::zero());
        let e = Phase::from_frac(1, 7).embed(12);
        assert_eq!(e.order(), 84);
        assert!((e.to_complex() - Phase::from_frac(1, 7).to_complex()).norm() < 1e-12);
    }

    #[test]
    fn display_form() {
        let x = CycNum::from_int(12, 2) + CycNum::root_of_unity(12, 1).scale(&q(-1, 3));
        assert_eq!(x.to_string(), "2 + -1/3*z^1");
        assert_eq!(CycNum::zero(12).to_string(), "0");
    }
}
