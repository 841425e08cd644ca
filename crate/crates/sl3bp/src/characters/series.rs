//! Truncated q-series with Laurent-polynomial coefficients in up to two auxiliary variables.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::io::parse_rational;
use crate::weights::{qi, Q};

/// Exponents of the auxiliary variables; unused slots are zero.
pub type Mono = [Q; 2];

pub fn mono(a: Q, b: Q) -> Mono {
    [a, b]
}

pub fn mono0() -> Mono {
    [Q::zero(), Q::zero()]
}

fn madd(a: &Mono, b: &Mono) -> Mono {
    [a[0] + b[0], a[1] + b[1]]
}

fn mneg(a: &Mono) -> Mono {
    [-a[0], -a[1]]
}

fn series_err(msg: impl Into<String>) -> Error {
    Error::Series(msg.into())
}

fn cmul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or_else(|| series_err("coefficient overflow"))
}

fn cadd(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or_else(|| series_err("coefficient overflow"))
}

/// Laurent polynomial with integer coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LPoly(BTreeMap<Mono, i128>);

impl LPoly {
    pub fn zero() -> Self {
        LPoly(BTreeMap::new())
    }

    pub fn monomial(m: Mono, c: i128) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn constant(c: i128) -> Self {
        Self::monomial(mono0(), c)
    }

    /// `1 - x^m`.
    pub fn one_minus(m: Mono) -> Self {
        let mut p = Self::constant(1);
        p.add_term(m, -1);
        p
    }

    pub fn add_term(&mut self, m: Mono, c: i128) {
        if c == 0 {
            return;
        }
        let e = self.0.entry(m).or_insert(0);
        *e += c;
        if *e == 0 {
            self.0.remove(&m);
        }
    }

    pub fn coeff(&self, m: &Mono) -> i128 {
        self.0.get(m).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Mono, &i128)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the coefficients.
    pub fn total(&self) -> i128 {
        self.0.values().sum()
    }

    pub fn add(&self, o: &LPoly) -> LPoly {
        let mut p = self.clone();
        for (m, c) in &o.0 {
            p.add_term(*m, *c);
        }
        p
    }

    pub fn scale(&self, k: i128) -> Result<LPoly> {
        let mut p = LPoly::zero();
        for (m, c) in &self.0 {
            p.add_term(*m, cmul(*c, k)?);
        }
        Ok(p)
    }

    pub fn shift(&self, by: &Mono) -> LPoly {
        LPoly(self.0.iter().map(|(m, c)| (madd(m, by), *c)).collect())
    }

    pub fn mul(&self, o: &LPoly) -> Result<LPoly> {
        let mut acc: BTreeMap<Mono, i128> = BTreeMap::new();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &o.0 {
                let e = acc.entry(madd(m1, m2)).or_insert(0);
                *e = cadd(*e, cmul(*c1, *c2)?)?;
            }
        }
        acc.retain(|_, c| *c != 0);
        Ok(LPoly(acc))
    }

    pub fn map_exponents(&self, f: impl Fn(&Mono) -> Mono) -> LPoly {
        let mut p = LPoly::zero();
        for (m, c) in &self.0 {
            p.add_term(f(m), *c);
        }
        p
    }

    /// Exact quotient by `1 - x^m`, or `None` when it does not divide.
    pub fn div_one_minus(&self, m: &Mono) -> Option<LPoly> {
        if m[0].is_zero() && m[1].is_zero() {
            return None;
        }
        let up = *m > mono0();
        let (lo, hi) = (self.0.keys().next()?, self.0.keys().next_back()?);
        let (lo, hi) = (*lo, *hi);
        let mut r = self.clone();
        let mut quo = LPoly::zero();
        while let Some((t, c)) = if up { r.0.iter().next() } else { r.0.iter().next_back() } {
            let (t, c) = (*t, *c);
            if (up && t > hi) || (!up && t < lo) {
                return None;
            }
            quo.add_term(t, c);
            r.add_term(t, -c);
            r.add_term(madd(&t, m), c);
        }
        Some(quo)
    }

    pub fn eval(&self, zeta: &[Complex64; 2]) -> Complex64 {
        let tau = std::f64::consts::TAU;
        self.0
            .iter()
            .map(|(m, c)| {
                let x = zeta[0] * crate::modular::to_f64(m[0]) + zeta[1] * crate::modular::to_f64(m[1]);
                (*c as f64) * (Complex64::new(0.0, tau) * x).exp()
            })
            .sum()
    }
}

/// `q^offset sum_n q^n p_n(z)`, known exactly for `n <= order`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QSeries {
    nvars: usize,
    offset: Q,
    order: i64,
    terms: BTreeMap<i64, LPoly>,
}

impl QSeries {
    pub fn zero(nvars: usize, offset: Q, order: i64) -> Self {
        QSeries { nvars, offset, order, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize, order: i64) -> Self {
        Self::monomial(nvars, Q::zero(), 0, mono0(), 1, order)
    }

    pub fn monomial(nvars: usize, offset: Q, step: i64, m: Mono, c: i128, order: i64) -> Self {
        let mut s = Self::zero(nvars, offset, order);
        s.add_term(step, m, c);
        s
    }

    /// `1 - x^m q^step`.
    pub fn one_minus(nvars: usize, m: Mono, step: i64, order: i64) -> Self {
        let mut s = Self::one(nvars, order);
        s.add_term(step, m, -1);
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn offset(&self) -> Q {
        self.offset
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn with_offset(mut self, offset: Q) -> Self {
        self.offset = offset;
        self
    }

    pub fn add_term(&mut self, step: i64, m: Mono, c: i128) {
        if step > self.order || c == 0 {
            return;
        }
        let l = self.terms.entry(step).or_default();
        l.add_term(m, c);
        if l.is_zero() {
            self.terms.remove(&step);
        }
    }

    pub fn set_layer(&mut self, step: i64, p: LPoly) {
        if p.is_zero() || step > self.order {
            self.terms.remove(&step);
        } else {
            self.terms.insert(step, p);
        }
    }

    pub fn layer(&self, step: i64) -> LPoly {
        self.terms.get(&step).cloned().unwrap_or_default()
    }

    pub fn coeff(&self, step: i64, m: &Mono) -> i128 {
        self.terms.get(&step).map_or(0, |l| l.coeff(m))
    }

    pub fn layers(&self) -> impl Iterator<Item = (&i64, &LPoly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_step(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    fn low(&self) -> i64 {
        self.min_step().unwrap_or(self.order + 1)
    }

    pub fn truncate(mut self, order: i64) -> Self {
        self.order = self.order.min(order);
        let o = self.order;
        self.terms.retain(|n, _| *n <= o);
        self
    }

    /// Moves the lowest step into the offset.
    pub fn rebase(mut self) -> Self {
        if let Some(s) = self.min_step() {
            if s != 0 {
                self.terms = self.terms.into_iter().map(|(n, p)| (n - s, p)).collect();
                self.offset += qi(s);
                self.order -= s;
            }
        }
        self
    }

    /// Re-expresses the series relative to a new offset differing by an integer.
    pub fn reoffset(mut self, offset: Q) -> Result<Self> {
        let d = self.offset - offset;
        if !d.is_integer() {
            return Err(series_err(format!("offsets {} and {offset} differ by a non-integer", self.offset)));
        }
        let d = d.to_integer();
        self.terms = self.terms.into_iter().map(|(n, p)| (n + d, p)).collect();
        self.order += d;
        self.offset = offset;
        Ok(self)
    }

    fn aligned(&self, o: &QSeries) -> Result<(QSeries, QSeries)> {
        if self.nvars != o.nvars {
            return Err(series_err("variable count mismatch"));
        }
        let base = if self.offset <= o.offset { self.offset } else { o.offset };
        Ok((self.clone().reoffset(base)?, o.clone().reoffset(base)?))
    }

    pub fn add(&self, o: &QSeries) -> Result<QSeries> {
        let (mut a, b) = self.aligned(o)?;
        a.order = a.order.min(b.order);
        let ord = a.order;
        a.terms.retain(|n, _| *n <= ord);
        for (n, p) in b.terms {
            if n <= ord {
                let l = a.layer(n).add(&p);
                a.set_layer(n, l);
            }
        }
        Ok(a)
    }

    pub fn scale(&self, k: i128) -> Result<QSeries> {
        let mut s = QSeries::zero(self.nvars, self.offset, self.order);
        for (n, p) in &self.terms {
            s.set_layer(*n, p.scale(k)?);
        }
        Ok(s)
    }

    pub fn sub(&self, o: &QSeries) -> Result<QSeries> {
        self.add(&o.scale(-1)?)
    }

    pub fn mul(&self, o: &QSeries) -> Result<QSeries> {
        if self.nvars != o.nvars {
            return Err(series_err("variable count mismatch"));
        }
        let order = (self.order + o.low()).min(o.order + self.low());
        let mut s = QSeries::zero(self.nvars, self.offset + o.offset, order);
        for (n1, p1) in &self.terms {
            for (n2, p2) in &o.terms {
                let n = n1 + n2;
                if n > order {
                    break;
                }
                let l = s.layer(n).add(&p1.mul(p2)?);
                s.set_layer(n, l);
            }
        }
        Ok(s)
    }

    /// Multiplies by `x^m`.
    pub fn shift(&self, m: &Mono) -> QSeries {
        let mut s = self.clone();
        s.terms = s.terms.into_iter().map(|(n, p)| (n, p.shift(m))).collect();
        s
    }

    /// Inverse of a series whose lowest layer is `+-x^m`.
    pub fn inverse(&self) -> Result<QSeries> {
        let a = self.clone().rebase();
        let c0 = a.layer(0);
        let (m0, c) = match c0.iter().next() {
            Some((m, c)) if c0.len() == 1 && c.abs() == 1 => (*m, *c),
            _ => return Err(series_err("leading layer is not a unit monomial")),
        };
        let inv0 = LPoly::monomial(mneg(&m0), c);
        let n_max = a.order;
        let mut b = QSeries::zero(a.nvars, -a.offset, n_max);
        b.set_layer(0, inv0.clone());
        for n in 1..=n_max {
            let mut acc = LPoly::zero();
            for (i, ai) in a.terms.range(1..=n) {
                let bj = b.layer(n - i);
                if !bj.is_zero() {
                    acc = acc.add(&ai.mul(&bj)?);
                }
            }
            b.set_layer(n, acc.mul(&inv0)?.scale(-1)?);
        }
        Ok(b)
    }

    /// Layerwise exact division by `1 - x^m`.
    pub fn div_one_minus(&self, m: &Mono) -> Result<QSeries> {
        let mut s = QSeries::zero(self.nvars, self.offset, self.order);
        for (n, p) in &self.terms {
            let d = p.div_one_minus(m).ok_or_else(|| series_err(format!("layer {n} is not divisible by 1 - x^{m:?}")))?;
            s.set_layer(*n, d);
        }
        Ok(s)
    }

    /// Applies `x^m q^s -> x^{f(m)} q^{s + g(m)}`; every shift must be an integer.
    pub fn map(&self, nvars: usize, f: impl Fn(&Mono) -> (Mono, Q)) -> Result<QSeries> {
        let mut s = QSeries::zero(nvars, self.offset, self.order);
        for (n, p) in &self.terms {
            for (m, c) in p.iter() {
                let (m2, dq) = f(m);
                if !dq.is_integer() {
                    return Err(series_err(format!("non-integer q-shift {dq}")));
                }
                s.terms.entry(n + dq.to_integer()).or_default().add_term(m2, *c);
            }
        }
        s.terms.retain(|_, p| !p.is_zero());
        Ok(s)
    }

    /// Applies `x^m q^e -> x^{f(m).0} q^{e + c + f(m).1}`, where the shifts may be unbounded in
    /// the charges.  The result is trusted below the lowest step reached from the last two layers.
    pub fn flow(&self, c: Q, f: impl Fn(&Mono) -> (Mono, Q)) -> Result<QSeries> {
        let first = match self.terms.values().next().and_then(|p| p.iter().next()) {
            Some((m, _)) => f(m).1,
            None => return Ok(self.clone().with_offset(self.offset + c)),
        };
        let out = self.map(self.nvars, |m| {
            let (m2, d) = f(m);
            (m2, d - first)
        })?;
        let top = self.order;
        let min_shift = |n: i64| {
            self.terms.get(&n).and_then(|p| p.iter().map(|(m, _)| (f(m).1 - first).floor().to_integer()).min())
        };
        let reach = match (min_shift(top), min_shift(top - 1)) {
            (Some(a), Some(b)) => top + a + (a - b).min(0),
            (Some(a), None) => top + a,
            (None, Some(a)) => top + a - 1,
            (None, None) => top,
        };
        let mut out = out.with_offset(self.offset + c + first);
        out.order = reach;
        let ord = out.order;
        out.terms.retain(|n, _| *n <= ord);
        Ok(out.rebase())
    }

    pub fn eval(&self, zeta: &[Complex64; 2], tau: Complex64) -> Complex64 {
        let i2pi = Complex64::new(0.0, std::f64::consts::TAU);
        let off = crate::modular::to_f64(self.offset);
        self.terms.iter().map(|(n, p)| p.eval(zeta) * (i2pi * tau * (off + *n as f64)).exp()).sum()
    }

    /// `sum_m |c_m x^m|` for the layer at `step`, evaluated at `zeta`.
    pub fn layer_abs(&self, step: i64, zeta: &[Complex64; 2]) -> f64 {
        let tau = std::f64::consts::TAU;
        self.terms.get(&step).map_or(0.0, |p| {
            p.iter()
                .map(|(m, c)| {
                    let x = zeta[0] * crate::modular::to_f64(m[0]) + zeta[1] * crate::modular::to_f64(m[1]);
                    (*c as f64).abs() * (-tau * x.im).exp()
                })
                .sum()
        })
    }

    pub fn all_nonnegative(&self) -> bool {
        self.terms.values().all(|p| p.iter().all(|(_, c)| *c >= 0))
    }

    pub fn to_json(&self) -> Value {
        let mut terms = Map::new();
        for (n, p) in &self.terms {
            let mut row = Map::new();
            for (m, c) in p.iter() {
                let key = m[..self.nvars].iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",");
                let v = i64::try_from(*c).map(Value::from).unwrap_or_else(|_| Value::from(c.to_string()));
                row.insert(key, v);
            }
            terms.insert(n.to_string(), Value::Object(row));
        }
        json!({
            "nvars": self.nvars,
            "qOffset": self.offset.to_string(),
            "order": self.order,
            "terms": terms,
        })
    }

    pub fn from_json(v: &Value) -> Result<QSeries> {
        let bad = |m: &str| Error::Parse(format!("q-series: {m}"));
        let nvars = v.get("nvars").and_then(Value::as_u64).ok_or_else(|| bad("missing nvars"))? as usize;
        if nvars > 2 {
            return Err(bad("at most two variables"));
        }
        let offset = parse_rational(v.get("qOffset").and_then(Value::as_str).ok_or_else(|| bad("missing qOffset"))?)?;
        let order = v.get("order").and_then(Value::as_i64).ok_or_else(|| bad("missing order"))?;
        let terms = v.get("terms").and_then(Value::as_object).ok_or_else(|| bad("missing terms"))?;
        let mut s = QSeries::zero(nvars, offset, order);
        for (n, row) in terms {
            let n: i64 = n.parse().map_err(|_| bad("bad step"))?;
            if n > order {
                return Err(bad("term beyond truncation order"));
            }
            for (key, c) in row.as_object().ok_or_else(|| bad("row is not an object"))? {
                let mut m = mono0();
                let parts: Vec<&str> = if nvars == 0 { vec![] } else { key.split(',').collect() };
                if parts.len() != nvars && !(nvars == 0 && key.is_empty()) {
                    return Err(bad("exponent arity"));
                }
                for (i, e) in parts.iter().enumerate() {
                    m[i] = parse_rational(e.trim())?;
                }
                let c: i128 = match c {
                    Value::Number(x) => x.as_i64().ok_or_else(|| bad("non-integer coefficient"))? as i128,
                    Value::String(x) => x.parse().map_err(|_| bad("bad coefficient"))?,
                    _ => return Err(bad("bad coefficient")),
                };
                if c == 0 {
                    return Err(bad("explicit zero coefficient"));
                }
                if s.coeff(n, &m) != 0 {
                    return Err(bad("duplicate exponent"));
                }
                s.add_term(n, m, c);
            }
        }
        Ok(s)
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = ["z1", "z2"];
        let names: &[&str] = if self.nvars == 1 { &["z"] } else { &vars[..self.nvars] };
        write!(f, "q^({}) [", self.offset)?;
        let mut first = true;
        for (n, p) in &self.terms {
            for (m, c) in p.iter() {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "{c}")?;
                for (i, v) in names.iter().enumerate() {
                    if !m[i].is_zero() {
                        write!(f, " {v}^({})", m[i])?;
                    }
                }
                if *n != 0 {
                    write!(f, " q^{n}")?;
                }
            }
        }
        write!(f, " + O(q^{})]", self.order + 1)
    }
}

/// `q^{1/24} prod_{n >= 1} (1 - q^n)`.
pub fn eta_series(order: i64) -> QSeries {
    let mut s = QSeries::one(0, order);
    for n in 1..=order {
        s = s.mul(&QSeries::one_minus(0, mono0(), n, order)).expect("eta product");
    }
    s.with_offset(Q::new(1, 24))
}

/// `F(y; q) = q^{1/12} prod_{i >= 1} (1 - y q^i)(1 - y^{-1} q^{i-1})` with `y = x^m`,
/// optionally dropping the factor `1 - y q^{i0}`.
pub fn f_product(nvars: usize, y: Mono, order: i64, omit: Option<i64>) -> Result<QSeries> {
    let mut s = QSeries::one(nvars, order);
    for i in 1..=order + 1 {
        if omit != Some(i) && i <= order {
            s = s.mul(&QSeries::one_minus(nvars, y, i, order))?;
        }
        if i - 1 <= order {
            s = s.mul(&QSeries::one_minus(nvars, mneg(&y), i - 1, order))?;
        }
    }
    Ok(s.with_offset(Q::new(1, 12)))
}

/// `q^{1/12} prod_{i >= 1} (1 + y q^i)(1 + y^{-1} q^{i-1})`.
pub fn fermionic_ch(nvars: usize, y: Mono, order: i64) -> Result<QSeries> {
    let one_plus = |m: Mono, step: i64| QSeries::monomial(nvars, Q::zero(), 0, mono0(), 1, order).add(&QSeries::monomial(nvars, Q::zero(), step, m, 1, order));
    let mut s = QSeries::one(nvars, order);
    for i in 1..=order + 1 {
        if i <= order {
            s = s.mul(&one_plus(y, i)?)?;
        }
        if i - 1 <= order {
            s = s.mul(&one_plus(mneg(&y), i - 1)?)?;
        }
    }
    Ok(s.with_offset(Q::new(1, 12)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::q;

    #[test]
    fn eta_pentagonal() {
        let e = eta_series(30);
        let got: Vec<i128> = (0..=15).map(|n| e.coeff(n, &mono0())).collect();
        // independent: Euler's pentagonal theorem
        let mut want = vec![0i128; 16];
        for k in -4i64..=4 {
            let g = k * (3 * k - 1) / 2;
            if (0..16).contains(&g) {
                want[g as usize] += if k % 2 == 0 { 1 } else { -1 };
            }
        }
        assert_eq!(got, want);
        assert_eq!(e.offset(), q(1, 24));
        let one = e.mul(&e.inverse().unwrap()).unwrap();
        assert_eq!(one, QSeries::one(0, 30));
    }

    #[test]
    fn triple_product() {
        // prod (1 - q^i)(1 - y q^i)(1 - y^{-1} q^{i-1}) = sum (-1)^n y^n q^{n(n+1)/2}
        let (y, qq) = (0.7f64, 0.05f64);
        let f = f_product(1, mono(qi(1), qi(0)), 40, None).unwrap();
        let e = eta_series(40);
        let zeta = Complex64::new(0.0, -y.ln() / std::f64::consts::TAU);
        let tau = Complex64::new(0.0, -qq.ln() / std::f64::consts::TAU);
        let lhs = f.eval(&[zeta, Complex64::from(0.0)], tau) * e.eval(&[Complex64::from(0.0); 2], tau);
        let sum: f64 = (-30i32..=30).map(|n| (-1f64).powi(n) * y.powi(n) * qq.powf((n * (n + 1)) as f64 / 2.0)).sum();
        let rhs = sum * qq.powf(1.0 / 12.0 + 1.0 / 24.0);
        assert!((lhs - rhs).norm() < 1e-10, "{lhs} {rhs}");
        let c0 = f.layer(0);
        assert_eq!(c0, LPoly::one_minus(mono(qi(-1), qi(0))));
        let g = f_product(1, mono(qi(1), qi(0)), 10, Some(1)).unwrap();
        assert_eq!(g.mul(&QSeries::one_minus(1, mono(qi(1), qi(0)), 1, 10)).unwrap(), f.truncate(10));
    }

    #[test]
    fn division_and_json() {
        let p = LPoly::one_minus(mono(qi(3), qi(0))).mul(&LPoly::monomial(mono(q(1, 3), qi(2)), 5)).unwrap();
        let d = p.div_one_minus(&mono(qi(1), qi(0))).unwrap();
        assert_eq!(d.mul(&LPoly::one_minus(mono(qi(1), qi(0)))).unwrap(), p);
        assert!(LPoly::constant(1).div_one_minus(&mono(qi(1), qi(0))).is_none());
        let s = f_product(2, mono(qi(1), q(-1, 2)), 6, None).unwrap();
        assert_eq!(QSeries::from_json(&s.to_json()).unwrap(), s);
        let f = fermionic_ch(1, mono(qi(1), qi(0)), 6).unwrap();
        assert_eq!(f.coeff(0, &mono0()), 1);
        assert_eq!(f.coeff(0, &mono(qi(-1), qi(0))), 1);
    }
}
