//! Finite-dimensional sl(3) combinatorics and the Kac-Walton algorithm.

use std::collections::{BTreeMap, HashMap};

use crate::weights::{alcove_reduce, bilinear, qi, Alcove, FiniteWeight, Label, Weyl};

/// The dominant Weyl conjugate of `x` and an element carrying `x` onto it.
pub fn dominant_conjugate(x: &FiniteWeight) -> (FiniteWeight, Weyl) {
    let mut y = *x;
    let mut w = Weyl::E;
    loop {
        let s = if y.a1 < qi(0) {
            Weyl::S1
        } else if y.a2 < qi(0) {
            Weyl::S2
        } else {
            return (y, w);
        };
        y = s.act(&y);
        w = s.compose(w);
    }
}

fn int_weight(a1: i64, a2: i64) -> FiniteWeight {
    FiniteWeight::int(a1, a2)
}

fn coords(x: &FiniteWeight) -> (i64, i64) {
    (x.a1.to_integer(), x.a2.to_integer())
}

/// Whether `lambda - mu` is a nonnegative integral combination of simple roots.
fn below(lambda: &FiniteWeight, mu: &FiniteWeight) -> bool {
    let d = *lambda - *mu;
    if !d.in_root_lattice() {
        return false;
    }
    let (c1, c2) = d.root_coords();
    c1 >= qi(0) && c2 >= qi(0)
}

/// Weight multiplicities of one irreducible module, memoised.
pub struct Freudenthal {
    lambda: FiniteWeight,
    norm: num_rational::Ratio<i64>,
    memo: HashMap<(i64, i64), u64>,
}

impl Freudenthal {
    pub fn new(lambda: &FiniteWeight) -> Self {
        assert!(lambda.is_integral() && lambda.a1 >= qi(0) && lambda.a2 >= qi(0), "highest weight must be dominant integral");
        let lr = *lambda + FiniteWeight::rho();
        Freudenthal { lambda: *lambda, norm: bilinear(&lr, &lr), memo: HashMap::new() }
    }

    pub fn mult(&mut self, mu: &FiniteWeight) -> u64 {
        if !mu.is_integral() || !(self.lambda - *mu).in_root_lattice() {
            return 0;
        }
        let (dom, _) = dominant_conjugate(mu);
        if !below(&self.lambda, &dom) {
            return 0;
        }
        if dom == self.lambda {
            return 1;
        }
        let key = coords(&dom);
        if let Some(&m) = self.memo.get(&key) {
            return m;
        }
        let rho = FiniteWeight::rho();
        let mut acc = qi(0);
        for i in 1..=3 {
            let a = FiniteWeight::alpha(i);
            let mut k = 1;
            loop {
                let x = dom + a.scale(qi(k));
                let (xd, _) = dominant_conjugate(&x);
                if !below(&self.lambda, &xd) {
                    break;
                }
                acc += qi(self.mult(&x) as i64) * bilinear(&x, &a);
                k += 1;
            }
        }
        let dr = dom + rho;
        let m = qi(2) * acc / (self.norm - bilinear(&dr, &dr));
        assert!(m.is_integer() && m >= qi(0), "Freudenthal recursion produced {m}");
        let m = m.to_integer() as u64;
        self.memo.insert(key, m);
        m
    }

    /// All weights with nonzero multiplicity.
    pub fn weights(&mut self) -> BTreeMap<(i64, i64), u64> {
        let (a1, a2) = coords(&self.lambda);
        let span = a1 + a2;
        let mut out = BTreeMap::new();
        for a in 0..=span {
            for b in 0..=span {
                let mu = self.lambda - FiniteWeight::alpha(1).scale(qi(a)) - FiniteWeight::alpha(2).scale(qi(b));
                let m = self.mult(&mu);
                if m > 0 {
                    out.insert(coords(&mu), m);
                }
            }
        }
        out
    }
}

pub fn freudenthal_multiplicity(lambda: &FiniteWeight, mu: &FiniteWeight) -> u64 {
    Freudenthal::new(lambda).mult(mu)
}

/// `prod_{a > 0} <lambda + rho, a> / <rho, a>`.
pub fn weyl_dimension(lambda: &FiniteWeight) -> u64 {
    let (a1, a2) = coords(lambda);
    ((a1 + 1) * (a2 + 1) * (a1 + a2 + 2) / 2) as u64
}

/// Decomposition of `V(lambda) (x) V(mu)` by the Brauer-Klimyk rule.
pub fn tensor_decomposition(lambda: &FiniteWeight, mu: &FiniteWeight) -> BTreeMap<(i64, i64), u64> {
    let rho = FiniteWeight::rho();
    let mut acc: BTreeMap<(i64, i64), i64> = BTreeMap::new();
    for ((e1, e2), m) in Freudenthal::new(mu).weights() {
        let x = *lambda + int_weight(e1, e2) + rho;
        if x.a1 == qi(0) || x.a2 == qi(0) || x.a1 + x.a2 == qi(0) {
            continue;
        }
        let (d, w) = dominant_conjugate(&x);
        *acc.entry(coords(&(d - rho))).or_default() += w.det() * m as i64;
    }
    acc.into_iter()
        .filter(|(_, v)| *v != 0)
        .map(|(k, v)| {
            assert!(v > 0, "negative tensor multiplicity");
            (k, v as u64)
        })
        .collect()
}

pub fn tensor_multiplicity(lambda: &FiniteWeight, mu: &FiniteWeight, nu: &FiniteWeight) -> u64 {
    tensor_decomposition(lambda, mu).get(&coords(nu)).copied().unwrap_or(0)
}

/// The row `nu -> N_{lambda mu}^nu` of the level-`(u-3)` fusion ring.
pub fn kac_walton_row(u: i64, lambda: &Label, mu: &Label) -> BTreeMap<Label, u64> {
    let mut acc: BTreeMap<Label, i64> = BTreeMap::new();
    for ((a1, a2), m) in tensor_decomposition(&lambda.finite(), &mu.finite()) {
        if let Alcove::Inside { label, det } = alcove_reduce(&int_weight(a1, a2), u) {
            *acc.entry(label).or_default() += det * m as i64;
        }
    }
    acc.into_iter()
        .filter(|(_, v)| *v != 0)
        .map(|(k, v)| {
            assert!(v > 0, "negative Kac-Walton coefficient");
            (k, v as u64)
        })
        .collect()
}

pub fn kac_walton_fusion(u: i64, lambda: &Label, mu: &Label, nu: &Label) -> u64 {
    kac_walton_row(u, lambda, mu).get(nu).copied().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(a: i64, b: i64) -> FiniteWeight {
        FiniteWeight::int(a, b)
    }

    #[test]
    fn multiplicities() {
        assert_eq!(freudenthal_multiplicity(&w(1, 0), &w(1, 0)), 1);
        assert_eq!(freudenthal_multiplicity(&w(1, 1), &w(0, 0)), 2);
        assert_eq!(freudenthal_multiplicity(&w(1, 1), &w(2, 0)), 0);
        for (a, b) in [(2, 1), (3, 0), (2, 2), (4, 1)] {
            let total: u64 = Freudenthal::new(&w(a, b)).weights().values().sum();
            assert_eq!(total, weyl_dimension(&w(a, b)));
        }
        assert_eq!(weyl_dimension(&w(2, 1)), 15);
        // the zero weight of V(2,2) has multiplicity 3
        assert_eq!(freudenthal_multiplicity(&w(2, 2), &w(0, 0)), 3);
    }

    // character product computed weight by weight
    fn brute_tensor(l: FiniteWeight, m: FiniteWeight) -> BTreeMap<(i64, i64), u64> {
        let mut ch: BTreeMap<(i64, i64), i64> = BTreeMap::new();
        let wl = Freudenthal::new(&l).weights();
        let wm = Freudenthal::new(&m).weights();
        for (x, a) in &wl {
            for (y, b) in &wm {
                *ch.entry((x.0 + y.0, x.1 + y.1)).or_default() += (a * b) as i64;
            }
        }
        let mut out = BTreeMap::new();
        // peel off highest weights
        loop {
            let top = ch
                .iter()
                .filter(|(_, v)| **v != 0)
                .map(|(k, _)| *k)
                .filter(|k| k.0 >= 0 && k.1 >= 0)
                .max_by_key(|k| {
                    let c = w(k.0, k.1).root_coords();
                    c.0 + c.1
                });
            let Some(top) = top else { break };
            let c = ch[&top];
            assert!(c > 0);
            out.insert(top, c as u64);
            for (x, a) in Freudenthal::new(&w(top.0, top.1)).weights() {
                *ch.entry(x).or_default() -= c * a as i64;
            }
        }
        assert!(ch.values().all(|v| *v == 0));
        out
    }

    #[test]
    fn tensor_products() {
        let d = tensor_decomposition(&w(1, 0), &w(0, 1));
        assert_eq!(d, BTreeMap::from([((0, 0), 1), ((1, 1), 1)]));
        for (l, m) in [(w(1, 1), w(1, 1)), (w(2, 0), w(1, 1)), (w(2, 1), w(0, 3)), (w(0, 0), w(2, 1))] {
            assert_eq!(tensor_decomposition(&l, &m), brute_tensor(l, m));
            assert_eq!(tensor_decomposition(&l, &m), tensor_decomposition(&m, &l));
        }
    }

    #[test]
    fn kac_walton_examples() {
        let u = 5;
        let a = Label::new(1, 1, 0);
        let b = Label::new(1, 0, 1);
        assert_eq!(kac_walton_fusion(u, &a, &b, &Label::new(2, 0, 0)), 1);
        assert_eq!(kac_walton_fusion(u, &a, &b, &Label::new(0, 1, 1)), 1);
        for l in crate::weights::enumerate_p(u) {
            assert_eq!(kac_walton_row(u, &Label::vacuum(u), &l), BTreeMap::from([(l, 1)]));
        }
    }
}
