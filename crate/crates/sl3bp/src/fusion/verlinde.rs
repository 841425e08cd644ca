//! Fusion tables from the Verlinde formula and from Kac-Walton.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::fusion::lie::kac_walton_row;
use crate::modular::{bp_smatrix, wzw_smatrix, SMatrix};
use crate::weights::{check_u, check_u_odd, enumerate_p, Label};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FusionMethod {
    Verlinde,
    KacWalton,
    Bp,
}

impl fmt::Display for FusionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FusionMethod::Verlinde => "verlinde",
            FusionMethod::KacWalton => "kac-walton",
            FusionMethod::Bp => "bp",
        })
    }
}

/// `N_{lambda mu}^nu` over `P^{u-3}`, stored densely in label order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FusionTable {
    pub u: i64,
    pub labels: Vec<Label>,
    data: Vec<u64>,
}

impl FusionTable {
    fn idx(&self, a: usize, b: usize, c: usize) -> usize {
        let n = self.labels.len();
        (a * n + b) * n + c
    }

    pub fn from_fn(u: i64, mut f: impl FnMut(usize, usize, usize) -> Result<u64>) -> Result<Self> {
        let labels = enumerate_p(u);
        let n = labels.len();
        let mut data = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    data.push(f(a, b, c)?);
                }
            }
        }
        Ok(FusionTable { u, labels, data })
    }

    pub fn from_entries(u: i64, entries: impl IntoIterator<Item = (Label, Label, Label, u64)>) -> Result<Self> {
        let mut t = FusionTable::from_fn(u, |_, _, _| Ok(0))?;
        for (a, b, c, v) in entries {
            let (a, b, c) = (t.pos(&a)?, t.pos(&b)?, t.pos(&c)?);
            let i = t.idx(a, b, c);
            t.data[i] = v;
        }
        Ok(t)
    }

    fn pos(&self, l: &Label) -> Result<usize> {
        self.labels.iter().position(|x| x == l).ok_or_else(|| Error::NotInAlcove(l.to_string(), self.u - 3))
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn at(&self, a: usize, b: usize, c: usize) -> u64 {
        self.data[self.idx(a, b, c)]
    }

    pub fn get(&self, a: &Label, b: &Label, c: &Label) -> u64 {
        match (self.pos(a), self.pos(b), self.pos(c)) {
            (Ok(a), Ok(b), Ok(c)) => self.at(a, b, c),
            _ => 0,
        }
    }

    /// Nonzero `(nu, N_{a b}^nu)`.
    pub fn product(&self, a: &Label, b: &Label) -> Vec<(Label, u64)> {
        self.labels.iter().map(|c| (*c, self.get(a, b, c))).filter(|(_, v)| *v > 0).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (Label, Label, Label, u64)> + '_ {
        let n = self.dim();
        (0..n * n * n).map(move |i| {
            let (a, b, c) = (i / (n * n), (i / n) % n, i % n);
            (self.labels[a], self.labels[b], self.labels[c], self.data[i])
        })
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| self.at(a, b, c) == self.at(b, a, c))))
    }

    pub fn vacuum_is_unit(&self) -> bool {
        let Ok(v) = self.pos(&Label::vacuum(self.u)) else { return false };
        let n = self.dim();
        (0..n).all(|b| (0..n).all(|c| self.at(v, b, c) == u64::from(b == c)))
    }

    /// `sum_s N_{ab}^s N_{sc}^d = sum_s N_{bc}^s N_{as}^d` for all quadruples.
    pub fn is_associative(&self) -> bool {
        let n = self.dim();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let l: u64 = (0..n).map(|s| self.at(a, b, s) * self.at(s, c, d)).sum();
                        let r: u64 = (0..n).map(|s| self.at(b, c, s) * self.at(a, s, d)).sum();
                        if l != r {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// First triple on which two tables differ.
    pub fn first_difference(&self, o: &FusionTable) -> Option<(Label, Label, Label, u64, u64)> {
        if self.labels != o.labels {
            return Some((Label::vacuum(self.u), Label::vacuum(self.u), Label::vacuum(self.u), 0, 0));
        }
        self.entries()
            .zip(o.entries())
            .find(|(x, y)| x.3 != y.3)
            .map(|(x, y)| (x.0, x.1, x.2, x.3, y.3))
    }
}

/// Exact Verlinde sums `sum_x S_ax S_bx conj(S_cx) / S_0x` for a unitary S-matrix.
pub fn verlinde_table(u: i64, s: &SMatrix<Label>) -> Result<FusionTable> {
    let n = s.dim();
    let vac = s.index(&Label::vacuum(u)).ok_or_else(|| Error::Invariant("vacuum missing from S-matrix".into()))?;
    let inv0: Vec<CycNum> = (0..n).map(|x| s.entries[vac][x].inv()).collect::<std::result::Result<_, _>>()?;
    let conj: Vec<Vec<CycNum>> = s.entries.iter().map(|r| r.iter().map(|x| x.conj()).collect()).collect();
    let mut data = Vec::with_capacity(n * n * n);
    for a in 0..n {
        for b in 0..n {
            let w: Vec<CycNum> = (0..n).map(|x| &(&s.entries[a][x] * &s.entries[b][x]) * &inv0[x]).collect();
            for c in 0..n {
                let mut acc = CycNum::zero(s.order());
                for x in 0..n {
                    acc += &(&w[x] * &conj[c][x]);
                }
                let v = acc.as_integer().filter(|v| *v >= 0).ok_or_else(|| {
                    Error::Invariant(format!(
                        "Verlinde sum for ({}, {}, {}) is {acc}, not a nonnegative integer",
                        s.labels[a], s.labels[b], s.labels[c]
                    ))
                })?;
                data.push(v as u64);
            }
        }
    }
    Ok(FusionTable { u, labels: s.labels.clone(), data })
}

pub fn verlinde_wzw(u: i64) -> Result<FusionTable> {
    check_u(u)?;
    verlinde_table(u, &wzw_smatrix(u)?)
}

pub fn kac_walton_table(u: i64) -> Result<FusionTable> {
    check_u(u)?;
    let labels = enumerate_p(u);
    let mut entries = Vec::new();
    for a in &labels {
        for b in &labels {
            for (c, v) in kac_walton_row(u, a, b) {
                entries.push((*a, *b, c, v));
            }
        }
    }
    FusionTable::from_entries(u, entries)
}

/// Verlinde with the BP S-matrix, checked against the WZW table.
pub fn bp_fusion(u: i64) -> Result<FusionTable> {
    check_u_odd(u)?;
    let bp = verlinde_table(u, &bp_smatrix(u)?)?;
    let wzw = verlinde_wzw(u)?;
    if let Some((a, b, c, x, y)) = bp.first_difference(&wzw) {
        return Err(Error::Invariant(format!("BP fusion N_{{{a},{b}}}^{c} = {x} but WZW gives {y}")));
    }
    Ok(bp)
}

pub fn fusion_table(u: i64, method: FusionMethod) -> Result<FusionTable> {
    match method {
        FusionMethod::Verlinde => verlinde_wzw(u),
        FusionMethod::KacWalton => kac_walton_table(u),
        FusionMethod::Bp => bp_fusion(u),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verlinde_matches_kac_walton_small() {
        for u in [3, 4, 5] {
            let v = verlinde_wzw(u).unwrap();
            let k = kac_walton_table(u).unwrap();
            assert_eq!(v.first_difference(&k), None, "u={u}");
            assert!(v.vacuum_is_unit() && v.is_symmetric());
        }
        assert_eq!(verlinde_wzw(3).unwrap().at(0, 0, 0), 1);
    }

    #[test]
    fn bp_nabla_shifts() {
        let u = 5;
        let t = bp_fusion(u).unwrap();
        assert!(t.is_associative());
        for (a, b, c, v) in t.entries() {
            assert_eq!(t.get(&a.nabla(1), &b, &c.nabla(1)), v);
            assert_eq!(t.get(&a.nabla(1), &b.nabla(1), &c.nabla(2)), v);
            assert_eq!(t.get(&a.dynkin(), &b.dynkin(), &c.dynkin()), v);
            if v > 0 {
                assert!((a.finite() + b.finite() - c.finite()).in_root_lattice());
            }
        }
    }
}
