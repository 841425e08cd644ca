//! Module classes in the Grothendieck group and formal sums of them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::io::{parse_coweight, parse_gamma, parse_label};
use crate::modular::RelaxedLabel;
use crate::weights::{check_atypical, AdmFamily, Coweight, GammaCoset, Label, Weyl};

/// `sigma^g w(M)` for the module types that occur in Grothendieck fusion.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ModuleLabel {
    /// an irreducible Bershadsky-Polyakov module
    Bp(Label),
    /// `sigma^g R^lambda_gamma`
    Relaxed { g: Coweight, lambda: Label, gamma: GammaCoset },
    /// `sigma^g w(S^lambda_gamma)`, `gamma` satisfying the semirelaxed constraint
    Semirelaxed { w: Weyl, g: Coweight, lambda: Label, gamma: GammaCoset },
    /// `sigma^g w(L)` with `L` the irreducible of the admissible weight `(family, lambda)`
    HighestWeight { w: Weyl, g: Coweight, family: AdmFamily, lambda: Label },
}

impl ModuleLabel {
    pub fn relaxed(g: Coweight, lambda: Label, gamma: GammaCoset) -> Self {
        ModuleLabel::Relaxed { g, lambda, gamma }
    }

    pub fn semi(w: Weyl, g: Coweight, lambda: Label, gamma: GammaCoset) -> Self {
        ModuleLabel::Semirelaxed { w, g, lambda, gamma }
    }

    pub fn hw(w: Weyl, g: Coweight, family: AdmFamily, lambda: Label) -> Self {
        ModuleLabel::HighestWeight { w, g, family, lambda }
    }

    /// `L(lambda - u w0/2)`.
    pub fn l0(lambda: Label) -> Self {
        Self::hw(Weyl::E, Coweight::ZERO, AdmFamily::Zero, lambda)
    }

    /// `L(Lambda^1_lambda)`.
    pub fn l1(lambda: Label) -> Self {
        Self::hw(Weyl::E, Coweight::ZERO, AdmFamily::W1, lambda)
    }

    pub fn vacuum(u: i64) -> Self {
        Self::l0(Label::vacuum(u))
    }

    pub fn lambda(&self) -> Label {
        match *self {
            ModuleLabel::Bp(l) => l,
            ModuleLabel::Relaxed { lambda, .. }
            | ModuleLabel::Semirelaxed { lambda, .. }
            | ModuleLabel::HighestWeight { lambda, .. } => lambda,
        }
    }

    pub fn flow(&self) -> Coweight {
        match *self {
            ModuleLabel::Bp(_) => Coweight::ZERO,
            ModuleLabel::Relaxed { g, .. } | ModuleLabel::Semirelaxed { g, .. } | ModuleLabel::HighestWeight { g, .. } => g,
        }
    }

    pub fn twist(&self) -> Weyl {
        match *self {
            ModuleLabel::Semirelaxed { w, .. } | ModuleLabel::HighestWeight { w, .. } => w,
            _ => Weyl::E,
        }
    }

    pub fn as_relaxed(&self) -> Option<RelaxedLabel> {
        match *self {
            ModuleLabel::Relaxed { g, lambda, gamma } => Some(RelaxedLabel::new(g, lambda, gamma)),
            _ => None,
        }
    }

    /// Highest-weight classes are rewritten in terms of the `w0` and `w1` families:
    /// `L(l - u w1/2) = sigma^{w1} L(nabla l - u w0/2)` and `L(l - u w2/2) = sigma^{w2} L(nabla^{-1} l - u w0/2)`.
    pub fn canonical(&self) -> Self {
        match *self {
            ModuleLabel::HighestWeight { w, g, family: AdmFamily::One, lambda } => {
                Self::hw(w, g + w.act_co(&Coweight::omega(1)), AdmFamily::Zero, lambda.nabla(1))
            }
            ModuleLabel::HighestWeight { w, g, family: AdmFamily::Two, lambda } => {
                Self::hw(w, g + w.act_co(&Coweight::omega(2)), AdmFamily::Zero, lambda.nabla(-1))
            }
            x => x,
        }
    }

    /// `sigma^h (self)`.
    pub fn flowed(&self, h: Coweight) -> Self {
        match *self {
            ModuleLabel::Bp(l) => ModuleLabel::Bp(l),
            ModuleLabel::Relaxed { g, lambda, gamma } => Self::relaxed(g + h, lambda, gamma),
            ModuleLabel::Semirelaxed { w, g, lambda, gamma } => Self::semi(w, g + h, lambda, gamma),
            ModuleLabel::HighestWeight { w, g, family, lambda } => Self::hw(w, g + h, family, lambda),
        }
    }

    /// `v(self)` for a Weyl twist `v`.
    pub fn twisted(&self, v: Weyl) -> Self {
        match *self {
            ModuleLabel::Bp(l) => ModuleLabel::Bp(l),
            ModuleLabel::Relaxed { g, lambda, gamma } => Self::relaxed(v.act_co(&g), lambda, gamma.weyl(v)),
            ModuleLabel::Semirelaxed { w, g, lambda, gamma } => Self::semi(v.compose(w), v.act_co(&g), lambda, gamma),
            ModuleLabel::HighestWeight { w, g, family, lambda } => Self::hw(v.compose(w), v.act_co(&g), family, lambda),
        }
    }

    /// The Dynkin automorphism on highest-weight and BP classes.
    pub fn dynkin(&self) -> Result<Self> {
        match self.canonical() {
            ModuleLabel::Bp(l) => Ok(ModuleLabel::Bp(l.dynkin())),
            ModuleLabel::HighestWeight { w, g, family, lambda } => {
                let lambda = match family {
                    AdmFamily::W1 => lambda.nabla(1).dynkin(),
                    _ => lambda.dynkin(),
                };
                Ok(Self::hw(w.conj_dynkin(), g.dynkin(), family, lambda))
            }
            x => Err(Error::Unsupported(format!("Dynkin action on {x}"))),
        }
    }

    pub fn validate(&self, u: i64) -> Result<()> {
        self.lambda().check(u)?;
        if let ModuleLabel::Semirelaxed { lambda, gamma, .. } = self {
            check_atypical(u, lambda, gamma)?;
        }
        Ok(())
    }
}

fn fmt_wg(f: &mut fmt::Formatter<'_>, w: Weyl, g: Coweight) -> fmt::Result {
    if w != Weyl::E {
        write!(f, ":w={w}")?;
    }
    write!(f, ":g={g}")
}

impl fmt::Display for ModuleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ModuleLabel::Bp(l) => write!(f, "B:{l}"),
            ModuleLabel::Relaxed { g, lambda, gamma } => write!(f, "R:{lambda}:g={g}:gamma={gamma}"),
            ModuleLabel::Semirelaxed { w, g, lambda, gamma } => {
                write!(f, "S:{lambda}")?;
                fmt_wg(f, w, g)?;
                write!(f, ":gamma={gamma}")
            }
            ModuleLabel::HighestWeight { w, g, family, lambda } => {
                let tag = match family {
                    AdmFamily::Zero => "L0",
                    AdmFamily::One => "L1",
                    AdmFamily::Two => "L2",
                    AdmFamily::W1 => "Ls1",
                };
                write!(f, "{tag}:{lambda}")?;
                fmt_wg(f, w, g)
            }
        }
    }
}

impl FromStr for ModuleLabel {
    type Err = Error;

    /// `B:l`, `R:l:g=a,b:gamma=c,d`, `S:l:w=s1:g=a,b:gamma=c,d`, and `L0:l`, `L1:l`, `L2:l`
    /// (also `Lw0`, `Lw1`, `Lw2`) or `Ls1:l` for the four highest-weight families, with optional
    /// `w=` and `g=` fields.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.trim().split(':');
        let tag = parts.next().unwrap_or_default().trim();
        let lambda = parse_label(parts.next().ok_or_else(|| Error::Parse(format!("missing label in {s:?}")))?, None)?;
        let (mut w, mut g, mut gamma) = (Weyl::E, Coweight::ZERO, None);
        for p in parts {
            let (k, v) = p.split_once('=').ok_or_else(|| Error::Parse(format!("bad field {p:?} in {s:?}")))?;
            match k.trim() {
                "w" => w = Weyl::parse(v.trim()).ok_or_else(|| Error::Parse(format!("bad Weyl element {v:?}")))?,
                "g" => g = parse_coweight(v)?,
                "gamma" => gamma = Some(parse_gamma(v)?),
                _ => return Err(Error::Parse(format!("unknown field {k:?} in {s:?}"))),
            }
        }
        let need_gamma = || gamma.ok_or_else(|| Error::Parse(format!("missing gamma in {s:?}")));
        let family = match tag {
            "B" => return Ok(ModuleLabel::Bp(lambda)),
            "R" => {
                if w != Weyl::E {
                    return Err(Error::Parse(format!("relaxed classes carry no twist: {s:?}")));
                }
                return Ok(Self::relaxed(g, lambda, need_gamma()?));
            }
            "S" => return Ok(Self::semi(w, g, lambda, need_gamma()?)),
            "L0" | "Lw0" => AdmFamily::Zero,
            "L1" | "Lw1" => AdmFamily::One,
            "L2" | "Lw2" => AdmFamily::Two,
            "Ls1" => AdmFamily::W1,
            _ => return Err(Error::Parse(format!("unknown class tag {tag:?}"))),
        };
        if gamma.is_some() {
            return Err(Error::Parse(format!("highest-weight classes take no gamma: {s:?}")));
        }
        Ok(Self::hw(w, g, family, lambda))
    }
}

/// A class with an integer coefficient.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GrothClass {
    pub coeff: i64,
    pub label: ModuleLabel,
}

/// A finite integer combination of canonical classes.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GrothSum(BTreeMap<ModuleLabel, i64>);

impl GrothSum {
    pub fn new() -> Self {
        GrothSum(BTreeMap::new())
    }

    pub fn single(label: ModuleLabel) -> Self {
        let mut s = Self::new();
        s.add(label, 1);
        s
    }

    pub fn add(&mut self, label: ModuleLabel, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.0.entry(label.canonical()).or_default();
        *e += c;
        if *e == 0 {
            self.0.remove(&label.canonical());
        }
    }

    pub fn extend(&mut self, o: &GrothSum, c: i64) {
        for (l, v) in &o.0 {
            self.add(*l, c * v);
        }
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

    pub fn iter(&self) -> impl Iterator<Item = (&ModuleLabel, &i64)> {
        self.0.iter()
    }

    pub fn classes(&self) -> Vec<GrothClass> {
        self.0.iter().map(|(l, c)| GrothClass { coeff: *c, label: *l }).collect()
    }

    pub fn coeff(&self, l: &ModuleLabel) -> i64 {
        self.0.get(&l.canonical()).copied().unwrap_or(0)
    }

    pub fn all_nonnegative(&self) -> bool {
        self.0.values().all(|c| *c > 0)
    }

    pub fn map(&self, f: impl Fn(&ModuleLabel) -> ModuleLabel) -> Self {
        let mut s = Self::new();
        for (l, c) in &self.0 {
            s.add(f(l), *c);
        }
        s
    }

    pub fn try_map(&self, f: impl Fn(&ModuleLabel) -> Result<ModuleLabel>) -> Result<Self> {
        let mut s = Self::new();
        for (l, c) in &self.0 {
            s.add(f(l)?, *c);
        }
        Ok(s)
    }

    pub fn flowed(&self, h: Coweight) -> Self {
        self.map(|l| l.flowed(h))
    }

    pub fn twisted(&self, w: Weyl) -> Self {
        self.map(|l| l.twisted(w))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.0.iter().map(|(l, c)| json!({ "label": l.to_string(), "coeff": c })).collect())
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("class sum must be an array".into()))?;
        let mut s = Self::new();
        for e in arr {
            let l: ModuleLabel = e
                .get("label")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse(format!("missing label in {e}")))?
                .parse()?;
            let c = e.get("coeff").and_then(Value::as_i64).ok_or_else(|| Error::Parse(format!("missing coeff in {e}")))?;
            s.add(l, c);
        }
        Ok(s)
    }
}

impl fmt::Display for GrothSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (l, c)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if *c != 1 {
                write!(f, "{c}*")?;
            }
            write!(f, "[{l}]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::q;

    #[test]
    fn label_round_trip() {
        for s in ["R:1,0,1:g=0,0:gamma=1/3,1/6", "S:0,1,1:w=s1:g=1,-2:gamma=0,1/2", "L0:0,1,1:g=0,0", "Ls1:2,0,0:w=s3:g=1,1", "B:0,0,2"] {
            let l: ModuleLabel = s.parse().unwrap();
            assert_eq!(l.to_string(), s);
        }
        assert_eq!("Lw0:2,0,0".parse::<ModuleLabel>().unwrap(), ModuleLabel::l0(Label::new(2, 0, 0)));
        assert!("R:1,0,1:w=s1:gamma=0,0".parse::<ModuleLabel>().is_err());
        assert!("Q:1,0,1".parse::<ModuleLabel>().is_err());
    }

    #[test]
    fn canonical_families() {
        let l = Label::new(0, 1, 1);
        let one = ModuleLabel::hw(Weyl::E, Coweight::ZERO, AdmFamily::One, l).canonical();
        assert_eq!(one, ModuleLabel::hw(Weyl::E, Coweight::omega(1), AdmFamily::Zero, l.nabla(1)));
        let mut s = GrothSum::new();
        s.add(ModuleLabel::hw(Weyl::E, Coweight::ZERO, AdmFamily::Two, l), 1);
        s.add(ModuleLabel::hw(Weyl::E, Coweight::omega(2), AdmFamily::Zero, l.nabla(-1)), -1);
        assert!(s.is_zero());
        let r = ModuleLabel::relaxed(Coweight::new(1, 0), l, GammaCoset::from_root_coords(q(1, 3), q(1, 5)));
        assert_eq!(r.twisted(Weyl::S1).twisted(Weyl::S1), r);
        assert_eq!(GrothSum::from_json(&GrothSum::single(r).to_json()).unwrap(), GrothSum::single(r));
    }
}
