//! Weight combinatorics for sl(3) and its affinisation.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = Ratio<i64>;

pub fn q(n: i64, d: i64) -> Q {
    Ratio::new(n, d)
}

pub fn qi(n: i64) -> Q {
    Ratio::from_integer(n)
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: Q) -> Q {
    x - x.floor()
}

pub fn check_u(u: i64) -> Result<()> {
    if u < 3 {
        Err(Error::BadLevel(u, ""))
    } else {
        Ok(())
    }
}

pub fn check_u_odd(u: i64) -> Result<()> {
    if u < 3 || u % 2 == 0 {
        Err(Error::BadLevel(u, " and odd"))
    } else {
        Ok(())
    }
}

/// `a1 w1 + a2 w2` in the fundamental-weight basis.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FiniteWeight {
    pub a1: Q,
    pub a2: Q,
}

impl FiniteWeight {
    pub fn new(a1: Q, a2: Q) -> Self {
        FiniteWeight { a1, a2 }
    }

    pub fn int(a1: i64, a2: i64) -> Self {
        FiniteWeight { a1: qi(a1), a2: qi(a2) }
    }

    pub fn zero() -> Self {
        Self::int(0, 0)
    }

    /// `w_i` for `i = 1, 2`, `w_3 = w_1 - w_2`; `w_0` projects to zero.
    pub fn omega(i: usize) -> Self {
        match i {
            0 => Self::zero(),
            1 => Self::int(1, 0),
            2 => Self::int(0, 1),
            3 => Self::int(1, -1),
            _ => panic!("no fundamental weight w_{i}"),
        }
    }

    /// Positive roots `a_1, a_2, a_3 = a_1 + a_2`.
    pub fn alpha(i: usize) -> Self {
        match i {
            1 => Self::int(2, -1),
            2 => Self::int(-1, 2),
            3 => Self::int(1, 1),
            _ => panic!("no simple root a_{i}"),
        }
    }

    pub fn rho() -> Self {
        Self::int(1, 1)
    }

    /// Coordinates `(c1, c2)` with `x = c1 a_1 + c2 a_2`.
    pub fn root_coords(&self) -> (Q, Q) {
        ((qi(2) * self.a1 + self.a2) / 3, (self.a1 + qi(2) * self.a2) / 3)
    }

    pub fn from_root_coords(c1: Q, c2: Q) -> Self {
        FiniteWeight { a1: qi(2) * c1 - c2, a2: qi(2) * c2 - c1 }
    }

    pub fn scale(&self, s: Q) -> Self {
        FiniteWeight { a1: self.a1 * s, a2: self.a2 * s }
    }

    pub fn is_integral(&self) -> bool {
        self.a1.is_integer() && self.a2.is_integer()
    }

    pub fn in_root_lattice(&self) -> bool {
        let (c1, c2) = self.root_coords();
        c1.is_integer() && c2.is_integer()
    }

    pub fn norm2(&self) -> Q {
        bilinear(self, self)
    }

    /// Pairing with the coroot of `a_i` (the Dynkin label; `i = 3` for the highest root).
    pub fn dynkin_label(&self, i: usize) -> Q {
        match i {
            1 => self.a1,
            2 => self.a2,
            3 => self.a1 + self.a2,
            _ => panic!("no coroot {i}"),
        }
    }

    pub fn dynkin(&self) -> Self {
        FiniteWeight { a1: self.a2, a2: self.a1 }
    }
}

impl Add for FiniteWeight {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        FiniteWeight { a1: self.a1 + o.a1, a2: self.a2 + o.a2 }
    }
}
impl Sub for FiniteWeight {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        FiniteWeight { a1: self.a1 - o.a1, a2: self.a2 - o.a2 }
    }
}
impl Neg for FiniteWeight {
    type Output = Self;
    fn neg(self) -> Self {
        FiniteWeight { a1: -self.a1, a2: -self.a2 }
    }
}

impl fmt::Display for FiniteWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a1, self.a2)
    }
}

/// The invariant form, `<w_i, w_j> = (1/3) [[2, 1], [1, 2]]`.
pub fn bilinear(x: &FiniteWeight, y: &FiniteWeight) -> Q {
    (qi(2) * x.a1 * y.a1 + x.a1 * y.a2 + x.a2 * y.a1 + qi(2) * x.a2 * y.a2) / 3
}

/// `g = g1 w1^v + g2 w2^v`.  Coweights are identified with weights through the form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Coweight {
    pub g1: i64,
    pub g2: i64,
}

impl Coweight {
    pub const ZERO: Coweight = Coweight { g1: 0, g2: 0 };

    pub fn new(g1: i64, g2: i64) -> Self {
        Coweight { g1, g2 }
    }

    pub fn omega(i: usize) -> Self {
        match i {
            0 => Self::ZERO,
            1 => Self::new(1, 0),
            2 => Self::new(0, 1),
            3 => Self::new(1, -1),
            _ => panic!("no fundamental coweight {i}"),
        }
    }

    pub fn alpha(i: usize) -> Self {
        match i {
            1 => Self::new(2, -1),
            2 => Self::new(-1, 2),
            3 => Self::new(1, 1),
            _ => panic!("no simple coroot {i}"),
        }
    }

    pub fn as_weight(&self) -> FiniteWeight {
        FiniteWeight::int(self.g1, self.g2)
    }

    pub fn pair(&self, x: &FiniteWeight) -> Q {
        bilinear(&self.as_weight(), x)
    }

    pub fn pair_co(&self, o: &Coweight) -> Q {
        bilinear(&self.as_weight(), &o.as_weight())
    }

    /// `<a_i, g>`, always an integer.
    pub fn root_pairing(&self, i: usize) -> i64 {
        match i {
            1 => self.g1,
            2 => self.g2,
            3 => self.g1 + self.g2,
            _ => panic!("no root {i}"),
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        Coweight::new(self.g1 * k, self.g2 * k)
    }

    pub fn dynkin(&self) -> Self {
        Coweight::new(self.g2, self.g1)
    }

    pub fn is_zero(&self) -> bool {
        self.g1 == 0 && self.g2 == 0
    }
}

impl Add for Coweight {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Coweight::new(self.g1 + o.g1, self.g2 + o.g2)
    }
}
impl Sub for Coweight {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Coweight::new(self.g1 - o.g1, self.g2 - o.g2)
    }
}
impl Neg for Coweight {
    type Output = Self;
    fn neg(self) -> Self {
        Coweight::new(-self.g1, -self.g2)
    }
}

impl fmt::Display for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.g1, self.g2)
    }
}

/// The six elements of the Weyl group; `S3 = s1 s2 s1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Weyl {
    E,
    S1,
    S2,
    S1S2,
    S2S1,
    S3,
}

impl Weyl {
    pub const ALL: [Weyl; 6] = [Weyl::E, Weyl::S1, Weyl::S2, Weyl::S1S2, Weyl::S2S1, Weyl::S3];

    // action on fundamental-weight coordinates, rows give (a1', a2')
    fn matrix(self) -> [[i64; 2]; 2] {
        match self {
            Weyl::E => [[1, 0], [0, 1]],
            Weyl::S1 => [[-1, 0], [1, 1]],
            Weyl::S2 => [[1, 1], [0, -1]],
            // s1 s2 (a1, a2) = s1 (a1 + a2, -a2) = (-a1 - a2, a1)
            Weyl::S1S2 => [[-1, -1], [1, 0]],
            // s2 s1 (a1, a2) = s2 (-a1, a1 + a2) = (a2, -a1 - a2)
            Weyl::S2S1 => [[0, 1], [-1, -1]],
            Weyl::S3 => [[0, -1], [-1, 0]],
        }
    }

    fn from_matrix(m: [[i64; 2]; 2]) -> Weyl {
        *Weyl::ALL.iter().find(|w| w.matrix() == m).expect("not a Weyl matrix")
    }

    pub fn det(self) -> i64 {
        match self {
            Weyl::E | Weyl::S1S2 | Weyl::S2S1 => 1,
            _ => -1,
        }
    }

    /// `self ∘ o`.
    pub fn compose(self, o: Weyl) -> Weyl {
        let a = self.matrix();
        let b = o.matrix();
        let mut c = [[0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Weyl::from_matrix(c)
    }

    pub fn inverse(self) -> Weyl {
        *Weyl::ALL.iter().find(|w| self.compose(**w) == Weyl::E).unwrap()
    }

    /// Word in the simple reflections, read left to right as composition.
    pub fn from_word(word: &[u8]) -> Weyl {
        word.iter().fold(Weyl::E, |acc, &s| {
            acc.compose(match s {
                1 => Weyl::S1,
                2 => Weyl::S2,
                3 => Weyl::S3,
                _ => panic!("no reflection s{s}"),
            })
        })
    }

    pub fn act(self, x: &FiniteWeight) -> FiniteWeight {
        let m = self.matrix();
        FiniteWeight {
            a1: qi(m[0][0]) * x.a1 + qi(m[0][1]) * x.a2,
            a2: qi(m[1][0]) * x.a1 + qi(m[1][1]) * x.a2,
        }
    }

    pub fn act_shifted(self, x: &FiniteWeight) -> FiniteWeight {
        self.act(&(*x + FiniteWeight::rho())) - FiniteWeight::rho()
    }

    pub fn act_co(self, g: &Coweight) -> Coweight {
        let m = self.matrix();
        Coweight::new(m[0][0] * g.g1 + m[0][1] * g.g2, m[1][0] * g.g1 + m[1][1] * g.g2)
    }

    /// `d w d`.
    pub fn conj_dynkin(self) -> Weyl {
        match self {
            Weyl::S1 => Weyl::S2,
            Weyl::S2 => Weyl::S1,
            Weyl::S1S2 => Weyl::S2S1,
            Weyl::S2S1 => Weyl::S1S2,
            w => w,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Weyl::E => "e",
            Weyl::S1 => "s1",
            Weyl::S2 => "s2",
            Weyl::S1S2 => "s1s2",
            Weyl::S2S1 => "s2s1",
            Weyl::S3 => "s3",
        }
    }

    pub fn parse(s: &str) -> Option<Weyl> {
        Weyl::ALL.iter().copied().find(|w| w.name() == s).or(match s {
            "" | "id" | "1" => Some(Weyl::E),
            "s1s2s1" | "s2s1s2" => Some(Weyl::S3),
            _ => None,
        })
    }
}

impl fmt::Display for Weyl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Affine Dynkin labels `(l0, l1, l2)` together with a `delta` grade.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct AffineWeight {
    pub l: [Q; 3],
    pub grade: Q,
}

impl AffineWeight {
    pub fn new(l0: Q, l1: Q, l2: Q) -> Self {
        AffineWeight { l: [l0, l1, l2], grade: Q::zero() }
    }

    pub fn int(l0: i64, l1: i64, l2: i64) -> Self {
        Self::new(qi(l0), qi(l1), qi(l2))
    }

    /// Affine fundamental weight `w_i`.
    pub fn omega(i: usize) -> Self {
        let mut l = [Q::zero(); 3];
        l[i] = Q::one();
        AffineWeight { l, grade: Q::zero() }
    }

    pub fn rho() -> Self {
        Self::int(1, 1, 1)
    }

    pub fn level(&self) -> Q {
        self.l[0] + self.l[1] + self.l[2]
    }

    pub fn finite(&self) -> FiniteWeight {
        FiniteWeight::new(self.l[1], self.l[2])
    }

    pub fn scale(&self, s: Q) -> Self {
        AffineWeight { l: [self.l[0] * s, self.l[1] * s, self.l[2] * s], grade: self.grade * s }
    }

    pub fn nabla(&self, n: i64) -> Self {
        let r = n.rem_euclid(3) as usize;
        let mut l = self.l;
        l.rotate_left(r);
        AffineWeight { l, grade: self.grade }
    }

    pub fn dynkin(&self) -> Self {
        AffineWeight { l: [self.l[0], self.l[2], self.l[1]], grade: self.grade }
    }

    /// Linear action of the simple affine reflection `s_i`, `i = 0, 1, 2`.
    pub fn reflect(&self, i: usize) -> Self {
        let a = self.l[i];
        let mut l = self.l;
        for (j, x) in l.iter_mut().enumerate() {
            if j == i {
                *x = -*x;
            } else {
                *x += a;
            }
        }
        let grade = if i == 0 { self.grade - a } else { self.grade };
        AffineWeight { l, grade }
    }

    pub fn reflect_shifted(&self, i: usize) -> Self {
        (*self + Self::rho()).reflect(i) - Self::rho()
    }

    /// Shifted action of a finite Weyl element.
    pub fn weyl_shifted(&self, w: Weyl) -> Self {
        let k = self.level();
        let f = w.act_shifted(&self.finite());
        AffineWeight { l: [k - f.a1 - f.a2, f.a1, f.a2], grade: self.grade }
    }

    pub fn is_dominant_integral(&self) -> bool {
        self.l.iter().all(|x| x.is_integer() && !x.is_negative())
    }
}

impl Add for AffineWeight {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        AffineWeight {
            l: [self.l[0] + o.l[0], self.l[1] + o.l[1], self.l[2] + o.l[2]],
            grade: self.grade + o.grade,
        }
    }
}
impl Sub for AffineWeight {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + o.scale(-Q::one())
    }
}

impl fmt::Display for AffineWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.l[0], self.l[1], self.l[2])
    }
}

/// A dominant integral affine weight with nonnegative integer labels.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Label(pub [i64; 3]);

impl Label {
    pub fn new(l0: i64, l1: i64, l2: i64) -> Self {
        Label([l0, l1, l2])
    }

    /// `(u - 3) w0`.
    pub fn vacuum(u: i64) -> Self {
        Label([u - 3, 0, 0])
    }

    pub fn level(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn affine(&self) -> AffineWeight {
        AffineWeight::int(self.0[0], self.0[1], self.0[2])
    }

    pub fn finite(&self) -> FiniteWeight {
        FiniteWeight::int(self.0[1], self.0[2])
    }

    pub fn nabla(&self, n: i64) -> Self {
        let mut l = self.0;
        l.rotate_left(n.rem_euclid(3) as usize);
        Label(l)
    }

    pub fn dynkin(&self) -> Self {
        Label([self.0[0], self.0[2], self.0[1]])
    }

    /// `j = -(l1 - l2)/3`.
    pub fn j(&self) -> Q {
        q(-(self.0[1] - self.0[2]), 3)
    }

    pub fn delta(&self, u: i64) -> Q {
        let d = self.0[1] - self.0[2];
        let s = self.0[1] + self.0[2];
        q(d * (d - u) + 3 * s * (s - u + 4), 6 * u)
    }

    pub fn check(&self, u: i64) -> Result<()> {
        if self.0.iter().all(|&x| x >= 0) && self.level() == u - 3 {
            Ok(())
        } else {
            Err(Error::NotInAlcove(self.to_string(), u - 3))
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.0[0], self.0[1], self.0[2])
    }
}

/// The weights of level `u - 3`, lexicographically ordered on `(l1, l2)`.
pub fn enumerate_p(u: i64) -> Vec<Label> {
    let n = u - 3;
    let mut out = Vec::new();
    for l1 in 0..=n {
        for l2 in 0..=n - l1 {
            out.push(Label([n - l1 - l2, l1, l2]));
        }
    }
    out
}

pub fn p_index(u: i64, l: &Label) -> Option<usize> {
    if l.check(u).is_err() {
        return None;
    }
    let n = u - 3;
    let (l1, l2) = (l.0[1], l.0[2]);
    // rows l1' < l1 contribute (n - l1' + 1) labels each
    let before: i64 = (0..l1).map(|a| n - a + 1).sum();
    Some((before + l2) as usize)
}

/// `h = <mu, mu + 2 rho> / (2 (k + 3))` for a level-`k` weight.
pub fn conformal_weight(mu: &FiniteWeight, kappa: Q) -> Q {
    bilinear(mu, &(*mu + FiniteWeight::rho().scale(qi(2)))) / (qi(2) * kappa)
}

/// `k = -3 + u/2`.
pub fn level_k(u: i64) -> Q {
    q(u, 2) - qi(3)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum AdmFamily {
    /// `lambda - (u/2) w0`
    Zero,
    /// `lambda - (u/2) w1`
    One,
    /// `lambda - (u/2) w2`
    Two,
    /// `s1 . (lambda - (u/2) w1)`
    W1,
}

impl AdmFamily {
    pub const ALL: [AdmFamily; 4] = [AdmFamily::Zero, AdmFamily::One, AdmFamily::Two, AdmFamily::W1];

    pub fn tag(self) -> &'static str {
        match self {
            AdmFamily::Zero => "0",
            AdmFamily::One => "1",
            AdmFamily::Two => "2",
            AdmFamily::W1 => "w1",
        }
    }
}

/// An admissible weight at denominator 2 together with its parametrisation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Admissible {
    pub family: AdmFamily,
    pub lambda: Label,
    pub weight: AffineWeight,
}

impl Admissible {
    pub fn new(u: i64, family: AdmFamily, lambda: Label) -> Self {
        let h = q(u, 2);
        let base = |i| lambda.affine() - AffineWeight::omega(i).scale(h);
        let weight = match family {
            AdmFamily::Zero => base(0),
            AdmFamily::One => base(1),
            AdmFamily::Two => base(2),
            AdmFamily::W1 => base(1).weyl_shifted(Weyl::S1),
        };
        Admissible { family, lambda, weight }
    }

    /// `y` of the decomposition `y . (mu^I - (u/2) mu^{F,y})`.
    pub fn y(&self) -> Weyl {
        if self.family == AdmFamily::W1 {
            Weyl::S1
        } else {
            Weyl::E
        }
    }

    /// Finite part of `mu^F = y(mu^{F,y})`.
    pub fn mu_f(&self) -> FiniteWeight {
        match self.family {
            AdmFamily::Zero => FiniteWeight::zero(),
            AdmFamily::One => FiniteWeight::omega(1),
            AdmFamily::Two => FiniteWeight::omega(2),
            AdmFamily::W1 => Weyl::S1.act(&FiniteWeight::omega(1)),
        }
    }

    pub fn mu_i(&self) -> FiniteWeight {
        self.lambda.finite()
    }

    pub fn conformal_weight(&self, u: i64) -> Q {
        conformal_weight(&self.weight.finite(), q(u, 2))
    }
}

impl fmt::Display for Admissible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.weight)
    }
}

/// All admissible weights for `k = -3 + u/2`, grouped by family.
pub fn admissible_weights(u: i64) -> Result<Vec<Admissible>> {
    check_u_odd(u)?;
    let ps = enumerate_p(u);
    let mut out = Vec::with_capacity(4 * ps.len());
    for fam in AdmFamily::ALL {
        for l in &ps {
            out.push(Admissible::new(u, fam, *l));
        }
    }
    Ok(out)
}

pub fn find_admissible(u: i64, w: &AffineWeight) -> Result<Admissible> {
    admissible_weights(u)?
        .into_iter()
        .find(|a| a.weight.l == w.l)
        .ok_or_else(|| Error::NotAdmissible(w.to_string(), u))
}

/// Highest-weight data `(j, Delta)` of a Bershadsky-Polyakov module.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct BPWeight {
    pub j: Q,
    pub delta: Q,
}

pub fn bp_weight(u: i64, l: &Label) -> Result<BPWeight> {
    l.check(u)?;
    Ok(BPWeight { j: l.j(), delta: l.delta(u) })
}

/// `c = -4 (k + 1)(2k + 3)/(k + 3)`.
pub fn c_bp(u: i64) -> Q {
    let k = level_k(u);
    -qi(4) * (k + 1) * (qi(2) * k + 3) / (k + 3)
}

/// `c = 8k/(k + 3)`.
pub fn c_sl3(u: i64) -> Q {
    let k = level_k(u);
    qi(8) * k / (k + 3)
}

/// Weight and conformal weight after spectral flow by `g`.
pub fn spectral_flow_weight(g: &Coweight, mu: &FiniteWeight, delta: Q, k: Q) -> (FiniteWeight, Q) {
    (*mu + g.as_weight().scale(k), delta + g.pair(mu) + g.pair_co(g) * k / 2)
}

/// Sign and image weight of the flow `sigma^{w1^v}` on a highest-weight character.
pub fn sf_hw_table(u: i64, nu: &Admissible) -> (i64, Admissible) {
    let l = nu.lambda;
    match nu.family {
        AdmFamily::Zero => (1, Admissible::new(u, AdmFamily::One, l.nabla(-1))),
        AdmFamily::Two => (-1, Admissible::new(u, AdmFamily::W1, l)),
        AdmFamily::One => (1, Admissible::new(u, AdmFamily::Zero, l)),
        AdmFamily::W1 => (-1, Admissible::new(u, AdmFamily::Two, l.nabla(-1))),
    }
}

/// Root-lattice coset `[gamma]` with canonical root coordinates in `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GammaCoset {
    c1: Q,
    c2: Q,
}

impl GammaCoset {
    pub fn new(x: &FiniteWeight) -> Self {
        let (c1, c2) = x.root_coords();
        GammaCoset { c1: frac(c1), c2: frac(c2) }
    }

    pub fn from_root_coords(c1: Q, c2: Q) -> Self {
        GammaCoset { c1: frac(c1), c2: frac(c2) }
    }

    pub fn zero() -> Self {
        GammaCoset { c1: Q::zero(), c2: Q::zero() }
    }

    pub fn root_coords(&self) -> (Q, Q) {
        (self.c1, self.c2)
    }

    pub fn rep(&self) -> FiniteWeight {
        FiniteWeight::from_root_coords(self.c1, self.c2)
    }

    pub fn shift(&self, x: &FiniteWeight) -> Self {
        Self::new(&(self.rep() + *x))
    }

    /// `<g, gamma> mod 1`, well defined as `<P^v, Q> in Z`.
    pub fn pair(&self, g: &Coweight) -> Q {
        frac(g.pair(&self.rep()))
    }

    pub fn weyl(&self, w: Weyl) -> Self {
        Self::new(&w.act(&self.rep()))
    }

    pub fn dynkin(&self) -> Self {
        Self::new(&self.rep().dynkin())
    }

    /// Least common denominator of the root coordinates.
    pub fn denominator(&self) -> i64 {
        self.c1.denom().lcm(self.c2.denom())
    }
}

impl Add for GammaCoset {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::from_root_coords(self.c1 + o.c1, self.c2 + o.c2)
    }
}
impl Neg for GammaCoset {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_root_coords(-self.c1, -self.c2)
    }
}

impl fmt::Display for GammaCoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.c1, self.c2)
    }
}

/// `gamma(lambda, mu, nu) = (j + mu + u/6) a_2 + (nu - u/6) a_3`.
pub fn gamma_of(u: i64, l: &Label, mu: Q, nu: Q) -> GammaCoset {
    let x = FiniteWeight::alpha(2).scale(l.j() + mu + q(u, 6)) + FiniteWeight::alpha(3).scale(nu - q(u, 6));
    GammaCoset::new(&x)
}

/// Whether `<gamma, w3^v> = -j - u/6 mod 1`.
pub fn atypical(u: i64, l: &Label, gamma: &GammaCoset) -> bool {
    gamma.pair(&Coweight::omega(3)) == frac(-l.j() - q(u, 6))
}

pub fn check_atypical(u: i64, l: &Label, gamma: &GammaCoset) -> Result<()> {
    if atypical(u, l, gamma) {
        Ok(())
    } else {
        Err(Error::Atypicality {
            got: gamma.pair(&Coweight::omega(3)).to_string(),
            want: frac(-l.j() - q(u, 6)).to_string(),
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Degeneration {
    pub t1: Q,
    pub t2: Q,
    pub big_lambda1: Admissible,
    pub big_lambda2: Admissible,
    pub gamma1: GammaCoset,
    pub gamma2: GammaCoset,
}

pub fn gamma1(u: i64, l: &Label) -> GammaCoset {
    GammaCoset::new(&FiniteWeight::omega(2).scale(qi(3) * l.j() + q(u, 2)))
}

pub fn gamma2(u: i64, l: &Label) -> GammaCoset {
    GammaCoset::new(
        &(FiniteWeight::omega(2).scale(qi(3) * l.j() + q(u, 2)) - FiniteWeight::alpha(3).scale(q(u, 2))),
    )
}

pub fn degeneration_params(u: i64, l: &Label) -> Result<Degeneration> {
    check_u_odd(u)?;
    l.check(u)?;
    let [_, l1, l2] = l.0;
    Ok(Degeneration {
        t1: q(-(l1 + 2 * l2), 3) - 1 + q(u, 3),
        t2: q(2 * l1 + l2, 3) + 1 - q(u, 6),
        big_lambda1: Admissible::new(u, AdmFamily::W1, *l),
        big_lambda2: Admissible::new(u, AdmFamily::Two, l.nabla(1)),
        gamma1: gamma1(u, l),
        gamma2: gamma2(u, l),
    })
}

/// Outcome of folding into the fundamental alcove at level `u`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Alcove {
    Inside { label: Label, det: i64 },
    OnWall,
}

/// Folds the integral weight `x` into `P^{u-3}` under the shifted affine Weyl
/// group with translations by `u Q^v`.
pub fn alcove_reduce(x: &FiniteWeight, u: i64) -> Alcove {
    assert!(x.is_integral(), "alcove_reduce expects an integral weight");
    let mut a1 = x.a1.to_integer() + 1;
    let mut a2 = x.a2.to_integer() + 1;
    if a1 % u == 0 || a2 % u == 0 || (a1 + a2) % u == 0 {
        return Alcove::OnWall;
    }
    let mut det = 1;
    loop {
        if a1 <= 0 {
            a2 += a1;
            a1 = -a1;
        } else if a2 <= 0 {
            a1 += a2;
            a2 = -a2;
        } else if a1 + a2 >= u {
            let (b1, b2) = (u - a2, u - a1);
            a1 = b1;
            a2 = b2;
        } else {
            break;
        }
        det = -det;
    }
    Alcove::Inside { label: Label([u - 3 - (a1 - 1) - (a2 - 1), a1 - 1, a2 - 1]), det }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn form_values() {
        let r = FiniteWeight::rho();
        assert_eq!(bilinear(&r, &r), qi(2));
        assert_eq!(FiniteWeight::omega(1).norm2(), q(2, 3));
        assert_eq!(FiniteWeight::alpha(3).norm2(), qi(2));
        assert_eq!(bilinear(&FiniteWeight::alpha(1), &FiniteWeight::alpha(2)), qi(-1));
        for i in 1..=3 {
            assert_eq!(FiniteWeight::alpha(i), Coweight::alpha(i).as_weight());
        }
    }

    #[test]
    fn root_coordinates_round_trip() {
        let x = FiniteWeight::new(q(3, 7), q(-5, 2));
        let (c1, c2) = x.root_coords();
        assert_eq!(FiniteWeight::from_root_coords(c1, c2), x);
        assert_eq!(FiniteWeight::alpha(1).root_coords(), (qi(1), qi(0)));
    }

    #[test]
    fn weyl_group() {
        assert_eq!(Weyl::S1.act_shifted(&FiniteWeight::zero()), FiniteWeight::int(-2, 1));
        assert_eq!(Weyl::from_word(&[1, 2, 1]), Weyl::S3);
        assert_eq!(Weyl::from_word(&[2, 1, 2]), Weyl::S3);
        assert_eq!(Weyl::ALL.iter().map(|w| w.det()).sum::<i64>(), 0);
        let x = FiniteWeight::int(3, -1);
        assert_eq!(Weyl::S3.act(&x), FiniteWeight::int(1, -3));
        assert_eq!(Weyl::S1.act_co(&Coweight::omega(3)), -Coweight::omega(1));
        assert_eq!(Weyl::S2.act_co(&Coweight::omega(3)), Coweight::omega(2));
        assert_eq!(Weyl::S3.act_co(&Coweight::omega(3)), Coweight::omega(3));
        for w in Weyl::ALL {
            assert_eq!(w.compose(w.inverse()), Weyl::E);
            assert_eq!(w.conj_dynkin().act(&x.dynkin()), w.act(&x).dynkin());
        }
    }

    #[test]
    fn outer_automorphisms() {
        let v = AffineWeight::int(2, 0, 0);
        assert_eq!(v.nabla(1), AffineWeight::int(0, 0, 2));
        assert_eq!(AffineWeight::int(0, 0, 2).nabla(-1), v);
        assert_eq!(AffineWeight::int(1, 1, 0).dynkin(), AffineWeight::int(1, 0, 1));
        let u = 7;
        assert_eq!(Label::vacuum(u).nabla(1).dynkin(), Label::new(0, u - 3, 0));
    }

    #[test]
    fn p_sets() {
        assert_eq!(enumerate_p(3), vec![Label::new(0, 0, 0)]);
        let p5 = enumerate_p(5);
        let want = [(2, 0, 0), (1, 0, 1), (0, 0, 2), (1, 1, 0), (0, 1, 1), (0, 2, 0)];
        assert_eq!(p5, want.iter().map(|&(a, b, c)| Label::new(a, b, c)).collect::<Vec<_>>());
        for u in 3..12 {
            let ps = enumerate_p(u);
            assert_eq!(ps.len() as i64, (u - 1) * (u - 2) / 2);
            for (i, l) in ps.iter().enumerate() {
                assert_eq!(p_index(u, l), Some(i));
            }
        }
    }

    #[test]
    fn admissible_sets() {
        let a3 = admissible_weights(3).unwrap();
        assert_eq!(a3.len(), 4);
        let vac = Admissible::new(7, AdmFamily::Zero, Label::vacuum(7));
        assert_eq!(vac.weight, AffineWeight::new(level_k(7), qi(0), qi(0)));
        let l = Label::new(1, 0, 1);
        let w1 = Admissible::new(5, AdmFamily::W1, l).weight;
        assert_eq!(w1, AffineWeight::new(q(5, 2) - 3, q(5, 2) - 2, q(5, 2) - 3));
        assert!(admissible_weights(4).is_err());
    }

    #[test]
    fn bp_data() {
        for u in [3, 5, 7] {
            assert_eq!(bp_weight(u, &Label::vacuum(u)).unwrap(), BPWeight { j: qi(0), delta: qi(0) });
        }
        let b = bp_weight(5, &Label::new(0, 2, 0)).unwrap();
        assert_eq!(b, BPWeight { j: q(-2, 3), delta: qi(0) });
        let b = bp_weight(5, &Label::new(0, 0, 2)).unwrap();
        assert_eq!(b, BPWeight { j: q(2, 3), delta: q(2, 3) });
        assert_eq!(c_bp(3), qi(0));
        assert_eq!(c_bp(5), q(-8, 5));
        assert!(bp_weight(5, &Label::new(1, 1, 1)).is_err());
    }

    // weights of the images of the highest-weight vector under conjugation and one unit of flow
    #[test]
    fn bp_conj_and_flow_oracle() {
        for u in [3, 5, 7, 9] {
            let shift = q(u - 3, 3);
            for l in enumerate_p(u) {
                let b = bp_weight(u, &l).unwrap();
                let low = b.j - qi(l.0[2]);
                let c = bp_weight(u, &l.nabla(1).dynkin()).unwrap();
                assert_eq!(c, BPWeight { j: -low - shift, delta: b.delta });
                let f = bp_weight(u, &l.nabla(1)).unwrap();
                assert_eq!(f, BPWeight { j: low + shift, delta: b.delta + low + shift });
            }
        }
    }

    #[test]
    fn degeneration_example() {
        let l = Label::new(0, 0, 2);
        let d = degeneration_params(5, &l).unwrap();
        assert_eq!(frac(d.t1 - d.t2), q(1, 2));
        assert_eq!(d.big_lambda2.weight, AffineWeight::new(qi(0), qi(2), q(-5, 2)));
        assert_eq!(gamma_of(5, &l, qi(0), d.t2), d.gamma2);
        assert_eq!(gamma_of(5, &l, qi(0), d.t1), d.gamma1);
    }

    #[test]
    fn alcove_examples() {
        let u = 5;
        for l in enumerate_p(u) {
            assert_eq!(alcove_reduce(&l.finite(), u), Alcove::Inside { label: l, det: 1 });
            let x = Weyl::S1.act_shifted(&l.finite());
            assert_eq!(alcove_reduce(&x, u), Alcove::Inside { label: l, det: -1 });
        }
        assert_eq!(alcove_reduce(&FiniteWeight::int(u - 1, 0), u), Alcove::OnWall);
    }

    #[test]
    fn sf_table_rows() {
        let u = 5;
        let l = Label::new(1, 1, 0);
        let (e, x) = sf_hw_table(u, &Admissible::new(u, AdmFamily::Zero, l));
        assert_eq!((e, x), (1, Admissible::new(u, AdmFamily::One, l.nabla(-1))));
        let (e, x) = sf_hw_table(u, &Admissible::new(u, AdmFamily::Two, l));
        assert_eq!((e, x), (-1, Admissible::new(u, AdmFamily::W1, l)));
        let (e, x) = sf_hw_table(u, &Admissible::new(u, AdmFamily::One, l));
        assert_eq!((e, x), (1, Admissible::new(u, AdmFamily::Zero, l)));
    }
}
