//! Spectral-flow transport of sl(3) characters and free-field character factors.

use num_traits::Zero;

use super::qhr::qhr_character;
use super::series::{eta_series, f_product, fermionic_ch, mono, Mono, QSeries};
use crate::error::Result;
use crate::modular::RelaxedLabel;
use crate::weights::{frac, level_k, q, qi, Coweight, FiniteWeight, Label, Q};

/// `z^{k g} q^{k |g|^2 / 2} ch(z q^g; q)` on a character in Dynkin-label exponents.
pub fn sf_character_transport(g: &Coweight, ch: &QSeries, k: Q) -> Result<QSeries> {
    let shift = k * g.pair_co(g) / 2;
    let gk = [qi(g.g1) * k, qi(g.g2) * k];
    ch.flow(shift, |m| ([m[0] + gk[0], m[1] + gk[1]], g.pair(&FiniteWeight::new(m[0], m[1]))))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FreeFieldKind {
    FermionicCh,
    FermionicSch,
    GhostRelaxed,
    GhostVacuum,
    LatticeRelaxed,
}

/// `prod x^e * delta(var^p) * series`, kept unexpanded.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormalDeltaSeries {
    pub prefactor: Vec<(&'static str, Q)>,
    pub delta: (&'static str, Q),
    pub flow: i64,
    /// Coset of the delta-function support.
    pub coset: Q,
    pub top_weight: Q,
    pub series: QSeries,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FreeFieldCharacter {
    Series(QSeries),
    /// `series / (1 - x^pole)`.
    Pole { series: QSeries, pole: Mono },
    Delta(FormalDeltaSeries),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct FreeFieldParams {
    pub u: i64,
    pub coset: Q,
    pub flow: i64,
}

fn inv_eta2(order: i64) -> Result<QSeries> {
    let e = eta_series(order);
    e.mul(&e)?.inverse()
}

pub fn free_field_character(kind: FreeFieldKind, p: FreeFieldParams, order: i64) -> Result<FreeFieldCharacter> {
    let y = mono(qi(1), Q::zero());
    Ok(match kind {
        FreeFieldKind::FermionicCh => FreeFieldCharacter::Series(fermionic_ch(1, y, order)?),
        FreeFieldKind::FermionicSch => FreeFieldCharacter::Series(f_product(1, y, order, None)?),
        FreeFieldKind::GhostVacuum => {
            let mut den = QSeries::one(1, order);
            for i in 1..=order {
                den = den.mul(&QSeries::one_minus(1, y, i, order))?;
                den = den.mul(&QSeries::one_minus(1, mono(qi(-1), Q::zero()), i, order))?;
            }
            FreeFieldCharacter::Pole { series: den.inverse()?.with_offset(q(-1, 12)), pole: mono(qi(-1), Q::zero()) }
        }
        FreeFieldKind::GhostRelaxed => FreeFieldCharacter::Delta(FormalDeltaSeries {
            prefactor: vec![("y", frac(p.coset))],
            delta: ("y", qi(1)),
            flow: p.flow,
            coset: frac(p.coset),
            top_weight: Q::zero(),
            series: inv_eta2(order)?,
        }),
        FreeFieldKind::LatticeRelaxed => FreeFieldCharacter::Delta(FormalDeltaSeries {
            prefactor: vec![("z_a", qi(-1)), ("z_d", qi(2) * frac(p.coset))],
            delta: ("z_d", qi(2)),
            flow: p.flow,
            coset: frac(p.coset),
            top_weight: level_k(p.u) / 3,
            series: inv_eta2(order)?,
        }),
    })
}

/// The three factors of the generalised character of a flowed fully relaxed module.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneralizedRelaxedCharacter {
    pub bp_label: Label,
    pub bp: QSeries,
    pub ghost: FormalDeltaSeries,
    pub lattice: FormalDeltaSeries,
}

impl GeneralizedRelaxedCharacter {
    /// Conformal weight of the top space, when no factor is flowed.
    pub fn top_weight(&self, u: i64) -> Option<Q> {
        (self.ghost.flow == 0 && self.lattice.flow == 0)
            .then(|| self.bp.offset() + crate::weights::c_bp(u) / 24 + self.ghost.top_weight + self.lattice.top_weight)
    }
}

/// `(mu, nu)` with `[gamma] = [(j + mu + u/6) a2 + (nu - u/6) a3]`.
pub fn relaxed_parameters(u: i64, label: &RelaxedLabel) -> (Q, Q) {
    let (c1, c2) = label.gamma.root_coords();
    let nu = c1 + q(u, 6);
    (frac(c2 - label.lambda.j() - nu), frac(nu))
}

pub fn generalized_relaxed_character(u: i64, label: &RelaxedLabel, order: i64) -> Result<GeneralizedRelaxedCharacter> {
    label.lambda.check(u)?;
    let (mu, nu) = relaxed_parameters(u, label);
    let g = label.g;
    let l2 = g.root_pairing(2);
    let bp_label = label.lambda.nabla(l2);
    let ghost = match free_field_character(FreeFieldKind::GhostRelaxed, FreeFieldParams { u, coset: mu, flow: l2 }, order)? {
        FreeFieldCharacter::Delta(d) => d,
        _ => unreachable!(),
    };
    let lat = FreeFieldParams { u, coset: nu + qi(g.root_pairing(1)) * q(u, 6), flow: g.root_pairing(3) };
    let lattice = match free_field_character(FreeFieldKind::LatticeRelaxed, lat, order)? {
        FreeFieldCharacter::Delta(d) => d,
        _ => unreachable!(),
    };
    Ok(GeneralizedRelaxedCharacter { bp_label, bp: qhr_character(u, &bp_label, order)?, ghost, lattice })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::series::mono0;
    use crate::characters::orbit::sl3_adm_character;
    use crate::weights::{gamma_of, Admissible, AdmFamily};
    use rand::{Rng, SeedableRng};

    fn abs_terms(s: &QSeries) -> std::collections::BTreeMap<(Q, Mono), i128> {
        s.layers().flat_map(|(n, p)| p.iter().map(move |(m, c)| ((s.offset() + qi(*n), *m), *c))).collect()
    }

    #[test]
    fn affine_flow_composes() {
        let u = 5;
        let k = level_k(u);
        let mu = Admissible::new(u, AdmFamily::Zero, Label::new(0, 1, 1)).weight;
        let ch = sl3_adm_character(&mu, 6, false).unwrap();
        assert_eq!(sf_character_transport(&Coweight::ZERO, &ch, k).unwrap(), ch);
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..8 {
            let mut s = QSeries::zero(2, q(1, 5), 40);
            for _ in 0..6 {
                let (c1, c2) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
                let m = [qi(2 * c1 - c2 + 1), qi(2 * c2 - c1)];
                s.add_term(rng.gen_range(0..4), m, rng.gen_range(-5..=5));
            }
            let g = Coweight::new(rng.gen_range(-2..=2), rng.gen_range(-2..=2));
            let h = Coweight::new(rng.gen_range(-2..=2), rng.gen_range(-2..=2));
            let two = sf_character_transport(&g, &sf_character_transport(&h, &s, k).unwrap(), k).unwrap();
            let one = sf_character_transport(&(g + h), &s, k).unwrap();
            assert_eq!(abs_terms(&two), abs_terms(&one));
        }
        let top = QSeries::monomial(2, ch.offset(), 0, [mu.finite().a1, mu.finite().a2], 1, 0);
        let t = sf_character_transport(&Coweight::new(1, 0), &top, k).unwrap();
        let (w, h) = crate::weights::spectral_flow_weight(&Coweight::new(1, 0), &mu.finite(), ch.offset(), k);
        assert_eq!(abs_terms(&t).get(&(h, [w.a1, w.a2])), Some(&1));
    }

    #[test]
    fn free_field_shapes() {
        let f = match free_field_character(FreeFieldKind::FermionicCh, FreeFieldParams::default(), 4).unwrap() {
            FreeFieldCharacter::Series(s) => s,
            _ => panic!(),
        };
        assert_eq!(f.offset(), q(1, 12));
        assert_eq!(f.coeff(1, &mono(qi(1), Q::zero())), 1);
        assert_eq!(f.coeff(1, &mono0()), 1);
        match free_field_character(FreeFieldKind::GhostVacuum, FreeFieldParams::default(), 4).unwrap() {
            FreeFieldCharacter::Pole { series, pole } => {
                assert_eq!(pole, mono(qi(-1), Q::zero()));
                let sch = f_product(1, mono(qi(1), Q::zero()), 4, None).unwrap();
                let back = series.mul(&sch).unwrap();
                let mut want = QSeries::one_minus(1, mono(qi(-1), Q::zero()), 0, 4);
                want = want.with_offset(Q::zero());
                assert_eq!(back, want);
            }
            _ => panic!(),
        }
        match free_field_character(FreeFieldKind::LatticeRelaxed, FreeFieldParams { u: 5, coset: q(1, 3), flow: 0 }, 4).unwrap() {
            FreeFieldCharacter::Delta(d) => {
                assert_eq!(d.prefactor, vec![("z_a", qi(-1)), ("z_d", q(2, 3))]);
                assert_eq!(d.series.offset(), q(-1, 12));
                assert_eq!(d.series.coeff(1, &mono0()), 2);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn relaxed_record() {
        let u = 5;
        let l = Label::new(0, 1, 1);
        let (mu, nu) = (q(1, 7), q(2, 9));
        let r = RelaxedLabel::new(Coweight::ZERO, l, gamma_of(u, &l, mu, nu));
        let c = generalized_relaxed_character(u, &r, 4).unwrap();
        assert_eq!((c.ghost.coset, c.lattice.coset), (mu, nu));
        assert_eq!(c.bp_label, l);
        assert_eq!(c.top_weight(u), Some(l.delta(u) + level_k(u) / 3));
        for g in [Coweight::omega(1), Coweight::omega(2)] {
            let base = RelaxedLabel::new(Coweight::new(1, -1), l, r.gamma);
            let moved = RelaxedLabel::new(base.g + g, l, r.gamma);
            let (a, b) = (generalized_relaxed_character(u, &base, 2).unwrap(), generalized_relaxed_character(u, &moved, 2).unwrap());
            assert_eq!(b.bp_label, a.bp_label.nabla(g.root_pairing(2)));
            assert_eq!(b.ghost.flow, a.ghost.flow + g.root_pairing(2));
            assert_eq!(b.lattice.flow, a.lattice.flow + g.root_pairing(3));
            assert_eq!(b.lattice.coset, frac(a.lattice.coset + qi(g.root_pairing(1)) * q(u, 6)));
        }
    }
}
