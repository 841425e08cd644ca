use proptest::prelude::*;

use sl3bp::characters::{mono, QSeries};
use sl3bp::cyclo::{CycNum, Phase};
use sl3bp::fusion::{GrothSum, ModuleLabel};
use sl3bp::io::{cyc_from_json, parse_affine, parse_coweight, parse_gamma, parse_label};
use sl3bp::modular::{galois_apply, GaloisChoice};
use sl3bp::weights::{bilinear, enumerate_p, q, qi, AdmFamily, Coweight, FiniteWeight, GammaCoset, Label, Weyl};

fn cyc(n: u32) -> impl Strategy<Value = CycNum> {
    prop::collection::vec((-6i64..=6, 0i64..60, 1i64..5), 0..6).prop_map(move |ts| {
        let mut x = CycNum::zero(n);
        for (c, k, d) in ts {
            x += &CycNum::root_of_unity(n, k).scale_int(c).scale(&num_rational::BigRational::new(1.into(), d.into()));
        }
        x
    })
}

fn weight() -> impl Strategy<Value = FiniteWeight> {
    (-20i64..20, 1i64..7, -20i64..20, 1i64..7).prop_map(|(a, b, c, d)| FiniteWeight::new(q(a, b), q(c, d)))
}

fn weyl() -> impl Strategy<Value = Weyl> {
    (0usize..6).prop_map(|i| Weyl::ALL[i])
}

fn label(u: i64) -> impl Strategy<Value = Label> {
    let ps = enumerate_p(u);
    (0..ps.len()).prop_map(move |i| ps[i])
}

fn gamma() -> impl Strategy<Value = GammaCoset> {
    (0i64..40, 1i64..13, 0i64..40, 1i64..13).prop_map(|(a, b, c, d)| GammaCoset::from_root_coords(q(a, b), q(c, d)))
}

fn coweight() -> impl Strategy<Value = Coweight> {
    (-4i64..=4, -4i64..=4).prop_map(|(a, b)| Coweight::new(a, b))
}

fn module_label() -> impl Strategy<Value = ModuleLabel> {
    (0usize..5, label(7), gamma(), coweight(), weyl(), 0usize..4).prop_map(|(k, l, g, h, w, f)| match k {
        0 => ModuleLabel::Bp(l),
        1 => ModuleLabel::relaxed(h, l, g),
        2 => ModuleLabel::semi(w, h, l, g),
        _ => ModuleLabel::hw(w, h, AdmFamily::ALL[f], l),
    })
}

fn series() -> impl Strategy<Value = QSeries> {
    let term = (0i64..6, -4i64..5, -3i64..4, -50i64..50);
    (prop::collection::vec(term, 0..20), -5i64..5, 1i64..7).prop_map(|(ts, a, b)| {
        let mut s = QSeries::zero(2, q(a, b), 6);
        for (n, x, y, c) in ts {
            if c != 0 {
                s.add_term(n, mono(qi(x), q(y, 3)), c as i128);
            }
        }
        s
    })
}

proptest! {
    #[test]
    fn cyclotomic_field_axioms(a in cyc(60), b in cyc(60), c in cyc(60)) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(a.conj().conj(), a.clone());
        let z = (&a * &b).to_complex() - a.to_complex() * b.to_complex();
        prop_assert!(z.norm() < 1e-8 * (1.0 + a.to_complex().norm() * b.to_complex().norm()));
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        prop_assert_eq!(cyc_from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn galois_is_a_ring_map(a in cyc(60), b in cyc(60)) {
        let s = |x: &CycNum| galois_apply(5, x, GaloisChoice::Standard).unwrap();
        prop_assert_eq!(s(&(&a * &b)), &s(&a) * &s(&b));
        prop_assert_eq!(s(&(&a + &b)), &s(&a) + &s(&b));
        prop_assert_eq!(s(&a.conj()), s(&a).conj());
    }

    #[test]
    fn phases_add(a in -50i64..50, b in 1i64..30, c in -50i64..50, d in 1i64..30) {
        let (x, y) = (Phase::from_frac(a, b), Phase::from_frac(c, d));
        let z = (x + y).to_complex() - x.to_complex() * y.to_complex();
        prop_assert!(z.norm() < 1e-12);
        prop_assert!((x + (-x)).is_trivial());
    }

    #[test]
    fn weyl_action_is_isometric(x in weight(), y in weight(), v in weyl(), w in weyl()) {
        prop_assert_eq!(bilinear(&v.act(&x), &v.act(&y)), bilinear(&x, &y));
        prop_assert_eq!(v.compose(w).act(&x), v.act(&w.act(&x)));
        prop_assert_eq!(v.compose(w).det(), v.det() * w.det());
        prop_assert_eq!(v.compose(v.inverse()), Weyl::E);
        prop_assert_eq!(v.act_shifted(&x) + FiniteWeight::rho(), v.act(&(x + FiniteWeight::rho())));
        let (c1, c2) = x.root_coords();
        prop_assert_eq!(FiniteWeight::from_root_coords(c1, c2), x);
    }

    #[test]
    fn outer_automorphisms(l in label(9)) {
        prop_assert_eq!(l.nabla(3), l);
        prop_assert_eq!(l.nabla(1).nabla(-1), l);
        prop_assert_eq!(l.dynkin().dynkin(), l);
        prop_assert_eq!(l.dynkin().nabla(1).dynkin(), l.nabla(-1));
        prop_assert!(l.nabla(1).check(9).is_ok());
    }

    #[test]
    fn text_round_trips(l in label(9), g in gamma(), h in coweight(), m in module_label()) {
        prop_assert_eq!(parse_label(&l.to_string(), Some(9)).unwrap(), l);
        prop_assert_eq!(parse_affine(&l.affine().to_string()).unwrap(), l.affine());
        prop_assert_eq!(parse_gamma(&g.to_string()).unwrap(), g);
        prop_assert_eq!(parse_coweight(&h.to_string()).unwrap(), h);
        let back: ModuleLabel = m.to_string().parse().unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn groth_sum_round_trip(ls in prop::collection::vec((module_label(), -3i64..4), 0..8)) {
        let mut s = GrothSum::new();
        for (l, c) in ls {
            s.add(l, c);
        }
        let j = s.to_json();
        let back = GrothSum::from_json(&j).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(back.to_json().to_string(), j.to_string());
    }

    #[test]
    fn qseries_round_trip_and_inverse(s in series()) {
        let j = s.to_json();
        let back = QSeries::from_json(&j).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(back.to_json().to_string(), j.to_string());
        let qs = QSeries::monomial(2, qi(0), 1, mono(qi(0), qi(0)), 1, 6).mul(&s.clone().with_offset(qi(0))).unwrap();
        let unit = QSeries::one(2, 6).add(&qs).unwrap();
        let inv = unit.inverse().unwrap();
        prop_assert_eq!(unit.mul(&inv).unwrap().truncate(5), QSeries::one(2, 5));
    }

    #[test]
    fn flows_and_twists_compose(m in module_label(), a in coweight(), b in coweight(), v in weyl(), w in weyl()) {
        prop_assert_eq!(m.flowed(a).flowed(b), m.flowed(a + b));
        prop_assert_eq!(m.twisted(v).twisted(w), m.twisted(w.compose(v)));
        prop_assert_eq!(m.canonical().canonical(), m.canonical());
        prop_assert_eq!(m.twisted(Weyl::E), m);
    }
}
