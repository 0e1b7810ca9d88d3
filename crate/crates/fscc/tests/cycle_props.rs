//! Properties of cycles and 2D cycles over the rationals.

use fscc::clifford::{moebius_map, sl2_clifford};
use fscc::cycle2d::IntersectMode;
use fscc::scalar::rat;
use fscc::{Cycle, Cycle2D, Frame, Rational, SignMatrix, Slot};
use proptest::prelude::*;

fn small() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| rat(n, d))
}

fn nonzero() -> impl Strategy<Value = Rational> {
    small().prop_filter("nonzero", |q| *q != rat(0, 1))
}

fn sig() -> impl Strategy<Value = Rational> {
    (-1i64..=1).prop_map(|s| rat(s, 1))
}

fn pm() -> impl Strategy<Value = Rational> {
    prop_oneof![Just(rat(1, 1)), Just(rat(-1, 1))]
}

fn cycle(s: &Rational, v: &[Rational]) -> Cycle2D<Rational> {
    Cycle2D::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone(), Frame::plane(s.clone())).unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(small(), 4)
}

fn zero() -> Rational {
    rat(0, 1)
}

proptest! {
    #[test]
    fn matrix_round_trip(s in sig(), s1 in sig(), v in coeffs(), a in pm(), b in pm()) {
        let c = cycle(&s, &v);
        let es = Frame::plane(s1);
        let sign = SignMatrix::new(vec![a, b]);
        let m = c.to_matrix(Some(&es), Some(&sign)).unwrap();
        let back = Cycle::from_matrix(&m, c.metric(), Some(&es), Some(&sign)).unwrap();
        prop_assert!(back.the_same_as(&c));
    }

    #[test]
    fn moebius_covariance(
        s in sig(),
        v in coeffs(),
        w in prop::collection::vec(small(), 2),
        (b, cc, d) in (small(), small(), nonzero()),
    ) {
        let e = Frame::plane(s);
        let a = (rat(1, 1) + &b * &cc) / &d;
        let c = cycle(e.g(1), &v)
            .subject_to(vec![Box::new(|c: &Cycle<Rational>| c.val(&w))], Some(&[Slot::M]))
            .unwrap();
        let g = sl2_clifford(&a, &b, &cc, &d, &e, true);
        let gw = moebius_map(&g, &w, &e);
        prop_assume!(gw.is_ok());
        let img = c.sl2_similarity(&a, &b, &cc, &d, None, None, true).unwrap();
        prop_assert_eq!(img.val(&gw.unwrap()).unwrap(), zero());
    }

    #[test]
    fn orthogonality_is_moebius_invariant(
        s in sig(),
        s1 in sig(),
        v in coeffs(),
        v1 in coeffs(),
        (b, cc, d) in (small(), small(), nonzero()),
    ) {
        let es = Frame::plane(s1);
        let a = (rat(1, 1) + &b * &cc) / &d;
        let (c, c1) = (cycle(&s, &v), cycle(&s, &v1));
        let before = c.inner_product(&c1, Some(&es), None).unwrap();
        let g = |x: &Cycle2D<Rational>| x.sl2_similarity(&a, &b, &cc, &d, Some(&es), None, true).unwrap();
        let after = g(&c).inner_product(&g(&c1), Some(&es), None).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn reflection_in_itself_is_identity(s in sig(), s1 in sig(), v in coeffs()) {
        let c = cycle(&s, &v);
        let es = Frame::plane(s1);
        prop_assume!(c.det(Some(&es), None).map(|d| d != zero()).unwrap_or(false));
        let r = c.cycle_similarity(&c, Some(&es), None, None).unwrap();
        prop_assert!(r.the_same_as(&c));
    }

    #[test]
    fn roots_lie_on_the_cycle(s in sig(), v in coeffs(), y in small(), first in any::<bool>()) {
        let c = cycle(&s, &v);
        if let Ok(xs) = c.roots(&y, first) {
            for x in xs {
                let p = if first { vec![x, y.clone()] } else { vec![y.clone(), x] };
                prop_assert_eq!(c.val(&p).unwrap(), zero());
            }
        }
    }

    #[test]
    fn focus_is_on_the_axis(s in sig(), s4 in sig(), v in coeffs()) {
        let c = cycle(&s, &v);
        prop_assume!(v[0] != zero() && v[2] != zero());
        let f = c.focus(Some(&Frame::plane(s4))).unwrap();
        let centre = c.center(None).unwrap();
        prop_assert_eq!(&f[0], &centre[0]);
    }

    #[test]
    fn line_intersections_substitute_to_zero(
        s in sig(),
        (a, b) in (small(), small()),
        (u1, u2) in (small(), small()),
        (k, n) in (nonzero(), small()),
    ) {
        prop_assume!(u1 != u2);
        let e = Frame::plane(s);
        let p1 = vec![u1.clone(), &a * &u1 + &b];
        let p2 = vec![u2.clone(), &a * &u2 + &b];
        let c = Cycle::new(k, vec![zero(), n], zero(), e).unwrap().subject_to(
            vec![
                Box::new(|c: &Cycle<Rational>| c.val(&p1)),
                Box::new(|c: &Cycle<Rational>| c.val(&p2)),
            ],
            Some(&[Slot::L(0), Slot::M]),
        );
        prop_assume!(c.is_ok());
        let c = Cycle2D::from_cycle(c.unwrap()).unwrap();
        let roots = c.line_intersect(&a, &b, IntersectMode::Corrected).unwrap();
        for r in &roots {
            prop_assert_eq!(c.val(&[r.clone(), &a * r + &b]).unwrap(), zero());
        }
    }
}
