//! Properties of the scalar rings and the Clifford algebra.

use fscc::clifford::{moebius_map, sl2_clifford};
use fscc::scalar::rat;
use fscc::{jump, Frame, Jet, Multivector, Rational, Scalar};
use proptest::prelude::*;

fn small() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| rat(n, d))
}

fn nonzero() -> impl Strategy<Value = Rational> {
    small().prop_filter("nonzero", |q| *q != rat(0, 1))
}

fn signature(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-1i64..=1).prop_map(|s| rat(s, 1)), n)
}

fn multivector(frame: &Frame<Rational>) -> impl Strategy<Value = Multivector<Rational>> {
    let frame = frame.clone();
    let n = 1usize << frame.dim();
    prop::collection::vec(small(), n).prop_map(move |cs| {
        cs.iter()
            .enumerate()
            .fold(Multivector::zero(&frame), |acc, (mask, c)| {
                acc.add(&Multivector::blade(&frame, mask, c.clone())).unwrap()
            })
    })
}

fn frame_and(k: usize) -> impl Strategy<Value = (Frame<Rational>, Vec<Multivector<Rational>>)> {
    (1usize..=4)
        .prop_flat_map(signature)
        .prop_flat_map(move |sig| {
            let f = Frame::new(sig).unwrap();
            (Just(f.clone()), prop::collection::vec(multivector(&f), k))
        })
}

#[derive(Debug, Clone)]
enum Expr {
    X,
    C(i64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

impl Expr {
    fn degree(&self) -> usize {
        match self {
            Expr::X => 1,
            Expr::C(_) => 0,
            Expr::Add(a, b) | Expr::Sub(a, b) => a.degree().max(b.degree()),
            Expr::Mul(a, b) => a.degree() + b.degree(),
        }
    }

    fn eval<S: Scalar>(&self, x: &S) -> S {
        match self {
            Expr::X => x.clone(),
            Expr::C(c) => S::from_i64(*c),
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
        }
    }
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![Just(Expr::X), (-5i64..=5).prop_map(Expr::C)];
    leaf.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
        ]
    })
}

/// Taylor coefficients at `x0` of a polynomial of degree at most `t`, from
/// its values at `x0, x0 + 1, ..., x0 + t`: forward differences give the
/// Newton form `sum D^i / i! * s (s - 1) ... (s - i + 1)`, expanded in `s`.
fn taylor_oracle(p: impl Fn(&Rational) -> Rational, x0: &Rational, t: usize) -> Vec<Rational> {
    let mut diffs: Vec<Rational> = (0..=t).map(|j| p(&(x0 + rat(j as i64, 1)))).collect();
    let mut newton = Vec::new();
    for _ in 0..=t {
        newton.push(diffs[0].clone());
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    let mut out = vec![rat(0, 1); t + 1];
    let mut falling = vec![rat(1, 1)];
    let mut fact = rat(1, 1);
    for (i, d) in newton.iter().enumerate() {
        if i > 0 {
            fact *= rat(i as i64, 1);
            // falling *= (s - (i - 1))
            let mut next = vec![rat(0, 1); falling.len() + 1];
            for (j, c) in falling.iter().enumerate() {
                next[j + 1] = &next[j + 1] + c;
                next[j] = &next[j] - c * rat(i as i64 - 1, 1);
            }
            falling = next;
        }
        for (j, c) in falling.iter().enumerate() {
            out[j] = &out[j] + c * d / &fact;
        }
    }
    out
}

proptest! {
    #[test]
    fn jump_is_multiplicative(a in nonzero(), b in nonzero()) {
        prop_assert_eq!(jump(&(&a * &b)), jump(&a) * jump(&b));
        prop_assert_eq!(jump(&a) * jump(&a), rat(1, 1));
    }

    #[test]
    fn jet_coefficients_match_difference_oracle(e in expr(), x0 in small()) {
        let t = 5;
        prop_assume!(e.degree() <= t);
        let x = Jet::constant(x0.clone()) + Jet::eps();
        let j = e.eval(&x);
        let oracle = taylor_oracle(|v| e.eval(v), &x0, t);
        for (i, want) in oracle.iter().enumerate() {
            prop_assert_eq!(&j.coeff(i).unwrap(), want);
        }
    }

    #[test]
    fn jet_division_inverts_multiplication(a in small(), b in nonzero(), c in small()) {
        let p = Jet::constant(a) + Jet::eps() * Jet::constant(c);
        let q = Jet::constant(b) + Jet::eps();
        let r = (p.clone() * q.clone()).div(&q).unwrap();
        for i in 0..=4 {
            prop_assert_eq!(r.coeff(i).unwrap(), p.coeff(i).unwrap());
        }
    }

    #[test]
    fn geometric_product_is_associative((_f, v) in frame_and(3)) {
        let ab_c = v[0].gp(&v[1]).unwrap().gp(&v[2]).unwrap();
        let a_bc = v[0].gp(&v[1].gp(&v[2]).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
    }

    #[test]
    fn geometric_product_is_bilinear((_f, v) in frame_and(3), s in small()) {
        let left = v[0].scale(&s).add(&v[1]).unwrap().gp(&v[2]).unwrap();
        let right = v[0].gp(&v[2]).unwrap().scale(&s).add(&v[1].gp(&v[2]).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn conjugation_and_reversion_reverse_products((_f, v) in frame_and(2)) {
        let ab = v[0].gp(&v[1]).unwrap();
        prop_assert_eq!(ab.bar(), v[1].bar().gp(&v[0].bar()).unwrap());
        prop_assert_eq!(ab.star(), v[1].star().gp(&v[0].star()).unwrap());
    }

    #[test]
    fn vector_square_is_the_quadratic_form(sig in (1usize..=4).prop_flat_map(signature), xs in prop::collection::vec(small(), 4)) {
        let f = Frame::new(sig.clone()).unwrap();
        let x = &xs[..f.dim()];
        let xv = Multivector::vector(&f, x);
        let want = x.iter().zip(&sig).fold(rat(0, 1), |acc, (xi, g)| acc + g * xi * xi);
        prop_assert_eq!(xv.gp(&xv).unwrap().scalar_part(), want);
    }

    #[test]
    fn moebius_maps_compose(
        s in -1i64..=1,
        (b1, c1, d1) in (small(), small(), nonzero()),
        (b2, c2, d2) in (small(), small(), nonzero()),
        x in prop::collection::vec(small(), 2),
    ) {
        let f = Frame::plane(rat(s, 1));
        let a1 = (rat(1, 1) + &b1 * &c1) / &d1;
        let a2 = (rat(1, 1) + &b2 * &c2) / &d2;
        let m1 = sl2_clifford(&a1, &b1, &c1, &d1, &f, true);
        let m2 = sl2_clifford(&a2, &b2, &c2, &d2, &f, true);
        let step = moebius_map(&m2, &x, &f);
        prop_assume!(step.is_ok());
        let two = moebius_map(&m1, &step.unwrap(), &f);
        let once = moebius_map(&m1.mul(&m2).unwrap(), &x, &f);
        prop_assume!(two.is_ok() && once.is_ok());
        prop_assert_eq!(two.unwrap(), once.unwrap());
    }
}
