//! Randomized algebraic properties.

use std::sync::OnceLock;

use proptest::prelude::*;

use equijac::catalog::AtomRegistry;
use equijac::dsl::{parse_catalog, print_relation};
use equijac::engine::SHIPPED_CATALOG;
use equijac::rational::{rat, Rational};
use equijac::{
    curve_deriv, curve_sextic, derive_e, derive_f, derive_h, hw_tensor, polar_form, pole_orders,
    CurveElement, Monomial, Point, Poly, Variable,
};

fn registry() -> &'static AtomRegistry {
    static REG: OnceLock<AtomRegistry> = OnceLock::new();
    REG.get_or_init(|| AtomRegistry::build().unwrap())
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

/// Monomials in `vars` with exponents at most two.
fn monomial(vars: &'static [Variable]) -> impl Strategy<Value = Monomial> {
    proptest::collection::vec(0u8..=2, vars.len()).prop_map(move |es| {
        vars.iter()
            .zip(es)
            .fold(Monomial::one(), |m, (v, e)| m.with_exp(*v, e))
    })
}

fn poly_in(vars: &'static [Variable]) -> impl Strategy<Value = Poly> {
    proptest::collection::vec((monomial(vars), small_rational()), 0..5).prop_map(Poly::from_terms)
}

const ALL_VARS: &[Variable] = &[
    Variable::X1,
    Variable::X2,
    Variable::Y1,
    Variable::Y2,
    Variable::G0,
    Variable::G3,
    Variable::G6,
];

const PART_VARS: &[Variable] = &[Variable::X1, Variable::X2, Variable::G2, Variable::G5];

fn poly() -> impl Strategy<Value = Poly> {
    poly_in(ALL_VARS)
}

fn element() -> impl Strategy<Value = CurveElement> {
    (
        poly_in(PART_VARS),
        poly_in(PART_VARS),
        poly_in(PART_VARS),
        poly_in(PART_VARS),
        0u32..=2,
    )
        .prop_map(|(a, b, c, d, k)| CurveElement::new(a, b, c, d, k))
}

fn delta() -> Poly {
    Poly::var(Variable::X1).sub_poly(&Poly::var(Variable::X2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn poly_ring_laws(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(p.add_poly(&q), q.add_poly(&p));
        prop_assert_eq!(p.mul_poly(&q), q.mul_poly(&p));
        prop_assert_eq!(p.mul_poly(&q).mul_poly(&r), p.mul_poly(&q.mul_poly(&r)));
        prop_assert_eq!(
            p.mul_poly(&q.add_poly(&r)),
            p.mul_poly(&q).add_poly(&p.mul_poly(&r))
        );
        prop_assert!(p.sub_poly(&p).is_zero());
    }

    #[test]
    fn partial_obeys_leibniz(p in poly(), q in poly(), i in 0usize..4) {
        let v = Variable::from_index(i);
        let lhs = p.mul_poly(&q).partial(v);
        let rhs = p.partial(v).mul_poly(&q).add_poly(&p.mul_poly(&q.partial(v)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn division_by_delta_is_exact(q in poly()) {
        let a = delta().mul_poly(&q);
        prop_assert_eq!(a.div_delta(), Some(q));
    }

    #[test]
    fn curve_product_laws(u in element(), v in element(), w in element()) {
        prop_assert_eq!(u.mul_elem(&v), v.mul_elem(&u));
        prop_assert_eq!(u.mul_elem(&v).mul_elem(&w), u.mul_elem(&v.mul_elem(&w)));
        prop_assert_eq!(u.clone().normalize(), u.clone().normalize().normalize());
        prop_assert!(u.sub_elem(&u).is_zero());
    }

    #[test]
    fn sl2_brackets(u in element()) {
        let ef = derive_e(&derive_f(&u)).sub_elem(&derive_f(&derive_e(&u)));
        prop_assert_eq!(ef, derive_h(&u));
        let he = derive_h(&derive_e(&u)).sub_elem(&derive_e(&derive_h(&u)));
        prop_assert_eq!(he, derive_e(&u).scale(&rat(2)));
        let hf = derive_h(&derive_f(&u)).sub_elem(&derive_f(&derive_h(&u)));
        prop_assert_eq!(hf, derive_f(&u).scale(&rat(-2)));
    }

    #[test]
    fn sl2_derivations_obey_leibniz(u in element(), v in element()) {
        for d in [derive_e, derive_f, derive_h] {
            let lhs = d(&u.mul_elem(&v));
            let rhs = d(&u).mul_elem(&v).add_elem(&u.mul_elem(&d(&v)));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn curve_derivative_power_rule(u in element(), n in 1u32..=3, second in any::<bool>()) {
        let pt = if second { Point::Second } else { Point::First };
        let lhs = curve_deriv(pt, &u.pow(n));
        let rhs = u.pow(n - 1).mul_elem(&curve_deriv(pt, &u)).scale(&rat(n as i64));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn hw_tensor_is_highest_weight(i in 0usize..64, j in 0usize..64, p in 0usize..13) {
        let names: Vec<&str> = registry().names().collect();
        let u = registry().get(names[i % names.len()]).unwrap();
        let v = registry().get(names[j % names.len()]).unwrap();
        let p = p % u.dim().min(v.dim());
        let w = hw_tensor(u, v, p).unwrap();
        prop_assert!(derive_e(&w).is_zero());
        if p == 0 {
            prop_assert_eq!(w, u.highest().mul_elem(v.highest()));
        }
    }

    #[test]
    fn pole_orders_are_additive(a in 0usize..15, b in 0usize..15) {
        let basis: Vec<&CurveElement> = ["P5", "P4", "P3", "P2", "P1"]
            .iter()
            .flat_map(|n| registry().get(n).unwrap().basis.iter())
            .collect();
        let (u, v) = (basis[a], basis[b]);
        let pu = pole_orders(u).unwrap();
        let pv = pole_orders(v).unwrap();
        prop_assert_eq!(pole_orders(&u.mul_elem(v)).unwrap(), pu + pv);
    }
}

#[test]
fn polar_form_restricts_to_the_sextic() {
    let on_diagonal = |p: &Poly| -> Poly {
        Poly::from_terms(p.terms().iter().map(|(m, c)| {
            let e = m.exp(Variable::X1) + m.exp(Variable::X2);
            (
                m.with_exp(Variable::X2, 0).with_exp(Variable::X1, e),
                c.clone(),
            )
        }))
    };
    let f = curve_sextic(Point::First);
    assert_eq!(on_diagonal(&polar_form()), f);
    let half = f
        .partial(Variable::X1)
        .scale(&Rational::new(1.into(), 2.into()));
    assert_eq!(on_diagonal(&polar_form().partial(Variable::X2)), half);
}

#[test]
fn parse_print_is_identity_on_the_catalog() {
    let recs = parse_catalog(SHIPPED_CATALOG).unwrap();
    assert!(!recs.is_empty());
    for r in recs {
        let printed = print_relation(&r.expr, &r.rhs);
        let (e, rhs) = equijac::parse_relation(&printed).unwrap();
        assert_eq!((e, rhs), (r.expr.clone(), r.rhs.clone()), "{}", r.id);
    }
}
