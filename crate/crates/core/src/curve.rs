//! The coordinate ring of the product of the curve with itself, localized at
//! `x1 - x2`.
//!
//! Every element is held as `(a + b*y1 + c*y2 + d*y1*y2) / (x1 - x2)^k` with
//! `a..d` free of `y1, y2`; products reduce `y_i^2` to the sextic `f(x_i)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::poly::{delta, Monomial, Poly, Variable};
use crate::rational::{binomial, rat, ratio, Rational};

/// Which of the two points on the curve.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    First,
    Second,
}

impl Point {
    pub fn x(self) -> Variable {
        match self {
            Point::First => Variable::X1,
            Point::Second => Variable::X2,
        }
    }

    pub fn y(self) -> Variable {
        match self {
            Point::First => Variable::Y1,
            Point::Second => Variable::Y2,
        }
    }
}

/// `f(x_i) = g6 x^6 + 6 g5 x^5 + 15 g4 x^4 + 20 g3 x^3 + 15 g2 x^2 + 6 g1 x + g0`.
pub fn curve_sextic(point: Point) -> Poly {
    let x = point.x();
    let terms = (0..=6u32).map(|k| {
        let m = Monomial::var(Variable::g(k as usize)).with_exp(x, k as u8);
        (m, Rational::from_integer(binomial(6, k)))
    });
    Poly::from_terms(terms)
}

/// `f'(x_i)`.
pub fn curve_sextic_derivative(point: Point) -> Poly {
    curve_sextic(point).partial(point.x())
}

/// The symmetric bi-cubic polarization of the sextic:
/// `F = sum_k g_k sum_{a+b=k} C(3,a) C(3,b) x1^a x2^b`, so that `F(x,x) = f(x)`.
pub fn polar_form() -> Poly {
    let mut terms = Vec::new();
    for k in 0..=6u32 {
        for a in 0..=3u32 {
            if k < a || k - a > 3 {
                continue;
            }
            let b = k - a;
            let m = Monomial::var(Variable::g(k as usize))
                .with_exp(Variable::X1, a as u8)
                .with_exp(Variable::X2, b as u8);
            terms.push((m, Rational::from_integer(binomial(3, a) * binomial(3, b))));
        }
    }
    Poly::from_terms(terms)
}

/// An element of the localized quotient ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CurveElement {
    a: Poly,
    b: Poly,
    c: Poly,
    d: Poly,
    delta_pow: u32,
}

impl CurveElement {
    /// Builds and normalizes `(a + b y1 + c y2 + d y1 y2)/Δ^k`.
    ///
    /// Panics if any part contains `y1` or `y2`.
    pub fn new(a: Poly, b: Poly, c: Poly, d: Poly, delta_pow: u32) -> CurveElement {
        for p in [&a, &b, &c, &d] {
            assert!(
                !p.contains(Variable::Y1) && !p.contains(Variable::Y2),
                "curve element parts must be free of y1, y2"
            );
        }
        CurveElement {
            a,
            b,
            c,
            d,
            delta_pow,
        }
        .normalize()
    }

    /// Builds without normalizing; used where the caller wants to inspect the
    /// raw representation.
    pub fn raw(a: Poly, b: Poly, c: Poly, d: Poly, delta_pow: u32) -> CurveElement {
        CurveElement {
            a,
            b,
            c,
            d,
            delta_pow,
        }
    }

    /// Reduces a polynomial that may contain `y1, y2` to normal form.
    pub fn from_poly(p: &Poly) -> CurveElement {
        let f1 = curve_sextic(Point::First);
        let f2 = curve_sextic(Point::Second);
        let mut parts = [Vec::new(), Vec::new(), Vec::new(), Vec::new()];
        let mut extra = Vec::new();
        for (m, c) in p.terms() {
            let e1 = m.exp(Variable::Y1);
            let e2 = m.exp(Variable::Y2);
            let base = m.with_exp(Variable::Y1, 0).with_exp(Variable::Y2, 0);
            let idx = (e1 % 2) as usize + 2 * (e2 % 2) as usize;
            let (h1, h2) = (e1 / 2, e2 / 2);
            if h1 == 0 && h2 == 0 {
                parts[idx].push((base, c.clone()));
            } else {
                let factor = &f1.pow(h1 as u32) * &f2.pow(h2 as u32);
                extra.push((idx, factor.mul_monomial(&base, c)));
            }
        }
        let mut polys: Vec<Poly> = parts.into_iter().map(Poly::from_terms).collect();
        for (idx, p) in extra {
            polys[idx] = &polys[idx] + &p;
        }
        let [a, b, c, d]: [Poly; 4] = polys.try_into().expect("four parts");
        CurveElement::new(a, b, c, d, 0)
    }

    pub fn zero() -> CurveElement {
        CurveElement::default()
    }

    pub fn one() -> CurveElement {
        CurveElement::constant(rat(1))
    }

    pub fn constant(c: Rational) -> CurveElement {
        CurveElement::raw(
            Poly::constant(c),
            Poly::zero(),
            Poly::zero(),
            Poly::zero(),
            0,
        )
    }

    pub fn poly(p: Poly) -> CurveElement {
        CurveElement::new(p, Poly::zero(), Poly::zero(), Poly::zero(), 0)
    }

    pub fn y(point: Point) -> CurveElement {
        match point {
            Point::First => {
                CurveElement::raw(Poly::zero(), Poly::one(), Poly::zero(), Poly::zero(), 0)
            }
            Point::Second => {
                CurveElement::raw(Poly::zero(), Poly::zero(), Poly::one(), Poly::zero(), 0)
            }
        }
    }

    /// `1/Δ^k`.
    pub fn delta_inverse(k: u32) -> CurveElement {
        CurveElement::raw(Poly::one(), Poly::zero(), Poly::zero(), Poly::zero(), k)
    }

    pub fn a(&self) -> &Poly {
        &self.a
    }
    pub fn b(&self) -> &Poly {
        &self.b
    }
    pub fn c(&self) -> &Poly {
        &self.c
    }
    pub fn d(&self) -> &Poly {
        &self.d
    }
    pub fn delta_pow(&self) -> u32 {
        self.delta_pow
    }

    pub fn parts(&self) -> [&Poly; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// The rational value when the element is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.delta_pow != 0 || !self.b.is_zero() || !self.c.is_zero() || !self.d.is_zero() {
            return None;
        }
        self.a.as_constant()
    }

    /// The polynomial when the element has no `y` parts and no denominator.
    pub fn as_poly(&self) -> Option<&Poly> {
        (self.delta_pow == 0 && self.b.is_zero() && self.c.is_zero() && self.d.is_zero())
            .then_some(&self.a)
    }

    /// Cancels common factors of `Δ` until some part is no longer divisible.
    pub fn normalize(mut self) -> CurveElement {
        while self.delta_pow > 0 {
            let Some(a) = self.a.div_delta() else { break };
            let Some(b) = self.b.div_delta() else { break };
            let Some(c) = self.c.div_delta() else { break };
            let Some(d) = self.d.div_delta() else { break };
            self.a = a;
            self.b = b;
            self.c = c;
            self.d = d;
            self.delta_pow -= 1;
        }
        self
    }

    /// The four numerator parts rewritten over `Δ^k` (`k >= delta_pow`).
    pub fn numerators_over(&self, k: u32) -> [Poly; 4] {
        assert!(k >= self.delta_pow);
        let lift = delta().pow(k - self.delta_pow);
        [
            &self.a * &lift,
            &self.b * &lift,
            &self.c * &lift,
            &self.d * &lift,
        ]
    }

    fn lift_to(&self, k: u32) -> CurveElement {
        if k == self.delta_pow {
            return self.clone();
        }
        let [a, b, c, d] = self.numerators_over(k);
        CurveElement::raw(a, b, c, d, k)
    }

    pub fn add_elem(&self, other: &CurveElement) -> CurveElement {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let k = self.delta_pow.max(other.delta_pow);
        let (u, v) = (self.lift_to(k), other.lift_to(k));
        CurveElement::raw(&u.a + &v.a, &u.b + &v.b, &u.c + &v.c, &u.d + &v.d, k).normalize()
    }

    pub fn neg_elem(&self) -> CurveElement {
        CurveElement::raw(-&self.a, -&self.b, -&self.c, -&self.d, self.delta_pow)
    }

    pub fn sub_elem(&self, other: &CurveElement) -> CurveElement {
        self.add_elem(&other.neg_elem())
    }

    pub fn scale(&self, c: &Rational) -> CurveElement {
        if c.is_zero() {
            return CurveElement::zero();
        }
        CurveElement::raw(
            self.a.scale(c),
            self.b.scale(c),
            self.c.scale(c),
            self.d.scale(c),
            self.delta_pow,
        )
    }

    /// Multiplies every part by a `y`-free polynomial.
    pub fn mul_poly(&self, p: &Poly) -> CurveElement {
        CurveElement::raw(
            &self.a * p,
            &self.b * p,
            &self.c * p,
            &self.d * p,
            self.delta_pow,
        )
        .normalize()
    }

    pub fn mul_elem(&self, other: &CurveElement) -> CurveElement {
        if self.is_zero() || other.is_zero() {
            return CurveElement::zero();
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let f1 = curve_sextic(Point::First);
        let f2 = curve_sextic(Point::Second);
        let (u, v) = (self, other);
        let prod = |x: &Poly, y: &Poly| -> Poly {
            if x.is_zero() || y.is_zero() {
                Poly::zero()
            } else {
                x * y
            }
        };
        // 1 part
        let a = &(&prod(&u.a, &v.a) + &(&prod(&u.b, &v.b) * &f1))
            + &(&(&prod(&u.c, &v.c) * &f2) + &(&(&prod(&u.d, &v.d) * &f1) * &f2));
        // y1 part
        let b = &(&prod(&u.a, &v.b) + &prod(&u.b, &v.a))
            + &(&(&prod(&u.c, &v.d) + &prod(&u.d, &v.c)) * &f2);
        // y2 part
        let c = &(&prod(&u.a, &v.c) + &prod(&u.c, &v.a))
            + &(&(&prod(&u.b, &v.d) + &prod(&u.d, &v.b)) * &f1);
        // y1 y2 part
        let d = &(&prod(&u.a, &v.d) + &prod(&u.d, &v.a)) + &(&prod(&u.b, &v.c) + &prod(&u.c, &v.b));
        CurveElement::raw(a, b, c, d, u.delta_pow + v.delta_pow).normalize()
    }

    pub fn pow(&self, k: u32) -> CurveElement {
        let mut out = CurveElement::one();
        for _ in 0..k {
            out = out.mul_elem(self);
        }
        out
    }

    /// Partial derivative of the numerator with respect to `v`, as an element
    /// with no denominator. `y` derivatives act formally.
    fn numerator_partial(&self, v: Variable) -> CurveElement {
        match v {
            Variable::Y1 => CurveElement::raw(
                self.b.clone(),
                Poly::zero(),
                self.d.clone(),
                Poly::zero(),
                0,
            ),
            Variable::Y2 => CurveElement::raw(
                self.c.clone(),
                self.d.clone(),
                Poly::zero(),
                Poly::zero(),
                0,
            ),
            _ => CurveElement::raw(
                self.a.partial(v),
                self.b.partial(v),
                self.c.partial(v),
                self.d.partial(v),
                0,
            ),
        }
    }

    fn numerator(&self) -> CurveElement {
        CurveElement::raw(
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            self.d.clone(),
            0,
        )
    }

    /// Evaluates the four parts (over the element's own `Δ^k`) at a point
    /// given in variable order; `y` entries of the point are ignored.
    pub fn eval_parts(&self, point: &[Rational; crate::poly::NVARS]) -> [Rational; 4] {
        [
            self.a.eval_dense(point),
            self.b.eval_dense(point),
            self.c.eval_dense(point),
            self.d.eval_dense(point),
        ]
    }

    /// Substitutes rational values for `g0..g6`.
    pub fn specialize_g(&self, g: &[Rational; 7]) -> CurveElement {
        CurveElement::raw(
            self.a.specialize_g(g),
            self.b.specialize_g(g),
            self.c.specialize_g(g),
            self.d.specialize_g(g),
            self.delta_pow,
        )
        .normalize()
    }

    /// Total number of stored terms across the four parts.
    pub fn size(&self) -> usize {
        self.a.len() + self.b.len() + self.c.len() + self.d.len()
    }
}

/// `F(x1,x2)`'s companion invariant `(F - y1 y2)/Δ^3`.
pub fn invariant_i() -> CurveElement {
    CurveElement::new(
        polar_form(),
        Poly::zero(),
        Poly::zero(),
        Poly::from_int(-1),
        3,
    )
}

/// `y_i` times the derivative along the curve in `x_i`:
/// `CD_i = y_i ∂/∂x_i + (f'(x_i)/2) ∂/∂y_i`.
pub fn curve_deriv(point: Point, u: &CurveElement) -> CurveElement {
    let y = CurveElement::y(point);
    let half_fprime = CurveElement::poly(curve_sextic_derivative(point).scale(&ratio(1, 2)));
    let numerator = u.numerator();
    let dn = y
        .mul_elem(&u.numerator_partial(point.x()))
        .add_elem(&half_fprime.mul_elem(&u.numerator_partial(point.y())));
    if u.delta_pow == 0 {
        return dn;
    }
    // CD(Δ) = +y1 for the first point, -y2 for the second.
    let d_delta = match point {
        Point::First => y,
        Point::Second => y.neg_elem(),
    };
    let k = u.delta_pow;
    let top = dn
        .mul_poly(&delta())
        .sub_elem(&numerator.mul_elem(&d_delta).scale(&rat(k as i64)));
    CurveElement::raw(top.a, top.b, top.c, top.d, top.delta_pow + k + 1).normalize()
}

impl fmt::Display for CurveElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut pieces = Vec::new();
        for (p, tag) in [
            (&self.a, ""),
            (&self.b, "y1"),
            (&self.c, "y2"),
            (&self.d, "y1*y2"),
        ] {
            if p.is_zero() {
                continue;
            }
            if tag.is_empty() {
                pieces.push(format!("({p})"));
            } else {
                pieces.push(format!("({p})*{tag}"));
            }
        }
        if pieces.is_empty() {
            return f.write_str("0");
        }
        let num = pieces.join(" + ");
        if self.delta_pow == 0 {
            f.write_str(&num)
        } else {
            write!(f, "[{num}] / (x1 - x2)^{}", self.delta_pow)
        }
    }
}

impl Add for &CurveElement {
    type Output = CurveElement;
    fn add(self, rhs: &CurveElement) -> CurveElement {
        self.add_elem(rhs)
    }
}

impl Sub for &CurveElement {
    type Output = CurveElement;
    fn sub(self, rhs: &CurveElement) -> CurveElement {
        self.sub_elem(rhs)
    }
}

impl Mul for &CurveElement {
    type Output = CurveElement;
    fn mul(self, rhs: &CurveElement) -> CurveElement {
        self.mul_elem(rhs)
    }
}

impl Neg for &CurveElement {
    type Output = CurveElement;
    fn neg(self) -> CurveElement {
        self.neg_elem()
    }
}

impl Zero for CurveElement {
    fn zero() -> Self {
        CurveElement::default()
    }
    fn is_zero(&self) -> bool {
        CurveElement::is_zero(self)
    }
}

impl Add for CurveElement {
    type Output = CurveElement;
    fn add(self, rhs: CurveElement) -> CurveElement {
        self.add_elem(&rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::NVARS;

    fn x(i: usize) -> Poly {
        Poly::var(if i == 1 { Variable::X1 } else { Variable::X2 })
    }

    fn all_g_one() -> [Rational; NVARS] {
        std::array::from_fn(|i| if i >= 4 { rat(1) } else { rat(0) })
    }

    #[test]
    fn sextic_coefficients() {
        let f1 = curve_sextic(Point::First);
        let mut pt = all_g_one();
        pt[0] = rat(1);
        assert_eq!(f1.eval_dense(&pt), rat(64));
        let m = Monomial::var(Variable::G5).with_exp(Variable::X1, 5);
        assert_eq!(f1.coefficient(&m), rat(6));
        let f2 = curve_sextic(Point::Second);
        let only_g6: [Rational; 7] = std::array::from_fn(|k| if k == 6 { rat(1) } else { rat(0) });
        assert_eq!(f2.specialize_g(&only_g6), x(2).pow(6));
    }

    #[test]
    fn defining_reduction() {
        let y1 = CurveElement::y(Point::First);
        assert_eq!(&y1 * &y1, CurveElement::poly(curve_sextic(Point::First)));
        let inv2 = CurveElement::delta_inverse(2);
        assert_eq!(&inv2 * &inv2, CurveElement::delta_inverse(4));
        let u = CurveElement::new(Poly::zero(), Poly::one(), Poly::zero(), Poly::zero(), 1);
        assert!((&u + &(-&u)).is_zero());
    }

    #[test]
    fn normalization() {
        let u = CurveElement::new(delta(), Poly::zero(), Poly::zero(), Poly::zero(), 1);
        assert_eq!(u, CurveElement::one());
        let sq = &x(1).pow(2) - &x(2).pow(2);
        let v = CurveElement::new(sq, Poly::zero(), Poly::zero(), Poly::zero(), 2);
        assert_eq!(v.delta_pow(), 1);
        assert_eq!(v.a(), &(&x(1) + &x(2)));
        let i = invariant_i();
        assert_eq!(i.delta_pow(), 3);
        assert_eq!(i.clone().normalize(), i);
    }

    #[test]
    fn polar_form_coefficients() {
        let f = polar_form();
        let g3: Vec<_> = f
            .coefficients_in(Variable::G3)
            .get(1)
            .cloned()
            .unwrap()
            .terms()
            .iter()
            .filter(|(m, _)| m.g_degree() == 0)
            .cloned()
            .collect();
        let g3 = Poly::from_terms(g3);
        let expected = &(&(&x(1).pow(3) + &(&x(1).pow(2) * &x(2)).scale(&rat(9)))
            + &(&x(1) * &x(2).pow(2)).scale(&rat(9)))
            + &x(2).pow(3);
        assert_eq!(g3, expected);
        let m = Monomial::var(Variable::G6)
            .with_exp(Variable::X1, 3)
            .with_exp(Variable::X2, 3);
        assert_eq!(f.coefficient(&m), rat(1));
        assert_eq!(f.restrict_diagonal(), curve_sextic(Point::First));
    }

    #[test]
    fn polarization_derivative() {
        // ∂F/∂x2 on the diagonal is f'(x1)/2.
        let lhs = polar_form().partial(Variable::X2).restrict_diagonal();
        let rhs = curve_sextic_derivative(Point::First).scale(&ratio(1, 2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn invariant_parts() {
        let i = invariant_i();
        assert_eq!(i.d(), &Poly::from_int(-1));
        assert_eq!(i.a(), &polar_form());
    }

    #[test]
    fn curve_derivative_basics() {
        let y1 = CurveElement::y(Point::First);
        let half = curve_sextic_derivative(Point::First).scale(&ratio(1, 2));
        assert_eq!(curve_deriv(Point::First, &y1), CurveElement::poly(half));
        let x1 = CurveElement::poly(x(1));
        assert_eq!(curve_deriv(Point::First, &x1), y1);
        let f1 = CurveElement::poly(curve_sextic(Point::First));
        let expected = y1.mul_poly(&curve_sextic_derivative(Point::First));
        assert_eq!(curve_deriv(Point::First, &f1), expected);
        assert_eq!(curve_deriv(Point::First, &(&y1 * &y1)), expected);
    }

    #[test]
    fn from_poly_reduces_squares() {
        let p = &Poly::var(Variable::Y1).pow(3) * &Poly::var(Variable::Y2);
        let u = CurveElement::from_poly(&p);
        assert_eq!(u.d(), &curve_sextic(Point::First));
        assert!(u.a().is_zero() && u.b().is_zero() && u.c().is_zero());
    }
}
