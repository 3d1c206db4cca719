//! Valuations along the diagonal and the divisor `(x,y) + (x,-y)`.
//!
//! Both places are parametrized by `x2 = x1 + t`, `y2 = ±y(x1 + t)`, so an
//! element becomes a Laurent series in `t` over the local ring
//! `Q(x1, g)[y1] / (y1^2 - f(x1))`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::curve::{curve_sextic, CurveElement, Point};
use crate::error::PoleError;
use crate::poly::{Poly, Variable};
use crate::rational::{binomial, rat, Rational};
use crate::sl2::{derive, Generator};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    /// `y2 = +y(x1 + t)`.
    Diagonal,
    /// `y2 = -y(x1 + t)`.
    Divisor,
}

impl Branch {
    fn sign(self) -> Rational {
        match self {
            Branch::Diagonal => rat(1),
            Branch::Divisor => rat(-1),
        }
    }
}

/// `(p + q*y1) / f(x1)^m` with `p, q` free of `y1, y2, x2`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalCoeff {
    pub p: Poly,
    pub q: Poly,
    pub m: u32,
}

impl LocalCoeff {
    pub fn zero() -> LocalCoeff {
        LocalCoeff {
            p: Poly::zero(),
            q: Poly::zero(),
            m: 0,
        }
    }

    pub fn poly(p: Poly) -> LocalCoeff {
        LocalCoeff {
            p,
            q: Poly::zero(),
            m: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    fn lift(&self, m: u32, f: &FPowers) -> (Poly, Poly) {
        let k = f.get(m - self.m);
        (self.p.mul_poly(&k), self.q.mul_poly(&k))
    }

    fn add(&self, other: &LocalCoeff, f: &mut FPowers) -> LocalCoeff {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let m = self.m.max(other.m);
        f.ensure(m);
        let (p1, q1) = self.lift(m, f);
        let (p2, q2) = other.lift(m, f);
        LocalCoeff {
            p: p1.add_poly(&p2),
            q: q1.add_poly(&q2),
            m,
        }
    }

    fn mul(&self, other: &LocalCoeff, f: &FPowers) -> LocalCoeff {
        let f1 = f.get(1);
        let qq = self.q.mul_poly(&other.q);
        let p = self.p.mul_poly(&other.p).add_poly(&qq.mul_poly(&f1));
        let q = self
            .p
            .mul_poly(&other.q)
            .add_poly(&self.q.mul_poly(&other.p));
        LocalCoeff {
            p,
            q,
            m: self.m + other.m,
        }
        .reduce()
    }

    fn scale(&self, c: &Rational) -> LocalCoeff {
        LocalCoeff {
            p: self.p.scale(c),
            q: self.q.scale(c),
            m: self.m,
        }
    }

    fn reduce(self) -> LocalCoeff {
        if self.is_zero() {
            LocalCoeff::zero()
        } else {
            self
        }
    }
}

impl fmt::Display for LocalCoeff {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = match (self.p.is_zero(), self.q.is_zero()) {
            (true, true) => "0".to_string(),
            (false, true) => format!("{}", self.p),
            (true, false) => format!("({})*y1", self.q),
            (false, false) => format!("{} + ({})*y1", self.p, self.q),
        };
        if self.m == 0 {
            write!(out, "{num}")
        } else {
            write!(out, "({num})/f(x1)^{}", self.m)
        }
    }
}

/// Cached powers of `f(x1)`.
struct FPowers(Vec<Poly>);

impl FPowers {
    fn new() -> FPowers {
        FPowers(vec![Poly::one(), curve_sextic(Point::First)])
    }

    fn ensure(&mut self, m: u32) {
        while self.0.len() <= m as usize {
            let next = self.0.last().unwrap().mul_poly(&self.0[1]);
            self.0.push(next);
        }
    }

    fn get(&self, m: u32) -> Poly {
        self.0[m as usize].clone()
    }
}

/// Coefficients of `t^j` in `p(x1, x1 + t)`; with `origin`, `x1` is set to 0.
fn shift(p: &Poly, origin: bool) -> Vec<Poly> {
    let p = if origin {
        p.coefficients_in(Variable::X1).swap_remove(0)
    } else {
        p.clone()
    };
    let by_x2 = p.coefficients_in(Variable::X2);
    let x1 = Poly::var(Variable::X1);
    let mut out = vec![Poly::zero(); by_x2.len()];
    for (i, pi) in by_x2.iter().enumerate() {
        if pi.is_zero() {
            continue;
        }
        if origin {
            out[i] = out[i].add_poly(pi);
            continue;
        }
        for (j, slot) in out.iter_mut().enumerate().take(i + 1) {
            let c = Rational::from_integer(binomial(i as u32, j as u32));
            let term = pi.mul_poly(&x1.pow((i - j) as u32)).scale(&c);
            *slot = slot.add_poly(&term);
        }
    }
    out
}

/// Taylor coefficients of `f(x1 + t)` divided into the polynomials `r_k`
/// with `y(x1 + t) = y1 * sum_k r_k t^k / f(x1)^k`.
fn root_series(n: usize) -> Vec<Poly> {
    let phi = shift(&curve_sextic(Point::Second), false);
    let f1 = curve_sextic(Point::First);
    let half = Rational::new(1.into(), 2.into());
    let mut r = vec![Poly::one()];
    let mut f_pow = Poly::one();
    for k in 1..=n {
        // sum_{i+j=k} r_i r_j = phi_k f^(k-1)
        let phik = phi.get(k).cloned().unwrap_or_else(Poly::zero);
        let mut rhs = phik.mul_poly(&f_pow);
        for i in 1..k {
            rhs = rhs.sub_poly(&r[i].mul_poly(&r[k - i]));
        }
        r.push(rhs.scale(&half));
        f_pow = f_pow.mul_poly(&f1);
    }
    r
}

/// Coefficients `c_0..c_N` of `y(x1 + t)`.
pub fn y_series(n: usize) -> Vec<LocalCoeff> {
    root_series(n)
        .into_iter()
        .enumerate()
        .map(|(k, rk)| LocalCoeff {
            p: Poly::zero(),
            q: rk,
            m: k as u32,
        })
        .collect()
}

/// A Laurent expansion along one branch.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchSeries {
    pub branch: Branch,
    pub start: i64,
    pub coeffs: Vec<LocalCoeff>,
}

impl BranchSeries {
    pub fn leading(&self) -> &LocalCoeff {
        &self.coeffs[0]
    }
}

/// Expands `u` along `branch`, examining numerator orders `0..=n`. The result
/// starts at the first non-zero coefficient and carries the coefficients up to
/// order `n`. The denominator `(x1 - x2)^k` contributes `t^-k`; its sign
/// `(-1)^k` is not folded into the coefficients.
pub fn branch_expand(
    u: &CurveElement,
    branch: Branch,
    n: usize,
) -> Result<BranchSeries, PoleError> {
    if u.is_zero() {
        return Err(PoleError::ZeroElement);
    }
    let s = branch.sign();
    let [a, b, c, d] = u.parts().map(|p| shift(p, false));
    let ys = y_series(n);
    let mut fp = FPowers::new();
    let at = |v: &Vec<Poly>, j: usize| v.get(j).cloned().unwrap_or_else(Poly::zero);
    let mut coeffs = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let mut cj = LocalCoeff {
            p: at(&a, j),
            q: at(&b, j),
            m: 0,
        };
        // (c + d*y1) * y2 with y2 = s * y(x1 + t)
        for i in 0..=j {
            let (ci, di) = (at(&c, i), at(&d, i));
            if ci.is_zero() && di.is_zero() {
                continue;
            }
            let factor = LocalCoeff { p: ci, q: di, m: 0 };
            let term = factor.mul(&ys[j - i], &fp).scale(&s);
            cj = cj.add(&term, &mut fp);
        }
        coeffs.push(cj);
    }
    let Some(first) = coeffs.iter().position(|c| !c.is_zero()) else {
        return Err(PoleError::WindowExhausted { window: n + 1 });
    };
    coeffs.drain(..first);
    Ok(BranchSeries {
        branch,
        start: first as i64 - u.delta_pow() as i64,
        coeffs,
    })
}

/// [`branch_expand`] with the window sized from the exact valuation, so the
/// series carries exactly its leading coefficient plus `extra` further orders.
pub fn branch_expand_auto(
    u: &CurveElement,
    branch: Branch,
    extra: usize,
) -> Result<BranchSeries, PoleError> {
    let poles = pole_orders(u)?;
    let pole = match branch {
        Branch::Divisor => poles.div,
        Branch::Diagonal => poles.diag,
    };
    let order = (u.delta_pow() as i64 - pole) as usize;
    branch_expand(u, branch, order + extra)
}

/// Pole orders along the divisor and the diagonal.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PoleOrders {
    pub div: i64,
    pub diag: i64,
}

impl std::ops::Add for PoleOrders {
    type Output = PoleOrders;
    fn add(self, o: PoleOrders) -> PoleOrders {
        PoleOrders {
            div: self.div + o.div,
            diag: self.diag + o.diag,
        }
    }
}

impl fmt::Display for PoleOrders {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.div, self.diag)
    }
}

/// Lazily multiplied truncated series in `t` with polynomial coefficients.
struct Series {
    c: Vec<Poly>,
}

impl Series {
    fn val(&self) -> Option<usize> {
        self.c.iter().position(|p| !p.is_zero())
    }

    fn len(&self) -> usize {
        self.c.len()
    }
}

fn product_coeff(x: &Series, y: &Series, j: usize) -> Poly {
    let mut acc = Poly::zero();
    for i in 0..=j.min(x.len().saturating_sub(1)) {
        if j - i >= y.len() {
            continue;
        }
        let (xi, yj) = (&x.c[i], &y.c[j - i]);
        if xi.is_zero() || yj.is_zero() {
            continue;
        }
        acc = acc.add_poly(&xi.mul_poly(yj));
    }
    acc
}

/// Lowest order of `w1 * x*x - w2 * y*y*z`, all arguments series in `t`.
fn norm_valuation(x: &Series, w1: &Poly, y: &Series, w2: &Poly, z: &Series) -> Option<usize> {
    let top = 2 * x.len().max(y.len()) + z.len();
    let mut yy = Vec::new();
    for j in 0..top {
        let yyj = product_coeff(y, y, j);
        yy.push(yyj);
        let yyz = product_coeff(&Series { c: yy.clone() }, z, j);
        let lhs = product_coeff(x, x, j).mul_poly(w1);
        if !lhs.sub_poly(&yyz.mul_poly(w2)).is_zero() {
            return Some(j);
        }
    }
    None
}

/// Valuation of `x + s*w*y*R` where `R = sqrt(z / z0)`, `z0 = z(0)`; the
/// conjugate product is `x^2 - w^2 y^2 z / z0`.
fn part_valuation(
    x: &Series,
    y: &Series,
    s: &Rational,
    w: &Poly,
    z: &Series,
    z0: &Poly,
) -> Option<usize> {
    match (x.val(), y.val()) {
        (None, None) => None,
        (Some(v), None) | (None, Some(v)) => Some(v),
        (Some(vx), Some(vy)) if vx != vy => Some(vx.min(vy)),
        (Some(v), Some(_)) => {
            let lead = x.c[v].add_poly(&y.c[v].mul_poly(w).scale(s));
            if !lead.is_zero() {
                return Some(v);
            }
            // x^2 z0 - w^2 y^2 z, the conjugate having valuation v.
            let total = norm_valuation(x, z0, y, &w.mul_poly(w), z)?;
            Some(total - v)
        }
    }
}

fn branch_valuation(parts: &[Series; 4], branch: Branch, f1: &Poly, f2: &Series) -> Option<usize> {
    let s = branch.sign();
    let [a, b, c, d] = parts;
    let one = Poly::one();
    // even part a + s*d*y1*y2 = a + s*d*f1*R, norm a^2 - d^2 f1 f2
    let even = part_valuation(a, d, &s, f1, f2, f1);
    // odd part y1*(b + s*c*R), norm (f1 b^2 - c^2 f2) / f1
    let odd = part_valuation(b, c, &s, &one, f2, f1);
    match (even, odd) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    }
}

/// `(div, diag)` pole orders of a non-zero element; negative entries mean
/// vanishing. Exact: the conjugate norms are polynomials in `t`, so no series
/// window is involved.
pub fn pole_orders(u: &CurveElement) -> Result<PoleOrders, PoleError> {
    if u.is_zero() {
        return Err(PoleError::ZeroElement);
    }
    // Translation invariance lets highest-weight vectors be expanded at x1 = 0.
    let origin = derive(Generator::E, u).is_zero();
    let parts = u.parts().map(|p| Series {
        c: shift(p, origin),
    });
    let f2 = Series {
        c: shift(&curve_sextic(Point::Second), origin),
    };
    let f1 = f2.c[0].clone();
    let k = u.delta_pow() as i64;
    let val = |branch| {
        branch_valuation(&parts, branch, &f1, &f2)
            .map(|v| k - v as i64)
            .ok_or(PoleError::ZeroElement)
    };
    Ok(PoleOrders {
        div: val(Branch::Divisor)?,
        diag: val(Branch::Diagonal)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build_coordinates;
    use crate::curve::{curve_sextic_derivative, invariant_i};
    use crate::sl2::hw_tensor;

    fn taylor_oracle(n: usize) -> Vec<Poly> {
        // f(x1 + t) = sum f^(k)(x1)/k! t^k, by repeated differentiation
        let mut out = Vec::new();
        let mut d = curve_sextic(Point::First);
        let mut fact = rat(1);
        for k in 0..=n {
            if k > 0 {
                d = d.partial(Variable::X1);
                fact *= rat(k as i64);
            }
            out.push(d.scale(&(rat(1) / &fact)));
        }
        out
    }

    #[test]
    fn y_series_leading_terms() {
        let ys = y_series(3);
        assert_eq!(
            ys[0],
            LocalCoeff {
                p: Poly::zero(),
                q: Poly::one(),
                m: 0
            }
        );
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(ys[1].q, curve_sextic_derivative(Point::First).scale(&half));
        assert_eq!(ys[1].m, 1);
    }

    #[test]
    fn y_series_squares_to_shifted_sextic() {
        let n = 4;
        let ys = y_series(n);
        let mut fp = FPowers::new();
        let oracle = taylor_oracle(n);
        for k in 0..=n {
            let mut acc = LocalCoeff::zero();
            for i in 0..=k {
                acc = acc.add(&ys[i].mul(&ys[k - i], &fp), &mut fp);
            }
            fp.ensure(acc.m);
            assert!(acc.q.is_zero());
            assert_eq!(acc.p, oracle[k].mul_poly(&fp.get(acc.m)), "order {k}");
        }
    }

    #[test]
    fn inverse_delta_squared_on_divisor() {
        let s = branch_expand(&CurveElement::delta_inverse(2), Branch::Divisor, 4).unwrap();
        assert_eq!(s.start, -2);
        assert_eq!(s.leading(), &LocalCoeff::poly(Poly::one()));
    }

    #[test]
    fn p4_highest_on_diagonal() {
        let u = CurveElement::new(
            Poly::zero(),
            Poly::one(),
            Poly::from_int(-1),
            Poly::zero(),
            3,
        );
        let s = branch_expand(&u, Branch::Diagonal, 4).unwrap();
        assert_eq!(s.start, -2);
    }

    #[test]
    fn invariant_on_divisor_leads_with_twice_sextic() {
        let s = branch_expand(&invariant_i(), Branch::Divisor, 4).unwrap();
        assert_eq!(s.start, -3);
        assert_eq!(
            s.leading(),
            &LocalCoeff::poly(curve_sextic(Point::First).scale(&rat(2)))
        );
    }

    #[test]
    fn auto_window_reaches_leading_term() {
        let coords = build_coordinates().unwrap();
        let s = branch_expand_auto(coords[4].highest(), Branch::Diagonal, 1).unwrap();
        assert_eq!(s.start, -2);
        assert_eq!(s.coeffs.len(), 2);
    }

    #[test]
    fn window_exhaustion_is_an_error() {
        // (y1 - y2) / 1 vanishes to first order on the diagonal
        let u = CurveElement::new(
            Poly::zero(),
            Poly::one(),
            Poly::from_int(-1),
            Poly::zero(),
            0,
        );
        assert_eq!(
            branch_expand(&u, Branch::Diagonal, 0),
            Err(PoleError::WindowExhausted { window: 1 })
        );
        assert_eq!(
            branch_expand(&CurveElement::zero(), Branch::Diagonal, 3),
            Err(PoleError::ZeroElement)
        );
    }

    #[test]
    fn coordinate_pole_classes() {
        let coords = build_coordinates().unwrap();
        let expected = [(2, 2), (3, 2), (4, 2), (5, 2), (6, 2)];
        for (m, (div, diag)) in coords.iter().zip(expected) {
            let got = pole_orders(m.highest()).unwrap();
            assert_eq!(got, PoleOrders { div, diag }, "{}", m.label);
            // lower basis vectors share the class
            let low = pole_orders(m.basis.last().unwrap()).unwrap();
            assert_eq!(low, PoleOrders { div, diag }, "{} lowest", m.label);
        }
        assert_eq!(
            pole_orders(&invariant_i()).unwrap(),
            PoleOrders { div: 3, diag: 1 }
        );
        let p55 = hw_tensor(&coords[0], &coords[0], 0).unwrap();
        assert_eq!(pole_orders(&p55).unwrap(), PoleOrders { div: 4, diag: 4 });
    }

    #[test]
    fn norm_valuation_agrees_with_series() {
        let coords = build_coordinates().unwrap();
        for m in &coords[..4] {
            let u = m.highest();
            let p = pole_orders(u).unwrap();
            let div = branch_expand(u, Branch::Divisor, 5).unwrap();
            let diag = branch_expand(u, Branch::Diagonal, 5).unwrap();
            assert_eq!((-div.start, -diag.start), (p.div, p.diag), "{}", m.label);
        }
    }

    #[test]
    fn valuations_add_under_products() {
        let coords = build_coordinates().unwrap();
        let u = coords[1].highest();
        let v = coords[2].basis[1].clone();
        let uv = u.mul_elem(&v);
        assert_eq!(
            pole_orders(&uv).unwrap(),
            pole_orders(u).unwrap() + pole_orders(&v).unwrap()
        );
    }
}
