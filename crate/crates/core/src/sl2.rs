//! The sl2 derivations, irreducible modules, and the highest-weight tensor
//! construction.
//!
//! Basis normalization for an `n`-dimensional module `v_0..v_{n-1}`:
//! `e(v_i) = (n-i) v_{i-1}`, `f(v_i) = (i+1) v_{i+1}`, `h(v_i) = (n-2i-1) v_i`.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::curve::CurveElement;
use crate::error::Sl2Error;
use crate::linalg::Echelon;
use crate::poly::{Monomial, Poly, Variable, NVARS};
use crate::rational::{factorial_ratio, rat, Rational};

/// One of the three generators.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    E,
    F,
    H,
}

/// Image of a single variable under a generator: `coef * monomial`, always a
/// single term for these vector fields.
fn image(op: Generator, v: Variable) -> Option<(Rational, Monomial)> {
    use Variable::*;
    match op {
        Generator::E => match v {
            X1 | X2 => Some((rat(1), Monomial::one())),
            Y1 | Y2 | G6 => None,
            g => {
                let k = g.g_index().unwrap();
                Some((rat(-(6 - k as i64)), Monomial::var(Variable::g(k + 1))))
            }
        },
        Generator::H => match v {
            X1 | X2 => Some((rat(-2), Monomial::var(v))),
            Y1 | Y2 => Some((rat(-3), Monomial::var(v))),
            g => {
                let k = g.g_index().unwrap() as i64;
                (k != 3).then(|| (rat(2 * k - 6), Monomial::var(g)))
            }
        },
        Generator::F => match v {
            X1 | X2 => Some((rat(-1), Monomial::one().with_exp(v, 2))),
            Y1 => Some((rat(-3), Monomial::var(X1).with_exp(Y1, 1))),
            Y2 => Some((rat(-3), Monomial::var(X2).with_exp(Y2, 1))),
            G0 => None,
            g => {
                let k = g.g_index().unwrap();
                Some((rat(-(k as i64)), Monomial::var(Variable::g(k - 1))))
            }
        },
    }
}

/// Applies a generator to a polynomial (y's allowed, acting formally).
pub fn derive_poly(op: Generator, p: &Poly) -> Poly {
    let images: [Option<(Rational, Monomial)>; NVARS] =
        std::array::from_fn(|i| image(op, Variable::from_index(i)));
    let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(p.len() * 2);
    for (m, c) in p.terms() {
        for (i, img) in images.iter().enumerate() {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let Some((ic, im)) = img else { continue };
            let mut m2 = *m;
            m2.0[i] -= 1;
            let m2 = m2.mul(im);
            let coef = c * ic * rat(e as i64);
            match acc.get_mut(&m2) {
                Some(x) => *x += coef,
                None => {
                    acc.insert(m2, coef);
                }
            }
        }
    }
    Poly::from_map(acc)
}

/// Applies a generator to a ring element.
///
/// Each generator sends `Δ` to `λΔ` (`λ = 0, -2, -(x1+x2)` for `e, h, f`) and
/// `y_i` to `β_i y_i`, so the Δ power never grows.
pub fn derive(op: Generator, u: &CurveElement) -> CurveElement {
    let (beta1, beta2, lambda) = match op {
        Generator::E => (Poly::zero(), Poly::zero(), Poly::zero()),
        Generator::H => (Poly::from_int(-3), Poly::from_int(-3), Poly::from_int(-2)),
        Generator::F => (
            Poly::var(Variable::X1).scale(&rat(-3)),
            Poly::var(Variable::X2).scale(&rat(-3)),
            -&(&Poly::var(Variable::X1) + &Poly::var(Variable::X2)),
        ),
    };
    let k = u.delta_pow();
    let corr = lambda.scale(&rat(k as i64));
    let part = |p: &Poly, beta: &Poly| -> Poly {
        if p.is_zero() {
            return Poly::zero();
        }
        let mut out = derive_poly(op, p);
        let mult = beta - &corr;
        if !mult.is_zero() {
            out = &out + &(p * &mult);
        }
        out
    };
    let zero = Poly::zero();
    let beta12 = &beta1 + &beta2;
    CurveElement::new(
        part(u.a(), &zero),
        part(u.b(), &beta1),
        part(u.c(), &beta2),
        part(u.d(), &beta12),
        k,
    )
}

pub fn derive_e(u: &CurveElement) -> CurveElement {
    derive(Generator::E, u)
}

pub fn derive_f(u: &CurveElement) -> CurveElement {
    derive(Generator::F, u)
}

pub fn derive_h(u: &CurveElement) -> CurveElement {
    derive(Generator::H, u)
}

/// Values on which sl2 acts by derivations and which form a commutative
/// algebra over the rationals. Implemented by ring elements and by the
/// syntactic quadratic forms used for rank counting.
pub trait Sl2Value: Clone + fmt::Debug + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn constant(c: Rational) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn scale(&self, c: &Rational) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn act(&self, op: Generator) -> Self;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    /// The h-eigenvalue, when the value is an h-eigenvector.
    fn weight(&self) -> Option<i64>;
}

impl Sl2Value for CurveElement {
    fn zero() -> Self {
        CurveElement::zero()
    }
    fn constant(c: Rational) -> Self {
        CurveElement::constant(c)
    }
    fn is_zero(&self) -> bool {
        CurveElement::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self.add_elem(other)
    }
    fn scale(&self, c: &Rational) -> Self {
        CurveElement::scale(self, c)
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_elem(other)
    }
    fn act(&self, op: Generator) -> Self {
        derive(op, self)
    }
    fn weight(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let hu = derive_h(self);
        let idx = self.parts().iter().position(|p| !p.is_zero())?;
        let (m, c) = self.parts()[idx].leading_term()?.clone();
        let w = hu.parts()[idx].coefficient(&m) / c;
        if !w.is_integer() {
            return None;
        }
        let w_int: i64 = w.to_integer().try_into().ok()?;
        (hu == self.scale(&w)).then_some(w_int)
    }
}

/// An `n`-dimensional irreducible module given by an explicit basis.
#[derive(Clone, Debug, PartialEq)]
pub struct IrrModule<T> {
    pub label: String,
    pub basis: Vec<T>,
}

impl<T: Sl2Value> IrrModule<T> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn highest(&self) -> &T {
        &self.basis[0]
    }

    /// Checks the five normalization laws exactly.
    pub fn check_laws(&self) -> Result<(), Sl2Error> {
        let n = self.dim();
        let fail = |law: &'static str, index: usize| Sl2Error::ModuleLaw {
            label: self.label.clone(),
            law,
            index,
        };
        for (i, v) in self.basis.iter().enumerate() {
            let ev = v.act(Generator::E);
            let expect_e = if i == 0 {
                T::zero()
            } else {
                self.basis[i - 1].scale(&rat((n - i) as i64))
            };
            if ev != expect_e {
                return Err(fail(
                    if i == 0 {
                        "e(v0) = 0"
                    } else {
                        "e(vi) = (n-i) v(i-1)"
                    },
                    i,
                ));
            }
            let fv = v.act(Generator::F);
            let expect_f = if i + 1 == n {
                T::zero()
            } else {
                self.basis[i + 1].scale(&rat((i + 1) as i64))
            };
            if fv != expect_f {
                return Err(fail(
                    if i + 1 == n {
                        "f(v(n-1)) = 0"
                    } else {
                        "f(vi) = (i+1) v(i+1)"
                    },
                    i,
                ));
            }
            let hv = v.act(Generator::H);
            if hv != v.scale(&rat(n as i64 - 2 * i as i64 - 1)) {
                return Err(fail("h(vi) = (n-2i-1) vi", i));
            }
        }
        Ok(())
    }
}

/// Builds the module generated by a highest-weight vector of weight `n-1`.
pub fn expand_orbit<T: Sl2Value>(hw: &T, n: usize, label: &str) -> Result<IrrModule<T>, Sl2Error> {
    assert!(n >= 1);
    let weight = n as i64 - 1;
    if !hw.act(Generator::E).is_zero() || hw.act(Generator::H) != hw.scale(&rat(weight)) {
        return Err(Sl2Error::NotHighestWeight { weight });
    }
    let mut basis = Vec::with_capacity(n);
    basis.push(hw.clone());
    for i in 0..n - 1 {
        let next = basis[i]
            .act(Generator::F)
            .scale(&Rational::new(1.into(), ((i + 1) as i64).into()));
        basis.push(next);
    }
    if !basis[n - 1].act(Generator::F).is_zero() {
        return Err(Sl2Error::OrbitDoesNotClose { dim: n });
    }
    Ok(IrrModule {
        label: label.to_string(),
        basis,
    })
}

/// Builds the module from a lowest-weight vector `v_{n-1}` upward via
/// `v_{i-1} = e(v_i)/(n-i)`.
pub fn expand_orbit_from_lowest<T: Sl2Value>(
    lw: &T,
    n: usize,
    label: &str,
) -> Result<IrrModule<T>, Sl2Error> {
    assert!(n >= 1);
    let weight = -(n as i64 - 1);
    if !lw.act(Generator::F).is_zero() || lw.act(Generator::H) != lw.scale(&rat(weight)) {
        return Err(Sl2Error::NotHighestWeight { weight });
    }
    let mut rev = Vec::with_capacity(n);
    rev.push(lw.clone());
    for i in (1..n).rev() {
        let prev = rev
            .last()
            .unwrap()
            .act(Generator::E)
            .scale(&Rational::new(1.into(), ((n - i) as i64).into()));
        rev.push(prev);
    }
    if !rev[n - 1].act(Generator::E).is_zero() {
        return Err(Sl2Error::OrbitDoesNotClose { dim: n });
    }
    rev.reverse();
    Ok(IrrModule {
        label: label.to_string(),
        basis: rev,
    })
}

/// Coefficient of `u_i v_{p-i}` in the highest-weight element of the
/// component of dimension `n+m-2p-1` of `U_n ⊗ V_m`.
pub fn hw_tensor_coefficient(n: usize, m: usize, p: usize, i: usize) -> Rational {
    let sign = if i.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    };
    sign * factorial_ratio((n - i - 1) as u32, (n - 1) as u32)
        * factorial_ratio((m + i - p - 1) as u32, (m - 1) as u32)
}

/// `Σ_{i=0}^{p} (-1)^i (n-i-1)!/(n-1)! (m-p+i-1)!/(m-1)! u_i v_{p-i}`.
pub fn hw_tensor<T: Sl2Value>(u: &IrrModule<T>, v: &IrrModule<T>, p: usize) -> Result<T, Sl2Error> {
    let (n, m) = (u.dim(), v.dim());
    if p + 1 > n.min(m) {
        return Err(Sl2Error::IndexOutOfRange { p, n, m });
    }
    let mut acc = T::zero();
    for i in 0..=p {
        let c = hw_tensor_coefficient(n, m, p, i);
        let term = u.basis[i].mul(&v.basis[p - i]);
        acc = acc.add(&term.scale(&c));
    }
    Ok(acc)
}

/// Index `p` selecting the component of dimension `d` in `V_n ⊗ V_m`.
pub fn tensor_index(n: usize, m: usize, d: usize) -> Option<usize> {
    let top = n + m - 1;
    if d == 0 || d > top || !(top - d).is_multiple_of(2) {
        return None;
    }
    let p = (top - d) / 2;
    (p < n.min(m)).then_some(p)
}

/// Monomials of degree `degree` in `g0..g6` with h-weight `weight`.
pub fn g_monomials(degree: u32, weight: i64) -> Vec<Monomial> {
    fn rec(k: usize, left: u32, cur: &mut [u8; 7], out: &mut Vec<[u8; 7]>) {
        if k == 6 {
            cur[6] = left as u8;
            out.push(*cur);
            return;
        }
        for e in 0..=left {
            cur[k] = e as u8;
            rec(k + 1, left - e, cur, out);
        }
    }
    let mut all = Vec::new();
    rec(0, degree, &mut [0; 7], &mut all);
    let mut out: Vec<Monomial> = all
        .into_iter()
        .map(|gs| {
            let mut m = [0u8; NVARS];
            m[4..].copy_from_slice(&gs);
            Monomial(m)
        })
        .filter(|m| m.g_weight() == weight)
        .collect();
    out.sort();
    out
}

/// Basis of the e-kernel in the span of degree-`degree` monomials in the
/// curve coefficients of h-weight `weight`.
pub fn e_kernel_weight_space(degree: u32, weight: i64) -> Result<Vec<Poly>, Sl2Error> {
    let source = g_monomials(degree, weight);
    if source.is_empty() {
        return Err(Sl2Error::EmptyWeightSpace { degree, weight });
    }
    let target = g_monomials(degree, weight + 2);
    let index: HashMap<Monomial, usize> = target.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    // Column j holds e(source[j]) in the target basis; rows are target monomials.
    let mut rows = vec![vec![Rational::zero(); source.len()]; target.len()];
    for (j, m) in source.iter().enumerate() {
        let img = derive_poly(Generator::E, &Poly::monomial(*m, Rational::one()));
        for (tm, c) in img.terms() {
            rows[index[tm]][j] = c.clone();
        }
    }
    let mut ech = Echelon::new(source.len());
    for r in rows {
        ech.insert(r);
    }
    Ok(ech
        .nullspace()
        .into_iter()
        .map(|v| Poly::from_terms(source.iter().copied().zip(v)))
        .collect())
}
