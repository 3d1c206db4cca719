//! Sparse exact-rational polynomials over the fixed alphabet
//! `x1, x2, y1, y2, g0..g6`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::PolyError;
use crate::rational::{rat, Rational};

/// Number of indeterminates in the alphabet.
pub const NVARS: usize = 11;

/// An indeterminate. The declaration order is the canonical variable order.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Variable {
    X1,
    X2,
    Y1,
    Y2,
    G0,
    G1,
    G2,
    G3,
    G4,
    G5,
    G6,
}

impl Variable {
    pub const ALL: [Variable; NVARS] = [
        Variable::X1,
        Variable::X2,
        Variable::Y1,
        Variable::Y2,
        Variable::G0,
        Variable::G1,
        Variable::G2,
        Variable::G3,
        Variable::G4,
        Variable::G5,
        Variable::G6,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Variable {
        Variable::ALL[i]
    }

    /// The curve coefficient `g_k`.
    pub fn g(k: usize) -> Variable {
        assert!(k <= 6, "curve coefficient index {k} out of range");
        Variable::ALL[4 + k]
    }

    /// Index `k` when this is `g_k`.
    pub fn g_index(self) -> Option<usize> {
        let i = self.index();
        (i >= 4).then(|| i - 4)
    }

    pub fn name(self) -> &'static str {
        match self {
            Variable::X1 => "x1",
            Variable::X2 => "x2",
            Variable::Y1 => "y1",
            Variable::Y2 => "y2",
            Variable::G0 => "g0",
            Variable::G1 => "g1",
            Variable::G2 => "g2",
            Variable::G3 => "g3",
            Variable::G4 => "g4",
            Variable::G5 => "g5",
            Variable::G6 => "g6",
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Monomial(pub [u8; NVARS]);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial([0; NVARS])
    }

    pub fn var(v: Variable) -> Monomial {
        let mut m = [0; NVARS];
        m[v.index()] = 1;
        Monomial(m)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn exp(&self, v: Variable) -> u8 {
        self.0[v.index()]
    }

    pub fn with_exp(mut self, v: Variable, e: u8) -> Monomial {
        self.0[v.index()] = e;
        self
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(other.0.iter()) {
            *a = a.checked_add(*b).expect("exponent overflow");
        }
        Monomial(m)
    }

    /// Exponent sum restricted to `g0..g6`.
    pub fn g_degree(&self) -> u32 {
        self.0[4..].iter().map(|&e| e as u32).sum()
    }

    /// h-weight contributed by the curve coefficients: `g_k` has weight `2k-6`.
    pub fn g_weight(&self) -> i64 {
        self.0[4..]
            .iter()
            .enumerate()
            .map(|(k, &e)| (2 * k as i64 - 6) * e as i64)
            .sum()
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in Variable::ALL {
            let e = self.exp(v);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// A polynomial with exact rational coefficients. Terms are kept sorted in
/// ascending monomial order with no zero coefficients, so equality is
/// structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Monomial, Rational)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(Monomial::one(), c)],
            }
        }
    }

    pub fn from_int(c: i64) -> Poly {
        Poly::constant(rat(c))
    }

    pub fn var(v: Variable) -> Poly {
        Poly {
            terms: vec![(Monomial::var(v), Rational::one())],
        }
    }

    pub fn monomial(m: Monomial, c: Rational) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(m, c)],
            }
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> Poly {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in iter {
            if c.is_zero() {
                continue;
            }
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Poly::from_map(acc)
    }

    pub(crate) fn from_map(acc: HashMap<Monomial, Rational>) -> Poly {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|a| a.0);
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Rational)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value when the polynomial has no non-trivial monomials.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if *m == Monomial::one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms
            .binary_search_by(|(t, _)| t.cmp(m))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    /// Largest monomial in the graded-lex order with its coefficient.
    pub fn leading_term(&self) -> Option<&(Monomial, Rational)> {
        self.terms.last()
    }

    pub fn degree_in(&self, v: Variable) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.exp(v) as u32)
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn contains(&self, v: Variable) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(v) > 0)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect(),
        }
    }

    /// Multiplies by a single monomial with coefficient.
    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        // Multiplying by a monomial can change the relative graded-lex
        // order, so re-sort.
        let mut terms: Vec<_> = self.terms.iter().map(|(t, x)| (t.mul(m), x * c)).collect();
        terms.sort_unstable_by_key(|a| a.0);
        Poly { terms }
    }

    pub fn add_poly(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let s = &a[i].1 + &b[j].1;
                    if !s.is_zero() {
                        out.push((a[i].0, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Poly { terms: out }
    }

    pub fn sub_poly(&self, other: &Poly) -> Poly {
        self.add_poly(&other.neg_poly())
    }

    pub fn neg_poly(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn mul_poly(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len() / 2 + 1);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let prod = ca * cb;
                match acc.get_mut(&m) {
                    Some(x) => *x += prod,
                    None => {
                        acc.insert(m, prod);
                    }
                }
            }
        }
        Poly::from_map(acc)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..k {
            out = out.mul_poly(self);
        }
        out
    }

    /// Formal partial derivative.
    pub fn partial(&self, v: Variable) -> Poly {
        let idx = v.index();
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.0[idx];
            (e > 0).then(|| {
                let mut m2 = *m;
                m2.0[idx] = e - 1;
                (m2, c * rat(e as i64))
            })
        });
        Poly::from_terms(terms)
    }

    /// Groups the polynomial by powers of `v`: entry `j` is the coefficient of
    /// `v^j`, free of `v`.
    pub fn coefficients_in(&self, v: Variable) -> Vec<Poly> {
        let idx = v.index();
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.0[idx] as usize;
            let mut m2 = *m;
            m2.0[idx] = 0;
            buckets[e].push((m2, c.clone()));
        }
        buckets.into_iter().map(Poly::from_terms).collect()
    }

    /// Exact quotient by `x1 - x2`, or `None` when `x1 - x2` does not divide.
    ///
    /// Synthetic division in `x1` with root `x2`.
    pub fn div_delta(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let coeffs = self.coefficients_in(Variable::X1);
        let n = coeffs.len() - 1;
        if n == 0 {
            return None;
        }
        let x2 = Poly::var(Variable::X2);
        // b_{n-1} = a_n, b_{j-1} = a_j + x2 * b_j, remainder a_0 + x2 * b_0.
        let mut quotient: Vec<Poly> = vec![Poly::zero(); n];
        let mut carry = coeffs[n].clone();
        for j in (1..=n).rev() {
            quotient[j - 1] = carry.clone();
            carry = coeffs[j - 1].add_poly(&x2.mul_poly(&carry));
        }
        if !carry.is_zero() {
            return None;
        }
        let mut terms = Vec::new();
        for (j, q) in quotient.into_iter().enumerate() {
            for (m, c) in q.terms {
                terms.push((m.with_exp(Variable::X1, j as u8), c));
            }
        }
        Some(Poly::from_terms(terms))
    }

    /// Exact evaluation under a (partial) assignment.
    pub fn eval(&self, assignment: &BTreeMap<Variable, Rational>) -> Result<Rational, PolyError> {
        let mut point: [Option<Rational>; NVARS] = Default::default();
        for (v, x) in assignment {
            point[v.index()] = Some(x.clone());
        }
        for v in Variable::ALL {
            if point[v.index()].is_none() && self.contains(v) {
                return Err(PolyError::MissingVariable(v));
            }
        }
        let full: [Rational; NVARS] =
            std::array::from_fn(|i| point[i].clone().unwrap_or_else(Rational::zero));
        Ok(self.eval_dense(&full))
    }

    /// Evaluation at a full point given in variable order.
    pub fn eval_dense(&self, point: &[Rational; NVARS]) -> Rational {
        let mut powers: Vec<Vec<Rational>> = Vec::with_capacity(NVARS);
        for (i, x) in point.iter().enumerate() {
            let deg = self.terms.iter().map(|(m, _)| m.0[i]).max().unwrap_or(0) as usize;
            let mut p = Vec::with_capacity(deg + 1);
            p.push(Rational::one());
            for k in 1..=deg {
                let next = &p[k - 1] * x;
                p.push(next);
            }
            powers.push(p);
        }
        let mut sum = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= &powers[i][e as usize];
                }
            }
            sum += t;
        }
        sum
    }

    /// Substitutes rational values for the curve coefficients only.
    pub fn specialize_g(&self, g: &[Rational; 7]) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut t = c.clone();
            let mut m2 = *m;
            for (k, gk) in g.iter().enumerate() {
                let e = m.0[4 + k];
                if e > 0 {
                    t *= num_traits::pow(gk.clone(), e as usize);
                    m2.0[4 + k] = 0;
                }
            }
            (m2, t)
        });
        Poly::from_terms(terms)
    }

    /// Replaces `x2` by `x1` (the restriction to the diagonal `x1 = x2`).
    pub fn restrict_diagonal(&self) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut m2 = *m;
            m2.0[0] += m2.0[1];
            m2.0[1] = 0;
            (m2, c.clone())
        });
        Poly::from_terms(terms)
    }

    /// Exchanges `x1 <-> x2` and `y1 <-> y2`.
    pub fn swap_points(&self) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut m2 = *m;
            m2.0.swap(0, 1);
            m2.0.swap(2, 3);
            (m2, c.clone())
        });
        Poly::from_terms(terms)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // Highest terms first reads more naturally.
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let is_one = *m == Monomial::one();
            if abs.is_one() && !is_one {
                write!(f, "{m}")?;
            } else if is_one {
                write!(f, "{abs}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.add_poly(rhs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.sub_poly(rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.mul_poly(rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.neg_poly()
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        self.add_poly(&rhs)
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self.sub_poly(&rhs)
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        self.mul_poly(&rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.neg_poly()
    }
}

/// `x1 - x2`.
pub fn delta() -> Poly {
    &Poly::var(Variable::X1) - &Poly::var(Variable::X2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn x1() -> Poly {
        Poly::var(Variable::X1)
    }
    fn x2() -> Poly {
        Poly::var(Variable::X2)
    }

    #[test]
    fn additive_inverse() {
        assert!((&x1() + &(-&x1())).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let lhs = &(&x1() - &x2()) * &(&x1() + &x2());
        let rhs = &x1().pow(2) - &x2().pow(2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn scale_inverse() {
        let g6 = Poly::var(Variable::G6);
        let p = g6.scale(&rat(144));
        assert_eq!(p.scale(&ratio(1, 144)), g6);
    }

    #[test]
    fn partials() {
        assert_eq!(
            x1().pow(3).partial(Variable::X1),
            x1().pow(2).scale(&rat(3))
        );
        let g5 = Poly::var(Variable::G5);
        let p = &(&g5 * &x1()) * &x2();
        assert_eq!(p.partial(Variable::X2), &g5 * &x1());
        assert!(g5.partial(Variable::X1).is_zero());
    }

    #[test]
    fn delta_division() {
        let sq = &x1().pow(2) - &x2().pow(2);
        assert_eq!(sq.div_delta(), Some(&x1() + &x2()));
        let cube = &x1().pow(3) - &x2().pow(3);
        let expected = &(&x1().pow(2) + &(&x1() * &x2())) + &x2().pow(2);
        assert_eq!(cube.div_delta(), Some(expected));
        assert_eq!((&x1() + &x2()).div_delta(), None);
        assert_eq!(Poly::one().div_delta(), None);
        assert_eq!(Poly::zero().div_delta(), Some(Poly::zero()));
    }

    #[test]
    fn evaluation() {
        let g = |k| Poly::var(Variable::g(k));
        let p = &(&g(6) * &g(4)) - &g(5).pow(2);
        let assignment: BTreeMap<_, _> = [
            (Variable::G6, rat(1)),
            (Variable::G5, rat(2)),
            (Variable::G4, rat(3)),
        ]
        .into_iter()
        .collect();
        assert_eq!(p.eval(&assignment).unwrap(), rat(-1));

        let d = delta();
        let at5: BTreeMap<_, _> = [(Variable::X1, rat(5)), (Variable::X2, rat(5))]
            .into_iter()
            .collect();
        assert_eq!(d.eval(&at5).unwrap(), rat(0));

        let c = Poly::constant(ratio(1, 144));
        assert_eq!(c.eval(&BTreeMap::new()).unwrap(), ratio(1, 144));

        match d.eval(&BTreeMap::new()) {
            Err(PolyError::MissingVariable(Variable::X1)) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn display_is_readable() {
        let p = &x1().pow(2).scale(&ratio(3, 2)) - &Poly::var(Variable::Y1);
        assert_eq!(p.to_string(), "3/2*x1^2 - y1");
    }
}
