//! Relations as formal polynomials in the fifteen coordinate symbols.
//!
//! Before ring normalization every relation is a polynomial in the basis
//! vectors of `P5..P1` with coefficients in the curve coefficients. Keeping
//! the coordinates symbolic preserves which monomial each term contributes
//! to, which is what the rank test needs.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::{AtomRegistry, COORDINATE_ATOMS};
use crate::curve::CurveElement;
use crate::dsl::{CovExpr, IdentityRecord};
use crate::error::EvalError;
use crate::eval::{AtomSource, Evaluator};
use crate::linalg::Echelon;
use crate::poly::Poly;
use crate::rational::{rat, Rational};
use crate::report::Status;
use crate::sl2::{derive_poly, expand_orbit, Generator, IrrModule, Sl2Value};

/// Number of coordinate symbols; symbol 0 is reserved for the constant `1`.
pub const NSYMBOLS: usize = 15;

/// Number of quadratic monomials in `1, s_1..s_15`.
pub const NQUADRATIC: usize = (NSYMBOLS + 1) * (NSYMBOLS + 2) / 2;

/// `(module dimension, basis index)` of a symbol `1..=15`, in the order
/// `P5_0..P5_4, P4_0..P4_3, P3_0..P3_2, P2_0, P2_1, P1_0`.
pub fn symbol_slot(s: u8) -> (usize, usize) {
    let mut s = s as usize - 1;
    for n in (1..=5).rev() {
        if s < n {
            return (n, s);
        }
        s -= n;
    }
    panic!("symbol out of range")
}

pub fn symbol(n: usize, i: usize) -> u8 {
    ((n + 1..=5).sum::<usize>() + i + 1) as u8
}

pub fn symbol_name(s: u8) -> String {
    let (n, i) = symbol_slot(s);
    format!("P{n}_{i}")
}

/// A polynomial in the coordinate symbols with coefficients in `g0..g6`,
/// keyed by the sorted multiset of symbols.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FormalForm {
    terms: BTreeMap<Vec<u8>, Poly>,
}

impl FormalForm {
    pub fn symbol(s: u8) -> FormalForm {
        let mut terms = BTreeMap::new();
        terms.insert(vec![s], Poly::one());
        FormalForm { terms }
    }

    pub fn coefficient(p: Poly) -> FormalForm {
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(Vec::new(), p);
        }
        FormalForm { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &Poly)> {
        self.terms.iter()
    }

    /// Largest number of symbols in a term.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    fn push(&mut self, key: Vec<u8>, p: Poly) {
        if p.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(q) => {
                *q = &*q + &p;
                if q.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, p);
            }
        }
    }

    /// Replaces every symbol by its ring value.
    pub fn substitute(&self, reg: &AtomRegistry) -> CurveElement {
        let value = |s: u8| {
            let (n, i) = symbol_slot(s);
            reg.get(COORDINATE_ATOMS[5 - n])
                .expect("coordinate atom")
                .basis[i]
                .clone()
        };
        let mut acc = CurveElement::zero();
        for (key, p) in &self.terms {
            let mut t = CurveElement::poly(p.clone());
            for &s in key {
                t = t.mul_elem(&value(s));
            }
            acc = acc.add_elem(&t);
        }
        acc
    }

    /// Coefficients of a form of degree at most two, homogenized with the
    /// symbol `1`, after specializing the curve coefficients.
    pub fn quadratic_row(&self, g: &[Rational; 7]) -> Option<Vec<Rational>> {
        let mut row = vec![Rational::zero(); NQUADRATIC];
        for (key, p) in &self.terms {
            let (a, b) = match key.as_slice() {
                [] => (0, 0),
                [s] => (0, *s as usize),
                [s, t] => (*s as usize, *t as usize),
                _ => return None,
            };
            let c = p.specialize_g(g).as_constant()?;
            row[quadratic_index(a, b)] += c;
        }
        Some(row)
    }
}

/// Index of `s_a s_b` (`a <= b`, symbol 0 = `1`) among the quadratic monomials.
pub fn quadratic_index(a: usize, b: usize) -> usize {
    let n = NSYMBOLS + 1;
    a * n - a * a.saturating_sub(1) / 2 + (b - a)
}

fn act_symbol(op: Generator, s: u8) -> Option<(Rational, u8)> {
    let (n, i) = symbol_slot(s);
    match op {
        Generator::E => (i > 0).then(|| (rat((n - i) as i64), s - 1)),
        Generator::F => (i + 1 < n).then(|| (rat((i + 1) as i64), s + 1)),
        Generator::H => Some((rat(n as i64 - 2 * i as i64 - 1), s)),
    }
}

impl Sl2Value for FormalForm {
    fn zero() -> Self {
        FormalForm::default()
    }

    fn constant(c: Rational) -> Self {
        FormalForm::coefficient(Poly::constant(c))
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, p) in &other.terms {
            out.push(k.clone(), p.clone());
        }
        out
    }

    fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return FormalForm::default();
        }
        FormalForm {
            terms: self
                .terms
                .iter()
                .map(|(k, p)| (k.clone(), p.scale(c)))
                .collect(),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = FormalForm::default();
        for (k1, p1) in &self.terms {
            for (k2, p2) in &other.terms {
                let mut k: Vec<u8> = k1.iter().chain(k2).copied().collect();
                k.sort_unstable();
                out.push(k, p1 * p2);
            }
        }
        out
    }

    fn act(&self, op: Generator) -> Self {
        let mut out = FormalForm::default();
        for (k, p) in &self.terms {
            out.push(k.clone(), derive_poly(op, p));
            for (pos, &s) in k.iter().enumerate() {
                if let Some((c, s2)) = act_symbol(op, s) {
                    let mut k2 = k.clone();
                    k2[pos] = s2;
                    k2.sort_unstable();
                    out.push(k2, p.scale(&c));
                }
            }
        }
        out
    }

    fn weight(&self) -> Option<i64> {
        let (k, p) = self.terms.iter().next()?;
        let (m, c) = p.leading_term()?;
        let hp = derive_poly(Generator::H, &Poly::monomial(*m, c.clone()));
        let w_coeff = hp.coefficient(m) / c;
        let w_sym: Rational = k
            .iter()
            .map(|&s| act_symbol(Generator::H, s).unwrap().0)
            .sum();
        let w = w_coeff + w_sym;
        if !w.is_integer() {
            return None;
        }
        let w_int: i64 = w.to_integer().try_into().ok()?;
        (self.act(Generator::H) == self.scale(&w)).then_some(w_int)
    }
}

/// Symbolic coordinate modules and the covariant modules as coefficients.
pub struct FormalAtoms {
    modules: BTreeMap<String, IrrModule<FormalForm>>,
}

impl FormalAtoms {
    pub fn new(reg: &AtomRegistry) -> FormalAtoms {
        let mut modules = BTreeMap::new();
        for name in reg.names() {
            let m = reg.get(name).expect("listed atom");
            let basis = if let Some(n) = COORDINATE_ATOMS
                .iter()
                .position(|a| *a == name)
                .map(|k| 5 - k)
            {
                (0..n).map(|i| FormalForm::symbol(symbol(n, i))).collect()
            } else {
                m.basis
                    .iter()
                    .map(|v| {
                        FormalForm::coefficient(
                            v.as_poly().expect("covariant is a polynomial").clone(),
                        )
                    })
                    .collect()
            };
            modules.insert(
                name.to_string(),
                IrrModule {
                    label: name.to_string(),
                    basis,
                },
            );
        }
        FormalAtoms { modules }
    }
}

impl AtomSource<FormalForm> for FormalAtoms {
    fn module(&self, name: &str) -> Option<&IrrModule<FormalForm>> {
        self.modules.get(name)
    }
}

pub type FormalEvaluator<'a> = Evaluator<'a, FormalForm, FormalAtoms>;

/// The formal module of a relation `sum c_j T_j`.
pub fn relation_module(
    ev: &FormalEvaluator<'_>,
    terms: &[(Rational, CovExpr)],
    dim: usize,
    label: &str,
) -> Result<Arc<IrrModule<FormalForm>>, EvalError> {
    let mut hw = FormalForm::default();
    for (c, t) in terms {
        hw = hw.add(&ev.eval(t)?.scale(c));
    }
    Ok(Arc::new(expand_orbit(&hw, dim, label)?))
}

/// Coefficients that make a record hold: printed when verbatim, audited when
/// repaired, none when it failed.
pub fn effective_terms(rec: &IdentityRecord, status: &Status) -> Option<Vec<(Rational, CovExpr)>> {
    let terms = crate::engine::relation_terms(&rec.expr, &rec.rhs);
    match status {
        Status::ExactZero | Status::ConstantMatch => Some(terms),
        Status::AuditRepaired(cs) => Some(
            cs.iter()
                .cloned()
                .zip(terms.into_iter().map(|(_, t)| t))
                .collect(),
        ),
        Status::Failed(_) => None,
    }
}

/// A sample of curve coefficients with small numerators and denominators.
pub fn random_curve(rng: &mut impl Rng) -> [Rational; 7] {
    std::array::from_fn(|_| {
        let n: i64 = rng.gen_range(-40..=40);
        let d: i64 = rng.gen_range(1..=12);
        Rational::new(n.into(), d.into())
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankTrial {
    pub seed: u64,
    /// Curves tried in order; the last one produced `rank`.
    pub samples: Vec<[Rational; 7]>,
    pub rank: usize,
    pub block_ranks: Vec<((i64, i64), usize)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankReport {
    pub expected: usize,
    pub trials: Vec<RankTrial>,
    /// Multiplicity of each relation dimension `1..=7`.
    pub profile: Vec<usize>,
}

impl RankReport {
    pub fn passes(&self) -> bool {
        self.trials.iter().all(|t| t.rank == self.expected)
    }
}

/// Specialized orbit rows of a set of relations, grouped by grade.
pub struct RelationRows {
    pub grades: Vec<(i64, i64)>,
    pub modules: Vec<Arc<IrrModule<FormalForm>>>,
}

impl RelationRows {
    pub fn build(
        reg: &AtomRegistry,
        records: &[(IdentityRecord, Vec<(Rational, CovExpr)>)],
    ) -> Result<RelationRows, EvalError> {
        let atoms = FormalAtoms::new(reg);
        let ev = Evaluator::new(&atoms);
        let mut grades = Vec::new();
        let mut modules = Vec::new();
        for (rec, terms) in records {
            modules.push(relation_module(&ev, terms, rec.dim, &rec.id)?);
            grades.push(rec.grade);
        }
        Ok(RelationRows { grades, modules })
    }

    /// Rank of the orbit rows restricted to `keep`, at the curve `g`.
    pub fn rank(
        &self,
        g: &[Rational; 7],
        keep: impl Fn((i64, i64)) -> bool,
    ) -> Result<usize, EvalError> {
        let mut ech = Echelon::new(NQUADRATIC);
        for (grade, m) in self.grades.iter().zip(&self.modules) {
            if !keep(*grade) {
                continue;
            }
            for v in &m.basis {
                let row = v.quadratic_row(g).ok_or_else(|| {
                    EvalError::Structural(format!("relation {} is not quadratic", m.label))
                })?;
                ech.insert(row);
            }
        }
        Ok(ech.rank())
    }

    pub fn scalar_count(&self) -> usize {
        self.modules.iter().map(|m| m.dim()).sum()
    }
}

/// Rank of the scalar relations at `trials` curves drawn from consecutive
/// seeds, or at the one curve given. A rank below the expected value is
/// retried with fresh samples, at most three times per trial.
pub fn rank_check(
    rows: &RelationRows,
    seed: u64,
    trials: usize,
    curve: Option<&[Rational; 7]>,
    blocks: &[(i64, i64)],
) -> Result<RankReport, EvalError> {
    let expected = rows.scalar_count();
    let mut profile = vec![0; 7];
    for m in &rows.modules {
        if (1..=7).contains(&m.dim()) {
            profile[m.dim() - 1] += 1;
        }
    }
    let mut out = Vec::new();
    for t in 0..trials.max(1) {
        let s = seed + t as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let mut samples = Vec::new();
        let mut rank = 0;
        for _ in 0..4 {
            let g = curve.cloned().unwrap_or_else(|| random_curve(&mut rng));
            rank = rows.rank(&g, |_| true)?;
            samples.push(g);
            if rank == expected || curve.is_some() {
                break;
            }
        }
        let g = samples.last().expect("one sample");
        let block_ranks = blocks
            .iter()
            .map(|b| Ok((*b, rows.rank(g, |gr| gr == *b)?)))
            .collect::<Result<Vec<_>, EvalError>>()?;
        out.push(RankTrial {
            seed: s,
            samples,
            rank,
            block_ranks,
        });
    }
    Ok(RankReport {
        expected,
        trials: out,
        profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_expr;

    #[test]
    fn symbols_round_trip() {
        let mut seen = Vec::new();
        for n in (1..=5).rev() {
            for i in 0..n {
                let s = symbol(n, i);
                assert_eq!(symbol_slot(s), (n, i));
                seen.push(s);
            }
        }
        assert_eq!(seen, (1..=15).collect::<Vec<u8>>());
        assert_eq!(symbol_name(10), "P3_0");
    }

    #[test]
    fn quadratic_indices_are_a_bijection() {
        let mut idx: Vec<usize> = (0..=NSYMBOLS)
            .flat_map(|a| (a..=NSYMBOLS).map(move |b| quadratic_index(a, b)))
            .collect();
        idx.sort_unstable();
        assert_eq!(idx, (0..NQUADRATIC).collect::<Vec<_>>());
        assert_eq!(NQUADRATIC, 136);
    }

    #[test]
    fn symbolic_modules_obey_laws() {
        let reg = AtomRegistry::build().unwrap();
        let atoms = FormalAtoms::new(&reg);
        for name in reg.names() {
            atoms.module(name).unwrap().check_laws().unwrap();
        }
    }

    #[test]
    fn substitution_matches_ring_evaluation() {
        let reg = AtomRegistry::build().unwrap();
        let atoms = FormalAtoms::new(&reg);
        let formal = Evaluator::new(&atoms);
        let ring = Evaluator::new(&reg);
        for src in [
            "[P5 @ P5]_5",
            "[P4 @ P3]_4",
            "[G @ [P5 @ P4]_6]_4",
            "[G2_9 @ [P5 @ P5]_9]_1",
            "[P3 @ P3]_1 * P1",
            "G2_5",
        ] {
            let e = parse_expr(src).unwrap();
            let f = formal.eval(&e).unwrap();
            assert_eq!(f.substitute(&reg), ring.eval(&e).unwrap(), "{src}");
        }
    }

    #[test]
    fn orbit_components_substitute_to_ring_orbit() {
        let reg = AtomRegistry::build().unwrap();
        let atoms = FormalAtoms::new(&reg);
        let formal = Evaluator::new(&atoms);
        let ring = Evaluator::new(&reg);
        let e = parse_expr("[G @ [P5 @ P4]_8]_4").unwrap();
        let fm = formal.module_of(&e).unwrap();
        let rm = ring.module_of(&e).unwrap();
        for (a, b) in fm.basis.iter().zip(&rm.basis) {
            assert_eq!(a.substitute(&reg), *b);
        }
    }

    #[test]
    fn linear_and_constant_terms_use_the_unit_symbol() {
        let f = FormalForm::constant(rat(3)).add(&FormalForm::symbol(15));
        let row = f.quadratic_row(&std::array::from_fn(|_| rat(1))).unwrap();
        assert_eq!(row[quadratic_index(0, 0)], rat(3));
        assert_eq!(row[quadratic_index(0, 15)], rat(1));
        let cubic = FormalForm::symbol(1)
            .mul(&FormalForm::symbol(2))
            .mul(&FormalForm::symbol(3));
        assert!(cubic
            .quadratic_row(&std::array::from_fn(|_| rat(1)))
            .is_none());
    }
}
