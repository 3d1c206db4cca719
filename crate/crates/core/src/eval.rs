//! Evaluation of covariant expressions over any [`Sl2Value`].

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_traits::One;

use crate::catalog::AtomRegistry;
use crate::curve::CurveElement;
use crate::dsl::CovExpr;
use crate::error::{EvalError, Sl2Error};
use crate::rational::Rational;
use crate::sl2::{expand_orbit, hw_tensor, tensor_index, IrrModule, Sl2Value};

/// Supplies the module behind each atom name.
pub trait AtomSource<T> {
    fn module(&self, name: &str) -> Option<&IrrModule<T>>;
}

impl AtomSource<CurveElement> for AtomRegistry {
    fn module(&self, name: &str) -> Option<&IrrModule<CurveElement>> {
        self.get(name)
    }
}

/// Which operand of a projection plays the role of `u` in `hw_tensor(u, v, p)`.
/// Only odd `p` is sensitive to the choice, through the sign `(-1)^p`.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum OperandOrder {
    /// Operands in the order written.
    #[default]
    AsWritten,
    /// The operand of larger dimension first; ties keep the written order.
    LargerFirst,
}

/// Evaluates expressions, caching the orbit-expanded module of every
/// composite operand by its printed form.
pub struct Evaluator<'a, T, S> {
    atoms: &'a S,
    order: OperandOrder,
    cache: Mutex<HashMap<String, Arc<IrrModule<T>>>>,
}

impl<'a, T: Sl2Value, S: AtomSource<T>> Evaluator<'a, T, S> {
    pub fn new(atoms: &'a S) -> Self {
        Self::with_order(atoms, OperandOrder::default())
    }

    pub fn with_order(atoms: &'a S, order: OperandOrder) -> Self {
        Evaluator {
            atoms,
            order,
            cache: Mutex::new(HashMap::new()),
        }
    }

    fn atom(&self, name: &str) -> Result<&IrrModule<T>, EvalError> {
        self.atoms
            .module(name)
            .ok_or_else(|| EvalError::Structural(format!("unknown atom {name}")))
    }

    pub fn eval(&self, e: &CovExpr) -> Result<T, EvalError> {
        Ok(match e {
            CovExpr::Atom(a) => self.atom(a)?.highest().clone(),
            CovExpr::Const(c) => T::constant(c.clone()),
            CovExpr::Scale(c, inner) => self.eval(inner)?.scale(c),
            CovExpr::Sum(ts) => {
                let mut acc = T::zero();
                for t in ts {
                    acc = acc.add(&self.eval(t)?);
                }
                acc
            }
            CovExpr::Mul(fs) => {
                let mut acc = T::constant(Rational::one());
                for f in fs {
                    acc = acc.mul(&self.eval(f)?);
                }
                acc
            }
            CovExpr::TopPow(a, k, _) => {
                let hw = self.atom(a)?.highest().clone();
                let mut acc = hw.clone();
                for _ in 1..*k {
                    acc = acc.mul(&hw);
                }
                acc
            }
            CovExpr::Proj(a, b, d) => {
                let (a, b) = match self.order {
                    OperandOrder::LargerFirst if b.dim() > a.dim() => (b, a),
                    _ => (a, b),
                };
                let (ma, mb) = (self.module_of(a)?, self.module_of(b)?);
                let p = tensor_index(ma.dim(), mb.dim(), *d).ok_or_else(|| {
                    EvalError::Structural(format!(
                        "no {d}-component in {} x {}",
                        ma.dim(),
                        mb.dim()
                    ))
                })?;
                hw_tensor(&ma, &mb, p)?
            }
        })
    }

    /// The full module generated by an expression's value.
    pub fn module_of(&self, e: &CovExpr) -> Result<Arc<IrrModule<T>>, EvalError> {
        if let CovExpr::Atom(a) = e {
            return Ok(Arc::new(self.atom(a)?.clone()));
        }
        let key = e.to_string();
        if let Some(m) = self.cache.lock().unwrap().get(&key) {
            return Ok(m.clone());
        }
        let hw = self.eval(e)?;
        let m = expand_orbit(&hw, e.dim(), &key).map_err(|err| match err {
            Sl2Error::NotHighestWeight { .. } => EvalError::Structural(format!(
                "{key} does not evaluate to a highest-weight vector"
            )),
            other => EvalError::Sl2(other),
        })?;
        let m = Arc::new(m);
        self.cache.lock().unwrap().insert(key, m.clone());
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_expr;
    use crate::rational::{rat, ratio};

    fn registry() -> AtomRegistry {
        AtomRegistry::build().unwrap()
    }

    #[test]
    fn invariant_square_of_p5() {
        let reg = registry();
        let ev = Evaluator::new(&reg);
        let v = ev.eval(&parse_expr("[P5 @ P5]_1").unwrap()).unwrap();
        assert_eq!(v.as_constant(), Some(ratio(1, 144)));
    }

    #[test]
    fn holes_vanish() {
        let reg = registry();
        let ev = Evaluator::new(&reg);
        for src in ["[P5 @ P4]_2", "[P5 @ P3]_5", "[P4 @ P3]_2", "[P5 @ P5]_7"] {
            assert!(
                ev.eval(&parse_expr(src).unwrap()).unwrap().is_zero(),
                "{src}"
            );
        }
    }

    #[test]
    fn top_power_is_power_of_highest() {
        let reg = registry();
        let ev = Evaluator::new(&reg);
        let v = ev.eval(&parse_expr("P3^3_7").unwrap()).unwrap();
        let hw = reg.get("P3").unwrap().highest();
        assert_eq!(v, hw.pow(3));
    }

    #[test]
    fn non_highest_operand_is_structural_error() {
        let reg = registry();
        let ev = Evaluator::new(&reg);
        // P5 + 1 mixes h-weights 4 and 0, so it generates no irreducible.
        let bad = CovExpr::Sum(vec![CovExpr::Atom("P5".into()), CovExpr::Const(rat(1))]);
        let e = CovExpr::Proj(Box::new(bad), Box::new(CovExpr::Atom("P5".into())), 9);
        assert!(matches!(ev.eval(&e), Err(EvalError::Structural(_))));
    }
}
