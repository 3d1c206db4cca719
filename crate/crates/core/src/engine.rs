//! Verification and audit of covariant relations.

use std::collections::HashMap;
use std::hash::{DefaultHasher, Hash, Hasher};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::catalog::{AtomRegistry, Discrepancy};
use crate::curve::CurveElement;
use crate::dsl::{parse_relation, CovExpr, IdentityRecord, RecordKind};
use crate::error::EvalError;
use crate::eval::Evaluator;
use crate::linalg::{normalize_first, Echelon};
use crate::poles::pole_orders;
use crate::poly::Monomial;
use crate::rational::Rational;
use crate::report::{RecordOutcome, Status, VerificationReport};
use crate::sl2::Sl2Value;

/// Exact nullspace of `sum_j c_j T_j = 0` over the monomial coefficients of
/// all four parts, after bringing the terms to a common power of `x1 - x2`.
/// Each basis vector is scaled so its first non-zero entry is one.
pub fn audit(terms: &[CurveElement]) -> Result<Vec<Vec<Rational>>, EvalError> {
    let mut weight = None;
    for t in terms.iter().filter(|t| !t.is_zero()) {
        let w = t
            .weight()
            .ok_or_else(|| EvalError::Structural("audit term is not an h-eigenvector".into()))?;
        if *weight.get_or_insert(w) != w {
            return Err(EvalError::Structural(format!(
                "audit terms have inconsistent weights {} and {w}",
                weight.unwrap()
            )));
        }
    }
    let k = terms.iter().map(CurveElement::delta_pow).max().unwrap_or(0);
    let ncols = terms.len();
    let mut rows: HashMap<(usize, Monomial), Vec<Rational>> = HashMap::new();
    for (j, t) in terms.iter().enumerate() {
        for (part, num) in t.numerators_over(k).iter().enumerate() {
            for (m, c) in num.terms() {
                rows.entry((part, *m))
                    .or_insert_with(|| vec![Rational::default(); ncols])[j] = c.clone();
            }
        }
    }
    let mut ech = Echelon::new(ncols);
    for row in rows.into_values() {
        if ech.is_full() {
            break;
        }
        ech.insert(row);
    }
    Ok(ech.nullspace().iter().map(|v| normalize_first(v)).collect())
}

pub type CurveEvaluator<'a> = Evaluator<'a, CurveElement, AtomRegistry>;

#[derive(Copy, Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Check every basis vector of the f-orbit, not just the highest weight.
    pub orbit: bool,
}

/// Coefficient-term pairs of `expr - rhs`, the constant as a multiple of `1`.
pub fn relation_terms(expr: &CovExpr, rhs: &Rational) -> Vec<(Rational, CovExpr)> {
    let mut terms = expr.summands();
    if !rhs.is_zero() {
        terms.push((-rhs, CovExpr::Const(Rational::one())));
    }
    terms
}

fn combine(coeffs: &[Rational], values: &[CurveElement]) -> CurveElement {
    coeffs
        .iter()
        .zip(values)
        .fold(CurveElement::zero(), |acc, (c, v)| {
            acc.add_elem(&v.scale(c))
        })
}

/// Short stable summary of a non-zero residual.
pub fn residual_digest(r: &CurveElement) -> String {
    let mut h = DefaultHasher::new();
    r.to_string().hash(&mut h);
    format!(
        "delta^{} size={} hash={:016x}",
        r.delta_pow(),
        r.size(),
        h.finish()
    )
}

/// Pole orders of the first non-vanishing term, clipped at zero.
pub fn leading_grade(values: &[CurveElement]) -> (i64, i64) {
    values
        .iter()
        .find_map(|v| pole_orders(v).ok())
        .map_or((0, 0), |p| (p.div.max(0), p.diag.max(0)))
}

fn fmt_coeffs(cs: &[Rational]) -> String {
    cs.iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Verifies one relation: verbatim first, then by audit of its term set.
pub fn verify_record(
    ev: &CurveEvaluator<'_>,
    rec: &IdentityRecord,
    opts: VerifyOptions,
) -> Result<(RecordOutcome, Vec<Discrepancy>), EvalError> {
    let terms = relation_terms(&rec.expr, &rec.rhs);
    let values = terms
        .iter()
        .map(|(_, t)| ev.eval(t))
        .collect::<Result<Vec<_>, _>>()?;
    let printed: Vec<Rational> = terms.iter().map(|(c, _)| c.clone()).collect();
    let value = combine(&printed, &values);
    let mut notes = Vec::new();

    let computed_grade = leading_grade(&values);
    if computed_grade != rec.grade {
        notes.push(Discrepancy {
            subject: rec.id.clone(),
            message: format!(
                "filed at grade {:?} but the leading term has pole orders {:?}",
                rec.grade, computed_grade
            ),
        });
    }

    let (status, nullspace_dim, coeffs) = if value.is_zero() {
        let s = if rec.rhs.is_zero() {
            Status::ExactZero
        } else {
            Status::ConstantMatch
        };
        (s, None, Some(printed.clone()))
    } else {
        let ns = audit(&values)?;
        match ns.as_slice() {
            [v] if !v[0].is_zero() => {
                let fixed: Vec<Rational> = v.iter().map(|x| x * &printed[0]).collect();
                notes.push(Discrepancy {
                    subject: rec.id.clone(),
                    message: format!(
                        "printed coefficients [{}] fail; the unique relation on these terms has [{}]",
                        fmt_coeffs(&printed),
                        fmt_coeffs(&fixed)
                    ),
                });
                (Status::AuditRepaired(fixed.clone()), Some(1), Some(fixed))
            }
            _ => {
                notes.push(Discrepancy {
                    subject: rec.id.clone(),
                    message: format!(
                        "relation fails and its audit nullspace has dimension {}",
                        ns.len()
                    ),
                });
                (
                    Status::Failed(residual_digest(&value)),
                    Some(ns.len()),
                    None,
                )
            }
        }
    };

    let orbit_count = match &coeffs {
        None => 0,
        Some(cs) if opts.orbit => {
            let modules = terms
                .iter()
                .map(|(_, t)| ev.module_of(t))
                .collect::<Result<Vec<_>, _>>()?;
            (0..rec.dim)
                .filter(|&k| {
                    let comps: Vec<CurveElement> =
                        modules.iter().map(|m| m.basis[k].clone()).collect();
                    combine(cs, &comps).is_zero()
                })
                .count()
        }
        Some(_) => rec.dim,
    };

    Ok((
        RecordOutcome {
            id: rec.id.clone(),
            kind: rec.kind,
            grade: rec.grade,
            computed_grade,
            dim: rec.dim,
            status,
            orbit_count,
            nullspace_dim,
            value,
        },
        notes,
    ))
}

fn failed_outcome(rec: &IdentityRecord, err: &EvalError) -> (RecordOutcome, Vec<Discrepancy>) {
    let outcome = RecordOutcome {
        id: rec.id.clone(),
        kind: rec.kind,
        grade: rec.grade,
        computed_grade: (0, 0),
        dim: rec.dim,
        status: Status::Failed(format!("evaluation error: {err}")),
        orbit_count: 0,
        nullspace_dim: None,
        value: CurveElement::zero(),
    };
    let note = Discrepancy {
        subject: rec.id.clone(),
        message: err.to_string(),
    };
    (outcome, vec![note])
}

/// Verifies records in parallel; output order follows the input. The
/// registry's construction log heads the discrepancy list.
pub fn verify_records(
    reg: &AtomRegistry,
    records: &[IdentityRecord],
    opts: VerifyOptions,
) -> VerificationReport {
    let ev = Evaluator::new(reg);
    let results: Vec<_> = records
        .par_iter()
        .map(|rec| verify_record(&ev, rec, opts).unwrap_or_else(|e| failed_outcome(rec, &e)))
        .collect();
    let mut report = VerificationReport {
        records: Vec::with_capacity(results.len()),
        discrepancies: reg.discrepancies.clone(),
    };
    for (outcome, notes) in results {
        report.records.push(outcome);
        report.discrepancies.extend(notes);
    }
    report
}

/// Verifies the quadratic records of a catalog.
pub fn verify_catalog(
    reg: &AtomRegistry,
    records: &[IdentityRecord],
    opts: VerifyOptions,
) -> VerificationReport {
    let quad: Vec<IdentityRecord> = records
        .iter()
        .filter(|r| r.kind == RecordKind::Quadratic)
        .cloned()
        .collect();
    verify_records(reg, &quad, opts)
}

/// The unit relation `1 = -4 [3 3]_1` used to homogenize the Kummer quartic.
pub fn kummer_unit_record() -> IdentityRecord {
    let (expr, rhs) = parse_relation("P1 + 2^2 * [P3 @ P3]_1 = 0").expect("static relation parses");
    IdentityRecord {
        id: "k0".into(),
        kind: RecordKind::Kummer,
        grade: (6, 2),
        dim: 1,
        expr,
        rhs,
    }
}

/// Verifies the Kummer records of a catalog together with the unit relation.
pub fn verify_kummer(reg: &AtomRegistry, records: &[IdentityRecord]) -> VerificationReport {
    let mut ks = vec![kummer_unit_record()];
    ks.extend(
        records
            .iter()
            .filter(|r| r.kind == RecordKind::Kummer)
            .cloned(),
    );
    verify_records(reg, &ks, VerifyOptions::default())
}

/// The catalog shipped with the crate.
pub const SHIPPED_CATALOG: &str = include_str!("../data/identities.cov");

pub fn shipped_records() -> Vec<IdentityRecord> {
    crate::dsl::parse_catalog(SHIPPED_CATALOG).expect("shipped catalog parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::AtomRegistry;
    use crate::dsl::parse_expr;
    use crate::eval::Evaluator;
    use crate::rational::{rat, ratio};

    fn eval_all(srcs: &[&str]) -> Vec<CurveElement> {
        let reg = AtomRegistry::build().unwrap();
        let ev = Evaluator::new(&reg);
        srcs.iter()
            .map(|s| ev.eval(&parse_expr(s).unwrap()).unwrap())
            .collect()
    }

    #[test]
    fn audit_recovers_constant() {
        let terms = eval_all(&["[P5 @ P5]_5", "P5"]);
        let ns = audit(&terms).unwrap();
        assert_eq!(ns, vec![vec![rat(1), ratio(1, 12)]]);
    }

    #[test]
    fn audit_of_vanishing_term() {
        let terms = eval_all(&["[P5 @ P4]_2"]);
        assert_eq!(audit(&terms).unwrap().len(), 1);
    }

    #[test]
    fn audit_of_independent_terms() {
        let terms = eval_all(&["P5", "[G2_9 @ P5]_5", "[G @ P5]_5", "G2_5"]);
        assert!(audit(&terms).unwrap().is_empty());
    }

    #[test]
    fn audit_rejects_mixed_weights() {
        let terms = eval_all(&["P5", "P4"]);
        assert!(audit(&terms).is_err());
    }

    fn record(src: &str) -> IdentityRecord {
        crate::dsl::parse_record(src, 1).unwrap()
    }

    #[test]
    fn verbatim_statuses() {
        let reg = AtomRegistry::build().unwrap();
        let ev = Evaluator::new(&reg);
        let opts = VerifyOptions { orbit: true };
        let (o, _) = verify_record(
            &ev,
            &record("[P5 @ P3]_5 = 0  # id=a grade=(0,0) dim=5"),
            opts,
        )
        .unwrap();
        assert_eq!(o.status, Status::ExactZero);
        assert_eq!(o.orbit_count, 5);
        let (o, _) = verify_record(
            &ev,
            &record("[P5 @ P5]_1 = 1/(2^4*3^2)  # id=b grade=(0,0) dim=1"),
            opts,
        )
        .unwrap();
        assert_eq!(o.status, Status::ConstantMatch);
        let (o, notes) = verify_record(
            &ev,
            &record("[P5 @ P5]_5 + 1/(2^2*3) * P5 = 0  # id=c grade=(2,2) dim=5"),
            opts,
        )
        .unwrap();
        assert_eq!(
            (o.status, o.orbit_count, o.computed_grade),
            (Status::ExactZero, 5, (2, 2))
        );
        assert!(notes.is_empty());
    }

    #[test]
    fn wrong_constant_is_repaired() {
        let reg = AtomRegistry::build().unwrap();
        let ev = Evaluator::new(&reg);
        let (o, notes) = verify_record(
            &ev,
            &record("[P5 @ P5]_5 + 1/5 * P5 = 0  # id=c grade=(2,2) dim=5"),
            VerifyOptions::default(),
        )
        .unwrap();
        assert_eq!(o.status, Status::AuditRepaired(vec![rat(1), ratio(1, 12)]));
        assert_eq!(o.nullspace_dim, Some(1));
        assert_eq!(notes.len(), 1);
    }

    #[test]
    fn independent_terms_fail_with_digest() {
        let reg = AtomRegistry::build().unwrap();
        let ev = Evaluator::new(&reg);
        let (o, _) = verify_record(
            &ev,
            &record("P5 + G2_5 = 0  # id=d grade=(2,2) dim=5"),
            VerifyOptions::default(),
        )
        .unwrap();
        assert!(matches!(o.status, Status::Failed(ref d) if d.starts_with("delta^")));
        assert_eq!(o.orbit_count, 0);
    }

    #[test]
    fn misfiled_grade_is_logged() {
        let reg = AtomRegistry::build().unwrap();
        let ev = Evaluator::new(&reg);
        let (_, notes) = verify_record(
            &ev,
            &record("[P5 @ P5]_5 + 1/(2^2*3) * P5 = 0  # id=c grade=(4,4) dim=5"),
            VerifyOptions::default(),
        )
        .unwrap();
        assert!(notes[0].message.contains("pole orders"));
    }
}
