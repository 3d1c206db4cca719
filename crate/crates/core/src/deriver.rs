//! Re-derivation of the relations from candidate terms, and the audit of
//! the tensor product table.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::catalog::{AtomRegistry, Discrepancy, COORDINATE_ATOMS, G_ATOMS};
use crate::curve::{invariant_i, CurveElement};
use crate::dsl::{CovExpr, IdentityRecord, RecordKind, GRADES};
use crate::engine::{audit, relation_terms, CurveEvaluator};
use crate::error::{EvalError, PoleError};
use crate::eval::Evaluator;
use crate::formal::{FormalAtoms, FormalEvaluator, NQUADRATIC};
use crate::linalg::{row_basis, Echelon};
use crate::poles::{pole_orders, PoleOrders};
use crate::rational::Rational;
use crate::sl2::{tensor_index, IrrModule};

/// Highest g-degree of a dressing covariant.
pub const MAX_G_DEGREE: u32 = 3;

/// Largest module dimension searched for relations.
pub const MAX_DIM: usize = 9;

fn atom(name: &str) -> CovExpr {
    CovExpr::Atom(name.to_string())
}

fn proj(a: CovExpr, b: CovExpr, d: usize) -> CovExpr {
    CovExpr::Proj(Box::new(a), Box::new(b), d)
}

/// Pole orders clipped at zero; zero elements have none.
fn clipped(u: &CurveElement) -> Result<Option<PoleOrders>, PoleError> {
    if u.is_zero() {
        return Ok(None);
    }
    let p = pole_orders(u)?;
    Ok(Some(PoleOrders {
        div: p.div.max(0),
        diag: p.diag.max(0),
    }))
}

/// A candidate term with its value and computed pole orders.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub expr: CovExpr,
    pub value: CurveElement,
    pub poles: PoleOrders,
    /// Carries a covariant of the curve coefficients.
    pub dressed: bool,
}

#[derive(Clone, Debug)]
pub struct CandidateCatalog {
    pub dim: usize,
    pub max_div: i64,
    pub terms: Vec<Candidate>,
}

/// True when `p` lies below one of the first `k + 1` relation grades.
pub fn in_grade_window(p: PoleOrders, k: usize) -> bool {
    GRADES[..=k].iter().any(|&(s, t)| p.div <= s && p.diag <= t)
}

/// Admission of a candidate at the `k`-th grade. Undressed terms must lie in
/// the grade window; dressed terms only need a divisor order within it,
/// since dressing may raise the diagonal order above the leading term's.
pub fn admitted(c: &Candidate, k: usize) -> bool {
    if c.dressed {
        c.poles.div <= GRADES[..=k].iter().map(|g| g.0).max().unwrap_or(0)
    } else {
        in_grade_window(c.poles, k)
    }
}

/// Evaluates candidates and caches them per dimension.
pub struct Deriver<'a> {
    ev: CurveEvaluator<'a>,
    /// Undressed coordinate terms: the unit, the atoms and their non-zero
    /// pairwise projections.
    inner: Vec<Candidate>,
}

impl<'a> Deriver<'a> {
    pub fn new(reg: &'a AtomRegistry) -> Result<Deriver<'a>, EvalError> {
        let ev = Evaluator::new(reg);
        let mut exprs = vec![CovExpr::Const(Rational::one())];
        exprs.extend(COORDINATE_ATOMS.iter().map(|a| atom(a)));
        for (i, a) in COORDINATE_ATOMS.iter().enumerate() {
            for b in &COORDINATE_ATOMS[i..] {
                let (n, m) = (5 - i, atom(b).dim());
                for p in 0..m {
                    if a == b && p % 2 == 1 {
                        continue;
                    }
                    exprs.push(proj(atom(a), atom(b), n + m - 1 - 2 * p));
                }
            }
        }
        let inner = exprs
            .into_par_iter()
            .map(|e| {
                let v = ev.eval(&e)?;
                // A vanishing projection is itself a relation at grade (0,0).
                let poles = clipped(&v)
                    .map_err(|err| EvalError::Structural(err.to_string()))?
                    .unwrap_or(PoleOrders { div: 0, diag: 0 });
                Ok(Candidate {
                    expr: e,
                    value: v,
                    poles,
                    dressed: false,
                })
            })
            .collect::<Result<Vec<_>, EvalError>>()?;
        Ok(Deriver { ev, inner })
    }

    pub fn evaluator(&self) -> &CurveEvaluator<'a> {
        &self.ev
    }

    /// Candidate terms of dimension `n` whose divisor order is at most `max_div`.
    pub fn build_candidates(&self, n: usize, max_div: i64) -> Result<CandidateCatalog, EvalError> {
        let mut exprs: Vec<CovExpr> = Vec::new();
        let mut terms: Vec<Candidate> = self
            .inner
            .iter()
            .filter(|q| q.expr.dim() == n && q.poles.div <= max_div)
            .cloned()
            .collect();
        for g in G_ATOMS {
            let gd = atom(g).dim();
            for q in self.inner.iter().filter(|q| !q.value.is_zero()) {
                let e = match &q.expr {
                    CovExpr::Const(_) if gd == n => atom(g),
                    CovExpr::Const(_) => continue,
                    qe => match tensor_index(gd, qe.dim(), n) {
                        Some(_) => proj(atom(g), qe.clone(), n),
                        None => continue,
                    },
                };
                if q.poles.div <= max_div {
                    exprs.push(e);
                }
            }
        }
        let dressed = exprs
            .into_par_iter()
            .map(|e| {
                let v = self.ev.eval(&e)?;
                let poles = clipped(&v).map_err(|err| EvalError::Structural(err.to_string()))?;
                Ok(poles.map(|poles| Candidate {
                    expr: e,
                    value: v,
                    poles,
                    dressed: true,
                }))
            })
            .collect::<Result<Vec<_>, EvalError>>()?;
        terms.extend(
            dressed
                .into_iter()
                .flatten()
                .filter(|c| c.poles.div <= max_div),
        );
        Ok(CandidateCatalog {
            dim: n,
            max_div,
            terms,
        })
    }
}

/// A relation as coefficient-term pairs.
pub type Relation = Vec<(Rational, CovExpr)>;

fn to_relation(terms: &[&Candidate], v: &[Rational]) -> Relation {
    v.iter()
        .zip(terms)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, t)| (c.clone(), t.expr.clone()))
        .collect()
}

/// Basis of all relations among the candidates admitted by `keep`; each is
/// re-checked to vanish exactly.
pub fn derive_relations(
    cat: &CandidateCatalog,
    keep: impl Fn(&Candidate) -> bool,
) -> Result<Vec<Relation>, EvalError> {
    let terms: Vec<&Candidate> = cat.terms.iter().filter(|c| keep(c)).collect();
    let values: Vec<CurveElement> = terms.iter().map(|c| c.value.clone()).collect();
    let basis = audit(&values)?;
    for v in &basis {
        let sum = v
            .iter()
            .zip(&values)
            .fold(CurveElement::zero(), |acc, (c, t)| {
                acc.add_elem(&t.scale(c))
            });
        if !sum.is_zero() {
            return Err(EvalError::Structural(
                "derived relation does not vanish".into(),
            ));
        }
    }
    Ok(basis.iter().map(|v| to_relation(&terms, v)).collect())
}

/// New relations found at one grade.
#[derive(Clone, Debug)]
pub struct GradeDerivation {
    pub grade: (i64, i64),
    /// Increase in the rank of the scalar relations.
    pub scalar_count: usize,
    /// Highest-weight relations that raised the rank, with their dimension.
    pub relations: Vec<(usize, Relation)>,
}

#[derive(Clone, Debug)]
pub struct DerivationReport {
    pub max_g_degree: u32,
    pub grades: Vec<GradeDerivation>,
}

impl DerivationReport {
    pub fn counts(&self) -> Vec<usize> {
        self.grades.iter().map(|g| g.scalar_count).collect()
    }

    pub fn total(&self) -> usize {
        self.counts().iter().sum()
    }

    pub fn profile(&self) -> Vec<usize> {
        let mut p = vec![0; MAX_DIM];
        for g in &self.grades {
            for (n, _) in &g.relations {
                p[n - 1] += 1;
            }
        }
        p
    }
}

/// Specialized quadratic rows of a candidate's orbit.
fn orbit_rows(
    fev: &FormalEvaluator<'_>,
    e: &CovExpr,
    g: &[Rational; 7],
) -> Result<Vec<Vec<Rational>>, EvalError> {
    let m: std::sync::Arc<IrrModule<_>> = fev.module_of(e)?;
    m.basis
        .iter()
        .map(|v| {
            v.quadratic_row(g)
                .ok_or_else(|| EvalError::Structural(format!("{e} is not quadratic")))
        })
        .collect()
}

/// Derives the relation space grade by grade. At each grade the admitted
/// candidates are solved exactly. A relation counts as new when the orbit of
/// its leading part, the terms free of curve coefficients, raises the rank
/// of the leading parts found so far. Dressed consequences of a relation have
/// no leading part, so they never count, whatever grade they surface at.
pub fn derive_all(reg: &AtomRegistry) -> Result<DerivationReport, EvalError> {
    let d = Deriver::new(reg)?;
    let atoms = FormalAtoms::new(reg);
    let fev = Evaluator::new(&atoms);
    let origin: [Rational; 7] = std::array::from_fn(|_| Rational::zero());
    let max_div = GRADES.iter().map(|x| x.0).max().unwrap_or(0);
    let cats = (1..=MAX_DIM)
        .into_par_iter()
        .map(|n| d.build_candidates(n, max_div))
        .collect::<Result<Vec<_>, _>>()?;
    let rows: BTreeMap<(usize, usize), Vec<Vec<Rational>>> = cats
        .par_iter()
        .flat_map(|cat| {
            cat.terms
                .par_iter()
                .enumerate()
                .map(move |(j, c)| (cat.dim, j, c))
        })
        .filter(|(_, _, c)| !c.dressed)
        .map(|(n, j, c)| Ok(((n, j), orbit_rows(&fev, &c.expr, &origin)?)))
        .collect::<Result<_, EvalError>>()?;

    let mut ech = Echelon::new(NQUADRATIC);
    let mut grades = Vec::new();
    for (k, &grade) in GRADES.iter().enumerate() {
        let solved = cats
            .par_iter()
            .map(|cat| {
                let idx: Vec<usize> = (0..cat.terms.len())
                    .filter(|&j| admitted(&cat.terms[j], k))
                    .collect();
                let values: Vec<CurveElement> =
                    idx.iter().map(|&j| cat.terms[j].value.clone()).collect();
                // Undressed columns come first, so after row reduction the
                // leading vectors are the ones with undressed terms.
                let basis = row_basis(&audit(&values)?, idx.len());
                Ok((cat.dim, idx, basis))
            })
            .collect::<Result<Vec<_>, EvalError>>()?;
        let before = ech.rank();
        let mut found = Vec::new();
        for (n, idx, basis) in &solved {
            let n = *n;
            for v in basis {
                let r0 = ech.rank();
                for comp in 0..n {
                    let mut row = vec![Rational::zero(); NQUADRATIC];
                    for (c, &j) in v.iter().zip(idx) {
                        let Some(r) = rows.get(&(n, j)) else { continue };
                        if c.is_zero() {
                            continue;
                        }
                        for (x, y) in row.iter_mut().zip(&r[comp]) {
                            *x += c * y;
                        }
                    }
                    ech.insert(row);
                }
                if ech.rank() > r0 {
                    let cat = &cats[n - 1];
                    let terms: Vec<&Candidate> = idx.iter().map(|&j| &cat.terms[j]).collect();
                    found.push((n, to_relation(&terms, v)));
                }
            }
        }
        grades.push(GradeDerivation {
            grade,
            scalar_count: ech.rank() - before,
            relations: found,
        });
    }
    Ok(DerivationReport {
        max_g_degree: MAX_G_DEGREE,
        grades,
    })
}

/// Solution space of the candidates restricted to one record's terms, all of
/// which must be candidates at the record's grade.
pub fn intersect_with_record(
    d: &Deriver<'_>,
    rec: &IdentityRecord,
) -> Result<Vec<Vec<Rational>>, EvalError> {
    let k = GRADES
        .iter()
        .position(|g| *g == rec.grade)
        .ok_or_else(|| EvalError::Structural(format!("{} is not at a relation grade", rec.id)))?;
    let max_div = GRADES[k].0;
    let cat = d.build_candidates(rec.dim, max_div)?;
    let mut values = Vec::new();
    for (_, t) in relation_terms(&rec.expr, &rec.rhs) {
        let c = cat
            .terms
            .iter()
            .find(|c| c.expr == t && admitted(c, k))
            .ok_or_else(|| {
                EvalError::Structural(format!("{t} is not a candidate at grade {:?}", rec.grade))
            })?;
        values.push(c.value.clone());
    }
    audit(&values)
}

// ------------------------------------------------------------ table audit

/// A table cell: row, column, and printed components `(dim, div, diag)`.
pub type PrintedCell = (usize, usize, &'static [(usize, i64, i64)]);

/// Printed components of each symmetric product cell.
pub const PRINTED_TABLE: [PrintedCell; 15] = [
    (5, 5, &[(9, 4, 4), (5, 2, 2), (1, 0, 0)]),
    (4, 5, &[(8, 5, 4), (6, 3, 4), (4, 3, 2)]),
    (4, 4, &[(7, 6, 4), (3, 4, 4)]),
    (3, 5, &[(7, 6, 4), (3, 4, 2)]),
    (3, 4, &[(6, 7, 4), (4, 5, 4)]),
    (3, 3, &[(5, 8, 4), (1, 6, 2)]),
    (2, 5, &[(6, 7, 4), (4, 5, 4)]),
    (2, 4, &[(5, 8, 4), (3, 6, 4)]),
    (2, 3, &[(4, 9, 4), (2, 7, 4)]),
    (2, 2, &[(3, 10, 4)]),
    (1, 5, &[(5, 8, 4)]),
    (1, 4, &[(4, 9, 4)]),
    (1, 3, &[(3, 10, 4)]),
    (1, 2, &[(2, 11, 4)]),
    (1, 1, &[(1, 12, 4)]),
];

/// Printed pole classes `(div, diag)` of the coordinate modules and of `I`.
pub const PRINTED_CLASSES: [(&str, i64, i64); 6] = [
    ("P5", 2, 2),
    ("P4", 3, 2),
    ("P3", 4, 2),
    ("P2", 5, 2),
    ("P1", 6, 2),
    ("I", 1, 3),
];

#[derive(Clone, Debug, PartialEq)]
pub struct TableComponent {
    pub dim: usize,
    /// `None` when the component vanishes.
    pub computed: Option<PoleOrders>,
    pub printed: Option<(i64, i64)>,
    /// Top component equals the product of the highest weights.
    pub top_is_product: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableCell {
    pub row: usize,
    pub col: usize,
    pub components: Vec<TableComponent>,
}

impl TableCell {
    pub fn label(&self) -> String {
        format!("P{} x P{}", self.row, self.col)
    }
}

#[derive(Clone, Debug, Default)]
pub struct TableReport {
    pub classes: Vec<(String, PoleOrders, (i64, i64))>,
    pub cells: Vec<TableCell>,
    pub discrepancies: Vec<Discrepancy>,
}

impl TableReport {
    pub fn cell(&self, row: usize, col: usize) -> Option<&TableCell> {
        self.cells.iter().find(|c| c.row == row && c.col == col)
    }
}

fn coordinate(n: usize) -> CovExpr {
    atom(COORDINATE_ATOMS[5 - n])
}

/// Computes every cell of the symmetric product table and compares the
/// pole orders with the printed gradings.
pub fn verify_table(reg: &AtomRegistry) -> Result<TableReport, EvalError> {
    let ev = Evaluator::new(reg);
    let pole_err = |e: PoleError| EvalError::Structural(e.to_string());
    let mut report = TableReport::default();

    for (name, div, diag) in PRINTED_CLASSES {
        let value = if name == "I" {
            invariant_i()
        } else {
            ev.eval(&atom(name))?
        };
        let p = pole_orders(&value).map_err(pole_err)?;
        if (p.div, p.diag) != (div, diag) {
            report.discrepancies.push(Discrepancy {
                subject: name.to_string(),
                message: format!("printed class (div,diag)=({div},{diag}), computed {p}"),
            });
        }
        report.classes.push((name.to_string(), p, (div, diag)));
    }

    for (row, col, printed) in PRINTED_TABLE {
        let (a, b) = (row.max(col), row.min(col));
        let hw_product = ev.eval(&coordinate(a))?.mul_elem(&ev.eval(&coordinate(b))?);
        let mut components = Vec::new();
        for p in 0..b {
            let dim = a + b - 1 - 2 * p;
            let value = ev.eval(&proj(coordinate(a), coordinate(b), dim))?;
            let computed = clipped(&value).map_err(pole_err)?;
            let printed_entry = printed.iter().find(|c| c.0 == dim).map(|c| (c.1, c.2));
            let top_is_product = (p == 0).then(|| value == hw_product);
            let cell_name = format!("P{row} x P{col}");
            match (computed, printed_entry) {
                (None, Some(_)) => report.discrepancies.push(Discrepancy {
                    subject: cell_name,
                    message: format!("printed component {dim} vanishes"),
                }),
                (Some(c), None) => report.discrepancies.push(Discrepancy {
                    subject: cell_name,
                    message: format!("non-zero component {dim} {c} is not printed"),
                }),
                (Some(c), Some(pe)) if (c.div, c.diag) != pe => {
                    report.discrepancies.push(Discrepancy {
                        subject: cell_name,
                        message: format!(
                            "component {dim}: printed ({},{}), computed {c}",
                            pe.0, pe.1
                        ),
                    })
                }
                _ => {}
            }
            components.push(TableComponent {
                dim,
                computed,
                printed: printed_entry,
                top_is_product,
            });
        }
        report.cells.push(TableCell {
            row,
            col,
            components,
        });
    }
    Ok(report)
}

/// Derived relations of one dimension at one grade, filtered by the grade
/// window, for callers that want the raw space.
pub fn derive_at(d: &Deriver<'_>, n: usize, grade: (i64, i64)) -> Result<Vec<Relation>, EvalError> {
    let k = GRADES
        .iter()
        .position(|g| *g == grade)
        .ok_or_else(|| EvalError::Structural(format!("{grade:?} is not a relation grade")))?;
    let cat = d.build_candidates(n, grade.0)?;
    derive_relations(&cat, |c| admitted(c, k))
}

/// Quadratic records of a catalog.
pub fn quadratic_records(records: &[IdentityRecord]) -> Vec<IdentityRecord> {
    records
        .iter()
        .filter(|r| r.kind == RecordKind::Quadratic)
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse_expr, parse_relation};
    use crate::rational::rat;

    fn registry() -> AtomRegistry {
        AtomRegistry::build().unwrap()
    }

    #[test]
    fn grade_window_is_a_down_set() {
        let p = |div, diag| PoleOrders { div, diag };
        assert!(in_grade_window(p(0, 0), 0));
        assert!(!in_grade_window(p(2, 2), 0));
        assert!(in_grade_window(p(2, 2), 1));
        assert!(in_grade_window(p(3, 1), 2));
        assert!(!in_grade_window(p(5, 4), 3));
    }

    #[test]
    fn holes_appear_as_lowest_grade_relations() {
        let reg = registry();
        let d = Deriver::new(&reg).unwrap();
        let rels = derive_at(&d, 2, (0, 0)).unwrap();
        let hole = parse_expr("[P5 @ P4]_2").unwrap();
        assert!(rels.iter().any(|r| r.len() == 1 && r[0].1 == hole));
    }

    #[test]
    fn constant_relation_is_recovered() {
        let reg = registry();
        let d = Deriver::new(&reg).unwrap();
        let rels = derive_at(&d, 1, (0, 0)).unwrap();
        let want = parse_expr("[P5 @ P5]_1").unwrap();
        let r = rels
            .iter()
            .find(|r| r.iter().any(|(_, t)| *t == want))
            .expect("relation with [P5 @ P5]_1");
        assert_eq!(r.len(), 2);
        let c = |t: &CovExpr| r.iter().find(|(_, u)| u == t).unwrap().0.clone();
        assert_eq!(c(&CovExpr::Const(rat(1))) * rat(144), -c(&want));
    }

    #[test]
    fn record_intersection_is_one_dimensional() {
        let reg = registry();
        let d = Deriver::new(&reg).unwrap();
        let (expr, rhs) = parse_relation("[P5 @ P4]_4 - 1/(2^2*3) * P4 = 0").unwrap();
        let rec = IdentityRecord {
            id: "t".into(),
            kind: RecordKind::Quadratic,
            grade: (3, 2),
            dim: 4,
            expr,
            rhs,
        };
        let ns = intersect_with_record(&d, &rec).unwrap();
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0][1], crate::rational::ratio(-1, 12));
    }

    #[test]
    fn self_product_cell_matches_print() {
        let t = verify_table(&registry()).unwrap();
        let cell = t.cell(5, 5).unwrap();
        let dims: Vec<usize> = cell.components.iter().map(|c| c.dim).collect();
        assert_eq!(dims, vec![9, 7, 5, 3, 1]);
        let hole = cell.components.iter().find(|c| c.dim == 7).unwrap();
        assert_eq!(hole.computed, None);
        for c in &cell.components {
            if let Some(p) = c.printed {
                assert_eq!(c.computed.map(|q| (q.div, q.diag)), Some(p));
            }
        }
    }
}
