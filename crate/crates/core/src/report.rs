//! Verification reports and their JSON form.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::catalog::Discrepancy;
use crate::curve::CurveElement;
use crate::dsl::{format_rational, RecordKind, GRADES};
use crate::rational::Rational;

pub const REPORT_SCHEMA: &str = "equijac-report/1";

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    ExactZero,
    ConstantMatch,
    /// Printed constants fail; the coefficients are the unique relation on
    /// the same terms, scaled to agree with the first printed coefficient.
    AuditRepaired(Vec<Rational>),
    /// Neither verbatim nor uniquely repairable; carries a residual digest.
    Failed(String),
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::ExactZero => "ExactZero",
            Status::ConstantMatch => "ConstantMatch",
            Status::AuditRepaired(_) => "AuditRepaired",
            Status::Failed(_) => "Failed",
        }
    }

    pub fn is_verbatim(&self) -> bool {
        matches!(self, Status::ExactZero | Status::ConstantMatch)
    }

    /// True when some relation on the record's terms holds.
    pub fn holds(&self) -> bool {
        !matches!(self, Status::Failed(_))
    }

    pub fn passes(&self, allow_repairs: bool) -> bool {
        self.is_verbatim() || (allow_repairs && self.holds())
    }
}

/// The outcome for one record.
#[derive(Clone, Debug)]
pub struct RecordOutcome {
    pub id: String,
    pub kind: RecordKind,
    pub grade: (i64, i64),
    /// Pole orders of the leading term, clipped at zero.
    pub computed_grade: (i64, i64),
    pub dim: usize,
    pub status: Status,
    /// Scalar relations obtained from the f-orbit of the relation.
    pub orbit_count: usize,
    /// Dimension of the audit nullspace, when the audit ran.
    pub nullspace_dim: Option<usize>,
    /// The evaluated left side minus the right side; zero for verbatim statuses.
    pub value: CurveElement,
}

#[derive(Clone, Debug, Default)]
pub struct VerificationReport {
    pub records: Vec<RecordOutcome>,
    pub discrepancies: Vec<Discrepancy>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub records: usize,
    pub exact_zero: usize,
    pub constant_match: usize,
    pub audit_repaired: usize,
    pub failed: usize,
    pub scalar_relations: usize,
}

impl VerificationReport {
    pub fn get(&self, id: &str) -> Option<&RecordOutcome> {
        self.records.iter().find(|r| r.id == id)
    }

    pub fn totals(&self) -> Totals {
        let mut t = Totals {
            records: self.records.len(),
            ..Totals::default()
        };
        for r in &self.records {
            match r.status {
                Status::ExactZero => t.exact_zero += 1,
                Status::ConstantMatch => t.constant_match += 1,
                Status::AuditRepaired(_) => t.audit_repaired += 1,
                Status::Failed(_) => t.failed += 1,
            }
            if r.kind == RecordKind::Quadratic {
                t.scalar_relations += r.orbit_count;
            }
        }
        t
    }

    /// Scalar relation counts of the quadratic records, per filed grade.
    pub fn grade_counts(&self) -> Vec<((i64, i64), usize)> {
        GRADES
            .iter()
            .map(|g| {
                let n = self
                    .records
                    .iter()
                    .filter(|r| r.kind == RecordKind::Quadratic && r.grade == *g)
                    .map(|r| r.orbit_count)
                    .sum();
                (*g, n)
            })
            .collect()
    }

    pub fn all_pass(&self, allow_repairs: bool) -> bool {
        self.records.iter().all(|r| r.status.passes(allow_repairs))
    }

    pub fn to_json(&self) -> ReportJson {
        ReportJson {
            schema: REPORT_SCHEMA.to_string(),
            records: self.records.iter().map(RecordJson::from).collect(),
            totals: self.totals(),
            discrepancies: self.discrepancies.clone(),
        }
    }
}

/// Serialized report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub schema: String,
    pub records: Vec<RecordJson>,
    pub totals: Totals,
    pub discrepancies: Vec<Discrepancy>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordJson {
    pub id: String,
    pub grade: (i64, i64),
    pub dim: usize,
    pub status: String,
    pub orbit_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit_coefficients: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_digest: Option<String>,
}

impl From<&RecordOutcome> for RecordJson {
    fn from(r: &RecordOutcome) -> Self {
        let (audit_coefficients, residual_digest) = match &r.status {
            Status::AuditRepaired(cs) => (Some(cs.iter().map(|c| c.to_string()).collect()), None),
            Status::Failed(d) => (None, Some(d.clone())),
            _ => (None, None),
        };
        RecordJson {
            id: r.id.clone(),
            grade: r.grade,
            dim: r.dim,
            status: r.status.name().to_string(),
            orbit_count: r.orbit_count,
            audit_coefficients,
            residual_digest,
        }
    }
}

fn signed(c: &Rational) -> String {
    if c < &Rational::default() {
        format!("-{}", format_rational(&-c))
    } else {
        format_rational(c)
    }
}

impl fmt::Display for RecordOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<4} grade=({},{}) dim={} {} orbit={}",
            self.id,
            self.grade.0,
            self.grade.1,
            self.dim,
            self.status.name(),
            self.orbit_count
        )?;
        match &self.status {
            Status::AuditRepaired(cs) => {
                let cs: Vec<String> = cs.iter().map(signed).collect();
                write!(f, " coefficients=[{}]", cs.join(", "))
            }
            Status::Failed(d) => write!(f, " residual={d}"),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            writeln!(f, "{r}")?;
        }
        let t = self.totals();
        writeln!(
            f,
            "records={} exact_zero={} constant_match={} audit_repaired={} failed={} scalar_relations={}",
            t.records, t.exact_zero, t.constant_match, t.audit_repaired, t.failed, t.scalar_relations
        )?;
        for d in &self.discrepancies {
            writeln!(f, "discrepancy {}: {}", d.subject, d.message)?;
        }
        Ok(())
    }
}
