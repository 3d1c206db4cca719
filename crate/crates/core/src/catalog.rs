//! Named irreducible modules: the five coordinate modules on the product of
//! the curve with itself and the covariants of the curve coefficients.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::curve::{curve_deriv, invariant_i, CurveElement, Point};
use crate::error::Sl2Error;
use crate::poly::{Monomial, Poly, Variable};
use crate::rational::{rat, ratio, Rational};
use crate::sl2::{
    derive_poly, e_kernel_weight_space, expand_orbit, expand_orbit_from_lowest, hw_tensor,
    Generator, IrrModule,
};

/// Coordinate atoms in the order used for the sixteen-symbol basis.
pub const COORDINATE_ATOMS: [&str; 5] = ["P5", "P4", "P3", "P2", "P1"];

/// Covariant atoms built from the curve coefficients.
pub const G_ATOMS: [&str; 13] = [
    "G", "G2_13", "G2_9", "G2_5", "G2_1", "G3_19", "G3_15", "G3_13", "G3_11", "G3_9", "G3_7A",
    "G3_7B", "G3_3",
];

/// Dimension of a named atom, if the name is known.
pub fn atom_dim(name: &str) -> Option<usize> {
    match name {
        "P5" => Some(5),
        "P4" => Some(4),
        "P3" => Some(3),
        "P2" => Some(2),
        "P1" => Some(1),
        "G" => Some(7),
        _ => {
            let rest = name
                .strip_prefix("G2_")
                .or_else(|| name.strip_prefix("G3_"))?;
            let digits = rest.trim_end_matches(['A', 'B']);
            if rest != digits && !(name.starts_with("G3_") && digits == "7") {
                return None;
            }
            let d: usize = digits.parse().ok()?;
            let known = if name.starts_with("G2_") {
                matches!(d, 13 | 9 | 5 | 1)
            } else {
                matches!(rest, "19" | "15" | "13" | "11" | "9" | "7A" | "7B" | "3")
            };
            known.then_some(d)
        }
    }
}

/// Degree in the curve coefficients carried by an atom.
pub fn atom_g_degree(name: &str) -> u32 {
    if name == "G" {
        1
    } else if name.starts_with("G2_") {
        2
    } else if name.starts_with("G3_") {
        3
    } else {
        0
    }
}

/// A recorded disagreement between a printed formula and the computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub subject: String,
    pub message: String,
}

/// All named modules plus the discrepancy log produced while building them.
#[derive(Clone, Debug)]
pub struct AtomRegistry {
    modules: BTreeMap<String, IrrModule<CurveElement>>,
    pub discrepancies: Vec<Discrepancy>,
}

fn g(k: usize) -> Poly {
    Poly::var(Variable::g(k))
}

fn gm(ks: &[usize]) -> Poly {
    let mut m = Monomial::one();
    for &k in ks {
        m = m.mul(&Monomial::var(Variable::g(k)));
    }
    Poly::monomial(m, rat(1))
}

fn combo(prefactor: Rational, terms: &[(i64, &[usize])]) -> Poly {
    let p = Poly::from_terms(terms.iter().map(|(c, ks)| {
        let t = gm(ks);
        (t.terms()[0].0, rat(*c))
    }));
    p.scale(&prefactor)
}

/// The quadratic covariant displays, keyed by dimension.
pub fn printed_quadratic(dim: usize) -> Option<Poly> {
    Some(match dim {
        13 => gm(&[6, 6]),
        9 => combo(rat(1), &[(1, &[6, 4]), (-1, &[5, 5])]),
        5 => combo(ratio(1, 12), &[(1, &[6, 2]), (-4, &[5, 3]), (3, &[4, 4])]),
        1 => combo(
            ratio(1, 360),
            &[(1, &[6, 0]), (-6, &[5, 1]), (15, &[4, 2]), (-10, &[3, 3])],
        ),
        _ => return None,
    })
}

/// The cubic covariant displays as printed, keyed by atom name. `G3_11` is
/// the display carrying the label eleven.
pub fn printed_cubic(name: &str) -> Option<Poly> {
    Some(match name {
        "G3_19" => gm(&[6, 6, 6]),
        "G3_15" => combo(ratio(8, 11), &[(1, &[6, 6, 4]), (-1, &[6, 5, 5])]),
        "G3_11" => combo(
            ratio(3, 22),
            &[(1, &[6, 6, 3]), (3, &[6, 5, 4]), (-2, &[5, 5, 5])],
        ),
        "G3_9" => combo(
            ratio(13, 16 * 9 * 11),
            &[
                (1, &[5, 0, 0]),
                (-5, &[4, 1, 0]),
                (2, &[3, 2, 0]),
                (8, &[1, 1, 3]),
                (-6, &[1, 2, 2]),
            ],
        ),
        "G3_7A" => combo(
            ratio(1, 32 * 27 * 5 * 7 * 11),
            &[
                (-2778, &[5, 1, 0]),
                (3795, &[4, 2, 0]),
                (3150, &[1, 1, 4]),
                (-1480, &[3, 3, 0]),
                (-6300, &[1, 2, 3]),
                (3150, &[2, 2, 2]),
                (463, &[0, 0, 6]),
            ],
        ),
        "G3_7B" => combo(
            ratio(1, 16 * 3 * 5 * 7),
            &[
                (-6, &[5, 1, 0]),
                (165, &[4, 2, 0]),
                (-150, &[1, 1, 4]),
                (-160, &[3, 3, 0]),
                (300, &[1, 2, 3]),
                (-150, &[2, 2, 2]),
                (1, &[0, 0, 6]),
            ],
        ),
        "G3_3" => combo(
            ratio(1, 8 * 9 * 7),
            &[
                (-3, &[5, 3, 0]),
                (3, &[5, 1, 2]),
                (2, &[4, 4, 0]),
                (-1, &[4, 3, 1]),
                (-3, &[4, 2, 2]),
                (2, &[2, 3, 3]),
                (1, &[2, 0, 6]),
                (-1, &[1, 1, 6]),
            ],
        ),
        _ => return None,
    })
}

/// How a printed covariant sits in its module.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Orientation {
    Highest,
    Lowest,
    Neither,
}

pub fn orientation(p: &Poly) -> Orientation {
    if derive_poly(Generator::E, p).is_zero() {
        Orientation::Highest
    } else if derive_poly(Generator::F, p).is_zero() {
        Orientation::Lowest
    } else {
        Orientation::Neither
    }
}

/// Highest weight of a homogeneous polynomial in the curve coefficients.
fn g_weight(p: &Poly) -> Option<i64> {
    let w = p.terms().first()?.0.g_weight();
    p.terms()
        .iter()
        .all(|(m, _)| m.g_weight() == w)
        .then_some(w)
}

/// Rescales `p` so its graded-lex leading coefficient equals `target`.
fn with_leading(p: &Poly, target: &Rational) -> Poly {
    let (_, c) = p.leading_term().expect("non-zero");
    p.scale(&(target / c))
}

impl AtomRegistry {
    /// Builds every atom and checks every module law.
    pub fn build() -> Result<AtomRegistry, Sl2Error> {
        let mut reg = AtomRegistry {
            modules: BTreeMap::new(),
            discrepancies: Vec::new(),
        };
        for m in build_coordinates()? {
            reg.insert(m)?;
        }
        reg.discrepancies.push(Discrepancy {
            subject: "P3".into(),
            message: "printed list (2I/D, (x1+x2)I/D, 2x1x2I/D) is not a module basis; \
                      the orbit of I/D gives (I/D, (x1+x2)I/D, x1x2I/D), matching the middle entry \
                      and the relations"
                .into(),
        });
        let (covariants, notes) = build_g_covariants()?;
        for m in covariants {
            reg.insert(m)?;
        }
        reg.discrepancies.extend(notes);
        Ok(reg)
    }

    fn insert(&mut self, m: IrrModule<CurveElement>) -> Result<(), Sl2Error> {
        m.check_laws()?;
        self.modules.insert(m.label.clone(), m);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&IrrModule<CurveElement>> {
        self.modules.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.modules.keys().map(String::as_str)
    }

    pub fn modules(&self) -> impl Iterator<Item = &IrrModule<CurveElement>> {
        self.modules.values()
    }

    /// The highest-weight polynomial of a covariant atom.
    pub fn covariant(&self, name: &str) -> Option<&Poly> {
        self.get(name)?.highest().as_poly()
    }
}

/// The five coordinate modules `P5, P4, P3, P2, P1`.
pub fn build_coordinates() -> Result<Vec<IrrModule<CurveElement>>, Sl2Error> {
    let inv = invariant_i();
    let p5 = CurveElement::delta_inverse(2);
    let p4 = CurveElement::new(
        Poly::zero(),
        Poly::one(),
        Poly::from_int(-1),
        Poly::zero(),
        3,
    );
    // Highest weight I/D: the printed list doubles its outer entries, but the
    // relations hold only with this scale, which the middle entry also fixes.
    let p3 = inv.mul_elem(&CurveElement::delta_inverse(1));
    let p2 = curve_deriv(Point::First, &inv)
        .add_elem(&curve_deriv(Point::Second, &inv))
        .mul_elem(&CurveElement::delta_inverse(1));
    let p1 = inv.mul_elem(&inv);
    Ok(vec![
        expand_orbit(&p5, 5, "P5")?,
        expand_orbit(&p4, 4, "P4")?,
        expand_orbit(&p3, 3, "P3")?,
        expand_orbit(&p2, 2, "P2")?,
        expand_orbit(&p1, 1, "P1")?,
    ])
}

/// The coefficient module `G` and the quadratic and cubic covariants.
pub fn build_g_covariants() -> Result<(Vec<IrrModule<CurveElement>>, Vec<Discrepancy>), Sl2Error> {
    let mut notes = Vec::new();
    let gmod = expand_orbit(&CurveElement::poly(g(6)), 7, "G")?;
    let mut out = vec![gmod.clone()];

    for (p, dim) in [(0usize, 13usize), (2, 9), (4, 5), (6, 1)] {
        let hw = hw_tensor(&gmod, &gmod, p)?;
        let printed = printed_quadratic(dim).expect("printed quadratic");
        if hw.as_poly() != Some(&printed) {
            notes.push(Discrepancy {
                subject: format!("G2_{dim}"),
                message: format!("tensor construction gives {hw}, printed {printed}"),
            });
        }
        out.push(expand_orbit(&hw, dim, &format!("G2_{dim}"))?);
    }

    for name in ["G3_19", "G3_15", "G3_9", "G3_7A", "G3_7B", "G3_3"] {
        let dim = atom_dim(name).unwrap();
        let printed = printed_cubic(name).unwrap();
        let module = match orientation(&printed) {
            Orientation::Highest => expand_orbit(&CurveElement::poly(printed.clone()), dim, name)?,
            Orientation::Lowest => {
                expand_orbit_from_lowest(&CurveElement::poly(printed.clone()), dim, name)?
            }
            Orientation::Neither => {
                return Err(Sl2Error::NotExtremal {
                    label: name.to_string(),
                })
            }
        };
        out.push(module);
    }

    // The display labelled eleven is not an extremal vector; the genuine
    // eleven-dimensional covariant comes from the e-kernel at weight 10, and
    // the thirteen-dimensional one from weight 12.
    let printed11 = printed_cubic("G3_11").unwrap();
    let o = orientation(&printed11);
    notes.push(Discrepancy {
        subject: "G3_11".into(),
        message: format!(
            "printed display has h-weight {} and orientation {:?}; the dimension-11 \
             highest-weight vector is taken from the e-kernel at weight 10",
            g_weight(&printed11).unwrap_or(0),
            o
        ),
    });
    let k11 = e_kernel_weight_space(3, 10)?;
    let k13 = e_kernel_weight_space(3, 12)?;
    debug_assert_eq!((k11.len(), k13.len()), (1, 1));
    let g11 = with_leading(&k11[0], &rat(1));
    let lead_printed = printed11.leading_term().unwrap().1.clone();
    let g13 = with_leading(&k13[0], &lead_printed);
    if g13 != printed11 {
        notes.push(Discrepancy {
            subject: "G3_13".into(),
            message: format!(
                "weight-12 e-kernel vector {g13} differs from the display labelled eleven \
                 {printed11} by internal signs"
            ),
        });
    }
    out.push(expand_orbit(&CurveElement::poly(g13), 13, "G3_13")?);
    out.push(expand_orbit(&CurveElement::poly(g11), 11, "G3_11")?);
    Ok((out, notes))
}
