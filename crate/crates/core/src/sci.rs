//! The N-binomial set-theoretic complete intersection certificate: its
//! construction, symbolic verification in characteristic p through Frobenius
//! powers, and finite-field point surveys that corroborate it in
//! characteristic p and refute it elsewhere.

use std::sync::Arc;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{kernel_basis, IntMatrix};
use crate::poly::{buchberger, Monomial, MonomialOrder, PolyError, PrimeField, Ring};
use crate::toric::{quadratic_generators, Binomial, GeneratorStyle};
use crate::veronese::{Veronese, VeroneseParams};

pub const DEFAULT_ENUMERATION_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SciError {
    #[error("enumeration needs {needed} points, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("k_max = {k_max} exceeded for generator {generator}")]
    KMaxExceeded { generator: String, k_max: u32 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

pub fn default_k_max(h: u32) -> u32 {
    2 * h + 2
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusWitness {
    pub generator: Binomial,
    pub k: u32,
}

/// The N binomials `x_t^q - prod_j x_{j..j}^{a_j(t)}` over non-pure tuples t,
/// plus (after verification) one Frobenius witness per quadratic generator.
#[derive(Clone, Debug)]
pub struct SciCertificate {
    pub params: VeroneseParams,
    pub binomials: Vec<Binomial>,
    pub witnesses: Vec<FrobeniusWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub schema_version: u32,
    pub params: VeroneseParams,
    pub binomials: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub generator: String,
    pub k: u32,
}

impl SciCertificate {
    pub fn len(&self) -> usize {
        self.binomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.binomials.is_empty()
    }

    pub fn to_json(&self, v: &Veronese) -> CertificateJson {
        let names = v.variable_names();
        CertificateJson {
            schema_version: crate::SCHEMA_VERSION,
            params: self.params,
            binomials: self.binomials.iter().map(|b| b.format(&names)).collect(),
        }
    }

    pub fn witnesses_json(&self, v: &Veronese) -> Vec<WitnessJson> {
        let names = v.variable_names();
        self.witnesses
            .iter()
            .map(|w| WitnessJson {
                generator: w.generator.format(&names),
                k: w.k,
            })
            .collect()
    }
}

pub fn build_certificate(v: &Veronese) -> SciCertificate {
    let q = v.q() as u32;
    let nv = v.len();
    let binomials = (0..nv)
        .filter(|&t| !v.is_pure(t))
        .map(|t| {
            let plus = Monomial::var(nv, t, q);
            let mut minus = vec![0u32; nv];
            for (j, &a) in v.exponents()[t].0.iter().enumerate() {
                minus[v.pure_index(j + 1)] += a;
            }
            Binomial::new(plus, Monomial::from_exponents(minus))
        })
        .collect();
    SciCertificate {
        params: *v.params(),
        binomials,
        witnesses: Vec::new(),
    }
}

/// Certifies `I(V) ⊆ rad(certificate)` over F_p: for every quadratic
/// generator g, finds the least `k ≤ k_max` with `g^(p^k)` in the
/// certificate ideal.
pub fn verify_char_p(
    v: &Veronese,
    cert: &SciCertificate,
    k_max: u32,
) -> Result<SciCertificate, SciError> {
    let p = cert.params.p();
    let ring = v.ring(PrimeField::new(p)?);
    let names = v.variable_names();
    let gens = quadratic_generators(v, GeneratorStyle::Star);
    let mut out = cert.clone();
    out.witnesses.clear();
    if gens.is_empty() {
        return Ok(out);
    }
    let polys: Vec<_> = cert.binomials.iter().map(|b| b.to_poly(&ring)).collect();
    let gb = buchberger(&polys, MonomialOrder::DegRevLex)?;
    for g in gens {
        let gp = g.to_poly(gb.ring());
        let k = (0..=k_max)
            .find(|&k| {
                gp.frobenius_power(p, k)
                    .and_then(|f| gb.reduce(&f))
                    .map(|r| r.is_zero())
                    .unwrap_or(false)
            })
            .ok_or_else(|| SciError::KMaxExceeded {
                generator: g.format(&names),
                k_max,
            })?;
        out.witnesses.push(FrobeniusWitness { generator: g, k });
    }
    Ok(out)
}

/// Decides whether a point of `F_r^|T|` lies on the cone V over the
/// algebraic closure of `F_r`.
///
/// A point with nonzero parameters exactly on `J ⊆ {1..n}` has support equal
/// to the tuples using only indices from J, and on that support its
/// coordinates are annihilated by every integer relation among the exponent
/// vectors (the image of a torus under a monomial map is the subgroup cut out
/// by the characters vanishing on the exponent lattice).
pub struct RationalPointOracle {
    n: usize,
    pure: Vec<usize>,
    faces: Vec<Face>,
    nvars: usize,
}

struct Face {
    member: Vec<bool>,
    positions: Vec<usize>,
    relations: Vec<Vec<i64>>,
}

impl RationalPointOracle {
    pub fn new(v: &Veronese) -> Self {
        let n = v.n();
        assert!(n < 20, "face enumeration over 2^n subsets");
        let faces = (0u32..1 << n)
            .map(|mask| {
                let member: Vec<bool> = v
                    .exponents()
                    .iter()
                    .map(|a| {
                        a.0.iter()
                            .enumerate()
                            .all(|(j, &x)| x == 0 || mask >> j & 1 == 1)
                    })
                    .collect();
                let positions: Vec<usize> = (0..v.len()).filter(|&t| member[t]).collect();
                let relations = if positions.is_empty() {
                    Vec::new()
                } else {
                    let cols: Vec<Vec<i64>> = positions
                        .iter()
                        .map(|&t| v.exponents()[t].0.iter().map(|&x| x as i64).collect())
                        .collect();
                    let k = kernel_basis(&IntMatrix::from_columns(n, &cols));
                    (0..k.cols())
                        .map(|c| {
                            k.column(c)
                                .iter()
                                .map(|x| x.to_i64().expect("small kernel entry"))
                                .collect()
                        })
                        .collect()
                };
                Face {
                    member,
                    positions,
                    relations,
                }
            })
            .collect();
        RationalPointOracle {
            n,
            pure: (1..=n).map(|j| v.pure_index(j)).collect(),
            faces,
            nvars: v.len(),
        }
    }

    pub fn contains(&self, x: &[u64], field: PrimeField) -> bool {
        debug_assert_eq!(x.len(), self.nvars);
        let mask = (0..self.n).fold(
            0usize,
            |m, j| if x[self.pure[j]] != 0 { m | 1 << j } else { m },
        );
        let face = &self.faces[mask];
        if x.iter().zip(&face.member).any(|(&xi, &m)| (xi != 0) != m) {
            return false;
        }
        let r = field.modulus();
        face.relations.iter().all(|rel| {
            let (mut num, mut den) = (1u64, 1u64);
            for (&t, &c) in face.positions.iter().zip(rel) {
                match c.signum() {
                    1 => num = field.mul(num, field.pow(x[t], c as u64)),
                    -1 => den = field.mul(den, field.pow(x[t], c.unsigned_abs())),
                    _ => {}
                }
            }
            num % r == den % r
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurveyMode {
    FullEnumeration,
    ImageOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSetReport {
    pub schema_version: u32,
    pub r: u64,
    /// F_r-rational points of V.
    #[serde(rename = "count_V")]
    pub count_v: Option<u64>,
    /// Points of the zero set of the surveyed equations.
    pub count_cert: Option<u64>,
    /// Size of the image of F_r^n under the parametrization.
    pub count_image: u64,
    pub image_in_zero_set: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<u64>>,
}

fn budget_check(r: u64, dim: usize, budget: u64) -> Result<u64, SciError> {
    let needed = (r as u128).checked_pow(dim as u32);
    match needed {
        Some(x) if x <= budget as u128 => Ok(x as u64),
        _ => Err(SciError::BudgetExceeded {
            needed: format!("{r}^{dim}"),
            budget,
        }),
    }
}

fn digits(mut idx: u64, r: u64, out: &mut [u64]) {
    for d in out.iter_mut().rev() {
        *d = idx % r;
        idx /= r;
    }
}

fn increment(x: &mut [u64], r: u64) {
    for d in x.iter_mut().rev() {
        *d += 1;
        if *d < r {
            return;
        }
        *d = 0;
    }
}

/// Image of F_r^n under the parametrization, as a sorted list of points.
fn image_points(v: &Veronese, field: PrimeField, budget: u64) -> Result<Vec<Vec<u64>>, SciError> {
    let r = field.modulus();
    let total = budget_check(r, v.n(), budget)?;
    let mut u = vec![0u64; v.n()];
    let mut pts = Vec::with_capacity(total as usize);
    for _ in 0..total {
        pts.push(v.parametrize(&u, field));
        increment(&mut u, r);
    }
    pts.sort_unstable();
    pts.dedup();
    Ok(pts)
}

const CHUNK: u64 = 1 << 14;

/// Surveys the zero set of `equations` against V over F_r.
///
/// Full enumeration walks F_r^|T| in lexicographic order (first coordinate
/// most significant); the reported witness is the lex-first zero of the
/// equations off V, independent of how the range is split across threads.
pub fn survey(
    v: &Veronese,
    equations: &[Binomial],
    r: u64,
    mode: SurveyMode,
    budget: u64,
) -> Result<PointSetReport, SciError> {
    let field = PrimeField::new(r)?;
    let image = image_points(v, field, budget)?;
    let image_in_zero_set = image
        .iter()
        .all(|x| equations.iter().all(|b| b.evaluate(x, field) == 0));
    if mode == SurveyMode::ImageOnly {
        return Ok(PointSetReport {
            schema_version: crate::SCHEMA_VERSION,
            r,
            count_v: None,
            count_cert: None,
            count_image: image.len() as u64,
            image_in_zero_set,
            witness: None,
        });
    }

    let dim = v.len();
    let total = budget_check(r, dim, budget)?;
    let oracle = RationalPointOracle::new(v);
    let chunks = total.div_ceil(CHUNK);
    let (count_cert, count_v, witness) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(total);
            let mut x = vec![0u64; dim];
            digits(start, r, &mut x);
            let (mut zc, mut vc, mut wit) = (0u64, 0u64, None);
            for idx in start..end {
                let on_v = oracle.contains(&x, field);
                let zero = equations.iter().all(|b| b.evaluate(&x, field) == 0);
                vc += on_v as u64;
                zc += zero as u64;
                if zero && !on_v && wit.is_none() {
                    wit = Some(idx);
                }
                increment(&mut x, r);
            }
            (zc, vc, wit)
        })
        .reduce(
            || (0, 0, None),
            |a, b| {
                let w = match (a.2, b.2) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                };
                (a.0 + b.0, a.1 + b.1, w)
            },
        );
    let witness = witness.map(|idx| {
        let mut x = vec![0u64; dim];
        digits(idx, r, &mut x);
        x
    });
    Ok(PointSetReport {
        schema_version: crate::SCHEMA_VERSION,
        r,
        count_v: Some(count_v),
        count_cert: Some(count_cert),
        count_image: image.len() as u64,
        image_in_zero_set,
        witness,
    })
}

pub fn point_survey(
    v: &Veronese,
    cert: &SciCertificate,
    r: u64,
    mode: SurveyMode,
    budget: u64,
) -> Result<PointSetReport, SciError> {
    survey(v, &cert.binomials, r, mode, budget)
}

/// Same survey with the full quadratic generating set in place of the
/// certificate.
pub fn full_ideal_point_survey(
    v: &Veronese,
    r: u64,
    budget: u64,
) -> Result<PointSetReport, SciError> {
    let gens = quadratic_generators(v, GeneratorStyle::Star);
    survey(v, &gens, r, SurveyMode::FullEnumeration, budget)
}

/// Convenience: a ring over F_r for the Veronese variables.
pub fn ring_over(v: &Veronese, r: u64) -> Result<Arc<Ring>, SciError> {
    Ok(v.ring(PrimeField::new(r)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::binomial_in_ideal;

    fn ver(n: usize, p: u64, h: u32) -> Veronese {
        Veronese::new(VeroneseParams::new(n, p, h).unwrap())
    }

    fn texts(v: &Veronese, c: &SciCertificate) -> Vec<String> {
        c.to_json(v).binomials
    }

    #[test]
    fn n3_q2_certificate() {
        let v = ver(3, 2, 1);
        let c = build_certificate(&v);
        assert_eq!(
            texts(&v, &c),
            ["x12^2 - x11*x22", "x13^2 - x11*x33", "x23^2 - x22*x33"]
        );
        assert_eq!(c.len(), v.codimension());
    }

    #[test]
    fn n2_q2_certificate() {
        let v = ver(2, 2, 1);
        let c = build_certificate(&v);
        assert_eq!(texts(&v, &c), ["x12^2 - x11*x22"]);
    }

    #[test]
    fn n3_q3_certificate() {
        let v = ver(3, 3, 1);
        let c = build_certificate(&v);
        assert_eq!(c.len(), 7);
        assert!(texts(&v, &c).contains(&"x112^3 - x111^2*x222".to_string()));
        for b in &c.binomials {
            assert!(binomial_in_ideal(&v, &b.plus, &b.minus).unwrap());
        }
    }

    #[test]
    fn char_two_witnesses() {
        let v = ver(3, 2, 1);
        let c = verify_char_p(&v, &build_certificate(&v), default_k_max(1)).unwrap();
        let w = c.witnesses_json(&v);
        assert_eq!(w.len(), 6);
        let k_of = |g: &str| w.iter().find(|x| x.generator == g).unwrap().k;
        assert_eq!(k_of("x12*x33 - x13*x23"), 1);
        assert_eq!(k_of("x11*x22 - x12^2"), 0);
    }

    #[test]
    fn k_max_exceeded_is_reported() {
        let v = ver(3, 2, 1);
        let err = verify_char_p(&v, &build_certificate(&v), 0).unwrap_err();
        assert!(matches!(err, SciError::KMaxExceeded { k_max: 0, .. }));
    }

    #[test]
    fn f2_counts_agree() {
        let v = ver(3, 2, 1);
        let rep = point_survey(
            &v,
            &build_certificate(&v),
            2,
            SurveyMode::FullEnumeration,
            1000,
        )
        .unwrap();
        assert_eq!(rep.count_cert, Some(8));
        assert_eq!(rep.count_v, Some(8));
        assert_eq!(rep.count_image, 8);
        assert_eq!(rep.witness, None);
    }

    #[test]
    fn f3_witness() {
        let v = ver(3, 2, 1);
        let rep = point_survey(
            &v,
            &build_certificate(&v),
            3,
            SurveyMode::FullEnumeration,
            1000,
        )
        .unwrap();
        assert_eq!(rep.witness, Some(vec![1, 1, 1, 1, 2, 1]));
        assert!(rep.image_in_zero_set);
    }

    #[test]
    fn budget_refusal() {
        let v = ver(3, 2, 1);
        let err = point_survey(
            &v,
            &build_certificate(&v),
            7,
            SurveyMode::FullEnumeration,
            1000,
        )
        .unwrap_err();
        assert!(matches!(err, SciError::BudgetExceeded { .. }));
    }

    #[test]
    fn one_parameter_certificate_is_empty() {
        let v = ver(1, 2, 1);
        let c = build_certificate(&v);
        assert!(c.is_empty());
        let rep = point_survey(&v, &c, 3, SurveyMode::FullEnumeration, 1000).unwrap();
        assert_eq!(rep.count_cert, rep.count_v);
        assert_eq!(rep.witness, None);
        assert!(verify_char_p(&v, &c, 4).unwrap().witnesses.is_empty());
    }

    #[test]
    fn image_only_mode() {
        let v = ver(3, 2, 1);
        let rep = point_survey(&v, &build_certificate(&v), 5, SurveyMode::ImageOnly, 1000).unwrap();
        assert_eq!(rep.count_cert, None);
        assert!(rep.image_in_zero_set);
    }

    #[test]
    fn oracle_on_the_cone_point_with_missing_root() {
        // (0,0,0,0,0,2) over F_3 is on V although 2 is not a square in F_3
        let v = ver(3, 2, 1);
        let f3 = PrimeField::new(3).unwrap();
        let oracle = RationalPointOracle::new(&v);
        assert!(oracle.contains(&[0, 0, 0, 0, 0, 2], f3));
        assert!(!oracle.contains(&[1, 1, 1, 1, 2, 1], f3));
        assert!(oracle.contains(&[0; 6], f3));
        assert!(!oracle.contains(&[0, 1, 0, 0, 0, 0], f3));
    }

    #[test]
    fn report_json_shape() {
        let v = ver(3, 2, 1);
        let rep = point_survey(
            &v,
            &build_certificate(&v),
            3,
            SurveyMode::FullEnumeration,
            1000,
        )
        .unwrap();
        let j = serde_json::to_value(&rep).unwrap();
        assert_eq!(j["r"], 3);
        assert!(j.get("count_V").is_some());
        assert_eq!(j["witness"], serde_json::json!([1, 1, 1, 1, 2, 1]));
        let back: PointSetReport = serde_json::from_value(j).unwrap();
        assert_eq!(back, rep);
    }
}
