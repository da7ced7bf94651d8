//! Domain specifications `D_{alpha, r-, r+}`, their canonical types, and
//! the monomial coordinate changes witnessing the reductions.
//!
//! A spec is the set `{ z : r- < |z1|^a1 |z2|^a2 < r+ }` with radii carried
//! as logarithms (the radius itself is never materialized). Classification
//! rewrites the exponent vector and composes coordinate swaps, inversions,
//! scalings and a Bezout map until one of the nine canonical shapes is
//! reached.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::field::{FieldError, QuadExt};
use crate::lattice::bezout;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DomainError {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("exponent matrix is not unimodular (det = {0})")]
    NotUnimodular(BigInt),
    #[error("zero base with negative exponent")]
    ZeroBase,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Lower radius datum of a spec: `r- < 0`, `r- = 0`, or `r- > 0` with its
/// logarithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lower {
    Negative,
    Zero,
    Positive(QuadExt),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainSpec {
    pub alpha: (QuadExt, QuadExt),
    pub lower: Lower,
    pub log_upper: QuadExt,
}

impl DomainSpec {
    pub fn new(
        alpha: (QuadExt, QuadExt),
        lower: Lower,
        log_upper: QuadExt,
    ) -> Result<Self, DomainError> {
        if alpha.0.is_zero() && alpha.1.is_zero() {
            return Err(DomainError::InvalidSpec("alpha must be nonzero".into()));
        }
        if let Lower::Positive(lo) = &lower {
            let diff = log_upper
                .sub(lo)
                .map_err(|_| DomainError::InvalidSpec("logLower/logUpper in different fields".into()))?;
            if !diff.is_positive() {
                return Err(DomainError::InvalidSpec("logLower must be < logUpper".into()));
            }
        }
        Ok(DomainSpec { alpha, lower, log_upper })
    }
}

/// The nine canonical shapes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum CanonicalDomain {
    /// `A_rho x C` (axis case, positive lower radius); `log_radius > 0`.
    AnnulusTimesC { log_radius: QuadExtRepr },
    /// `A_rho x C*` (rational ratio, positive lower radius).
    AnnulusTimesCstar { log_radius: QuadExtRepr },
    /// symmetric `D_{gamma, r}`, gamma irrational, `log_radius > 0`.
    IrrationalAnnulus { gamma: QuadExtRepr, log_radius: QuadExtRepr },
    /// `D* x C` (axis case, zero lower radius).
    PuncturedDiscTimesC,
    /// `D* x C*` (rational ratio, zero lower radius).
    PuncturedDiscTimesCstar,
    /// `D*_gamma`, gamma irrational.
    IrrationalPunctured { gamma: QuadExtRepr },
    /// `D x C` (axis case, negative lower radius).
    DiscTimesC,
    /// elementary `D_gamma`, gamma irrational.
    ElementaryIrrational { gamma: QuadExtRepr },
    /// elementary with rational ratio `p/q` (reduced); out of scope
    /// downstream.
    ElementaryRational { p: BigInt, q: BigInt },
}

/// Serializable wrapper carrying a field element as grammar text plus its
/// radicand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadExtRepr {
    pub value: String,
    pub radicand: u64,
}

impl From<&QuadExt> for QuadExtRepr {
    fn from(v: &QuadExt) -> Self {
        QuadExtRepr { value: v.to_string(), radicand: v.radicand() }
    }
}

impl QuadExtRepr {
    pub fn to_quad(&self) -> Result<QuadExt, FieldError> {
        QuadExt::parse(&self.value, self.radicand)
    }
}

impl CanonicalDomain {
    pub fn is_rational_type(&self) -> bool {
        !matches!(
            self,
            CanonicalDomain::IrrationalAnnulus { .. }
                | CanonicalDomain::IrrationalPunctured { .. }
                | CanonicalDomain::ElementaryIrrational { .. }
        )
    }

    /// Lower-radius category of the canonical shape.
    pub fn lower_category(&self) -> LowerCategory {
        match self {
            CanonicalDomain::AnnulusTimesC { .. }
            | CanonicalDomain::AnnulusTimesCstar { .. }
            | CanonicalDomain::IrrationalAnnulus { .. } => LowerCategory::Positive,
            CanonicalDomain::PuncturedDiscTimesC
            | CanonicalDomain::PuncturedDiscTimesCstar
            | CanonicalDomain::IrrationalPunctured { .. } => LowerCategory::Zero,
            CanonicalDomain::DiscTimesC
            | CanonicalDomain::ElementaryIrrational { .. }
            | CanonicalDomain::ElementaryRational { .. } => LowerCategory::Negative,
        }
    }

    pub fn tag_name(&self) -> &'static str {
        match self {
            CanonicalDomain::AnnulusTimesC { .. } => "AnnulusTimesC",
            CanonicalDomain::AnnulusTimesCstar { .. } => "AnnulusTimesCstar",
            CanonicalDomain::IrrationalAnnulus { .. } => "IrrationalAnnulus",
            CanonicalDomain::PuncturedDiscTimesC => "PuncturedDiscTimesC",
            CanonicalDomain::PuncturedDiscTimesCstar => "PuncturedDiscTimesCstar",
            CanonicalDomain::IrrationalPunctured { .. } => "IrrationalPunctured",
            CanonicalDomain::DiscTimesC => "DiscTimesC",
            CanonicalDomain::ElementaryIrrational { .. } => "ElementaryIrrational",
            CanonicalDomain::ElementaryRational { .. } => "ElementaryRational",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LowerCategory {
    Negative,
    Zero,
    Positive,
}

/// `z -> (c1 z1^{e11} z2^{e12}, c2 z1^{e21} z2^{e22})` with exact
/// log-moduli and free float phases.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialMap {
    pub exponents: [[BigInt; 2]; 2],
    pub log_moduli: (QuadExt, QuadExt),
    pub phases: (f64, f64),
}

impl MonomialMap {
    pub fn identity() -> Self {
        MonomialMap {
            exponents: [
                [BigInt::one(), BigInt::zero()],
                [BigInt::zero(), BigInt::one()],
            ],
            log_moduli: (QuadExt::zero(), QuadExt::zero()),
            phases: (0.0, 0.0),
        }
    }

    pub fn from_exponents(e: [[i64; 2]; 2]) -> Self {
        MonomialMap {
            exponents: [
                [BigInt::from(e[0][0]), BigInt::from(e[0][1])],
                [BigInt::from(e[1][0]), BigInt::from(e[1][1])],
            ],
            log_moduli: (QuadExt::zero(), QuadExt::zero()),
            phases: (0.0, 0.0),
        }
    }

    pub fn swap() -> Self {
        Self::from_exponents([[0, 1], [1, 0]])
    }

    /// `z1`-scaling with exact log-modulus `t`.
    pub fn scaling(t: QuadExt) -> Self {
        MonomialMap {
            log_moduli: (t, QuadExt::zero()),
            ..Self::identity()
        }
    }

    pub fn det(&self) -> BigInt {
        &self.exponents[0][0] * &self.exponents[1][1]
            - &self.exponents[0][1] * &self.exponents[1][0]
    }

    pub fn is_identity(&self) -> bool {
        self.exponents[0][0].is_one()
            && self.exponents[0][1].is_zero()
            && self.exponents[1][0].is_zero()
            && self.exponents[1][1].is_one()
            && self.log_moduli.0.is_zero()
            && self.log_moduli.1.is_zero()
            && self.phases.0 == 0.0
            && self.phases.1 == 0.0
    }

    /// Numerical evaluation at a point.
    pub fn apply(&self, z: (Complex64, Complex64)) -> Result<(Complex64, Complex64), DomainError> {
        let coeff = |lm: &QuadExt, ph: f64| {
            Complex64::from_polar(lm.to_f64().exp(), ph)
        };
        let pow = |base: Complex64, e: &BigInt| -> Result<Complex64, DomainError> {
            let exp: i32 = e
                .try_into()
                .map_err(|_| DomainError::InvalidSpec("exponent too large to evaluate".into()))?;
            if base == Complex64::new(0.0, 0.0) {
                if exp < 0 {
                    return Err(DomainError::ZeroBase);
                }
                return Ok(if exp == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                });
            }
            Ok(base.powi(exp))
        };
        let w1 = coeff(&self.log_moduli.0, self.phases.0)
            * pow(z.0, &self.exponents[0][0])?
            * pow(z.1, &self.exponents[0][1])?;
        let w2 = coeff(&self.log_moduli.1, self.phases.1)
            * pow(z.0, &self.exponents[1][0])?
            * pow(z.1, &self.exponents[1][1])?;
        Ok((w1, w2))
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<Self, DomainError> {
        let e = &self.exponents;
        let g = &other.exponents;
        let exponents = [
            [
                &e[0][0] * &g[0][0] + &e[0][1] * &g[1][0],
                &e[0][0] * &g[0][1] + &e[0][1] * &g[1][1],
            ],
            [
                &e[1][0] * &g[0][0] + &e[1][1] * &g[1][0],
                &e[1][0] * &g[0][1] + &e[1][1] * &g[1][1],
            ],
        ];
        let lm0 = self
            .log_moduli
            .0
            .add(&other.log_moduli.0.scale_int(&e[0][0]))?
            .add(&other.log_moduli.1.scale_int(&e[0][1]))?;
        let lm1 = self
            .log_moduli
            .1
            .add(&other.log_moduli.0.scale_int(&e[1][0]))?
            .add(&other.log_moduli.1.scale_int(&e[1][1]))?;
        let e00 = bigint_f64(&e[0][0]);
        let e01 = bigint_f64(&e[0][1]);
        let e10 = bigint_f64(&e[1][0]);
        let e11 = bigint_f64(&e[1][1]);
        let ph0 = wrap_angle(self.phases.0 + e00 * other.phases.0 + e01 * other.phases.1);
        let ph1 = wrap_angle(self.phases.1 + e10 * other.phases.0 + e11 * other.phases.1);
        Ok(MonomialMap { exponents, log_moduli: (lm0, lm1), phases: (ph0, ph1) })
    }

    /// Inverse of a unimodular map.
    pub fn invert(&self) -> Result<Self, DomainError> {
        let det = self.det();
        if det != BigInt::one() && det != BigInt::from(-1) {
            return Err(DomainError::NotUnimodular(det));
        }
        let sign_flip = det == BigInt::from(-1);
        let adj = [
            [self.exponents[1][1].clone(), -self.exponents[0][1].clone()],
            [-self.exponents[1][0].clone(), self.exponents[0][0].clone()],
        ];
        let inv = if sign_flip {
            [
                [-adj[0][0].clone(), -adj[0][1].clone()],
                [-adj[1][0].clone(), -adj[1][1].clone()],
            ]
        } else {
            adj
        };
        // c' = -E^{-1} c, phases likewise
        let lm0 = self
            .log_moduli
            .0
            .scale_int(&inv[0][0])
            .add(&self.log_moduli.1.scale_int(&inv[0][1]))?
            .neg();
        let lm1 = self
            .log_moduli
            .0
            .scale_int(&inv[1][0])
            .add(&self.log_moduli.1.scale_int(&inv[1][1]))?
            .neg();
        let i00 = bigint_f64(&inv[0][0]);
        let i01 = bigint_f64(&inv[0][1]);
        let i10 = bigint_f64(&inv[1][0]);
        let i11 = bigint_f64(&inv[1][1]);
        let ph0 = wrap_angle(-(i00 * self.phases.0 + i01 * self.phases.1));
        let ph1 = wrap_angle(-(i10 * self.phases.0 + i11 * self.phases.1));
        Ok(MonomialMap { exponents: inv, log_moduli: (lm0, lm1), phases: (ph0, ph1) })
    }
}

fn bigint_f64(n: &BigInt) -> f64 {
    n.to_string().parse().unwrap_or(f64::NAN)
}

fn wrap_angle(a: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut x = a % tau;
    if x < 0.0 {
        x += tau;
    }
    if x == tau {
        x = 0.0;
    }
    x
}

/// Classification result: canonical shape, equivalence witness mapping the
/// spec onto it, and a human-readable trail of reduction steps.
#[derive(Debug, Clone)]
pub struct Classification {
    pub canonical: CanonicalDomain,
    pub witness: MonomialMap,
    pub trail: Vec<String>,
}

/// Reduce a spec to its canonical shape with an explicit witness.
pub fn classify(spec: &DomainSpec) -> Result<Classification, DomainError> {
    let mut trail = Vec::new();
    let mut witness = MonomialMap::identity();
    let mut a1 = spec.alpha.0.clone();
    let mut a2 = spec.alpha.1.clone();
    let mut lower = spec.lower.clone();
    let log_upper = spec.log_upper.clone();

    let push = |witness: &mut MonomialMap, step: MonomialMap, note: &str, trail: &mut Vec<String>| -> Result<(), DomainError> {
        if !step.is_identity() {
            *witness = step.compose(witness)?;
            trail.push(note.to_string());
        }
        Ok(())
    };

    // orient the exponent vector: first component positive
    if !a1.is_positive() && a2.is_positive() {
        push(&mut witness, MonomialMap::swap(), "swap coordinates", &mut trail)?;
        std::mem::swap(&mut a1, &mut a2);
    } else if a1.is_zero() {
        // a2 < 0 here (not both zero, a2 not positive)
        push(&mut witness, MonomialMap::swap(), "swap coordinates", &mut trail)?;
        std::mem::swap(&mut a1, &mut a2);
    }
    if a1.is_negative() {
        // invert every coordinate carrying a negative exponent; such
        // coordinates are nonzero throughout the domain
        let invert_z2 = a2.is_negative();
        let step = if invert_z2 {
            MonomialMap::from_exponents([[-1, 0], [0, -1]])
        } else {
            MonomialMap::from_exponents([[-1, 0], [0, 1]])
        };
        push(
            &mut witness,
            step,
            if invert_z2 { "invert both coordinates" } else { "invert first coordinate" },
            &mut trail,
        )?;
        a1 = a1.neg();
        if invert_z2 {
            a2 = a2.neg();
        }
        if matches!(lower, Lower::Negative) {
            // the inverted coordinates were excluded from the original
            // domain, so the zero modulus level is now a puncture
            lower = Lower::Zero;
            trail.push("negative lower bound becomes a puncture after inversion".to_string());
        }
    }

    debug_assert!(a1.is_positive());

    // normalize the level: divide the exponent vector and bounds by a1
    let (lo_norm, hi_norm, gamma) = {
        let hi = log_upper
            .div(&a1)
            .map_err(|_| DomainError::InvalidSpec("logUpper and alpha in different fields".into()))?;
        let lo = match &lower {
            Lower::Positive(l) => Some(
                l.div(&a1)
                    .map_err(|_| DomainError::InvalidSpec("logLower and alpha in different fields".into()))?,
            ),
            _ => None,
        };
        let gamma = if a2.is_zero() {
            None
        } else {
            Some(a2.div(&a1).map_err(|_| {
                DomainError::InvalidSpec("alpha components in different fields".into())
            })?)
        };
        if a1 != QuadExt::one() {
            trail.push(format!("rescale exponent vector by 1/({a1})"));
        }
        (lo, hi, gamma)
    };

    let recenter = |witness: &mut MonomialMap,
                    trail: &mut Vec<String>,
                    t: QuadExt|
     -> Result<(), DomainError> {
        if !t.is_zero() {
            trail.push(format!("recenter by z1-scaling with log-modulus {t}"));
            *witness = MonomialMap::scaling(t).compose(witness)?;
        }
        Ok(())
    };

    let canonical = match gamma {
        None => {
            // axis case: constraint on z1 only
            match (&lower, lo_norm) {
                (Lower::Positive(_), Some(lo)) => {
                    let mid = lo.add(&hi_norm)?.scale_rat(&BigRational::new(
                        BigInt::one(),
                        BigInt::from(2),
                    ));
                    recenter(&mut witness, &mut trail, mid.neg())?;
                    let half = hi_norm.sub(&lo)?.scale_rat(&BigRational::new(
                        BigInt::one(),
                        BigInt::from(2),
                    ));
                    CanonicalDomain::AnnulusTimesC { log_radius: (&half).into() }
                }
                (Lower::Zero, _) => {
                    recenter(&mut witness, &mut trail, hi_norm.neg())?;
                    CanonicalDomain::PuncturedDiscTimesC
                }
                (Lower::Negative, _) => {
                    recenter(&mut witness, &mut trail, hi_norm.neg())?;
                    CanonicalDomain::DiscTimesC
                }
                _ => unreachable!(),
            }
        }
        Some(g) if g.is_rational() => {
            let grat = g.as_rational().expect("rational gamma").clone();
            let p = grat.numer().clone();
            let q = grat.denom().clone(); // > 0 in lowest terms
            if matches!(lower, Lower::Negative) {
                // rational elementary shape: classified but unsupported
                // downstream
                recenter(&mut witness, &mut trail, hi_norm.neg())?;
                CanonicalDomain::ElementaryRational { p, q }
            } else {
                let (m, n) = bezout(&p, &q).expect("reduced fraction is coprime");
                let psi = MonomialMap {
                    exponents: [[q.clone(), p.clone()], [m, n]],
                    log_moduli: (QuadExt::zero(), QuadExt::zero()),
                    phases: (0.0, 0.0),
                };
                trail.push(format!("apply Bezout map with exponents [[{q},{p}],[m,n]]"));
                witness = psi.compose(&witness)?;
                // new level is q * old level
                let qi = BigInt::from(q.clone());
                let hi_q = hi_norm.scale_int(&qi);
                match (&lower, lo_norm) {
                    (Lower::Positive(_), Some(lo)) => {
                        let lo_q = lo.scale_int(&qi);
                        let mid = lo_q.add(&hi_q)?.scale_rat(&BigRational::new(
                            BigInt::one(),
                            BigInt::from(2),
                        ));
                        recenter(&mut witness, &mut trail, mid.neg())?;
                        let half = hi_q.sub(&lo_q)?.scale_rat(&BigRational::new(
                            BigInt::one(),
                            BigInt::from(2),
                        ));
                        CanonicalDomain::AnnulusTimesCstar { log_radius: (&half).into() }
                    }
                    (Lower::Zero, _) => {
                        recenter(&mut witness, &mut trail, hi_q.neg())?;
                        CanonicalDomain::PuncturedDiscTimesCstar
                    }
                    _ => unreachable!(),
                }
            }
        }
        Some(g) => {
            // irrational ratio
            match (&lower, lo_norm) {
                (Lower::Positive(_), Some(lo)) => {
                    let mid = lo.add(&hi_norm)?.scale_rat(&BigRational::new(
                        BigInt::one(),
                        BigInt::from(2),
                    ));
                    recenter(&mut witness, &mut trail, mid.neg())?;
                    let half = hi_norm.sub(&lo)?.scale_rat(&BigRational::new(
                        BigInt::one(),
                        BigInt::from(2),
                    ));
                    CanonicalDomain::IrrationalAnnulus {
                        gamma: (&g).into(),
                        log_radius: (&half).into(),
                    }
                }
                (Lower::Zero, _) => {
                    recenter(&mut witness, &mut trail, hi_norm.neg())?;
                    CanonicalDomain::IrrationalPunctured { gamma: (&g).into() }
                }
                (Lower::Negative, _) => {
                    recenter(&mut witness, &mut trail, hi_norm.neg())?;
                    CanonicalDomain::ElementaryIrrational { gamma: (&g).into() }
                }
                _ => unreachable!(),
            }
        }
    };

    let det = witness.det();
    debug_assert!(det == BigInt::one() || det == BigInt::from(-1));
    Ok(Classification { canonical, witness, trail })
}
