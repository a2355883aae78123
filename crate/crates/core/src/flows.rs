//! One-parameter subgroups of polynomial automorphisms of C² in normal form,
//! their generators, brackets, and the constraints they put on `P`.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::coeff::{fmt_coeff, fmt_rational, gaussian_sqrt, imag_unit, real, Coeff, Rational};
use crate::decomposition::pluriharmonic_split;
use crate::poly::{HoloPoly, Monomial, PolyError, PolyMap, RPoly, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("invalid flow parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate P: {0}")]
    Degenerate(String),
    #[error("matrices do not commute")]
    NonCommuting,
    #[error("eigenvalues are not Gaussian rationals")]
    IrrationalEigenvalues,
    #[error("matrix is not diagonalizable")]
    NotDiagonalizable,
    #[error("the family is the identity for every t")]
    TrivialFamily,
}

/// Normal forms of one-parameter subgroups of `GA_2(C)`, given through
/// the data of their generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FlowKind {
    /// `(z1, e^{bs} z2)`
    Type1 {
        #[serde(with = "crate::coeff::serde_coeff")]
        b: Coeff,
    },
    /// `(z1 + s, e^{bs} z2)`
    Type2a {
        #[serde(with = "crate::coeff::serde_coeff")]
        b: Coeff,
    },
    /// `(z1 + s, z2)`
    Type2b,
    /// `(z1, z2 + s p(z1))`, `p` monic
    Type3 { p: HoloPoly },
    /// `(e^{as} z1, e^{bs} z2)`
    Type4 {
        #[serde(with = "crate::coeff::serde_coeff")]
        a: Coeff,
        #[serde(with = "crate::coeff::serde_coeff")]
        b: Coeff,
    },
    /// `(e^{as} z1, e^{ads}(z2 + s z1^d))`
    Type5 {
        #[serde(with = "crate::coeff::serde_coeff")]
        a: Coeff,
        d: u32,
    },
}

impl FlowKind {
    pub fn label(&self) -> &'static str {
        match self {
            FlowKind::Type1 { .. } => "type1",
            FlowKind::Type2a { .. } => "type2a",
            FlowKind::Type2b => "type2b",
            FlowKind::Type3 { .. } => "type3",
            FlowKind::Type4 { .. } => "type4",
            FlowKind::Type5 { .. } => "type5",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlowSpec {
    #[serde(flatten)]
    pub kind: FlowKind,
    /// Drift in `z3 -> z3 + i beta3 s`.
    #[serde(with = "crate::coeff::serde_rational")]
    pub beta3: Rational,
}

impl FlowSpec {
    pub fn new(kind: FlowKind, beta3: Rational) -> Result<Self, FlowError> {
        let nonzero = |name: &str, c: &Coeff| {
            if c.is_zero() {
                Err(FlowError::InvalidParameter(format!("{name} must be nonzero")))
            } else {
                Ok(())
            }
        };
        match &kind {
            FlowKind::Type1 { b } | FlowKind::Type2a { b } => nonzero("b", b)?,
            FlowKind::Type2b => {}
            FlowKind::Type3 { p } => {
                if !p.depends_only_on(Var::Z1) || p.has_params() {
                    return Err(FlowError::InvalidParameter(format!("p must be a polynomial in z1, got {p}")));
                }
                match p.univariate_leading(Var::Z1) {
                    Some((deg, lead)) if deg >= 1 && lead.is_one() => {}
                    _ => return Err(FlowError::InvalidParameter(format!("p must be monic of degree >= 1, got {p}"))),
                }
            }
            FlowKind::Type4 { a, b } => {
                nonzero("a", a)?;
                nonzero("b", b)?;
            }
            FlowKind::Type5 { a, d } => {
                nonzero("a", a)?;
                if *d == 0 {
                    return Err(FlowError::InvalidParameter("d must be positive".into()));
                }
            }
        }
        Ok(FlowSpec { kind, beta3 })
    }

    pub fn plain(kind: FlowKind) -> Result<Self, FlowError> {
        FlowSpec::new(kind, Rational::zero())
    }
}

/// `X1 d/dz1 + X2 d/dz2 + drift d/dz3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VField {
    pub x1: HoloPoly,
    pub x2: HoloPoly,
    #[serde(with = "crate::coeff::serde_coeff")]
    pub drift: Coeff,
}

impl VField {
    pub fn new(x1: HoloPoly, x2: HoloPoly, drift: Coeff) -> Self {
        VField { x1, x2, drift }
    }

    pub fn zero() -> Self {
        VField::new(HoloPoly::zero(), HoloPoly::zero(), Coeff::zero())
    }

    /// The `z3`-translation field `i d/dz3`.
    pub fn canonical() -> Self {
        VField::new(HoloPoly::zero(), HoloPoly::zero(), imag_unit())
    }

    pub fn translation(v: Var) -> Self {
        let one = HoloPoly::constant(Coeff::one());
        match v {
            Var::Z1 => VField::new(one, HoloPoly::zero(), Coeff::zero()),
            Var::Z2 => VField::new(HoloPoly::zero(), one, Coeff::zero()),
        }
    }

    /// `i alpha z1 d/dz1 + i beta z2 d/dz2`.
    pub fn rotation(alpha: &Rational, beta: &Rational) -> Self {
        let i = imag_unit();
        VField::new(
            HoloPoly::z(Var::Z1).scale(&(&i * real(alpha.clone()))),
            HoloPoly::z(Var::Z2).scale(&(&i * real(beta.clone()))),
            Coeff::zero(),
        )
    }

    pub fn component(&self, v: Var) -> &HoloPoly {
        match v {
            Var::Z1 => &self.x1,
            Var::Z2 => &self.x2,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x1.is_zero() && self.x2.is_zero() && self.drift.is_zero()
    }

    pub fn add(&self, other: &VField) -> VField {
        VField::new(self.x1.add(&other.x1), self.x2.add(&other.x2), &self.drift + &other.drift)
    }

    pub fn scale(&self, c: &Coeff) -> VField {
        VField::new(self.x1.scale(c), self.x2.scale(c), &self.drift * c)
    }

    /// `(X . grad) f` for a holomorphic `f`.
    fn apply(&self, f: &HoloPoly) -> HoloPoly {
        self.x1.mul(&f.derivative(Var::Z1)).add(&self.x2.mul(&f.derivative(Var::Z2)))
    }

    /// `X1 dP/dz1 + X2 dP/dz2`.
    pub fn derivation(&self, p: &RPoly) -> RPoly {
        &(self.x1.as_rpoly() * &p.d_z(Var::Z1)) + &(self.x2.as_rpoly() * &p.d_z(Var::Z2))
    }
}

impl fmt::Display for VField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x1, self.x2, fmt_coeff(&self.drift))
    }
}

pub fn generator(f: &FlowSpec) -> VField {
    let z1 = HoloPoly::z(Var::Z1);
    let z2 = HoloPoly::z(Var::Z2);
    let one = HoloPoly::constant(Coeff::one());
    let (x1, x2) = match &f.kind {
        FlowKind::Type1 { b } => (HoloPoly::zero(), z2.scale(b)),
        FlowKind::Type2a { b } => (one, z2.scale(b)),
        FlowKind::Type2b => (one, HoloPoly::zero()),
        FlowKind::Type3 { p } => (HoloPoly::zero(), p.clone()),
        FlowKind::Type4 { a, b } => (z1.scale(a), z2.scale(b)),
        FlowKind::Type5 { a, d } => {
            let ad = a * real(Rational::from_integer((*d).into()));
            let z1d = HoloPoly::new(RPoly::z1().pow(*d)).expect("holomorphic");
            (z1.scale(a), z2.scale(&ad).add(&z1d))
        }
    };
    VField::new(x1, x2, &imag_unit() * real(f.beta3.clone()))
}

/// `[X, Y] = (X . grad) Y - (Y . grad) X`; constant drifts bracket to zero.
pub fn lie_bracket(x: &VField, y: &VField) -> VField {
    VField::new(
        x.apply(&y.x1).sub(&y.apply(&x.x1)),
        x.apply(&y.x2).sub(&y.apply(&x.x2)),
        Coeff::zero(),
    )
}

pub fn commutes(f: &FlowSpec, g: &FlowSpec) -> bool {
    lie_bracket(&generator(f), &generator(g)).is_zero()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Invariance {
    Invariant,
    /// `V = 2 Re psi`.
    InvariantModPluriharmonic { psi: HoloPoly },
    Violated { residual: RPoly },
}

impl Invariance {
    pub fn holds(&self) -> bool {
        !matches!(self, Invariance::Violated { .. })
    }
}

/// Infinitesimal invariance of `P` under the flow of `X`:
/// `V = 2 Re(X1 dP/dz1 + X2 dP/dz2)`.
pub fn invariance_constraint(p: &RPoly, x: &VField) -> Result<Invariance, FlowError> {
    p.check_real()?;
    let v = x.derivation(p).twice_real_part();
    if v.is_zero() {
        return Ok(Invariance::Invariant);
    }
    let (psi, core) = pluriharmonic_split(&v).expect("2 Re of anything is real");
    Ok(if core.is_zero() {
        Invariance::InvariantModPluriharmonic { psi }
    } else {
        Invariance::Violated { residual: core }
    })
}

/// `(j1 - k1, j2 - k2)` for each monomial of `P`, sorted and deduplicated.
pub fn rotation_constraint_rows(p: &RPoly) -> Vec<(i64, i64)> {
    let rows: BTreeSet<(i64, i64)> = p.monomials().map(Monomial::phase).collect();
    rows.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Certificate {
    /// The field is tangent; `psi` is the compensating `z3` shear, if any.
    Tangent { field: VField, psi: Option<HoloPoly> },
    /// The flow would sweep out a complex curve inside the boundary.
    BoundaryVariety,
    /// A monomial in `z2, cz2` alone forces all coefficients to vanish.
    PureMonomial { witness: RPoly },
    NoSolution { detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KindVerdict {
    pub kind: &'static str,
    /// Variable the normal form is written along (translations, lone rotations).
    pub axis: Option<String>,
    pub admissible: bool,
    pub certificate: Certificate,
}

fn tangent_verdict(kind: &'static str, axis: Option<Var>, p: &RPoly, x: VField) -> Result<KindVerdict, FlowError> {
    let inv = invariance_constraint(p, &x)?;
    let axis = axis.map(|v| v.to_string());
    Ok(match inv {
        Invariance::Invariant => KindVerdict { kind, axis, admissible: true, certificate: Certificate::Tangent { field: x, psi: None } },
        Invariance::InvariantModPluriharmonic { psi } => {
            KindVerdict { kind, axis, admissible: true, certificate: Certificate::Tangent { field: x, psi: Some(psi) } }
        }
        Invariance::Violated { residual } => KindVerdict {
            kind,
            axis,
            admissible: false,
            certificate: Certificate::NoSolution { detail: format!("non-pluriharmonic residual {residual}") },
        },
    })
}

/// Real `beta != 0` with `A + beta B = 0`, if any.
fn real_multiplier(a: &RPoly, b: &RPoly) -> Option<Rational> {
    if b.is_zero() {
        return a.is_zero().then(Rational::one);
    }
    let (m, c) = b.terms().next().unwrap();
    let beta = -(a.coeff(m) / c);
    if !beta.im.is_zero() || beta.re.is_zero() {
        return None;
    }
    (a + &b.scale(&beta)).is_zero().then_some(beta.re)
}

/// Which normal forms a one-parameter symmetry of `P` may take, each with
/// a certificate. Rotation parameters are restricted to be imaginary.
pub fn admissible_flow_types(p: &RPoly) -> Result<Vec<KindVerdict>, FlowError> {
    p.check_real()?;
    p.check_no_params()?;
    let ft = crate::symmetry::finite_type_necessary(p);
    if !ft.passed {
        return Err(FlowError::Degenerate(ft.summary()));
    }
    let (_, core) = pluriharmonic_split(p).expect("checked real");
    let mut out = Vec::new();
    let one = Rational::one();
    let zero = Rational::zero();
    for v in [Var::Z1, Var::Z2] {
        let x = match v {
            Var::Z1 => VField::rotation(&one, &zero),
            Var::Z2 => VField::rotation(&zero, &one),
        };
        out.push(tangent_verdict("type1", Some(v), p, x)?);
    }
    for v in [Var::Z1, Var::Z2] {
        let trans = invariance_core(p, &VField::translation(v));
        let rot = match v.other() {
            Var::Z1 => VField::rotation(&one, &zero),
            Var::Z2 => VField::rotation(&zero, &one),
        };
        let rot_core = invariance_core(p, &rot);
        let verdict = match real_multiplier(&trans, &rot_core) {
            Some(beta) => tangent_verdict("type2a", Some(v), p, VField::translation(v).add(&rot.scale(&real(beta))))?,
            None => KindVerdict {
                kind: "type2a",
                axis: Some(v.to_string()),
                admissible: false,
                certificate: Certificate::NoSolution {
                    detail: "no real nonzero rotation speed balances the translation".into(),
                },
            },
        };
        out.push(verdict);
    }
    for v in [Var::Z1, Var::Z2] {
        out.push(tangent_verdict("type2b", Some(v), p, VField::translation(v))?);
    }
    out.push(KindVerdict { kind: "type3", axis: None, admissible: false, certificate: Certificate::BoundaryVariety });
    let kernel = crate::symmetry::torus_weights(&core);
    let joint = kernel.lattice_vector_with_full_support();
    out.push(match joint {
        Some((alpha, beta)) => tangent_verdict(
            "type4",
            None,
            p,
            VField::rotation(&Rational::from_integer(alpha.into()), &Rational::from_integer(beta.into())),
        )?,
        None => KindVerdict {
            kind: "type4",
            axis: None,
            admissible: false,
            certificate: Certificate::NoSolution { detail: "no rotation weight with both entries nonzero".into() },
        },
    });
    let witness = core.filter(|m| !m.involves(Var::Z1));
    out.push(KindVerdict {
        kind: "type5",
        axis: None,
        admissible: false,
        certificate: if witness.is_zero() {
            Certificate::NoSolution { detail: "P has no terms in z2 alone".into() }
        } else {
            let (m, c) = witness.terms().next_back().unwrap();
            Certificate::PureMonomial { witness: RPoly::term(m.clone(), c.clone()) }
        },
    });
    Ok(out)
}

fn invariance_core(p: &RPoly, x: &VField) -> RPoly {
    let v = x.derivation(p).twice_real_part();
    pluriharmonic_split(&v).expect("real").1
}

/// 2x2 matrix over Q(i), row major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mat2 {
    #[serde(with = "mat_serde")]
    pub m: [[Coeff; 2]; 2],
}

mod mat_serde {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: serde::Serializer>(m: &[[Coeff; 2]; 2], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        for row in m {
            seq.serialize_element(&[fmt_coeff(&row[0]), fmt_coeff(&row[1])])?;
        }
        seq.end()
    }
}

impl Mat2 {
    pub fn new(a: Coeff, b: Coeff, c: Coeff, d: Coeff) -> Self {
        Mat2 { m: [[a, b], [c, d]] }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        let r = |n: i64| real(Rational::from_integer(n.into()));
        Mat2::new(r(a), r(b), r(c), r(d))
    }

    pub fn identity() -> Self {
        Mat2::from_ints(1, 0, 0, 1)
    }

    pub fn diag(a: Coeff, d: Coeff) -> Self {
        Mat2::new(a, Coeff::zero(), Coeff::zero(), d)
    }

    /// Matrix with the given columns.
    pub fn from_columns(c0: [Coeff; 2], c1: [Coeff; 2]) -> Self {
        let [a, c] = c0;
        let [b, d] = c1;
        Mat2::new(a, b, c, d)
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let e = |i: usize, j: usize| &self.m[i][0] * &o.m[0][j] + &self.m[i][1] * &o.m[1][j];
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn det(&self) -> Coeff {
        &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0]
    }

    pub fn trace(&self) -> Coeff {
        &self.m[0][0] + &self.m[1][1]
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        let [[a, b], [c, d]] = &self.m;
        Some(Mat2::new(d / &det, -b / &det, -c / &det, a / &det))
    }

    pub fn is_diagonal(&self) -> bool {
        self.m[0][1].is_zero() && self.m[1][0].is_zero()
    }

    pub fn is_scalar(&self) -> bool {
        self.is_diagonal() && self.m[0][0] == self.m[1][1]
    }

    /// Generator of the linear flow `z -> e^{sA} z`.
    pub fn linear_field(&self) -> VField {
        let lin = |a: &Coeff, b: &Coeff| HoloPoly::z(Var::Z1).scale(a).add(&HoloPoly::z(Var::Z2).scale(b));
        VField::new(lin(&self.m[0][0], &self.m[0][1]), lin(&self.m[1][0], &self.m[1][1]), Coeff::zero())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagonalization {
    /// Columns are common eigenvectors.
    pub h: Mat2,
    pub a_diag: Mat2,
    pub b_diag: Mat2,
}

/// Eigenvector of `m` for `lambda`, first nonzero entry normalized to 1.
fn eigenvector(m: &Mat2, lambda: &Coeff) -> [Coeff; 2] {
    let [[a, b], [c, d]] = &m.m;
    let v = if !b.is_zero() {
        [b.clone(), lambda - a]
    } else if !c.is_zero() {
        [lambda - d, c.clone()]
    } else if a == lambda {
        [Coeff::one(), Coeff::zero()]
    } else {
        [Coeff::zero(), Coeff::one()]
    };
    let lead = if v[0].is_zero() { v[1].clone() } else { v[0].clone() };
    [&v[0] / &lead, &v[1] / &lead]
}

/// Common eigenbasis `H` of commuting `A`, `B` with `H^-1 A H`, `H^-1 B H` diagonal.
pub fn simultaneous_diagonalize(a: &Mat2, b: &Mat2) -> Result<Diagonalization, FlowError> {
    if a.mul(b) != b.mul(a) {
        return Err(FlowError::NonCommuting);
    }
    let h = if a.is_scalar() && b.is_scalar() {
        Mat2::identity()
    } else {
        let m = if a.is_scalar() { b } else { a };
        let tr = m.trace();
        let disc = &tr * &tr - m.det() * real(Rational::from_integer(4.into()));
        let root = gaussian_sqrt(&disc).ok_or(FlowError::IrrationalEigenvalues)?;
        if root.is_zero() {
            return Err(FlowError::NotDiagonalizable);
        }
        let half = real(Rational::new(1.into(), 2.into()));
        let l1 = (&tr - &root) * &half;
        let l2 = (&tr + &root) * &half;
        Mat2::from_columns(eigenvector(m, &l1), eigenvector(m, &l2))
    };
    let inv = h.inverse().ok_or(FlowError::NotDiagonalizable)?;
    let a_diag = inv.mul(a).mul(&h);
    let b_diag = inv.mul(b).mul(&h);
    if !a_diag.is_diagonal() || !b_diag.is_diagonal() {
        return Err(FlowError::NotDiagonalizable);
    }
    Ok(Diagonalization { h, a_diag, b_diag })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShearNormalization {
    /// `C` with `C^-1 R_t C` in normal form.
    pub conjugator: PolyMap,
    pub flow: FlowSpec,
    /// `Y_R(C(z)) = DC(z) Y_N(z)` holds exactly.
    pub verified: bool,
}

/// Normalizes `R_t(z) = (z1 + q(e^{lt} z2) - q(z2) + c t, e^{lt} z2)`.
pub fn shear_normalize(q: &HoloPoly, lambda: &Coeff, c: &Coeff) -> Result<ShearNormalization, FlowError> {
    if !q.depends_only_on(Var::Z2) || q.has_params() {
        return Err(FlowError::InvalidParameter(format!("q must be a polynomial in z2, got {q}")));
    }
    let z1 = HoloPoly::z(Var::Z1);
    let z2 = HoloPoly::z(Var::Z2);
    let (lead, kind) = match (lambda.is_zero(), c.is_zero()) {
        (true, true) => return Err(FlowError::TrivialFamily),
        (true, false) => (c.clone(), FlowKind::Type2b),
        (false, false) => (c.clone(), FlowKind::Type2a { b: lambda.clone() }),
        (false, true) => (Coeff::one(), FlowKind::Type1 { b: lambda.clone() }),
    };
    let conjugator = PolyMap::new(z1.scale(&lead).add(q), z2.clone());
    let flow = FlowSpec::plain(kind)?;

    // generator of R_t, and the identity Y_R o C = DC . Y_N
    let dq = q.derivative(Var::Z2);
    let y_r = VField::new(
        z2.mul(&dq).scale(lambda).add(&HoloPoly::constant(c.clone())),
        z2.scale(lambda),
        Coeff::zero(),
    );
    let y_n = generator(&flow);
    let lhs1 = y_r.x1.compose(&conjugator);
    let lhs2 = y_r.x2.compose(&conjugator);
    let c1 = &conjugator.f1;
    let rhs1 = c1.derivative(Var::Z1).mul(&y_n.x1).add(&c1.derivative(Var::Z2).mul(&y_n.x2));
    let rhs2 = y_n.x2.clone();
    let verified = lhs1 == rhs1 && lhs2 == rhs2;
    Ok(ShearNormalization { conjugator, flow, verified })
}

/// Entries of the table of commuting pairs; `Two` covers both `2a` and `2b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    One,
    Two,
    TwoB,
    Three,
    Four,
    Five,
}

impl PairKind {
    fn matches(self, k: &FlowKind) -> bool {
        matches!(
            (self, k),
            (PairKind::One, FlowKind::Type1 { .. })
                | (PairKind::Two, FlowKind::Type2a { .. } | FlowKind::Type2b)
                | (PairKind::TwoB, FlowKind::Type2b)
                | (PairKind::Three, FlowKind::Type3 { .. })
                | (PairKind::Four, FlowKind::Type4 { .. })
                | (PairKind::Five, FlowKind::Type5 { .. })
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairEntry {
    pub pair: (PairKind, PairKind),
    /// Possible for two symmetries of a model domain commuting with `z3`-translations.
    pub model_admissible: bool,
    /// The two polynomial degrees must agree.
    pub equal_degree: bool,
}

/// Unordered pairs of normal-form types that occur for commuting flows.
pub fn admissible_pairs() -> Vec<PairEntry> {
    use PairKind::*;
    let entry = |a, b, model, deg| PairEntry { pair: (a, b), model_admissible: model, equal_degree: deg };
    vec![
        entry(One, One, true, false),
        entry(One, Two, true, false),
        entry(One, Four, true, false),
        entry(Two, Two, true, false),
        entry(Four, Four, true, false),
        entry(TwoB, Three, false, false),
        entry(Three, Three, false, false),
        entry(Three, Five, false, true),
        entry(Five, Five, false, true),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairVerdict {
    pub commuting: bool,
    pub bracket: VField,
    pub table_entry: Option<PairEntry>,
    pub degrees_agree: Option<bool>,
    pub ga2_admissible: bool,
    pub model_admissible: bool,
}

fn flow_degree(k: &FlowKind) -> Option<u32> {
    match k {
        FlowKind::Type3 { p } => p.univariate_leading(Var::Z1).map(|(d, _)| d),
        FlowKind::Type5 { d, .. } => Some(*d),
        _ => None,
    }
}

pub fn pair_check(f: &FlowSpec, g: &FlowSpec) -> PairVerdict {
    let bracket = lie_bracket(&generator(f), &generator(g));
    let commuting = bracket.is_zero();
    let table_entry = admissible_pairs().into_iter().find(|e| {
        let (a, b) = e.pair;
        (a.matches(&f.kind) && b.matches(&g.kind)) || (a.matches(&g.kind) && b.matches(&f.kind))
    });
    let degrees_agree = table_entry
        .as_ref()
        .filter(|e| e.equal_degree)
        .map(|_| flow_degree(&f.kind) == flow_degree(&g.kind));
    let ga2_admissible = commuting && table_entry.is_some() && degrees_agree != Some(false);
    let model_admissible = ga2_admissible && table_entry.as_ref().is_some_and(|e| e.model_admissible);
    PairVerdict { commuting, bracket, table_entry, degrees_agree, ga2_admissible, model_admissible }
}

impl fmt::Display for FlowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FlowKind::Type1 { b } | FlowKind::Type2a { b } => write!(f, "{}(b = {})", self.kind.label(), fmt_coeff(b))?,
            FlowKind::Type2b => write!(f, "type2b")?,
            FlowKind::Type3 { p } => write!(f, "type3(p = {p})")?,
            FlowKind::Type4 { a, b } => write!(f, "type4(a = {}, b = {})", fmt_coeff(a), fmt_coeff(b))?,
            FlowKind::Type5 { a, d } => write!(f, "type5(a = {}, d = {d})", fmt_coeff(a))?,
        }
        if !self.beta3.is_zero() {
            write!(f, " drift {}", fmt_rational(&self.beta3))?;
        }
        Ok(())
    }
}

/// Flows whose rotation parameters are not purely imaginary cannot preserve
/// a rigid domain; this reports the offending parameter, if any.
pub fn non_unitary_parameter(f: &FlowSpec) -> Option<Coeff> {
    let params: Vec<&Coeff> = match &f.kind {
        FlowKind::Type1 { b } | FlowKind::Type2a { b } => vec![b],
        FlowKind::Type4 { a, b } => vec![a, b],
        FlowKind::Type5 { a, .. } => vec![a],
        _ => vec![],
    };
    params.into_iter().find(|c| c.re.is_positive() || c.re.is_negative()).cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{c_int, coeff, int};
    use crate::poly::parse;

    fn p(s: &str) -> RPoly {
        parse(s).unwrap()
    }

    fn h(s: &str) -> HoloPoly {
        HoloPoly::new(p(s)).unwrap()
    }

    fn ci(re: i64, im: i64) -> Coeff {
        coeff(int(re), int(im))
    }

    fn spec(kind: FlowKind) -> FlowSpec {
        FlowSpec::plain(kind).unwrap()
    }

    #[test]
    fn generator_examples() {
        let g = generator(&spec(FlowKind::Type4 { a: ci(0, 1), b: ci(0, 3) }));
        assert_eq!((g.x1, g.x2), (h("i*z1"), h("3*i*z2")));
        let g = generator(&spec(FlowKind::Type2b));
        assert_eq!((g.x1, g.x2), (h("1"), HoloPoly::zero()));
        let g = generator(&spec(FlowKind::Type5 { a: c_int(1), d: 2 }));
        assert_eq!((g.x1, g.x2), (h("z1"), h("2*z2 + z1^2")));
    }

    #[test]
    fn spec_validation() {
        assert!(FlowSpec::plain(FlowKind::Type1 { b: Coeff::zero() }).is_err());
        assert!(FlowSpec::plain(FlowKind::Type3 { p: h("2*z1") }).is_err());
        assert!(FlowSpec::plain(FlowKind::Type3 { p: h("z1^2 + 3") }).is_ok());
        assert!(FlowSpec::plain(FlowKind::Type5 { a: c_int(1), d: 0 }).is_err());
    }

    #[test]
    fn bracket_examples() {
        let x = VField::new(h("z1"), h("2*z2"), Coeff::zero());
        let y = VField::new(h("3*z1"), h("5*z2"), Coeff::zero());
        assert!(lie_bracket(&x, &y).is_zero());
        let d1 = VField::translation(Var::Z1);
        let e = VField::new(h("z1"), HoloPoly::zero(), Coeff::zero());
        assert_eq!(lie_bracket(&d1, &e), d1);
        assert!(lie_bracket(&x, &x).is_zero());
    }

    #[test]
    fn commutation_examples() {
        assert!(commutes(&spec(FlowKind::Type1 { b: ci(0, 1) }), &spec(FlowKind::Type4 { a: ci(0, 1), b: ci(0, 2) })));
        assert!(!commutes(&spec(FlowKind::Type2b), &spec(FlowKind::Type4 { a: c_int(1), b: c_int(1) })));
        let f = FlowSpec::new(FlowKind::Type5 { a: c_int(2), d: 3 }, int(7)).unwrap();
        assert!(lie_bracket(&generator(&f), &VField::canonical()).is_zero());
    }

    #[test]
    fn invariance_examples() {
        let d1 = VField::translation(Var::Z1);
        assert_eq!(invariance_constraint(&p("im(z1)^2"), &d1).unwrap(), Invariance::Invariant);
        assert_eq!(
            invariance_constraint(&p("re(z1)^2"), &d1).unwrap(),
            Invariance::InvariantModPluriharmonic { psi: h("z1") }
        );
        let rot = VField::rotation(&int(1), &int(0));
        assert_eq!(invariance_constraint(&p("z1*cz1"), &rot).unwrap(), Invariance::Invariant);
        assert!(!invariance_constraint(&p("z1^2*cz2 + cz1^2*z2"), &rot).unwrap().holds());
    }

    #[test]
    fn constraint_rows() {
        assert_eq!(rotation_constraint_rows(&p("z1*cz1 + z2*cz2")), vec![(0, 0)]);
        assert_eq!(rotation_constraint_rows(&p("z1^3*cz2 + cz1^3*z2")), vec![(-3, 1), (3, -1)]);
        assert_eq!(rotation_constraint_rows(&p("z1*cz2 + cz1*z2 + z1^2*cz1^2")), vec![(-1, 1), (0, 0), (1, -1)]);
    }

    fn admissible(p: &RPoly) -> Vec<(String, Option<String>)> {
        admissible_flow_types(p)
            .unwrap()
            .into_iter()
            .filter(|v| v.admissible)
            .map(|v| (v.kind.to_string(), v.axis))
            .collect()
    }

    #[test]
    fn admissible_types_of_sphere() {
        let got = admissible(&p("z1*cz1 + z2*cz2"));
        for want in [("type1", Some("z1")), ("type1", Some("z2")), ("type4", None)] {
            assert!(got.contains(&(want.0.to_string(), want.1.map(String::from))), "{want:?} in {got:?}");
        }
    }

    #[test]
    fn admissible_types_of_tube_and_disc() {
        let got = admissible(&p("im(z1)^4 + z2^2*cz2^2"));
        assert!(got.contains(&("type2b".into(), Some("z1".into()))));
        assert!(got.contains(&("type1".into(), Some("z2".into()))));
        assert!(got.contains(&("type2a".into(), Some("z1".into()))));
        assert!(!got.contains(&("type2b".into(), Some("z2".into()))));
        assert!(!got.contains(&("type4".into(), None)));
    }

    #[test]
    fn type5_is_excluded_with_witness() {
        let v = admissible_flow_types(&p("z1*cz1 + z2^2*cz2^2 + z2^3 + cz2^3")).unwrap();
        let t5 = v.iter().find(|k| k.kind == "type5").unwrap();
        assert!(!t5.admissible);
        assert!(matches!(t5.certificate, Certificate::PureMonomial { .. }));
        assert!(admissible_flow_types(&p("z1*cz1")).is_err());
    }

    #[test]
    fn diagonalize_examples() {
        let a = Mat2::from_ints(1, 1, 0, 2);
        let b = Mat2::from_ints(1, 2, 0, 3);
        let d = simultaneous_diagonalize(&a, &b).unwrap();
        assert_eq!(d.h, Mat2::from_ints(1, 1, 0, 1));
        assert_eq!(d.a_diag, Mat2::from_ints(1, 0, 0, 2));
        assert_eq!(d.b_diag, Mat2::from_ints(1, 0, 0, 3));

        let i = Mat2::identity();
        assert_eq!(simultaneous_diagonalize(&i, &i).unwrap().h, i);
        assert_eq!(simultaneous_diagonalize(&Mat2::from_ints(0, 1, 0, 0), &i), Err(FlowError::NotDiagonalizable));
        assert_eq!(
            simultaneous_diagonalize(&Mat2::from_ints(1, 1, 0, 2), &Mat2::from_ints(0, 0, 1, 0)),
            Err(FlowError::NonCommuting)
        );
        assert_eq!(
            simultaneous_diagonalize(&Mat2::from_ints(0, 2, 1, 0), &i),
            Err(FlowError::IrrationalEigenvalues)
        );
    }

    #[test]
    fn rotation_matrix_diagonalizes_over_gaussian_rationals() {
        let a = Mat2::from_ints(0, -1, 1, 0);
        let d = simultaneous_diagonalize(&a, &Mat2::identity()).unwrap();
        assert_eq!(d.a_diag, Mat2::diag(ci(0, -1), ci(0, 1)));
    }

    #[test]
    fn shear_examples() {
        let s = shear_normalize(&h("z2^2"), &imag_unit(), &Coeff::zero()).unwrap();
        assert_eq!(s.conjugator, PolyMap::new(h("z1 + z2^2"), h("z2")));
        assert_eq!(s.flow.kind, FlowKind::Type1 { b: imag_unit() });
        assert!(s.verified);

        let s = shear_normalize(&h("z2"), &c_int(1), &c_int(1)).unwrap();
        assert_eq!(s.flow.kind, FlowKind::Type2a { b: c_int(1) });
        assert!(s.verified);

        let s = shear_normalize(&HoloPoly::zero(), &Coeff::zero(), &c_int(1)).unwrap();
        assert_eq!(s.conjugator, PolyMap::identity());
        assert_eq!(s.flow.kind, FlowKind::Type2b);

        assert_eq!(shear_normalize(&HoloPoly::zero(), &Coeff::zero(), &Coeff::zero()), Err(FlowError::TrivialFamily));
    }

    #[test]
    fn pair_table() {
        let pairs = admissible_pairs();
        assert_eq!(pairs.len(), 9);
        assert_eq!(pairs.iter().filter(|e| e.model_admissible).count(), 5);
        assert!(pairs[..5].iter().all(|e| e.model_admissible));
    }

    #[test]
    fn pair_check_examples() {
        let v = pair_check(&spec(FlowKind::Type1 { b: ci(0, 1) }), &spec(FlowKind::Type4 { a: ci(0, 2), b: ci(0, 1) }));
        assert!(v.ga2_admissible && v.model_admissible);

        let v = pair_check(&spec(FlowKind::Type3 { p: h("z1^2") }), &spec(FlowKind::Type5 { a: c_int(1), d: 2 }));
        assert!(v.commuting);
        assert!(v.ga2_admissible && !v.model_admissible);
        assert_eq!(v.degrees_agree, Some(true));

        let v = pair_check(&spec(FlowKind::Type2b), &spec(FlowKind::Type4 { a: c_int(1), b: c_int(1) }));
        assert!(!v.commuting && !v.ga2_admissible);
        assert_eq!(v.bracket, VField::translation(Var::Z1));
    }

    #[test]
    fn unequal_degrees_are_flagged() {
        let v = pair_check(&spec(FlowKind::Type5 { a: c_int(1), d: 2 }), &spec(FlowKind::Type5 { a: c_int(1), d: 3 }));
        assert!(!v.ga2_admissible);
    }
}
