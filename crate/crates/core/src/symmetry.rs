//! Symmetry detection for a fixed `P`: rotation tori, translation
//! directions, finite rotations, polynomial tangent fields, and the normal
//! form the symmetries put `P` in.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::coeff::{coeff, fmt_coeff, imag_unit, int, real, Coeff, Rational};
use crate::decomposition::pluriharmonic_split;
use crate::flows::{admissible_flow_types, rotation_constraint_rows, Certificate, VField};
use crate::grading::{balanced_in_variable, is_balanced, is_extremely_balanced, Weight};
use crate::linalg;
use crate::poly::{HoloPoly, ModelMap, Monomial, PolyError, PolyMap, RPoly, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("P must have no constant term, found {0}")]
    ConstantTerm(String),
    #[error("cyclic order must be at least 1")]
    ZeroOrder,
}

/// The domain `{2 Re z3 + P < 0}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelDomain {
    pub p: RPoly,
    pub assume_nondegenerate: bool,
}

impl ModelDomain {
    pub fn new(p: RPoly) -> Result<Self, SymmetryError> {
        p.check_real()?;
        p.check_no_params()?;
        let c = p.constant_term();
        if !c.is_zero() {
            return Err(SymmetryError::ConstantTerm(fmt_coeff(&c)));
        }
        Ok(ModelDomain { p, assume_nondegenerate: false })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Obstruction {
    /// `P` is the real part of a holomorphic polynomial.
    Pluriharmonic,
    /// No terms in `z_l, cz_l` alone survive removal of pluriharmonic terms.
    MissingPureVariable { var: String },
    /// `P` restricted to `{z_l = at}` is pluriharmonic, so the boundary
    /// contains a complex curve over that line.
    LineInLevelSet { var: String, at: String },
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::Pluriharmonic => f.write_str("P is pluriharmonic"),
            Obstruction::MissingPureVariable { var } => {
                let l = &var[1..];
                write!(f, "P{l} = 0: no terms in {var} alone")
            }
            Obstruction::LineInLevelSet { var, at } => write!(f, "P is pluriharmonic on the line {var} = {at}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteTypeVerdict {
    pub passed: bool,
    pub obstructions: Vec<Obstruction>,
    pub note: &'static str,
}

impl FiniteTypeVerdict {
    pub fn summary(&self) -> String {
        if self.passed {
            self.note.to_string()
        } else {
            self.obstructions.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
        }
    }
}

const LINE_PARAM: &str = "_t";
const SHIFT_PARAM: &str = "s";

fn restrict(p: &RPoly, v: Var, value: RPoly) -> RPoly {
    let map = match v {
        Var::Z1 => PolyMap::new(HoloPoly::new(value).expect("holomorphic"), HoloPoly::z(Var::Z2)),
        Var::Z2 => PolyMap::new(HoloPoly::z(Var::Z1), HoloPoly::new(value).expect("holomorphic")),
    };
    p.substitute(&map)
}

fn core_of(p: &RPoly) -> RPoly {
    pluriharmonic_split(p).expect("real input").1
}

/// Rational roots of a rational polynomial given by ascending coefficients,
/// found by the rational root test; `None` when the coefficients are too
/// large to factor by trial division.
fn rational_roots(coeffs: &[Rational]) -> Option<Vec<Rational>> {
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = coeffs.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    while ints.last().is_some_and(Zero::is_zero) {
        ints.pop();
    }
    let mut roots = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero())?;
    if low > 0 {
        roots.push(Rational::zero());
    }
    let ints = &ints[low..];
    if ints.len() < 2 {
        return Some(roots);
    }
    let divisors = |n: &BigInt| -> Option<Vec<i64>> {
        let n = n.abs().to_i64().filter(|&n| n <= 10_000_000)?;
        Some((1..).take_while(|d| d * d <= n).filter(|d| n % d == 0).flat_map(|d| [d, n / d]).collect())
    };
    let ps = divisors(&ints[0])?;
    let qs = divisors(ints.last().unwrap())?;
    let eval = |x: &Rational| {
        ints.iter().rev().fold(Rational::zero(), |acc, c| acc * x + Rational::from_integer(c.clone()))
    };
    for p in &ps {
        for q in &qs {
            for sign in [1, -1] {
                let x = Rational::new(BigInt::from(sign * p), BigInt::from(*q));
                if !roots.contains(&x) && eval(&x).is_zero() {
                    roots.push(x);
                }
            }
        }
    }
    Some(roots)
}

fn coefficients_by_z_part(p: &RPoly) -> BTreeMap<Monomial, RPoly> {
    let mut out: BTreeMap<Monomial, RPoly> = BTreeMap::new();
    for (m, c) in p.terms() {
        out.entry(m.z_part()).or_default().add_term(m.param_part(), c.clone());
    }
    out
}

/// Points `c` on the real and imaginary axes where the first coefficient of
/// the restricted core vanishes.
fn root_candidates(core: &RPoly, v: Var) -> Vec<Coeff> {
    let mut out = Vec::new();
    for direction in [Coeff::one(), imag_unit()] {
        let t = RPoly::param(LINE_PARAM).scale(&direction);
        let restricted = core_of(&restrict(core, v, t));
        let Some((_, first)) = coefficients_by_z_part(&restricted).into_iter().next() else {
            continue;
        };
        let degree = first.monomials().map(|m| m.param_exp(LINE_PARAM)).max().unwrap_or(0) as usize;
        for part in [true, false] {
            let mut c = vec![Rational::zero(); degree + 1];
            for (m, x) in first.terms() {
                c[m.param_exp(LINE_PARAM) as usize] += if part { x.re.clone() } else { x.im.clone() };
            }
            if c.iter().all(Zero::is_zero) {
                continue;
            }
            if let Some(roots) = rational_roots(&c) {
                out.extend(roots.into_iter().map(|r| &direction * real(r)));
            }
            break;
        }
    }
    out
}

/// Necessary conditions for the boundary to contain no complex curves.
/// Passing means only that no obstruction was found.
pub fn finite_type_necessary(p: &RPoly) -> FiniteTypeVerdict {
    let note = "necessary conditions only: no obstruction found";
    let mut obstructions = Vec::new();
    let core = core_of(p);
    if core.is_zero() {
        obstructions.push(Obstruction::Pluriharmonic);
        return FiniteTypeVerdict { passed: false, obstructions, note };
    }
    let parts = core.split_parts();
    for (var, part) in [(Var::Z1, &parts.p1), (Var::Z2, &parts.p2)] {
        if part.is_zero() {
            obstructions.push(Obstruction::MissingPureVariable { var: var.to_string() });
        }
    }
    if obstructions.is_empty() {
        for v in [Var::Z1, Var::Z2] {
            let mut candidates: Vec<Coeff> =
                (-2..=2).flat_map(|a| (-2..=2).map(move |b| coeff(int(a), int(b)))).collect();
            candidates.extend(root_candidates(&core, v));
            let mut seen = Vec::new();
            for c in candidates {
                if seen.contains(&c) {
                    continue;
                }
                if core_of(&restrict(&core, v, RPoly::constant(c.clone()))).is_zero() {
                    obstructions.push(Obstruction::LineInLevelSet { var: v.to_string(), at: fmt_coeff(&c) });
                    break;
                }
                seen.push(c);
            }
        }
    }
    FiniteTypeVerdict { passed: obstructions.is_empty(), obstructions, note }
}

/// Integer weights `(alpha, beta)` of rotations fixing every monomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightKernel {
    pub rank: usize,
    /// Hermite-reduced, generating the full integer solution lattice.
    pub kernel_basis: Vec<(i64, i64)>,
}

impl WeightKernel {
    /// Some lattice vector with both coordinates nonzero.
    pub fn lattice_vector_with_full_support(&self) -> Option<(i64, i64)> {
        match self.kernel_basis.as_slice() {
            [_, _] => Some((1, 1)),
            [(a, b)] if *a != 0 && *b != 0 => Some((*a, *b)),
            _ => None,
        }
    }
}

pub fn torus_weights(p: &RPoly) -> WeightKernel {
    let rows: Vec<Vec<BigInt>> =
        rotation_constraint_rows(p).into_iter().map(|(a, b)| vec![BigInt::from(a), BigInt::from(b)]).collect();
    let basis = linalg::integer_kernel(&rows, 2);
    let kernel_basis: Vec<(i64, i64)> = basis
        .into_iter()
        .map(|v| (v[0].to_i64().expect("small weight"), v[1].to_i64().expect("small weight")))
        .collect();
    WeightKernel { rank: kernel_basis.len(), kernel_basis }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TranslationStatus {
    Invariant,
    InvariantModPluriharmonic,
    NotInvariant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslationVerdict {
    pub axis: String,
    pub status: TranslationStatus,
    /// `P(z + s e_l) - P(z) = 2 Re psi_s`.
    pub psi: Option<HoloPoly>,
    /// `Phi` with `P - 2 Re Phi` free of `Re z_l`.
    pub shear: Option<HoloPoly>,
    pub normalized: Option<RPoly>,
    /// Normalized `P` is independent of `Re z_l`.
    pub genuine: bool,
    pub residual: Option<RPoly>,
}

fn shift(p: &RPoly, v: Var) -> RPoly {
    let s = RPoly::param(SHIFT_PARAM);
    p.substitute(&PolyMap::translation(v, s))
}

pub fn translation_direction(p: &RPoly, v: Var) -> Result<TranslationVerdict, SymmetryError> {
    p.check_real()?;
    p.check_no_params()?;
    let diff = &shift(p, v) - p;
    let axis = v.to_string();
    if diff.is_zero() {
        return Ok(TranslationVerdict {
            axis,
            status: TranslationStatus::Invariant,
            psi: None,
            shear: None,
            normalized: Some(p.clone()),
            genuine: true,
            residual: None,
        });
    }
    let (psi, core) = pluriharmonic_split(&diff).expect("real");
    if !core.is_zero() {
        return Ok(TranslationVerdict {
            axis,
            status: TranslationStatus::NotInvariant,
            psi: None,
            shear: None,
            normalized: None,
            genuine: false,
            residual: Some(core),
        });
    }
    let first_order = psi.d_param(SHIFT_PARAM).eval_param(SHIFT_PARAM, &Coeff::zero());
    let first_order = HoloPoly::new(first_order).expect("holomorphic");
    let shear = first_order.integrate(v);
    let normalized = p - &shear.twice_real_part();
    let genuine = shift(&normalized, v) == normalized;
    Ok(TranslationVerdict {
        axis,
        status: TranslationStatus::InvariantModPluriharmonic,
        psi: Some(psi),
        shear: Some(shear),
        normalized: Some(normalized),
        genuine,
        residual: None,
    })
}

pub fn translation_directions(p: &RPoly) -> Result<Vec<TranslationVerdict>, SymmetryError> {
    [Var::Z1, Var::Z2].into_iter().map(|v| translation_direction(p, v)).collect()
}

/// `P(ζ^a z1, ζ^b z2) = P` for `ζ` a primitive `n`-th root of unity.
pub fn zn_rotation_check(p: &RPoly, a: i64, b: i64, n: u64) -> Result<bool, SymmetryError> {
    let w = Weight::cyclic(a, b, n).map_err(|_| SymmetryError::ZeroOrder)?;
    Ok(p.monomials().all(|m| is_balanced(m, &w)))
}

fn holomorphic_monomials(bound: u32) -> Vec<Monomial> {
    let mut out: Vec<Monomial> =
        (0..=bound).flat_map(|d| (0..=d).map(move |a| Monomial::new(a, 0, d - a, 0))).collect();
    out.sort();
    out
}

/// Basis of the real vector space of fields `X1 d1 + X2 d2 + i beta d3`
/// with `deg X_l <= bound` and `2 Re(X1 P_z1 + X2 P_z2)` pluriharmonic.
/// A pluriharmonic remainder `2 Re psi` is absorbed by the `z3` component
/// `-psi`, so each field is tangent to the boundary. The canonical field
/// `(0, 0, i)` comes first.
pub fn tangent_fields(p: &RPoly, bound: u32) -> Result<Vec<VField>, SymmetryError> {
    p.check_real()?;
    p.check_no_params()?;
    let monomials = holomorphic_monomials(bound);
    let mut unknowns = Vec::new();
    for v in [Var::Z1, Var::Z2] {
        for m in &monomials {
            for u in [Coeff::one(), imag_unit()] {
                let comp = HoloPoly::new(RPoly::term(m.clone(), u)).expect("holomorphic");
                unknowns.push(match v {
                    Var::Z1 => VField::new(comp, HoloPoly::zero(), Coeff::zero()),
                    Var::Z2 => VField::new(HoloPoly::zero(), comp, Coeff::zero()),
                });
            }
        }
    }
    let columns: Vec<RPoly> =
        unknowns.par_iter().map(|x| core_of(&x.derivation(p).twice_real_part())).collect();
    let mut row_keys: Vec<&Monomial> = columns.iter().flat_map(|c| c.monomials()).collect();
    row_keys.sort();
    row_keys.dedup();
    let mut rows = Vec::with_capacity(2 * row_keys.len());
    for m in &row_keys {
        rows.push(columns.iter().map(|c| c.coeff(m).re).collect::<Vec<Rational>>());
        rows.push(columns.iter().map(|c| c.coeff(m).im).collect::<Vec<Rational>>());
    }
    let mut out = vec![VField::canonical()];
    for v in linalg::nullspace(&rows, unknowns.len()) {
        let mut field = VField::zero();
        for (x, c) in unknowns.iter().zip(v) {
            if !c.is_zero() {
                field = field.add(&x.scale(&real(c)));
            }
        }
        out.push(field);
    }
    Ok(out)
}

/// Normal forms for three commuting one-parameter symmetries besides `z3`-translation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThreeDimForm {
    /// `P(Im z1, Im z2)`
    Tube,
    /// `P(Im z_l, |z_m|²)`
    TubeReinhardt,
    /// `P(|z1|², |z2|²)`
    Reinhardt,
}

/// Normal forms for a single one-parameter symmetry besides `z3`-translation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OneParameterForm {
    /// `(z_l + s)`: `P` independent of `Re z_l`.
    Translation,
    /// `e^{i a s} z_l`: `P` balanced in `z_l`.
    SingleRotation,
    /// `(z_l + s, e^{i a s} z_m)`
    TranslationRotation,
    /// `(e^{i a s} z1, e^{i b s} z2)`, `a b != 0`.
    JointRotation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZnRotation {
    pub a: i64,
    pub b: i64,
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub finite_type_necessary: FiniteTypeVerdict,
    pub torus: WeightKernel,
    pub translations: Vec<TranslationVerdict>,
    /// Finite rotations of order at most 6 outside the rotation torus.
    pub zn_rotations: Vec<ZnRotation>,
    pub three_dim_form: Option<ThreeDimForm>,
    pub three_dim_matches: Vec<ThreeDimForm>,
    pub one_parameter_form: Option<OneParameterForm>,
    pub one_parameter_matches: Vec<OneParameterForm>,
    /// `P` after the shears making its translation symmetries apparent.
    pub normal_form: RPoly,
    pub notes: Vec<String>,
}

/// Coefficients of `P(i y e_l + z_m e_m)` as a polynomial in `y`, all
/// balanced in `z_m` (the constant one after removing pluriharmonic terms).
fn im_expansion_balanced(normalized: &RPoly, l: Var) -> bool {
    let y = RPoly::param(LINE_PARAM).scale(&imag_unit());
    let restricted = restrict(normalized, l, y);
    let m = l.other();
    let mut by_power: BTreeMap<u32, RPoly> = Default::default();
    for (mono, c) in restricted.terms() {
        let stripped = Monomial::new(mono.j1, mono.k1, mono.j2, mono.k2);
        by_power.entry(mono.param_exp(LINE_PARAM)).or_default().add_term(stripped, c.clone());
    }
    by_power.iter().all(|(j, cj)| {
        let cj = if *j == 0 { core_of(cj) } else { cj.clone() };
        let balanced = cj.monomials().all(|mono| balanced_in_variable(mono, m));
        balanced
    })
}

fn discrete_rotations(core: &RPoly, torus: &WeightKernel) -> Vec<ZnRotation> {
    let mut out = Vec::new();
    if torus.rank == 2 {
        return out;
    }
    for n in 2..=6u64 {
        let ni = n as i64;
        for a in 0..ni {
            for b in 0..ni {
                if (a, b) == (0, 0) || a.gcd(&b).gcd(&ni) != 1 {
                    continue;
                }
                let in_torus = match torus.kernel_basis.as_slice() {
                    [(al, be)] => (a * be - b * al) % ni == 0,
                    _ => false,
                };
                if !in_torus && zn_rotation_check(core, a, b, n).unwrap_or(false) {
                    out.push(ZnRotation { a, b, n });
                }
            }
        }
    }
    out
}

pub fn classify(d: &ModelDomain) -> ClassificationReport {
    let p = &d.p;
    let ft = finite_type_necessary(p);
    let core = core_of(p);
    let torus = torus_weights(&core);
    let translations = translation_directions(p).expect("validated domain");
    let mut notes = Vec::new();
    if !ft.passed {
        notes.push(format!("degenerate: {}", ft.summary()));
        return ClassificationReport {
            finite_type_necessary: ft,
            torus,
            translations,
            zn_rotations: Vec::new(),
            three_dim_form: None,
            three_dim_matches: Vec::new(),
            one_parameter_form: None,
            one_parameter_matches: Vec::new(),
            normal_form: core,
            notes,
        };
    }

    let genuine: Vec<(Var, &TranslationVerdict)> =
        [Var::Z1, Var::Z2].into_iter().zip(&translations).filter(|(_, t)| t.genuine).collect();

    // shear away Re z1 then Re z2 where possible
    let mut normal_form = core.clone();
    for (v, _) in &genuine {
        if let Ok(t) = translation_direction(&normal_form, *v) {
            if t.genuine {
                normal_form = t.normalized.expect("present when genuine");
            }
        }
    }

    let mut three = Vec::new();
    let both_free = [Var::Z1, Var::Z2].into_iter().all(|v| shift(&normal_form, v) == normal_form);
    if genuine.len() == 2 && both_free {
        three.push(ThreeDimForm::Tube);
    }
    if genuine.iter().any(|(v, t)| im_expansion_balanced(t.normalized.as_ref().unwrap(), *v)) {
        three.push(ThreeDimForm::TubeReinhardt);
    }
    if is_extremely_balanced(&core) {
        three.push(ThreeDimForm::Reinhardt);
    }

    let flows = admissible_flow_types(p).unwrap_or_default();
    let admits = |kind: &str| flows.iter().any(|k| k.kind == kind && k.admissible);
    let mut one = Vec::new();
    if admits("type2b") {
        one.push(OneParameterForm::Translation);
    }
    if admits("type1") {
        one.push(OneParameterForm::SingleRotation);
    }
    if admits("type2a") {
        one.push(OneParameterForm::TranslationRotation);
    }
    if admits("type4") {
        one.push(OneParameterForm::JointRotation);
    }
    let priority = [
        OneParameterForm::TranslationRotation,
        OneParameterForm::JointRotation,
        OneParameterForm::Translation,
        OneParameterForm::SingleRotation,
    ];
    let one_parameter_form = priority.into_iter().find(|f| one.contains(f));
    let three_dim_form = three.first().copied();

    if three.len() > 1 {
        notes.push(format!(
            "several three-dimensional normal forms match ({}); reporting the first of tube, tube-Reinhardt, Reinhardt",
            three.iter().map(|f| format!("{f:?}")).collect::<Vec<_>>().join(", ")
        ));
    }
    let mixed = core.split_parts().m;
    if three.contains(&ThreeDimForm::Reinhardt) {
        notes.push("P extremely balanced: a two-torus of rotations acts, symmetry dimension at least 3".into());
    } else if one_parameter_form == Some(OneParameterForm::JointRotation) && !mixed.is_zero() {
        notes.push("mixed part nonzero and not extremely balanced: rotations form a single circle".into());
    }
    if let Some(Certificate::Tangent { field, .. }) =
        flows.iter().find(|k| k.kind == "type4" && k.admissible).map(|k| &k.certificate)
    {
        notes.push(format!("joint rotation generator {field}"));
    }
    if three.is_empty() && one.is_empty() {
        notes.push("no symmetry beyond z3-translation detected".into());
    }

    ClassificationReport {
        finite_type_necessary: ft,
        zn_rotations: discrete_rotations(&core, &torus),
        torus,
        translations,
        three_dim_form,
        three_dim_matches: three,
        one_parameter_form,
        one_parameter_matches: one,
        normal_form,
        notes,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapVerdict {
    pub passed: bool,
    /// `P o 'g + 2 Re phi - mu P`.
    pub residual: RPoly,
    #[serde(with = "crate::coeff::serde_coeff")]
    pub jacobian: Coeff,
    pub reasons: Vec<String>,
}

/// Checks that `(z', z3) -> ('g(z'), mu z3 + phi(z'))` preserves the domain.
pub fn verify_model_map(d: &ModelDomain, g: &ModelMap) -> MapVerdict {
    verify_model_map_bounded(d, g, usize::MAX).expect("unbounded substitution")
}

pub fn verify_model_map_bounded(d: &ModelDomain, g: &ModelMap, max_terms: usize) -> Result<MapVerdict, PolyError> {
    let p = &d.p;
    let mut reasons = Vec::new();
    let jac = g.plane.jacobian_det();
    let jacobian = if g.plane.has_constant_jacobian() { jac.constant_term() } else { Coeff::zero() };
    if !g.plane.has_constant_jacobian() {
        reasons.push(format!("Jacobian determinant {jac} is not constant"));
    } else if jacobian.is_zero() {
        reasons.push("Jacobian determinant vanishes".into());
    }
    if !g.mu.is_positive() {
        reasons.push("mu must be positive".into());
    }
    let (q, _) = pluriharmonic_split(p).expect("validated domain");
    if q.is_zero() && g.plane.fixes_origin() && !g.mu.is_one() {
        reasons.push("mu must be 1 when P has no pluriharmonic terms and the map fixes the origin".into());
    }
    let pulled = p.substitute_bounded(&g.plane, max_terms)?;
    let residual = &(&pulled + &g.phi.twice_real_part()) - &p.scale(&real(g.mu.clone()));
    if !residual.is_zero() {
        reasons.push(format!("residual {residual}"));
    }
    Ok(MapVerdict { passed: reasons.is_empty(), residual, jacobian, reasons })
}
