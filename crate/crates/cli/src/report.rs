//! Report records for each command, with a human-readable rendering.

use std::fmt::{self, Write};

use modelkit_core::coeff::{fmt_coeff, fmt_rational};
use modelkit_core::decomposition::HoloDecomposition;
use modelkit_core::flows::{Certificate, FlowSpec, Invariance, KindVerdict, PairVerdict, VField};
use modelkit_core::grading::{BalanceClass, Group, Weight};
use modelkit_core::poly::{ModelMap, RPoly, SplitParts};
use modelkit_core::symmetry::{
    ClassificationReport, FiniteTypeVerdict, MapVerdict, TranslationStatus, TranslationVerdict, WeightKernel,
};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct WeightSummary {
    pub weight: Weight,
    /// From `--weight` or from the rotation kernel.
    pub source: &'static str,
    pub balance: BalanceClass,
    /// `None` when `P` is not weighted homogeneous or the weight is not positive.
    pub completely_diversely_balanced: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    pub p: RPoly,
    pub finite_type: FiniteTypeVerdict,
    pub parts: SplitParts,
    pub extremely_balanced: bool,
    pub torus: WeightKernel,
    pub weights: Vec<WeightSummary>,
}

#[derive(Debug, Serialize)]
pub struct DecomposeReport {
    pub p: RPoly,
    pub decomposition: HoloDecomposition,
    pub inertia: (usize, usize),
    pub reconstructed: bool,
}

#[derive(Debug, Serialize)]
pub struct SymmetriesReport {
    pub p: RPoly,
    pub torus: WeightKernel,
    pub translations: Vec<TranslationVerdict>,
    pub max_degree: u32,
    pub tangent_fields: Vec<VField>,
    pub flow_types: Vec<KindVerdict>,
}

#[derive(Debug, Serialize)]
pub struct MapCheck {
    pub map: ModelMap,
    pub verdict: MapVerdict,
}

#[derive(Debug, Serialize)]
pub struct FlowCheck {
    pub flow: FlowSpec,
    pub commutes_with_z3_translation: bool,
    pub invariance: Invariance,
    /// Rotation parameters are purely imaginary.
    pub unitary: bool,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct PairCheck {
    pub first: usize,
    pub second: usize,
    pub verdict: PairVerdict,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub p: RPoly,
    pub maps: Vec<MapCheck>,
    pub flows: Vec<FlowCheck>,
    pub pairs: Vec<PairCheck>,
    pub passed: bool,
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn group_name(g: &Group) -> String {
    match g {
        Group::Circle => "circle".into(),
        Group::Integers => "integers".into(),
        Group::Cyclic(n) => format!("Z{n}"),
    }
}

/// The serialized name of a unit enum variant.
fn serde_name<T: Serialize>(x: &T) -> String {
    match serde_json::to_value(x) {
        Ok(serde_json::Value::String(s)) => s,
        _ => String::new(),
    }
}

fn kernel_line(k: &WeightKernel) -> String {
    let basis: Vec<String> = k.kernel_basis.iter().map(|(a, b)| format!("({a}, {b})")).collect();
    if basis.is_empty() {
        format!("torus rank {}", k.rank)
    } else {
        format!("torus rank {}, weights {}", k.rank, basis.join(", "))
    }
}

fn finite_type_line(v: &FiniteTypeVerdict) -> String {
    if v.passed {
        format!("finite type: {}", v.note)
    } else {
        format!("finite type: obstructed: {}", v.summary())
    }
}

fn translation_line(t: &TranslationVerdict) -> String {
    let status = match t.status {
        TranslationStatus::Invariant => "invariant".to_string(),
        TranslationStatus::InvariantModPluriharmonic => format!(
            "invariant modulo pluriharmonic terms, shear {}, normalized P = {}",
            t.shear.as_ref().map(ToString::to_string).unwrap_or_default(),
            t.normalized.as_ref().map(ToString::to_string).unwrap_or_default()
        ),
        TranslationStatus::NotInvariant => "not invariant".to_string(),
    };
    format!("translation along {}: {status}", t.axis)
}

fn certificate_text(c: &Certificate) -> String {
    match c {
        Certificate::Tangent { field, psi: None } => format!("tangent field {field}"),
        Certificate::Tangent { field, psi: Some(psi) } => format!("tangent field {field}, z3 shear {psi}"),
        Certificate::BoundaryVariety => "its orbits would lie in a complex curve of the boundary".into(),
        Certificate::PureMonomial { witness } => format!("pure term {witness} cannot be preserved"),
        Certificate::NoSolution { detail } => detail.clone(),
    }
}

fn invariance_text(i: &Invariance) -> String {
    match i {
        Invariance::Invariant => "invariant".into(),
        Invariance::InvariantModPluriharmonic { psi } => format!("invariant modulo 2 Re({psi})"),
        Invariance::Violated { residual } => format!("violated, residual {residual}"),
    }
}

impl fmt::Display for AnalyzeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "P = {}", self.p)?;
        writeln!(f, "{}", finite_type_line(&self.finite_type))?;
        writeln!(f, "constant part: {}", self.parts.constant)?;
        writeln!(f, "z1 part: {}", self.parts.p1)?;
        writeln!(f, "mixed part: {}", self.parts.m)?;
        writeln!(f, "z2 part: {}", self.parts.p2)?;
        writeln!(f, "extremely balanced: {}", yes(self.extremely_balanced))?;
        writeln!(f, "{}", kernel_line(&self.torus))?;
        for w in &self.weights {
            let b = &w.balance;
            let cdb = w.completely_diversely_balanced.map_or("n/a", yes);
            writeln!(
                f,
                "weight ({}, {}) {} [{}]: strictly balanced {}, extremely imbalanced {}, diversely balanced {}, completely diversely balanced {}",
                fmt_rational(&w.weight.theta1),
                fmt_rational(&w.weight.theta2),
                group_name(&w.weight.group),
                w.source,
                yes(b.strictly_balanced),
                yes(b.extremely_imbalanced),
                yes(b.diversely_balanced),
                cdb
            )?;
        }
        Ok(())
    }
}

impl fmt::Display for DecomposeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "P = {}", self.p)?;
        write!(f, "{}", self.decomposition)?;
        writeln!(f, "inertia: {} positive, {} negative", self.inertia.0, self.inertia.1)?;
        writeln!(f, "reconstruction: {}", if self.reconstructed { "exact" } else { "FAILED" })
    }
}

impl fmt::Display for SymmetriesReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "P = {}", self.p)?;
        writeln!(f, "{}", kernel_line(&self.torus))?;
        for t in &self.translations {
            writeln!(f, "{}", translation_line(t))?;
        }
        writeln!(f, "tangent fields up to degree {}: {}", self.max_degree, self.tangent_fields.len())?;
        for x in &self.tangent_fields {
            writeln!(f, "  {x}")?;
        }
        for v in &self.flow_types {
            let axis = v.axis.as_ref().map(|a| format!(" along {a}")).unwrap_or_default();
            let verdict = if v.admissible { "admissible" } else { "excluded" };
            writeln!(f, "{}{axis}: {verdict}: {}", v.kind, certificate_text(&v.certificate))?;
        }
        Ok(())
    }
}

/// Human rendering of a classification report.
pub fn render_classification(r: &ClassificationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", finite_type_line(&r.finite_type_necessary));
    let _ = writeln!(s, "{}", kernel_line(&r.torus));
    for t in &r.translations {
        let _ = writeln!(s, "{}", translation_line(t));
    }
    let rotations: Vec<String> = r.zn_rotations.iter().map(|z| format!("({}, {}) mod {}", z.a, z.b, z.n)).collect();
    if !rotations.is_empty() {
        let _ = writeln!(s, "finite rotations: {}", rotations.join(", "));
    }
    let three = r.three_dim_form.as_ref().map_or("none".into(), serde_name);
    let _ = writeln!(s, "three-dimensional symmetry form: {three}");
    let one = r.one_parameter_form.as_ref().map_or("none".into(), serde_name);
    let _ = writeln!(s, "one-parameter symmetry form: {one}");
    let _ = writeln!(s, "normal form: {}", r.normal_form);
    for n in &r.notes {
        let _ = writeln!(s, "note: {n}");
    }
    s
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "P = {}", self.p)?;
        for (i, m) in self.maps.iter().enumerate() {
            let v = &m.verdict;
            writeln!(
                f,
                "map {}: ({}, {}), mu = {}, phi = {}: {}",
                i + 1,
                m.map.plane.f1,
                m.map.plane.f2,
                fmt_rational(&m.map.mu),
                m.map.phi,
                if v.passed { "passed" } else { "FAILED" }
            )?;
            writeln!(f, "  jacobian {}, residual {}", fmt_coeff(&v.jacobian), v.residual)?;
            for r in &v.reasons {
                writeln!(f, "  {r}")?;
            }
        }
        for (i, c) in self.flows.iter().enumerate() {
            writeln!(f, "flow {}: {}: {}", i + 1, c.flow, if c.passed { "passed" } else { "FAILED" })?;
            writeln!(f, "  commutes with z3 translation: {}", yes(c.commutes_with_z3_translation))?;
            writeln!(f, "  invariance: {}", invariance_text(&c.invariance))?;
            writeln!(f, "  purely imaginary rotation parameters: {}", yes(c.unitary))?;
        }
        for p in &self.pairs {
            let v = &p.verdict;
            writeln!(
                f,
                "flows {} and {}: commuting {}, admissible pair {}, possible for a model domain {}",
                p.first + 1,
                p.second + 1,
                yes(v.commuting),
                yes(v.ga2_admissible),
                yes(v.model_admissible)
            )?;
        }
        writeln!(f, "{}", if self.passed { "verification passed" } else { "verification FAILED" })
    }
}
