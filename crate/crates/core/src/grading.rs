//! Weights, signatures and holomorphic quotients of monomials, and the
//! balancedness predicates built on them.
//!
//! For a weight `Θ = (θ1, θ2)` and a monomial `z1^j1 cz1^k1 z2^j2 cz2^k2`:
//!
//! * `wt  = (j1 + k1) θ1 + (j2 + k2) θ2`
//! * `sgn = (j1 - k1) θ1 + (j2 - k2) θ2`
//! * `hq  = (j1 θ1 + j2 θ2) / (k1 θ1 + k2 θ2)`, kept as an exact ratio rather
//!   than its logarithm. A balanced monomial has ratio 1, and "average of the
//!   holomorphic quotients is zero" becomes "product of the ratios is one".

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::coeff::{fmt_rational, int, Rational};
use crate::poly::{Monomial, RPoly, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradingError {
    #[error("grade of a constant monomial is undefined")]
    ConstantMonomial,
    #[error("polynomial is constant")]
    ConstantPolynomial,
    #[error("weights must be positive, got ({0}, {1})")]
    NonPositiveWeight(String, String),
    #[error("polynomial is not weighted homogeneous")]
    NotHomogeneous,
    #[error("cyclic group order must be at least 1")]
    ZeroOrder,
}

/// The group `A` a weight is taken with respect to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "order", rename_all = "snake_case")]
pub enum Group {
    /// `R` or the circle: balanced means signature zero.
    Circle,
    /// Balanced means integral signature.
    Integers,
    /// `Z_N`, with `Θ = (a/N, b/N)`.
    Cyclic(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Weight {
    #[serde(with = "crate::coeff::serde_rational")]
    pub theta1: Rational,
    #[serde(with = "crate::coeff::serde_rational")]
    pub theta2: Rational,
    pub group: Group,
}

impl Weight {
    pub fn new(theta1: Rational, theta2: Rational, group: Group) -> Self {
        Weight { theta1, theta2, group }
    }

    pub fn circle(theta1: Rational, theta2: Rational) -> Self {
        Weight::new(theta1, theta2, Group::Circle)
    }

    pub fn integers(theta1: Rational, theta2: Rational) -> Self {
        Weight::new(theta1, theta2, Group::Integers)
    }

    /// Shorthand for integer circle weights.
    pub fn ints(theta1: i64, theta2: i64) -> Self {
        Weight::circle(int(theta1), int(theta2))
    }

    /// Rotation by `(ζ^a, ζ^b)` with `ζ` a primitive `n`-th root of unity.
    pub fn cyclic(a: i64, b: i64, n: u64) -> Result<Self, GradingError> {
        if n == 0 {
            return Err(GradingError::ZeroOrder);
        }
        let n_big = BigInt::from(n);
        Ok(Weight::new(
            Rational::new(BigInt::from(a), n_big.clone()),
            Rational::new(BigInt::from(b), n_big),
            Group::Cyclic(n),
        ))
    }

    /// `(a, b, N)` for cyclic weights.
    pub fn cyclic_data(&self) -> Option<(BigInt, BigInt, u64)> {
        match self.group {
            Group::Cyclic(n) => {
                let n_rat = int(n as i64);
                let a = (&self.theta1 * &n_rat).to_integer();
                let b = (&self.theta2 * &n_rat).to_integer();
                Some((a, b, n))
            }
            _ => None,
        }
    }

    pub fn with_group(&self, group: Group) -> Weight {
        Weight { group, ..self.clone() }
    }

    fn theta(&self, v: Var) -> &Rational {
        match v {
            Var::Z1 => &self.theta1,
            Var::Z2 => &self.theta2,
        }
    }

    fn is_positive(&self) -> bool {
        self.theta1.is_positive() && self.theta2.is_positive()
    }
}

/// Holomorphic quotient as an exact ratio.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Hq {
    MinusInfinity,
    Finite(Rational),
    PlusInfinity,
    /// Weights of mixed sign, or a vanishing weighted degree on an impure monomial.
    Undefined,
}

impl Hq {
    pub fn inverse(&self) -> Hq {
        match self {
            Hq::MinusInfinity => Hq::PlusInfinity,
            Hq::PlusInfinity => Hq::MinusInfinity,
            Hq::Finite(r) => Hq::Finite(r.recip()),
            Hq::Undefined => Hq::Undefined,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Hq::MinusInfinity | Hq::PlusInfinity)
    }
}

impl fmt::Display for Hq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hq::MinusInfinity => f.write_str("-inf"),
            Hq::PlusInfinity => f.write_str("+inf"),
            Hq::Finite(r) => f.write_str(&fmt_rational(r)),
            Hq::Undefined => f.write_str("undefined"),
        }
    }
}

impl Serialize for Hq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Grade {
    #[serde(with = "crate::coeff::serde_rational")]
    pub wt: Rational,
    #[serde(with = "crate::coeff::serde_rational")]
    pub sgn: Rational,
    pub hq: Hq,
}

/// Weighted degree of the holomorphic factor `z1^j1 z2^j2`.
pub fn holomorphic_weight(m: &Monomial, w: &Weight) -> Rational {
    int(m.j1 as i64) * &w.theta1 + int(m.j2 as i64) * &w.theta2
}

/// Weighted degree of the anti-holomorphic factor `cz1^k1 cz2^k2`.
pub fn antiholomorphic_weight(m: &Monomial, w: &Weight) -> Rational {
    int(m.k1 as i64) * &w.theta1 + int(m.k2 as i64) * &w.theta2
}

pub fn weight_of(m: &Monomial, w: &Weight) -> Rational {
    holomorphic_weight(m, w) + antiholomorphic_weight(m, w)
}

pub fn signature_of(m: &Monomial, w: &Weight) -> Rational {
    holomorphic_weight(m, w) - antiholomorphic_weight(m, w)
}

pub fn hq_of(m: &Monomial, w: &Weight) -> Hq {
    if m.is_constant() {
        return Hq::Undefined;
    }
    if m.is_holomorphic() {
        return Hq::PlusInfinity;
    }
    if m.is_antiholomorphic() {
        return Hq::MinusInfinity;
    }
    let hol = holomorphic_weight(m, w);
    let anti = antiholomorphic_weight(m, w);
    if hol.is_positive() && anti.is_positive() {
        Hq::Finite(hol / anti)
    } else {
        Hq::Undefined
    }
}

pub fn grade(m: &Monomial, w: &Weight) -> Result<Grade, GradingError> {
    if m.is_constant() {
        return Err(GradingError::ConstantMonomial);
    }
    Ok(Grade { wt: weight_of(m, w), sgn: signature_of(m, w), hq: hq_of(m, w) })
}

fn expansion_by<F: Fn(&Monomial) -> Rational>(p: &RPoly, key: F) -> Vec<(Rational, RPoly)> {
    let mut parts: BTreeMap<Rational, RPoly> = BTreeMap::new();
    for (m, c) in p.terms() {
        parts.entry(key(m)).or_default().add_term(m.clone(), c.clone());
    }
    parts.into_iter().collect()
}

/// Weighted-homogeneous parts of `p`, by increasing weight.
pub fn weighted_expansion(p: &RPoly, w: &Weight) -> Vec<(Rational, RPoly)> {
    expansion_by(p, |m| weight_of(m, w))
}

/// Signature-homogeneous parts of `p`, by increasing signature.
pub fn signature_expansion(p: &RPoly, w: &Weight) -> Vec<(Rational, RPoly)> {
    expansion_by(p, |m| signature_of(m, w))
}

pub fn is_balanced(m: &Monomial, w: &Weight) -> bool {
    match w.group {
        Group::Circle => signature_of(m, w).is_zero(),
        Group::Integers => signature_of(m, w).is_integer(),
        Group::Cyclic(n) => {
            let (a, b, _) = w.cyclic_data().expect("cyclic weight");
            let (d1, d2) = m.phase();
            let total = a * BigInt::from(d1) + b * BigInt::from(d2);
            total.mod_floor(&BigInt::from(n)).is_zero()
        }
    }
}

/// `j_l == k_l`: invariant under rotating `z_l` alone.
pub fn balanced_in_variable(m: &Monomial, v: Var) -> bool {
    m.hol(v) == m.antihol(v)
}

pub fn is_extremely_balanced(p: &RPoly) -> bool {
    p.monomials()
        .all(|m| balanced_in_variable(m, Var::Z1) && balanced_in_variable(m, Var::Z2))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalanceClass {
    /// Every monomial balanced with respect to `(Θ, A)`.
    pub strictly_balanced: bool,
    /// Every monomial balanced in `z1` and in `z2` separately.
    pub extremely_balanced: bool,
    /// Every monomial pure.
    pub extremely_imbalanced: bool,
    /// No pure monomials or constants, and the holomorphic quotients multiply to one.
    pub diversely_balanced: bool,
}

pub fn balance_class(p: &RPoly, w: &Weight) -> Result<BalanceClass, GradingError> {
    if p.is_constant() {
        return Err(GradingError::ConstantPolynomial);
    }
    let strictly_balanced = p.monomials().all(|m| is_balanced(m, w));
    let extremely_balanced = is_extremely_balanced(p);
    let extremely_imbalanced = p.monomials().all(Monomial::is_pure);
    let diversely_balanced = p.monomials().all(|m| !m.is_pure()) && {
        let mut product = Some(Rational::one());
        for m in p.monomials() {
            product = match (product, hq_of(m, w)) {
                (Some(acc), Hq::Finite(r)) => Some(acc * r),
                _ => None,
            };
        }
        product.is_some_and(|r| r.is_one())
    };
    Ok(BalanceClass { strictly_balanced, extremely_balanced, extremely_imbalanced, diversely_balanced })
}

/// All holomorphic quotients of monomials of weight `total` (constants excluded).
pub fn s_w_set(total: &Rational, w: &Weight) -> Result<BTreeSet<Hq>, GradingError> {
    if !w.is_positive() {
        return Err(GradingError::NonPositiveWeight(fmt_rational(&w.theta1), fmt_rational(&w.theta2)));
    }
    let mut out = BTreeSet::new();
    if !total.is_positive() {
        return Ok(out);
    }
    let max_n1 = (total / w.theta(Var::Z1)).floor().to_integer();
    let max_n1 = max_n1.to_u32().expect("weight enumeration bound fits in u32");
    for n1 in 0..=max_n1 {
        let rest = total - int(n1 as i64) * &w.theta1;
        let n2 = &rest / &w.theta2;
        if !n2.is_integer() || n2.is_negative() {
            continue;
        }
        let n2 = n2.to_integer().to_u32().expect("weight enumeration bound fits in u32");
        for j1 in 0..=n1 {
            for j2 in 0..=n2 {
                let m = Monomial::new(j1, n1 - j1, j2, n2 - j2);
                out.insert(hq_of(&m, w));
            }
        }
    }
    Ok(out)
}

/// Weighted homogeneous of weight `W` with every value of `S_W` realised.
pub fn completely_diversely_balanced(p: &RPoly, w: &Weight) -> Result<bool, GradingError> {
    if !w.is_positive() {
        return Err(GradingError::NonPositiveWeight(fmt_rational(&w.theta1), fmt_rational(&w.theta2)));
    }
    let parts = weighted_expansion(p, w);
    let [(total, _)] = parts.as_slice() else {
        return Err(GradingError::NotHomogeneous);
    };
    if p.is_constant() {
        return Err(GradingError::ConstantPolynomial);
    }
    let present: BTreeSet<Hq> = p.monomials().map(|m| hq_of(m, w)).collect();
    Ok(present == s_w_set(total, w)?)
}
