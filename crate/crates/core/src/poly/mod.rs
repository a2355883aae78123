//! Sparse polynomials over Q(i) in the alphabet `z1, cz1, z2, cz2` (a variable
//! and its conjugate) with optional formal real parameters.
//!
//! Every value is kept in canonical form: no zero coefficients, no zero
//! exponents in the parameter map, terms ordered by [`Monomial`]'s graded
//! lexicographic order. Equality of polynomials is therefore structural.

mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Deref, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::coeff::{self, c_int, fmt_coeff, imag_unit, int, Coeff, Rational};

pub use parse::{parse, parse_with_limit, ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("polynomial is not holomorphic: {0}")]
    NotHolomorphic(String),
    #[error("polynomial is not real-valued: {0}")]
    NotReal(String),
    #[error("polynomial contains formal parameters: {0}")]
    HasParameters(String),
    #[error("term count exceeded the limit of {limit}")]
    TermLimit { limit: usize },
}

/// One of the two complex coordinates of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Var {
    Z1,
    Z2,
}

impl Var {
    pub fn other(self) -> Var {
        match self {
            Var::Z1 => Var::Z2,
            Var::Z2 => Var::Z1,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Var::Z1 => 1,
            Var::Z2 => 2,
        }
    }

    pub fn from_index(l: usize) -> Option<Var> {
        match l {
            1 => Some(Var::Z1),
            2 => Some(Var::Z2),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z{}", self.index())
    }
}

/// Exponents of `z1^j1 cz1^k1 z2^j2 cz2^k2` times a product of parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub j1: u32,
    pub k1: u32,
    pub j2: u32,
    pub k2: u32,
    params: BTreeMap<String, u32>,
}

impl Monomial {
    pub fn new(j1: u32, k1: u32, j2: u32, k2: u32) -> Self {
        Monomial { j1, k1, j2, k2, params: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn param(name: &str, exp: u32) -> Self {
        Monomial::one().with_param(name, exp)
    }

    pub fn with_param(mut self, name: &str, exp: u32) -> Self {
        if exp > 0 {
            *self.params.entry(name.to_string()).or_insert(0) += exp;
        }
        self
    }

    pub fn params(&self) -> &BTreeMap<String, u32> {
        &self.params
    }

    pub fn param_exp(&self, name: &str) -> u32 {
        self.params.get(name).copied().unwrap_or(0)
    }

    pub fn has_params(&self) -> bool {
        !self.params.is_empty()
    }

    /// Same z-exponents, parameters dropped.
    pub fn z_part(&self) -> Monomial {
        Monomial::new(self.j1, self.k1, self.j2, self.k2)
    }

    /// Parameter part alone.
    pub fn param_part(&self) -> Monomial {
        Monomial { params: self.params.clone(), ..Monomial::one() }
    }

    pub fn hol(&self, v: Var) -> u32 {
        match v {
            Var::Z1 => self.j1,
            Var::Z2 => self.j2,
        }
    }

    pub fn antihol(&self, v: Var) -> u32 {
        match v {
            Var::Z1 => self.k1,
            Var::Z2 => self.k2,
        }
    }

    /// Degree in the z-variables only.
    pub fn degree(&self) -> u32 {
        self.j1 + self.k1 + self.j2 + self.k2
    }

    pub fn total_degree(&self) -> u32 {
        self.degree() + self.params.values().sum::<u32>()
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    pub fn is_holomorphic(&self) -> bool {
        self.k1 == 0 && self.k2 == 0
    }

    pub fn is_antiholomorphic(&self) -> bool {
        self.j1 == 0 && self.j2 == 0
    }

    /// Holomorphic or anti-holomorphic (constants count as pure).
    pub fn is_pure(&self) -> bool {
        self.is_holomorphic() || self.is_antiholomorphic()
    }

    /// Involves both `z1` and `z2`.
    pub fn is_mixed(&self) -> bool {
        self.j1 + self.k1 > 0 && self.j2 + self.k2 > 0
    }

    pub fn involves(&self, v: Var) -> bool {
        self.hol(v) + self.antihol(v) > 0
    }

    pub fn conjugate(&self) -> Monomial {
        Monomial { j1: self.k1, k1: self.j1, j2: self.k2, k2: self.j2, params: self.params.clone() }
    }

    /// `(j1 - k1, j2 - k2)`.
    pub fn phase(&self) -> (i64, i64) {
        (self.j1 as i64 - self.k1 as i64, self.j2 as i64 - self.k2 as i64)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut params = self.params.clone();
        for (name, e) in &other.params {
            *params.entry(name.clone()).or_insert(0) += e;
        }
        Monomial {
            j1: self.j1 + other.j1,
            k1: self.k1 + other.k1,
            j2: self.j2 + other.j2,
            k2: self.k2 + other.k2,
            params,
        }
    }

    fn key(&self) -> (u32, u32, u32, u32, u32) {
        (self.total_degree(), self.j1, self.k1, self.j2, self.k2)
    }

    fn render(&self) -> String {
        let mut factors = Vec::new();
        let mut push = |name: &str, e: u32| match e {
            0 => {}
            1 => factors.push(name.to_string()),
            _ => factors.push(format!("{name}^{e}")),
        };
        push("z1", self.j1);
        push("cz1", self.k1);
        push("z2", self.j2);
        push("cz2", self.k2);
        for (name, e) in &self.params {
            push(name, *e);
        }
        factors.join("*")
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key()).then_with(|| self.params.cmp(&other.params))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.render();
        if r.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&r)
        }
    }
}

/// Real-analytic polynomial in `z1, cz1, z2, cz2` (and formal real parameters).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RPoly {
    terms: BTreeMap<Monomial, Coeff>,
}

/// `P = constant + p1 + m + p2` by variable support.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitParts {
    pub constant: RPoly,
    pub p1: RPoly,
    pub m: RPoly,
    pub p2: RPoly,
}

impl RPoly {
    pub fn zero() -> Self {
        RPoly::default()
    }

    pub fn one() -> Self {
        RPoly::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        RPoly::term(Monomial::one(), c)
    }

    pub fn rational(r: Rational) -> Self {
        RPoly::constant(coeff::real(r))
    }

    pub fn term(m: Monomial, c: Coeff) -> Self {
        let mut p = RPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn monomial(m: Monomial) -> Self {
        RPoly::term(m, Coeff::one())
    }

    pub fn z(v: Var) -> Self {
        match v {
            Var::Z1 => RPoly::monomial(Monomial::new(1, 0, 0, 0)),
            Var::Z2 => RPoly::monomial(Monomial::new(0, 0, 1, 0)),
        }
    }

    pub fn cz(v: Var) -> Self {
        RPoly::z(v).conjugate()
    }

    pub fn z1() -> Self {
        RPoly::z(Var::Z1)
    }

    pub fn z2() -> Self {
        RPoly::z(Var::Z2)
    }

    pub fn cz1() -> Self {
        RPoly::cz(Var::Z1)
    }

    pub fn cz2() -> Self {
        RPoly::cz(Var::Z2)
    }

    /// `|z_l|^2`.
    pub fn abs_sq(v: Var) -> Self {
        RPoly::z(v) * RPoly::cz(v)
    }

    /// `Re z_l`.
    pub fn re_z(v: Var) -> Self {
        (RPoly::z(v) + RPoly::cz(v)).scale(&coeff::c_rat(1, 2))
    }

    /// `Im z_l`.
    pub fn im_z(v: Var) -> Self {
        RPoly::z(v).imag_part()
    }

    pub fn param(name: &str) -> Self {
        RPoly::monomial(Monomial::param(name, 1))
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Coeff)>>(terms: I) -> Self {
        let mut p = RPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coeff)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coeff(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when no z-variable occurs (parameters may).
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_constant)
    }

    pub fn constant_term(&self) -> Coeff {
        self.coeff(&Monomial::one())
    }

    pub fn without_constant(&self) -> RPoly {
        self.filter(|m| *m != Monomial::one())
    }

    /// Largest z-degree of any term.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn has_params(&self) -> bool {
        self.terms.keys().any(Monomial::has_params)
    }

    pub fn filter<F: Fn(&Monomial) -> bool>(&self, keep: F) -> RPoly {
        RPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> RPoly {
        if c.is_zero() {
            return RPoly::zero();
        }
        RPoly { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Coeff) -> RPoly {
        RPoly::from_terms(self.terms.iter().map(|(n, a)| (n.mul(m), a * c)))
    }

    pub fn pow(&self, e: u32) -> RPoly {
        let mut result = RPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Swaps `z_l <-> cz_l` and conjugates coefficients; parameters are real.
    pub fn conjugate(&self) -> RPoly {
        RPoly { terms: self.terms.iter().map(|(m, c)| (m.conjugate(), c.conj())).collect() }
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(m, c)| {
            let partner = m.conjugate();
            self.terms.get(&partner).is_some_and(|d| d.conj() == *c)
        })
    }

    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(Monomial::is_holomorphic)
    }

    /// `(p + conj p) / 2`.
    pub fn real_part(&self) -> RPoly {
        (self + &self.conjugate()).scale(&coeff::c_rat(1, 2))
    }

    /// `(p - conj p) / (2i)`.
    pub fn imag_part(&self) -> RPoly {
        let half_over_i = coeff::coeff(int(0), coeff::rat(-1, 2));
        (self - &self.conjugate()).scale(&half_over_i)
    }

    /// `2 Re p`.
    pub fn twice_real_part(&self) -> RPoly {
        self + &self.conjugate()
    }

    pub fn split_parts(&self) -> SplitParts {
        SplitParts {
            constant: self.filter(Monomial::is_constant),
            p1: self.filter(|m| m.involves(Var::Z1) && !m.involves(Var::Z2)),
            m: self.filter(Monomial::is_mixed),
            p2: self.filter(|m| m.involves(Var::Z2) && !m.involves(Var::Z1)),
        }
    }

    /// `d/dz_l`.
    pub fn d_z(&self, v: Var) -> RPoly {
        RPoly::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.hol(v);
            (e > 0).then(|| {
                let mut n = m.clone();
                match v {
                    Var::Z1 => n.j1 -= 1,
                    Var::Z2 => n.j2 -= 1,
                }
                (n, c * c_int(e as i64))
            })
        }))
    }

    /// `d/dcz_l`.
    pub fn d_cz(&self, v: Var) -> RPoly {
        RPoly::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.antihol(v);
            (e > 0).then(|| {
                let mut n = m.clone();
                match v {
                    Var::Z1 => n.k1 -= 1,
                    Var::Z2 => n.k2 -= 1,
                }
                (n, c * c_int(e as i64))
            })
        }))
    }

    pub fn d_param(&self, name: &str) -> RPoly {
        RPoly::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.param_exp(name);
            (e > 0).then(|| {
                let mut n = m.clone();
                if e == 1 {
                    n.params.remove(name);
                } else {
                    n.params.insert(name.to_string(), e - 1);
                }
                (n, c * c_int(e as i64))
            })
        }))
    }

    /// `d^2 P / dz_j dcz_k`.
    pub fn mixed_partial(&self, j: Var, k: Var) -> RPoly {
        self.d_z(j).d_cz(k)
    }

    /// Sets a formal parameter to a constant.
    pub fn eval_param(&self, name: &str, value: &Coeff) -> RPoly {
        let mut out = RPoly::zero();
        for (m, c) in &self.terms {
            let e = m.param_exp(name);
            let mut n = m.clone();
            n.params.remove(name);
            out.add_term(n, c * num_traits::pow(value.clone(), e as usize));
        }
        out
    }

    /// Groups terms by their parameter part: `sum_k params_k * coefficient_k(z)`.
    pub fn param_coefficients(&self) -> BTreeMap<Monomial, RPoly> {
        let mut out: BTreeMap<Monomial, RPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.param_part()).or_default().add_term(m.z_part(), c.clone());
        }
        out
    }

    /// `p(f1, f2)` with conjugate variables replaced by the conjugated map.
    pub fn substitute(&self, map: &PolyMap) -> RPoly {
        self.substitute_bounded(map, usize::MAX)
            .expect("unbounded substitution cannot hit a term limit")
    }

    pub fn substitute_bounded(&self, map: &PolyMap, max_terms: usize) -> Result<RPoly, PolyError> {
        let f1 = map.f1.as_rpoly();
        let f2 = map.f2.as_rpoly();
        let cf1 = f1.conjugate();
        let cf2 = f2.conjugate();
        let mut caches = [
            PowerCache::new(f1.clone()),
            PowerCache::new(cf1),
            PowerCache::new(f2.clone()),
            PowerCache::new(cf2),
        ];
        let mut out = RPoly::zero();
        for (m, c) in &self.terms {
            let exps = [m.j1, m.k1, m.j2, m.k2];
            let mut prod = RPoly::term(m.param_part(), c.clone());
            for (cache, e) in caches.iter_mut().zip(exps) {
                if e > 0 {
                    prod = &prod * cache.get(e);
                }
            }
            out += &prod;
            if out.len() > max_terms {
                return Err(PolyError::TermLimit { limit: max_terms });
            }
        }
        Ok(out)
    }

    pub fn check_real(&self) -> Result<(), PolyError> {
        if self.is_real() {
            Ok(())
        } else {
            Err(PolyError::NotReal(self.to_string()))
        }
    }

    pub fn check_no_params(&self) -> Result<(), PolyError> {
        if self.has_params() {
            Err(PolyError::HasParameters(self.to_string()))
        } else {
            Ok(())
        }
    }
}

struct PowerCache {
    powers: Vec<RPoly>,
}

impl PowerCache {
    fn new(base: RPoly) -> Self {
        PowerCache { powers: vec![RPoly::one(), base] }
    }

    fn get(&mut self, e: u32) -> &RPoly {
        let e = e as usize;
        while self.powers.len() <= e {
            let next = &self.powers[self.powers.len() - 1] * &self.powers[1];
            self.powers.push(next);
        }
        &self.powers[e]
    }
}

impl fmt::Display for RPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = (c.im.is_zero() && c.re < Rational::zero())
                || (c.re.is_zero() && c.im < Rational::zero());
            let mag = if negative { -c.clone() } else { c.clone() };
            let factors = m.render();
            let body = if factors.is_empty() {
                fmt_coeff(&mag)
            } else if mag.is_one() {
                factors
            } else {
                format!("{}*{}", fmt_coeff(&mag), factors)
            };
            match (idx, negative) {
                (0, false) => f.write_str(&body)?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for RPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl std::str::FromStr for RPoly {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl AddAssign<&RPoly> for RPoly {
    fn add_assign(&mut self, rhs: &RPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl Add<&RPoly> for &RPoly {
    type Output = RPoly;

    fn add(self, rhs: &RPoly) -> RPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&RPoly> for &RPoly {
    type Output = RPoly;

    fn sub(self, rhs: &RPoly) -> RPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul<&RPoly> for &RPoly {
    type Output = RPoly;

    fn mul(self, rhs: &RPoly) -> RPoly {
        let mut out = RPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }
}

impl Neg for &RPoly {
    type Output = RPoly;

    fn neg(self) -> RPoly {
        self.scale(&c_int(-1))
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<RPoly> for RPoly {
            type Output = RPoly;
            fn $method(self, rhs: RPoly) -> RPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&RPoly> for RPoly {
            type Output = RPoly;
            fn $method(self, rhs: &RPoly) -> RPoly {
                (&self).$method(rhs)
            }
        }
        impl $tr<RPoly> for &RPoly {
            type Output = RPoly;
            fn $method(self, rhs: RPoly) -> RPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for RPoly {
    type Output = RPoly;

    fn neg(self) -> RPoly {
        -&self
    }
}

/// An [`RPoly`] with no conjugate variables.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct HoloPoly(RPoly);

impl HoloPoly {
    pub fn new(p: RPoly) -> Result<Self, PolyError> {
        if p.is_holomorphic() {
            Ok(HoloPoly(p))
        } else {
            Err(PolyError::NotHolomorphic(p.to_string()))
        }
    }

    pub fn zero() -> Self {
        HoloPoly(RPoly::zero())
    }

    pub fn constant(c: Coeff) -> Self {
        HoloPoly(RPoly::constant(c))
    }

    pub fn z(v: Var) -> Self {
        HoloPoly(RPoly::z(v))
    }

    pub fn as_rpoly(&self) -> &RPoly {
        &self.0
    }

    pub fn into_rpoly(self) -> RPoly {
        self.0
    }

    /// `d/dz_l`, which stays holomorphic.
    pub fn derivative(&self, v: Var) -> HoloPoly {
        HoloPoly(self.0.d_z(v))
    }

    /// Antiderivative in `z_l` with zero constant of integration.
    pub fn integrate(&self, v: Var) -> HoloPoly {
        HoloPoly(RPoly::from_terms(self.0.terms().map(|(m, c)| {
            let mut n = m.clone();
            let e = match v {
                Var::Z1 => {
                    n.j1 += 1;
                    n.j1
                }
                Var::Z2 => {
                    n.j2 += 1;
                    n.j2
                }
            };
            (n, c / c_int(e as i64))
        })))
    }

    pub fn scale(&self, c: &Coeff) -> HoloPoly {
        HoloPoly(self.0.scale(c))
    }

    /// Only `z_l` occurs.
    pub fn depends_only_on(&self, v: Var) -> bool {
        self.0.monomials().all(|m| !m.involves(v.other()))
    }

    /// Leading coefficient and degree as a polynomial in `z_l` alone.
    pub fn univariate_leading(&self, v: Var) -> Option<(u32, Coeff)> {
        self.0
            .terms()
            .filter(|(m, _)| !m.has_params())
            .map(|(m, c)| (m.hol(v), c.clone()))
            .max_by_key(|(e, _)| *e)
    }

    pub fn compose(&self, map: &PolyMap) -> HoloPoly {
        HoloPoly(self.0.substitute(map))
    }

    /// `(a * f1, b * f2)`-style constructors use this.
    pub fn add(&self, other: &HoloPoly) -> HoloPoly {
        HoloPoly(&self.0 + &other.0)
    }

    pub fn mul(&self, other: &HoloPoly) -> HoloPoly {
        HoloPoly(&self.0 * &other.0)
    }

    pub fn sub(&self, other: &HoloPoly) -> HoloPoly {
        HoloPoly(&self.0 - &other.0)
    }
}

impl Deref for HoloPoly {
    type Target = RPoly;

    fn deref(&self) -> &RPoly {
        &self.0
    }
}

impl TryFrom<RPoly> for HoloPoly {
    type Error = PolyError;

    fn try_from(p: RPoly) -> Result<Self, PolyError> {
        HoloPoly::new(p)
    }
}

impl fmt::Display for HoloPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Polynomial self-map `(z1, z2) -> (f1, f2)` of the plane.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolyMap {
    pub f1: HoloPoly,
    pub f2: HoloPoly,
}

impl PolyMap {
    pub fn new(f1: HoloPoly, f2: HoloPoly) -> Self {
        PolyMap { f1, f2 }
    }

    pub fn identity() -> Self {
        PolyMap::new(HoloPoly::z(Var::Z1), HoloPoly::z(Var::Z2))
    }

    pub fn flip() -> Self {
        PolyMap::new(HoloPoly::z(Var::Z2), HoloPoly::z(Var::Z1))
    }

    /// `(a z1, b z2)`.
    pub fn diagonal(a: Coeff, b: Coeff) -> Self {
        PolyMap::new(HoloPoly::z(Var::Z1).scale(&a), HoloPoly::z(Var::Z2).scale(&b))
    }

    pub fn component(&self, v: Var) -> &HoloPoly {
        match v {
            Var::Z1 => &self.f1,
            Var::Z2 => &self.f2,
        }
    }

    /// Replaces `z_l` by `z_l + shift`.
    pub fn translation(v: Var, shift: RPoly) -> Self {
        let mut map = PolyMap::identity();
        let moved = HoloPoly(RPoly::z(v) + shift);
        match v {
            Var::Z1 => map.f1 = moved,
            Var::Z2 => map.f2 = moved,
        }
        map
    }

    pub fn jacobian_det(&self) -> HoloPoly {
        let a = self.f1.derivative(Var::Z1);
        let b = self.f1.derivative(Var::Z2);
        let c = self.f2.derivative(Var::Z1);
        let d = self.f2.derivative(Var::Z2);
        a.mul(&d).sub(&b.mul(&c))
    }

    /// Formal Jacobian determinant is a nonzero constant.
    pub fn has_constant_jacobian(&self) -> bool {
        let det = self.jacobian_det();
        !det.is_zero() && det.is_constant()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PolyMap) -> PolyMap {
        PolyMap::new(self.f1.compose(inner), self.f2.compose(inner))
    }

    pub fn fixes_origin(&self) -> bool {
        self.f1.constant_term().is_zero() && self.f2.constant_term().is_zero()
    }
}

/// `g(z) = (plane(z1, z2), mu * z3 + phi(z1, z2))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelMap {
    pub plane: PolyMap,
    #[serde(with = "crate::coeff::serde_rational")]
    pub mu: Rational,
    pub phi: HoloPoly,
}

impl ModelMap {
    pub fn new(plane: PolyMap, mu: Rational, phi: HoloPoly) -> Self {
        ModelMap { plane, mu, phi }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &ModelMap) -> ModelMap {
        let plane = self.plane.compose(&inner.plane);
        let mu = &self.mu * &inner.mu;
        let phi = inner.phi.scale(&coeff::real(self.mu.clone())).add(&self.phi.compose(&inner.plane));
        ModelMap { plane, mu, phi }
    }
}

/// `i` as a polynomial constant.
pub fn i_const() -> RPoly {
    RPoly::constant(imag_unit())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::c_rat;

    fn p(s: &str) -> RPoly {
        parse(s).unwrap()
    }

    #[test]
    fn reality_checks() {
        assert!(p("z1*cz1").is_real());
        assert!(!p("z1*cz2").is_real());
        assert!(p("z1*cz2 + cz1*z2").is_real());
        assert!(p("i*z1*cz2 - i*cz1*z2").is_real());
        assert!(p("s*z1*cz1").is_real());
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(p("z1^2").conjugate(), p("cz1^2"));
        assert_eq!(p("i*z1*cz2").conjugate(), p("-i*cz1*z2"));
        let real = p("z1^2*cz2 + cz1^2*z2 + z1*cz1");
        assert_eq!(real.conjugate(), real);
    }

    #[test]
    fn substitution_examples() {
        let shift = PolyMap::translation(Var::Z1, RPoly::param("s"));
        assert_eq!(p("z1*cz1").substitute(&shift), p("z1*cz1 + s*z1 + s*cz1 + s^2"));
        let q = p("z1^2*cz1 + 3*z2*cz2^2 + 1/2");
        assert_eq!(q.substitute(&PolyMap::identity()), q);
        assert_eq!(p("z1*cz2").substitute(&PolyMap::flip()), p("z2*cz1"));
    }

    #[test]
    fn bounded_substitution_trips() {
        let map = PolyMap::translation(Var::Z1, RPoly::z2());
        let err = p("z1^6*cz1^6").substitute_bounded(&map, 10).unwrap_err();
        assert_eq!(err, PolyError::TermLimit { limit: 10 });
    }

    #[test]
    fn split_examples() {
        let parts = p("z1*cz1 + z1*cz2 + cz1*z2 + z2^2*cz2^2").split_parts();
        assert_eq!(parts.p1, p("z1*cz1"));
        assert_eq!(parts.m, p("z1*cz2 + cz1*z2"));
        assert_eq!(parts.p2, p("z2^2*cz2^2"));
        let parts = p("z1*cz1*z2*cz2").split_parts();
        assert!(parts.p1.is_zero() && parts.p2.is_zero());
        let re_cube = p("1/2*z1^3 + 1/2*cz1^3");
        assert_eq!(re_cube.split_parts().p1, re_cube);
    }

    #[test]
    fn mixed_partial_examples() {
        assert_eq!(p("z1*cz1").mixed_partial(Var::Z1, Var::Z1), RPoly::one());
        assert_eq!(p("z1^2*cz1^2").mixed_partial(Var::Z1, Var::Z1), p("4*z1*cz1"));
        assert!(p("z1*cz1").mixed_partial(Var::Z1, Var::Z2).is_zero());
    }

    #[test]
    fn printer_is_canonical() {
        assert_eq!(p("z2*cz2 + z1*cz1").to_string(), "z1*cz1 + z2*cz2");
        assert_eq!(p("(1/2)*z1^3 + (1/2)*cz1^3").to_string(), "1/2*z1^3 + 1/2*cz1^3");
        assert_eq!(p("-i*z1 + (1+i)*z2 - 3").to_string(), "-i*z1 + (1 + i)*z2 - 3");
        assert_eq!(RPoly::zero().to_string(), "0");
    }

    #[test]
    fn jacobian_and_composition() {
        let shear = PolyMap::new(HoloPoly::new(p("z1 + z2^2")).unwrap(), HoloPoly::z(Var::Z2));
        assert!(shear.has_constant_jacobian());
        let squash = PolyMap::new(HoloPoly::new(p("z1^2")).unwrap(), HoloPoly::z(Var::Z2));
        assert!(!squash.has_constant_jacobian());
        let twice = shear.compose(&shear);
        assert_eq!(twice.f1.as_rpoly(), &p("z1 + 2*z2^2"));
    }

    #[test]
    fn params_evaluate() {
        let q = p("s^2*z1 + s");
        assert_eq!(q.eval_param("s", &c_rat(1, 2)), p("1/4*z1 + 1/2"));
        assert_eq!(q.d_param("s"), p("2*s*z1 + 1"));
    }
}
