//! Splitting a real polynomial into a pluriharmonic part and a Hermitian
//! form in holomorphic monomials, and the `Im z2`-expansion of polynomials
//! pulled back along `z2 -> p(z1) z2`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::coeff::{c_rat, fmt_rational, imag_unit, magnitude_cmp, real, Coeff, Rational};
use crate::linalg;
use crate::poly::{HoloPoly, Monomial, PolyError, PolyMap, RPoly, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("the multiplier polynomial is zero")]
    ZeroMultiplier,
    #[error("the multiplier must be a polynomial in z1 alone, got {0}")]
    NotUnivariate(String),
}

/// `2 Re q + Σ λ |f|² - Σ μ |g|²`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HoloDecomposition {
    pub q: HoloPoly,
    pub plus: Vec<Term>,
    pub minus: Vec<Term>,
    /// Rank over Q(i) of the `plus` polynomials; equals `plus.len()`.
    pub plus_rank: usize,
    pub minus_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Term {
    #[serde(with = "crate::coeff::serde_rational")]
    pub weight: Rational,
    pub poly: HoloPoly,
}

impl HoloDecomposition {
    pub fn reconstruct(&self) -> RPoly {
        let mut out = self.q.twice_real_part();
        for t in &self.plus {
            out += &abs_sq(&t.poly).scale(&real(t.weight.clone()));
        }
        for t in &self.minus {
            out += &abs_sq(&t.poly).scale(&real(-t.weight.clone()));
        }
        out
    }

    /// `(number of positive squares, number of negative squares)`.
    pub fn inertia(&self) -> (usize, usize) {
        (self.plus.len(), self.minus.len())
    }
}

impl fmt::Display for HoloDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "q = {}", self.q)?;
        for (label, terms) in [("plus", &self.plus), ("minus", &self.minus)] {
            if terms.is_empty() {
                writeln!(f, "{label}: none")?;
            }
            for t in terms {
                writeln!(f, "{label}: {} * |{}|^2", fmt_rational(&t.weight), t.poly)?;
            }
        }
        Ok(())
    }
}

fn abs_sq(f: &HoloPoly) -> RPoly {
    f.as_rpoly() * &f.conjugate()
}

/// `p = 2 Re q + core`, with `core` free of pure monomials.
/// Parameters are carried along and treated as real.
pub fn pluriharmonic_split(p: &RPoly) -> Result<(HoloPoly, RPoly), DecompositionError> {
    p.check_real()?;
    let half = c_rat(1, 2);
    let q = RPoly::from_terms(p.terms().filter(|(m, _)| m.is_holomorphic()).map(|(m, c)| {
        if m.is_constant() {
            (m.clone(), c * &half)
        } else {
            (m.clone(), c.clone())
        }
    }));
    let core = p.filter(|m| !m.is_pure());
    let q = HoloPoly::new(q).expect("holomorphic terms only");
    Ok((q, core))
}

/// Hermitian coefficient matrix of `core`: rows and columns indexed by the
/// holomorphic monomials `u`, entry `(u, v)` the coefficient of `z^u cz^v`.
pub fn hermitian_matrix(core: &RPoly) -> (Vec<Monomial>, Vec<Vec<Coeff>>) {
    let hol = |m: &Monomial| Monomial::new(m.j1, 0, m.j2, 0);
    let antihol = |m: &Monomial| Monomial::new(m.k1, 0, m.k2, 0);
    let mut basis: Vec<Monomial> = core.monomials().flat_map(|m| [hol(m), antihol(m)]).collect();
    basis.sort();
    basis.dedup();
    let index: BTreeMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let n = basis.len();
    let mut h = vec![vec![Coeff::zero(); n]; n];
    for (m, c) in core.terms() {
        h[index[&hol(m)]][index[&antihol(m)]] = c.clone();
    }
    (basis, h)
}

/// Diagonalizes the Hermitian form `Σ H[a][b] x_a conj(x_b)` by exact
/// congruence. Each output pair `(d, v)` contributes `d |Σ v_a x_a|²`,
/// with `d` real and nonzero.
pub fn hermitian_ldl(h: &[Vec<Coeff>]) -> Vec<(Rational, Vec<Coeff>)> {
    let n = h.len();
    let mut h: Vec<Vec<Coeff>> = h.to_vec();
    // vecs[a] expresses the current variable a in the original coordinates
    let mut vecs: Vec<Vec<Coeff>> =
        (0..n).map(|a| (0..n).map(|b| if a == b { Coeff::one() } else { Coeff::zero() }).collect()).collect();
    let mut live: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    loop {
        let snapshot = live.clone();
        live.retain(|&a| snapshot.iter().any(|&b| !h[a][b].is_zero()));
        if live.is_empty() {
            return out;
        }
        let pivot = live
            .iter()
            .copied()
            .filter(|&a| !h[a][a].is_zero())
            .max_by(|&a, &b| magnitude_cmp(&h[a][a], &h[b][b]).then(b.cmp(&a)));
        let Some(p) = pivot else {
            // All diagonals vanish: x_v -> x_v - c x_u makes the (u, u) entry
            // 2 Re(c H[v][u]), which is nonzero for the chosen c.
            let (u, v) = live
                .iter()
                .flat_map(|&a| live.iter().map(move |&b| (a, b)))
                .find(|&(a, b)| a != b && !h[a][b].is_zero())
                .expect("nonzero live entry off the diagonal");
            let c = if h[v][u].re.is_zero() { -imag_unit() } else { Coeff::one() };
            for row in h.iter_mut() {
                let add = c.conj() * &row[v];
                row[u] += add;
            }
            let row_v = h[v].clone();
            for (x, y) in h[u].iter_mut().zip(&row_v) {
                *x += &c * y;
            }
            let vec_u = vecs[u].clone();
            for (x, y) in vecs[v].iter_mut().zip(&vec_u) {
                *x -= &c * y;
            }
            continue;
        };
        let d = h[p][p].clone();
        let mut f = vecs[p].clone();
        for &b in &live {
            if b != p && !h[b][p].is_zero() {
                let c = &h[b][p] / &d;
                for (x, y) in f.iter_mut().zip(&vecs[b]) {
                    *x += &c * y;
                }
            }
        }
        out.push((d.re.clone(), f));
        let rest: Vec<usize> = live.iter().copied().filter(|&a| a != p).collect();
        for &a in &rest {
            for &b in &rest {
                let delta = &h[a][p] * &h[p][b] / &d;
                h[a][b] -= delta;
            }
        }
        for &a in &live {
            h[a][p] = Coeff::zero();
            h[p][a] = Coeff::zero();
        }
        live = rest;
    }
}

/// Scales `v` so that its last nonzero entry is 1; returns `|scale|²`.
fn normalize(v: &mut [Coeff]) -> Rational {
    let Some(lead) = v.iter().rev().find(|c| !c.is_zero()).cloned() else {
        return Rational::one();
    };
    for x in v.iter_mut() {
        *x = &*x / &lead;
    }
    lead.norm_sqr()
}

pub fn holomorphic_decompose(p: &RPoly) -> Result<HoloDecomposition, DecompositionError> {
    p.check_no_params()?;
    let (q, core) = pluriharmonic_split(p)?;
    let (basis, h) = hermitian_matrix(&core);
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for (d, mut v) in hermitian_ldl(&h) {
        let scale = normalize(&mut v);
        let poly = RPoly::from_terms(basis.iter().cloned().zip(v));
        let poly = HoloPoly::new(poly).expect("holomorphic basis");
        let weight = d * scale;
        if weight.is_positive() {
            plus.push(Term { weight, poly });
        } else {
            minus.push(Term { weight: -weight, poly });
        }
    }
    let rank_of = |terms: &[Term]| {
        let rows: Vec<Vec<Coeff>> = terms.iter().map(|t| basis.iter().map(|m| t.poly.coeff(m)).collect()).collect();
        linalg::rank(&rows, basis.len())
    };
    let plus_rank = rank_of(&plus);
    let minus_rank = rank_of(&minus);
    Ok(HoloDecomposition { q, plus, minus, plus_rank, minus_rank })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ImExpansion {
    /// `Q = Σ_j b_j (Im(z2 conj p))^j`, `b_j` indexed by `j`.
    Success { b: Vec<RPoly> },
    /// The pulled-back polynomial involves `Re z2`; `witness` is such a term.
    ReDependence { witness: RPoly },
    /// The coefficient of `(Im z2)^j` is not divisible by `|p|^(2j)`.
    NotDivisible { j: usize },
}

const RE_PARAM: &str = "_x2";
const IM_PARAM: &str = "_y2";

/// Quotient of `a` by `d(z1)`, treating `a` as a polynomial in `z1` with
/// coefficients in the other variables; `None` if the division is inexact.
fn divide_by_z1_poly(a: &RPoly, d: &HoloPoly) -> Option<RPoly> {
    let (n, lead) = d.univariate_leading(Var::Z1)?;
    let mut rest = a.clone();
    let mut quotient = RPoly::zero();
    while !rest.is_zero() {
        let top = rest.monomials().map(|m| m.j1).max().unwrap();
        if top < n {
            return None;
        }
        let step = RPoly::from_terms(rest.terms().filter(|(m, _)| m.j1 == top).map(|(m, c)| {
            let mut m = m.clone();
            m.j1 -= n;
            (m, c / &lead)
        }));
        rest = &rest - &(&step * d.as_rpoly());
        quotient += &step;
    }
    Some(quotient)
}

/// Writes `Q(z1, z2)` as `Σ b_j(z1, cz1) (Im(z2 conj p(z1)))^j` when possible.
pub fn im_expansion(q: &RPoly, p: &HoloPoly) -> Result<ImExpansion, DecompositionError> {
    q.check_no_params()?;
    if p.is_zero() {
        return Err(DecompositionError::ZeroMultiplier);
    }
    if !p.depends_only_on(Var::Z1) || p.has_params() {
        return Err(DecompositionError::NotUnivariate(p.to_string()));
    }
    let x = RPoly::param(RE_PARAM);
    let y = RPoly::param(IM_PARAM);
    let z2 = &x + &y.scale(&imag_unit());
    let map = PolyMap::new(HoloPoly::z(Var::Z1), HoloPoly::new(p.as_rpoly() * &z2)?);
    let pulled = q.substitute(&map);
    let with_re = pulled.filter(|m| m.param_exp(RE_PARAM) > 0);
    if !with_re.is_zero() {
        return Ok(ImExpansion::ReDependence { witness: with_re });
    }
    let mut by_power: BTreeMap<u32, RPoly> = BTreeMap::new();
    for (m, c) in pulled.terms() {
        let j = m.param_exp(IM_PARAM);
        let stripped = Monomial::new(m.j1, m.k1, m.j2, m.k2);
        by_power.entry(j).or_default().add_term(stripped, c.clone());
    }
    let top = by_power.keys().next_back().copied().unwrap_or(0) as usize;
    let mut b = vec![RPoly::zero(); top + 1];
    for (j, a) in by_power {
        let mut cur = a;
        for _ in 0..j {
            let Some(next) = divide_by_z1_poly(&cur, p) else {
                return Ok(ImExpansion::NotDivisible { j: j as usize });
            };
            // division by conj p(cz1) via conjugation
            let Some(next) = divide_by_z1_poly(&next.conjugate(), p) else {
                return Ok(ImExpansion::NotDivisible { j: j as usize });
            };
            cur = next.conjugate();
        }
        b[j as usize] = cur;
    }
    debug_assert_eq!(rebuild_im_expansion(&b, p), *q);
    Ok(ImExpansion::Success { b })
}

/// `Σ_j b_j (Im(z2 conj p))^j`.
pub fn rebuild_im_expansion(b: &[RPoly], p: &HoloPoly) -> RPoly {
    let im = (RPoly::z2() * p.conjugate()).imag_part();
    let mut out = RPoly::zero();
    let mut power = RPoly::one();
    for bj in b {
        out += &(bj * &power);
        power = &power * &im;
    }
    out
}
