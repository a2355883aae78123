#![allow(dead_code)]

use modelkit_core::coeff::{coeff, rat, real, Coeff, Rational};
use modelkit_core::poly::{HoloPoly, Monomial, RPoly};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(rng: &mut impl Rng) -> Rational {
    let n = rng.gen_range(-6..=6);
    let d = rng.gen_range(1..=4);
    rat(n, d)
}

pub fn nonzero_rational(rng: &mut impl Rng) -> Rational {
    loop {
        let r = small_rational(rng);
        if r != rat(0, 1) {
            return r;
        }
    }
}

pub fn positive_rational(rng: &mut impl Rng) -> Rational {
    rat(rng.gen_range(1..=6), rng.gen_range(1..=4))
}

pub fn gaussian(rng: &mut impl Rng) -> Coeff {
    coeff(small_rational(rng), small_rational(rng))
}

pub fn nonzero_gaussian(rng: &mut impl Rng) -> Coeff {
    coeff(nonzero_rational(rng), small_rational(rng))
}

pub fn monomial_with(rng: &mut impl Rng, max_exp: u32, max_deg: u32) -> Monomial {
    loop {
        let m = Monomial::new(
            rng.gen_range(0..=max_exp),
            rng.gen_range(0..=max_exp),
            rng.gen_range(0..=max_exp),
            rng.gen_range(0..=max_exp),
        );
        if m.degree() <= max_deg && !m.is_constant() {
            return m;
        }
    }
}

/// `c m + conj(c m)` for the given monomial, real coefficient when self-conjugate.
pub fn real_pair(m: &Monomial, c: Coeff) -> RPoly {
    let conj = m.conjugate();
    if &conj == m {
        RPoly::term(m.clone(), real(c.re))
    } else {
        let t = RPoly::term(m.clone(), c);
        t.twice_real_part()
    }
}

/// Random real polynomial: at most `pairs` conjugate pairs of monomials of
/// degree `<= max_deg`, no constant term.
pub fn real_poly(rng: &mut impl Rng, max_deg: u32, pairs: usize) -> RPoly {
    let mut p = RPoly::zero();
    let n = rng.gen_range(1..=pairs);
    for _ in 0..n {
        let m = monomial_with(rng, max_deg, max_deg);
        p += &real_pair(&m, nonzero_gaussian(rng));
    }
    p
}

/// Like `real_poly` with every exponent at most `max_exp`.
pub fn real_poly_exp(rng: &mut impl Rng, max_exp: u32, pairs: usize) -> RPoly {
    let mut p = RPoly::zero();
    for _ in 0..rng.gen_range(1..=pairs) {
        let m = monomial_with(rng, max_exp, 4 * max_exp);
        p += &real_pair(&m, nonzero_gaussian(rng));
    }
    p
}

/// Real polynomial with no pure monomials.
pub fn real_core(rng: &mut impl Rng, max_deg: u32, pairs: usize) -> RPoly {
    let mut p = RPoly::zero();
    for _ in 0..rng.gen_range(1..=pairs) {
        let m = loop {
            let m = monomial_with(rng, max_deg, max_deg);
            if !m.is_pure() {
                break m;
            }
        };
        p += &real_pair(&m, nonzero_gaussian(rng));
    }
    p
}

pub fn holo(rng: &mut impl Rng, max_deg: u32, terms: usize) -> HoloPoly {
    let mut p = RPoly::zero();
    for _ in 0..terms {
        let d = rng.gen_range(0..=max_deg);
        let a = rng.gen_range(0..=d);
        p.add_term(Monomial::new(a, 0, d - a, 0), gaussian(rng));
    }
    HoloPoly::new(p).unwrap()
}

/// Nonzero polynomial in `z1` alone.
pub fn holo_z1(rng: &mut impl Rng, max_deg: u32) -> HoloPoly {
    loop {
        let mut p = RPoly::zero();
        for e in 0..=rng.gen_range(0..=max_deg) {
            if rng.gen_bool(0.7) {
                p.add_term(Monomial::new(e, 0, 0, 0), gaussian(rng));
            }
        }
        if !p.is_zero() {
            return HoloPoly::new(p).unwrap();
        }
    }
}

pub fn im_z(v: modelkit_core::poly::Var) -> RPoly {
    RPoly::im_z(v)
}

pub fn pick<'a, T>(rng: &mut impl Rng, items: &'a [T]) -> &'a T {
    items.choose(rng).unwrap()
}
