//! Absolute irreducibility for polynomials of degree at most two in one
//! variable, by the discriminant-square criterion.

use num_traits::{One, Signed};
use serde::Serialize;

use super::gcd::content_in;
use super::poly::{Monomial, MultiPoly, NVARS};
use super::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadraticVerdict {
    Irreducible,
    /// Splits over the complex numbers. `real_split` tells whether the two
    /// factors are defined over the reals (discriminant `c*r^2` with `c > 0`).
    Reducible { real_split: bool },
    NotApplicable,
}

/// Integer square root when `n` is a perfect square.
fn int_sqrt(n: &num_bigint::BigInt) -> Option<num_bigint::BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact square root in Q[a,b,c,d], if one exists.
pub fn poly_sqrt(p: &MultiPoly) -> Option<MultiPoly> {
    if p.is_zero() {
        return Some(MultiPoly::zero());
    }
    let (lm, lc) = p.leading().map(|(m, c)| (*m, c.clone()))?;
    if lm.0.iter().any(|e| e % 2 == 1) || lc.is_negative() {
        return None;
    }
    let rn = int_sqrt(lc.numer())?;
    let rd = int_sqrt(lc.denom())?;
    let mut half = Monomial::one();
    for v in 0..NVARS {
        half.0[v] = lm.0[v] / 2;
    }
    let mut r = MultiPoly::monomial(half, Rational::new(rn, rd));
    let two_lead = (half, r.leading_coeff() * Rational::from_integer(2.into()));
    // a square root has at most as many terms as monomials of half degree
    let max_terms = {
        let d = lm.degree() / 2;
        let mut count = 0u64;
        for a in 0..=d {
            for b in 0..=d - a {
                for c in 0..=d - a - b {
                    count += (d - a - b - c + 1) as u64;
                }
            }
        }
        count as usize
    };
    for _ in 0..=max_terms {
        let rem = p - &(&r * &r);
        let (rm, rc) = match rem.leading() {
            None => return Some(r),
            Some((m, c)) => (*m, c.clone()),
        };
        if !two_lead.0.divides(&rm) {
            return None;
        }
        let tm = two_lead.0.quotient_of(&rm);
        if tm >= half {
            return None;
        }
        r = &r + &MultiPoly::monomial(tm, rc / &two_lead.1);
    }
    None
}

/// Square-free part with respect to every variable.
pub fn squarefree_multi(p: &MultiPoly) -> MultiPoly {
    let mut q = p.primitive();
    for v in q.vars() {
        let d = q.derivative(v);
        if d.is_zero() {
            continue;
        }
        let g = q.gcd(&d);
        if !g.is_constant() {
            q = q.div_exact(&g).expect("gcd divides").primitive();
        }
    }
    q
}

/// Decide absolute irreducibility of `p` using its degree in `var`.
/// Works for any number of remaining variables.
pub fn abs_irreducible_quadratic(p: &MultiPoly, var: usize) -> QuadraticVerdict {
    let deg = p.degree_in(var);
    if deg == 0 || deg > 2 {
        return QuadraticVerdict::NotApplicable;
    }
    let content = content_in(p, var);
    if !content.is_constant() {
        return QuadraticVerdict::Reducible { real_split: true };
    }
    if deg == 1 {
        return QuadraticVerdict::Irreducible;
    }
    let cs = p.coeffs_in(var);
    let (h, g, f) = (&cs[0], &cs[1], &cs[2]);
    let disc = &(g * g) - &(&(f * h) * &MultiPoly::from_int(4));
    if disc.is_zero() {
        // f*(v + g/2f)^2
        return QuadraticVerdict::Reducible { real_split: true };
    }
    // disc = c * r^2 with c rational iff its primitive part, up to sign, is a square
    let prim = disc.primitive();
    let c_sign = disc.leading_coeff().signum();
    match poly_sqrt(&prim) {
        Some(_) => QuadraticVerdict::Reducible { real_split: c_sign.is_one() },
        None => QuadraticVerdict::Irreducible,
    }
}
