//! Multivariate gcd by recursive primitive polynomial remainder sequences.

use num_traits::Zero;

use super::poly::{MultiPoly, NVARS};

fn main_var(f: &MultiPoly, g: &MultiPoly) -> Option<usize> {
    (0..NVARS).rev().find(|&v| f.contains_var(v) || g.contains_var(v))
}

/// gcd of the coefficients of `f` viewed as a polynomial in `v`.
pub fn content_in(f: &MultiPoly, v: usize) -> MultiPoly {
    let mut acc = MultiPoly::zero();
    for c in f.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        acc = multi_gcd(&acc, &c);
        if acc.is_constant() {
            return MultiPoly::one();
        }
    }
    acc
}

/// Pseudo-remainder of `a` by `b` as polynomials in `v`.
pub fn prem(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
    let bc = b.coeffs_in(v);
    let db = bc.len() - 1;
    let lb = &bc[db];
    let mut r = a.coeffs_in(v);
    let da = r.len() - 1;
    if da < db {
        return a.clone();
    }
    let is_zero = |r: &Vec<MultiPoly>| r.len() == 1 && r[0].is_zero();
    let mut steps = 0u32;
    while !is_zero(&r) && r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (i, bi) in bc.iter().enumerate() {
            let t = &lr * bi;
            r[i + shift] = &r[i + shift] - &t;
        }
        debug_assert!(r[dr].is_zero());
        while r.len() > 1 && r.last().map_or(false, |c| c.is_zero()) {
            r.pop();
        }
        steps += 1;
    }
    let expected = (da - db + 1) as u32;
    let mut out = MultiPoly::from_coeffs_in(v, &r);
    if steps < expected {
        out = &out * &lb.pow(expected - steps);
    }
    out
}

fn primitive_part_in(f: &MultiPoly, v: usize) -> MultiPoly {
    if f.is_zero() {
        return MultiPoly::zero();
    }
    let c = content_in(f, v);
    if c.is_constant() {
        return f.primitive();
    }
    f.div_exact(&c).expect("content divides").primitive()
}

pub fn multi_gcd(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    if f.is_zero() {
        return g.primitive();
    }
    if g.is_zero() {
        return f.primitive();
    }
    if f.is_constant() || g.is_constant() {
        return MultiPoly::one();
    }
    if f == g {
        return f.primitive();
    }
    let v = match main_var(f, g) {
        Some(v) => v,
        None => return MultiPoly::one(),
    };
    if !f.contains_var(v) {
        return multi_gcd(f, &content_in(g, v));
    }
    if !g.contains_var(v) {
        return multi_gcd(&content_in(f, v), g);
    }
    let cf = content_in(f, v);
    let cg = content_in(g, v);
    let c = multi_gcd(&cf, &cg);
    let mut a = f.div_exact(&cf).expect("content divides");
    let mut b = g.div_exact(&cg).expect("content divides");
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    a = a.primitive();
    b = b.primitive();
    while !b.is_zero() && b.degree_in(v) > 0 {
        let r = prem(&a, &b, v);
        a = b;
        b = primitive_part_in(&r, v);
    }
    let h = if b.is_zero() { primitive_part_in(&a, v) } else { MultiPoly::one() };
    let out = &c * &h;
    if out.leading_coeff().is_zero() {
        return MultiPoly::one();
    }
    out.primitive()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        MultiPoly::parse(s).unwrap()
    }

    #[test]
    fn bivariate_gcd() {
        let g = p("a*b - a - b");
        let f1 = &g * &p("a^2 + b + 3");
        let f2 = &g * &p("b^3 - a");
        assert_eq!(multi_gcd(&f1, &f2), g);
    }

    #[test]
    fn trivariate_gcd_with_content() {
        let g = p("(c - 1)*(a - b*c)");
        let f1 = &g * &p("a + c^2");
        let f2 = &g * &p("(c - 1)*(b + 2)");
        assert_eq!(multi_gcd(&f1, &f2), g.primitive());
    }

    #[test]
    fn coprime() {
        assert!(multi_gcd(&p("a^2 + 1"), &p("a^3 - 3*a^2 + 2*a - 1")).is_constant());
        assert!(multi_gcd(&p("a - b"), &p("a + b")).is_constant());
    }

    #[test]
    fn pseudo_remainder_identity() {
        let a = p("a^3*b + a - 1");
        let b = p("b*a^2 + 2");
        let r = prem(&a, &b, 0);
        assert!(r.degree_in(0) < 2);
    }
}
