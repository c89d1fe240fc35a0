use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{AlgebraError, Rational};

/// Number of parameters in the alphabet.
pub const NVARS: usize = 4;
pub const VAR_NAMES: [&str; NVARS] = ["a", "b", "c", "d"];

pub fn var_index(name: &str) -> Option<usize> {
    VAR_NAMES.iter().position(|v| *v == name)
}

/// Exponent vector over (a, b, c, d). Ordered graded-lexicographically with
/// `a` the most significant variable, so `a^2 > a*b > b^2 > a`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(pub [u32; NVARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; NVARS])
    }

    pub fn var(v: usize) -> Self {
        let mut e = [0; NVARS];
        e[v] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut e = self.0;
        for (x, y) in e.iter_mut().zip(o.0.iter()) {
            *x += y;
        }
        Monomial(e)
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(x, y)| x <= y)
    }

    /// `o / self`; caller checks `self.divides(o)`.
    pub fn quotient_of(&self, o: &Monomial) -> Monomial {
        let mut e = o.0;
        for (x, y) in e.iter_mut().zip(self.0.iter()) {
            *x -= y;
        }
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial with rational coefficients in the variables a, b, c, d.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }

    pub fn var(v: usize) -> Self {
        Self::monomial(Monomial::var(v), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(it: I) -> Self {
        let mut p = MultiPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let remove = match self.terms.get_mut(&m) {
            Some(x) => {
                *x += c;
                x.is_zero()
            }
            None => {
                self.terms.insert(m, c);
                false
            }
        };
        if remove {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    pub fn contains_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.0[v] > 0)
    }

    /// Variables that occur, in alphabet order.
    pub fn vars(&self) -> Vec<usize> {
        (0..NVARS).filter(|&v| self.contains_var(v)).collect()
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, x)| (m.mul(mono), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Coefficients as a polynomial in `v`; index is the power of `v`.
    pub fn coeffs_in(&self, v: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![MultiPoly::zero(); d + 1];
        for (m, c) in &self.terms {
            let mut e = *m;
            let k = e.0[v] as usize;
            e.0[v] = 0;
            out[k].terms.insert(e, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(v: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut p = MultiPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            for (m, x) in &c.terms {
                let mut e = *m;
                e.0[v] += k as u32;
                p.add_term(e, x.clone());
            }
        }
        p
    }

    /// Replace `v` by `q`.
    pub fn subst(&self, v: usize, q: &MultiPoly) -> MultiPoly {
        if !self.contains_var(v) {
            return self.clone();
        }
        let cs = self.coeffs_in(v);
        let mut acc = MultiPoly::zero();
        for c in cs.iter().rev() {
            acc = &(&acc * q) + c;
        }
        acc
    }

    /// Numerator of `self` after replacing `v` by `num/den`, i.e.
    /// `den^deg_v(self) * self(num/den)`.
    pub fn subst_fraction(&self, v: usize, num: &MultiPoly, den: &MultiPoly) -> MultiPoly {
        if !self.contains_var(v) {
            return self.clone();
        }
        let cs = self.coeffs_in(v);
        let d = cs.len() - 1;
        let mut acc = MultiPoly::zero();
        let mut num_pow = MultiPoly::one();
        let den_pows: Vec<MultiPoly> = {
            let mut v = vec![MultiPoly::one()];
            for i in 0..d {
                let next = &v[i] * den;
                v.push(next);
            }
            v
        };
        for (k, c) in cs.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &(&(c * &num_pow) * &den_pows[d - k]);
            }
            if k < d {
                num_pow = &num_pow * num;
            }
        }
        acc
    }

    pub fn eval_var(&self, v: usize, x: &Rational) -> MultiPoly {
        self.subst(v, &MultiPoly::constant(x.clone()))
    }

    /// Evaluate at a full point (a, b, c, d).
    pub fn eval(&self, pt: &[Rational; NVARS]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for v in 0..NVARS {
                for _ in 0..m.0[v] {
                    t *= &pt[v];
                }
            }
            acc += t;
        }
        acc
    }

    pub fn derivative(&self, v: usize) -> MultiPoly {
        let mut p = MultiPoly::zero();
        for (m, c) in &self.terms {
            if m.0[v] > 0 {
                let mut e = *m;
                let k = e.0[v];
                e.0[v] -= 1;
                p.add_term(e, c * Rational::from_integer(BigInt::from(k)));
            }
        }
        p
    }

    /// Positive rational `c` with `self / c` having coprime integer coefficients.
    pub fn content(&self) -> Rational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Rational::one();
        }
        Rational::new(num, den)
    }

    /// Integer coefficients with gcd 1 and positive leading coefficient.
    pub fn primitive(&self) -> MultiPoly {
        if self.is_zero() {
            return MultiPoly::zero();
        }
        let mut c = self.content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    /// Leading coefficient made 1.
    pub fn monic(&self) -> MultiPoly {
        if self.is_zero() {
            return MultiPoly::zero();
        }
        self.scale(&self.leading_coeff().recip())
    }

    /// Exact quotient `self / g`, or `None` when `g` does not divide `self`.
    pub fn div_exact(&self, g: &MultiPoly) -> Option<MultiPoly> {
        if g.is_zero() {
            return None;
        }
        if let Some(c) = g.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (gm, gc) = g.leading().map(|(m, c)| (*m, c.clone()))?;
        let mut q = MultiPoly::zero();
        let mut r = self.clone();
        while let Some((rm, rc)) = r.leading().map(|(m, c)| (*m, c.clone())) {
            if !gm.divides(&rm) {
                return None;
            }
            let tm = gm.quotient_of(&rm);
            let tc = rc / &gc;
            r = &r - &g.mul_monomial(&tm, &tc);
            q.add_term(tm, tc);
        }
        Some(q)
    }

    /// Greatest common divisor, primitive with positive leading coefficient.
    pub fn gcd(&self, g: &MultiPoly) -> MultiPoly {
        super::gcd::multi_gcd(self, g)
    }

    pub fn parse(s: &str) -> Result<MultiPoly, AlgebraError> {
        super::parse::parse_poly(s)
    }
}

impl serde::Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mono: Vec<String> = (0..NVARS)
                .filter(|&v| m.0[v] > 0)
                .map(|v| {
                    if m.0[v] == 1 {
                        VAR_NAMES[v].to_string()
                    } else {
                        format!("{}^{}", VAR_NAMES[v], m.0[v])
                    }
                })
                .collect();
            let mono = mono.join("*");
            if mono.is_empty() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{}", mono)?;
            } else {
                write!(f, "{}*{}", mag, mono)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({})", self)
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(*m, c.clone());
        }
        p
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(*m, -c.clone());
        }
        p
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        let mut p = MultiPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                p.add_term(m1.mul(m2), c1 * c2);
            }
        }
        p
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: MultiPoly) -> MultiPoly {
        &self + &o
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: MultiPoly) -> MultiPoly {
        &self - &o
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: MultiPoly) -> MultiPoly {
        &self * &o
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        MultiPoly::parse(s).unwrap()
    }

    #[test]
    fn grlex_printing() {
        let q = p("b - b^2 - a*b + a^2 - 2*a^2*b + a^2*b^2");
        assert_eq!(q.to_string(), "a^2*b^2 - 2*a^2*b + a^2 - a*b - b^2 + b");
    }

    #[test]
    fn primitive_sign_and_content() {
        assert_eq!(p("-4*a + 6*b - 2").primitive().to_string(), "2*a - 3*b + 1");
        assert_eq!(p("a/2 - 1/3").primitive().to_string(), "3*a - 2");
    }

    #[test]
    fn exact_division() {
        let f = p("(a - b)*(a^2 + b + 1)");
        assert_eq!(f.div_exact(&p("a - b")).unwrap(), p("a^2 + b + 1"));
        assert!(f.div_exact(&p("a + b")).is_none());
    }

    #[test]
    fn fraction_substitution() {
        // a*b - a - b with b = a/(a-1) vanishes
        let f = p("a*b - a - b");
        let r = f.subst_fraction(1, &p("a"), &p("a - 1"));
        assert!(r.is_zero());
    }
}
