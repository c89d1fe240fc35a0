use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::{Monomial, MultiPoly};
use super::{AlgebraError, Rational};

/// Dense univariate polynomial over the rationals, lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UniPoly {
    pub var: usize,
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(var: usize, mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { var, coeffs }
    }

    pub fn from_ints(var: usize, coeffs: &[i64]) -> Self {
        Self::new(var, coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero(var: usize) -> Self {
        UniPoly { var, coeffs: vec![] }
    }

    pub fn constant(var: usize, c: Rational) -> Self {
        Self::new(var, vec![c])
    }

    /// The polynomial `x` in variable `var`.
    pub fn x(var: usize) -> Self {
        Self::new(var, vec![Rational::zero(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
            .collect();
        UniPoly::new(self.var, c)
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = Rational::zero();
        let c = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
            .collect();
        UniPoly::new(self.var, c)
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly::new(self.var, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, s: &Rational) -> UniPoly {
        UniPoly::new(self.var, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero(self.var);
        }
        let mut c = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in o.coeffs.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        UniPoly::new(self.var, c)
    }

    pub fn pow(&self, e: u32) -> UniPoly {
        let mut acc = UniPoly::constant(self.var, Rational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        let ld = d.lc();
        if r.len() < d.coeffs.len() {
            return (UniPoly::zero(self.var), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let t = &r[k + dd] / &ld;
            if !t.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &t * dc;
                }
            }
            q[k] = t;
        }
        r.truncate(dd);
        (UniPoly::new(self.var, q), UniPoly::new(self.var, r))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.divrem(d).1
    }

    pub fn div_exact(&self, d: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.divrem(d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().recip())
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: returns (g, s) with s*self ≡ g (mod m), g monic.
    pub fn gcdex_mod(&self, m: &UniPoly) -> (UniPoly, UniPoly) {
        let var = self.var;
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut s0, mut s1) = (UniPoly::zero(var), UniPoly::constant(var, Rational::one()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        let l = r0.lc();
        if l.is_zero() {
            return (r0, s0);
        }
        (r0.scale(&l.recip()), s0.scale(&l.recip()))
    }

    /// Integer coefficients with gcd 1, positive leading coefficient.
    pub fn primitive(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in &self.coeffs {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        let mut s = Rational::new(den, num);
        if self.lc().is_negative() {
            s = -s;
        }
        self.scale(&s)
    }

    pub fn to_multi(&self) -> MultiPoly {
        MultiPoly::from_terms(self.coeffs.iter().enumerate().map(|(i, c)| {
            let mut m = Monomial::one();
            m.0[self.var] = i as u32;
            (m, c.clone())
        }))
    }

    /// Univariate view of a polynomial that involves at most `var`.
    pub fn from_multi(p: &MultiPoly, var: usize) -> Option<UniPoly> {
        if p.vars().iter().any(|&v| v != var) {
            return None;
        }
        let mut c = vec![Rational::zero(); p.degree_in(var) as usize + 1];
        for (m, x) in p.terms() {
            c[m.0[var] as usize] = x.clone();
        }
        Some(UniPoly::new(var, c))
    }

    /// `p / gcd(p, p')`, primitive.
    pub fn squarefree_part(&self) -> Result<UniPoly, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        if self.is_constant() {
            return Ok(UniPoly::constant(self.var, Rational::one()));
        }
        let g = self.gcd(&self.derivative());
        Ok(self.div_exact(&g).expect("gcd divides").primitive())
    }

    pub fn is_squarefree(&self) -> bool {
        self.is_constant() || self.gcd(&self.derivative()).is_constant()
    }

    /// True iff every root has even multiplicity.
    pub fn is_perfect_square(&self) -> Result<bool, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        if self.degree() % 2 == 1 {
            return Ok(false);
        }
        // Yun decomposition: odd-indexed factors must be trivial.
        for (f, mult) in self.squarefree_decomposition()? {
            if mult % 2 == 1 && !f.is_constant() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Yun's algorithm; factors are primitive, multiplicities ascending.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(UniPoly, usize)>, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let mut out = vec![];
        if self.is_constant() {
            return Ok(out);
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_exact(&a0).unwrap();
        let mut c = fp.div_exact(&a0).unwrap();
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while !b.is_constant() {
            let a = b.gcd(&d);
            if !a.is_constant() {
                out.push((a.primitive(), i));
            }
            b = b.div_exact(&a).unwrap();
            c = d.div_exact(&a).unwrap();
            d = c.sub(&b.derivative());
            i += 1;
        }
        Ok(out)
    }

    /// Number of distinct real roots via a Sturm chain.
    pub fn sturm_real_roots(&self) -> Result<usize, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        if self.is_constant() {
            return Ok(0);
        }
        if !self.is_squarefree() {
            return Err(AlgebraError::NotSquarefree);
        }
        let chain = self.sturm_chain();
        let at_pos: Vec<i8> = chain.iter().map(|p| sign(&p.lc())).collect();
        let at_neg: Vec<i8> = chain
            .iter()
            .map(|p| {
                let s = sign(&p.lc());
                if p.degree() % 2 == 1 {
                    -s
                } else {
                    s
                }
            })
            .collect();
        Ok(variations(&at_neg) - variations(&at_pos))
    }

    fn sturm_chain(&self) -> Vec<UniPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            let r = chain[n - 2].rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            // positive rescaling keeps signs and tames coefficient growth
            let r = r.neg();
            let s = r.primitive();
            let s = if sign(&s.lc()) == sign(&r.lc()) { s } else { s.neg() };
            chain.push(s);
        }
        chain
    }

    /// Cauchy bound `1 + max |c_i / c_n|`: every root has modulus below it.
    pub fn cauchy_bound(&self) -> Rational {
        let l = self.lc().abs();
        let m = self.coeffs[..self.coeffs.len().saturating_sub(1)]
            .iter()
            .map(|c| c.abs() / &l)
            .max()
            .unwrap_or_else(Rational::zero);
        m + Rational::one()
    }

    /// Rational roots of a polynomial with rational coefficients.
    pub fn rational_roots(&self) -> Vec<Rational> {
        let p = self.primitive();
        let c = p.coeffs();
        if c.is_empty() {
            return vec![];
        }
        let mut roots = vec![];
        // strip zero roots
        let k = c.iter().position(|x| !x.is_zero()).unwrap_or(0);
        if k > 0 {
            roots.push(Rational::zero());
        }
        let c = &c[k..];
        if c.len() <= 1 {
            return roots;
        }
        let a0 = c[0].numer().abs();
        let an = c[c.len() - 1].numer().abs();
        let q = UniPoly::new(self.var, c.to_vec());
        for num in divisors(&a0) {
            for den in divisors(&an) {
                if num.gcd(&den) != BigInt::one() {
                    continue;
                }
                for s in [1, -1] {
                    let r = Rational::new(&num * BigInt::from(s), den.clone());
                    if q.eval(&r).is_zero() && !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// Complete factorization over the rationals for degree at most 6.
    pub fn factor_small(&self) -> Result<Vec<(UniPoly, usize)>, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        if self.degree() > 6 {
            return Err(AlgebraError::DegreeTooHigh(self.degree()));
        }
        let mut out = vec![];
        for (f, mult) in self.squarefree_decomposition()? {
            for g in split_squarefree(&f) {
                out.push((g, mult));
            }
        }
        out.sort_by(|x, y| x.0.degree().cmp(&y.0.degree()).then_with(|| x.0.to_string().cmp(&y.0.to_string())));
        Ok(out)
    }
}

fn sign(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn variations(signs: &[i8]) -> usize {
    let nz: Vec<i8> = signs.iter().copied().filter(|&s| s != 0).collect();
    nz.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Positive divisors of |n| (n = 0 yields just 1).
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut small = vec![];
    let mut large = vec![];
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let e = &n / &d;
            if e != d {
                large.push(e);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Factor a squarefree polynomial into irreducibles over the rationals.
fn split_squarefree(f: &UniPoly) -> Vec<UniPoly> {
    let mut rest = f.primitive();
    let mut out = vec![];
    for r in rest.rational_roots() {
        let lin = UniPoly::new(f.var, vec![-r.clone(), Rational::one()]).primitive();
        rest = rest.div_exact(&lin).expect("root divides").primitive();
        out.push(lin);
    }
    let mut stack = vec![rest];
    while let Some(g) = stack.pop() {
        if g.is_constant() {
            continue;
        }
        match kronecker_factor(&g) {
            Some(h) => {
                let q = g.div_exact(&h).unwrap().primitive();
                stack.push(h);
                stack.push(q);
            }
            None => out.push(g),
        }
    }
    out
}

/// Find a nontrivial factor of degree 2 or 3 of an integer polynomial without
/// rational roots, by interpolation through divisors of sample values.
fn kronecker_factor(g: &UniPoly) -> Option<UniPoly> {
    let n = g.degree();
    if n < 4 {
        return None;
    }
    let maxd = (n / 2).min(3);
    for d in 2..=maxd {
        let xs: Vec<i64> = pick_points(g, d + 1);
        let vals: Vec<BigInt> = xs
            .iter()
            .map(|&x| g.eval(&Rational::from_integer(x.into())).to_integer())
            .collect();
        let divs: Vec<Vec<BigInt>> = vals
            .iter()
            .map(|v| {
                let mut ds = vec![];
                for p in divisors(v) {
                    ds.push(p.clone());
                    ds.push(-p);
                }
                ds
            })
            .collect();
        let mut idx = vec![0usize; d + 1];
        loop {
            let ys: Vec<Rational> = idx.iter().enumerate().map(|(i, &j)| Rational::from_integer(divs[i][j].clone())).collect();
            // leading sign fixed by requiring the first value positive
            if ys[0].is_positive() {
                let h = interpolate(g.var, &xs, &ys);
                if h.degree() == d && h.coeffs().iter().all(|c| c.is_integer()) {
                    if g.div_exact(&h).is_some() {
                        return Some(h.primitive());
                    }
                }
            }
            let mut k = 0;
            loop {
                if k == idx.len() {
                    break;
                }
                idx[k] += 1;
                if idx[k] < divs[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    None
}

fn pick_points(g: &UniPoly, count: usize) -> Vec<i64> {
    let mut cand: Vec<(BigInt, i64)> = (-6i64..=6)
        .map(|x| (g.eval(&Rational::from_integer(x.into())).to_integer().abs(), x))
        .collect();
    cand.sort();
    let mut xs: Vec<i64> = cand.into_iter().take(count).map(|(_, x)| x).collect();
    xs.sort();
    xs
}

fn interpolate(var: usize, xs: &[i64], ys: &[Rational]) -> UniPoly {
    let mut acc = UniPoly::zero(var);
    for (i, &xi) in xs.iter().enumerate() {
        let mut basis = UniPoly::constant(var, Rational::one());
        let mut denom = Rational::one();
        for (j, &xj) in xs.iter().enumerate() {
            if i != j {
                basis = basis.mul(&UniPoly::new(var, vec![Rational::from_integer((-xj).into()), Rational::one()]));
                denom *= Rational::from_integer((xi - xj).into());
            }
        }
        acc = acc.add(&basis.scale(&(&ys[i] / denom)));
    }
    acc
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_multi())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(s: &str) -> UniPoly {
        let p = MultiPoly::parse(s).unwrap();
        let v = p.vars().first().copied().unwrap_or(0);
        UniPoly::from_multi(&p, v).unwrap()
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(u("(b - 1)^2").squarefree_part().unwrap(), u("b - 1"));
        let q = u("b^2 + 4*b*(b - 1)^3");
        assert_eq!(q.squarefree_part().unwrap(), q.primitive());
        assert_eq!(UniPoly::from_ints(0, &[5]).squarefree_part().unwrap(), UniPoly::from_ints(0, &[1]));
    }

    #[test]
    fn perfect_squares() {
        assert!(!u("b^2 + 4*b*(b - 1)^3").is_perfect_square().unwrap());
        assert!(u("4*b^2 - 8*b + 4").is_perfect_square().unwrap());
        assert!(!u("b^3").is_perfect_square().unwrap());
        assert!(u("(b^2 + 1)^2*(b - 3)^4").is_perfect_square().unwrap());
    }

    #[test]
    fn sturm_examples() {
        assert_eq!(u("2*a^2 - 1").sturm_real_roots().unwrap(), 2);
        assert_eq!(u("b^2 + 1").sturm_real_roots().unwrap(), 0);
        assert_eq!(u("a^3 - 2*a^2 + 3*a - 1").sturm_real_roots().unwrap(), 1);
        assert!(matches!(u("(a - 1)^2").sturm_real_roots(), Err(AlgebraError::NotSquarefree)));
    }

    #[test]
    fn factor_examples() {
        let f = u("b^3 - 2*b^2 + b - 1").factor_small().unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(u("b^2 - b - 1").factor_small().unwrap().len(), 1);
        let f = u("b^2 - 1").factor_small().unwrap();
        assert_eq!(f, vec![(u("b + 1"), 1), (u("b - 1"), 1)]);
        let f = u("(a^2 + 1)*(a^2 + a + 2)*(a - 2)^2").factor_small().unwrap();
        assert_eq!(f.len(), 3);
        let f = u("(a^3 + a + 1)*(a^3 - 2)").factor_small().unwrap();
        assert_eq!(f.len(), 2);
        assert!(u("a^7 + 1").factor_small().is_err());
    }
}
