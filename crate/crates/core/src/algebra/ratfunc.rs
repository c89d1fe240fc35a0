use std::fmt;

use super::poly::MultiPoly;
use super::AlgebraError;

/// Quotient of polynomials in lowest terms; the denominator is primitive with
/// positive leading coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFunction {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::from_poly(MultiPoly::zero()));
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g).expect("gcd divides");
        let den = den.div_exact(&g).expect("gcd divides");
        let pden = den.primitive();
        // den = s * pden, so num/den = (num/s)/pden
        let s = den.leading_coeff() / pden.leading_coeff();
        Ok(RationalFunction { num: num.scale(&s.recip()), den: pden })
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RationalFunction { num: p, den: MultiPoly::one() }
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den).expect("nonzero denominators")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero denominators")
    }

    pub fn div(&self, o: &Self) -> Result<Self, AlgebraError> {
        if o.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Self::new(&self.num * &o.den, &self.den * &o.num)
    }

    /// Re-normalize; a no-op on values built through `new`.
    pub fn normalized(&self) -> Result<Self, AlgebraError> {
        Self::new(self.num.clone(), self.den.clone())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num.scale(&self.den.leading_coeff().recip()))
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Determinant of a 3x3 matrix of rational functions, returned as its
/// numerator made primitive.
pub fn det3(rows: &[[RationalFunction; 3]; 3]) -> MultiPoly {
    let m = |i: usize, j: usize| &rows[i][j];
    let t1 = m(0, 0).mul(&m(1, 1).mul(m(2, 2)).sub(&m(1, 2).mul(m(2, 1))));
    let t2 = m(0, 1).mul(&m(1, 0).mul(m(2, 2)).sub(&m(1, 2).mul(m(2, 0))));
    let t3 = m(0, 2).mul(&m(1, 0).mul(m(2, 1)).sub(&m(1, 1).mul(m(2, 0))));
    t1.sub(&t2).add(&t3).num().primitive()
}

/// Determinant of a 3x3 polynomial matrix.
pub fn det3_poly(r: &[[MultiPoly; 3]; 3]) -> MultiPoly {
    let minor = |a: &MultiPoly, b: &MultiPoly, c: &MultiPoly, d: &MultiPoly| &(a * d) - &(b * c);
    let t1 = &r[0][0] * &minor(&r[1][1], &r[1][2], &r[2][1], &r[2][2]);
    let t2 = &r[0][1] * &minor(&r[1][0], &r[1][2], &r[2][0], &r[2][2]);
    let t3 = &r[0][2] * &minor(&r[1][0], &r[1][1], &r[2][0], &r[2][1]);
    &(&t1 - &t2) + &t3
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(n: &str, d: &str) -> RationalFunction {
        RationalFunction::new(MultiPoly::parse(n).unwrap(), MultiPoly::parse(d).unwrap()).unwrap()
    }

    #[test]
    fn lowest_terms() {
        let x = rf("a^2 - b^2", "2*a + 2*b");
        assert_eq!(x.num().to_string(), "1/2*a - 1/2*b");
        assert!(x.den().is_constant());
        let y = rf("a", "-a*b - a");
        assert_eq!(y.den().to_string(), "b + 1");
        assert_eq!(y.num().to_string(), "-1");
    }

    #[test]
    fn identity_and_repeated_rows() {
        let one = rf("1", "1");
        let zero = rf("0", "1");
        let id = [
            [one.clone(), zero.clone(), zero.clone()],
            [zero.clone(), one.clone(), zero.clone()],
            [zero.clone(), zero.clone(), one.clone()],
        ];
        assert_eq!(det3(&id), MultiPoly::one());
        let r = [rf("a", "b"), rf("1", "a - 1"), rf("b", "1")];
        let rep = [r.clone(), r.clone(), [one.clone(), zero.clone(), one.clone()]];
        assert!(det3(&rep).is_zero());
    }
}
