use super::poly::MultiPoly;
use super::AlgebraError;

/// Sylvester matrix of `f` and `g` with respect to `v`.
pub fn sylvester_matrix(f: &MultiPoly, g: &MultiPoly, v: usize) -> Vec<Vec<MultiPoly>> {
    let fc = f.coeffs_in(v);
    let gc = g.coeffs_in(v);
    let m = fc.len() - 1;
    let n = gc.len() - 1;
    let size = m + n;
    let mut rows = vec![];
    for i in 0..n {
        let mut row = vec![MultiPoly::zero(); size];
        for (j, c) in fc.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![MultiPoly::zero(); size];
        for (j, c) in gc.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Fraction-free (Bareiss) determinant over the polynomial ring.
pub fn bareiss_det(mut a: Vec<Vec<MultiPoly>>) -> MultiPoly {
    let n = a.len();
    if n == 0 {
        return MultiPoly::one();
    }
    let mut sign = false;
    let mut prev = MultiPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = !sign;
                }
                None => return MultiPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = MultiPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -&d
    } else {
        d
    }
}

/// Raw Sylvester resultant eliminating `v`.
pub fn resultant_raw(f: &MultiPoly, g: &MultiPoly, v: usize) -> Result<MultiPoly, AlgebraError> {
    if f.degree_in(v) == 0 || g.degree_in(v) == 0 {
        return Err(AlgebraError::DegreeZero);
    }
    Ok(bareiss_det(sylvester_matrix(f, g, v)))
}

/// Resultant eliminating `v`, primitive with positive leading coefficient.
pub fn resultant(f: &MultiPoly, g: &MultiPoly, v: usize) -> Result<MultiPoly, AlgebraError> {
    Ok(resultant_raw(f, g, v)?.primitive())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        MultiPoly::parse(s).unwrap()
    }

    #[test]
    fn eliminate_b_example() {
        let r = resultant(&p("a*b - a - b"), &p("a^2*b - a^2 + a + 1"), 1).unwrap();
        assert!(r.div_exact(&p("2*a^2 - 1")).is_some());
    }

    #[test]
    fn substitution_case() {
        assert_eq!(resultant(&p("a - b"), &p("b^2 + 1"), 1).unwrap(), p("a^2 + 1"));
    }

    #[test]
    fn common_factor_gives_zero() {
        let f = p("a*b + 1");
        assert!(resultant(&f, &f, 1).unwrap().is_zero());
        assert!(matches!(resultant(&p("a"), &f, 1), Err(AlgebraError::DegreeZero)));
    }
}
