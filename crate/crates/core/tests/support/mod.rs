//! Test-only oracles shared by the property suites and the acceptance run.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use workbench::algebra::{abs_irreducible_quadratic, resultant, Monomial, MultiPoly, QuadraticVerdict, Rational, UniPoly};
use workbench::incidence::{canonical_form, ConfigTable};

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Polynomial in `vars` of total degree <= `deg` from a flat coefficient list.
pub fn poly_from(vars: &[usize], deg: u32, coeffs: &[i64]) -> MultiPoly {
    let mut monos = vec![];
    let mut stack = vec![(0usize, Monomial::one())];
    while let Some((i, m)) = stack.pop() {
        if i == vars.len() {
            monos.push(m);
            continue;
        }
        for e in 0..=deg {
            let mut m2 = m;
            m2.0[vars[i]] = e;
            if m2.degree() <= deg {
                stack.push((i + 1, m2));
            }
        }
    }
    monos.sort();
    MultiPoly::from_terms(monos.into_iter().zip(coeffs.iter().cycle()).map(|(m, &c)| (m, q(c))))
}

// ---- real-root counting oracle: Descartes bisection (Vincent-Collins-Akritas)

type Dense = Vec<Rational>;

fn sign_variations(p: &Dense) -> usize {
    let signs: Vec<bool> = p.iter().filter(|c| !c.is_zero()).map(|c| c.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// p(x + 1)
fn taylor_shift(p: &Dense) -> Dense {
    let mut c = p.clone();
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = c[j + 1].clone();
            c[j] += t;
        }
    }
    c
}

/// p(s*x)
fn scale(p: &Dense, s: &Rational) -> Dense {
    let mut f = Rational::one();
    p.iter()
        .map(|c| {
            let r = c * &f;
            f *= s;
            r
        })
        .collect()
}

fn eval(p: &Dense, x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Roots in the open interval (0, 1) of a squarefree polynomial.
fn roots_in_unit(p: &Dense) -> usize {
    // (x+1)^n p(1/(x+1)): reverse, then shift
    let mut rev = p.clone();
    rev.reverse();
    match sign_variations(&taylor_shift(&rev)) {
        0 => 0,
        1 => 1,
        _ => {
            let half = Rational::new(BigInt::from(1), BigInt::from(2));
            let left = scale(p, &half);
            let right = taylor_shift(&left);
            let mid = usize::from(eval(p, &half).is_zero());
            roots_in_unit(&left) + roots_in_unit(&right) + mid
        }
    }
}

pub fn bisection_count(p: &Dense) -> usize {
    let n = p.len() - 1;
    let lead = p[n].abs();
    let bound = p[..n].iter().map(|c| c.abs() / &lead).fold(Rational::zero(), |a, b| if b > a { b } else { a }) + Rational::one();
    // t in (0,1) -> x = -B + 2Bt
    let shifted = {
        let mut c = scale(p, &bound);
        // c(y) = p(B y); want c(y - 1) with y = 2t
        let neg_one = -Rational::one();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = &c[j + 1] * &neg_one;
                c[j] += t;
            }
        }
        scale(&c, &q(2))
    };
    roots_in_unit(&shifted)
}

pub fn squarefree_sample(seed: u64) -> UniPoly {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut p = UniPoly::from_ints(0, &[1]);
        let deg = rng.gen_range(1..=5);
        let mut d = 0;
        while d < deg {
            if deg - d >= 2 && rng.gen_bool(0.3) {
                let f = UniPoly::from_ints(0, &[rng.gen_range(-9..=9), rng.gen_range(-9..=9), rng.gen_range(1..=4)]);
                p = p.mul(&f);
                d += 2;
            } else {
                let r = Rational::new(BigInt::from(rng.gen_range(-20..=20)), BigInt::from(rng.gen_range(1..=7)));
                p = p.mul(&UniPoly::new(0, vec![-r, Rational::one()]));
                d += 1;
            }
        }
        if rng.gen_bool(0.3) {
            let c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-6..=6)).collect();
            p = UniPoly::from_ints(0, &c);
        }
        if p.degree() >= 1 && p.gcd(&p.derivative()).is_constant() {
            return p;
        }
    }
}

// ---- absolute irreducibility: truth by construction

#[derive(Debug)]
pub struct Sample {
    pub p: MultiPoly,
    pub var: usize,
    pub truth: QuadraticVerdict,
}

fn rand_uni(rng: &mut ChaCha8Rng, x: usize, deg: u32) -> MultiPoly {
    let mut p = MultiPoly::zero();
    for e in 0..=deg {
        let mut m = Monomial::one();
        m.0[x] = e;
        p = &p + &MultiPoly::monomial(m, q(rng.gen_range(-4..=4)));
    }
    p
}

/// Bivariate polynomials of total degree <= 4, quadratic in `var`, whose
/// factorization over C is known from how they were built.
pub fn quadratic_samples() -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = vec![];
    while out.len() < 50 {
        let var = rng.gen_range(0..2);
        let x = 1 - var;
        let y = MultiPoly::var(var);
        let kind = out.len() % 5;
        let s = match kind {
            // product of two factors linear in y
            0 => {
                let f = &(&y * &rand_uni(&mut rng, x, 0)) + &rand_uni(&mut rng, x, 1);
                let g = &(&y * &rand_uni(&mut rng, x, 1)) + &rand_uni(&mut rng, x, 2);
                Sample { p: &f * &g, var, truth: QuadraticVerdict::Reducible { real_split: true } }
            }
            // nonconstant content in y
            1 => {
                let h = &(&(&y * &y) * &rand_uni(&mut rng, x, 0)) + &(&(&y * &rand_uni(&mut rng, x, 1)) + &rand_uni(&mut rng, x, 1));
                let c = &MultiPoly::var(x) - &MultiPoly::from_int(rng.gen_range(-3..=3));
                Sample { p: &h * &c, var, truth: QuadraticVerdict::Reducible { real_split: true } }
            }
            // u^2 - k v^2 with k not a rational square
            2 | 3 => {
                let k = [2i64, 3, 5, 7, -1, -2, -3, -5][rng.gen_range(0..8)];
                let u = &y + &rand_uni(&mut rng, x, 2);
                let v = rand_uni(&mut rng, x, 2);
                let p = &(&u * &u) - &(&(&v * &v) * &MultiPoly::from_int(k));
                Sample { p, var, truth: QuadraticVerdict::Reducible { real_split: k > 0 } }
            }
            // y^2 + B y + C with discriminant x*q(x), q(0) != 0: not a square
            _ => {
                let bb = rand_uni(&mut rng, x, 2);
                let mut qq = rand_uni(&mut rng, x, 3);
                qq = &qq + &MultiPoly::from_int(if qq.eval(&[q(0), q(0), q(0), q(0)]).is_zero() { 1 } else { 0 });
                let disc = &MultiPoly::var(x) * &qq;
                let c = (&(&bb * &bb) - &disc).scale(&Rational::new(1.into(), 4.into()));
                Sample { p: &(&(&y * &y) + &(&bb * &y)) + &c, var, truth: QuadraticVerdict::Irreducible }
            }
        };
        let degenerate = s.p.degree_in(var) != 2 || s.p.total_degree() > 4 || (kind >= 2 && kind <= 3 && s.p.coeffs_in(var).len() < 3);
        let zero_v = kind >= 2 && kind <= 3 && {
            // v == 0 makes u^2 a square
            s.p.coeffs_in(var).len() == 3 && {
                let cs = s.p.coeffs_in(var);
                (&(&cs[1] * &cs[1]) - &(&(&cs[0] * &cs[2]) * &MultiPoly::from_int(4))).is_zero()
            }
        };
        if !degenerate && !zero_v {
            out.push(s);
        }
    }
    out
}


/// Suites used by the acceptance run; each returns the number of cases
/// checked or the first disagreement.

pub fn sturm_suite(n: u64) -> Result<usize, String> {
    for seed in 0..n {
        let p = squarefree_sample(seed);
        let sturm = p.sturm_real_roots().map_err(|e| e.to_string())?;
        let oracle = bisection_count(&p.coeffs().to_vec());
        if sturm != oracle {
            return Err(format!("{}: sturm {} bisection {}", p, sturm, oracle));
        }
    }
    Ok(n as usize)
}

/// f, g share the planted root (alpha, beta); res_a(f, g) must vanish at
/// b = beta and at every common root found on a small grid.
pub fn resultant_case(alpha: i64, beta: i64, cs: [&[i64]; 4]) -> Result<bool, String> {
    let a = MultiPoly::var(0);
    let b = MultiPoly::var(1);
    let da = &a - &MultiPoly::from_int(alpha);
    let db = &b - &MultiPoly::from_int(beta);
    let f = &(&da * &poly_from(&[0, 1], 2, cs[0])) + &(&db * &poly_from(&[0, 1], 2, cs[1]));
    let g = &(&da * &poly_from(&[0, 1], 2, cs[2])) + &(&db * &poly_from(&[0, 1], 2, cs[3]));
    if f.degree_in(0) == 0 || g.degree_in(0) == 0 {
        return Ok(false);
    }
    let r = resultant(&f, &g, 0).map_err(|e| e.to_string())?;
    let fail = |what: String| Err(format!("f = {}, g = {}: {}", f, g, what));
    if r.contains_var(0) {
        return fail("resultant still contains a".into());
    }
    if !r.eval_var(1, &q(beta)).is_zero() {
        return fail(format!("resultant nonzero at b = {}", beta));
    }
    for an in -6i64..=6 {
        for bn in -3i64..=3 {
            let pt = [Rational::new(an.into(), 2.into()), q(bn), q(0), q(0)];
            if f.eval(&pt).is_zero() && g.eval(&pt).is_zero() && !r.eval_var(1, &q(bn)).is_zero() {
                return fail(format!("common root at a = {}/2, b = {}", an, bn));
            }
        }
    }
    Ok(true)
}

pub fn resultant_suite(n: usize) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut done = 0;
    while done < n {
        let cs: Vec<Vec<i64>> = (0..4).map(|_| (0..6).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        if resultant_case(rng.gen_range(-3..=3), rng.gen_range(-3..=3), [&cs[0], &cs[1], &cs[2], &cs[3]])? {
            done += 1;
        }
    }
    Ok(done)
}

pub fn relabel_suite(tables: &[(String, ConfigTable)], n: usize) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..n {
        let (name, t) = &tables[i % tables.len()];
        let mut lp: Vec<usize> = (0..t.k()).collect();
        let mut pp: Vec<usize> = (0..t.n3()).collect();
        lp.shuffle(&mut rng);
        pp.shuffle(&mut rng);
        if canonical_form(&t.relabel(&lp, &pp)) != canonical_form(t) {
            return Err(format!("{} changed form under relabeling {:?} {:?}", name, lp, pp));
        }
    }
    Ok(n)
}

pub fn quadratic_suite() -> Result<usize, String> {
    let samples = quadratic_samples();
    for s in &samples {
        let got = abs_irreducible_quadratic(&s.p, s.var);
        if got != s.truth {
            return Err(format!("{}: got {:?}, built as {:?}", s.p, got, s.truth));
        }
    }
    Ok(samples.len())
}
