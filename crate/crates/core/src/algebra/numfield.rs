//! Arithmetic in Q[x]/(m) for squarefree `m`, splitting `m` whenever a zero
//! divisor shows up (dynamic evaluation).

use super::poly::{MultiPoly, NVARS};
use super::uni::UniPoly;

/// Splits `m` into the factor on whose roots `q` vanishes and the cofactor.
pub fn split(m: &UniPoly, q: &UniPoly) -> (UniPoly, UniPoly) {
    let g = m.gcd(&q.rem(m));
    let g = if g.is_zero() { m.monic() } else { g };
    let rest = m.div_exact(&g).expect("gcd divides");
    (g.primitive(), rest.primitive())
}

pub fn inverse(q: &UniPoly, m: &UniPoly) -> Option<UniPoly> {
    let (g, s) = q.gcdex_mod(m);
    if g.is_constant() && !g.is_zero() {
        Some(s.rem(m))
    } else {
        None
    }
}

/// Value of each parameter as an element of Q[x]/(m); `None` entries are
/// parameters that never occur.
pub type Env = [Option<UniPoly>; NVARS];

/// Evaluate `p` at the point described by `env`, reduced modulo `m`.
pub fn eval_mod(p: &MultiPoly, env: &Env, m: &UniPoly) -> Option<UniPoly> {
    let var = m.var;
    let mut acc = UniPoly::zero(var);
    for (mono, c) in p.terms() {
        let mut t = UniPoly::constant(var, c.clone());
        for v in 0..NVARS {
            if mono.0[v] > 0 {
                let base = env[v].as_ref()?;
                for _ in 0..mono.0[v] {
                    t = t.mul(base).rem(m);
                }
            }
        }
        acc = acc.add(&t);
    }
    Some(acc.rem(m))
}

/// Polynomial in one variable with coefficients in Q[x]/(m), lowest first.
pub type KPoly = Vec<UniPoly>;

fn trim(p: &mut KPoly) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

/// gcd over Q[x]/(m) of several polynomials; returns one monic gcd per
/// piece of the induced splitting of `m`.
pub fn gcd_split(polys: &[KPoly], m: &UniPoly) -> Vec<(UniPoly, KPoly)> {
    let mut out = vec![];
    let mut tasks: Vec<(UniPoly, Vec<KPoly>)> = vec![(m.clone(), polys.to_vec())];
    while let Some((m, mut ps)) = tasks.pop() {
        for p in ps.iter_mut() {
            for c in p.iter_mut() {
                *c = c.rem(&m);
            }
            trim(p);
        }
        ps.retain(|p| !p.is_empty());
        if ps.is_empty() {
            out.push((m, vec![]));
            continue;
        }
        // make every leading coefficient invertible or split
        let mut split_at = None;
        'outer: for (i, p) in ps.iter_mut().enumerate() {
            loop {
                let l = match p.last() {
                    Some(l) => l.clone(),
                    None => break,
                };
                let (z, u) = split(&m, &l);
                if z.is_constant() {
                    break;
                }
                if u.is_constant() {
                    p.pop();
                    continue;
                }
                split_at = Some((i, z, u));
                break 'outer;
            }
        }
        if let Some((_, z, u)) = split_at {
            tasks.push((z, ps.clone()));
            tasks.push((u, ps));
            continue;
        }
        ps.retain(|p| !p.is_empty());
        if ps.is_empty() {
            out.push((m, vec![]));
            continue;
        }
        if ps.len() == 1 {
            let p = &ps[0];
            let inv = inverse(p.last().unwrap(), &m).expect("invertible leading coefficient");
            let monic: KPoly = p.iter().map(|c| c.mul(&inv).rem(&m)).collect();
            out.push((m, monic));
            continue;
        }
        // one Euclidean step on the two lowest-degree polynomials
        ps.sort_by_key(|p| std::cmp::Reverse(p.len()));
        let b = ps.pop().unwrap();
        let a = ps.pop().unwrap();
        let inv = inverse(b.last().unwrap(), &m).expect("invertible leading coefficient");
        let mut r = a.clone();
        while r.len() >= b.len() && !r.is_empty() {
            let shift = r.len() - b.len();
            let t = r.last().unwrap().mul(&inv).rem(&m);
            for (j, bj) in b.iter().enumerate() {
                r[j + shift] = r[j + shift].sub(&t.mul(bj)).rem(&m);
            }
            trim(&mut r);
        }
        ps.push(b);
        if !r.is_empty() {
            ps.push(r);
        }
        tasks.push((m, ps));
    }
    out
}

/// Embed a multivariate polynomial in `v` (with coefficients involving only
/// already-evaluated parameters) into K[v].
pub fn to_kpoly(p: &MultiPoly, v: usize, env: &Env, m: &UniPoly) -> Option<KPoly> {
    let mut out = vec![];
    for c in p.coeffs_in(v) {
        out.push(eval_mod(&c, env, m)?);
    }
    trim(&mut out);
    Some(out)
}
#[cfg(test)]
mod tests {
    use super::*;

    fn u(s: &str, v: usize) -> UniPoly {
        UniPoly::from_multi(&MultiPoly::parse(s).unwrap(), v).unwrap()
    }

    #[test]
    fn split_on_zero_divisor() {
        let m = u("(a^2 - 2)*(a - 1)", 0);
        let (z, rest) = split(&m, &u("a - 1", 0));
        assert_eq!(z, u("a - 1", 0));
        assert_eq!(rest, u("a^2 - 2", 0));
    }

    #[test]
    fn gcd_with_splitting() {
        // over a with a^2 = 1: b - a and b^2 - 1 share b - a everywhere;
        // (a - 1)*b + 1 has zero leading coefficient at a = 1
        let m = u("a^2 - 1", 0);
        let mut env: Env = Default::default();
        env[0] = Some(UniPoly::x(0));
        let f = to_kpoly(&MultiPoly::parse("b^2 - 1").unwrap(), 1, &env, &m).unwrap();
        let g = to_kpoly(&MultiPoly::parse("(a - 1)*b + a - 1").unwrap(), 1, &env, &m).unwrap();
        let res = gcd_split(&[f, g], &m);
        assert_eq!(res.len(), 2);
        for (piece, g) in res {
            if piece == u("a - 1", 0) {
                assert_eq!(g.len(), 3);
            } else {
                assert_eq!(g.len(), 2);
            }
        }
    }
}
