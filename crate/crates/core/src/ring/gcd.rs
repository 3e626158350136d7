//! Multivariate gcd over the rationals.
//!
//! Coprimality is first certified by univariate images modulo a prime. Otherwise
//! the heuristic evaluation/interpolation gcd is tried on the integer associates,
//! falling back to recursive primitive remainder sequences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{Monomial, MultiPoly};
use super::MAX_VARS;

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one();
    }
    if let Some(g) = monomial_gcd(a, b) {
        return g;
    }
    if certified_coprime(a, b) {
        return MultiPoly::one();
    }
    let ia = integer_associate(a);
    let ib = integer_associate(b);
    if let Some(g) = heu_gcd(&ia, &ib) {
        return g.monic();
    }
    gcd_rec(a, b).monic()
}

/// Cheap path when one side is a single term.
fn monomial_gcd(a: &MultiPoly, b: &MultiPoly) -> Option<MultiPoly> {
    let (mono, other) = if a.num_terms() == 1 {
        (a, b)
    } else if b.num_terms() == 1 {
        (b, a)
    } else {
        return None;
    };
    let (m, _) = mono.leading()?;
    let mut e = m.0;
    for (t, _) in other.terms() {
        for i in 0..MAX_VARS {
            e[i] = e[i].min(t.0[i]);
        }
    }
    Some(MultiPoly::monomial(Monomial(e), BigRational::one()))
}

fn int(c: BigInt) -> BigRational {
    BigRational::from_integer(c)
}

/// Integer polynomial with coprime coefficients and positive leading coefficient.
fn integer_associate(p: &MultiPoly) -> MultiPoly {
    let l = p.denominator_lcm();
    let q = p.scale(&int(l));
    let c = int_content(&q);
    let q = q.scale(&BigRational::new(BigInt::one(), c));
    if q.leading_is_negative() {
        q.neg()
    } else {
        q
    }
}

fn int_content(p: &MultiPoly) -> BigInt {
    let mut g = BigInt::zero();
    for (_, c) in p.terms() {
        g = g.gcd(c.numer());
        if g.is_one() {
            break;
        }
    }
    g
}

fn max_norm(p: &MultiPoly) -> BigInt {
    p.terms().map(|(_, c)| c.numer().abs()).max().unwrap_or_else(BigInt::zero)
}

fn eval_var(p: &MultiPoly, v: usize, x: &BigInt) -> MultiPoly {
    let mut out = MultiPoly::zero();
    for (m, c) in p.terms() {
        let mut nm = *m;
        let e = nm.0[v];
        nm.0[v] = 0;
        out.add_term(nm, c * int(num_traits::pow(x.clone(), e as usize)));
    }
    out
}

fn symmetric_mod(c: &BigInt, x: &BigInt) -> BigInt {
    let mut r = c.mod_floor(x);
    if &r * 2 > *x {
        r -= x;
    }
    r
}

/// Recover a polynomial in `v` from its image at `v = x`.
fn interpolate(h: &MultiPoly, v: usize, x: &BigInt) -> MultiPoly {
    let mut out = MultiPoly::zero();
    let mut h = h.clone();
    let mut i: u16 = 0;
    while !h.is_zero() {
        let mut g = MultiPoly::zero();
        for (m, c) in h.terms() {
            g.add_term(*m, int(symmetric_mod(c.numer(), x)));
        }
        for (m, c) in g.terms() {
            let mut nm = *m;
            nm.0[v] += i;
            out.add_term(nm, c.clone());
        }
        h = h.sub(&g).scale(&BigRational::new(BigInt::one(), x.clone()));
        i += 1;
        if i > 2000 {
            break;
        }
    }
    out
}

/// Heuristic gcd of integer polynomials; `None` when it gives up.
fn heu_gcd(f: &MultiPoly, g: &MultiPoly) -> Option<MultiPoly> {
    if f.is_zero() {
        return Some(if g.leading_is_negative() { g.neg() } else { g.clone() });
    }
    if g.is_zero() {
        return Some(if f.leading_is_negative() { f.neg() } else { f.clone() });
    }
    let cf = int_content(f);
    let cg = int_content(g);
    let c = cf.gcd(&cg);
    if f.is_constant() || g.is_constant() {
        return Some(MultiPoly::constant(int(c)));
    }
    let f = f.scale(&BigRational::new(BigInt::one(), cf));
    let g = g.scale(&BigRational::new(BigInt::one(), cg));
    let v = (0..MAX_VARS).find(|&v| f.uses_var(v) || g.uses_var(v))?;
    let fnorm = max_norm(&f);
    let gnorm = max_norm(&g);
    let b: BigInt = BigInt::from(2) * fnorm.clone().min(gnorm.clone()) + BigInt::from(29);
    let lf = f.leading().map(|(_, c)| c.numer().abs()).unwrap();
    let lg = g.leading().map(|(_, c)| c.numer().abs()).unwrap();
    let mut x = (b.clone().min(BigInt::from(99) * b.sqrt()))
        .max(BigInt::from(2) * (&fnorm / lf).min(&gnorm / lg) + 2);
    for _ in 0..6 {
        let ff = eval_var(&f, v, &x);
        let gg = eval_var(&g, v, &x);
        if !ff.is_zero() && !gg.is_zero() {
            if let Some(h) = heu_gcd(&ff, &gg) {
                let h = interpolate(&h, v, &x);
                if !h.is_zero() {
                    let h = integer_associate(&h);
                    if f.div_exact(&h).is_some() && g.div_exact(&h).is_some() {
                        return Some(h.scale(&int(c)));
                    }
                }
            }
        }
        x = BigInt::from(73794) * &x * x.sqrt().sqrt() / BigInt::from(27011);
    }
    None
}

fn gcd_rec(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() || certified_coprime(a, b) {
        return MultiPoly::one();
    }
    let v = match (0..MAX_VARS).find(|&v| a.uses_var(v) || b.uses_var(v)) {
        Some(v) => v,
        None => return MultiPoly::one(),
    };
    let in_a = a.uses_var(v);
    let in_b = b.uses_var(v);
    if !in_a {
        return gcd_rec(a, &content(b, v));
    }
    if !in_b {
        return gcd_rec(&content(a, v), b);
    }
    let ca = content(a, v);
    let cb = content(b, v);
    let c = gcd_rec(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = prem(&p, &q, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            q = MultiPoly::one();
            break;
        }
        p = q;
        q = primitive_part(&r, v);
    }
    c.mul(&primitive_part(&q, v)).monic()
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
fn content(p: &MultiPoly, v: usize) -> MultiPoly {
    let mut g = MultiPoly::zero();
    for (_, c) in p.coefficients_in(v).into_iter().rev() {
        g = if g.is_zero() { c.monic() } else { gcd(&g, &c) };
        if g.is_constant() {
            return MultiPoly::one();
        }
    }
    g
}

fn primitive_part(p: &MultiPoly, v: usize) -> MultiPoly {
    let c = content(p, v);
    integer_associate(&p.div_exact(&c).expect("content divides"))
}

/// Pseudo-remainder of `a` by `b` in variable `v`.
fn prem(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
    let db = b.degree_in(v);
    let bc = b.coefficients_in(v);
    let lb = bc.get(&db).cloned().unwrap_or_default();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.coefficients_in(v).remove(&dr).unwrap_or_default();
        let mut shift = Monomial::one();
        shift.0[v] = dr - db;
        let t = lr.mul_term(&shift, &BigRational::one());
        r = r.mul(&lb).sub(&t.mul(b));
    }
    r
}

const PRIME: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn invmod(a: u64) -> u64 {
    powmod(a, PRIME - 2)
}

fn to_mod(c: &BigRational) -> Option<u64> {
    let p = BigInt::from(PRIME);
    let n = c.numer().mod_floor(&p).to_u64()?;
    let d = c.denom().mod_floor(&p).to_u64()?;
    if d == 0 {
        return None;
    }
    Some(mulmod(n, invmod(d)))
}

const SAMPLE_POINTS: [u64; 8] = [1_000_003, 2_000_029, 3_000_017, 4_000_037, 5_000_011, 6_000_007, 7_000_003, 8_000_009];

/// Sufficient test for a constant gcd: for each shared variable, specialize the
/// others modulo a prime keeping leading coefficients alive and compare univariate gcds.
fn certified_coprime(a: &MultiPoly, b: &MultiPoly) -> bool {
    for v in 0..MAX_VARS {
        if !(a.uses_var(v) && b.uses_var(v)) {
            continue;
        }
        let mut certified = false;
        for shift in 0..3u64 {
            let point: Vec<u64> = (0..MAX_VARS).map(|i| SAMPLE_POINTS[(i + shift as usize) % 8] + 97 * shift).collect();
            let (ua, ub) = match (specialize(a, v, &point), specialize(b, v, &point)) {
                (Some(x), Some(y)) => (x, y),
                _ => continue,
            };
            if ua.len() != a.degree_in(v) as usize + 1 || ub.len() != b.degree_in(v) as usize + 1 {
                continue;
            }
            if univariate_gcd_degree(ua, ub) == 0 {
                certified = true;
            }
            break;
        }
        if !certified {
            return false;
        }
    }
    true
}

/// Dense coefficients in `v` modulo the prime after specializing the other variables.
fn specialize(p: &MultiPoly, v: usize, point: &[u64]) -> Option<Vec<u64>> {
    let mut out = vec![0u64; p.degree_in(v) as usize + 1];
    for (m, c) in p.terms() {
        let mut t = to_mod(c)?;
        for i in 0..MAX_VARS {
            if i != v && m.0[i] > 0 {
                t = mulmod(t, powmod(point[i], m.0[i] as u64));
            }
        }
        let slot = &mut out[m.0[v] as usize];
        *slot = (*slot + t) % PRIME;
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    Some(out)
}

fn univariate_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let inv = invmod(*b.last().unwrap());
        while a.len() >= b.len() && !a.is_empty() {
            let q = mulmod(*a.last().unwrap(), inv);
            let off = a.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                a[off + i] = (a[off + i] + PRIME - mulmod(q, *c)) % PRIME;
            }
            while a.last() == Some(&0) {
                a.pop();
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}
