//! Arithmetic in `Q(zeta_n) = Q[x]/(Phi_n(x))` in the power basis `1, zeta, ..., zeta^(phi(n)-1)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Largest cyclotomic order accepted by descriptors.
pub const MAX_CYCLOTOMIC_ORDER: u32 = 720;

/// Per-order context: the cyclotomic polynomial and the reductions of `x^j`.
pub struct Cyclotomic {
    order: u32,
    /// Coefficients of `Phi_n`, low degree first; monic of degree `phi(n)`.
    modulus: Vec<BigInt>,
    /// `powers[j]` is `x^j mod Phi_n` for `0 <= j < n`.
    powers: Vec<Vec<BigRational>>,
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Cyclotomic").field("order", &self.order).field("degree", &self.degree()).finish()
    }
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Exact division of integer polynomials by a monic divisor.
fn div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    debug_assert!(den[dd].is_one());
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// `Phi_n` by dividing `x^n - 1` by `Phi_d` for every proper divisor `d`.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    fn go(n: u32, memo: &mut HashMap<u32, Vec<BigInt>>) -> Vec<BigInt> {
        if let Some(p) = memo.get(&n) {
            return p.clone();
        }
        let mut xn1 = vec![BigInt::zero(); n as usize + 1];
        xn1[0] = -BigInt::one();
        xn1[n as usize] = BigInt::one();
        let mut den = vec![BigInt::one()];
        for d in divisors(n).into_iter().filter(|&d| d < n) {
            den = poly_mul(&den, &go(d, memo));
        }
        let phi = div_exact(&xn1, &den);
        memo.insert(n, phi.clone());
        phi
    }
    go(n, &mut HashMap::new())
}

impl Cyclotomic {
    fn build(order: u32) -> Self {
        let modulus = cyclotomic_polynomial(order);
        let degree = modulus.len() - 1;
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![BigRational::zero(); degree];
        cur[0] = BigRational::one();
        for _ in 0..order {
            powers.push(cur.clone());
            // multiply by x and reduce the overflow coefficient
            let top = cur[degree - 1].clone();
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = BigRational::zero();
            if !top.is_zero() {
                for (i, c) in cur.iter_mut().enumerate() {
                    *c -= &top * BigRational::from_integer(modulus[i].clone());
                }
            }
        }
        Cyclotomic { order, modulus, powers }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `phi(n)`, the dimension over `Q`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    /// Coordinates of `zeta^k` for any integer `k`.
    pub fn power(&self, k: i64) -> &[BigRational] {
        let n = self.order as i64;
        &self.powers[k.rem_euclid(n) as usize]
    }

    /// Reduce a coefficient vector of any length modulo `Phi_n`.
    pub fn reduce(&self, mut coeffs: Vec<BigRational>) -> Vec<BigRational> {
        let d = self.degree();
        while coeffs.len() > d {
            let c = coeffs.pop().unwrap_or_else(BigRational::zero);
            if c.is_zero() {
                continue;
            }
            let shift = coeffs.len() - d;
            for (j, mj) in self.modulus[..d].iter().enumerate() {
                coeffs[shift + j] -= &c * BigRational::from_integer(mj.clone());
            }
        }
        coeffs.resize(d, BigRational::zero());
        coeffs
    }

    pub fn mul(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() {
                    out[i + j] += ai * bj;
                }
            }
        }
        self.reduce(out)
    }

    /// Inverse via the extended Euclidean algorithm in `Q[x]`; `None` for zero.
    pub fn inverse(&self, a: &[BigRational]) -> Option<Vec<BigRational>> {
        let mut r0: Vec<BigRational> =
            self.modulus.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let mut r1 = trim(a.to_vec());
        if r1.is_empty() {
            return None;
        }
        let mut s0: Vec<BigRational> = Vec::new();
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        while r1.len() > 1 {
            let (q, r) = divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul_q(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is a nonzero constant since Phi_n is irreducible
        let c = r1[0].clone();
        let inv: Vec<BigRational> = s1.into_iter().map(|x| x / &c).collect();
        Some(self.reduce(inv))
    }

    /// Complex conjugation: `zeta^j -> zeta^(-j)`.
    pub fn conjugate(&self, a: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.degree()];
        for (j, aj) in a.iter().enumerate() {
            if aj.is_zero() {
                continue;
            }
            for (o, pj) in out.iter_mut().zip(self.power(-(j as i64))) {
                if !pj.is_zero() {
                    *o += aj * pj;
                }
            }
        }
        out
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            match b.get(i) {
                Some(y) => x - y,
                None => x,
            }
        })
        .collect();
    trim(out)
}

fn poly_mul_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    trim(out)
}

fn divrem(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = trim(num.to_vec());
    let dd = den.len() - 1;
    let lead = &den[dd];
    if rem.len() < den.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + dd] / lead;
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    (trim(quot), trim(rem))
}

static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Cyclotomic>>>> = OnceLock::new();

/// Shared context for `Q(zeta_order)`, built once per order. Callers validate `order`.
pub fn context(order: u32) -> Arc<Cyclotomic> {
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard.entry(order).or_insert_with(|| Arc::new(Cyclotomic::build(order))).clone()
}
