//! Extension fields `GF(p^K)` with `p^K >= 2^20`, used as evaluation fields
//! when certifying ranks over `F_p(t_1, ..., t_n)`.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_traits::{One, Zero};
use rand::Rng;

use super::field::{Field, ScalarOver};
use super::fp::Fp;

/// Maximal extension degree (reached for p = 2).
pub const GF_MAX_DEGREE: usize = 20;

/// Primes for which extension fields are available.
pub const SUPPORTED_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// Smallest `k` with `p^k >= 2^20`.
pub const fn extension_degree(p: u64) -> usize {
    let mut k = 0;
    let mut acc: u64 = 1;
    while acc < (1 << 20) {
        acc *= p;
        k += 1;
    }
    k
}

/// Element of `GF(P^K)` stored as coefficients of a polynomial of degree < K
/// modulo a fixed irreducible polynomial.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gf<const P: u64> {
    c: [u8; GF_MAX_DEGREE],
}

impl<const P: u64> Gf<P> {
    pub const DEGREE: usize = extension_degree(P);

    pub fn from_digits(digits: &[u64]) -> Self {
        let mut c = [0u8; GF_MAX_DEGREE];
        for (slot, &d) in c.iter_mut().zip(digits.iter()).take(Self::DEGREE) {
            *slot = (d % P) as u8;
        }
        Gf { c }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut c = [0u8; GF_MAX_DEGREE];
        for slot in c.iter_mut().take(Self::DEGREE) {
            *slot = rng.gen_range(0..P) as u8;
        }
        Gf { c }
    }

    pub fn digits(&self) -> &[u8] {
        &self.c[..Self::DEGREE]
    }

    fn modulus() -> &'static [u8] {
        modulus_for(P)
    }
}

fn modulus_for(p: u64) -> &'static [u8] {
    static MODULI: [OnceLock<Vec<u8>>; SUPPORTED_PRIMES.len()] =
        [const { OnceLock::new() }; SUPPORTED_PRIMES.len()];
    let idx = SUPPORTED_PRIMES
        .iter()
        .position(|&q| q == p)
        .unwrap_or_else(|| panic!("no extension field configured for p = {p}"));
    MODULI[idx].get_or_init(|| find_irreducible(p, extension_degree(p)))
}

/// First monic irreducible polynomial of degree `k` over `F_p` in counting
/// order, returned as its `k` low coefficients.
pub fn find_irreducible(p: u64, k: usize) -> Vec<u8> {
    let mut low = vec![0u64; k];
    low[0] = 1;
    loop {
        let mut f = low.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return low.iter().map(|&x| x as u8).collect();
        }
        // increment in base p
        let mut i = 0;
        loop {
            low[i] += 1;
            if low[i] < p {
                break;
            }
            low[i] = 0;
            i += 1;
            assert!(i < k, "exhausted candidate polynomials");
        }
    }
}

/// Rabin's irreducibility test for a monic polynomial given low-to-high.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    let x = vec![0, 1];
    // x^(p^i) mod f for i = 1..=k
    let mut powers = Vec::with_capacity(k);
    let mut cur = poly_rem(&x, f, p);
    for _ in 0..k {
        cur = poly_powmod(&cur, p, f, p);
        powers.push(cur.clone());
    }
    let mut xk = powers[k - 1].clone();
    xk = poly_sub(&xk, &x, p);
    if !poly_rem(&xk, f, p).iter().all(|&c| c == 0) {
        return false;
    }
    for q in prime_divisors(k) {
        let e = k / q;
        let h = poly_sub(&powers[e - 1], &x, p);
        let g = poly_gcd(f.to_vec(), poly_rem(&h, f, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    super::field::pow_mod(a, p - 2, p)
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y % p) % p;
    }
    trim(out)
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &b, p), m, p);
        }
        b = poly_rem(&poly_mul(&b, &b, p), m, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    a = trim(a);
    b = trim(b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

impl<const P: u64> fmt::Debug for Gf<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<const P: u64> fmt::Display for Gf<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits: Vec<String> = self.digits().iter().map(|d| d.to_string()).collect();
        write!(f, "[{}]", digits.join(","))
    }
}

impl<const P: u64> Add for Gf<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut c = [0u8; GF_MAX_DEGREE];
        for (i, slot) in c.iter_mut().enumerate().take(Self::DEGREE) {
            *slot = ((self.c[i] as u64 + rhs.c[i] as u64) % P) as u8;
        }
        Gf { c }
    }
}

impl<const P: u64> Sub for Gf<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut c = [0u8; GF_MAX_DEGREE];
        for (i, slot) in c.iter_mut().enumerate().take(Self::DEGREE) {
            *slot = ((self.c[i] as u64 + P - rhs.c[i] as u64) % P) as u8;
        }
        Gf { c }
    }
}

impl<const P: u64> Neg for Gf<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::zero() - self
    }
}

impl<const P: u64> Mul for Gf<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let k = Self::DEGREE;
        let mut prod = [0u32; 2 * GF_MAX_DEGREE];
        for i in 0..k {
            let a = self.c[i] as u32;
            if a == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] += a * rhs.c[j] as u32;
            }
        }
        let p = P as u32;
        for v in prod.iter_mut() {
            *v %= p;
        }
        let m = Self::modulus();
        // x^k = -sum m_j x^j
        for i in (k..2 * k - 1).rev() {
            let top = prod[i] % p;
            if top == 0 {
                continue;
            }
            prod[i] = 0;
            for (j, &mj) in m.iter().enumerate() {
                prod[i - k + j] = (prod[i - k + j] + top * (p - mj as u32)) % p;
            }
        }
        let mut c = [0u8; GF_MAX_DEGREE];
        for i in 0..k {
            c[i] = (prod[i] % p) as u8;
        }
        Gf { c }
    }
}

impl<const P: u64> Zero for Gf<P> {
    fn zero() -> Self {
        Gf { c: [0; GF_MAX_DEGREE] }
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|&d| d == 0)
    }
}

impl<const P: u64> One for Gf<P> {
    fn one() -> Self {
        let mut c = [0; GF_MAX_DEGREE];
        c[0] = 1;
        Gf { c }
    }
}

impl<const P: u64> Field for Gf<P> {
    fn characteristic() -> u64 {
        P
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let order = P.pow(Self::DEGREE as u32);
        Some(self.pow(order - 2))
    }
}

impl<const P: u64> ScalarOver<Fp<P>> for Gf<P> {
    fn from_base(c: &Fp<P>) -> Self {
        let mut d = [0u8; GF_MAX_DEGREE];
        d[0] = c.value() as u8;
        Gf { c: d }
    }
}
