//! Univariate and multivariate polynomials over GF(q).

mod bivariate;
mod multi;
mod uni;

pub use bivariate::BiPoly;
pub use multi::{order_tuples, Exponents, MonomialOrder, WPoly};
pub use uni::UniPoly;

/// `binom(n, k) mod p` by Lucas's theorem.
pub fn binom_mod(mut n: u64, mut k: u64, p: u32) -> u32 {
    let p64 = p as u64;
    let mut acc = 1u64;
    while k > 0 {
        let (nd, kd) = (n % p64, k % p64);
        if kd > nd {
            return 0;
        }
        acc = acc * small_binom_mod(nd, kd, p64) % p64;
        n /= p64;
        k /= p64;
    }
    acc as u32
}

fn small_binom_mod(n: u64, k: u64, p: u64) -> u64 {
    let k = k.min(n - k);
    let (mut num, mut den) = (1u64, 1u64);
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * mod_pow(den, p - 2, p) % p
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}
