//! Exact integer convolution via number-theoretic transforms.
//!
//! Verifier-side counts must be exact, so floating-point transforms are out.
//! Convolutions run modulo one or more word-size NTT-friendly primes, picked
//! so their product exceeds the worst-case entry bound
//! `min(|u|,|v|) * max(u) * max(v)`, and the residues are recombined by CRT.

use crate::error::{Error, Result};

/// An NTT-friendly prime together with a generator of its multiplicative
/// group and the 2-adicity of `p - 1` (the largest supported transform size
/// is `2^two_adicity`).
#[derive(Clone, Copy)]
struct NttPrime {
    p: u64,
    generator: u64,
    two_adicity: u32,
}

/// 2^64 - 2^32 + 1. Reduction after a 128-bit product needs no division.
const GOLDILOCKS: NttPrime = NttPrime {
    p: 0xFFFF_FFFF_0000_0001,
    generator: 7,
    two_adicity: 32,
};

/// 29 * 2^57 + 1, used as a second residue when one prime cannot cover the
/// entry bound.
const AUX_PRIME: NttPrime = NttPrime {
    p: 4_179_340_454_199_820_289,
    generator: 3,
    two_adicity: 57,
};

const GP: u64 = GOLDILOCKS.p;

#[inline(always)]
fn goldilocks_reduce(x: u128) -> u64 {
    // x = lo + 2^64 * hi with 2^64 = 2^32 - 1 and 2^96 = -1 (mod p).
    let lo = x as u64;
    let hi = (x >> 64) as u64;
    let hi_lo = hi & 0xFFFF_FFFF;
    let hi_hi = hi >> 32;
    let (mut t, borrow) = lo.overflowing_sub(hi_hi);
    if borrow {
        t = t.wrapping_add(GP);
    }
    let u = (hi_lo << 32) - hi_lo;
    // t + u < 2^65 - 2^33, so a single carry fix (2^64 = 2^32 - 1) cannot
    // overflow again.
    let (mut r, carry) = t.overflowing_add(u);
    if carry {
        r = r.wrapping_add(0xFFFF_FFFF);
    }
    if r >= GP {
        r -= GP;
    }
    r
}

#[inline(always)]
fn g_mul(a: u64, b: u64) -> u64 {
    goldilocks_reduce(a as u128 * b as u128)
}

#[inline(always)]
fn g_add(a: u64, b: u64) -> u64 {
    let (mut r, carry) = a.overflowing_add(b);
    if carry || r >= GP {
        r = r.wrapping_sub(GP);
    }
    r
}

#[inline(always)]
fn g_sub(a: u64, b: u64) -> u64 {
    let (mut r, borrow) = a.overflowing_sub(b);
    if borrow {
        r = r.wrapping_add(GP);
    }
    r
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn bit_reverse_permute(a: &mut [u64]) {
    let n = a.len();
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
}

/// In-place radix-2 transform over the Goldilocks field. `root` must be a
/// primitive `a.len()`-th root of unity. Twiddles advance on the fly, so no
/// table proportional to the transform size is kept.
fn ntt_goldilocks(a: &mut [u64], root: u64) {
    let n = a.len();
    bit_reverse_permute(a);
    let mut len = 2;
    while len <= n {
        let wlen = {
            // root^(n/len)
            let mut w = root;
            let mut k = n / len;
            let mut acc = 1u64;
            while k > 0 {
                if k & 1 == 1 {
                    acc = g_mul(acc, w);
                }
                w = g_mul(w, w);
                k >>= 1;
            }
            acc
        };
        let half = len / 2;
        let mut i = 0;
        while i < n {
            let mut w = 1u64;
            for j in i..i + half {
                let u = a[j];
                let t = g_mul(a[j + half], w);
                a[j] = g_add(u, t);
                a[j + half] = g_sub(u, t);
                w = g_mul(w, wlen);
            }
            i += len;
        }
        len <<= 1;
    }
}

/// Generic in-place transform for the auxiliary primes (division-based
/// reduction; only used on the multi-prime fallback path).
fn ntt_generic(a: &mut [u64], root: u64, p: u64) {
    let n = a.len();
    bit_reverse_permute(a);
    let mut len = 2;
    while len <= n {
        let wlen = pow_mod(root, (n / len) as u64, p);
        let half = len / 2;
        let mut i = 0;
        while i < n {
            let mut w = 1u64;
            for j in i..i + half {
                let u = a[j];
                let t = mul_mod(a[j + half], w, p);
                a[j] = {
                    let s = u + t;
                    if s >= p {
                        s - p
                    } else {
                        s
                    }
                };
                a[j + half] = if u >= t { u - t } else { u + p - t };
                w = mul_mod(w, wlen, p);
            }
            i += len;
        }
        len <<= 1;
    }
}

/// Convolution of `u` and `v` modulo `prime.p`, exact as long as entries of
/// the true integer convolution stay below `prime.p`.
fn convolve_mod(u: &[u64], v: &[u64], prime: NttPrime) -> Vec<u64> {
    let out_len = u.len() + v.len() - 1;
    let size = out_len.next_power_of_two().max(2);
    assert!(
        size <= 1usize << prime.two_adicity,
        "transform size {size} exceeds 2-adicity of modulus"
    );
    let root = pow_mod(prime.generator, (prime.p - 1) / size as u64, prime.p);
    let root_inv = pow_mod(root, prime.p - 2, prime.p);
    let size_inv = pow_mod(size as u64, prime.p - 2, prime.p);

    let mut fa = vec![0u64; size];
    let mut fb = vec![0u64; size];
    for (dst, &src) in fa.iter_mut().zip(u.iter()) {
        *dst = src % prime.p;
    }
    for (dst, &src) in fb.iter_mut().zip(v.iter()) {
        *dst = src % prime.p;
    }

    if prime.p == GP {
        ntt_goldilocks(&mut fa, root);
        ntt_goldilocks(&mut fb, root);
        for (x, y) in fa.iter_mut().zip(fb.iter()) {
            *x = g_mul(*x, *y);
        }
        drop(fb);
        ntt_goldilocks(&mut fa, root_inv);
        for x in fa.iter_mut() {
            *x = g_mul(*x, size_inv);
        }
    } else {
        ntt_generic(&mut fa, root, prime.p);
        ntt_generic(&mut fb, root, prime.p);
        for (x, y) in fa.iter_mut().zip(fb.iter()) {
            *x = mul_mod(*x, *y, prime.p);
        }
        drop(fb);
        ntt_generic(&mut fa, root_inv, prime.p);
        for x in fa.iter_mut() {
            *x = mul_mod(*x, size_inv, prime.p);
        }
    }
    fa.truncate(out_len);
    fa
}

/// Exact integer convolution of two vectors of nonnegative counts.
///
/// Returns `w` of length `|u| + |v| - 1` with
/// `w[k] = sum_{i+j=k} u[i] * v[j]`, computed without rounding. The modulus
/// set is chosen to cover the entry bound `min(|u|,|v|) * max(u) * max(v)`;
/// if even the full prime set cannot cover it, an internal error is
/// returned.
pub fn exact_convolve(u: &[u64], v: &[u64]) -> Result<Vec<u128>> {
    if u.is_empty() || v.is_empty() {
        return Err(Error::config("exact_convolve requires non-empty inputs"));
    }
    let max_u = *u.iter().max().unwrap() as u128;
    let max_v = *v.iter().max().unwrap() as u128;
    let min_len = u.len().min(v.len()) as u128;
    let bound = min_len
        .checked_mul(max_u)
        .and_then(|b| b.checked_mul(max_v))
        .ok_or_else(|| Error::config("convolution entry bound overflows u128"))?;

    if bound < GOLDILOCKS.p as u128 {
        let w = convolve_mod(u, v, GOLDILOCKS);
        return Ok(w.into_iter().map(u128::from).collect());
    }

    let capacity = GOLDILOCKS.p as u128 * AUX_PRIME.p as u128;
    if bound >= capacity {
        return Err(Error::config(
            "convolution entry bound exceeds the modulus set capacity",
        ));
    }
    let w0 = convolve_mod(u, v, GOLDILOCKS);
    let w1 = convolve_mod(u, v, AUX_PRIME);
    // CRT: value = r0 + p0 * ((r1 - r0) * p0^{-1} mod p1).
    let p0 = GOLDILOCKS.p;
    let p1 = AUX_PRIME.p;
    let p0_inv = pow_mod(p0 % p1, p1 - 2, p1);
    Ok(w0
        .into_iter()
        .zip(w1)
        .map(|(r0, r1)| {
            let diff = if r1 >= r0 % p1 {
                r1 - r0 % p1
            } else {
                r1 + p1 - r0 % p1
            };
            let k = mul_mod(diff, p0_inv, p1);
            r0 as u128 + p0 as u128 * k as u128
        })
        .collect())
}
