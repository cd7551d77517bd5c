//! Prime generation and deterministic primality testing.

/// Upper bound on the `k`-th prime (1-indexed), used to size sieves.
///
/// For k >= 6 this is the Rosser-style bound k(ln k + ln ln k); for small k a
/// fixed constant covers the first few primes.
pub fn nth_prime_upper(k: usize) -> u64 {
    if k < 6 {
        return 13;
    }
    let kf = k as f64;
    let bound = kf * (kf.ln() + kf.ln().ln());
    bound.ceil() as u64 + 16
}

/// Sieve of Eratosthenes up to and including `limit`.
pub fn sieve_upto(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// The first `k` primes in ascending order.
///
/// The sieve is sized by the prime-counting inverse, then extended in the
/// (rare) case the estimate fell short.
pub fn primes_first(k: usize) -> Vec<u64> {
    assert!(k >= 1, "primes_first requires k >= 1");
    let mut limit = nth_prime_upper(k);
    loop {
        let primes = sieve_upto(limit);
        if primes.len() >= k {
            return primes[..k].to_vec();
        }
        limit *= 2;
    }
}

/// Count of primes <= `x` (prime counting function), by sieving.
pub fn count_primes_upto(x: u64) -> usize {
    sieve_upto(x).len()
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc: u64 = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin witness set covering all 64-bit integers.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality test, correct for every `u64` input.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_prime_trial(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn first_five() {
        assert_eq!(primes_first(5), vec![2, 3, 5, 7, 11]);
    }

    #[test]
    fn first_one() {
        assert_eq!(primes_first(1), vec![2]);
    }

    #[test]
    fn twenty_fifth_prime_is_97() {
        let primes = primes_first(25);
        assert_eq!(primes.len(), 25);
        assert_eq!(*primes.last().unwrap(), 97);
    }

    #[test]
    fn is_prime_small_cases() {
        assert!(is_prime(2));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        // 341 = 11 * 31 is the smallest base-2 Fermat pseudoprime.
        assert!(!is_prime(341));
    }

    #[test]
    fn is_prime_matches_trial_division() {
        for n in 0..2000 {
            assert_eq!(is_prime(n), is_prime_trial(n), "mismatch at {n}");
        }
    }

    #[test]
    fn is_prime_near_u64_max() {
        // Largest 64-bit prime and its composite neighbors.
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(18_446_744_073_709_551_555));
        assert!(!is_prime(u64::MAX));
    }

    #[test]
    fn nth_prime_upper_is_an_upper_bound() {
        let primes = primes_first(10_000);
        for (i, &p) in primes.iter().enumerate() {
            assert!(p <= nth_prime_upper(i + 1), "bound too small at {}", i + 1);
        }
    }
}
