//! Incremental prime sieve shared by the whole crate.
//!
//! The cache starts small and doubles its sieved bound on demand, so prime
//! positions (1-based indices into the prime sequence) are available for any
//! value the caller actually touches without an upfront cost.

use std::sync::Mutex;
use std::sync::OnceLock;

struct SieveCache {
    /// All primes below `bound`, in order.
    primes: Vec<u64>,
    bound: u64,
}

impl SieveCache {
    fn new() -> Self {
        let mut cache = SieveCache {
            primes: Vec::new(),
            bound: 0,
        };
        cache.grow_to(1 << 10);
        cache
    }

    fn grow_to(&mut self, target: u64) {
        let target = target.max(4).next_power_of_two();
        if target <= self.bound {
            return;
        }
        // Plain odd-only sieve up to `target`; rebuilt wholesale on growth.
        let half = (target / 2) as usize;
        let mut composite = vec![false; half];
        let mut p = 3u64;
        while p * p < target {
            if !composite[(p / 2) as usize] {
                let mut m = p * p;
                while m < target {
                    composite[(m / 2) as usize] = true;
                    m += 2 * p;
                }
            }
            p += 2;
        }
        self.primes.clear();
        self.primes.push(2);
        for i in 1..half {
            if !composite[i] {
                self.primes.push(2 * i as u64 + 1);
            }
        }
        self.bound = target;
    }

    fn ensure_count(&mut self, count: usize) {
        while self.primes.len() < count {
            self.grow_to(self.bound * 2);
        }
    }
}

fn cache() -> &'static Mutex<SieveCache> {
    static CACHE: OnceLock<Mutex<SieveCache>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(SieveCache::new()))
}

/// The `index`-th prime, 1-based: `prime(1) == 2`, `prime(25) == 97`.
pub fn prime(index: u32) -> u64 {
    assert!(index >= 1, "prime positions are 1-based");
    let mut c = cache().lock().unwrap();
    c.ensure_count(index as usize);
    c.primes[index as usize - 1]
}

/// 1-based position of `p` in the prime sequence, or `None` if `p` is composite.
pub fn prime_index(p: u64) -> Option<u32> {
    let mut c = cache().lock().unwrap();
    if p >= c.bound {
        c.grow_to(p + 1);
    }
    match c.primes.binary_search(&p) {
        Ok(i) => Some(i as u32 + 1),
        Err(_) => None,
    }
}

/// Copy of the first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut c = cache().lock().unwrap();
    c.ensure_count(count);
    c.primes[..count].to_vec()
}

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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

/// Smallest prime strictly greater than `n`.
pub fn next_prime_above(n: u64) -> u64 {
    let mut m = n + 1;
    if m <= 2 {
        return 2;
    }
    if m % 2 == 0 {
        m += 1;
    }
    while !is_prime(m) {
        m += 2;
    }
    m
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
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
