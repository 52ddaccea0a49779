//! Integer factorization: trial division, then Pollard rho with Brent's
//! cycle detection, with Miller-Rabin primality certificates. Deterministic
//! witness sets settle everything below 2^64; larger candidates get 64
//! probabilistic rounds. Running out of budget is data, not an error: the
//! map is returned with `complete = false`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Prime-power decomposition, possibly partial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorMap {
    /// (prime, exponent) pairs in ascending prime order.
    pub factors: Vec<(BigUint, u32)>,
    /// False when a composite cofactor survived the budget; the cofactor is
    /// then included in `factors` with its exponent as found.
    pub complete: bool,
}

impl FactorMap {
    pub fn product(&self) -> BigUint {
        let mut acc = BigUint::one();
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        acc
    }

    /// Distinct primes (meaningful when complete).
    pub fn distinct_primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors.iter().find(|(q, _)| q == p).map_or(0, |(_, e)| *e)
    }
}

/// Iteration budget for the rho stage.
#[derive(Clone, Copy, Debug)]
pub struct FactorBudget {
    /// Trial-divide by primes up to this bound first.
    pub trial_limit: u64,
    /// Total rho iterations across all attempts.
    pub rho_iterations: u64,
    /// Miller-Rabin rounds for candidates above 2^64.
    pub mr_rounds_large: u32,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget { trial_limit: 100_000, rho_iterations: 50_000_000, mr_rounds_large: 64 }
    }
}

/// Factor N ≥ 1. factorize(1) is the empty, complete map.
pub fn factorize(n: &BigUint, budget: &FactorBudget) -> FactorMap {
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    let mut complete = true;
    let mut remaining = n.clone();

    if remaining.is_one() || remaining.is_zero() {
        return FactorMap { factors, complete: true };
    }

    // Trial division. u64 arithmetic while the cofactor fits.
    for p in TrialPrimes::new(budget.trial_limit) {
        if let Some(r64) = remaining.to_u64() {
            // switch wholesale to the machine-word path
            let mut fs = factorize_u64(r64);
            merge(&mut factors, &mut fs);
            remaining = BigUint::one();
            break;
        }
        let pb = BigUint::from(p);
        if (&pb * &pb) > remaining {
            break;
        }
        let mut e = 0u32;
        while (&remaining % &pb).is_zero() {
            remaining /= &pb;
            e += 1;
        }
        if e > 0 {
            factors.push((pb, e));
        }
    }

    if !remaining.is_one() {
        let mut iterations_left = budget.rho_iterations;
        let mut pending = vec![remaining];
        while let Some(m) = pending.pop() {
            if m.is_one() {
                continue;
            }
            if let Some(m64) = m.to_u64() {
                let mut fs = factorize_u64(m64);
                merge(&mut factors, &mut fs);
                continue;
            }
            if is_probable_prime(&m, budget.mr_rounds_large) {
                push_factor(&mut factors, m, 1);
                continue;
            }
            match rho_brent_big(&m, &mut iterations_left) {
                Some(d) => {
                    pending.push(&m / &d);
                    pending.push(d);
                }
                None => {
                    // budget exhausted: record the composite cofactor as-is
                    push_factor(&mut factors, m, 1);
                    complete = false;
                }
            }
        }
    }

    factors.sort_by(|a, b| a.0.cmp(&b.0));
    coalesce(&mut factors);
    FactorMap { factors, complete }
}

/// Complete factorization of a u64 (trial division + rho, never gives up:
/// a 64-bit composite always yields to rho in a few thousand iterations).
pub fn factorize_u64(n: u64) -> Vec<(u64, u32)> {
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut n = n;
    if n <= 1 {
        return factors;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        if p * p > n {
            break;
        }
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    }
    let mut d = 53u64;
    while d * d <= n && d < 10_000 {
        let mut e = 0;
        while n.is_multiple_of(d) {
            n /= d;
            e += 1;
        }
        if e > 0 {
            factors.push((d, e));
        }
        d += 2;
    }
    if n > 1 {
        let mut stack = vec![n];
        while let Some(m) = stack.pop() {
            if m == 1 {
                continue;
            }
            if is_prime_u64(m) {
                match factors.iter_mut().find(|(p, _)| *p == m) {
                    Some((_, e)) => *e += 1,
                    None => factors.push((m, 1)),
                }
                continue;
            }
            let d = rho_brent_u64(m);
            stack.push(d);
            stack.push(m / d);
        }
    }
    factors.sort_by_key(|&(p, _)| p);
    factors
}

fn merge(into: &mut Vec<(BigUint, u32)>, from: &mut Vec<(u64, u32)>) {
    for &(p, e) in from.iter() {
        push_factor(into, BigUint::from(p), e);
    }
    from.clear();
}

fn push_factor(factors: &mut Vec<(BigUint, u32)>, p: BigUint, e: u32) {
    match factors.iter_mut().find(|(q, _)| *q == p) {
        Some((_, e0)) => *e0 += e,
        None => factors.push((p, e)),
    }
}

fn coalesce(factors: &mut Vec<(BigUint, u32)>) {
    let mut i = 0;
    while i + 1 < factors.len() {
        if factors[i].0 == factors[i + 1].0 {
            factors[i].1 += factors[i + 1].1;
            factors.remove(i + 1);
        } else {
            i += 1;
        }
    }
}

/// Odd trial divisors 2, 3, 5, 7, ... up to the limit (not a sieve; the
/// wasted composite divisions are cheaper than sieving for our sizes).
struct TrialPrimes {
    next: u64,
    limit: u64,
}

impl TrialPrimes {
    fn new(limit: u64) -> Self {
        TrialPrimes { next: 2, limit }
    }
}

impl Iterator for TrialPrimes {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        let v = self.next;
        if v > self.limit {
            return None;
        }
        self.next = if v == 2 { 3 } else { v + 2 };
        Some(v)
    }
}

#[inline]
fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        exp >>= 1;
        base = mulmod_u64(base, base, m);
    }
    acc
}

/// Deterministic Miller-Rabin for u64. The witness set
/// {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37} is exact below 2^64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin for big integers: deterministic below 2^64, otherwise the
/// requested number of rounds with fixed pseudo-random bases.
pub fn is_probable_prime(n: &BigUint, rounds: u32) -> bool {
    if let Some(n64) = n.to_u64() {
        return is_prime_u64(n64);
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if n.is_even() {
        return false;
    }
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut state = 0x9e3779b97f4a7c15u64; // fixed seed: reproducible runs
    'round: for i in 0..rounds {
        // deterministic base schedule: first the small primes, then mixed
        let a = if i < 12 {
            BigUint::from([2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37][i as usize])
        } else {
            state = splitmix64(state);
            (BigUint::from(state) % (n - &BigUint::from(4u32))) + &two
        };
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'round;
            }
        }
        return false;
    }
    true
}

#[inline]
pub(crate) fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Brent-variant Pollard rho on u64; n must be odd, composite, and not a
/// prime power of a trial prime. Always succeeds for 64-bit composites.
fn rho_brent_u64(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    for c in 1..64u64 {
        if let Some(d) = rho_brent_u64_once(n, c, 1 << 24) {
            return d;
        }
    }
    unreachable!("rho failed on 64-bit composite {n}");
}

fn rho_brent_u64_once(n: u64, c: u64, max_iters: u64) -> Option<u64> {
    let f = |x: u64| (mulmod_u64(x, x, n) + c) % n;
    let (mut x, mut ys) = (2u64, 2u64);
    let mut y = 2u64;
    let mut d = 1u64;
    let mut q = 1u64;
    let m = 128u64;
    let mut r = 1u64;
    let mut iters = 0u64;
    while d == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0u64;
        while k < r && d == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                q = mulmod_u64(q, x.abs_diff(y), n);
            }
            d = gcd_u64(q, n);
            k += m;
            iters += m;
            if iters > max_iters {
                return None;
            }
        }
        r <<= 1;
    }
    if d == n {
        // backtrack one by one
        loop {
            ys = f(ys);
            d = gcd_u64(x.abs_diff(ys), n);
            if d > 1 {
                break;
            }
        }
    }
    if d > 1 && d < n {
        Some(d)
    } else {
        None
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if a == 0 {
        b
    } else {
        gcd_u64(b % a, a)
    }
}

/// Brent rho on big integers, budget-capped. Returns a nontrivial divisor
/// or None when the shared iteration budget runs out.
fn rho_brent_big(n: &BigUint, iterations_left: &mut u64) -> Option<BigUint> {
    let one = BigUint::one();
    for c in 1u64..32 {
        if *iterations_left == 0 {
            return None;
        }
        let cb = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &cb) % n;
        let mut y = BigUint::from(2u32);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut d = one.clone();
        let mut q = one.clone();
        let m = 128u64;
        let mut r = 1u64;
        'outer: while d.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0u64;
            while k < r && d.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                d = q.gcd(n);
                k += m;
                if *iterations_left < m {
                    *iterations_left = 0;
                    break 'outer;
                }
                *iterations_left -= m;
            }
            r <<= 1;
        }
        if &d == n {
            // the batched gcd collapsed; replay one step at a time
            let mut guard = 0u64;
            loop {
                ys = f(&ys);
                let g = diff_abs(&x, &ys).gcd(n);
                guard += 1;
                if !g.is_one() || guard > 1_000_000 {
                    d = g;
                    break;
                }
            }
        }
        if !d.is_one() && &d != n {
            return Some(d);
        }
    }
    None
}

fn diff_abs(a: &BigUint, b: &BigUint) -> BigUint {
    if a > b {
        a - b
    } else {
        b - a
    }
}
