//! Integer factorization: trial division, Miller–Rabin and Pollard–Brent rho,
//! all under a per-thread step budget.

use std::cell::Cell;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Work limits for factorization and for bounded searches elsewhere in the
/// crate. Exceeding `factor_steps` is an error; exceeding `search_steps` just
/// ends a search early.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub factor_steps: u64,
    pub search_steps: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { factor_steps: 2_000_000, search_steps: 300_000 }
    }
}

impl Budget {
    /// One knob for both limits, as exposed on the command line.
    pub fn scaled(n: u64) -> Self {
        Budget { factor_steps: n, search_steps: n }
    }
}

thread_local! {
    static CURRENT: Cell<Budget> = Cell::new(Budget::default());
}

struct Restore(Budget);

impl Drop for Restore {
    fn drop(&mut self) {
        CURRENT.with(|c| c.set(self.0));
    }
}

/// Runs `f` with `budget` installed for the current thread.
pub fn with_budget<T>(budget: Budget, f: impl FnOnce() -> T) -> T {
    let _restore = Restore(CURRENT.with(|c| c.replace(budget)));
    f()
}

pub fn current_budget() -> Budget {
    CURRENT.with(|c| c.get())
}

const TRIAL_LIMIT: u32 = 1 << 12;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= n {
            if sieve[i] {
                let mut j = i * i;
                while j <= n {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        (0..=n).filter(|&k| sieve[k]).map(|k| k as u32).collect()
    })
}

/// Primes in increasing order, starting at 2. Unbounded.
pub fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| is_prime_u64(n))
}

pub fn is_prime_u64(n: u64) -> bool {
    is_prime(&BigUint::from(n))
}

/// Miller–Rabin with the first 13 prime bases, which is deterministic below
/// 3.3e24; larger inputs get 24 bases.
pub fn is_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &p in small_primes().iter().take(24) {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    let bases = if n.bits() <= 81 { 13 } else { 24 };
    'witness: for &a in small_primes().iter().take(bases) {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization of `n > 0` as sorted `(prime, exponent)` pairs.
pub fn factorize(n: &BigUint) -> Result<Vec<(BigUint, u32)>> {
    if n.is_zero() {
        return Err(Error::ZeroInput("cannot factor zero".into()));
    }
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    let mut m = n.clone();
    for &p in small_primes() {
        if m.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        let mut e = 0;
        loop {
            let (q, r) = m.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        if e > 0 {
            out.push((pb, e));
        }
    }
    if !m.is_one() {
        let limit = BigUint::from(TRIAL_LIMIT) * BigUint::from(TRIAL_LIMIT);
        let mut pending = vec![m];
        let mut big = Vec::new();
        let mut steps = current_budget().factor_steps;
        while let Some(x) = pending.pop() {
            if x < limit || is_prime(&x) {
                big.push(x);
                continue;
            }
            let f = split(&x, &mut steps).ok_or_else(|| Error::BudgetExceeded(n.to_string()))?;
            let g = &x / &f;
            pending.push(f);
            pending.push(g);
        }
        big.sort();
        for p in big {
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Finds a nontrivial factor of a composite `n` coprime to the trial primes.
fn split(n: &BigUint, steps: &mut u64) -> Option<BigUint> {
    if let Some(r) = exact_sqrt(n) {
        return Some(r);
    }
    for c in 1u32.. {
        match brent(n, &BigUint::from(c), steps) {
            Rho::Found(f) => return Some(f),
            Rho::Retry => continue,
            Rho::OutOfBudget => return None,
        }
    }
    None
}

enum Rho {
    Found(BigUint),
    Retry,
    OutOfBudget,
}

fn brent(n: &BigUint, c: &BigUint, steps: &mut u64) -> Rho {
    let f = |x: &BigUint| (x * x + c) % n;
    let absdiff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let m = 128u64;
    let mut y = BigUint::from(2u32);
    let mut r = 1u64;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let lim = m.min(r - k);
            for _ in 0..lim {
                y = f(&y);
                q = (q * absdiff(&x, &y)) % n;
            }
            if *steps < lim {
                return Rho::OutOfBudget;
            }
            *steps -= lim;
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
    }
    if g == *n {
        loop {
            ys = f(&ys);
            g = absdiff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if g == *n {
        Rho::Retry
    } else {
        Rho::Found(g)
    }
}

pub fn exact_sqrt(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// `n` as u64 when it fits; used for cheap small-prime paths.
pub fn small(n: &BigUint) -> Option<u64> {
    n.to_u64()
}
