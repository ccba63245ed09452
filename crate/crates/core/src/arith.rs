//! Rational-integer helpers: primality, factoring, Kronecker symbols.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Probabilistic primality (deterministic below 2^64) for big integers.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes `<= limit` by sieve.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn pollard_rho(n: &BigUint) -> BigUint {
    // Brent's variant; n is odd, composite and has no tiny factors.
    let one = BigUint::one();
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = one.clone();
        while d == one {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if &d != n {
            return d;
        }
    }
    unreachable!()
}

/// Prime factorization of a positive integer as sorted `(prime, exponent)`.
pub fn factor(n: &BigUint) -> Vec<(BigUint, u32)> {
    assert!(!n.is_zero(), "factor(0)");
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    let mut rest = n.clone();
    for p in primes_up_to(1000) {
        let bp = BigUint::from(p);
        let mut e = 0;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((bp, e));
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            match out.iter_mut().find(|(p, _)| *p == m) {
                Some(entry) => entry.1 += 1,
                None => out.push((m, 1)),
            }
            continue;
        }
        let sq = m.sqrt();
        if &sq * &sq == m {
            stack.push(sq.clone());
            stack.push(sq);
            continue;
        }
        let d = pollard_rho(&m);
        stack.push(&m / &d);
        stack.push(d);
    }
    out.sort();
    out
}

pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    factor(&BigUint::from(n))
        .into_iter()
        .map(|(p, e)| (p.to_u64().unwrap(), e))
        .collect()
}

/// Positive divisors of `|n|`, ascending.
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let m = n.magnitude();
    if m.is_zero() {
        return Vec::new();
    }
    let mut divs = vec![BigUint::one()];
    for (p, e) in factor(m) {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigUint::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs.into_iter().map(BigInt::from).collect()
}

pub fn is_squarefree(n: i64) -> bool {
    if n == 0 {
        return false;
    }
    factor_u64(n.unsigned_abs()).iter().all(|&(_, e)| e == 1)
}

/// Exponent of `p` in a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of 0");
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Remove every factor of the given primes, returning the cofactor (sign kept).
pub fn strip_primes(n: &BigInt, primes: &[u64]) -> BigInt {
    let mut n = n.clone();
    for &p in primes {
        let bp = BigInt::from(p);
        while !n.is_zero() && (&n % &bp).is_zero() {
            n /= &bp;
        }
    }
    n
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
fn jacobi(a: &BigInt, n: &BigInt) -> i32 {
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut result = 1;
    let three = BigInt::from(3);
    let five = BigInt::from(5);
    let eight = BigInt::from(8);
    let four = BigInt::from(4);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = n.mod_floor(&eight);
            if r == three || r == five {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&four) == three && n.mod_floor(&four) == three {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// Kronecker symbol `(a|p)` for a prime `p`.
pub fn kronecker_prime(a: &BigInt, p: u64) -> i32 {
    if p == 2 {
        if a.is_even() {
            return 0;
        }
        let r = a.mod_floor(&BigInt::from(8)).to_u32().unwrap();
        return if r == 1 || r == 7 { 1 } else { -1 };
    }
    jacobi(a, &BigInt::from(p))
}

/// Roots of `x^2 - trace*x - k` modulo a prime `p`, ascending and distinct.
pub fn quadratic_roots_mod_p(trace: i64, k: &BigInt, p: u64) -> Vec<u64> {
    let bp = BigInt::from(p);
    let t = BigInt::from(trace).mod_floor(&bp);
    let k = k.mod_floor(&bp);
    if p < 1 << 20 {
        return (0..p)
            .filter(|&x| {
                let x = BigInt::from(x);
                (&x * &x - &t * &x - &k).mod_floor(&bp).is_zero()
            })
            .collect();
    }
    // Large p: Tonelli-Shanks on the discriminant.
    let disc = (&t * &t + BigInt::from(4) * &k).mod_floor(&bp);
    let inv2 = BigInt::from(p.div_ceil(2));
    if disc.is_zero() {
        return vec![(&t * &inv2).mod_floor(&bp).to_u64().unwrap()];
    }
    let Some(s) = sqrt_mod_prime(&disc, p) else {
        return Vec::new();
    };
    let mut roots: Vec<u64> = [&t + &s, &t - &s]
        .iter()
        .map(|v| (v * &inv2).mod_floor(&bp).to_u64().unwrap())
        .collect();
    roots.sort();
    roots.dedup();
    roots
}

fn sqrt_mod_prime(a: &BigInt, p: u64) -> Option<BigInt> {
    let bp = BigInt::from(p);
    let a = a.mod_floor(&bp);
    if a.is_zero() {
        return Some(a);
    }
    if jacobi(&a, &bp) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = BigInt::from(2);
    while jacobi(&z, &bp) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = z.modpow(&BigInt::from(q), &bp);
    let mut t = a.modpow(&BigInt::from(q), &bp);
    let mut r = a.modpow(&BigInt::from(q.div_ceil(2)), &bp);
    while !t.is_one() {
        let mut i = 0;
        let mut tt = t.clone();
        while !tt.is_one() {
            tt = (&tt * &tt).mod_floor(&bp);
            i += 1;
        }
        let b = c.modpow(&(BigInt::one() << (m - i - 1)), &bp);
        m = i;
        c = (&b * &b).mod_floor(&bp);
        t = (&t * &c).mod_floor(&bp);
        r = (&r * &b).mod_floor(&bp);
    }
    Some(r)
}

/// Exact integer square root test.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// `|n|` factored into (squarefree part with sign, square root of the square part):
/// `n = sign * core * root^2`.
pub fn squarefree_decomposition(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_zero());
    let mut core = BigInt::one();
    let mut root = BigInt::one();
    for (p, e) in factor(n.magnitude()) {
        let p = BigInt::from(p);
        if e % 2 == 1 {
            core *= &p;
        }
        root *= num_traits::pow(p, (e / 2) as usize);
    }
    if n.sign() == Sign::Minus {
        core = -core;
    }
    (core, root)
}
