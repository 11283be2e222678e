//! Small integer helpers shared by every module: gcd/lcm, modular inverses,
//! factorisation and unit groups of `Z/nZ`.

use num_integer::Integer;

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / a.gcd(&b) * b
}

/// Canonical residue of `a` modulo `n` in `[0, n)`.
pub fn rem(a: i64, n: u64) -> u64 {
    a.rem_euclid(n as i64) as u64
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Inverse of `a` modulo `n`, or `None` when `gcd(a, n) != 1`. `n = 1` yields `Some(0)`.
pub fn mod_inv(a: i64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd(rem(a, n) as i64, n as i64);
    (g == 1).then(|| rem(x, n))
}

pub fn coprime(a: i64, n: u64) -> bool {
    gcd(a, n as i64) == 1
}

/// Prime factorisation as `(prime, exponent)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Möbius function.
pub fn mobius(n: u64) -> i32 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Exponent of the unit group `(Z/nZ)^*` (Carmichael function).
pub fn carmichael(n: u64) -> u64 {
    factorize(n).into_iter().fold(1, |acc, (p, e)| {
        let l = if p == 2 {
            match e {
                1 => 1,
                2 => 2,
                _ => 1 << (e - 2),
            }
        } else {
            p.pow(e - 1) * (p - 1)
        };
        lcm(acc, l)
    })
}

/// Residues in `[0, n)` coprime to `n`, increasing. For `n = 1` this is `[0]`.
pub fn units(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|&a| coprime(a as i64, n)).collect()
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre(a: i64, p: u64) -> i32 {
    let r = pow_mod(rem(a, p), (p - 1) / 2, p);
    match r {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Least common multiple of `1..=n`, i.e. the exponent of the symmetric group of degree `n`.
pub fn lcm_upto(n: u64) -> num_bigint::BigUint {
    let mut acc = num_bigint::BigUint::from(1u32);
    for k in 2..=n {
        acc = acc.lcm(&num_bigint::BigUint::from(k));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_and_units_agree() {
        for n in 1..200u64 {
            let u = units(n);
            if n > 1 {
                assert_eq!(u.len() as u64, euler_phi(n), "n={n}");
            }
        }
    }

    #[test]
    fn carmichael_matches_brute_force() {
        for n in 2..300u64 {
            let brute = units(n)
                .into_iter()
                .map(|a| (1..=n).find(|&k| pow_mod(a, k, n) == 1).unwrap())
                .fold(1, lcm);
            assert_eq!(carmichael(n), brute, "n={n}");
        }
    }

    #[test]
    fn inverses() {
        assert_eq!(mod_inv(7, 60), Some(43));
        assert_eq!(mod_inv(6, 60), None);
        assert_eq!(mod_inv(-1, 5), Some(4));
        assert_eq!(mod_inv(3, 1), Some(0));
    }

    #[test]
    fn mobius_values() {
        let got: Vec<i32> = (1..=10).map(mobius).collect();
        assert_eq!(got, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }
}
