//! Exact arithmetic in cyclotomic fields `Q[zeta_n]`.
//!
//! A [`CycNumber`] is stored as an integer polynomial in `zeta_n` of degree
//! below `phi(n)` over a common positive denominator, i.e. in the power basis
//! reduced modulo the `n`-th cyclotomic polynomial. In that basis two values
//! of the same order are equal iff their coefficient vectors are equal, which
//! is what every exact matrix identity in this crate relies on.
//!
//! Values of different orders are lifted to the lcm of their orders before
//! any binary operation.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::error::{Error, Result};

/// Exact rational number; always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Builds a rational from small integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Reduces a rational into `[0, 1)`.
pub fn frac(q: &Rational) -> Rational {
    q - q.floor()
}

#[derive(Debug)]
struct Field {
    n: u64,
    phi: usize,
    /// Non-leading terms of `Phi_n` as `(degree, coefficient)`.
    tail: Vec<(usize, i64)>,
}

impl Field {
    fn new(n: u64) -> Self {
        let poly = cyclotomic_polynomial(n);
        let phi = poly.len() - 1;
        let tail = poly[..phi]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(d, &c)| (d, c))
            .collect();
        Field { n, phi, tail }
    }

    /// Reduces an arbitrary-length coefficient buffer modulo `Phi_n`.
    fn reduce(&self, mut buf: Vec<BigInt>) -> Vec<BigInt> {
        for k in (self.phi..buf.len()).rev() {
            let c = std::mem::take(&mut buf[k]);
            if c.is_zero() {
                continue;
            }
            let base = k - self.phi;
            for &(d, coef) in &self.tail {
                buf[base + d] -= &c * coef;
            }
        }
        buf.resize(self.phi, BigInt::zero());
        buf
    }

    /// Reduced image of `zeta_n^k`.
    fn power(&self, k: u64) -> Vec<BigInt> {
        let mut buf = vec![BigInt::zero(); self.n as usize];
        buf[(k % self.n) as usize] = BigInt::one();
        self.reduce(buf)
    }
}

/// Integer coefficients (low to high) of the `n`-th cyclotomic polynomial,
/// from `Phi_n = prod_{d | n} (x^d - 1)^{mu(n/d)}`.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n >= 1, "cyclotomic order must be positive");
    let divs = arith::divisors(n);
    let mut p: Vec<i128> = vec![1];
    for &d in &divs {
        if arith::mobius(n / d) == 1 {
            let d = d as usize;
            let mut q = vec![0i128; p.len() + d];
            for (i, &c) in p.iter().enumerate() {
                q[i + d] += c;
                q[i] -= c;
            }
            p = q;
        }
    }
    for &d in &divs {
        if arith::mobius(n / d) == -1 {
            // exact division by x^d - 1: P = Q x^d - Q
            let d = d as usize;
            let qlen = p.len() - d;
            let mut q = vec![0i128; qlen];
            for k in 0..qlen {
                let prev = if k >= d { q[k - d] } else { 0 };
                q[k] = prev - p[k];
            }
            p = q;
        }
    }
    p.into_iter()
        .map(|c| i64::try_from(c).expect("cyclotomic coefficient overflow"))
        .collect()
}

fn field(n: u64) -> Arc<Field> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<Field>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(f) = cache.read().expect("field cache poisoned").get(&n) {
        return f.clone();
    }
    let f = Arc::new(Field::new(n));
    cache
        .write()
        .expect("field cache poisoned")
        .entry(n)
        .or_insert(f)
        .clone()
}

/// How to pull a value of order `n` back into the subfield of order `m`.
#[derive(Debug)]
enum Restriction {
    /// `n/m` only has primes dividing `m`: basis vectors map to basis vectors.
    Stride(usize),
    /// General case: solve against a maximal invertible block of the embedding matrix.
    Solve {
        pivots: Vec<usize>,
        inverse: Vec<Vec<Rational>>,
    },
}

fn restriction(m: u64, n: u64) -> Arc<Restriction> {
    static CACHE: OnceLock<RwLock<HashMap<(u64, u64), Arc<Restriction>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(r) = cache.read().expect("restriction cache poisoned").get(&(m, n)) {
        return r.clone();
    }
    let r = Arc::new(build_restriction(m, n));
    cache
        .write()
        .expect("restriction cache poisoned")
        .entry((m, n))
        .or_insert(r)
        .clone()
}

fn build_restriction(m: u64, n: u64) -> Restriction {
    let k = n / m;
    let same_support = arith::factorize(n).iter().all(|&(p, _)| m.is_multiple_of(p));
    if same_support {
        return Restriction::Stride(k as usize);
    }
    let big = field(n);
    let small = field(m);
    // columns of the embedding matrix: reduced zeta_n^{j k}
    let cols: Vec<Vec<BigInt>> = (0..small.phi as u64).map(|j| big.power(j * k)).collect();
    let rows = big.phi;
    let width = small.phi;
    // pick independent rows by elimination on the transpose
    let mut echelon: Vec<(usize, Vec<Rational>)> = Vec::new();
    let mut pivots = Vec::new();
    for row in 0..rows {
        if pivots.len() == width {
            break;
        }
        let mut v: Vec<Rational> = (0..width)
            .map(|j| Rational::from_integer(cols[j][row].clone()))
            .collect();
        for (lead, e) in &echelon {
            if !v[*lead].is_zero() {
                let f = v[*lead].clone() / &e[*lead];
                for (x, y) in v.iter_mut().zip(e) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(lead) = v.iter().position(|x| !x.is_zero()) {
            echelon.push((lead, v));
            pivots.push(row);
        }
    }
    assert_eq!(pivots.len(), width, "embedding matrix must have full column rank");
    let block: Vec<Vec<Rational>> = pivots
        .iter()
        .map(|&r| {
            (0..width)
                .map(|j| Rational::from_integer(cols[j][r].clone()))
                .collect()
        })
        .collect();
    Restriction::Solve {
        pivots,
        inverse: invert(block),
    }
}

/// Gauss-Jordan inverse of a square rational matrix known to be invertible.
fn invert(mut a: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let n = a.len();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("singular block");
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &p;
        }
        for x in inv[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let (src_a, src_i) = (a[col].clone(), inv[col].clone());
                for (x, y) in a[r].iter_mut().zip(&src_a) {
                    *x -= &f * y;
                }
                for (x, y) in inv[r].iter_mut().zip(&src_i) {
                    *x -= &f * y;
                }
            }
        }
    }
    inv
}

/// An element of the cyclotomic field `Q[zeta_n]`, `zeta_n = exp(2 pi i / n)`.
#[derive(Clone)]
pub struct CycNumber {
    field: Arc<Field>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycNumber {
    fn from_parts(field: Arc<Field>, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut x = CycNumber { field, num, den };
        x.normalize();
        x
    }

    fn normalize(&mut self) {
        debug_assert_eq!(self.num.len(), self.field.phi);
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.abs();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if self.den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in self.num.iter_mut() {
                *c = &*c / &g;
            }
            self.den = &self.den / &g;
        }
    }

    pub fn zero(order: u64) -> Self {
        let f = field(order);
        let phi = f.phi;
        CycNumber {
            field: f,
            num: vec![BigInt::zero(); phi],
            den: BigInt::one(),
        }
    }

    pub fn one(order: u64) -> Self {
        Self::from_rational(&Rational::one(), order)
    }

    pub fn from_int(v: i64, order: u64) -> Self {
        Self::from_rational(&Rational::from_integer(v.into()), order)
    }

    pub fn from_rational(q: &Rational, order: u64) -> Self {
        let mut x = Self::zero(order);
        x.num[0] = q.numer().clone();
        x.den = q.denom().clone();
        x.normalize();
        x
    }

    /// `zeta_order^k` for any integer `k`.
    pub fn root(order: u64, k: i64) -> Self {
        let f = field(order);
        let num = f.power(arith::rem(k, order));
        CycNumber {
            field: f,
            num,
            den: BigInt::one(),
        }
    }

    /// Builds `sum c * zeta_order^i` from arbitrary (possibly repeated or
    /// out-of-range) exponents.
    pub fn from_terms<I>(order: u64, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        let f = field(order);
        let terms: Vec<(u64, Rational)> = terms
            .into_iter()
            .map(|(i, c)| (arith::rem(i, order), c))
            .collect();
        let den = terms
            .iter()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let mut buf = vec![BigInt::zero(); order as usize];
        for (i, c) in terms {
            buf[i as usize] += c.numer() * (&den / c.denom());
        }
        let num = f.reduce(buf);
        Self::from_parts(f, num, den)
    }

    pub fn order(&self) -> u64 {
        self.field.n
    }

    pub fn degree(&self) -> usize {
        self.field.phi
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    /// Canonical coefficients of `zeta^0 .. zeta^{phi(n)-1}`.
    pub fn coefficients(&self) -> Vec<Rational> {
        self.num
            .iter()
            .map(|c| Rational::new(c.clone(), self.den.clone()))
            .collect()
    }

    /// Non-zero canonical coefficients as `(power, coefficient)`.
    pub fn terms(&self) -> Vec<(usize, Rational)> {
        self.num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, Rational::new(c.clone(), self.den.clone())))
            .collect()
    }

    /// The rational value, if this element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.num.iter().skip(1).all(Zero::is_zero) {
            let c = self.num.first().cloned().unwrap_or_default();
            Some(Rational::new(c, self.den.clone()))
        } else {
            None
        }
    }

    /// Rewrites this value in `Q[zeta_m]` for a multiple `m` of its order.
    pub fn embed(&self, m: u64) -> Result<Self> {
        let n = self.order();
        if m == n {
            return Ok(self.clone());
        }
        if m == 0 || !m.is_multiple_of(n) {
            return Err(Error::OrderMismatch { from: n, to: m });
        }
        let k = (m / n) as usize;
        let f = field(m);
        let mut buf = vec![BigInt::zero(); m as usize];
        for (i, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                buf[i * k] = c.clone();
            }
        }
        let num = f.reduce(buf);
        Ok(CycNumber {
            field: f,
            num,
            den: self.den.clone(),
        })
    }

    /// Expresses this value in the subfield `Q[zeta_m]`, `m | order`.
    pub fn restrict(&self, m: u64) -> Result<Self> {
        let n = self.order();
        if m == 0 || !n.is_multiple_of(m) {
            return Err(Error::OrderMismatch { from: m, to: n });
        }
        if m == n {
            return Ok(self.clone());
        }
        let small = field(m);
        let not_in = Error::NotInSubfield { order: n, sub: m };
        let candidate = match &*restriction(m, n) {
            Restriction::Stride(k) => {
                let mut num = vec![BigInt::zero(); small.phi];
                for (i, c) in self.num.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    if i % k != 0 || i / k >= small.phi {
                        return Err(not_in);
                    }
                    num[i / k] = c.clone();
                }
                CycNumber {
                    field: small,
                    num,
                    den: self.den.clone(),
                }
            }
            Restriction::Solve { pivots, inverse } => {
                let rhs: Vec<&BigInt> = pivots.iter().map(|&r| &self.num[r]).collect();
                let sol: Vec<Rational> = inverse
                    .iter()
                    .map(|row| {
                        row.iter()
                            .zip(&rhs)
                            .filter(|(_, b)| !b.is_zero())
                            .fold(Rational::zero(), |acc, (a, b)| acc + a * (*b).clone())
                    })
                    .collect();
                let den = sol.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
                let num = sol
                    .iter()
                    .map(|c| c.numer() * (&den / c.denom()))
                    .collect();
                CycNumber::from_parts(small, num, den * &self.den)
            }
        };
        if candidate.embed(n)? == *self {
            Ok(candidate)
        } else {
            Err(not_in)
        }
    }

    /// Galois-fixed-field test: `true` iff every `sigma_l` with `l = 1 (mod m)`
    /// fixes this value. `m` must divide the order.
    pub fn is_in_subfield(&self, m: u64) -> Result<bool> {
        let n = self.order();
        if m == 0 || !n.is_multiple_of(m) {
            return Err(Error::OrderMismatch { from: m, to: n });
        }
        for j in 0..n / m {
            let l = 1 + j * m;
            if arith::coprime(l as i64, n) && self.frobenius(l as i64)? != *self {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Re-expresses the value in the smallest cyclotomic field containing it.
    pub fn reduce_order(&self) -> Self {
        let mut cur = self.clone();
        'outer: loop {
            let n = cur.order();
            for (p, _) in arith::factorize(n) {
                let m = n / p;
                if cur.is_in_subfield(m).unwrap_or(false) {
                    cur = cur.restrict(m).expect("fixed-field test passed");
                    continue 'outer;
                }
            }
            return cur;
        }
    }

    /// Frobenius automorphism `zeta_n -> zeta_n^l`.
    pub fn frobenius(&self, l: i64) -> Result<Self> {
        let n = self.order();
        if !arith::coprime(l, n) {
            return Err(Error::NotCoprime { value: l, modulus: n });
        }
        let l = arith::rem(l, n);
        if n <= 2 || l == 1 {
            return Ok(self.clone());
        }
        let mut buf = vec![BigInt::zero(); n as usize];
        for (i, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                buf[((i as u64 * l) % n) as usize] = c.clone();
            }
        }
        let num = self.field.reduce(buf);
        Ok(CycNumber {
            field: self.field.clone(),
            num,
            den: self.den.clone(),
        })
    }

    /// Complex conjugate, i.e. `sigma_{-1}`.
    pub fn conj(&self) -> Self {
        self.frobenius(-1).expect("-1 is a unit")
    }

    /// Multiplies by `zeta_n^k` where `n` is this value's order.
    pub fn mul_root(&self, k: i64) -> Self {
        let n = self.order();
        let k = arith::rem(k, n);
        if k == 0 {
            return self.clone();
        }
        let mut buf = vec![BigInt::zero(); n as usize];
        for (i, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                buf[((i as u64 + k) % n) as usize] = c.clone();
            }
        }
        let num = self.field.reduce(buf);
        CycNumber {
            field: self.field.clone(),
            num,
            den: self.den.clone(),
        }
    }

    /// Multiplies by `zeta_m^k`, lifting to `lcm(order, m)` when needed.
    pub fn mul_root_of(&self, m: u64, k: i64) -> Self {
        let n = self.order();
        let target = arith::lcm(n, m);
        let lifted = self.embed(target).expect("lcm is a multiple");
        lifted.mul_root(k * (target / m) as i64)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        let num = self.num.iter().map(|c| c * q.numer()).collect();
        Self::from_parts(self.field.clone(), num, &self.den * q.denom())
    }

    /// Field norm down to `Q`: the product of all Galois conjugates.
    pub fn norm(&self) -> Rational {
        let n = self.order();
        let prod = arith::units(n)
            .into_iter()
            .map(|l| self.frobenius(l as i64).expect("unit"))
            .fold(CycNumber::one(n), |acc, x| &acc * &x);
        prod.as_rational().expect("norm is rational")
    }

    /// Multiplicative inverse via `x^{-1} = (prod_{l != 1} sigma_l x) / N(x)`.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.order();
        let others = arith::units(n)
            .into_iter()
            .filter(|&l| n > 2 && l != 1)
            .map(|l| self.frobenius(l as i64).expect("unit"))
            .fold(CycNumber::one(n), |acc, x| &acc * &x);
        let norm = (self * &others).as_rational().expect("norm is rational");
        Some(others.scale(&norm.recip()))
    }

    /// Floating-point image under `zeta_n = exp(2 pi i / n)`. Display only.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.order() as f64;
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = c.to_f64().unwrap_or(f64::NAN) / den;
            let ang = 2.0 * std::f64::consts::PI * i as f64 / n;
            re += v * ang.cos();
            im += v * ang.sin();
        }
        (re, im)
    }

    /// Positive square root of a non-negative integer, built from quadratic Gauss sums.
    pub fn sqrt_int(v: u64) -> Self {
        if v == 0 {
            return Self::zero(1);
        }
        let mut outside = 1i64;
        let mut acc = Self::one(1);
        for (p, e) in arith::factorize(v) {
            outside *= (p as i64).pow(e / 2);
            if e % 2 == 1 {
                acc = &acc * &sqrt_prime(p);
            }
        }
        acc.scale(&Rational::from_integer(outside.into()))
    }

    /// `sin(pi k / m)` as an element of `Q[zeta_{lcm(4, 2m)}]`.
    pub fn sin_pi(k: i64, m: u64) -> Self {
        let diff = &Self::root(2 * m, k) - &Self::root(2 * m, -k);
        // 1/(2i) = -i/2 = zeta_4^3 / 2
        (&diff * &Self::root(4, 3)).scale(&rat(1, 2))
    }

    fn lift_pair(a: &Self, b: &Self) -> (Self, Self) {
        let m = arith::lcm(a.order(), b.order());
        (a.embed(m).expect("lcm"), b.embed(m).expect("lcm"))
    }

    fn add_same(&self, other: &Self) -> Self {
        if self.den == other.den {
            let num = self.num.iter().zip(&other.num).map(|(x, y)| x + y).collect();
            return Self::from_parts(self.field.clone(), num, self.den.clone());
        }
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(x, y)| x * &other.den + y * &self.den)
            .collect();
        Self::from_parts(self.field.clone(), num, &self.den * &other.den)
    }

    fn mul_same(&self, other: &Self) -> Self {
        let phi = self.field.phi;
        let mut buf = vec![BigInt::zero(); 2 * phi - 1];
        for (i, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.num.iter().enumerate() {
                if !y.is_zero() {
                    buf[i + j] += x * y;
                }
            }
        }
        let num = self.field.reduce(buf);
        Self::from_parts(self.field.clone(), num, &self.den * &other.den)
    }
}

fn sqrt_prime(p: u64) -> CycNumber {
    if p == 2 {
        return &CycNumber::root(8, 1) + &CycNumber::root(8, -1);
    }
    let gauss = CycNumber::from_terms(
        p,
        (1..p as i64).map(|a| (a, Rational::from_integer(arith::legendre(a, p).into()))),
    );
    if p % 4 == 1 {
        gauss
    } else {
        // the Gauss sum is i*sqrt(p)
        &gauss * &CycNumber::root(4, 3)
    }
}

impl PartialEq for CycNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.order() == other.order() {
            self.den == other.den && self.num == other.num
        } else {
            let (a, b) = Self::lift_pair(self, other);
            a.den == b.den && a.num == b.num
        }
    }
}

impl Eq for CycNumber {}

impl<'a> Add<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn add(self, rhs: &'a CycNumber) -> CycNumber {
        if self.order() == rhs.order() {
            self.add_same(rhs)
        } else {
            let (a, b) = CycNumber::lift_pair(self, rhs);
            a.add_same(&b)
        }
    }
}

impl<'a> Sub<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn sub(self, rhs: &'a CycNumber) -> CycNumber {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn mul(self, rhs: &'a CycNumber) -> CycNumber {
        if self.order() == rhs.order() {
            self.mul_same(rhs)
        } else {
            let (a, b) = CycNumber::lift_pair(self, rhs);
            a.mul_same(&b)
        }
    }
}

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        -&self
    }
}

impl Add for CycNumber {
    type Output = CycNumber;
    fn add(self, rhs: CycNumber) -> CycNumber {
        &self + &rhs
    }
}

impl Sub for CycNumber {
    type Output = CycNumber;
    fn sub(self, rhs: CycNumber) -> CycNumber {
        &self - &rhs
    }
}

impl Mul for CycNumber {
    type Output = CycNumber;
    fn mul(self, rhs: CycNumber) -> CycNumber {
        &self * &rhs
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        let n = self.order();
        for (k, (i, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if *i == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write!(f, "z{n}")?;
                if *i != 1 {
                    write!(f, "^{i}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNumber[{}]({})", self.order(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64, k: i64) -> CycNumber {
        CycNumber::root(n, k)
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        // first order with a coefficient of absolute value 2
        assert!(cyclotomic_polynomial(105).contains(&-2));
    }

    #[test]
    fn fifth_roots_sum_to_minus_one() {
        let s = (1..5).fold(CycNumber::zero(5), |acc, k| &acc + &z(5, k));
        assert_eq!(s, CycNumber::from_int(-1, 5));
    }

    #[test]
    fn inverse_root_and_sqrt2() {
        assert!((&z(8, 1) * &z(8, 7)).is_one());
        let r2 = &z(8, 1) + &z(8, -1);
        assert_eq!(&r2 * &r2, CycNumber::from_int(2, 8));
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(z(5, 1).frobenius(3).unwrap(), z(5, 3));
        let r2 = &z(8, 1) + &z(8, -1);
        assert_eq!(r2.frobenius(5).unwrap(), -&r2);
        assert_eq!(r2.frobenius(1).unwrap(), r2);
        assert_eq!(
            r2.frobenius(2),
            Err(Error::NotCoprime { value: 2, modulus: 8 })
        );
    }

    #[test]
    fn embed_examples() {
        assert_eq!(
            CycNumber::from_int(-1, 2).embed(8).unwrap(),
            CycNumber::from_int(-1, 8)
        );
        assert_eq!(z(4, 1).embed(8).unwrap(), z(8, 2));
        assert_eq!(
            z(4, 1).embed(6),
            Err(Error::OrderMismatch { from: 4, to: 6 })
        );
    }

    #[test]
    fn subfield_examples() {
        let r2 = (&z(8, 1) + &z(8, -1)).embed(24).unwrap();
        assert!(r2.is_in_subfield(8).unwrap());
        assert!(!z(8, 1).is_in_subfield(4).unwrap());
        assert_eq!(r2.reduce_order().order(), 8);
        assert_eq!(CycNumber::from_int(-1, 2).reduce_order().order(), 1);
        // zeta_6 = -zeta_3^2 lives in Q[zeta_3]
        assert_eq!(z(6, 1).reduce_order(), -&z(3, 2));
    }

    #[test]
    fn to_complex_examples() {
        let (re, im) = z(4, 1).to_complex();
        assert!(re.abs() < 1e-12 && (im - 1.0).abs() < 1e-12);
        let (re, im) = CycNumber::from_int(-1, 7).to_complex();
        assert!((re + 1.0).abs() < 1e-12 && im.abs() < 1e-12);
    }

    #[test]
    fn square_roots() {
        for v in [1u64, 2, 3, 5, 7, 10, 12, 30, 60, 77, 240] {
            let r = CycNumber::sqrt_int(v);
            assert_eq!(&r * &r, CycNumber::from_int(v as i64, 1), "v={v}");
            let (re, im) = r.to_complex();
            assert!((re - (v as f64).sqrt()).abs() < 1e-9 && im.abs() < 1e-9, "v={v}");
        }
    }

    #[test]
    fn sines() {
        for (k, m) in [(1i64, 5u64), (2, 5), (3, 7), (5, 2), (8, 5), (1, 1)] {
            let (re, im) = CycNumber::sin_pi(k, m).to_complex();
            let want = (std::f64::consts::PI * k as f64 / m as f64).sin();
            assert!((re - want).abs() < 1e-12 && im.abs() < 1e-12, "k={k} m={m}");
        }
    }

    #[test]
    fn inverse_and_norm() {
        let x = &(&z(12, 1) + &CycNumber::from_int(3, 12)) + &z(12, 5).scale(&rat(2, 7));
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        assert!(CycNumber::zero(5).inv().is_none());
        let r2 = CycNumber::sqrt_int(2);
        assert_eq!(r2.norm(), Rational::from_integer(4.into()));
    }

    #[test]
    fn restrict_rejects_outsiders() {
        assert_eq!(
            z(8, 1).restrict(4),
            Err(Error::NotInSubfield { order: 8, sub: 4 })
        );
        let s5 = CycNumber::sqrt_int(5).embed(60).unwrap();
        assert_eq!(s5.restrict(5).unwrap(), CycNumber::sqrt_int(5));
        assert_eq!(s5.reduce_order().order(), 5);
    }

    #[test]
    fn display() {
        let x = &z(8, 1).scale(&rat(-1, 2)) + &CycNumber::from_int(3, 8);
        assert_eq!(x.to_string(), "3 - 1/2*z8");
    }
}
