//! The modular group: integral matrices, their reductions mod `N`, words in
//! the generators `s` and `t`, and evaluation of the modular representation.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::arith;
use crate::error::{Error, Result};
use crate::matrix::CycMatrix;
use crate::modular_data::ModularData;

/// An element `((a, b), (c, d))` of `SL(2, Z)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SL2ZMatrix {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl SL2ZMatrix {
    /// Checked constructor; the determinant must be exactly 1.
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Self> {
        let m = SL2ZMatrix {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        };
        if m.det().is_one() {
            Ok(m)
        } else {
            Err(Error::NotUnimodular {
                modulus: 0,
                det: m.det().to_i64().unwrap_or(i64::MAX),
            })
        }
    }

    fn raw(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        SL2ZMatrix { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::raw(1.into(), 0.into(), 0.into(), 1.into())
    }

    /// `s = ((0, -1), (1, 0))`.
    pub fn s() -> Self {
        Self::raw(0.into(), (-1).into(), 1.into(), 0.into())
    }

    /// `t^k = ((1, k), (0, 1))`.
    pub fn t_pow(k: impl Into<BigInt>) -> Self {
        Self::raw(1.into(), k.into(), 0.into(), 1.into())
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::raw(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }

    pub fn inverse(&self) -> Self {
        Self::raw(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(), |acc, _| acc.mul(self))
    }

    /// The reduction `mu_N`.
    pub fn reduce(&self, modulus: u64) -> SL2NMatrix {
        let r = |x: &BigInt| -> u64 {
            x.mod_floor(&BigInt::from(modulus))
                .to_u64()
                .expect("residue fits")
        };
        SL2NMatrix {
            modulus,
            a: r(&self.a),
            b: r(&self.b),
            c: r(&self.c),
            d: r(&self.d),
        }
    }

    /// `t^{-k} m t^k`.
    pub fn conjugate_by_t(&self, k: i64) -> Self {
        Self::t_pow(-k).mul(self).mul(&Self::t_pow(k))
    }
}

impl fmt::Display for SL2ZMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({}, {}), ({}, {}))", self.a, self.b, self.c, self.d)
    }
}

/// An element of `SL(2, Z/NZ)` with residues in `[0, N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SL2NMatrix {
    pub modulus: u64,
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl SL2NMatrix {
    pub fn new(modulus: u64, a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::NotUnimodular { modulus, det: 0 });
        }
        let m = SL2NMatrix {
            modulus,
            a: arith::rem(a, modulus),
            b: arith::rem(b, modulus),
            c: arith::rem(c, modulus),
            d: arith::rem(d, modulus),
        };
        let det = m.det();
        if det == 1 % modulus {
            Ok(m)
        } else {
            Err(Error::NotUnimodular {
                modulus,
                det: det as i64,
            })
        }
    }

    /// Builds without checking the determinant; residues are reduced.
    pub fn new_unchecked(modulus: u64, a: u64, b: u64, c: u64, d: u64) -> Self {
        SL2NMatrix {
            modulus,
            a: a % modulus,
            b: b % modulus,
            c: c % modulus,
            d: d % modulus,
        }
    }

    pub fn identity(modulus: u64) -> Self {
        Self::new_unchecked(modulus, 1, 0, 0, 1)
    }

    pub fn det(&self) -> u64 {
        let n = self.modulus as u128;
        let ad = self.a as u128 * self.d as u128 % n;
        let bc = self.b as u128 * self.c as u128 % n;
        ((ad + n - bc) % n) as u64
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.modulus, o.modulus);
        let n = self.modulus;
        let f = |x: u64, y: u64, z: u64, w: u64| ((x as u128 * y as u128 + z as u128 * w as u128) % n as u128) as u64;
        SL2NMatrix {
            modulus: n,
            a: f(self.a, o.a, self.b, o.c),
            b: f(self.a, o.b, self.b, o.d),
            c: f(self.c, o.a, self.d, o.c),
            d: f(self.c, o.b, self.d, o.d),
        }
    }

    pub fn inverse(&self) -> Self {
        let n = self.modulus;
        Self::new_unchecked(n, self.d, (n - self.b) % n, (n - self.c) % n, self.a)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.modulus)
    }

    pub fn as_tuple(&self) -> (u64, u64, u64, u64) {
        (self.a, self.b, self.c, self.d)
    }

    /// Order in the group.
    pub fn order(&self) -> u64 {
        let mut x = *self;
        let mut k = 1;
        while !x.is_identity() {
            x = x.mul(self);
            k += 1;
        }
        k
    }

    /// Parses `"a,b,c,d"` (whitespace and surrounding brackets ignored) as a matrix mod `modulus`.
    pub fn parse(text: &str, modulus: u64) -> Result<Self> {
        let vals = parse_ints::<4>(text)?;
        Self::new(modulus, vals[0], vals[1], vals[2], vals[3])
    }
}

impl fmt::Display for SL2NMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(({}, {}), ({}, {})) mod {}",
            self.a, self.b, self.c, self.d, self.modulus
        )
    }
}

/// Parses exactly `K` comma-separated integers, ignoring brackets and whitespace.
pub fn parse_ints<const K: usize>(text: &str) -> Result<[i64; K]> {
    let cleaned: String = text
        .chars()
        .filter(|c| !matches!(c, '(' | ')' | '[' | ']') && !c.is_whitespace())
        .collect();
    let parts: Vec<&str> = cleaned.split(',').collect();
    if parts.len() != K {
        return Err(Error::Schema(format!(
            "expected {K} comma-separated integers, got {:?}",
            text
        )));
    }
    let mut out = [0i64; K];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p
            .parse()
            .map_err(|_| Error::Schema(format!("not an integer: {p:?}")))?;
    }
    Ok(out)
}

impl FromStr for SL2ZMatrix {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let v = parse_ints::<4>(s)?;
        Self::new(v[0], v[1], v[2], v[3])
    }
}

/// Generator token of a word in `s` and `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    S,
    T(BigInt),
}

/// A product of generators, read left to right.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GeneratorWord(pub Vec<Generator>);

impl GeneratorWord {
    pub fn tokens(&self) -> &[Generator] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiplies the word out in `SL(2, Z)`.
    pub fn evaluate(&self) -> SL2ZMatrix {
        self.0.iter().fold(SL2ZMatrix::identity(), |acc, g| match g {
            Generator::S => acc.mul(&SL2ZMatrix::s()),
            Generator::T(k) => acc.mul(&SL2ZMatrix::t_pow(k.clone())),
        })
    }

    fn push_t(&mut self, k: BigInt) {
        if k.is_zero() {
            return;
        }
        if let Some(Generator::T(prev)) = self.0.last_mut() {
            *prev += k;
            if prev.is_zero() {
                self.0.pop();
            }
        } else {
            self.0.push(Generator::T(k));
        }
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|g| match g {
                Generator::S => "S".to_string(),
                Generator::T(k) if k.is_one() => "T".to_string(),
                Generator::T(k) => format!("T^{k}"),
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Euclidean decomposition `m = T^{k_1} S T^{k_2} S ... ` via continued-fraction
/// reduction of the bottom row.
pub fn decompose(m: &SL2ZMatrix) -> GeneratorWord {
    let mut word = GeneratorWord::default();
    let mut cur = m.clone();
    loop {
        if cur.c.is_zero() {
            if cur.a.is_one() {
                word.push_t(cur.b.clone());
            } else {
                // cur = -t^{-b} and -1 = s^2
                word.0.push(Generator::S);
                word.0.push(Generator::S);
                word.push_t(-&cur.b);
            }
            break;
        }
        let k = cur.a.div_floor(&cur.c);
        word.push_t(k.clone());
        word.0.push(Generator::S);
        // cur <- s^{-1} t^{-k} cur
        let a = &cur.a - &k * &cur.c;
        let b = &cur.b - &k * &cur.d;
        cur = SL2ZMatrix::raw(cur.c.clone(), cur.d.clone(), -a, -b);
    }
    debug_assert_eq!(&word.evaluate(), m);
    word
}

/// Evaluates a word on the representation matrices `S` and `T`.
pub fn rep_word(md: &ModularData, word: &GeneratorWord) -> CycMatrix {
    let n = md.order_of_t();
    let mut acc: Option<CycMatrix> = None;
    for g in word.tokens() {
        acc = Some(match (acc, g) {
            (None, Generator::S) => md.s().clone(),
            (Some(m), Generator::S) => &m * md.s(),
            (prev, Generator::T(k)) => {
                let k = k.mod_floor(&BigInt::from(n)).to_i64().expect("residue");
                let tk = md.t_pow(k);
                match prev {
                    None => tk.to_matrix().embed(md.field_order()).expect("T lives in Q[zeta_N]"),
                    Some(m) => m.mul_diag_right(&tk),
                }
            }
        });
    }
    acc.unwrap_or_else(|| CycMatrix::identity(md.dim(), md.field_order()))
}

/// The representation matrix `M` of `m`.
pub fn rep(md: &ModularData, m: &SL2ZMatrix) -> CycMatrix {
    rep_word(md, &decompose(m))
}

/// Deterministic integral lift of a matrix mod `N` with determinant exactly 1.
pub fn lift(m: &SL2NMatrix) -> Result<SL2ZMatrix> {
    let n = m.modulus;
    if m.det() != 1 % n {
        return Err(Error::NotUnimodular {
            modulus: n,
            det: m.det() as i64,
        });
    }
    if n == 1 {
        return Ok(SL2ZMatrix::identity());
    }
    let ni = n as i128;
    let (a, b, c, d) = (m.a as i128, m.b as i128, m.c as i128, m.d as i128);
    if c == 0 && d == 1 {
        return Ok(SL2ZMatrix::t_pow(b));
    }
    if c == 0 && d == ni - 1 {
        return Ok(SL2ZMatrix::raw((-1).into(), b.into(), 0.into(), (-1).into()));
    }
    let c1 = if c == 0 { ni } else { c };
    let mut d1 = d;
    while d1.gcd(&c1) != 1 {
        d1 += ni;
    }
    // a0 d1 - b0 c1 = 1 and u c1 + v d1 = 1
    let e = d1.extended_gcd(&c1);
    let (a0, b0) = (e.x, -e.y);
    let (u, v) = (e.y, e.x);
    let t = (u * (a - a0) + v * (b - b0)).rem_euclid(ni);
    let lifted = SL2ZMatrix::raw(
        (a0 + t * c1).into(),
        (b0 + t * d1).into(),
        c1.into(),
        d1.into(),
    );
    debug_assert!(lifted.det().is_one());
    debug_assert_eq!(lifted.reduce(n), *m);
    Ok(lifted)
}

/// The automorphism `tau_l((a, b), (c, d)) = ((a, l b), (lhat c, d))`.
pub fn tau(m: &SL2NMatrix, l: i64) -> Result<SL2NMatrix> {
    let n = m.modulus;
    let lhat = arith::mod_inv(l, n).ok_or(Error::NotCoprime { value: l, modulus: n })?;
    let l = arith::rem(l, n);
    let mulmod = |x: u64, y: u64| ((x as u128 * y as u128) % n as u128) as u64;
    Ok(SL2NMatrix::new_unchecked(n, m.a, mulmod(l, m.b), mulmod(lhat, m.c), m.d))
}

/// Galois equivariance `sigma_l(D(m)) = D(tau_l(m))`.
pub fn check_gal2(md: &ModularData, m: &SL2NMatrix, l: i64) -> Result<bool> {
    let n = md.order_of_t();
    if m.modulus != n {
        return Err(Error::OrderMismatch {
            from: m.modulus,
            to: n,
        });
    }
    let lhs = rep(md, &lift(m)?).frobenius(l)?;
    let rhs = rep(md, &lift(&tau(m, l)?)?);
    Ok(lhs == rhs)
}

/// `|SL(2, Z/NZ)| = N^3 prod_{p | N} (1 - 1/p^2)`.
pub fn sl2n_order(n: u64) -> u128 {
    arith::factorize(n)
        .into_iter()
        .fold(n as u128 * n as u128 * n as u128, |acc, (p, _)| {
            let p = p as u128;
            acc / (p * p) * (p * p - 1)
        })
}

/// Bottom rows `(c, d)` of elements of `SL(2, Z/NZ)`.
pub fn bottom_rows(n: u64) -> impl Iterator<Item = (u64, u64)> {
    (0..n).flat_map(move |c| {
        (0..n).filter_map(move |d| (arith::gcd(arith::gcd(c as i64, d as i64), n as i64) == 1).then_some((c, d)))
    })
}

/// All `N` elements of `SL(2, Z/NZ)` with bottom row `(c, d)`.
pub fn completions(n: u64, c: u64, d: u64) -> impl Iterator<Item = SL2NMatrix> {
    let base = lift(&base_completion(n, c, d)).expect("primitive row").reduce(n);
    (0..n).map(move |t| {
        let tc = (t as u128 * c as u128 % n as u128) as u64;
        let td = (t as u128 * d as u128 % n as u128) as u64;
        SL2NMatrix::new_unchecked(n, base.a + tc, base.b + td, c, d)
    })
}

fn base_completion(n: u64, c: u64, d: u64) -> SL2NMatrix {
    if n == 1 {
        return SL2NMatrix::identity(1);
    }
    let ni = n as i128;
    let c1 = if c == 0 { ni } else { c as i128 };
    let mut d1 = d as i128;
    while d1.gcd(&c1) != 1 {
        d1 += ni;
    }
    let e = d1.extended_gcd(&c1);
    SL2NMatrix::new_unchecked(n, e.x.rem_euclid(ni) as u64, (-e.y).rem_euclid(ni) as u64, c, d)
}

/// Uniformly random element of `SL(2, Z/NZ)`.
pub fn random_sl2n<R: Rng + ?Sized>(rng: &mut R, n: u64) -> SL2NMatrix {
    loop {
        let c = rng.gen_range(0..n);
        let d = rng.gen_range(0..n);
        if arith::gcd(arith::gcd(c as i64, d as i64), n as i64) != 1 {
            continue;
        }
        let t = rng.gen_range(0..n);
        return completions(n, c, d).nth(t as usize).expect("t < n");
    }
}

/// A random element of the principal congruence subgroup `Gamma(N)`,
/// built as a product of conjugates of powers of `t^N`.
pub fn random_gamma_n<R: Rng + ?Sized>(rng: &mut R, n: u64, factors: usize) -> SL2ZMatrix {
    (0..factors).fold(SL2ZMatrix::identity(), |acc, _| {
        let g = lift(&random_sl2n(rng, n)).expect("unimodular");
        let k: i64 = rng.gen_range(-2..=2);
        let tn = SL2ZMatrix::t_pow(k * n as i64);
        acc.mul(&g.mul(&tn).mul(&g.inverse()))
    })
}

impl SL2ZMatrix {
    pub fn is_negative_identity(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == BigInt::from(-1) && self.d.is_negative()
    }
}
