//! Membership in the kernel `K` of the modular representation, the finite
//! image `mu_N(K)` inside `SL(2, Z/NZ)`, and the naive conductor bound.
//!
//! An element `((a, b), (c, d))` with `d` a unit mod `N` lies in `K` iff
//! `sigma_d(S) T^b = T^c S`. Entrywise this reads
//! `sigma_d(S)_pq = zeta_N^{c t_p - b t_q} S_pq`, so once the phase relating
//! `sigma_d(S)_pq` to `S_pq` is known, membership is integer arithmetic.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigUint;
use rand::Rng;
use rayon::prelude::*;

use crate::arith;
use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};
use crate::galois::{extract_g, MonomialMatrix};
use crate::group::{self, GroupStructure};
use crate::modular_data::ModularData;
use crate::sl2::{self, lift, rep, SL2NMatrix, SL2ZMatrix};

/// Default cap on the number of group elements enumerated.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    /// `S_pq = 0`, no constraint.
    Any,
    /// `sigma_d(S)_pq = zeta_N^j S_pq`.
    Exactly(u64),
    /// No root of unity of order `N` relates the two entries.
    Never,
}

/// Precomputed phase tables, one per unit `d` mod `N`.
pub struct KernelTest {
    modulus: u64,
    dim: usize,
    scaled_t: Vec<u64>,
    phases: HashMap<u64, Vec<Phase>>,
}

impl KernelTest {
    pub fn new(md: &ModularData) -> Result<Self> {
        let n = md.order_of_t();
        let dim = md.dim();
        let s = md.s();
        let units = arith::units(n);
        let tables: Vec<(u64, Vec<Phase>)> = units
            .par_iter()
            .map(|&d| {
                let sd = s.frobenius(d as i64)?;
                let mut table = Vec::with_capacity(dim * dim);
                for p in 0..dim {
                    for q in 0..dim {
                        table.push(phase_between(sd.get(p, q), s.get(p, q), n));
                    }
                }
                Ok((d, table))
            })
            .collect::<Result<_>>()?;
        Ok(KernelTest {
            modulus: n,
            dim,
            scaled_t: md.spectrum().scaled_exponents(),
            phases: tables.into_iter().collect(),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Membership of the class of `m` mod `N`.
    pub fn contains(&self, m: &SL2NMatrix) -> bool {
        assert_eq!(m.modulus, self.modulus, "matrix reduced mod the wrong level");
        let n = self.modulus;
        if arith::coprime(m.d as i64, n) {
            return self.contains_unit_d(m);
        }
        // t^{-k} m t^k has lower-right entry d + k c; pick the first unit.
        let k = (1..=n)
            .find(|&k| arith::coprime(((m.d as u128 + k as u128 * m.c as u128) % n as u128) as i64, n))
            .expect("(c, d) is primitive mod N");
        let tk = SL2NMatrix::new_unchecked(n, 1, k, 0, 1);
        let conj = tk.inverse().mul(m).mul(&tk);
        self.contains_unit_d(&conj)
    }

    fn contains_unit_d(&self, m: &SL2NMatrix) -> bool {
        let n = self.modulus as u128;
        let table = &self.phases[&m.d];
        let b = m.b as u128;
        let c = m.c as u128;
        for p in 0..self.dim {
            let cp = c * self.scaled_t[p] as u128 % n;
            for q in 0..self.dim {
                match table[p * self.dim + q] {
                    Phase::Any => {}
                    Phase::Never => return false,
                    Phase::Exactly(j) => {
                        let bq = b * self.scaled_t[q] as u128 % n;
                        if (cp + n - bq) % n != j as u128 {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Membership of an integral matrix.
    pub fn contains_integral(&self, m: &SL2ZMatrix) -> bool {
        self.contains(&m.reduce(self.modulus))
    }
}

/// `j` with `x = zeta_n^j y`, classified.
fn phase_between(x: &CycNumber, y: &CycNumber, n: u64) -> Phase {
    if y.is_zero() {
        return if x.is_zero() { Phase::Any } else { Phase::Never };
    }
    if x.is_zero() || (x * &x.conj()) != (y * &y.conj()) {
        return Phase::Never;
    }
    let (xr, xi) = x.to_complex();
    let (yr, yi) = y.to_complex();
    let angle = (xi * yr - xr * yi).atan2(xr * yr + xi * yi);
    let guess = ((angle / std::f64::consts::TAU * n as f64).round() as i64).rem_euclid(n as i64) as u64;
    let fits = |j: u64| &y.mul_root_of(n, j as i64) == x;
    if fits(guess) {
        return Phase::Exactly(guess);
    }
    (0..n).find(|&j| j != guess && fits(j)).map_or(Phase::Never, Phase::Exactly)
}

/// Kernel membership of an integral matrix of determinant 1.
pub fn is_in_kernel(md: &ModularData, m: &SL2ZMatrix) -> Result<bool> {
    Ok(KernelTest::new(md)?.contains_integral(m))
}

/// The finite image `mu_N(K)` and its structure.
#[derive(Clone, Debug)]
pub struct KernelReport {
    pub modulus: u64,
    pub order: u64,
    pub center: GroupStructure,
    pub derived: GroupStructure,
    pub generators: Vec<SL2NMatrix>,
    pub elements: Vec<SL2NMatrix>,
    pub seconds: f64,
}

impl KernelReport {
    pub fn contains(&self, m: &SL2NMatrix) -> bool {
        self.elements.binary_search(m).is_ok()
    }
}

/// Enumerates `SL(2, Z/NZ)` and collects the kernel image.
pub fn kernel_image(md: &ModularData, budget: u128) -> Result<KernelReport> {
    let start = Instant::now();
    let n = md.order_of_t();
    let required = sl2::sl2n_order(n);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let test = KernelTest::new(md)?;
    let rows: Vec<(u64, u64)> = sl2::bottom_rows(n).collect();
    let mut elements: Vec<SL2NMatrix> = rows
        .par_iter()
        .flat_map_iter(|&(c, d)| sl2::completions(n, c, d).filter(|m| test.contains(m)))
        .collect();
    elements.sort();
    if !group::is_subgroup(&elements) {
        return Err(Error::AxiomViolation {
            axiom: crate::error::Axiom::ModularRelation,
            witness: vec![elements.len()],
        });
    }
    let center = GroupStructure::of(&group::center(&elements));
    let derived = GroupStructure::of(&group::derived_subgroup(&elements));
    let generators = group::greedy_generators(&elements);
    Ok(KernelReport {
        modulus: n,
        order: elements.len() as u64,
        center,
        derived,
        generators,
        elements,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// The four consequences of membership for `m` in `K` with `d` a unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Consequences {
    /// `G_d^2 = 1` and `d^4 = 1 (mod N)`.
    pub g_square: bool,
    /// `b = c = 1 - d^2 (mod N_0)`.
    pub b_c_mod_n0: bool,
    /// `eps_d(0) = omega_0^{c - b}` and `2c = 2b (mod N)`.
    pub vacuum_sign: bool,
    /// `2c = 0 (mod N_0)`.
    pub two_c: bool,
}

impl Consequences {
    pub fn all(&self) -> bool {
        self.g_square && self.b_c_mod_n0 && self.vacuum_sign && self.two_c
    }
}

pub fn kernel_consequences(md: &ModularData, m: &SL2NMatrix) -> Result<Consequences> {
    let g = extract_g(md, m.d as i64)?;
    Ok(consequences_with(md, m, &g))
}

fn consequences_with(md: &ModularData, m: &SL2NMatrix, g: &MonomialMatrix) -> Consequences {
    let n = md.order_of_t();
    let n0 = md.n_zero();
    let (b, c, d) = (m.b, m.c, m.d);
    let g_square = g.compose(g).is_identity() && arith::pow_mod(d, 4, n) == 1 % n;
    let one_minus_d2 = arith::rem(1 - (arith::pow_mod(d, 2, n0) as i64), n0);
    let b_c_mod_n0 = b % n0 == one_minus_d2 && c % n0 == one_minus_d2;
    // omega_0^{c - b} as a rational exponent of exp(2 pi i .)
    let e = crate::cyclotomic::frac(&(&md.t_exponents()[0] * crate::cyclotomic::rat(c as i64 - b as i64, 1)));
    let sign_ok = if g.signs()[0] > 0 {
        e == crate::cyclotomic::rat(0, 1)
    } else {
        e == crate::cyclotomic::rat(1, 2)
    };
    let vacuum_sign = sign_ok && (2 * c) % n == (2 * b) % n;
    let two_c = (2 * c) % n0 == 0;
    Consequences {
        g_square,
        b_c_mod_n0,
        vacuum_sign,
        two_c,
    }
}

/// Checks every element of the kernel image with a unit `d`; returns the
/// number checked and the first failing element, if any.
pub fn check_all_consequences(md: &ModularData, elements: &[SL2NMatrix]) -> Result<(usize, Option<SL2NMatrix>)> {
    let n = md.order_of_t();
    let mut gs: HashMap<u64, MonomialMatrix> = HashMap::new();
    let mut checked = 0;
    for m in elements.iter().filter(|m| arith::coprime(m.d as i64, n)) {
        if let std::collections::hash_map::Entry::Vacant(e) = gs.entry(m.d) {
            e.insert(extract_g(md, m.d as i64)?);
        }
        checked += 1;
        if !consequences_with(md, m, &gs[&m.d]).all() {
            return Ok((checked, Some(*m)));
        }
    }
    Ok((checked, None))
}

/// `K ∩ Gamma_1(N) = Gamma(N)`: the only kernel element of the form
/// `((1, b), (0, 1))` mod `N` is the identity. Returns a violating element.
pub fn gamma1_witness(elements: &[SL2NMatrix]) -> Option<SL2NMatrix> {
    elements
        .iter()
        .find(|m| m.a == 1 % m.modulus && m.d == 1 % m.modulus && m.c == 0 && m.b != 0)
        .copied()
}

/// Compares the phase-table test with `D(m) = 1` on random lifts and on
/// `extra`; returns the agreement count and the first disagreement.
pub fn oracle_agreement<R: Rng + ?Sized>(
    md: &ModularData,
    test: &KernelTest,
    rng: &mut R,
    samples: usize,
    extra: &[SL2NMatrix],
) -> Result<(usize, Option<SL2NMatrix>)> {
    let n = md.order_of_t();
    let mut cases: Vec<SL2NMatrix> = (0..samples).map(|_| sl2::random_sl2n(rng, n)).collect();
    cases.extend_from_slice(extra);
    let results: Vec<(SL2NMatrix, bool)> = cases
        .par_iter()
        .map(|m| Ok((*m, test.contains(m) == rep(md, &lift(m)?).is_identity())))
        .collect::<Result<_>>()?;
    let agree = results.iter().filter(|(_, ok)| *ok).count();
    Ok((agree, results.iter().find(|(_, ok)| !ok).map(|(m, _)| *m)))
}

/// `lambda(N) | 2 s(r)` with `s(r) = lcm(1, ..., r)`.
pub fn bound_admits(n: u64, r: u64) -> bool {
    let two_s = arith::lcm_upto(r) * 2u32;
    (two_s % BigUint::from(arith::carmichael(n))) == BigUint::from(0u32)
}

/// Largest `N` whose unit-group exponent divides `2 lcm(1, ..., r)`.
pub fn conductor_bound_naive(r: u64) -> Result<BigUint> {
    let two_s = arith::lcm_upto(r.max(1)) * 2u32;
    let l: u64 = two_s.clone().try_into().map_err(|_| Error::BudgetExceeded {
        required: r as u128,
        budget: 40,
    })?;
    let divs = arith::divisors(l);
    if divs.len() as u128 > DEFAULT_BUDGET {
        return Err(Error::BudgetExceeded {
            required: divs.len() as u128,
            budget: DEFAULT_BUDGET,
        });
    }
    let mut bound = BigUint::from(1u32);
    for p in divs.into_iter().map(|d| d + 1).filter(|&p| is_prime(p)) {
        let v = valuation(l, p);
        let k = if p == 2 { v + 2 } else { v + 1 };
        bound *= BigUint::from(p).pow(k);
    }
    Ok(bound)
}

fn valuation(mut x: u64, p: u64) -> u32 {
    let mut k = 0;
    while x.is_multiple_of(p) {
        x /= p;
        k += 1;
    }
    k
}

fn is_prime(p: u64) -> bool {
    matches!(arith::factorize(p).as_slice(), [(_, 1)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn naive_bound_values() {
        assert_eq!(conductor_bound_naive(1).unwrap(), BigUint::from(24u32));
        assert_eq!(conductor_bound_naive(2).unwrap(), BigUint::from(240u32));
        assert_eq!(conductor_bound_naive(3).unwrap(), BigUint::from(65520u32));
        assert_eq!(conductor_bound_naive(4).unwrap(), BigUint::from(131040u32));
    }

    #[test]
    fn naive_bound_is_maximal_by_search() {
        for r in 1..=3u64 {
            let bound: u64 = conductor_bound_naive(r).unwrap().try_into().unwrap();
            let best = (1..=bound * 3).rev().find(|&n| bound_admits(n, r)).unwrap();
            assert_eq!(best, bound, "r = {r}");
            assert!((1..=bound).filter(|&n| bound_admits(n, r)).all(|n| bound.is_multiple_of(n)));
        }
    }

    #[test]
    fn phase_classification() {
        let y = CycNumber::root(12, 1);
        let x = CycNumber::root(12, 4);
        assert_eq!(phase_between(&x, &y, 12), Phase::Exactly(3));
        assert_eq!(phase_between(&(&x + &x), &y, 12), Phase::Never);
        let z = CycNumber::zero(12);
        assert_eq!(phase_between(&z, &z, 12), Phase::Any);
        assert_eq!(phase_between(&CycNumber::sqrt_int(2), &CycNumber::from_int(1, 8), 8), Phase::Never);
    }

    #[test]
    fn simple_memberships() {
        let md = ModularData::minimal_model(3, 4).unwrap();
        let test = KernelTest::new(&md).unwrap();
        assert!(test.contains(&SL2NMatrix::identity(48)));
        assert!(test.contains_integral(&SL2ZMatrix::t_pow(48)));
        assert!(!test.contains_integral(&SL2ZMatrix::t_pow(1)));
        assert!(!test.contains_integral(&SL2ZMatrix::s()));
        let c = kernel_consequences(&md, &SL2NMatrix::identity(48)).unwrap();
        assert!(c.all());
    }

    #[test]
    fn gamma1_witness_detects_translations() {
        let id = SL2NMatrix::identity(10);
        let t = SL2NMatrix::new(10, 1, 3, 0, 1).unwrap();
        assert_eq!(gamma1_witness(&[id]), None);
        assert_eq!(gamma1_witness(&[id, t]), Some(t));
    }

    #[test]
    fn budget_is_enforced() {
        let md = ModularData::minimal_model(3, 4).unwrap();
        assert!(matches!(
            kernel_image(&md, 1000),
            Err(Error::BudgetExceeded { required: 73728, budget: 1000 })
        ));
    }
}
