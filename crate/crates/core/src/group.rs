//! Brute-force structure of small subgroups of `SL(2, Z/NZ)`.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::arith;
use crate::sl2::SL2NMatrix;

/// Order, exponent and, for abelian groups, the invariant factors in
/// elementary-divisor form (prime powers, ascending).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupStructure {
    pub order: u64,
    pub exponent: u64,
    pub abelian_invariants: Option<Vec<u64>>,
}

impl GroupStructure {
    pub fn of(elements: &[SL2NMatrix]) -> Self {
        let exponent = elements.iter().fold(1, |acc, g| arith::lcm(acc, g.order()));
        let abelian_invariants = is_abelian(elements).then(|| abelian_invariants(elements));
        GroupStructure {
            order: elements.len() as u64,
            exponent,
            abelian_invariants,
        }
    }

    /// `Z2^2 x Z4` style rendering; order and exponent for non-abelian groups.
    pub fn describe(&self) -> String {
        match &self.abelian_invariants {
            Some(inv) if inv.is_empty() => "1".to_string(),
            Some(inv) => {
                let mut parts: Vec<String> = Vec::new();
                let mut i = 0;
                while i < inv.len() {
                    let j = inv[i..].iter().take_while(|&&x| x == inv[i]).count();
                    parts.push(if j == 1 {
                        format!("Z{}", inv[i])
                    } else {
                        format!("Z{}^{}", inv[i], j)
                    });
                    i += j;
                }
                parts.join(" x ")
            }
            None => format!("non-abelian, order {}, exponent {}", self.order, self.exponent),
        }
    }
}

pub fn is_abelian(elements: &[SL2NMatrix]) -> bool {
    elements
        .iter()
        .enumerate()
        .all(|(i, x)| elements[i + 1..].iter().all(|y| x.mul(y) == y.mul(x)))
}

/// Checks that a finite set is a subgroup: identity, closure and inverses.
pub fn is_subgroup(elements: &[SL2NMatrix]) -> bool {
    let Some(first) = elements.first() else {
        return false;
    };
    let set: HashSet<SL2NMatrix> = elements.iter().copied().collect();
    set.contains(&SL2NMatrix::identity(first.modulus))
        && elements.iter().all(|x| set.contains(&x.inverse()))
        && elements
            .iter()
            .all(|x| elements.iter().all(|y| set.contains(&x.mul(y))))
}

/// Subgroup generated by `gens`, sorted.
pub fn closure(modulus: u64, gens: &[SL2NMatrix]) -> Vec<SL2NMatrix> {
    let id = SL2NMatrix::identity(modulus);
    let mut seen: HashSet<SL2NMatrix> = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<SL2NMatrix> = seen.into_iter().collect();
    out.sort();
    out
}

pub fn center(elements: &[SL2NMatrix]) -> Vec<SL2NMatrix> {
    elements
        .iter()
        .filter(|x| elements.iter().all(|y| x.mul(y) == y.mul(x)))
        .copied()
        .collect()
}

/// Subgroup generated by all commutators `x^{-1} y^{-1} x y`.
pub fn derived_subgroup(elements: &[SL2NMatrix]) -> Vec<SL2NMatrix> {
    let Some(first) = elements.first() else {
        return Vec::new();
    };
    let comms: BTreeSet<SL2NMatrix> = elements
        .iter()
        .flat_map(|x| {
            elements
                .iter()
                .map(move |y| x.inverse().mul(&y.inverse()).mul(x).mul(y))
        })
        .collect();
    let comms: Vec<SL2NMatrix> = comms.into_iter().collect();
    closure(first.modulus, &comms)
}

/// Invariants of a finite abelian group from the census of `p^k`-torsion.
///
/// For the `p`-part, `log_p |{x : x^{p^k} = 1}| - log_p |{x : x^{p^{k-1}} = 1}|`
/// counts the cyclic factors of order at least `p^k`.
pub fn abelian_invariants(elements: &[SL2NMatrix]) -> Vec<u64> {
    let orders: Vec<u64> = elements.iter().map(|g| g.order()).collect();
    let n = elements.len() as u64;
    let mut out = Vec::new();
    for (p, e) in arith::factorize(n) {
        let mut prev = 0u32;
        let mut at_least = Vec::new();
        let mut pk = 1u64;
        for _ in 1..=e {
            pk *= p;
            let count = orders.iter().filter(|&&o| pk.is_multiple_of(o)).count() as u64;
            let log = ilog_exact(count, p);
            at_least.push(log - prev);
            prev = log;
        }
        // at_least[k-1] = number of factors of order >= p^k
        for k in (1..=e as usize).rev() {
            let exactly = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
            for _ in 0..exactly {
                out.push(p.pow(k as u32));
            }
        }
    }
    out.sort();
    out
}

fn ilog_exact(mut x: u64, p: u64) -> u32 {
    let mut k = 0;
    while x > 1 {
        assert!(x.is_multiple_of(p), "torsion count is a power of p");
        x /= p;
        k += 1;
    }
    k
}

/// Greedy generating set: repeatedly adds the element that enlarges the
/// generated subgroup most, ties broken by the smallest `(a, b, c, d)`.
pub fn greedy_generators(elements: &[SL2NMatrix]) -> Vec<SL2NMatrix> {
    let Some(first) = elements.first() else {
        return Vec::new();
    };
    let modulus = first.modulus;
    let mut sorted = elements.to_vec();
    sorted.sort();
    let mut gens: Vec<SL2NMatrix> = Vec::new();
    let mut current: HashSet<SL2NMatrix> = HashSet::from([SL2NMatrix::identity(modulus)]);
    while current.len() < sorted.len() {
        let mut best: Option<(usize, SL2NMatrix, Vec<SL2NMatrix>)> = None;
        for x in sorted.iter().filter(|x| !current.contains(x)) {
            let mut trial = gens.clone();
            trial.push(*x);
            let h = closure(modulus, &trial);
            if best.as_ref().is_none_or(|(size, _, _)| h.len() > *size) {
                best = Some((h.len(), *x, h));
            }
        }
        let (_, x, h) = best.expect("a missing element exists");
        gens.push(x);
        current = h.into_iter().collect();
    }
    gens
}
