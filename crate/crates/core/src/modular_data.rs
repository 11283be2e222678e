//! Modular data `(S, T)`: construction, axioms, Verlinde fusion and the
//! arithmetic invariants `N`, `N0` and `e = N / N0` of the Dehn twist.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::arith;
use crate::cyclotomic::{frac, rat, CycNumber, Rational};
use crate::error::{Axiom, Error, Result};
use crate::matrix::{CycMatrix, PhaseDiagonal};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimaryLabel {
    pub index: usize,
    pub name: String,
}

/// Spectrum of the Dehn twist: the exponents `t_p` with `T_pp = exp(2 pi i t_p)`
/// and the central charge. Everything about `N`, `N0` and `e` only needs this.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistSpectrum {
    pub t: PhaseDiagonal,
    pub central_charge: Rational,
}

impl TwistSpectrum {
    /// Order `N` of `T` (the conductor).
    pub fn order_of_t(&self) -> u64 {
        self.t.order()
    }

    /// `N0`: order of `omega_0^{-1} T`, the lcm of the denominators of the conformal weights mod 1.
    pub fn n_zero(&self) -> u64 {
        let t0 = &self.t.exponents()[0];
        self.t.exponents().iter().fold(1u64, |acc, tp| {
            let d: u64 = frac(&(tp - t0)).denom().try_into().expect("fits in u64");
            arith::lcm(acc, d)
        })
    }

    pub fn ratio_e(&self) -> u64 {
        self.order_of_t() / self.n_zero()
    }

    /// `t_p * N` as integers mod `N`.
    pub fn scaled_exponents(&self) -> Vec<u64> {
        let n = self.order_of_t();
        self.t
            .exponents()
            .iter()
            .map(|e| {
                let v = e * Rational::from_integer(BigInt::from(n));
                u64::try_from(v.to_integer()).expect("exponent fits")
            })
            .collect()
    }
}

/// Kac labels `(r, s)` of a minimal model, vacuum first.
fn kac_labels(p: u64, q: u64) -> Vec<(u64, u64)> {
    let mut reps: Vec<(u64, u64)> = (1..p)
        .flat_map(|r| (1..q).map(move |s| (r, s)))
        .filter(|&(r, s)| (r, s) <= (p - r, q - s))
        .collect();
    reps.sort();
    reps
}

fn check_kac(p: u64, q: u64) -> Result<(u64, u64)> {
    let (p, q) = if p < q { (p, q) } else { (q, p) };
    if p < 2 || p == q || p.gcd(&q) != 1 {
        return Err(Error::InvalidKacData { p, q });
    }
    Ok((p, q))
}

/// Conformal weight `h_{r,s} = ((q r - p s)^2 - (q - p)^2) / (4 p q)`.
pub fn kac_weight(p: u64, q: u64, r: u64, s: u64) -> Rational {
    let (p, q, r, s) = (p as i64, q as i64, r as i64, s as i64);
    rat((q * r - p * s).pow(2) - (q - p).pow(2), 4 * p * q)
}

pub fn minimal_central_charge(p: u64, q: u64) -> Rational {
    let (p, q) = (p as i64, q as i64);
    Rational::one() - rat(6 * (q - p).pow(2), p * q)
}

/// Labels, weights and twist spectrum of `M(p, q)` without building `S`.
pub fn minimal_model_spectrum(p: u64, q: u64) -> Result<(Vec<PrimaryLabel>, Vec<Rational>, TwistSpectrum)> {
    let (p, q) = check_kac(p, q)?;
    let c = minimal_central_charge(p, q);
    let shift = -(&c / Rational::from_integer(24.into()));
    let labels = kac_labels(p, q);
    let weights: Vec<Rational> = labels.iter().map(|&(r, s)| kac_weight(p, q, r, s)).collect();
    let t = PhaseDiagonal::new(weights.iter().map(|h| h + &shift).collect());
    let names = labels
        .iter()
        .enumerate()
        .map(|(index, (r, s))| PrimaryLabel {
            index,
            name: format!("({r},{s})"),
        })
        .collect();
    Ok((
        names,
        weights,
        TwistSpectrum {
            t,
            central_charge: c,
        },
    ))
}

/// Rewrites `x` inside `Q[zeta_n]`, passing through the common subfield.
fn into_order(x: &CycNumber, n: u64) -> Result<CycNumber> {
    let g = x.order().gcd(&n);
    x.restrict(g)?.embed(n)
}

/// Verlinde fusion coefficients `N_pqr`, totally symmetric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionTable {
    dim: usize,
    coefficients: Vec<u64>,
}

impl FusionTable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, p: usize, q: usize, r: usize) -> u64 {
        self.coefficients[(p * self.dim + q) * self.dim + r]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularData {
    labels: Vec<PrimaryLabel>,
    s: CycMatrix,
    spectrum: TwistSpectrum,
    field_order: u64,
}

impl ModularData {
    /// Builds and validates modular data. `S` is re-expressed over
    /// `Q[zeta_N]`, `N` the order of `T`; failure to do so is reported as a
    /// conductor violation.
    pub fn new(
        labels: Vec<PrimaryLabel>,
        s: CycMatrix,
        t_exponents: Vec<Rational>,
        central_charge: Rational,
    ) -> Result<Self> {
        let md = Self::new_unchecked(labels, s, t_exponents, central_charge)?;
        md.validate()?;
        Ok(md)
    }

    /// Same as [`ModularData::new`] but only re-expresses `S` over the
    /// conductor field; the axioms are left for [`ModularData::validate`].
    pub fn new_unchecked(
        labels: Vec<PrimaryLabel>,
        s: CycMatrix,
        t_exponents: Vec<Rational>,
        central_charge: Rational,
    ) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 || s.dim() != dim || t_exponents.len() != dim {
            return Err(Error::Schema(format!(
                "dimension mismatch: {} labels, {}x{} S, {} T exponents",
                dim,
                s.dim(),
                s.dim(),
                t_exponents.len()
            )));
        }
        let spectrum = TwistSpectrum {
            t: PhaseDiagonal::new(t_exponents),
            central_charge,
        };
        let n = spectrum.order_of_t();
        let mut rows = Vec::with_capacity(dim);
        for i in 0..dim {
            let mut row = Vec::with_capacity(dim);
            for j in 0..dim {
                let x = into_order(s.get(i, j), n).map_err(|_| Error::AxiomViolation {
                    axiom: Axiom::Conductor,
                    witness: vec![i, j],
                })?;
                row.push(x);
            }
            rows.push(row);
        }
        Ok(ModularData {
            labels,
            s: CycMatrix::from_rows(rows),
            spectrum,
            field_order: n,
        })
    }

    /// The Virasoro minimal model `M(p, q)`.
    pub fn minimal_model(p: u64, q: u64) -> Result<Self> {
        let (p, q) = check_kac(p, q)?;
        let (labels, _, spectrum) = minimal_model_spectrum(p, q)?;
        let kac = kac_labels(p, q);
        // S = 2 sqrt(2/(pq)) (-1)^{1 + s rho + r sigma} sin(pi q r rho / p) sin(pi p s sigma / q)
        let prefactor = CycNumber::sqrt_int(2 * p * q).scale(&rat(2, (p * q) as i64));
        let order = 8 * p * q;
        let dim = kac.len();
        let s = CycMatrix::from_fn(dim, |i, j| {
            let (r, s) = kac[i];
            let (rho, sigma) = kac[j];
            let sign = if (1 + s * rho + r * sigma) % 2 == 0 { 1 } else { -1 };
            let a = CycNumber::sin_pi((q * r * rho) as i64, p);
            let b = CycNumber::sin_pi((p * s * sigma) as i64, q);
            let v = &(&a * &b) * &prefactor;
            let v = if sign < 0 { -v } else { v };
            v.embed(order).expect("entries live in Q[zeta_8pq]")
        });
        Self::new(
            labels,
            s,
            spectrum.t.exponents().to_vec(),
            spectrum.central_charge,
        )
    }

    pub fn labels(&self) -> &[PrimaryLabel] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn s(&self) -> &CycMatrix {
        &self.s
    }

    /// `S^{-1}`, the conjugate transpose of the unitary `S`.
    pub fn s_inverse(&self) -> CycMatrix {
        self.s.conj_transpose()
    }

    pub fn t(&self) -> &PhaseDiagonal {
        &self.spectrum.t
    }

    pub fn t_exponents(&self) -> &[Rational] {
        self.spectrum.t.exponents()
    }

    pub fn spectrum(&self) -> &TwistSpectrum {
        &self.spectrum
    }

    pub fn central_charge(&self) -> &Rational {
        &self.spectrum.central_charge
    }

    pub fn field_order(&self) -> u64 {
        self.field_order
    }

    pub fn order_of_t(&self) -> u64 {
        self.spectrum.order_of_t()
    }

    pub fn n_zero(&self) -> u64 {
        self.spectrum.n_zero()
    }

    pub fn ratio_e(&self) -> u64 {
        self.spectrum.ratio_e()
    }

    /// `T^k` for integer `k`.
    pub fn t_pow(&self, k: i64) -> PhaseDiagonal {
        self.spectrum.t.powi(k)
    }

    /// Checks every axiom, returning the first violation.
    pub fn validate(&self) -> Result<()> {
        self.check_symmetry()?;
        self.check_unitarity()?;
        self.charge_conjugation()?;
        self.check_modular_relation()?;
        self.check_s_fourth_power()?;
        self.check_vacuum_phase()?;
        self.fusion().map_err(|e| match e {
            Error::NonIntegerFusion { p, q, r, .. } => Error::AxiomViolation {
                axiom: Axiom::FusionIntegrality,
                witness: vec![p, q, r],
            },
            other => other,
        })?;
        Ok(())
    }

    /// Outcome of each axiom check, in a fixed order.
    pub fn axiom_report(&self) -> Vec<(Axiom, Result<()>)> {
        vec![
            (Axiom::Symmetry, self.check_symmetry()),
            (Axiom::Unitarity, self.check_unitarity()),
            (Axiom::ChargeConjugation, self.charge_conjugation().map(|_| ())),
            (Axiom::ModularRelation, self.check_modular_relation()),
            (Axiom::SFourthPower, self.check_s_fourth_power()),
            (Axiom::VacuumPhase, self.check_vacuum_phase()),
            (Axiom::FusionIntegrality, self.fusion().map(|_| ())),
        ]
    }

    fn violation(axiom: Axiom, witness: (usize, usize)) -> Error {
        Error::AxiomViolation {
            axiom,
            witness: vec![witness.0, witness.1],
        }
    }

    pub fn check_symmetry(&self) -> Result<()> {
        match self.s.first_difference(&self.s.transpose()) {
            None => Ok(()),
            Some(w) => Err(Self::violation(Axiom::Symmetry, w)),
        }
    }

    pub fn check_unitarity(&self) -> Result<()> {
        let prod = &self.s * &self.s_inverse();
        let id = CycMatrix::identity(self.dim(), self.field_order);
        match prod.first_difference(&id) {
            None => Ok(()),
            Some(w) => Err(Self::violation(Axiom::Unitarity, w)),
        }
    }

    pub fn check_modular_relation(&self) -> Result<()> {
        let tinv = self.t_pow(-1);
        let lhs = &self.s.mul_diag_right(self.t()) * &self.s;
        let rhs = self.s.mul_diag_left(&tinv).mul_diag_right(&tinv);
        match lhs.first_difference(&rhs) {
            None => Ok(()),
            Some(w) => Err(Self::violation(Axiom::ModularRelation, w)),
        }
    }

    pub fn check_s_fourth_power(&self) -> Result<()> {
        let s2 = &self.s * &self.s;
        let s4 = &s2 * &s2;
        match s4.first_difference(&CycMatrix::identity(self.dim(), self.field_order)) {
            None => Ok(()),
            Some(w) => Err(Self::violation(Axiom::SFourthPower, w)),
        }
    }

    pub fn check_vacuum_phase(&self) -> Result<()> {
        let want = frac(&-(self.central_charge() / Rational::from_integer(24.into())));
        if self.t_exponents()[0] == want {
            Ok(())
        } else {
            Err(Self::violation(Axiom::VacuumPhase, (0, 0)))
        }
    }

    /// The involution `p -> pbar` read off `(S^2)_p^q = delta_{p, qbar}`.
    pub fn charge_conjugation(&self) -> Result<Vec<usize>> {
        let s2 = &self.s * &self.s;
        let dim = self.dim();
        let mut perm = vec![usize::MAX; dim];
        for p in 0..dim {
            for q in 0..dim {
                let x = s2.get(p, q);
                if x.is_zero() {
                    continue;
                }
                if !x.is_one() || perm[p] != usize::MAX {
                    return Err(Self::violation(Axiom::ChargeConjugation, (p, q)));
                }
                perm[p] = q;
            }
            if perm[p] == usize::MAX {
                return Err(Self::violation(Axiom::ChargeConjugation, (p, p)));
            }
        }
        for p in 0..dim {
            if perm[perm[p]] != p {
                return Err(Self::violation(Axiom::ChargeConjugation, (p, perm[p])));
            }
        }
        Ok(perm)
    }

    /// Verlinde fusion `N_pqr = sum_s S_ps S_qs S_rs / S_0s`, checked to be
    /// non-negative integers.
    pub fn fusion(&self) -> Result<FusionTable> {
        let dim = self.dim();
        let inv_vac: Vec<CycNumber> = (0..dim)
            .map(|s| {
                self.s.get(0, s).inv().ok_or(Error::AxiomViolation {
                    axiom: Axiom::FusionIntegrality,
                    witness: vec![0, s],
                })
            })
            .collect::<Result<_>>()?;
        // S_ps S_qs / S_0s, reused across r
        let triples: Vec<(usize, usize, usize)> = (0..dim)
            .flat_map(|p| (p..dim).flat_map(move |q| (q..dim).map(move |r| (p, q, r))))
            .collect();
        let values = triples
            .par_iter()
            .map(|&(p, q, r)| {
                let mut acc = CycNumber::zero(self.field_order);
                for s in 0..dim {
                    let t = &(&(self.s.get(p, s) * self.s.get(q, s)) * self.s.get(r, s)) * &inv_vac[s];
                    acc = &acc + &t;
                }
                match acc.as_rational() {
                    Some(v) if v.is_integer() && !v.is_negative() => {
                        Ok(u64::try_from(v.to_integer()).expect("fusion fits in u64"))
                    }
                    _ => Err(Error::NonIntegerFusion {
                        p,
                        q,
                        r,
                        value: acc.to_string(),
                    }),
                }
            })
            .collect::<Result<Vec<u64>>>()?;
        let mut coefficients = vec![0u64; dim * dim * dim];
        for (&(p, q, r), &v) in triples.iter().zip(&values) {
            for (a, b, c) in [(p, q, r), (p, r, q), (q, p, r), (q, r, p), (r, p, q), (r, q, p)] {
                coefficients[(a * dim + b) * dim + c] = v;
            }
        }
        Ok(FusionTable { dim, coefficients })
    }

    /// A copy with the `T` exponents replaced, left unvalidated.
    pub fn with_t_exponents_unchecked(&self, t: Vec<Rational>) -> Result<Self> {
        Self::new_unchecked(
            self.labels.clone(),
            self.s.clone(),
            t,
            self.central_charge().clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weights_of(p: u64, q: u64) -> Vec<Rational> {
        minimal_model_spectrum(p, q).unwrap().1
    }

    #[test]
    fn lee_yang_spectrum() {
        let (labels, w, sp) = minimal_model_spectrum(2, 5).unwrap();
        assert_eq!(labels.len(), 2);
        assert_eq!(w, vec![rat(0, 1), rat(-1, 5)]);
        assert_eq!(sp.central_charge, rat(-22, 5));
        assert_eq!(sp.order_of_t(), 60);
        assert_eq!(sp.n_zero(), 5);
        assert_eq!(sp.ratio_e(), 12);
    }

    #[test]
    fn ising_spectrum() {
        let (labels, w, sp) = minimal_model_spectrum(3, 4).unwrap();
        assert_eq!(labels[0].name, "(1,1)");
        let mut sorted = w.clone();
        sorted.sort();
        assert_eq!(sorted, vec![rat(0, 1), rat(1, 16), rat(1, 2)]);
        assert_eq!(sp.central_charge, rat(1, 2));
        assert_eq!((sp.order_of_t(), sp.n_zero(), sp.ratio_e()), (48, 16, 3));
    }

    #[test]
    fn m27_order() {
        let (_, _, sp) = minimal_model_spectrum(2, 7).unwrap();
        assert_eq!((sp.order_of_t(), sp.ratio_e()), (42, 6));
    }

    #[test]
    fn invalid_kac() {
        assert_eq!(
            ModularData::minimal_model(4, 6),
            Err(Error::InvalidKacData { p: 4, q: 6 })
        );
        assert!(minimal_model_spectrum(1, 5).is_err());
        // argument order does not matter
        assert_eq!(weights_of(5, 2), weights_of(2, 5));
    }

    #[test]
    fn vacuum_weight_is_zero() {
        for (p, q) in [(2, 5), (3, 4), (3, 5), (4, 7), (5, 6)] {
            assert_eq!(weights_of(p, q)[0], rat(0, 1));
        }
    }

    #[test]
    fn lee_yang_matches_printed_s() {
        let md = ModularData::minimal_model(2, 5).unwrap();
        assert_eq!(md.field_order(), 60);
        let f = 2.0 / 5f64.sqrt();
        let s = |x: f64| (std::f64::consts::PI * x).sin();
        let want = [[-f * s(0.4), f * s(0.8)], [f * s(0.8), f * s(0.4)]];
        for (i, row) in want.iter().enumerate() {
            for (j, w) in row.iter().enumerate() {
                let (re, im) = md.s().get(i, j).to_complex();
                assert!((re - w).abs() < 1e-12 && im.abs() < 1e-12);
            }
        }
        let (re, _) = md.s().get(0, 0).to_complex();
        assert!((re + 0.8507).abs() < 1e-4);
    }

    #[test]
    fn ising_matches_printed_s() {
        let md = ModularData::minimal_model(3, 4).unwrap();
        let r2 = CycNumber::sqrt_int(2);
        let half = rat(1, 2);
        // our order is (1,1), (1,2), (1,3) with weights 0, 1/16, 1/2
        let want = [
            [CycNumber::one(1), r2.clone(), CycNumber::one(1)],
            [r2.clone(), CycNumber::zero(1), -&r2],
            [CycNumber::one(1), -&r2, CycNumber::one(1)],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(md.s().get(i, j), &want[i][j].scale(&half), "({i},{j})");
            }
        }
    }

    #[test]
    fn fusion_rules() {
        let ly = ModularData::minimal_model(2, 5).unwrap().fusion().unwrap();
        assert_eq!(ly.get(1, 1, 1), 1);
        assert_eq!(ly.get(0, 0, 1), 0);
        let ising = ModularData::minimal_model(3, 4).unwrap().fusion().unwrap();
        // sigma = index 1, epsilon = index 2
        assert_eq!(ising.get(1, 1, 2), 1);
        assert_eq!(ising.get(1, 1, 1), 0);
        assert_eq!(ising.get(2, 2, 2), 0);
        for r in 0..3 {
            assert_eq!(ising.get(0, 0, r), u64::from(r == 0));
        }
    }

    #[test]
    fn charge_conjugation_is_trivial_for_minimal_models() {
        for (p, q) in [(2, 5), (3, 4)] {
            let md = ModularData::minimal_model(p, q).unwrap();
            let c = md.charge_conjugation().unwrap();
            assert_eq!(c, (0..md.dim()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn broken_symmetry_is_reported() {
        let md = ModularData::minimal_model(3, 4).unwrap();
        let mut rows = md.s().rows().to_vec();
        rows[0][1] = rows[0][1].scale(&rat(2, 1));
        let bad = ModularData::new(
            md.labels().to_vec(),
            CycMatrix::from_rows(rows),
            md.t_exponents().to_vec(),
            md.central_charge().clone(),
        );
        assert_eq!(
            bad,
            Err(Error::AxiomViolation {
                axiom: Axiom::Symmetry,
                witness: vec![0, 1]
            })
        );
    }

    #[test]
    fn broken_vacuum_phase_is_reported() {
        let md = ModularData::minimal_model(3, 4).unwrap();
        let bad = ModularData::new(
            md.labels().to_vec(),
            md.s().clone(),
            md.t_exponents().to_vec(),
            rat(7, 10),
        );
        assert!(matches!(
            bad,
            Err(Error::AxiomViolation {
                axiom: Axiom::VacuumPhase,
                ..
            })
        ));
    }
}
