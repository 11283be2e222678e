//! Dense square matrices over cyclotomic fields, plus diagonal phase matrices.

use std::ops::Mul;

use rayon::prelude::*;

use crate::cyclotomic::{frac, CycNumber, Rational};
use crate::error::Result;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycMatrix {
    rows: Vec<Vec<CycNumber>>,
}

impl CycMatrix {
    pub fn from_rows(rows: Vec<Vec<CycNumber>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        CycMatrix { rows }
    }

    pub fn identity(dim: usize, order: u64) -> Self {
        Self::from_fn(dim, |i, j| {
            if i == j {
                CycNumber::one(order)
            } else {
                CycNumber::zero(order)
            }
        })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> CycNumber) -> Self {
        CycMatrix {
            rows: (0..dim).map(|i| (0..dim).map(|j| f(i, j)).collect()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &CycNumber {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<CycNumber>] {
        &self.rows
    }

    pub fn map(&self, f: impl Fn(&CycNumber) -> CycNumber + Sync) -> Self {
        CycMatrix {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(&f).collect())
                .collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim(), |i, j| self.rows[j][i].clone())
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.dim(), |i, j| self.rows[j][i].conj())
    }

    /// Entrywise Frobenius map `sigma_l`.
    pub fn frobenius(&self, l: i64) -> Result<Self> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.frobenius(l)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(CycMatrix { rows })
    }

    /// Rewrites every entry in `Q[zeta_m]`.
    pub fn embed(&self, m: u64) -> Result<Self> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.embed(m)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(CycMatrix { rows })
    }

    pub fn restrict(&self, m: u64) -> Result<Self> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.restrict(m)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(CycMatrix { rows })
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, r)| {
            r.iter()
                .enumerate()
                .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
        })
    }

    /// First index pair where `self` and `other` differ.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if self.rows[i][j] != other.rows[i][j] {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// `self * D` where `D` is diagonal: scales column `j` by `d[j]`.
    pub fn mul_diag_right(&self, d: &PhaseDiagonal) -> Self {
        Self::from_fn(self.dim(), |i, j| d.scale(&self.rows[i][j], j))
    }

    /// `D * self`: scales row `i` by `d[i]`.
    pub fn mul_diag_left(&self, d: &PhaseDiagonal) -> Self {
        Self::from_fn(self.dim(), |i, j| d.scale(&self.rows[i][j], i))
    }

    /// Permutes and signs columns: result column `q` is `sign[q] * column perm[q]`.
    pub fn signed_column_permutation(&self, perm: &[usize], signs: &[i8]) -> Self {
        Self::from_fn(self.dim(), |i, q| {
            let x = &self.rows[i][perm[q]];
            if signs[q] < 0 {
                -x
            } else {
                x.clone()
            }
        })
    }

    pub fn pow(&self, k: u32) -> Self {
        let order = self.rows.first().and_then(|r| r.first()).map_or(1, |x| x.order());
        (0..k).fold(Self::identity(self.dim(), order), |acc, _| &acc * self)
    }
}

impl<'a> Mul<&'a CycMatrix> for &'a CycMatrix {
    type Output = CycMatrix;
    fn mul(self, rhs: &'a CycMatrix) -> CycMatrix {
        let n = self.dim();
        let rows = (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut acc: Option<CycNumber> = None;
                        for k in 0..n {
                            let (a, b) = (&self.rows[i][k], &rhs.rows[k][j]);
                            if a.is_zero() || b.is_zero() {
                                continue;
                            }
                            let t = a * b;
                            acc = Some(match acc {
                                None => t,
                                Some(s) => &s + &t,
                            });
                        }
                        acc.unwrap_or_else(|| {
                            let o = crate::arith::lcm(self.rows[i][0].order(), rhs.rows[0][j].order());
                            CycNumber::zero(o)
                        })
                    })
                    .collect()
            })
            .collect();
        CycMatrix { rows }
    }
}

/// Diagonal matrix with entries `exp(2 pi i e_p)` held by their rational
/// exponents `e_p`, reduced into `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PhaseDiagonal {
    exponents: Vec<Rational>,
}

impl PhaseDiagonal {
    pub fn new(exponents: Vec<Rational>) -> Self {
        PhaseDiagonal {
            exponents: exponents.iter().map(frac).collect(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        PhaseDiagonal {
            exponents: vec![Rational::default(); dim],
        }
    }

    pub fn exponents(&self) -> &[Rational] {
        &self.exponents
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    /// Matrix power with rational exponent on the pinned branch: `e_p -> k e_p`.
    pub fn pow(&self, k: &Rational) -> Self {
        Self::new(self.exponents.iter().map(|e| e * k).collect())
    }

    pub fn powi(&self, k: i64) -> Self {
        self.pow(&Rational::from_integer(k.into()))
    }

    pub fn inverse(&self) -> Self {
        self.powi(-1)
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.iter().all(|e| e == &Rational::default())
    }

    /// Multiplicative order: lcm of the exponent denominators.
    pub fn order(&self) -> u64 {
        self.exponents.iter().fold(1u64, |acc, e| {
            let d: u64 = e.denom().try_into().expect("phase denominator fits in u64");
            crate::arith::lcm(acc, d)
        })
    }

    /// Reorders the diagonal: entry `p` of the result is entry `perm[p]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        PhaseDiagonal {
            exponents: perm.iter().map(|&p| self.exponents[p].clone()).collect(),
        }
    }

    /// `x * exp(2 pi i e_p)`.
    pub fn scale(&self, x: &CycNumber, p: usize) -> CycNumber {
        let e = &self.exponents[p];
        let den: u64 = e.denom().try_into().expect("phase denominator fits in u64");
        let num: i64 = e.numer().try_into().expect("phase numerator fits in i64");
        x.mul_root_of(den, num)
    }

    pub fn entry(&self, p: usize) -> CycNumber {
        self.scale(&CycNumber::one(1), p)
    }

    /// The diagonal as a full matrix over `Q[zeta_order]`.
    pub fn to_matrix(&self) -> CycMatrix {
        let order = self.order();
        CycMatrix::from_fn(self.dim(), |i, j| {
            if i == j {
                self.scale(&CycNumber::one(order), i)
            } else {
                CycNumber::zero(order)
            }
        })
    }
}

impl<'a> Mul<&'a PhaseDiagonal> for &'a PhaseDiagonal {
    type Output = PhaseDiagonal;
    fn mul(self, rhs: &'a PhaseDiagonal) -> PhaseDiagonal {
        PhaseDiagonal::new(
            self.exponents
                .iter()
                .zip(&rhs.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::rat;

    #[test]
    fn phase_arithmetic() {
        let d = PhaseDiagonal::new(vec![rat(1, 3), rat(5, 4), rat(-1, 6)]);
        assert_eq!(d.exponents()[1], rat(1, 4));
        assert_eq!(d.exponents()[2], rat(5, 6));
        assert_eq!(d.order(), 12);
        assert!((&d * &d.inverse()).is_identity());
        assert_eq!(d.pow(&rat(12, 1)), PhaseDiagonal::identity(3));
        assert_eq!(d.entry(0), CycNumber::root(3, 1));
    }

    #[test]
    fn diag_matrix_product_matches_full_product() {
        let d = PhaseDiagonal::new(vec![rat(1, 4), rat(2, 3)]);
        let m = CycMatrix::from_fn(2, |i, j| CycNumber::from_int((i * 2 + j) as i64 + 1, 6));
        let full = &m * &d.to_matrix();
        assert_eq!(m.mul_diag_right(&d), full);
        assert_eq!(m.mul_diag_left(&d), &d.to_matrix() * &m);
    }
}
