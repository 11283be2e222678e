//! Galois action `sigma_l` on modular data and the signed permutations `G_l`
//! with `sigma_l(S) = S G_l`.

use rayon::prelude::*;

use crate::arith;
use crate::cyclotomic::{CycNumber, Rational};
use crate::error::{Error, Result};
use crate::matrix::{CycMatrix, PhaseDiagonal};
use crate::modular_data::ModularData;

/// Orthogonal monomial matrix `(G)_p^q = signs[q] * delta_{p, perm[q]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialMatrix {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl MonomialMatrix {
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Self {
        assert_eq!(perm.len(), signs.len());
        MonomialMatrix { perm, signs }
    }

    pub fn identity(dim: usize) -> Self {
        MonomialMatrix {
            perm: (0..dim).collect(),
            signs: vec![1; dim],
        }
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn is_identity(&self) -> bool {
        self.is_diagonal() && self.signs.iter().all(|&s| s == 1)
    }

    pub fn is_diagonal(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &Self) -> Self {
        let perm = other.perm.iter().map(|&q| self.perm[q]).collect();
        let signs = other
            .perm
            .iter()
            .zip(&other.signs)
            .map(|(&q, &s)| s * self.signs[q])
            .collect();
        MonomialMatrix { perm, signs }
    }

    /// Inverse, which equals the transpose.
    pub fn inverse(&self) -> Self {
        let mut perm = vec![0; self.dim()];
        let mut signs = vec![1; self.dim()];
        for (q, &p) in self.perm.iter().enumerate() {
            perm[p] = q;
            signs[p] = self.signs[q];
        }
        MonomialMatrix { perm, signs }
    }

    pub fn to_matrix(&self, order: u64) -> CycMatrix {
        CycMatrix::from_fn(self.dim(), |p, q| {
            if self.perm[q] == p {
                CycNumber::from_int(self.signs[q].into(), order)
            } else {
                CycNumber::zero(order)
            }
        })
    }

    /// `G^{-1} M G`.
    pub fn conjugate(&self, m: &CycMatrix) -> CycMatrix {
        // (G^T M G)_{pq} = e(p) e(q) M_{perm p, perm q}
        CycMatrix::from_fn(self.dim(), |p, q| {
            let x = m.get(self.perm[p], self.perm[q]);
            if self.signs[p] * self.signs[q] < 0 {
                -x
            } else {
                x.clone()
            }
        })
    }

    /// Cycle notation of the permutation, fixed points omitted; `()` for the identity.
    pub fn cycles(&self) -> String {
        let mut seen = vec![false; self.dim()];
        let mut out = String::new();
        for start in 0..self.dim() {
            if seen[start] || self.perm[start] == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cyc.push(i.to_string());
                i = self.perm[i];
            }
            out.push('(');
            out.push_str(&cyc.join(" "));
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

fn require_unit(l: i64, n: u64) -> Result<()> {
    if arith::coprime(l, n) {
        Ok(())
    } else {
        Err(Error::NotCoprime { value: l, modulus: n })
    }
}

/// Entrywise `sigma_l`.
pub fn sigma_on_matrix(m: &CycMatrix, l: i64) -> Result<CycMatrix> {
    m.frobenius(l)
}

/// `sigma_l(T) = T^l`.
pub fn sigma_on_t(md: &ModularData, l: i64) -> Result<PhaseDiagonal> {
    require_unit(l, md.order_of_t())?;
    Ok(md.t_pow(l))
}

/// Solves `sigma_l(S) = S G_l` by matching each column of `sigma_l(S)`
/// against the signed columns of `S`.
pub fn extract_g(md: &ModularData, l: i64) -> Result<MonomialMatrix> {
    require_unit(l, md.field_order())?;
    let s = md.s();
    let gs = s.frobenius(l)?;
    let dim = md.dim();
    let col = |m: &CycMatrix, q: usize| -> Vec<CycNumber> { (0..dim).map(|p| m.get(p, q).clone()).collect() };
    let s_cols: Vec<Vec<CycNumber>> = (0..dim).map(|q| col(s, q)).collect();
    let s_neg: Vec<Vec<CycNumber>> = s_cols.iter().map(|c| c.iter().map(|x| -x).collect()).collect();
    let mut perm = vec![usize::MAX; dim];
    let mut signs = vec![0i8; dim];
    for q in 0..dim {
        let target = col(&gs, q);
        let mut found = None;
        for cand in 0..dim {
            let sign = if target == s_cols[cand] {
                1
            } else if target == s_neg[cand] {
                -1
            } else {
                continue;
            };
            if found.is_some() {
                return Err(Error::NotMonomial { l, column: q });
            }
            found = Some((cand, sign));
        }
        let (p, sign) = found.ok_or(Error::NotMonomial { l, column: q })?;
        perm[q] = p;
        signs[q] = sign;
    }
    let mut hit = vec![false; dim];
    for (q, &p) in perm.iter().enumerate() {
        if std::mem::replace(&mut hit[p], true) {
            return Err(Error::NotMonomial { l, column: q });
        }
    }
    Ok(MonomialMatrix { perm, signs })
}

/// `G_l = S^{-1} T^l S T^{lhat} S T^l` evaluated exactly.
pub fn g_via_closed_form(md: &ModularData, l: i64) -> Result<CycMatrix> {
    let n = md.order_of_t();
    require_unit(l, n)?;
    let lhat = arith::mod_inv(l, n).expect("unit") as i64;
    let tl = md.t_pow(l);
    let tlhat = md.t_pow(lhat);
    let a = md.s_inverse().mul_diag_right(&tl);
    let b = &a * md.s();
    let c = &b.mul_diag_right(&tlhat) * md.s();
    Ok(c.mul_diag_right(&tl))
}

/// `G_l^{-1} T G_l = T^{l^2}`, i.e. `t_{pi_l p} = l^2 t_p (mod 1)` for every `p`.
pub fn check_gtcom(md: &ModularData, l: i64) -> Result<bool> {
    let g = extract_g(md, l)?;
    Ok(gtcom_holds(md, &g, l))
}

pub(crate) fn gtcom_holds(md: &ModularData, g: &MonomialMatrix, l: i64) -> bool {
    let lhs = md.t().permute(g.perm());
    let rhs = md.t().powi(l * l);
    lhs == rhs
}

/// Witnesses that the field generated by `S` and `T` is exactly `Q[zeta_N]`:
/// every `S` entry lies in `Q[zeta_N]` and some `l != 1 (mod N)` moves `S`.
pub fn conductor_fixed_field_check(md: &ModularData) -> Result<bool> {
    let n = md.order_of_t();
    for row in md.s().rows() {
        for x in row {
            let lifted = x.embed(crate::arith::lcm(x.order(), n))?;
            let inside = if lifted.order() % n == 0 {
                lifted.is_in_subfield(n)?
            } else {
                false
            };
            if !inside {
                return Ok(false);
            }
        }
    }
    let movers: Vec<u64> = arith::units(n).into_iter().filter(|&l| l != 1 && n > 2).collect();
    if movers.is_empty() {
        return Ok(true);
    }
    for l in movers {
        if md.s().frobenius(l as i64)? != *md.s() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `G_l^{-1} M G_l = sigma_{l^2}(M)`.
pub fn check_gcom(md: &ModularData, l: i64, m: &CycMatrix) -> Result<bool> {
    let g = extract_g(md, l)?;
    Ok(g.conjugate(m) == m.frobenius(l * l)?)
}

/// One line of the Galois table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisRow {
    pub l: u64,
    pub g: MonomialMatrix,
    pub gtcom: bool,
}

/// `G_l` and the twisted-commutation check for every unit `l` mod `N`.
pub fn galois_table(md: &ModularData) -> Result<Vec<GaloisRow>> {
    let n = md.order_of_t();
    arith::units(n)
        .into_par_iter()
        .map(|l| {
            let g = extract_g(md, l as i64)?;
            let gtcom = gtcom_holds(md, &g, l as i64);
            Ok(GaloisRow { l, g, gtcom })
        })
        .collect()
}

/// `sigma_l(S_{0p}) = eps_l(0) S_{0, pi_l p}`-style consistency: the signs of
/// `G_l` reproduce the Galois image of the vacuum row.
pub fn vacuum_row_consistent(md: &ModularData, g: &MonomialMatrix, l: i64) -> Result<bool> {
    for q in 0..md.dim() {
        let lhs = md.s().get(0, q).frobenius(l)?;
        let rhs = md.s().get(0, g.perm()[q]);
        let rhs = if g.signs()[q] < 0 { -rhs } else { rhs.clone() };
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The rational exponent `l^2 t_p` used in reports.
pub fn twisted_exponent(md: &ModularData, l: i64, p: usize) -> Rational {
    crate::cyclotomic::frac(&(&md.t_exponents()[p] * Rational::from_integer((l * l).into())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ising() -> ModularData {
        ModularData::minimal_model(3, 4).unwrap()
    }

    fn lee_yang() -> ModularData {
        ModularData::minimal_model(2, 5).unwrap()
    }

    #[test]
    fn identity_l() {
        let md = ising();
        assert_eq!(sigma_on_matrix(md.s(), 1).unwrap(), *md.s());
        assert!(extract_g(&md, 1).unwrap().is_identity());
        assert!(check_gtcom(&md, 1).unwrap());
    }

    #[test]
    fn sigma_on_t_is_power() {
        let md = lee_yang();
        let t = md.t().to_matrix();
        for l in [7i64, 11, 59] {
            let st = sigma_on_matrix(&t, l).unwrap();
            assert_eq!(st, sigma_on_t(&md, l).unwrap().to_matrix(), "l={l}");
        }
    }

    #[test]
    fn ising_g5() {
        let md = ising();
        // index 0 vacuum (1,1); index 1 sigma (1,2); index 2 epsilon (1,3)
        let g = extract_g(&md, 5).unwrap();
        assert_eq!(g.perm(), &[2, 1, 0]);
        assert_eq!(g.signs(), &[1, -1, 1]);
        let r2half = CycNumber::sqrt_int(2).scale(&crate::cyclotomic::rat(1, 2));
        let img = sigma_on_matrix(md.s(), 5).unwrap();
        assert_eq!(img.get(0, 1), &-&r2half);
        assert_eq!(g_via_closed_form(&md, 5).unwrap(), g.to_matrix(md.field_order()));
    }

    #[test]
    fn closed_form_at_one_is_identity() {
        for md in [ising(), lee_yang()] {
            assert!(g_via_closed_form(&md, 1).unwrap().is_identity());
        }
    }

    #[test]
    fn lee_yang_g7_closed_form() {
        let md = lee_yang();
        let g = extract_g(&md, 7).unwrap();
        assert_eq!(g_via_closed_form(&md, 7).unwrap(), g.to_matrix(60));
    }

    #[test]
    fn gtcom_exhaustive() {
        for (md, n) in [(ising(), 48u64), (lee_yang(), 60)] {
            let units = arith::units(n);
            assert_eq!(units.len(), 16);
            for l in units {
                assert!(check_gtcom(&md, l as i64).unwrap(), "l={l}");
            }
        }
    }

    #[test]
    fn multiplicativity() {
        let md = lee_yang();
        for l in arith::units(60) {
            for m in [7u64, 11, 13, 49] {
                let gl = extract_g(&md, l as i64).unwrap();
                let gm = extract_g(&md, m as i64).unwrap();
                let glm = extract_g(&md, ((l * m) % 60) as i64).unwrap();
                assert_eq!(gl.compose(&gm), glm);
            }
        }
    }

    #[test]
    fn not_coprime() {
        let md = ising();
        assert_eq!(
            extract_g(&md, 3),
            Err(Error::NotCoprime { value: 3, modulus: 48 })
        );
    }

    #[test]
    fn conductor_check() {
        assert!(conductor_fixed_field_check(&ising()).unwrap());
        assert!(conductor_fixed_field_check(&lee_yang()).unwrap());
        let toy = ModularData::new(
            vec![crate::modular_data::PrimaryLabel { index: 0, name: "1".into() }],
            CycMatrix::identity(1, 1),
            vec![Rational::default()],
            Rational::default(),
        )
        .unwrap();
        assert_eq!(toy.order_of_t(), 1);
        assert!(conductor_fixed_field_check(&toy).unwrap());
    }

    #[test]
    fn monomial_algebra() {
        let g = MonomialMatrix::new(vec![2, 0, 1], vec![1, -1, -1]);
        let h = MonomialMatrix::new(vec![1, 0, 2], vec![-1, 1, -1]);
        let prod = &g.to_matrix(1) * &h.to_matrix(1);
        assert_eq!(g.compose(&h).to_matrix(1), prod);
        assert!(g.compose(&g.inverse()).is_identity());
        assert_eq!(g.inverse().to_matrix(1), g.to_matrix(1).transpose());
        assert_eq!(g.cycles(), "(0 2 1)");
        assert_eq!(MonomialMatrix::identity(2).cycles(), "()");
    }
}
