//! Aggregated runs: the minimal-model table, the arithmetic sweep and the
//! full invariant suite of one model.

use num_bigint::BigUint;
use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith;
use crate::cyclotomic::Rational;
use crate::error::{Error, Result};
use crate::galois;
use crate::group;
use crate::kernel::{self, KernelReport, KernelTest};
use crate::lambda::{self, SweepConfig};
use crate::modular_data::{minimal_model_spectrum, ModularData};
use crate::sl2::{self, SL2NMatrix};

/// `(p, q, N, N/N0, index)` for the published minimal-model table.
pub const PUBLISHED_TABLE: &[(u64, u64, u64, u64, u64)] = &[
    (2, 5, 60, 12, 192),
    (2, 7, 42, 6, 48),
    (2, 9, 36, 4, 24),
    (2, 11, 33, 3, 16),
    (3, 5, 40, 2, 16),
    (3, 7, 168, 6, 128),
    (3, 8, 32, 1, 4),
    (3, 10, 120, 3, 32),
    (3, 11, 88, 2, 16),
    (4, 5, 240, 3, 64),
    (4, 7, 336, 3, 128),
    (4, 9, 144, 1, 8),
    (4, 11, 528, 3, 128),
    (5, 6, 120, 1, 4),
    (5, 7, 840, 6, 256),
    (5, 8, 480, 3, 32),
    (5, 9, 360, 2, 32),
    (5, 11, 1320, 6, 256),
    (6, 7, 168, 1, 8),
    (6, 11, 264, 1, 8),
    (7, 8, 672, 3, 64),
    (7, 9, 504, 2, 32),
    (7, 10, 840, 3, 64),
    (7, 11, 1848, 6, 256),
    (8, 9, 288, 1, 4),
    (8, 11, 1056, 3, 64),
    (9, 10, 360, 1, 4),
    (9, 11, 792, 2, 32),
    (10, 11, 1320, 3, 64),
];

/// Published `(N, N/N0, index)` for `M(p, q)`, if tabulated.
pub fn published_row(p: u64, q: u64) -> Option<(u64, u64, u64)> {
    let (p, q) = (p.min(q), p.max(q));
    PUBLISHED_TABLE
        .iter()
        .find(|r| r.0 == p && r.1 == q)
        .map(|r| (r.2, r.3, r.4))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Computed,
    SkippedBudget,
}

impl RowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowStatus::Computed => "computed",
            RowStatus::SkippedBudget => "skipped-budget",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub p: u64,
    pub q: u64,
    pub conductor: u64,
    pub ratio: u64,
    /// `|mu_N(K)|`; `None` when skipped.
    pub index: Option<u64>,
    /// Elements the enumeration needs, `|SL(2, Z/NZ)|`.
    pub group_order: u128,
    pub status: RowStatus,
}

/// One row of the table. The kernel is enumerated only within `budget`;
/// computed rows are checked against the structural invariants first.
pub fn table_row(p: u64, q: u64, budget: u128) -> Result<TableRow> {
    let (p, q) = (p.min(q), p.max(q));
    let (_, _, spectrum) = minimal_model_spectrum(p, q)?;
    let n = spectrum.order_of_t();
    let group_order = sl2::sl2n_order(n);
    let mut row = TableRow {
        p,
        q,
        conductor: n,
        ratio: spectrum.ratio_e(),
        index: None,
        group_order,
        status: RowStatus::SkippedBudget,
    };
    if group_order > budget {
        return Ok(row);
    }
    let md = ModularData::minimal_model(p, q)?;
    let report = kernel::kernel_image(&md, budget)?;
    check_row_invariants(&md, &report)?;
    row.index = Some(report.order);
    row.status = RowStatus::Computed;
    Ok(row)
}

fn check_row_invariants(md: &ModularData, report: &KernelReport) -> Result<()> {
    let n = md.order_of_t();
    let fail = |what: &str| Error::Schema(format!("row invariant failed for N = {n}: {what}"));
    if !sl2::sl2n_order(n).is_multiple_of(report.order as u128) {
        return Err(fail("index does not divide |SL2(Z/N)|"));
    }
    if 12 % md.ratio_e() != 0 {
        return Err(fail("N/N0 does not divide 12"));
    }
    if let Some(w) = kernel::gamma1_witness(&report.elements) {
        return Err(fail(&format!("Gamma1 witness {w}")));
    }
    if group::closure(n, &report.generators).len() as u64 != report.order {
        return Err(fail("generators do not generate the kernel image"));
    }
    Ok(())
}

pub fn run_table(models: &[(u64, u64)], budget: u128) -> Result<Vec<TableRow>> {
    models.iter().map(|&(p, q)| table_row(p, q, budget)).collect()
}

/// `N0` predicted for `M(p, q)`, `p < q`.
pub fn closed_form_n0(p: u64, q: u64) -> u64 {
    match p {
        2 => q,
        3 => 4 * q,
        _ => 4 * p * q,
    }
}

/// `N / N0` predicted for `M(p, q)`, `p < q`.
pub fn closed_form_ratio(p: u64, q: u64) -> u64 {
    match p {
        2 => match q % 24 {
            1 | 5 | 13 | 17 => 12,
            7 | 23 => 6,
            9 | 21 => 4,
            11 | 19 => 3,
            15 => 2,
            3 => 1,
            _ => 0,
        },
        3 => match q % 6 {
            1 => 6,
            4 => 3,
            5 => 2,
            2 => 1,
            _ => 0,
        },
        _ => 6 / 6u64.gcd(&(p * q)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub p: u64,
    pub q: u64,
    pub n: u64,
    pub n0: u64,
    pub e: u64,
    pub central_charge: Rational,
    pub e_divides_12: bool,
    pub gcd_e_n0_divides_2: bool,
    pub n0_c_even: bool,
    /// `e = 12` implies `N0 = +-1 (mod 6)`; vacuously true otherwise.
    pub twelve_implies_unit_mod_6: bool,
    /// `None` for the trivial model `M(2, 3)`, whose single primary gives `N0 = 1`.
    pub n0_closed_form: Option<bool>,
    pub ratio_closed_form: bool,
}

impl SweepRow {
    pub fn all(&self) -> bool {
        self.e_divides_12
            && self.gcd_e_n0_divides_2
            && self.n0_c_even
            && self.twelve_implies_unit_mod_6
            && self.n0_closed_form.unwrap_or(true)
            && self.ratio_closed_form
    }
}

/// Coprime pairs `2 <= p < q` with `p q <= max_pq`.
pub fn minimal_models_up_to(max_pq: u64) -> Vec<(u64, u64)> {
    (2..=max_pq)
        .flat_map(|p| ((p + 1)..=max_pq / p.max(1)).map(move |q| (p, q)))
        .filter(|&(p, q)| p * q <= max_pq && p.gcd(&q) == 1)
        .collect()
}

/// Arithmetic restrictions on every minimal model with `p q <= max_pq`.
pub fn arithmetic_sweep(max_pq: u64) -> Result<Vec<SweepRow>> {
    minimal_models_up_to(max_pq)
        .into_iter()
        .map(|(p, q)| {
            let (_, _, sp) = minimal_model_spectrum(p, q)?;
            let n = sp.order_of_t();
            let n0 = sp.n_zero();
            let e = sp.ratio_e();
            let c = sp.central_charge.clone();
            let n0c = &c * Rational::from_integer(n0.into());
            Ok(SweepRow {
                p,
                q,
                n,
                n0,
                e,
                e_divides_12: 12 % e == 0,
                gcd_e_n0_divides_2: 2 % e.gcd(&n0) == 0,
                n0_c_even: n0c.is_integer() && n0c.to_integer().is_even(),
                twelve_implies_unit_mod_6: e != 12 || matches!(n0 % 6, 1 | 5),
                n0_closed_form: (p * q != 6).then(|| closed_form_n0(p, q) == n0),
                ratio_closed_form: closed_form_ratio(p, q) == e,
                central_charge: c,
            })
        })
        .collect()
}

/// Pass/fail counts for one suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    pub witness: Option<String>,
}

impl SuiteOutcome {
    fn new(name: &str) -> Self {
        SuiteOutcome {
            name: name.to_string(),
            passed: 0,
            failed: 0,
            witness: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            self.witness.get_or_insert_with(witness);
        }
    }

    fn record_result(&mut self, r: Result<bool>, witness: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.record(ok, witness),
            Err(e) => self.record(false, || format!("{}: {e}", witness())),
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub budget: u128,
    pub sweep: SweepConfig,
    pub gal2_samples: usize,
    pub oracle_samples: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            budget: kernel::DEFAULT_BUDGET,
            sweep: SweepConfig::default(),
            gal2_samples: 100,
            oracle_samples: 200,
            seed: 0x5eed,
        }
    }
}

/// Runs every invariant suite on `md`. Errors inside a suite count as failures.
pub fn run_verify(md: &ModularData, cfg: &VerifyConfig) -> Vec<SuiteOutcome> {
    let n = md.order_of_t();
    let units: Vec<i64> = arith::units(n).into_iter().map(|l| l as i64).collect();
    let mut out = Vec::new();

    let mut s = SuiteOutcome::new("axioms");
    for (axiom, r) in md.axiom_report() {
        let ok = r.is_ok();
        s.record(ok, || format!("{axiom}: {}", r.unwrap_err()));
    }
    out.push(s);

    let mut s = SuiteOutcome::new("galois-closed-form");
    let res: Vec<(i64, Result<bool>)> = units
        .par_iter()
        .map(|&l| {
            let r = galois::extract_g(md, l)
                .and_then(|g| Ok(galois::g_via_closed_form(md, l)? == g.to_matrix(md.field_order())));
            (l, r)
        })
        .collect();
    for (l, r) in res {
        s.record_result(r, || format!("l = {l}"));
    }
    out.push(s);

    let mut s = SuiteOutcome::new("gtcom");
    let res: Vec<(i64, Result<bool>)> = units.par_iter().map(|&l| (l, galois::check_gtcom(md, l))).collect();
    for (l, r) in res {
        s.record_result(r, || format!("l = {l}"));
    }
    out.push(s);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut s = SuiteOutcome::new("gal2");
    let cases: Vec<(SL2NMatrix, i64)> = (0..cfg.gal2_samples)
        .map(|_| {
            let m = sl2::random_sl2n(&mut rng, n);
            let l = units[rand::Rng::gen_range(&mut rng, 0..units.len())];
            (m, l)
        })
        .collect();
    let res: Vec<_> = cases.par_iter().map(|(m, l)| (*m, *l, sl2::check_gal2(md, m, *l))).collect();
    for (m, l, r) in res {
        s.record_result(r, || format!("l = {l}, m = {m}"));
    }
    out.push(s);

    for t in lambda::lemma_suite(md, &cfg.sweep) {
        out.push(SuiteOutcome {
            name: t.name.to_string(),
            passed: t.passed,
            failed: t.failed,
            witness: t.witness,
        });
    }

    let mut s = SuiteOutcome::new("verlinde");
    s.record(md.fusion().is_ok(), || md.fusion().unwrap_err().to_string());
    out.push(s);

    let mut s = SuiteOutcome::new("conductor-bound");
    let bound = kernel::conductor_bound_naive(md.dim() as u64);
    s.record(
        bound
            .as_ref()
            .is_ok_and(|b| (b % BigUint::from(n)) == BigUint::from(0u32)),
        || format!("N = {n} vs bound {bound:?}"),
    );
    out.push(s);

    out.extend(kernel_suites(md, cfg, &mut rng));
    out
}

fn kernel_suites(md: &ModularData, cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Vec<SuiteOutcome> {
    let mut out = Vec::new();
    let report = match kernel::kernel_image(md, cfg.budget) {
        Ok(r) => r,
        Err(e) => {
            let mut s = SuiteOutcome::new("kernel-image");
            s.record(false, || e.to_string());
            out.push(s);
            return out;
        }
    };
    let mut s = SuiteOutcome::new("kernel-image");
    s.record(group::is_subgroup(&report.elements), || "not a subgroup".into());
    s.record(sl2::sl2n_order(report.modulus).is_multiple_of(report.order as u128), || {
        "order does not divide |SL2(Z/N)|".into()
    });
    out.push(s);

    let mut s = SuiteOutcome::new("gamma1");
    let w = kernel::gamma1_witness(&report.elements);
    s.record(w.is_none(), || format!("{}", w.unwrap()));
    out.push(s);

    let mut s = SuiteOutcome::new("kernel-consequences");
    match kernel::check_all_consequences(md, &report.elements) {
        Ok((checked, None)) => s.passed = checked,
        Ok((checked, Some(m))) => {
            s.passed = checked - 1;
            s.failed = 1;
            s.witness = Some(m.to_string());
        }
        Err(e) => s.record(false, || e.to_string()),
    }
    out.push(s);

    let mut s = SuiteOutcome::new("kernel-oracle");
    let agreement = KernelTest::new(md)
        .and_then(|t| kernel::oracle_agreement(md, &t, rng, cfg.oracle_samples, &report.generators));
    match agreement {
        Ok((agree, w)) => {
            s.passed = agree;
            if let Some(m) = w {
                s.failed = cfg.oracle_samples + report.generators.len() - agree;
                s.witness = Some(m.to_string());
            }
        }
        Err(e) => s.record(false, || e.to_string()),
    }
    out.push(s);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_on_published_rows() {
        for &(p, q, n, e, _) in PUBLISHED_TABLE {
            assert_eq!(closed_form_ratio(p, q), e, "M({p},{q})");
            assert_eq!(closed_form_n0(p, q) * e, n, "M({p},{q})");
        }
    }

    #[test]
    fn sweep_holds_up_to_110() {
        let rows = arithmetic_sweep(110).unwrap();
        assert!(rows.len() > 20);
        for r in &rows {
            assert!(r.all(), "{r:?}");
        }
        assert_eq!(rows[0].n0_closed_form, None);
    }

    #[test]
    fn model_enumeration() {
        let ms = minimal_models_up_to(15);
        assert_eq!(ms, vec![(2, 3), (2, 5), (2, 7), (3, 4), (3, 5)]);
    }

    #[test]
    fn skipped_rows_keep_spectrum_data() {
        let row = table_row(7, 11, kernel::DEFAULT_BUDGET).unwrap();
        assert_eq!(row.status, RowStatus::SkippedBudget);
        assert_eq!((row.conductor, row.ratio, row.index), (1848, 6, None));
    }

    #[test]
    fn published_lookup() {
        assert_eq!(published_row(5, 2), Some((60, 12, 192)));
        assert_eq!(published_row(3, 4), None);
    }
}
