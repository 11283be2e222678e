//! The modular-data file: versioned JSON with exact coefficients.
//!
//! ```json
//! {
//!   "version": 1,
//!   "labels": ["(1,1)", "(1,2)"],
//!   "central_charge": ["-22", "5"],
//!   "t_exponents": [["11", "60"], ["59", "60"]],
//!   "field_order": 60,
//!   "s_matrix": [[{"order": 60, "terms": [[1, "-2", "5"]]}, ...], ...]
//! }
//! ```
//!
//! Big integers travel as decimal strings; a cyclotomic entry is the sparse
//! list of `[power, numerator, denominator]` in the canonical power basis of
//! `Q[zeta_order]`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CycNumber, Rational};
use crate::error::{Error, Result};
use crate::matrix::CycMatrix;
use crate::modular_data::{ModularData, PrimaryLabel};

pub const FORMAT_VERSION: u32 = 1;
/// Largest cyclotomic order accepted from a file.
pub const MAX_ORDER: u64 = 10_000;
/// Largest number of primaries accepted from a file.
pub const MAX_DIM: usize = 64;
/// Longest decimal string accepted for one integer.
pub const MAX_DIGITS: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycNumberRecord {
    pub order: u64,
    pub terms: Vec<(u64, String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModularDataRecord {
    pub version: u32,
    pub labels: Vec<String>,
    pub central_charge: (String, String),
    pub t_exponents: Vec<(String, String)>,
    pub field_order: u64,
    pub s_matrix: Vec<Vec<CycNumberRecord>>,
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn parse_int(s: &str) -> Result<BigInt> {
    if s.len() > MAX_DIGITS {
        return Err(schema(format!("integer with {} digits exceeds {MAX_DIGITS}", s.len())));
    }
    s.parse().map_err(|_| schema(format!("not an integer: {s:?}")))
}

fn parse_rational(num: &str, den: &str) -> Result<Rational> {
    let num = parse_int(num)?;
    let den = parse_int(den)?;
    if den.is_zero() {
        return Err(schema("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

fn rational_record(q: &Rational) -> (String, String) {
    (q.numer().to_string(), q.denom().to_string())
}

impl CycNumberRecord {
    pub fn from_value(x: &CycNumber) -> Self {
        CycNumberRecord {
            order: x.order(),
            terms: x
                .terms()
                .into_iter()
                .map(|(i, c)| {
                    let (n, d) = rational_record(&c);
                    (i as u64, n, d)
                })
                .collect(),
        }
    }

    pub fn to_value(&self) -> Result<CycNumber> {
        if self.order == 0 || self.order > MAX_ORDER {
            return Err(schema(format!("cyclotomic order {} outside 1..={MAX_ORDER}", self.order)));
        }
        if self.terms.len() as u64 > self.order {
            return Err(schema("more terms than the cyclotomic order"));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (i, n, d) in &self.terms {
            if *i >= self.order {
                return Err(schema(format!("power {i} out of range for order {}", self.order)));
            }
            terms.push((*i as i64, parse_rational(n, d)?));
        }
        Ok(CycNumber::from_terms(self.order, terms))
    }
}

impl ModularDataRecord {
    pub fn from_data(md: &ModularData) -> Self {
        ModularDataRecord {
            version: FORMAT_VERSION,
            labels: md.labels().iter().map(|l| l.name.clone()).collect(),
            central_charge: rational_record(md.central_charge()),
            t_exponents: md.t_exponents().iter().map(rational_record).collect(),
            field_order: md.field_order(),
            s_matrix: md
                .s()
                .rows()
                .iter()
                .map(|r| r.iter().map(CycNumberRecord::from_value).collect())
                .collect(),
        }
    }

    /// Builds modular data without checking the axioms.
    pub fn to_data_unchecked(&self) -> Result<ModularData> {
        if self.version != FORMAT_VERSION {
            return Err(schema(format!("unsupported version {}", self.version)));
        }
        let dim = self.labels.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(schema(format!("{dim} primaries outside 1..={MAX_DIM}")));
        }
        if self.t_exponents.len() != dim || self.s_matrix.len() != dim || self.s_matrix.iter().any(|r| r.len() != dim) {
            return Err(schema("labels, T and S disagree in size"));
        }
        let c = parse_rational(&self.central_charge.0, &self.central_charge.1)?;
        let t = self
            .t_exponents
            .iter()
            .map(|(n, d)| parse_rational(n, d))
            .collect::<Result<Vec<_>>>()?;
        let order_of_t = t.iter().try_fold(1u64, |acc, e| {
            let d: u64 = crate::cyclotomic::frac(e)
                .denom()
                .try_into()
                .map_err(|_| schema("T exponent denominator too large"))?;
            let l = crate::arith::lcm(acc, d);
            if l > MAX_ORDER {
                Err(schema(format!("order of T exceeds {MAX_ORDER}")))
            } else {
                Ok(l)
            }
        })?;
        if self.field_order != order_of_t {
            return Err(schema(format!(
                "field_order {} differs from the order of T, {order_of_t}",
                self.field_order
            )));
        }
        let rows = self
            .s_matrix
            .iter()
            .map(|r| r.iter().map(CycNumberRecord::to_value).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let labels = self
            .labels
            .iter()
            .enumerate()
            .map(|(index, name)| PrimaryLabel {
                index,
                name: name.clone(),
            })
            .collect();
        ModularData::new_unchecked(labels, CycMatrix::from_rows(rows), t, c)
    }

    pub fn to_data(&self) -> Result<ModularData> {
        let md = self.to_data_unchecked()?;
        md.validate()?;
        Ok(md)
    }
}

fn parse_record(text: &str) -> Result<ModularDataRecord> {
    serde_json::from_str(text).map_err(|e| schema(e.to_string()))
}

/// Parses and validates a modular-data file.
pub fn parse_modular_data(text: &str) -> Result<ModularData> {
    parse_record(text)?.to_data()
}

/// Parses a modular-data file, checking the schema but not the axioms.
pub fn parse_modular_data_unchecked(text: &str) -> Result<ModularData> {
    parse_record(text)?.to_data_unchecked()
}

/// Parses one cyclotomic number in its sparse record form.
pub fn parse_cyc_number(text: &str) -> Result<CycNumber> {
    let rec: CycNumberRecord = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
    rec.to_value()
}

pub fn to_json(md: &ModularData) -> String {
    let mut s = serde_json::to_string_pretty(&ModularDataRecord::from_data(md)).expect("records serialize");
    s.push('\n');
    s
}

pub fn load(path: &std::path::Path) -> Result<ModularData> {
    parse_modular_data(&std::fs::read_to_string(path)?)
}

pub fn load_unchecked(path: &std::path::Path) -> Result<ModularData> {
    parse_modular_data_unchecked(&std::fs::read_to_string(path)?)
}

pub fn save(md: &ModularData, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, to_json(md))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Axiom;

    #[test]
    fn round_trip_is_bit_exact() {
        for (p, q) in [(2, 5), (3, 4), (2, 7)] {
            let md = ModularData::minimal_model(p, q).unwrap();
            let text = to_json(&md);
            let back = parse_modular_data(&text).unwrap();
            assert_eq!(back, md);
            assert_eq!(to_json(&back), text);
        }
    }

    #[test]
    fn cyc_number_records() {
        let x = CycNumber::sqrt_int(5);
        let text = serde_json::to_string(&CycNumberRecord::from_value(&x)).unwrap();
        assert_eq!(parse_cyc_number(&text).unwrap(), x);
        assert!(parse_cyc_number(r#"{"order": 0, "terms": []}"#).is_err());
        assert!(parse_cyc_number(r#"{"order": 5, "terms": [[5, "1", "1"]]}"#).is_err());
        assert!(parse_cyc_number(r#"{"order": 5, "terms": [[1, "1", "0"]]}"#).is_err());
        assert!(parse_cyc_number(r#"{"order": 5, "terms": [], "extra": 1}"#).is_err());
        assert_eq!(
            parse_cyc_number(r#"{"order": 4, "terms": [[2, "1", "1"]]}"#).unwrap(),
            CycNumber::from_int(-1, 4)
        );
    }

    fn edit(md: &ModularData, f: impl FnOnce(&mut ModularDataRecord)) -> String {
        let mut rec = ModularDataRecord::from_data(md);
        f(&mut rec);
        serde_json::to_string(&rec).unwrap()
    }

    #[test]
    fn schema_errors() {
        let md = ModularData::minimal_model(3, 4).unwrap();
        let zero_den = edit(&md, |r| r.t_exponents[1].1 = "0".into());
        assert!(matches!(parse_modular_data(&zero_den), Err(Error::Schema(_))));
        let bad_version = edit(&md, |r| r.version = 7);
        assert!(matches!(parse_modular_data(&bad_version), Err(Error::Schema(_))));
        let short = edit(&md, |r| {
            r.labels.pop();
        });
        assert!(matches!(parse_modular_data(&short), Err(Error::Schema(_))));
        let wrong_field = edit(&md, |r| r.field_order = 96);
        assert!(matches!(parse_modular_data(&wrong_field), Err(Error::Schema(_))));
        assert!(matches!(parse_modular_data("{"), Err(Error::Schema(_))));
    }

    #[test]
    fn axiom_errors() {
        let md = ModularData::minimal_model(3, 4).unwrap();
        let asym = edit(&md, |r| {
            let x = r.s_matrix[0][1].clone();
            r.s_matrix[0][1] = r.s_matrix[0][2].clone();
            r.s_matrix[0][2] = x;
        });
        assert!(matches!(
            parse_modular_data(&asym),
            Err(Error::AxiomViolation {
                axiom: Axiom::Symmetry,
                ..
            })
        ));
        assert!(parse_modular_data_unchecked(&asym).is_ok());
    }
}
