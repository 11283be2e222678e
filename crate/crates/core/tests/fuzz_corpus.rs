//! Replays the checked-in fuzz seeds through the decoders they target.

use std::path::PathBuf;

use modkernel::format;
use modkernel::sl2::{self, SL2NMatrix, SL2ZMatrix};

fn seeds(target: &str) -> Vec<(PathBuf, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .map(|p| {
            let bytes = std::fs::read(&p).unwrap();
            (p, bytes)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn modular_data_seeds_are_valid() {
    for (path, bytes) in seeds("modular_data") {
        let md = format::parse_modular_data(std::str::from_utf8(&bytes).unwrap())
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(format::to_json(&md).as_bytes(), bytes.as_slice(), "{}", path.display());
    }
}

#[test]
fn cyc_number_seeds_parse() {
    for (path, bytes) in seeds("cyc_number") {
        format::parse_cyc_number(std::str::from_utf8(&bytes).unwrap())
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}

#[test]
fn sl2_seeds_parse_and_lift() {
    for (path, bytes) in seeds("sl2_matrix") {
        let (&k, rest) = bytes.split_first().unwrap();
        let text = std::str::from_utf8(rest).unwrap();
        let modulus = u64::from(k) + 1;
        let parsed_mod_n = SL2NMatrix::parse(text, modulus).ok();
        if let Some(m) = parsed_mod_n {
            assert_eq!(sl2::lift(&m).unwrap().reduce(modulus), m, "{}", path.display());
        }
        let parsed_z = text.parse::<SL2ZMatrix>().ok();
        assert!(parsed_mod_n.is_some() || parsed_z.is_some(), "{} decodes to nothing", path.display());
    }
}
