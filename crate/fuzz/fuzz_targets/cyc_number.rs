#![no_main]

use libfuzzer_sys::fuzz_target;
use modkernel::format::{self, CycNumberRecord};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(x) = format::parse_cyc_number(text) {
        let rec = serde_json::to_string(&CycNumberRecord::from_value(&x)).expect("records serialize");
        assert_eq!(format::parse_cyc_number(&rec).expect("round trip"), x);
        if let Some(inv) = x.inv() {
            assert!((&x * &inv).is_one());
        }
    }
});
