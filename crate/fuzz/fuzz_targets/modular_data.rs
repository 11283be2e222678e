#![no_main]

use libfuzzer_sys::fuzz_target;
use modkernel::format;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(md) = format::parse_modular_data_unchecked(text) else {
        return;
    };
    let again = format::to_json(&md);
    let back = format::parse_modular_data_unchecked(&again).expect("serialized data parses");
    assert_eq!(back, md);
    if md.dim() <= 8 && md.field_order() <= 240 {
        let _ = md.validate();
    }
});
