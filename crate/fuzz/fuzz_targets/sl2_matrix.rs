#![no_main]

use libfuzzer_sys::fuzz_target;
use modkernel::sl2::{self, SL2NMatrix, SL2ZMatrix};

// First byte picks the modulus; the rest is matrix text.
fuzz_target!(|data: &[u8]| {
    let Some((&k, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let modulus = u64::from(k) + 1;
    if let Ok(m) = SL2NMatrix::parse(text, modulus) {
        let z = sl2::lift(&m).expect("every SL2(Z/N) element lifts");
        assert_eq!(z.reduce(modulus), m);
        assert_eq!(sl2::decompose(&z).evaluate(), z);
    }
    if let Ok(z) = text.parse::<SL2ZMatrix>() {
        if z.a.bits() < 64 && z.c.bits() < 64 && z.d.bits() < 64 {
            assert_eq!(sl2::decompose(&z).evaluate(), z);
        }
    }
});
