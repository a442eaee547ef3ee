#![no_main]

use libfuzzer_sys::fuzz_target;
use modunit::siegel::SiegelProduct;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(p) = SiegelProduct::from_json(s) {
        assert_eq!(SiegelProduct::from_json(&p.to_json()).expect("round trip"), p);
        let _ = p.level();
    }
});
