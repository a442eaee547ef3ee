#![no_main]

use libfuzzer_sys::fuzz_target;
use modunit::recognition::AlgebraicCertificate;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(c) = AlgebraicCertificate::from_json(s) {
        // verification may reject the claims but must not panic
        let _ = c.verify();
        let again = AlgebraicCertificate::from_json(&c.to_json()).expect("round trip");
        assert_eq!(again.to_json(), c.to_json());
    }
});
