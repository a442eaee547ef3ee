#![no_main]

use libfuzzer_sys::fuzz_target;
use modunit::siegel::Phase;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(p) = s.parse::<Phase>() {
        let again: Phase = p.to_string().parse().expect("display re-parses");
        assert_eq!(again, p);
    }
});
