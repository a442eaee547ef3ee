#![no_main]

use libfuzzer_sys::fuzz_target;
use modunit::TauSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(t) = s.parse::<TauSpec>() {
        let again: TauSpec = t.to_string().parse().expect("display re-parses");
        assert_eq!(again, t);
    }
});
