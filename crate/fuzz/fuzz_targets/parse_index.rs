#![no_main]

use libfuzzer_sys::fuzz_target;
use modunit::siegel::{reduce_index, SiegelIndex};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(r) = s.parse::<SiegelIndex>() {
        let again: SiegelIndex = r.to_string().parse().expect("display re-parses");
        assert_eq!(again, r);
        let (base, _) = reduce_index(&r);
        assert!(base.is_reduced());
    }
});
