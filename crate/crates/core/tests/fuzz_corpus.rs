//! Replays the checked-in fuzz corpus through the same checks the fuzz
//! targets run, so the seeds stay exercised on stable toolchains.

use std::fs;
use std::path::PathBuf;

use modunit::recognition::AlgebraicCertificate;
use modunit::siegel::{reduce_index, Phase, SiegelIndex, SiegelProduct};
use modunit::TauSpec;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let path = e.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, String::from_utf8_lossy(&fs::read(&path).unwrap()).into_owned())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn tau_seeds() {
    let mut parsed = 0;
    for (name, s) in seeds("parse_tau") {
        if let Ok(t) = s.parse::<TauSpec>() {
            assert_eq!(t.to_string().parse::<TauSpec>().unwrap(), t, "{name}");
            parsed += 1;
        }
    }
    assert!(parsed >= 5);
    assert!("c:0,-1".parse::<TauSpec>().is_err());
}

#[test]
fn index_seeds() {
    for (name, s) in seeds("parse_index") {
        match s.parse::<SiegelIndex>() {
            Ok(r) => {
                assert_eq!(r.to_string().parse::<SiegelIndex>().unwrap(), r, "{name}");
                assert!(reduce_index(&r).0.is_reduced());
            }
            Err(_) => assert_eq!(name, "integer_pair"),
        }
    }
}

#[test]
fn phase_seeds() {
    for (name, s) in seeds("parse_phase") {
        let p: Phase = s.parse().unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(p.to_string().parse::<Phase>().unwrap(), p);
    }
}

#[test]
fn product_seeds() {
    for (name, s) in seeds("parse_product_json") {
        match SiegelProduct::from_json(&s) {
            Ok(p) => assert_eq!(SiegelProduct::from_json(&p.to_json()).unwrap(), p, "{name}"),
            Err(_) => assert_eq!(name, "integer_index"),
        }
    }
}

#[test]
fn certificate_seeds() {
    for (name, s) in seeds("parse_certificate_json") {
        match AlgebraicCertificate::from_json(&s) {
            Ok(c) => {
                let verdict = c.verify();
                assert_eq!(verdict.is_ok(), name != "tampered_unit", "{name}: {verdict:?}");
                let again = AlgebraicCertificate::from_json(&c.to_json()).unwrap();
                assert_eq!(again.to_json(), c.to_json());
            }
            Err(_) => assert_eq!(name, "oversized_root"),
        }
    }
}

mod arbitrary_input {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(512))]

        #[test]
        fn text_parsers_do_not_panic(s in "(quad:|c:)?[-0-9/,.:e ]{0,24}") {
            let _ = s.parse::<TauSpec>();
            let _ = s.parse::<SiegelIndex>();
            let _ = s.parse::<Phase>();
        }

        #[test]
        fn json_decoders_do_not_panic(
            s in r#"\{"factors":\[(\["-?[0-9/]{1,6}","-?[0-9/]{1,6}",-?[0-9]{1,3}\],?){0,3}\],"phase":"[-0-9/]{1,5}"\}"#,
        ) {
            if let Ok(p) = SiegelProduct::from_json(&s) {
                prop_assert_eq!(SiegelProduct::from_json(&p.to_json()).unwrap(), p);
            }
        }

        #[test]
        fn certificate_fields_are_validated(
            power in 0u64..2_000_000, root in 0u64..5000, degree in 0usize..6, constant in -5i64..5,
        ) {
            let mut minpoly: Vec<String> = vec![constant.to_string()];
            minpoly.extend((0..degree).map(|i| (i as i64 - 2).to_string()));
            let json = serde_json::json!({
                "value": {"re": "1.5", "im": "0"},
                "power_taken": power,
                "minpoly": minpoly,
                "is_algebraic_integer": true,
                "divides": "9",
                "is_unit": false,
                "radical": {"a": "3", "b": "2", "d": 3, "root": root},
                "prec_bits": 64,
            });
            if let Ok(c) = AlgebraicCertificate::from_json(&json.to_string()) {
                let _ = c.verify();
            }
        }
    }
}
