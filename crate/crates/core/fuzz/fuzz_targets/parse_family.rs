#![no_main]

use ifam_core::{parse_family, parse_family_with, serialize_family, ParseOptions};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(f) = parse_family(text) {
        let again = parse_family(&serialize_family(&f)).expect("serialized output parses");
        assert_eq!(again, f);
    }
    if let Ok(f) = parse_family_with(text, ParseOptions { allow_empty: true }) {
        let again = parse_family_with(&serialize_family(&f), ParseOptions { allow_empty: true })
            .expect("serialized output parses");
        assert_eq!(again, f);
    }
});
