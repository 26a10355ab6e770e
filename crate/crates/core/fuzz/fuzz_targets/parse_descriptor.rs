#![no_main]

use ifam_core::CompressionDescriptor;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(c) = text.parse::<CompressionDescriptor>() {
        let again: CompressionDescriptor = c.to_string().parse().expect("display output parses");
        assert_eq!(again, c);
        for n in 1..=8 {
            let _ = c.validate(n);
        }
    }
});
