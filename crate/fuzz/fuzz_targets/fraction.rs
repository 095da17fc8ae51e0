#![no_main]

use libfuzzer_sys::fuzz_target;
use linea::scalar::{format_fraction, parse_fraction};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(q) = parse_fraction(text) {
        let back = parse_fraction(&format_fraction(&q)).expect("canonical form parses");
        assert_eq!(back, q);
    }
});
