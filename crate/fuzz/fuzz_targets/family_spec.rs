#![no_main]

use libfuzzer_sys::fuzz_target;
use linea::generators::FamilySpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = text.parse::<FamilySpec>() else { return };
    let printed = spec.to_string();
    assert_eq!(printed.parse::<FamilySpec>().expect("display form parses"), spec);
    let _ = spec.validate();
});
