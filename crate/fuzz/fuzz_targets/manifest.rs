#![no_main]

use libfuzzer_sys::fuzz_target;
use linea::corpus::Corpus;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = Corpus::from_manifest("/nonexistent-corpus", text);
});
