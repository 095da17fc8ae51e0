#![no_main]
//! Arrangement and record documents. Accepted documents must survive a
//! serialize/parse round trip; small arrangements are also summarized.

use libfuzzer_sys::fuzz_target;
use linea::arrangement::{parse_document, Document, LoadOptions};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let opts = LoadOptions { allow_unchecked: true };
    let Ok(doc) = parse_document(text, opts) else { return };
    let again = parse_document(&doc.to_json_string(), opts).expect("round trip");
    assert_eq!(again.to_json(), doc.to_json());
    if let Document::Arrangement(arr) = &doc {
        if arr.len() <= 16 {
            let summary = arr.crossing_summary().expect("valid arrangements summarize");
            let (lhs, rhs) = summary.t.identity_sides(summary.s);
            assert_eq!(lhs, rhs);
        }
    }
});
