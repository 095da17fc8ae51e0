#![no_main]

use libfuzzer_sys::fuzz_target;
use linea::feasibility::{parse_problem, solve};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok((spec, lo, hi)) = parse_problem(text) else { return };
    // Keep the solver work per input small.
    if spec.m > 24 || hi - lo > 4 || hi > 2000 {
        return;
    }
    for s in lo..=hi {
        let problem = spec.at(s).expect("range was validated");
        solve(&problem).expect("answers verify exactly");
    }
});
