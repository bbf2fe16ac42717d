#![no_main]

use libfuzzer_sys::fuzz_target;
use troptrack::json::{parse_triangulation, to_canonical, triangulation_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(t) = parse_triangulation(s) {
        // Canonical output of accepted input is a fixed point.
        let text = to_canonical(&triangulation_to_json(&t.id, &t.tri));
        let again = parse_triangulation(&text).expect("canonical text parses");
        assert_eq!(to_canonical(&triangulation_to_json(&again.id, &again.tri)), text);
    }
});
