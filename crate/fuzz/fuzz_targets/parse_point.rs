#![no_main]

use libfuzzer_sys::fuzz_target;
use troptrack::fixtures;
use troptrack::json::{parse_point, point_to_json, to_canonical};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    for f in fixtures::all() {
        if let Ok(p) = parse_point(s, &f.tri) {
            let text = to_canonical(&point_to_json(&p, &f.tri));
            let again = parse_point(&text, &f.tri).expect("canonical text parses");
            assert_eq!(again.coords, p.coords);
        }
    }
});
