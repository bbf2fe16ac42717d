#![no_main]

use libfuzzer_sys::fuzz_target;
use troptrack::fixtures;
use troptrack::json::{parse_track, to_canonical, track_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(t) = parse_track(s) {
        let text = to_canonical(&track_to_json(&t));
        let again = parse_track(&text).expect("canonical text parses");
        assert_eq!(to_canonical(&track_to_json(&again)), text);
        // Checking against any triangulation reports an error, never panics.
        for f in fixtures::all() {
            let _ = t.check(&f.tri);
        }
    }
});
