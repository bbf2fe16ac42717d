#![no_main]

use libfuzzer_sys::fuzz_target;
use troptrack::fixtures;
use troptrack::json::{loop_to_json, parse_loop, to_canonical};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let known = fixtures::all();
    if let Ok((id, lp)) = parse_loop(s, &known) {
        let text = to_canonical(&loop_to_json(&id, &lp));
        let (id2, again) = parse_loop(&text, &known).expect("canonical text parses");
        assert_eq!(to_canonical(&loop_to_json(&id2, &again)), text);
    }
});
