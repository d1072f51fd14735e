#![no_main]

use dialnet::io;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(v) = io::parse(text) else { return };
    if let Ok(a) = io::object_from_json(&v) {
        let out = io::object_to_json(&a);
        let back = io::object_from_json(&out).expect("canonical output parses");
        assert_eq!(io::object_to_json(&back), out);
    }
});
