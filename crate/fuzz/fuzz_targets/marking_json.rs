#![no_main]

use dialnet::{io, FinSet};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(v) = io::parse(text) else { return };
    let conditions = FinSet::atoms(["idle", "buffer", "done"]).unwrap();
    if let Ok(m) = io::marking_from_json(&v, &conditions) {
        let out = io::marking_to_json(&m);
        assert_eq!(io::marking_from_json(&out, &conditions).expect("canonical output parses"), m);
    }
});
