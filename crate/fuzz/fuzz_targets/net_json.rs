#![no_main]

use dialnet::{io, simulator, Degree};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(v) = io::parse(text) else { return };
    if let Ok(n) = io::net_from_json(&v) {
        let out = io::net_to_json(&n);
        assert_eq!(io::net_to_json(&io::net_from_json(&out).expect("canonical output parses")), out);
        let m = simulator::Marking::uniform(n.conditions(), Degree::ONE);
        for e in n.events().indices() {
            let _ = simulator::fire(&n, &m, e, Degree::ZERO);
        }
    }
});
