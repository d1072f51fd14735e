#![no_main]

use dialnet::Degree;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(d) = text.parse::<Degree>() {
        assert!(d <= Degree::ONE);
        let again: Degree = d.to_string().parse().expect("display output parses");
        assert_eq!(again, d);
    }
});
