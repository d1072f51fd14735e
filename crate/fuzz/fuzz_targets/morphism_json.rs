#![no_main]

use dialnet::dialectica::{self, DialObject};
use dialnet::{io, Degree, FinSet, Orientation};
use libfuzzer_sys::fuzz_target;

fn object(us: &[&str], xs: &[&str], fill: Degree) -> DialObject {
    let (u, x) = (FinSet::atoms(us.iter().copied()).unwrap(), FinSet::atoms(xs.iter().copied()).unwrap());
    let rel = vec![fill; u.len() * x.len()];
    DialObject::new(u, x, rel, Orientation::Standard).unwrap()
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(v) = io::parse(text) else { return };
    let a = object(&["a0", "a1"], &["x0", "x1"], Degree::ONE);
    let b = object(&["b0"], &["y0", "y1", "y2"], Degree::ZERO);
    if let Ok((f, g)) = io::maps_from_json(&v, &a, &b) {
        let verdict = dialectica::check_morphism(&a, &b, &f, &g).expect("carriers match");
        assert!(!verdict.is_valid());
        let _ = dialectica::check_morphism(&b, &a, &g, &f);
    }
});
