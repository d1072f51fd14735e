#![no_main]

use dialnet::io::{self, SystemInput};
use dialnet::toposys::{self, AxiomMode, FuzzyTopSystem};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(v) = io::parse(text) else { return };
    let sys = match io::system_from_json(&v) {
        Ok(SystemInput::Fuzzy { points, frame, sat }) => {
            let binary = toposys::check_axioms(&points, &frame, &sat, AxiomMode::BinaryAndEmpty);
            let full = toposys::check_axioms(&points, &frame, &sat, AxiomMode::AllSubsets);
            if let (Ok(b), Ok(f)) = (&binary, &full) {
                assert_eq!(b.is_valid(), f.is_valid());
            }
            FuzzyTopSystem::new(points, frame, sat)
        }
        Ok(SystemInput::Crisp(ts)) => toposys::crisp_embed(&ts),
        Err(_) => return,
    };
    if let Ok(sys) = sys {
        let _ = toposys::check_extent_topology(&sys);
    }
});
