#![no_main]

use kspectra::signatures::Signature;
use kspectra::{DomainSpec, WeightSequence};
use libfuzzer_sys::fuzz_target;

const DOMAINS: [&str; 4] = ["I:2,2", "II:3", "III:5", "IV:6"];

fuzz_target!(|data: &[u8]| {
    let Some((&pick, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    if text.trim_start().starts_with("table") {
        return;
    }
    let spec: DomainSpec = DOMAINS[pick as usize % DOMAINS.len()].parse().unwrap();
    if let Ok(w) = WeightSequence::parse(text, &spec) {
        let _ = w.weight(&Signature::row(spec.rank(), 3));
    }
});
