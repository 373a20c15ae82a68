#![no_main]

use kspectra::DomainSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = text.parse::<DomainSpec>() {
        assert_eq!(spec.to_string().parse::<DomainSpec>().unwrap(), spec);
        assert_eq!(spec.ambient_coordinates().len(), spec.dim());
    }
});
