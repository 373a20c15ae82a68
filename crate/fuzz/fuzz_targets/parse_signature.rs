#![no_main]

use kspectra::signatures::Signature;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = text.parse::<Signature>() {
        assert_eq!(s.to_string().parse::<Signature>().unwrap(), s);
        assert!(s.parts().windows(2).all(|w| w[0] >= w[1]));
    }
});
