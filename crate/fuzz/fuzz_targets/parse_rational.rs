#![no_main]

use entrolab::Rational;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if s.len() > 256 {
        return;
    }
    if let Ok(q) = s.parse::<Rational>() {
        let back: Rational = q.to_string().parse().expect("display output parses");
        assert_eq!(back, q);
    }
});
