#![no_main]

use entrolab::symbolic::Sft;
use entrolab::Rational;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(z) = Sft::from_json(s) {
        assert_eq!(Sft::from_json(&z.to_json()).unwrap(), z);
        if z.alphabet() <= 16 {
            let h = z.entropy(&Rational::pow2(-10)).unwrap();
            assert!(h.lo() <= h.hi());
            let _ = z.check_mixing();
        }
    }
});
