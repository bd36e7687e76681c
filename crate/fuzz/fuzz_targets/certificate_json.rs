#![no_main]

use entrolab::horseshoe::{check_certificate, HorseshoeCert};
use entrolab::interval_maps::PwlMap;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(c) = HorseshoeCert::from_json(s) {
        assert_eq!(HorseshoeCert::from_json(&c.to_json()).unwrap(), c);
        if c.n() <= 6 && c.p() <= 64 {
            // the identity never admits a horseshoe
            assert!(!check_certificate(&PwlMap::identity(), &c));
            let _ = check_certificate(&PwlMap::tent(), &c);
        }
    }
});
