#![no_main]

use entrolab::interval_maps::PwlMap;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(f) = PwlMap::from_json(s) {
        assert_eq!(PwlMap::from_json(&f.to_json()).unwrap(), f);
        let v = f.variation();
        assert!(!v.is_negative());
        if f.segment_count() <= 64 {
            let _ = f.iterate_capped(2, 4096);
        }
    }
});
