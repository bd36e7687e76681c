#![no_main]

use entrolab::interval_maps::QuadMap;
use entrolab::numkit::{Precision, RatInterval};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(q) = serde_json::from_str::<QuadMap>(s) {
        let again: QuadMap = serde_json::from_str(&serde_json::to_string(&q).unwrap()).unwrap();
        assert_eq!(again, q);
        let img = q.iterate_enclosure(&RatInterval::unit(), 2, Precision::Bits(32));
        assert!(img.lo() <= img.hi());
    }
});
