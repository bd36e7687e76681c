#![no_main]

use entrolab::logistic::{decode_line, encode_line};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Some((center, total)) = decode_line(s) {
        assert_eq!(decode_line(&encode_line(&center, total)), Some((center, total)));
    }
});
