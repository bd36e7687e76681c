#![no_main]

use entrolab::symbolic::{format_word, kappa_decode, kappa_encode, parse_word, Sft};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&k, rest)) = data.split_first() else {
        return;
    };
    let Ok(s) = std::str::from_utf8(rest) else {
        return;
    };
    let k = usize::from(k % 40) + 1;
    if let Ok(w) = parse_word(s, k) {
        assert_eq!(parse_word(&format_word(&w, k), k).unwrap(), w);
    }
    let golden = Sft::golden_mean();
    if let Ok(w) = parse_word(s, 2) {
        if let Ok(b) = kappa_encode(&golden, &w) {
            let shortest = kappa_decode(&golden, &b).unwrap();
            assert!(shortest.len() <= w.len());
            assert_eq!(kappa_encode(&golden, &shortest).unwrap(), b);
        }
    }
});
