#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let trs = epostar::fixtures::fib();
    let _ = epostar::term::parse_term(&trs.signature, text);
});
