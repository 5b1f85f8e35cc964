#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(trs) = epostar::term::parse_trs(text) {
        // printing and reparsing must give the same system
        let again = epostar::term::parse_trs(&trs.to_string()).expect("printed system reparses");
        assert_eq!(again.rules.len(), trs.rules.len());
    }
});
