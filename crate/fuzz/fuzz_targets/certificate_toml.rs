#![no_main]

use epostar::epostar::{check_certificate, Certificate};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let trs = epostar::fixtures::fib();
    if let Ok(cert) = Certificate::from_toml(&trs.signature, text) {
        let _ = check_certificate(&trs, &cert);
        let back = Certificate::from_toml(&trs.signature, &cert.to_toml(&trs.signature))
            .expect("written certificate reparses");
        assert_eq!(back.safe, cert.safe);
    }
});
