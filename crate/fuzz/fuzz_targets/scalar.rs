#![no_main]

use libfuzzer_sys::fuzz_target;
use qcv_core::scalars::parse_scalar;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(x) = parse_scalar(s) {
        // rendered scalars parse back to the same value
        let back = parse_scalar(&x.render()).expect("rendered scalar parses");
        assert_eq!(back, x);
    }
});
