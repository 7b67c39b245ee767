#![no_main]

use libfuzzer_sys::fuzz_target;
use qcv_core::charvar::SurfaceSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = s.parse::<SurfaceSpec>() {
        assert_eq!(spec.to_string().parse::<SurfaceSpec>().as_ref(), Ok(&spec));
    }
});
