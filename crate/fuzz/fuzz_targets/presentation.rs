#![no_main]

use libfuzzer_sys::fuzz_target;
use qcv_core::ncalg::{parse_presentation, parse_presentation_parts, render_presentation};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if parse_presentation_parts(s).is_err() {
        return;
    }
    // completion is cheap at degree 2
    if let Ok(a) = parse_presentation(s, 2) {
        let text = render_presentation(&a);
        let b = parse_presentation(&text, 2).expect("rendered presentation parses");
        assert_eq!(a.relations(), b.relations());
        assert_eq!(a.graded_dims(2).ok(), b.graded_dims(2).ok());
    }
});
