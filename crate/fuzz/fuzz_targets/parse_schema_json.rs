#![no_main]

use immersia_core::trace::TraceSchema;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = TraceSchema::from_json(s);
    }
});
