#![no_main]

use immersia_core::config::AnalysisConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(cfg) = AnalysisConfig::from_json(s) {
            let _ = cfg.submetric_specs();
            let _ = cfg.resolved_mode();
        }
    }
});
