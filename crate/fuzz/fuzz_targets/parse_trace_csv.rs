#![no_main]

use std::collections::BTreeMap;

use immersia_core::trace::{parse_trace, ChannelKind, ColumnSpec, TraceSchema};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // Map every non-time header column to a channel so the full row path runs.
    let header = data.split(|&b| b == b'\n').next().unwrap_or_default();
    let Ok(header) = std::str::from_utf8(header) else {
        return;
    };
    let columns: BTreeMap<String, ColumnSpec> = header
        .split(',')
        .map(str::trim)
        .filter(|c| !c.is_empty() && *c != "t")
        .map(|c| {
            (
                c.to_string(),
                ColumnSpec {
                    name: c.to_string(),
                    kind: ChannelKind::Dimensionless,
                    unit: None,
                },
            )
        })
        .collect();
    let schema = TraceSchema {
        time_column: "t".into(),
        sample_rate: 100.0,
        columns,
    };

    if let Ok((trace, _)) = parse_trace(data, &schema) {
        // anything we accept must survive a write/read cycle unchanged
        let again = parse_trace(
            trace.to_csv_string().as_bytes(),
            &TraceSchema::for_trace(&trace),
        )
        .expect("re-parse of written trace");
        assert_eq!(again.0.channels(), trace.channels());
    }
});
