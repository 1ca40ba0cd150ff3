#![no_main]

use cvtele_cli::ledger::{parse_record, read_ledger};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(recs) = read_ledger(text) {
        for rec in recs {
            // Accepted records must survive a round trip.
            let line = serde_json::to_string(&rec).unwrap();
            assert_eq!(parse_record(&line).unwrap(), rec);
        }
    }
});

