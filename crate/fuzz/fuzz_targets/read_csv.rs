#![no_main]

use libfuzzer_sys::fuzz_target;
use polycycle::experiment::{read_csv, write_csv};

fuzz_target!(|data: &[u8]| {
    if let Ok(rows) = read_csv(data) {
        let mut out = Vec::new();
        write_csv(&rows, &mut out).expect("in-memory write");
        assert_eq!(read_csv(&out[..]).expect("written csv reads back"), rows);
    }
});
