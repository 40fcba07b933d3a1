#![no_main]

use libfuzzer_sys::fuzz_target;
use polycycle::solution::{format_solution, parse_solution};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(sol) = parse_solution(text) {
        let canonical = format_solution(&sol);
        assert_eq!(parse_solution(&canonical).expect("canonical form parses"), sol);
    }
});
