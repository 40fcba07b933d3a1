#![no_main]

use libfuzzer_sys::fuzz_target;
use polycycle::instance::{format_instance, parse_instance};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    // Anything accepted must survive a format/parse round trip unchanged.
    if let Ok(inst) = parse_instance(text) {
        let canonical = format_instance(&inst);
        let again = parse_instance(&canonical).expect("canonical form parses");
        assert_eq!(again.polygon, inst.polygon);
        assert_eq!(again.points, inst.points);
        assert_eq!(format_instance(&again), canonical);
    }
});
