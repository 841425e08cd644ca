#![no_main]

use libfuzzer_sys::fuzz_target;
use sl3bp::io::parse_label;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(l) = parse_label(s, None) {
        assert_eq!(parse_label(&l.to_string(), Some(l.level() + 3)).unwrap(), l);
    }
});
