#![no_main]

use libfuzzer_sys::fuzz_target;
use sl3bp::io::{parse_affine, parse_coweight, parse_rational};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(w) = parse_affine(s) {
        assert_eq!(parse_affine(&w.to_string()).unwrap(), w);
    }
    if let Ok(r) = parse_rational(s) {
        assert_eq!(parse_rational(&r.to_string()).unwrap(), r);
    }
    if let Ok(g) = parse_coweight(s) {
        assert_eq!(parse_coweight(&g.to_string()).unwrap(), g);
    }
});
