#![no_main]

use libfuzzer_sys::fuzz_target;
use sl3bp::io::parse_gamma;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(g) = parse_gamma(s) {
        let (c1, c2) = g.root_coords();
        assert!(c1 >= 0.into() && c1 < 1.into() && c2 >= 0.into() && c2 < 1.into());
        assert_eq!(parse_gamma(&g.to_string()).unwrap(), g);
    }
});
