#![no_main]

use libfuzzer_sys::fuzz_target;
use sl3bp::fusion::ModuleLabel;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(l) = s.parse::<ModuleLabel>() {
        assert_eq!(l.to_string().parse::<ModuleLabel>().unwrap(), l);
    }
});
