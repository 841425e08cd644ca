#![no_main]

use libfuzzer_sys::fuzz_target;
use sl3bp::characters::QSeries;

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice::<serde_json::Value>(data) else { return };
    if let Ok(s) = QSeries::from_json(&v) {
        assert_eq!(QSeries::from_json(&s.to_json()).unwrap(), s);
    }
});
