#![no_main]

use libfuzzer_sys::fuzz_target;
use sl3bp::io::{cyc_from_json, fusion_table_from_json, fusion_table_to_json, parse_label, smatrix_from_json, smatrix_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice::<serde_json::Value>(data) else { return };
    if let Ok((u, alg, m)) = smatrix_from_json(&v, |u, l| parse_label(l, Some(u))) {
        let back = smatrix_from_json(&smatrix_to_json(u, &alg, &m), |u, l| parse_label(l, Some(u))).unwrap();
        assert_eq!(back.2, m);
    }
    if let Ok(t) = fusion_table_from_json(&v) {
        assert_eq!(fusion_table_from_json(&fusion_table_to_json(&t, "fuzz")).unwrap(), t);
    }
    if let Ok(x) = cyc_from_json(&v) {
        assert_eq!(cyc_from_json(&x.to_json()).unwrap(), x);
    }
});
