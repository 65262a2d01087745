#![no_main]
use libfuzzer_sys::fuzz_target;
use slice_core::exactring::{parse_poly_json, poly_to_json};

fuzz_target!(|data: &str| {
    if let Ok(p) = parse_poly_json(data) {
        let text = serde_json::to_string(&poly_to_json(&p)).unwrap();
        assert_eq!(parse_poly_json(&text).unwrap(), p);
    }
});
