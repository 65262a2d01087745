#![no_main]
use libfuzzer_sys::fuzz_target;
use slice_core::exactring::parse_poly_text;

fuzz_target!(|data: &str| {
    if let Ok(p) = parse_poly_text(data) {
        let again = parse_poly_text(&p.to_string()).expect("printed polynomial must parse");
        assert_eq!(again, p);
    }
});
