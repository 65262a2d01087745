#![no_main]
use libfuzzer_sys::fuzz_target;
use slice_core::rootsys::Root;

fuzz_target!(|data: &str| {
    if let Ok(r) = data.parse::<Root>() {
        let again: Root = r.to_string().parse().expect("printed root must parse");
        assert_eq!(again, r);
    }
});
