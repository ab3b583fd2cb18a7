#![no_main]

use libfuzzer_sys::fuzz_target;
use scopt::sc::BitstreamLut;

fuzz_target!(|data: &[u8]| {
    if let Ok(lut) = BitstreamLut::decode(data) {
        let again = BitstreamLut::decode(&lut.encode()).expect("re-encoded table decodes");
        assert_eq!(again.encode(), lut.encode());
    }
});
