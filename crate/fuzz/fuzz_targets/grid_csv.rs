#![no_main]

use cvtele_cli::diagram::read_grid;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = read_grid(data);
});
