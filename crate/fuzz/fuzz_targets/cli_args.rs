#![no_main]

use clap::Parser;
use cvtele_cli::args::Cli;
use libfuzzer_sys::fuzz_target;

// NUL-separated argument vector.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let argv = std::iter::once("cvtele").chain(text.split('\0'));
    let _ = Cli::try_parse_from(argv);
});
