#![no_main]

use libfuzzer_sys::fuzz_target;
use ppi_cli::{parse_config, Command};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        for command in [Command::Reproduce, Command::Coeffs, Command::Propagate, Command::Sweep] {
            let _ = parse_config(text, command);
        }
    }
});
