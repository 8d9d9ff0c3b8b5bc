#![no_main]

use libfuzzer_sys::fuzz_target;
use ppi_core::Grid;

fuzz_target!(|data: &[u8]| {
    let Ok((rep, grid)) = Grid::read_csv(data) else {
        return;
    };
    let mut out = Vec::new();
    grid.write_csv(rep, &mut out).expect("parsed grid writes");
    if let Ok((rep2, grid2)) = Grid::read_csv(out.as_slice()) {
        assert_eq!(rep, rep2);
        assert_eq!(grid.len(), grid2.len());
    }
});
