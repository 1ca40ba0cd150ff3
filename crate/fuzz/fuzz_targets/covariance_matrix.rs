#![no_main]

use cvtele_core::{is_physical, symplectic_eigenvalues, CovarianceMatrix, DEFAULT_TOL};
use libfuzzer_sys::fuzz_target;

// First byte picks the mode count, the rest are little-endian f64 entries.
fuzz_target!(|data: &[u8]| {
    let Some((&modes, rest)) = data.split_first() else {
        return;
    };
    let side = 2 * (usize::from(modes % 3) + 1);
    let vals: Vec<f64> = rest
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let Ok(v) = CovarianceMatrix::from_row_slice(side, &vals) else {
        return;
    };
    if is_physical(&v, DEFAULT_TOL) {
        if let Ok(nu) = symplectic_eigenvalues(&v) {
            assert_eq!(nu.len(), side / 2);
        }
    }
});
