//! Replays the fuzz seed corpora through the parsers on stable.

use std::fs;
use std::path::PathBuf;

use clap::Parser;
use cvtele_cli::args::Cli;
use cvtele_cli::diagram::read_grid;
use cvtele_cli::ledger::{parse_record, read_ledger};
use cvtele_core::{is_physical, symplectic_eigenvalues, CovarianceMatrix, DEFAULT_TOL};

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

#[test]
fn covariance_seeds() {
    for (name, data) in seeds("covariance_matrix") {
        let side = 2 * (usize::from(data[0] % 3) + 1);
        let vals: Vec<f64> = data[1..]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        let v = CovarianceMatrix::from_row_slice(side, &vals).unwrap();
        assert_eq!(is_physical(&v, DEFAULT_TOL), name != "unphysical", "{name}");
        if name != "unphysical" {
            assert!(symplectic_eigenvalues(&v).unwrap().iter().all(|&n| n >= 1.0 - 1e-12));
        }
    }
}

#[test]
fn cli_seeds() {
    for (name, data) in seeds("cli_args") {
        let text = String::from_utf8(data).unwrap();
        let parsed = Cli::try_parse_from(std::iter::once("cvtele").chain(text.split('\0')));
        // The diagram seed carries a flag that subcommand does not take.
        assert_eq!(parsed.is_ok(), name != "diagram", "{name}");
    }
}

#[test]
fn ledger_seeds() {
    for (name, data) in seeds("run_ledger") {
        let recs = read_ledger(std::str::from_utf8(&data).unwrap()).unwrap();
        for rec in &recs {
            assert_eq!(&parse_record(&serde_json::to_string(rec).unwrap()).unwrap(), rec, "{name}");
        }
    }
}

#[test]
fn grid_seeds() {
    for (name, data) in seeds("grid_csv") {
        let rows = read_grid(&data[..]).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(!rows.is_empty());
    }
}
