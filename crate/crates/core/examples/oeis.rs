//! Compares a_n and its first difference with bundled OEIS b-files.

use espart::oeis;
use espart::sequences::{delta, values, Route, SeqId};

fn main() -> espart::Result<()> {
    let a = values(SeqId::A, Route::SeriesCoeff, 41)?;
    let reference = oeis::load("A131205")?;
    let computed: Vec<(i64, i128)> = (2..=40).map(|n| (n as i64, a[n])).collect();
    let report = oeis::diff(&computed, &reference, -1, 0);
    println!("a_n vs A131205(n-1): {} compared, {} mismatches", report.compared, report.mismatches.len());

    let binary = oeis::load("A000123")?;
    let differences: Vec<(i64, i128)> = (1..=40).map(|n| (n as i64, delta(&a, n).unwrap())).collect();
    let report = oeis::diff(&differences, &binary, -1, 0);
    println!("delta a_n vs A000123(n-1): {} compared, {} mismatches", report.compared, report.mismatches.len());
    Ok(())
}
