//! Checks the conjectured identities for k = 2 and prints the verdicts,
//! including readings that do not decide the verdict.

use espart::conjectures::{default_n_max, verify_conjectures, Conjecture, FloorTable, FLOOR_TABLE_D5_SHIFTED};

fn main() -> espart::Result<()> {
    let checks: Vec<Conjecture> = Conjecture::catalog(&[2])
        .into_iter()
        .filter(|c| c.family() != "C12")
        .collect();
    let table = FloorTable::parse(espart::conjectures::FLOOR_TABLE)?;
    for o in verify_conjectures(&checks, default_n_max, &table)? {
        println!("{:<20} {}", o.conjecture_id, if o.passed() { "holds" } else { "FAILS" });
        for s in &o.secondary {
            println!("  [{}] {}", s.reading, if s.passed() { "holds" } else { "fails" });
        }
    }
    let shifted = FloorTable::parse(FLOOR_TABLE_D5_SHIFTED)?;
    let o = &verify_conjectures(&[Conjecture::FloorTable { d: 5 }], default_n_max, &shifted)?[0];
    println!("C9(d=5) against the shifted column: {}", if o.passed() { "holds" } else { "FAILS" });
    Ok(())
}
