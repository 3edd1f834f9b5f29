//! Computes a_n by every route and checks the identity catalog.

use espart::sequences::{values, verify_all, Identity, Route, SeqId};

fn main() -> espart::Result<()> {
    for route in Route::ALL.into_iter().filter(|r| r.applies_to(SeqId::A)) {
        let v = values(SeqId::A, route, 12)?;
        println!("{route:<14} {v:?}");
    }
    let outcomes = verify_all(&Identity::catalog(), 24)?;
    for o in &outcomes {
        let verdict = if o.passed() { "holds" } else { "FAILS" };
        if o.is_ambiguous() {
            println!("{:<10} {verdict}; surviving readings: {}", o.identity_id, o.surviving().join(", "));
        } else {
            println!("{:<10} {verdict}", o.identity_id);
        }
    }
    Ok(())
}
