//! Expands the generating functions and writes one as a b-file.

use espart::series::{identity_check_euler, Gf};

fn main() -> espart::Result<()> {
    for gf in [Gf::A, Gf::B, Gf::C, Gf::Ad(3), Gf::ColorCount] {
        let s = gf.series(15)?;
        let terms: Vec<String> = s.coeffs().iter().map(ToString::to_string).collect();
        println!("{:<12} {}", gf.name(), terms.join(", "));
    }
    println!("Euler product identity to order 64: {}", identity_check_euler(64)?);
    print!("{}", Gf::A.series(8)?.to_bfile());
    Ok(())
}
