//! Evaluates pre_2 and pre_3, and searches for the smallest pair of
//! partitions that pre_3 sends to the same image.

use espart::esp::{check_injectivity, pre_h, pre_k};
use espart::partition::FamilyKind;
use espart::Partition;

fn main() -> espart::Result<()> {
    let lambda: Partition = "(3,2,1,1)".parse()?;
    println!("pre_2{lambda} = {}", pre_k(&lambda, 2)?);
    println!("pre_3{lambda} = {}", pre_k(&lambda, 3)?);
    println!("pre_h2{lambda} = {}", pre_h(&lambda, 2)?);

    let binary = check_injectivity(FamilyKind::Dary(2), 30, 2, None)?;
    println!("pre_2 injective on binary partitions up to 30: {}", binary.passed());
    let report = check_injectivity(FamilyKind::All, 20, 3, None)?;
    match report.first_collision {
        Some(c) => println!("pre_3{} = pre_3{} = {} (n = {})", c.first, c.second, c.image, c.n),
        None => println!("pre_3 injective up to 20"),
    }
    Ok(())
}
