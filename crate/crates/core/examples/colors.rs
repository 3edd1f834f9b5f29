//! Lists the color partitions of 4 and maps a doubly rooted partition to
//! its color partition and back.

use espart::colors::{colored_to_rooted, enumerate_q, rooted_to_colored, ColorFamily};
use espart::rooted::RootedPartition;

fn main() -> espart::Result<()> {
    for family in [ColorFamily::PLAIN, ColorFamily::Pow(2), ColorFamily::Odd(1)] {
        let list: Vec<String> = enumerate_q(family, 4)?.iter().map(ToString::to_string).collect();
        println!("{family}: {} partitions of 4", list.len());
        println!("  {}", list.join(" "));
    }
    let lambda: RootedPartition = "(2,2,2,1,1,^1,1,^1,1,1)".parse()?;
    let q = rooted_to_colored(&lambda, ColorFamily::PLAIN)?;
    println!("{lambda} -> {q} -> {}", colored_to_rooted(&q, ColorFamily::PLAIN)?);
    Ok(())
}
