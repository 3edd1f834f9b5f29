//! Runs the rooted-partition maps on a sample and inverts each one.

use espart::rooted::{
    doubled_to_root_one, halve_around_root, halve_around_root_fiber, pair_ones_to_twos, root_one_to_doubled,
    twos_to_pair_ones, RootedPartition,
};

fn main() -> espart::Result<()> {
    let lambda: RootedPartition = "(4,2,2,1,^1,1,1)".parse()?;
    let doubled = root_one_to_doubled(&lambda)?;
    println!("{lambda} -> {doubled} -> {}", doubled_to_root_one(&doubled)?);

    let halved = halve_around_root(&lambda)?;
    let fiber: Vec<String> = halve_around_root_fiber(&halved, lambda.weight())?
        .iter()
        .map(ToString::to_string)
        .collect();
    println!("{lambda} -> {halved}, which has preimages {}", fiber.join(" and "));

    let two_roots: RootedPartition = "(2,^1,1,1,^1,1)".parse()?;
    let paired = pair_ones_to_twos(&two_roots)?;
    println!("{two_roots} -> {paired} -> {}", twos_to_pair_ones(&paired, two_roots.weight())?);
    Ok(())
}
