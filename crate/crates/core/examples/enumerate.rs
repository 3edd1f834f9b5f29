//! Lists binary partitions of 10 with at least three parts, then counts
//! unrestricted partitions far past what enumeration could reach.

use espart::partition::{count, enumerate, PartitionFamily};

fn main() -> espart::Result<()> {
    let family = PartitionFamily::binary(10).with_min_length(3);
    for p in enumerate(&family) {
        println!("{p}");
    }
    println!("{} binary partitions of 10 with length >= 3", count(&family)?);
    println!("p(200) = {}", count(&PartitionFamily::all(200))?);
    Ok(())
}
