//! Named wirings, a random draw, and the structural flag.

use entforge::network::{named, named_10q, random_topology, structure_flags};

fn main() -> entforge::Result<()> {
    for name in ["sc", "sc+1", "sc+1w", "sc+2"] {
        let t = named(name, 5)?;
        println!("{name:<6} {}", t.to_text());
    }
    for v in ["u_5_9", "u_0_3", "w_0_3"] {
        let t = named_10q(v)?;
        println!("{v:<6} {} gates: {}", t.len(), t.to_text());
    }
    for seed in 0..4 {
        let t = random_topology(5, 5, seed)?;
        println!(
            "random seed {seed}: {}  descending non-neighbor: {}",
            t.to_text(),
            structure_flags(&t).has_descending_nonneighbor
        );
    }
    Ok(())
}
