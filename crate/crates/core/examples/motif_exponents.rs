//! Density exponents, balancedness and automorphisms of the built-in motifs.

use graphon_motifs::motif::{automorphism_count, density_exponents, Motif, NAMED_MOTIFS};

fn main() -> graphon_motifs::Result<()> {
    println!("{:<17} {:>4} {:>6} {:>6} {:>9} {:>9}", "motif", "aut", "m", "m1", "balanced", "ssb");
    for name in NAMED_MOTIFS {
        let m = Motif::named(name)?;
        let p = density_exponents(&m)?;
        println!(
            "{:<17} {:>4} {:>6} {:>6} {:>9} {:>9}",
            name,
            automorphism_count(&m),
            p.m.to_string(),
            p.m1.to_string(),
            p.balanced,
            p.strictly_strongly_balanced
        );
    }
    Ok(())
}
