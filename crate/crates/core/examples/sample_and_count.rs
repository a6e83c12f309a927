//! Draws one graph, writes its dump, reads it back and counts motifs.

use graphon_motifs::counting::{count_sampled, expected_count};
use graphon_motifs::graphon::StepGraphon;
use graphon_motifs::motif::Motif;
use graphon_motifs::sampler::{sample, SampledGraph};

fn main() -> graphon_motifs::Result<()> {
    let w = StepGraphon::w_asym();
    let (n, rho) = (2000, 0.01);
    let g = sample(&w, n, rho, 7)?;
    let mut dump = Vec::new();
    g.write_dump(&mut dump)?;
    let back = SampledGraph::read_dump(dump.as_slice())?;
    assert_eq!(back, g);
    println!("n = {n}, rho = {rho}, {} edges, dump {} bytes", g.edge_count(), dump.len());
    for name in ["edge", "path3", "triangle", "c4"] {
        let m = Motif::named(name)?;
        println!(
            "  {name:<8} X = {:>8}  E[X] = {:>12.2}",
            count_sampled(&back, &m),
            expected_count(&m, &w, n as u64, rho)?
        );
    }
    Ok(())
}
