//! Regularity, first-projection variance and kappa for each motif on the
//! two reference graphons.

use graphon_motifs::graphon::{critical_terms, is_h_regular, xi1, StepGraphon, DEFAULT_REGULARITY_TOL};
use graphon_motifs::motif::Motif;
use graphon_motifs::Error;

fn main() -> graphon_motifs::Result<()> {
    for (label, w) in [("W_sym", StepGraphon::w_sym()), ("W_asym", StepGraphon::w_asym())] {
        println!("{label}: degree function {:?}", w.degree_function());
        for name in ["edge", "path3", "triangle", "c4", "fig1b"] {
            let m = Motif::named(name)?;
            let report = is_h_regular(&m, &w, DEFAULT_REGULARITY_TOL)?;
            let kappa = match critical_terms(&m, &w, 1.0) {
                Ok(terms) => format!("{:.6}", terms.kappa()),
                Err(Error::RegularGraphon) => "undefined".to_string(),
                Err(e) => return Err(e),
            };
            println!(
                "  {name:<8} t = {:.6}  regular = {:<5}  xi1 = {:.3e}  kappa(c=1) = {kappa}",
                report.t,
                report.is_regular,
                xi1(&m, &w)?
            );
        }
    }
    Ok(())
}
