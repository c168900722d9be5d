//! Exports one training sample and checks it survives a round trip.

use rapnet::problems::{generate, Family, ProblemSpec};
use rapnet::train::{build_training_sample, export_training_sample, import_training_sample};

fn main() -> rapnet::Result<()> {
    let family = Family::WattsStrogatz;
    let problem = generate(&ProblemSpec::with_unknowns(family, 1500, 2))?;
    let sample = build_training_sample(&problem, family, 16, 9)?;
    let dir = std::env::temp_dir().join("rapnet_sample_example");
    export_training_sample(&sample, &dir)?;
    let back = import_training_sample(&dir)?;
    println!(
        "{} levels, {} level pairs, {} error/residual pairs (cycles {:?})",
        back.hierarchy.depth(),
        back.pairs.len(),
        back.batch.len(),
        back.batch.cycles
    );
    println!(
        "max |A e - r| / |r| after import: {:.1e}",
        back.batch.max_identity_error(&back.hierarchy)?
    );
    Ok(())
}
