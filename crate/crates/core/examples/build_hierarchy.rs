//! Builds AGG, SA and SpSA hierarchies for a 2D Poisson problem and compares
//! their level sizes and operator complexity.

use rapnet::problems::poisson_2d;
use rapnet::{build_hierarchy, SetupConfig, Variant};

fn main() -> rapnet::Result<()> {
    let a = poisson_2d(64);
    for variant in [Variant::Agg, Variant::Sa, Variant::SpSa] {
        let h = build_hierarchy(&a, variant, &SetupConfig::default(), 0)?;
        let sizes: Vec<String> = (0..h.depth())
            .map(|l| h.operator(l).n_rows().to_string())
            .collect();
        println!(
            "{variant:<5} levels {}  complexity {:.3}",
            sizes.join(" -> "),
            h.operator_complexity()
        );
    }
    Ok(())
}
