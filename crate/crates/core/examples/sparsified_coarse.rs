//! Shows how SpSA keeps the coarse operators on the unsmoothed sparsity
//! pattern while matching the Galerkin operator on the constant vector.

use rapnet::problems::{generate, Family, ProblemSpec};
use rapnet::sparse::triple_product;
use rapnet::{build_hierarchy, SetupConfig, Variant};

fn main() -> rapnet::Result<()> {
    let a = generate(&ProblemSpec::with_unknowns(Family::Geometric2D, 3000, 1))?.a;
    let sa = build_hierarchy(&a, Variant::Sa, &SetupConfig::default(), 0)?;
    let spsa = build_hierarchy(&a, Variant::SpSa, &SetupConfig::default(), 0)?;
    println!(
        "operator complexity  SA {:.3}  SpSA {:.3}",
        sa.operator_complexity(),
        spsa.operator_complexity()
    );
    for (l, level) in spsa.levels.iter().enumerate() {
        let galerkin = triple_product(&level.r, &level.a, &level.p)?;
        let coarse = spsa.operator(l + 1);
        let drift = coarse
            .row_sums()
            .iter()
            .zip(galerkin.row_sums())
            .fold(0f64, |m, (x, y)| m.max((x - y).abs()));
        println!(
            "level {l}: galerkin nnz {:>7}  sparsified nnz {:>6}  max row-sum drift {drift:.1e}",
            galerkin.nnz(),
            coarse.nnz()
        );
    }
    Ok(())
}
