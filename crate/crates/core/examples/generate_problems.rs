//! Generates one small instance of every family and prints its size.

use rapnet::problems::{generate, Family, ProblemSpec};

fn main() -> rapnet::Result<()> {
    println!(
        "{:<16} {:>7} {:>9} {:>10}",
        "family", "n", "nnz", "symmetric"
    );
    for family in Family::ALL {
        let problem = generate(&ProblemSpec::with_unknowns(family, 1000, 7))?;
        let a = &problem.a;
        println!(
            "{:<16} {:>7} {:>9} {:>10}",
            family.name(),
            a.n_rows(),
            a.nnz(),
            a.is_symmetric(0.0)
        );
    }
    Ok(())
}
