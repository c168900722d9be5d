//! Augments an AGG hierarchy with corrections from a randomly initialised
//! network and prints what each level pair received.

use rapnet::cli::consistent_rhs;
use rapnet::gnn::{augment_hierarchy, augment_with_trace, AugmentOptions, GnnWeights, HIDDEN};
use rapnet::problems::{generate, Family, ProblemSpec};
use rapnet::solve::{solve_standalone, CycleConfig, StopCriteria};
use rapnet::{build_hierarchy, CoarseSolver, SetupConfig, Variant};

fn main() -> rapnet::Result<()> {
    let a = generate(&ProblemSpec::with_unknowns(
        Family::AnisoDiffusion2D,
        2000,
        3,
    ))?
    .a;
    let cfg = SetupConfig {
        min_coarse_size: 1,
        ..SetupConfig::default()
    }
    .with_max_levels(4);
    let agg = build_hierarchy(&a, Variant::Agg, &cfg, 0)?;
    let weights = GnnWeights::random(HIDDEN, 0.05, 11);
    let (rapnet, trace) = augment_with_trace(&agg, &weights, &AugmentOptions::default())?;
    for t in &trace {
        println!(
            "pair {}: {} -> {} nodes, {} edges, max |correction| {:.2e}, previous latents {:?}",
            t.level, t.n_fine, t.n_coarse, t.n_edges, t.max_abs_correction, t.consumed_latents
        );
    }
    assert_eq!(rapnet.operator_complexity(), agg.operator_complexity());

    let b = consistent_rhs(&a, 1)?;
    let x0 = vec![0.0; a.n_rows()];
    let stop = StopCriteria {
        tol: 1e-6,
        max_iters: 1000,
    };
    // Untrained weights give arbitrary corrections; a zero decoder reproduces AGG.
    let zero = augment_hierarchy(
        &agg,
        &weights.with_zero_decoder(),
        &AugmentOptions::default(),
    )?;
    for (name, h) in [("agg", &agg), ("random", &rapnet), ("zero", &zero)] {
        let (_, r) = solve_standalone(
            h,
            &b,
            &x0,
            &CycleConfig::new(2, CoarseSolver::DenseLu),
            stop,
        )?;
        println!(
            "{name:<7} {} iterations, {}",
            r.iterations,
            r.status.as_str()
        );
    }
    Ok(())
}
