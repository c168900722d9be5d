//! Solves a 2D Poisson problem with the stand-alone V-cycle and with
//! V-cycle preconditioned FGMRES, for `b = A x` with random `x`.

use rapnet::cli::consistent_rhs;
use rapnet::problems::poisson_2d;
use rapnet::solve::{fgmres, solve_standalone, CycleConfig, StopCriteria, VCycle, GMRES_RESTART};
use rapnet::{build_hierarchy, CoarseSolver, SetupConfig, Variant};

fn main() -> rapnet::Result<()> {
    let a = poisson_2d(128);
    let b = consistent_rhs(&a, 1)?;
    let x0 = vec![0.0; a.n_rows()];
    let stop = StopCriteria::default();
    for variant in [Variant::Agg, Variant::Sa] {
        let h = build_hierarchy(&a, variant, &SetupConfig::default(), 0)?;
        let cycle = CycleConfig::new(2, CoarseSolver::DenseLu);
        let (_, standalone) = solve_standalone(&h, &b, &x0, &cycle, stop)?;
        let pc = VCycle::new(&h, cycle)?;
        let (_, krylov) = fgmres(
            &a,
            &b,
            &x0,
            &pc,
            GMRES_RESTART,
            stop,
            h.operator_complexity(),
        )?;
        println!(
            "{variant:<4} standalone {:>3} its (rate {:.3})   fgmres {:>3} its   final relres {:.1e}",
            standalone.iterations,
            standalone.convergence_rate,
            krylov.iterations,
            krylov.final_relres()
        );
    }
    Ok(())
}
