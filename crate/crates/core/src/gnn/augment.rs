use super::composite::build_composite;
use super::model::{gnn_forward_pair, LatentState};
use super::weights::GnnWeights;
use crate::amg::{Hierarchy, Variant};
use crate::error::{Error, Result};
use crate::sparse::add_on_pattern;

/// Switches for ablations of the correction pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AugmentOptions {
    /// Add the predicted corrections to `P` and `R`.
    pub apply_transfer: bool,
    /// Add the predicted corrections to the coarse operators.
    pub apply_coarse: bool,
    /// Carry latents from one level pair to the next.
    pub mix: bool,
    /// Feed the corrected coarse operator into the next pair as its fine operator.
    pub thread_corrected: bool,
}

impl Default for AugmentOptions {
    fn default() -> Self {
        Self {
            apply_transfer: true,
            apply_coarse: true,
            mix: true,
            thread_corrected: true,
        }
    }
}

/// What happened at one level pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairTrace {
    pub level: usize,
    pub n_fine: usize,
    pub n_coarse: usize,
    pub n_edges: usize,
    /// Coarse-node count of the latent state consumed from the previous pair.
    pub consumed_latents: Option<usize>,
    pub max_abs_correction: f32,
}

/// Corrects every level pair of an AGG hierarchy with one shared network.
pub fn augment_hierarchy(
    h: &Hierarchy,
    w: &GnnWeights,
    opts: &AugmentOptions,
) -> Result<Hierarchy> {
    augment_with_trace(h, w, opts).map(|(out, _)| out)
}

/// [`augment_hierarchy`] that also reports per-pair details.
pub fn augment_with_trace(
    h: &Hierarchy,
    w: &GnnWeights,
    opts: &AugmentOptions,
) -> Result<(Hierarchy, Vec<PairTrace>)> {
    if h.variant != Variant::Agg {
        return Err(Error::Contract(format!(
            "corrections apply to aggregation hierarchies, got {}",
            h.variant
        )));
    }
    let mut out = h.clone();
    out.variant = Variant::RapNet;
    out.coarse_solver = Variant::RapNet.default_coarse_solver();
    let mut prev: Option<LatentState> = None;
    let mut trace = Vec::with_capacity(h.levels.len());
    for l in 0..h.levels.len() {
        let fine = if opts.thread_corrected {
            out.operator(l)
        } else {
            h.operator(l)
        };
        let level = &h.levels[l];
        let g = build_composite(fine, &level.p, &level.r, h.operator(l + 1))?;
        let consumed = if opts.mix { prev.as_ref() } else { None };
        let (c, state) = gnn_forward_pair(&g, w, consumed)?;
        let max_abs_correction =
            c.dp.values()
                .iter()
                .chain(c.dr.values())
                .chain(c.da_coarse.values())
                .fold(0f32, |m, v| m.max(v.abs()));
        trace.push(PairTrace {
            level: l,
            n_fine: g.n_fine,
            n_coarse: g.n_coarse,
            n_edges: g.n_edges(),
            consumed_latents: consumed.map(|s| s.coarse_nodes().nrows()),
            max_abs_correction,
        });
        if opts.apply_transfer {
            out.levels[l].p = add_on_pattern(&level.p, &c.dp)?;
            out.levels[l].r = add_on_pattern(&level.r, &c.dr)?;
        }
        if opts.apply_coarse {
            let corrected = add_on_pattern(h.operator(l + 1), &c.da_coarse)?;
            out.set_operator(l + 1, corrected);
        }
        prev = Some(state);
    }
    Ok((out, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amg::{build_hierarchy, SetupConfig};
    use crate::gnn::weights::HIDDEN;
    use crate::problems::gen_geometric;

    fn agg(levels: usize) -> Hierarchy {
        let a = gen_geometric(2, 300, 4).unwrap().a;
        let cfg = SetupConfig {
            min_coarse_size: 8,
            ..SetupConfig::default()
        }
        .with_max_levels(levels);
        build_hierarchy(&a, Variant::Agg, &cfg, 1).unwrap()
    }

    #[test]
    fn zero_decoder_is_numerically_identity() {
        let h = agg(4);
        let w = GnnWeights::random(HIDDEN, 0.1, 3).with_zero_decoder();
        let out = augment_hierarchy(&h, &w, &AugmentOptions::default()).unwrap();
        assert_eq!(out.variant, Variant::RapNet);
        for l in 0..h.depth() {
            assert_eq!(out.operator(l), h.operator(l));
        }
        for (x, y) in out.levels.iter().zip(&h.levels) {
            assert_eq!(x.p, y.p);
            assert_eq!(x.r, y.r);
        }
    }

    #[test]
    fn patterns_and_complexity_are_preserved() {
        let h = agg(4);
        let out = augment_hierarchy(
            &h,
            &GnnWeights::random(HIDDEN, 0.1, 9),
            &AugmentOptions::default(),
        )
        .unwrap();
        for l in 0..h.depth() {
            assert!(out.operator(l).same_pattern(h.operator(l)));
        }
        for (x, y) in out.levels.iter().zip(&h.levels) {
            assert!(x.p.same_pattern(&y.p) && x.r.same_pattern(&y.r));
        }
        assert_eq!(out.operator_complexity(), h.operator_complexity());
        assert_ne!(out.coarsest, h.coarsest);
    }

    #[test]
    fn latents_flow_between_pairs() {
        let h = agg(3);
        assert_eq!(h.depth(), 3);
        let w = GnnWeights::random(HIDDEN, 0.1, 2);
        let (_, trace) = augment_with_trace(&h, &w, &AugmentOptions::default()).unwrap();
        assert_eq!(trace[0].consumed_latents, None);
        assert_eq!(trace[1].consumed_latents, Some(trace[0].n_coarse));
        assert_eq!(trace[1].n_fine, trace[0].n_coarse);
        let no_mix = AugmentOptions {
            mix: false,
            ..AugmentOptions::default()
        };
        let (_, trace) = augment_with_trace(&h, &w, &no_mix).unwrap();
        assert!(trace.iter().all(|t| t.consumed_latents.is_none()));
    }

    #[test]
    fn ablation_switches() {
        let h = agg(3);
        let w = GnnWeights::random(HIDDEN, 0.1, 6);
        let only_coarse = AugmentOptions {
            apply_transfer: false,
            ..AugmentOptions::default()
        };
        let out = augment_hierarchy(&h, &w, &only_coarse).unwrap();
        assert_eq!(out.levels[0].p, h.levels[0].p);
        assert_ne!(out.operator(1), h.operator(1));
        let only_transfer = AugmentOptions {
            apply_coarse: false,
            ..AugmentOptions::default()
        };
        let out = augment_hierarchy(&h, &w, &only_transfer).unwrap();
        assert_eq!(out.operator(1), h.operator(1));
        assert_ne!(out.levels[0].p, h.levels[0].p);
    }

    #[test]
    fn deterministic_across_runs() {
        let h = agg(3);
        let w = GnnWeights::random(HIDDEN, 0.1, 8);
        let a = augment_hierarchy(&h, &w, &AugmentOptions::default()).unwrap();
        let b = augment_hierarchy(&h, &w, &AugmentOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn only_aggregation_hierarchies_are_accepted() {
        let a = gen_geometric(2, 100, 0).unwrap().a;
        let sa = build_hierarchy(&a, Variant::Sa, &SetupConfig::default(), 0).unwrap();
        assert!(
            augment_hierarchy(&sa, &GnnWeights::zeros(HIDDEN), &AugmentOptions::default()).is_err()
        );
    }
}
