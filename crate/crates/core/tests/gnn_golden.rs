//! Network outputs against the torch reference in `tests/oracle/reference_forward.py`.

use std::path::{Path, PathBuf};

use rapnet::amg::{Hierarchy, Level};
use rapnet::gnn::{augment_with_trace, load_weights, AugmentOptions};
use rapnet::sparse::read_matrix_market;
use rapnet::{CoarseSolver, SetupConfig, SparseMatrix, Variant};

const TOL: f32 = 1e-5;

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/gnn_golden")
}

fn mtx(name: &str) -> SparseMatrix {
    read_matrix_market(&fixture().join(format!("{name}.mtx"))).unwrap()
}

fn expected() -> Vec<(usize, String, Vec<f32>)> {
    std::fs::read_to_string(fixture().join("expected.txt"))
        .unwrap()
        .lines()
        .map(|line| {
            let mut it = line.split_whitespace();
            let pair = it.next().unwrap().parse().unwrap();
            let block = it.next().unwrap().to_string();
            (pair, block, it.map(|v| v.parse().unwrap()).collect())
        })
        .collect()
}

fn close(got: f32, want: f32) -> bool {
    (got - want).abs() <= TOL
}

#[test]
fn two_level_pairs_match_reference() {
    let w = load_weights(&fixture().join("weights")).unwrap();
    assert_eq!(w.hidden, 8);
    let h = Hierarchy {
        levels: vec![
            Level {
                a: mtx("a0"),
                p: mtx("p0"),
                r: mtx("r0"),
            },
            Level {
                a: mtx("a1"),
                p: mtx("p1"),
                r: mtx("r1"),
            },
        ],
        coarsest: mtx("a2"),
        coarse_solver: CoarseSolver::DenseLu,
        variant: Variant::Agg,
        seed: 0,
        config: SetupConfig::default(),
    };
    let (out, trace) = augment_with_trace(&h, &w, &AugmentOptions::default()).unwrap();
    assert_eq!(trace[1].consumed_latents, Some(2));
    for (pair, block, want) in expected() {
        let (corrected, base) = match block.as_str() {
            "p" => (&out.levels[pair].p, &h.levels[pair].p),
            "r" => (&out.levels[pair].r, &h.levels[pair].r),
            _ => (out.operator(pair + 1), h.operator(pair + 1)),
        };
        assert_eq!(want.len(), base.nnz(), "pair {pair} block {block}");
        for ((c, b), w) in corrected.values().iter().zip(base.values()).zip(&want) {
            let delta = c - b;
            assert!(
                close(delta, *w),
                "pair {pair} block {block}: {delta} vs {w}"
            );
        }
    }
}
