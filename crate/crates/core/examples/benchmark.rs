//! Small benchmark: every variant in both modes over a few seeds of one
//! family, aggregated the same way the `bench` command does.

use clap::Parser;
use rapnet::cli::{cmd_bench, cmd_gen, BenchArgs, GenArgs, GlobalArgs};

#[derive(Parser)]
struct Gen {
    #[command(flatten)]
    args: GenArgs,
}

#[derive(Parser)]
struct Bench {
    #[command(flatten)]
    args: BenchArgs,
}

fn main() -> rapnet::Result<()> {
    let root = std::env::temp_dir().join("rapnet_bench_example");
    let ds = root.join("data");
    let g = GlobalArgs::default();
    let gen = Gen::parse_from([
        "gen",
        "--family",
        "geometric2d",
        "--n",
        "2000",
        "--count",
        "3",
        "--out",
        ds.to_str().unwrap(),
    ]);
    cmd_gen(&gen.args, &g, &[])?;
    let bench = Bench::parse_from([
        "bench",
        "--dataset",
        ds.join("dataset.txt").to_str().unwrap(),
        "--out",
        root.join("bench").to_str().unwrap(),
    ]);
    cmd_bench(&bench.args, &g, &[])?;
    print!(
        "{}",
        std::fs::read_to_string(root.join("bench/summary.csv")).unwrap()
    );
    Ok(())
}
