//! Writes a weight directory, reads it back and lists its tensors.

use rapnet::gnn::{load_weights, save_weights, GnnWeights, HIDDEN};

fn main() -> rapnet::Result<()> {
    let dir = std::env::temp_dir().join("rapnet_weights_example");
    let w = GnnWeights::random(HIDDEN, 0.1, 5);
    save_weights(&w, &dir)?;
    let back = load_weights(&dir)?;
    assert_eq!(w, back);
    println!(
        "{} parameters written to {}",
        back.n_params(),
        dir.display()
    );
    for (name, shape) in GnnWeights::expected_shapes(HIDDEN).iter().take(8) {
        println!("  {name:<28} {shape:?}");
    }
    println!("  ...");
    Ok(())
}
