//! Generates the two-class synthetic dataset and writes it to disk.
//!
//!     cargo run --example synthetic_dataset -- [out-dir]

use filtsurf::prelude::*;

fn main() -> Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "out/synthetic".into());
    let ds = generate_synthetic(&SynthConfig {
        n_graphs: 20,
        seed: 7,
        ..Default::default()
    })?;
    for g in ds.graphs().iter().take(4) {
        let last = g.snapshots().last().unwrap();
        let (lo, hi) = last
            .edges()
            .iter()
            .fold((f64::MAX, f64::MIN), |(lo, hi), e| (lo.min(e.weight), hi.max(e.weight)));
        println!(
            "{} class {}: {} snapshots, final |V|={} |E|={}, weights in [{lo}, {hi}]",
            g.id(),
            g.class(),
            g.len(),
            last.node_count(),
            last.edge_count()
        );
    }
    save_dataset(&ds, &out)?;
    let back = load_dataset(&out)?;
    assert_eq!(back, ds);
    println!("wrote {} graphs to {out}", ds.len());
    Ok(())
}
