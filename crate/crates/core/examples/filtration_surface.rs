//! Stacks per-timestep curves into a surface, then grows it online.

use filtsurf::prelude::*;

fn main() -> Result<()> {
    let ds = generate_synthetic(&SynthConfig {
        n_graphs: 6,
        timesteps: 4,
        seed: 3,
        ..Default::default()
    })?;
    let desc = DescriptorConfig::label_histogram(ds.label_alphabet().to_vec())?;
    let t = transform_dataset(&ds, &WeightConfig::default(), &desc)?;
    println!("shared index: {:?}", t.index.thresholds());
    let surfaces = t.surfaces()?;
    let s = &surfaces[0];
    let (n, m, d) = s.shape();
    println!(
        "{}: shape {n} x {m} x {d}, {} features",
        s.graph_id(),
        s.vectorize().len()
    );
    for ti in 0..n {
        let row: Vec<String> = (0..m).map(|j| format!("{:.0}", s.get(ti, j, 0))).collect();
        println!("  t={ti} label-0 counts: {}", row.join(" "));
    }

    // online append: start from the first two timesteps, add the rest
    let curves = &t.curves[0];
    let mut idx = SharedWeightIndex::build(&curves[..2])?;
    let mut online = FiltrationSurface::assemble(s.graph_id(), s.class(), &curves[..2], &idx, 2)?;
    for c in &curves[2..] {
        (online, idx) = online.append_timestep(c, &idx)?;
    }
    let batch_idx = SharedWeightIndex::build(curves)?;
    let batch = FiltrationSurface::assemble(s.graph_id(), s.class(), curves, &batch_idx, curves.len())?;
    assert_eq!(online, batch);
    println!("online append over {} steps equals the batch rebuild", curves.len() - 2);
    Ok(())
}
