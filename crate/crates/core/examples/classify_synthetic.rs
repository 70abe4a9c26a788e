//! Cross-validates a random forest on synthetic surfaces, with and without
//! the edge weights that separate the classes.

use filtsurf::prelude::*;

fn main() -> Result<()> {
    let ds = generate_synthetic(&SynthConfig {
        n_graphs: 100,
        seed: 1,
        ..Default::default()
    })?;
    let forest = ForestConfig::with_trees(100, 1);
    for (name, data) in [
        ("native weights", ds.clone()),
        ("constant weights", ds.with_constant_weight(1.0)?),
    ] {
        let desc = descriptor_for(&data, DescriptorKind::LabelHistogram, false)?;
        let fm = transform_dataset(&data, &WeightConfig::default(), &desc)?.feature_matrix()?;
        let report = cross_validate(&fm, &forest, 10, 1)?;
        println!("{name:>16}: {} ({} features)", report.summary(), fm.n_features());
    }

    // train on everything, save, reload, predict
    let desc = descriptor_for(&ds, DescriptorKind::LabelHistogram, false)?;
    let t = transform_dataset(&ds, &WeightConfig::default(), &desc)?;
    let bundle = ModelBundle::new(&t, train(&t.feature_matrix()?, &forest)?);
    let bundle = ModelBundle::from_bytes(&bundle.to_bytes()?)?;
    let fresh = generate_synthetic(&SynthConfig {
        n_graphs: 20,
        seed: 99,
        ..Default::default()
    })?;
    let predicted = bundle.predict(&fresh)?;
    let correct = predicted
        .iter()
        .zip(fresh.graphs())
        .filter(|(p, g)| **p == g.class())
        .count();
    println!("unseen graphs: {correct}/{} correct", fresh.len());
    Ok(())
}
