//! Builds an edge filtration and prints both descriptor curves as CSV.

use filtsurf::filtration::build_filtration;
use filtsurf::prelude::*;

fn main() -> Result<()> {
    let g = GraphSnapshot::new(
        vec![(0, 0), (1, 1), (2, 0), (3, 1), (4, 1), (5, 0)],
        vec![
            Edge::new(0, 1, 1.0),
            Edge::new(2, 3, 1.0),
            Edge::new(1, 2, 2.0),
            Edge::new(3, 4, 3.0),
            Edge::new(0, 4, 3.0),
        ],
    )?;
    let filt = build_filtration(&weigh_edges(&g, &WeightConfig::default())?);
    for (t, batch) in filt.thresholds().iter().zip(filt.batches()) {
        println!("threshold {t}: adds {batch:?}");
    }
    let hist = evaluate_curve(&g, &filt, &DescriptorConfig::label_histogram(vec![0, 1])?)?;
    println!(
        "\nlabel histogram (node 5 never appears: it has no edges)\n{}",
        hist.to_csv()
    );
    let comps = evaluate_curve(&g, &filt, &DescriptorConfig::component_count())?;
    println!("component count\n{}", comps.to_csv());
    Ok(())
}
