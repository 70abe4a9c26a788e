//! SI dissemination: a single forced run, then both classification tasks.

use filtsurf::prelude::*;
use filtsurf::synth::{simulate_si_from, SiConfig};

fn main() -> Result<()> {
    let path = GraphSnapshot::new(
        (1..=8).map(|i| (i, 0)).collect(),
        (1..8).map(|i| Edge::new(i, i + 1, 1.0)).collect(),
    )?;
    for (t, s) in simulate_si_from(&path, 1, &SiConfig::new(1.0, 0))?.iter().enumerate() {
        let infected: Vec<u32> = s.nodes().iter().filter(|n| n.1 == 1).map(|n| n.0).collect();
        println!("t={t}: infected {infected:?}");
    }

    let forest = ForestConfig::with_trees(100, 2);
    for (name, task) in [
        ("SI vs random labels", SiTask::Dissemination),
        ("p=0.2 vs p=0.8", SiTask::InfectionRate),
    ] {
        let ds = si_dataset(100, 50, task, &TaskParams::default(), 2)?;
        let mut lens: Vec<usize> = ds.graphs().iter().map(|g| g.len()).collect();
        lens.sort_unstable();
        for kind in [WeightKind::Ricci, WeightKind::MaxDegree] {
            let desc = descriptor_for(&ds, DescriptorKind::LabelHistogram, false)?;
            let t = transform_dataset(&ds, &WeightConfig::new(kind), &desc)?;
            let report = cross_validate(&t.feature_matrix()?, &forest, 10, 1)?;
            println!(
                "{name} [{kind}]: {} (median length {})",
                report.summary(),
                lens[lens.len() / 2]
            );
        }
    }
    Ok(())
}
