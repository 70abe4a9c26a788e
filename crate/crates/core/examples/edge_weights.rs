//! Compares the four edge weight functions on a small graph.

use filtsurf::prelude::*;
use filtsurf::weights::hks;

fn main() -> Result<()> {
    // a triangle with a pendant path: 0-1-2-0, 2-3, 3-4
    let g = GraphSnapshot::new(
        (0..5).map(|i| (i, 0)).collect(),
        vec![
            Edge::new(0, 1, 0.3),
            Edge::new(1, 2, 0.7),
            Edge::new(0, 2, 0.1),
            Edge::new(2, 3, 0.9),
            Edge::new(3, 4, 0.5),
        ],
    )?;
    let kinds = [
        WeightKind::Native,
        WeightKind::MaxDegree,
        WeightKind::Ricci,
        WeightKind::Hks,
    ];
    let tables: Vec<_> = kinds
        .iter()
        .map(|&k| weigh_edges(&g, &WeightConfig::new(k)))
        .collect::<Result<_>>()?;
    print!("edge  ");
    for k in kinds {
        print!("{k:>12}");
    }
    println!();
    for e in g.edges() {
        print!("{}-{}   ", e.u, e.v);
        for t in &tables {
            print!("{:>12.6}", t[&e.key()]);
        }
        println!();
    }
    println!("\nheat kernel signature at t=1:");
    for (v, h) in hks(&g, 1.0)? {
        println!("  node {v}: {h:.6}");
    }
    Ok(())
}
