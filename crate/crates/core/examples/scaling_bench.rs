//! Surface size and timing as the dataset grows.
//!
//!     cargo run --release --example scaling_bench -- [sizes, default 100,1000]

use filtsurf::bench::{bench_csv, run_bench, BenchConfig};
use filtsurf::prelude::*;

fn main() -> Result<()> {
    let sizes = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "100,1000".into())
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| Error::Config(format!("bad size {s:?}"))))
        .collect::<Result<Vec<usize>>>()?;
    let dir = std::env::temp_dir().join("filtsurf-scaling-bench");
    let records = run_bench(
        &BenchConfig {
            sizes,
            synth: SynthConfig::default(),
            weights: WeightConfig::default(),
            descriptor: DescriptorKind::LabelHistogram,
            forest: ForestConfig::with_trees(100, 0),
        },
        &dir,
    )?;
    print!("{}", bench_csv(&records));
    if let [first, .., last] = &records[..] {
        println!(
            "\nsurface bytes grew {:.2}x for {:.0}x more graphs; a Gram matrix would grow {:.0}x",
            last.cumulative_surface_bytes as f64 / first.cumulative_surface_bytes as f64,
            last.n_graphs as f64 / first.n_graphs as f64,
            last.gram_matrix_bytes as f64 / first.gram_matrix_bytes as f64
        );
    }
    Ok(())
}
