//! Acceptance checks. Runs without the libtest harness and prints one
//! PASS/FAIL line per criterion; exits nonzero if any fails.

mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use filtsurf::bench::{run_bench, BenchConfig};
use filtsurf::classify::{cross_validate, ForestConfig};
use filtsurf::filtration::{build_filtration, evaluate_curve, DescriptorConfig, DescriptorKind, FiltrationCurve};
use filtsurf::graph::{Edge, GraphSnapshot};
use filtsurf::pipeline::{descriptor_for, transform_dataset};
use filtsurf::surface::{FiltrationSurface, SharedWeightIndex};
use filtsurf::synth::{generate_synthetic, simulate_si, simulate_si_from, SiConfig, SynthConfig};
use filtsurf::weights::{hks, ricci_curvature, weigh_edges, WeightConfig, WeightKind};
use rand::Rng;

type Check = Result<String, String>;
type Tree = BTreeMap<PathBuf, Vec<u8>>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn synthetic_accuracy(constant: bool) -> Result<f64, String> {
    let ds = generate_synthetic(&SynthConfig {
        n_graphs: 100,
        seed: 7,
        ..Default::default()
    })
    .map_err(|e| e.to_string())?;
    let ds = if constant {
        ds.with_constant_weight(1.0).map_err(|e| e.to_string())?
    } else {
        ds
    };
    let desc = descriptor_for(&ds, DescriptorKind::LabelHistogram, false).map_err(|e| e.to_string())?;
    let t = transform_dataset(&ds, &WeightConfig::new(WeightKind::Native), &desc).map_err(|e| e.to_string())?;
    let fm = t.feature_matrix().map_err(|e| e.to_string())?;
    let report = cross_validate(&fm, &ForestConfig::with_trees(100, 7), 10, 1).map_err(|e| e.to_string())?;
    Ok(report.mean)
}

fn synthetic_separation() -> Check {
    let mean = synthetic_accuracy(false)?;
    ensure(mean >= 99.0, || format!("mean accuracy {mean:.2} < 99"))?;
    Ok(format!("mean accuracy {mean:.2}%"))
}

fn weight_blindness() -> Check {
    let mean = synthetic_accuracy(true)?;
    ensure((mean - 50.0).abs() <= 12.0, || {
        format!("mean accuracy {mean:.2} outside 50 ± 12")
    })?;
    Ok(format!("mean accuracy {mean:.2}% with constant weights"))
}

fn linear_scaling() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = BenchConfig {
        sizes: vec![100, 1000],
        synth: SynthConfig {
            seed: 7,
            ..Default::default()
        },
        weights: WeightConfig::default(),
        descriptor: DescriptorKind::LabelHistogram,
        forest: ForestConfig::with_trees(100, 7),
    };
    let r = run_bench(&cfg, dir.path()).map_err(|e| e.to_string())?;
    let bytes = r[1].cumulative_surface_bytes as f64 / r[0].cumulative_surface_bytes as f64;
    ensure((5.0..=15.0).contains(&bytes), || {
        format!("surface bytes ratio {bytes:.2} outside [5, 15]")
    })?;
    ensure(r[1].gram_matrix_bytes == 100 * r[0].gram_matrix_bytes, || {
        "gram ratio is not 100".into()
    })?;
    Ok(format!(
        "surface bytes {} -> {} (ratio {bytes:.2}), gram ratio 100",
        r[0].cumulative_surface_bytes, r[1].cumulative_surface_bytes
    ))
}

fn ricci_oracle() -> Check {
    let mut rng = common::rng(4);
    let mut worst = 0.0f64;
    let mut edges = 0;
    for _ in 0..200 {
        let g = common::random_connected(&mut rng, 8, 1);
        for e in g.edges() {
            let got = ricci_curvature(&g, e.u, e.v, 0.5).map_err(|e| e.to_string())?;
            let want = common::ricci_lp(&g, e.u, e.v, 0.5);
            worst = worst.max((got - want).abs());
            edges += 1;
        }
    }
    ensure(worst <= 1e-9, || format!("max deviation {worst:e} over {edges} edges"))?;
    Ok(format!("{edges} edges, max deviation {worst:.1e}"))
}

fn descriptor_cfgs() -> Vec<DescriptorConfig> {
    let hist = DescriptorConfig::label_histogram(vec![0, 1, 2]).unwrap();
    let comp = DescriptorConfig::component_count();
    vec![
        hist.clone(),
        hist.with_isolated(true),
        comp.clone(),
        comp.with_isolated(true),
    ]
}

fn check_curve(g: &GraphSnapshot, kind: WeightKind, desc: &DescriptorConfig) -> Result<FiltrationCurve, String> {
    let weights = weigh_edges(g, &WeightConfig::new(kind)).map_err(|e| e.to_string())?;
    let curve = evaluate_curve(g, &build_filtration(&weights), desc).map_err(|e| e.to_string())?;
    let oracle = common::curve_oracle(g, &weights, desc);
    let mut prev = vec![0.0; desc.dim()];
    let mut change_points = Vec::new();
    for (t, want) in &oracle {
        ensure(&curve.value_at(*t) == want, || {
            format!("value at {t}: {:?} != {want:?}", curve.value_at(*t))
        })?;
        if *want != prev {
            change_points.push(*t);
            prev = want.clone();
        }
    }
    let stored: Vec<f64> = curve.thresholds().collect();
    ensure(stored == change_points, || {
        format!("change points {stored:?} != {change_points:?}")
    })?;
    Ok(curve)
}

fn incremental_equivalence() -> Check {
    let mut rng = common::rng(5);
    let descs = descriptor_cfgs();
    for i in 0..100 {
        let g = common::random_snapshot(&mut rng, 14, 50, 3);
        let kind = if i % 2 == 0 {
            WeightKind::Native
        } else {
            WeightKind::MaxDegree
        };
        for desc in &descs {
            check_curve(&g, kind, desc).map_err(|e| format!("snapshot {i}: {e}"))?;
        }
    }
    let mut appended = 0;
    for s in 0..100 {
        let len = rng.gen_range(1..=10);
        let desc = &descs[s % descs.len()];
        let curves: Vec<FiltrationCurve> = (0..len)
            .map(|_| check_curve(&common::random_snapshot(&mut rng, 10, 30, 3), WeightKind::Native, desc))
            .collect::<Result<_, _>>()?;
        let n_std0 = rng.gen_range(1..=10);
        let err = |e: filtsurf::Error| e.to_string();
        let mut idx = SharedWeightIndex::build(&curves[..1]).map_err(err)?;
        let mut surf = FiltrationSurface::assemble("g", 1, &curves[..1], &idx, n_std0).map_err(err)?;
        for k in 1..len {
            (surf, idx) = surf.append_timestep(&curves[k], &idx).map_err(err)?;
            appended += 1;
            let batch_idx = SharedWeightIndex::build(&curves[..=k]).map_err(err)?;
            let batch =
                FiltrationSurface::assemble("g", 1, &curves[..=k], &batch_idx, n_std0.max(k + 1)).map_err(err)?;
            ensure(idx == batch_idx && surf == batch, || {
                format!("sequence {s}, step {k}: append differs from rebuild")
            })?;
        }
    }
    Ok(format!(
        "100 snapshots x 4 descriptors match recomputation; {appended} appends match rebuild"
    ))
}

fn hks_spectral() -> Check {
    let k2 = GraphSnapshot::new(vec![(0, 0), (1, 0)], vec![Edge::new(0, 1, 1.0)]).unwrap();
    let want = 0.5 + 0.5 * (-2.0f64).exp();
    for (v, got) in hks(&k2, 1.0).map_err(|e| e.to_string())? {
        ensure((got - want).abs() <= 1e-9, || format!("K2 node {v}: {got} != {want}"))?;
    }
    let mut rng = common::rng(6);
    let mut worst = 0.0f64;
    for i in 0..200 {
        let g = common::random_snapshot(&mut rng, 5, 10, 1);
        let t = [0.1, 1.0, 2.5, 10.0][i % 4];
        let trace: f64 = hks(&g, t).map_err(|e| e.to_string())?.values().sum();
        let spectrum = common::laplacian_spectrum(&g);
        ensure(spectrum.len() == g.node_count(), || {
            format!("oracle found {} eigenvalues", spectrum.len())
        })?;
        let want: f64 = spectrum.iter().map(|l| (-t * l).exp()).sum();
        worst = worst.max((trace - want).abs());
    }
    ensure(worst <= 1e-8, || format!("heat trace deviation {worst:e}"))?;
    Ok(format!("K2 exact; 200 heat traces, max deviation {worst:.1e}"))
}

fn infected(s: &GraphSnapshot) -> Vec<u32> {
    s.nodes().iter().filter(|n| n.1 == 1).map(|n| n.0).collect()
}

fn path(n: u32) -> GraphSnapshot {
    GraphSnapshot::new(
        (1..=n).map(|i| (i, 0)).collect(),
        (1..n).map(|i| Edge::new(i, i + 1, 1.0)).collect(),
    )
    .unwrap()
}

fn si_dynamics() -> Check {
    let mut rng = common::rng(7);
    for run in 0..100u64 {
        let g = common::random_connected(&mut rng, 30, 1);
        let p = rng.gen_range(0.05..=1.0);
        let snaps = simulate_si(&g, &SiConfig::new(p, run)).map_err(|e| e.to_string())?;
        let target = g.node_count().div_ceil(2);
        let sets: Vec<Vec<u32>> = snaps.iter().map(infected).collect();
        ensure(sets[0].len() == 1, || {
            format!("run {run}: {} initially infected", sets[0].len())
        })?;
        for w in sets.windows(2) {
            ensure(w[0].iter().all(|v| w[1].contains(v)), || {
                format!("run {run}: infection not monotone")
            })?;
        }
        let last = sets.len() - 1;
        ensure(sets[last].len() >= target, || {
            format!("run {run}: stopped below target")
        })?;
        ensure(sets[..last].iter().all(|s| s.len() < target), || {
            format!("run {run}: ran past the first step reaching target")
        })?;
        ensure(snaps.iter().all(|s| s.edges() == g.edges()), || {
            format!("run {run}: topology changed")
        })?;
    }
    let cases: [(u32, u32, &[&[u32]]); 3] = [
        (4, 1, &[&[1], &[1, 2]]),
        (4, 2, &[&[2], &[1, 2, 3]]),
        (8, 1, &[&[1], &[1, 2], &[1, 2, 3], &[1, 2, 3, 4]]),
    ];
    for (n, start, want) in cases {
        let snaps = simulate_si_from(&path(n), start, &SiConfig::new(1.0, 0)).map_err(|e| e.to_string())?;
        let got: Vec<Vec<u32>> = snaps.iter().map(infected).collect();
        ensure(got == want, || format!("path {n} from {start}: {got:?}"))?;
    }
    Ok("100 random runs monotone and stop at half; 3 forced path runs match".into())
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_filtsurf")
}

fn run_cli(threads: usize, args: &[String]) -> Result<String, String> {
    let out = Command::new(bin())
        .args(args)
        .args(["--threads".to_string(), threads.to_string()])
        .env("FILTSURF_LOG", "error")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr))
    })?;
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

/// Every `(relative path, bytes)` under `dir`; bench CSVs keep only their
/// non-timing columns.
fn snapshot_tree(dir: &Path) -> Tree {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
                continue;
            }
            let mut bytes = fs::read(&path).unwrap();
            if path.file_name().is_some_and(|n| n == "bench.csv") {
                bytes = strip_timing(&String::from_utf8(bytes).unwrap()).into_bytes();
            }
            out.insert(path.strip_prefix(dir).unwrap().to_path_buf(), bytes);
        }
    }
    out
}

fn strip_timing(csv: &str) -> String {
    csv.lines()
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            format!("{},{},{}\n", f[0], f[4], f[5])
        })
        .collect()
}

fn cli_session(threads: usize, root: &Path) -> Result<(Tree, Vec<String>), String> {
    let p = |s: &str| root.join(s).display().to_string();
    let s = |x: &str| x.to_string();
    let commands: Vec<Vec<String>> = vec![
        vec![
            s("generate"),
            s("--task"),
            s("synthetic"),
            s("--n"),
            s("40"),
            s("--timesteps"),
            s("4"),
            s("--seed"),
            s("7"),
            s("--out"),
            p("syn"),
        ],
        vec![
            s("generate"),
            s("--task"),
            s("si1"),
            s("--n"),
            s("20"),
            s("--size-cap"),
            s("20"),
            s("--seed"),
            s("7"),
            s("--out"),
            p("si1"),
        ],
        vec![
            s("generate"),
            s("--task"),
            s("si2"),
            s("--n"),
            s("20"),
            s("--size-cap"),
            s("20"),
            s("--seed"),
            s("7"),
            s("--out"),
            p("si2"),
        ],
        vec![s("transform"), s("--data"), p("syn"), s("--out"), p("tr_native")],
        vec![
            s("transform"),
            s("--data"),
            p("syn"),
            s("--weight"),
            s("ricci"),
            s("--out"),
            p("tr_ricci"),
        ],
        vec![
            s("transform"),
            s("--data"),
            p("si2"),
            s("--weight"),
            s("hks"),
            s("--descriptor"),
            s("component-count"),
            s("--out"),
            p("tr_hks"),
        ],
        vec![
            s("transform"),
            s("--data"),
            p("si1"),
            s("--weight"),
            s("max-degree"),
            s("--out"),
            p("tr_md"),
        ],
        vec![
            s("evaluate"),
            s("--surfaces"),
            p("tr_native"),
            s("--trees"),
            s("50"),
            s("--folds"),
            s("5"),
            s("--reps"),
            s("2"),
            s("--seed"),
            s("3"),
            s("--save-model"),
            p("model.bin"),
            s("--out"),
            p("ev"),
        ],
        vec![
            s("evaluate"),
            s("--surfaces"),
            p("tr_ricci"),
            s("--trees"),
            s("20"),
            s("--folds"),
            s("5"),
            s("--reps"),
            s("1"),
            s("--out"),
            p("ev_ricci"),
        ],
        vec![
            s("evaluate"),
            s("--surfaces"),
            p("tr_hks"),
            s("--trees"),
            s("20"),
            s("--folds"),
            s("5"),
            s("--reps"),
            s("1"),
            s("--out"),
            p("ev_hks"),
        ],
        vec![
            s("predict"),
            s("--model"),
            p("model.bin"),
            s("--data"),
            p("syn"),
            s("--out"),
            p("pr"),
        ],
        vec![
            s("bench"),
            s("--sizes"),
            s("20,40"),
            s("--trees"),
            s("10"),
            s("--timesteps"),
            s("3"),
            s("--seed"),
            s("5"),
            s("--out"),
            p("bench"),
        ],
    ];
    let mut stdout = Vec::new();
    for args in &commands {
        let text = run_cli(threads, args)?;
        // paths differ between sessions and bench output carries timings
        if args[0] != "bench" {
            stdout.push(text.replace(&root.display().to_string(), "<root>"));
        }
    }
    Ok((snapshot_tree(root), stdout))
}

fn cli_determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut sessions = Vec::new();
    for (i, threads) in [1, 1, 4].into_iter().enumerate() {
        let root = dir.path().join(format!("s{i}"));
        sessions.push((threads, cli_session(threads, &root)?));
    }
    let (_, (files, stdout)) = &sessions[0];
    for (threads, (f, o)) in &sessions[1..] {
        ensure(f.keys().eq(files.keys()), || {
            format!("threads={threads}: different file sets")
        })?;
        for (path, bytes) in f {
            ensure(files[path] == *bytes, || {
                format!("threads={threads}: {} differs", path.display())
            })?;
        }
        ensure(o == stdout, || format!("threads={threads}: stdout differs"))?;
    }
    Ok(format!(
        "{} artifacts identical across 3 runs (threads 1, 1, 4)",
        files.len()
    ))
}

fn main() {
    let criteria: &[Criterion] = &[
        ("synthetic separation", synthetic_separation),
        ("edge-weight blindness", weight_blindness),
        ("linear representation scaling", linear_scaling),
        ("ricci oracle equivalence", ricci_oracle),
        ("incremental vs batch descriptors", incremental_equivalence),
        ("hks spectral check", hks_spectral),
        ("si dynamics", si_dynamics),
        ("cli determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
