//! Dataset directory layout:
//!
//! ```text
//! <dir>/meta.json          {"classes": {"<graph-id>": <int>, ...}, "format_version": 1}
//! <dir>/graphs/<id>.dg     line-oriented snapshots
//! ```
//!
//! A `.dg` file is a sequence of sections. `t <i>` opens snapshot `i`
//! (0, 1, 2, ...), `v <id> <label>` declares a node and `e <u> <v> <w>`
//! adds an edge between two nodes declared in the same section. Lines
//! starting with `#` and blank lines are ignored.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Dataset, DynamicGraph, Edge, GraphSnapshot, Label, NodeId};
use crate::error::{Error, Result};

pub const META_FILE: &str = "meta.json";
pub const GRAPHS_DIR: &str = "graphs";
pub const DG_EXTENSION: &str = "dg";
const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct Meta {
    classes: BTreeMap<String, u32>,
    format_version: u32,
}

struct Section {
    nodes: Vec<(NodeId, Label)>,
    edges: Vec<Edge>,
    declared: HashSet<NodeId>,
    seen_edges: HashSet<(NodeId, NodeId)>,
}

impl Section {
    fn new() -> Self {
        Section {
            nodes: Vec::new(),
            edges: Vec::new(),
            declared: HashSet::new(),
            seen_edges: HashSet::new(),
        }
    }

    fn finish(self, file: &Path, line: usize) -> Result<GraphSnapshot> {
        GraphSnapshot::new(self.nodes, self.edges).map_err(|e| Error::Parse {
            file: file.to_path_buf(),
            line,
            msg: e.to_string(),
        })
    }
}

/// Parses the body of a `.dg` file. `file` is used only for error locations.
pub fn parse_dg(text: &str, file: &Path) -> Result<Vec<GraphSnapshot>> {
    let err = |line: usize, msg: String| Error::Parse {
        file: file.to_path_buf(),
        line,
        msg,
    };
    let mut snapshots = Vec::new();
    let mut current: Option<(Section, usize)> = None;

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let tag = fields.next().unwrap_or_default();
        let args: Vec<&str> = fields.collect();
        let want = |n: usize| -> Result<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(err(lineno, format!("'{tag}' expects {n} fields, found {}", args.len())))
            }
        };
        let int = |s: &str| -> Result<u32> {
            s.parse::<u32>()
                .map_err(|_| err(lineno, format!("expected a non-negative integer, found {s:?}")))
        };
        match tag {
            "t" => {
                want(1)?;
                let idx = int(args[0])? as usize;
                if idx != snapshots.len() + usize::from(current.is_some()) {
                    return Err(err(
                        lineno,
                        format!(
                            "timestep {idx} out of sequence, expected {}",
                            snapshots.len() + usize::from(current.is_some())
                        ),
                    ));
                }
                if let Some((section, start)) = current.take() {
                    snapshots.push(section.finish(file, start)?);
                }
                current = Some((Section::new(), lineno));
            }
            "v" => {
                want(2)?;
                let (section, _) = current
                    .as_mut()
                    .ok_or_else(|| err(lineno, "node before first 't' line".into()))?;
                let id = int(args[0])?;
                let label = int(args[1])?;
                if !section.declared.insert(id) {
                    return Err(err(lineno, format!("duplicate node {id}")));
                }
                section.nodes.push((id, label));
            }
            "e" => {
                want(3)?;
                let (section, _) = current
                    .as_mut()
                    .ok_or_else(|| err(lineno, "edge before first 't' line".into()))?;
                let u = int(args[0])?;
                let v = int(args[1])?;
                let w: f64 = args[2]
                    .parse()
                    .map_err(|_| err(lineno, format!("invalid weight {:?}", args[2])))?;
                if u == v {
                    return Err(err(lineno, format!("self-loop on node {u}")));
                }
                if !w.is_finite() {
                    return Err(err(lineno, format!("non-finite weight {}", args[2])));
                }
                for end in [u, v] {
                    if !section.declared.contains(&end) {
                        return Err(err(lineno, format!("edge endpoint {end} not declared")));
                    }
                }
                if !section.seen_edges.insert((u.min(v), u.max(v))) {
                    return Err(err(lineno, format!("duplicate edge ({u}, {v})")));
                }
                section.edges.push(Edge::new(u, v, w));
            }
            other => return Err(err(lineno, format!("unknown record type {other:?}"))),
        }
    }
    if let Some((section, start)) = current {
        snapshots.push(section.finish(file, start)?);
    }
    if snapshots.is_empty() {
        return Err(err(0, "no snapshots".into()));
    }
    Ok(snapshots)
}

/// Canonical `.dg` text: nodes by id, edges by `(u, v)`, shortest
/// round-trip weight formatting.
pub fn write_dg(snapshots: &[GraphSnapshot]) -> String {
    let mut out = String::new();
    for (t, s) in snapshots.iter().enumerate() {
        let _ = writeln!(out, "t {t}");
        for &(id, label) in s.nodes() {
            let _ = writeln!(out, "v {id} {label}");
        }
        for e in s.edges() {
            let _ = writeln!(out, "e {} {} {:?}", e.u, e.v, e.weight);
        }
    }
    out
}

fn graph_path(dir: &Path, id: &str) -> PathBuf {
    dir.join(GRAPHS_DIR).join(format!("{id}.{DG_EXTENSION}"))
}

pub fn load_dataset(dir: impl AsRef<Path>) -> Result<Dataset> {
    let dir = dir.as_ref();
    let meta_path = dir.join(META_FILE);
    let meta_text = fs::read_to_string(&meta_path).map_err(|e| Error::io(&meta_path, e))?;
    let meta: Meta = serde_json::from_str(&meta_text).map_err(|e| Error::Parse {
        file: meta_path.clone(),
        line: e.line(),
        msg: e.to_string(),
    })?;
    if meta.format_version != FORMAT_VERSION {
        return Err(Error::Format {
            what: "meta.json",
            msg: format!("unsupported format_version {}", meta.format_version),
        });
    }

    let graphs_dir = dir.join(GRAPHS_DIR);
    let mut ids = Vec::new();
    for entry in fs::read_dir(&graphs_dir).map_err(|e| Error::io(&graphs_dir, e))? {
        let path = entry.map_err(|e| Error::io(&graphs_dir, e))?.path();
        if path.extension().and_then(|x| x.to_str()) != Some(DG_EXTENSION) {
            continue;
        }
        let id = path
            .file_stem()
            .and_then(|s| s.to_str())
            .ok_or_else(|| Error::InvalidDataset(format!("bad file name {}", path.display())))?;
        ids.push(id.to_string());
    }
    ids.sort();
    let on_disk: Vec<&String> = ids.iter().collect();
    let in_meta: Vec<&String> = meta.classes.keys().collect();
    if on_disk != in_meta {
        let missing: Vec<_> = in_meta.iter().filter(|id| !ids.contains(id)).collect();
        let extra: Vec<_> = on_disk.iter().filter(|id| !meta.classes.contains_key(**id)).collect();
        return Err(Error::InvalidDataset(format!(
            "meta.json and graphs/ disagree (missing files: {missing:?}, unlisted files: {extra:?})"
        )));
    }

    let graphs = ids
        .par_iter()
        .map(|id| {
            let path = graph_path(dir, id);
            let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            let snapshots = parse_dg(&text, &path)?;
            DynamicGraph::new(id.clone(), meta.classes[id], snapshots)
        })
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(graphs)
}

pub fn save_dataset(ds: &Dataset, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    let graphs_dir = dir.join(GRAPHS_DIR);
    fs::create_dir_all(&graphs_dir).map_err(|e| Error::io(&graphs_dir, e))?;

    let keep: HashSet<String> = ds
        .graphs()
        .iter()
        .map(|g| format!("{}.{DG_EXTENSION}", g.id()))
        .collect();
    for entry in fs::read_dir(&graphs_dir).map_err(|e| Error::io(&graphs_dir, e))? {
        let path = entry.map_err(|e| Error::io(&graphs_dir, e))?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
        if path.extension().and_then(|x| x.to_str()) == Some(DG_EXTENSION) && !keep.contains(name) {
            fs::remove_file(&path).map_err(|e| Error::io(&path, e))?;
        }
    }

    let meta = Meta {
        classes: ds.classes(),
        format_version: FORMAT_VERSION,
    };
    let meta_path = dir.join(META_FILE);
    let mut text = serde_json::to_string_pretty(&meta)?;
    text.push('\n');
    fs::write(&meta_path, text).map_err(|e| Error::io(&meta_path, e))?;

    ds.graphs().par_iter().try_for_each(|g| {
        let path = graph_path(dir, g.id());
        fs::write(&path, write_dg(g.snapshots())).map_err(|e| Error::io(&path, e))
    })
}
