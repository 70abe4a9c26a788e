//! End-to-end glue: dataset → curves → shared index → surfaces → features,
//! plus on-disk layouts for transformed datasets and trained model bundles.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::ForestModel;
use crate::error::{Error, Result};
use crate::filtration::{build_filtration, evaluate_curve, DescriptorConfig, DescriptorKind, FiltrationCurve};
use crate::graph::{ClassLabel, Dataset, DynamicGraph};
use crate::surface::{
    decode_curves, encode_curves, FeatureMatrix, FiltrationSurface, SharedWeightIndex, FSURF_EXTENSION,
};
use crate::weights::{weigh_edges, WeightConfig, WeightKind};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const INDEX_FILE: &str = "index.json";
pub const SURFACES_DIR: &str = "surfaces";
const FORMAT_VERSION: u32 = 1;

/// Descriptor config for `ds`; label histograms use the dataset's alphabet.
pub fn descriptor_for(ds: &Dataset, kind: DescriptorKind, include_isolated: bool) -> Result<DescriptorConfig> {
    let desc = match kind {
        DescriptorKind::LabelHistogram => DescriptorConfig::label_histogram(ds.label_alphabet().to_vec())?,
        DescriptorKind::ComponentCount => DescriptorConfig::component_count(),
    };
    Ok(desc.with_isolated(include_isolated))
}

/// One filtration curve per snapshot of `dg`.
pub fn graph_curves(
    dg: &DynamicGraph,
    weights: &WeightConfig,
    desc: &DescriptorConfig,
) -> Result<Vec<FiltrationCurve>> {
    dg.snapshots()
        .iter()
        .map(|g| evaluate_curve(g, &build_filtration(&weigh_edges(g, weights)?), desc))
        .collect()
}

/// Curves of a whole dataset over its shared weight index.
#[derive(Clone, Debug, PartialEq)]
pub struct Transformed {
    pub ids: Vec<String>,
    pub classes: Vec<ClassLabel>,
    pub curves: Vec<Vec<FiltrationCurve>>,
    pub index: SharedWeightIndex,
    pub n_std: usize,
    pub weights: WeightConfig,
    pub descriptor: DescriptorConfig,
}

pub fn transform_dataset(ds: &Dataset, weights: &WeightConfig, desc: &DescriptorConfig) -> Result<Transformed> {
    weights.validate()?;
    if weights.kind == WeightKind::Native {
        warn_constant_native(ds);
    }
    let curves = ds
        .graphs()
        .par_iter()
        .map(|dg| graph_curves(dg, weights, desc))
        .collect::<Result<Vec<_>>>()?;
    let index = SharedWeightIndex::build(curves.iter().flatten())?;
    log::info!(
        "transformed {} graphs, shared index of {} thresholds",
        ds.len(),
        index.len()
    );
    Ok(Transformed {
        ids: ds.graphs().iter().map(|g| g.id().to_string()).collect(),
        classes: ds.graphs().iter().map(DynamicGraph::class).collect(),
        curves,
        index,
        n_std: ds.max_len(),
        weights: *weights,
        descriptor: desc.clone(),
    })
}

fn warn_constant_native(ds: &Dataset) {
    let mut all = ds
        .graphs()
        .iter()
        .flat_map(|g| g.snapshots())
        .flat_map(|s| s.edges())
        .map(|e| e.weight);
    if let Some(first) = all.next() {
        if all.all(|w| w == first) {
            log::warn!("every native edge weight in the dataset equals {first}; filtrations have a single step");
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: u32,
    pub n_graphs: usize,
    pub n_std: usize,
    pub m: usize,
    pub d: usize,
    pub n_features: usize,
    pub weights: WeightConfig,
    pub descriptor: DescriptorConfig,
    pub classes: BTreeMap<String, ClassLabel>,
}

#[derive(Serialize, Deserialize)]
struct IndexFile {
    thresholds: Vec<f64>,
}

impl Transformed {
    pub fn d(&self) -> usize {
        self.descriptor.dim()
    }

    pub fn n_features(&self) -> usize {
        self.n_std * self.index.len() * self.d()
    }

    pub fn surfaces(&self) -> Result<Vec<FiltrationSurface>> {
        self.ids
            .par_iter()
            .zip(&self.classes)
            .zip(&self.curves)
            .map(|((id, &class), curves)| {
                FiltrationSurface::assemble(id.as_str(), class, curves, &self.index, self.n_std)
            })
            .collect()
    }

    pub fn feature_matrix(&self) -> Result<FeatureMatrix> {
        FeatureMatrix::from_surfaces(&self.surfaces()?)
    }

    pub fn manifest(&self) -> Manifest {
        Manifest {
            format_version: FORMAT_VERSION,
            n_graphs: self.ids.len(),
            n_std: self.n_std,
            m: self.index.len(),
            d: self.d(),
            n_features: self.n_features(),
            weights: self.weights,
            descriptor: self.descriptor.clone(),
            classes: self.ids.iter().cloned().zip(self.classes.iter().copied()).collect(),
        }
    }

    /// Writes `manifest.json`, `index.json` and one `surfaces/<id>.fsurf` per
    /// graph, removing stale surface files.
    pub fn save(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        let surf_dir = dir.join(SURFACES_DIR);
        fs::create_dir_all(&surf_dir).map_err(|e| Error::io(&surf_dir, e))?;
        write_json(&dir.join(MANIFEST_FILE), &self.manifest())?;
        write_json(
            &dir.join(INDEX_FILE),
            &IndexFile {
                thresholds: self.index.thresholds().to_vec(),
            },
        )?;
        let encoded = self
            .curves
            .par_iter()
            .map(|c| encode_curves(c))
            .collect::<Result<Vec<_>>>()?;
        for (id, bytes) in self.ids.iter().zip(encoded) {
            let path = surf_dir.join(format!("{id}.{FSURF_EXTENSION}"));
            fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
        }
        for entry in fs::read_dir(&surf_dir).map_err(|e| Error::io(&surf_dir, e))? {
            let path = entry.map_err(|e| Error::io(&surf_dir, e))?.path();
            let stale = path.extension().is_some_and(|x| x == FSURF_EXTENSION)
                && path
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .is_some_and(|s| self.ids.binary_search_by(|id| id.as_str().cmp(s)).is_err());
            if stale {
                fs::remove_file(&path).map_err(|e| Error::io(&path, e))?;
            }
        }
        Ok(())
    }

    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let manifest: Manifest = read_json(&dir.join(MANIFEST_FILE))?;
        if manifest.format_version != FORMAT_VERSION {
            return Err(Error::Format {
                what: "manifest",
                msg: format!("unsupported version {}", manifest.format_version),
            });
        }
        let index_file: IndexFile = read_json(&dir.join(INDEX_FILE))?;
        let index = SharedWeightIndex::from_thresholds(index_file.thresholds)?;
        if index.len() != manifest.m {
            return Err(Error::DimensionMismatch {
                expected: manifest.m,
                got: index.len(),
            });
        }
        let (ids, classes): (Vec<String>, Vec<ClassLabel>) = manifest.classes.into_iter().unzip();
        let curves = ids
            .par_iter()
            .map(|id| {
                let path = dir.join(SURFACES_DIR).join(format!("{id}.{FSURF_EXTENSION}"));
                let curves = decode_curves(&fs::read(&path).map_err(|e| Error::io(&path, e))?)?;
                match curves.iter().find(|c| c.dim() != manifest.d) {
                    Some(c) => Err(Error::DimensionMismatch {
                        expected: manifest.d,
                        got: c.dim(),
                    }),
                    None => Ok(curves),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Transformed {
            ids,
            classes,
            curves,
            index,
            n_std: manifest.n_std,
            weights: manifest.weights,
            descriptor: manifest.descriptor,
        })
    }
}

pub(crate) fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub(crate) fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

/// A trained forest together with everything needed to featurize new graphs.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelBundle {
    pub index: SharedWeightIndex,
    pub n_std: usize,
    pub weights: WeightConfig,
    pub descriptor: DescriptorConfig,
    pub forest: ForestModel,
}

#[derive(Serialize, Deserialize)]
struct BundleHeader {
    thresholds: Vec<f64>,
    n_std: usize,
    weights: WeightConfig,
    descriptor: DescriptorConfig,
}

const BUNDLE_MAGIC: &[u8; 8] = b"FSBUNDLE";

impl ModelBundle {
    pub fn new(transformed: &Transformed, forest: ForestModel) -> Self {
        ModelBundle {
            index: transformed.index.clone(),
            n_std: transformed.n_std,
            weights: transformed.weights,
            descriptor: transformed.descriptor.clone(),
            forest,
        }
    }

    /// Magic, u32 version, u32 header length, JSON header, forest bytes.
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let header = serde_json::to_vec(&BundleHeader {
            thresholds: self.index.thresholds().to_vec(),
            n_std: self.n_std,
            weights: self.weights,
            descriptor: self.descriptor.clone(),
        })?;
        let mut out = Vec::with_capacity(16 + header.len());
        out.extend_from_slice(BUNDLE_MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.extend_from_slice(&(header.len() as u32).to_le_bytes());
        out.extend_from_slice(&header);
        out.extend_from_slice(&self.forest.to_bytes());
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let corrupt = |msg: &str| Error::Format {
            what: "model bundle",
            msg: msg.into(),
        };
        if bytes.len() < 16 || &bytes[..8] != BUNDLE_MAGIC {
            return Err(corrupt("bad magic"));
        }
        if u32::from_le_bytes(bytes[8..12].try_into().expect("4 bytes")) != FORMAT_VERSION {
            return Err(corrupt("unsupported version"));
        }
        let len = u32::from_le_bytes(bytes[12..16].try_into().expect("4 bytes")) as usize;
        let header_bytes = bytes.get(16..16 + len).ok_or_else(|| corrupt("truncated header"))?;
        let header: BundleHeader = serde_json::from_slice(header_bytes)?;
        let forest = ForestModel::from_bytes(&bytes[16 + len..])?;
        let index = SharedWeightIndex::from_thresholds(header.thresholds)?;
        let expected = header.n_std * index.len() * header.descriptor.dim();
        if forest.n_features() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: forest.n_features(),
            });
        }
        Ok(ModelBundle {
            index,
            n_std: header.n_std,
            weights: header.weights,
            descriptor: header.descriptor,
            forest,
        })
    }

    /// Features of unseen graphs, projected onto the training index.
    pub fn features(&self, ds: &Dataset) -> Result<FeatureMatrix> {
        let surfaces = ds
            .graphs()
            .par_iter()
            .map(|dg| {
                let curves = graph_curves(dg, &self.weights, &self.descriptor)?;
                FiltrationSurface::assemble_projected(dg.id(), dg.class(), &curves, &self.index, self.n_std)
            })
            .collect::<Result<Vec<_>>>()?;
        FeatureMatrix::from_surfaces(&surfaces)
    }

    pub fn predict(&self, ds: &Dataset) -> Result<Vec<ClassLabel>> {
        self.forest.predict_all(&self.features(ds)?)
    }
}
