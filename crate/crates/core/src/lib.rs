//! Filtration surfaces for classifying discrete-time dynamic graphs.
//!
//! Every snapshot of a dynamic graph gets edge weights, an edge filtration
//! and a filtration curve (label histogram or component count per
//! threshold). Curves of a whole dataset are standardized over one shared
//! weight index, stacked in time into a surface, flattened and fed to a
//! random forest.
//!
//! ```
//! use filtsurf::prelude::*;
//!
//! let ds = generate_synthetic(&SynthConfig { n_graphs: 4, timesteps: 2, ..Default::default() }).unwrap();
//! let desc = descriptor_for(&ds, DescriptorKind::LabelHistogram, false).unwrap();
//! let t = transform_dataset(&ds, &WeightConfig::default(), &desc).unwrap();
//! assert_eq!(t.feature_matrix().unwrap().n_samples(), 4);
//! ```

pub mod bench;
pub mod classify;
pub mod cli;
mod error;
pub mod filtration;
pub mod graph;
pub mod pipeline;
pub mod seed;
pub mod surface;
pub mod synth;
pub mod weights;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::classify::{cross_validate, train, CvReport, ForestConfig, ForestModel};
    pub use crate::filtration::{build_filtration, evaluate_curve, DescriptorConfig, DescriptorKind, FiltrationCurve};
    pub use crate::graph::{load_dataset, save_dataset, Dataset, DynamicGraph, Edge, GraphSnapshot};
    pub use crate::pipeline::{descriptor_for, graph_curves, transform_dataset, ModelBundle, Transformed};
    pub use crate::surface::{FeatureMatrix, FiltrationSurface, SharedWeightIndex};
    pub use crate::synth::{generate_synthetic, si_dataset, SiTask, SynthConfig, TaskParams};
    pub use crate::weights::{weigh_edges, WeightConfig, WeightKind};
    pub use crate::{Error, Result};
}
