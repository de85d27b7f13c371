//! Spectral graph analysis around the second Laplacian eigenspace: nodal
//! domains, tightness of eigenfunctions, eigenspace mappings and the
//! multiplicity bound in terms of surface genus.

pub mod campaign;
pub mod eigen;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod mapping;
pub mod morse;
pub mod nodal;
pub mod report;
pub mod spectral;
pub mod surface;
mod unionfind;

pub use error::{Error, Result};
pub use graph::{
    cartesian_product, complete, cycle, hamming, path, product_all, triangular_torus, Edge, FamilySpec, FamilyTag,
    Graph,
};
pub use mapping::{
    build_mapping, check_two_piece, contract_pathological, export_mesh, heawood, verify_bound, BoundCertificate,
    GenusSource, Mapping, MappingTolerances,
};
pub use nodal::{
    check_courant, check_level_connectivity, is_tight_function, is_tight_space, sign_graphs, SamplingConfig, SignMode,
    TightnessResult,
};
pub use spectral::{
    build_operator, eigendecompose, group_eigenvalues, lambda2_eigenspace, laplacian_lambda2, Eigenspace, Spectrum,
};
pub use surface::{contract_surface, trace_embedding, CombinatorialSurface, Rotation};
