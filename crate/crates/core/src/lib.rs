//! Reconfiguration of vertex cover, odd cycle transversal and feedback
//! vertex set (and their independent set, induced bipartite and induced
//! forest duals) parameterized by treewidth and sequence length.

pub mod dp;
pub mod dp_ext;
pub mod graph;
pub mod hardness;
pub mod io;
pub mod nice;
pub mod oracle;
pub mod planar;
pub mod td;
pub mod witness;
