//! Freeform rosette patterns: a triangulated complex is realised as a circle
//! packing, the packing is turned into a patch of cyclic and filler polygons,
//! and each polygon receives a star or polygons-in-contact motif.
//!
//! The geometric modules are generic over [`scalar::Scalar`]; the aliases
//! below fix the scalar to `f64`.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod complex;
pub mod geom;
pub mod motif;
pub mod packing;
pub mod patch;
pub mod pipeline;
pub mod render;
pub mod scalar;

pub type Point = geom::Point2<f64>;
pub type Segment = geom::Segment<f64>;
pub type Circle = packing::Circle<f64>;
pub type Packing = packing::Packing<f64>;
pub type Patch = patch::Patch<f64>;
pub type PatchPolygon = patch::PatchPolygon<f64>;
pub type Design = motif::Design<f64>;
