//! Holographic entanglement measures computed from minimal surfaces in
//! planar asymptotically-AdS bulk geometries.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cache;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod measures;
pub mod minimal_surface;
pub mod quadrature;
pub mod rgflow;
pub mod roots;
