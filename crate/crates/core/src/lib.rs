//! Exact Borcherds-method computations for hyperbolic lattices embedded in the
//! even unimodular lattice II_{1,25}, with the 16-nodal Kummer and 15-nodal
//! quartic K3 lattices as built-in fixtures.

pub mod autgrp;
pub mod chambers;
pub mod enumerate;
pub mod exactalg;
pub mod fixtures;
pub mod golden;
pub mod k3;
pub mod lattice;
pub mod leech;
pub mod roots;
