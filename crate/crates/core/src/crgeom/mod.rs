//! Pseudohermitian geometry of the boundary: frames, Webster curvature and
//! torsion from the structure equation, covariant derivatives, and boundary
//! integration.

mod covariant;
mod forms;
mod frame;
mod mesh;
mod webster;

pub use covariant::{Geometry, ScalarDerivs, TensorDerivs};
pub use forms::{conj_vector, Form1, Form2, Vector};
pub use frame::{frame_at, frame_at_order, frame_from_jet, levi_pair, BoundaryFrame};
pub use mesh::{
    boundary_point_radial, build_mesh, check_pseudoconvex, hopf_direction, integrate_boundary, radial_root,
    BoundaryMesh, MeshNode,
};
pub use webster::{webster_at, webster_from_frame, webster_from_jet, DerivedTable, PseudohermitianPointData, STRUCTURE_TOL};

use crate::dsl::{eval_expression_jet, DomainSpec, ExprNode};
use crate::error::{CrError, Result};

/// Per-node invariants with a truncated frame kept for differentiating external fields.
#[derive(Clone, Debug)]
pub struct PointRecord {
    pub scal: f64,
    pub a11: crate::jets::C64,
    pub residual: f64,
    pub derived: DerivedTable,
    pub geometry: Geometry,
}

/// Runs the curvature pipeline at every mesh node.
pub fn evaluate_mesh(spec: &DomainSpec, mesh: &BoundaryMesh) -> Result<Vec<PointRecord>> {
    if spec.jet_order < 6 {
        return Err(CrError::Truncation(format!(
            "derivatives of Scal and A need jet order 6, got {}",
            spec.jet_order
        )));
    }
    mesh.nodes
        .iter()
        .map(|n| {
            let d = webster_at(spec, n.p)?;
            Ok(PointRecord {
                scal: d.scal,
                a11: d.a11,
                residual: d.residual,
                derived: d.derived.expect("order 6 yields the derived table"),
                geometry: d.geometry.light(),
            })
        })
        .collect()
}

/// Covariant derivatives of a field given as an expression, at one node.
pub fn field_derivs(geometry: &Geometry, field: &ExprNode, p: (crate::jets::C64, crate::jets::C64)) -> Result<ScalarDerivs> {
    let f = eval_expression_jet(field, p, 3)?;
    geometry.scalar_derivs(&f)
}
