//! Matrix to `Phi = phi(A)`: numerical range, conformal map and the mapped
//! matrix, with the route decisions recorded.

use serde::Serialize;

use crate::conformal_map::{map_with_override, ConformalMap, MapKind, MapOverride};
use crate::error::{CrxError, Result};
use crate::linalg::{spectral_radius, CMat, C64};
use crate::matrix_functions::{MatrixFunctionResult, Route};
use crate::numerical_range::{range_report, RangeReport};

/// Largest node count tried when the numeric map does not converge.
pub const MAX_NODES: usize = 1024;

#[derive(Debug, Clone)]
pub struct Prepared {
    pub a: CMat,
    /// `None` when a map override is used and the range is degenerate.
    pub range: Option<RangeReport>,
    pub map: ConformalMap,
    pub phi: MatrixFunctionResult,
    pub nodes: usize,
}

/// Route metadata written next to every result.
#[derive(Debug, Clone, Serialize)]
pub struct PipelineMeta {
    pub map_kind: MapKind,
    pub map_center: C64,
    pub map_residual: f64,
    pub nodes: usize,
    pub phi_route: Route,
    pub phi_spectral_radius: f64,
    pub numerical_radius: Option<f64>,
    pub interior_margin: Option<f64>,
}

impl Prepared {
    pub fn phi(&self) -> &CMat {
        &self.phi.value
    }

    pub fn meta(&self) -> PipelineMeta {
        PipelineMeta {
            map_kind: self.map.kind,
            map_center: self.map.center,
            map_residual: self.map.residual,
            nodes: self.nodes,
            phi_route: self.phi.route,
            phi_spectral_radius: spectral_radius(&self.phi.value),
            numerical_radius: self.range.as_ref().map(|r| r.radius),
            interior_margin: self.range.as_ref().map(|r| r.interior_margin),
        }
    }
}

/// Builds `W(A)`, the map onto the disk centred at `tr(A)/n`, and `phi(A)`.
/// A numeric map that fails to converge is rebuilt with 2m and 4m nodes (up
/// to 1024).
pub fn prepare(a: &CMat, nodes: usize, ov: MapOverride) -> Result<Prepared> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return Err(CrxError::Input("matrix must be square and nonempty".into()));
    }
    let center = a.trace() / n as f64;
    let mut m = nodes;
    loop {
        let range = match range_report(a, m) {
            Ok(r) => Some(r),
            Err(e) if ov == MapOverride::Auto => return Err(e),
            Err(_) => None,
        };
        if ov == MapOverride::Auto {
            let r = range.as_ref().expect("range exists in auto mode");
            if !r.spectrum_interior {
                return Err(CrxError::SpectrumOnBoundary(r.interior_margin));
            }
        }
        let boundary = match &range {
            Some(r) => r.boundary.clone(),
            None => crate::numerical_range::DomainBoundary::circle(C64::from(0.0), 1.0, m),
        };
        let built = map_with_override(ov, &boundary, center).and_then(|map| {
            let phi = map.apply_to_matrix(a)?;
            Ok((map, phi))
        });
        match built {
            Ok((map, phi)) => return Ok(Prepared { a: a.clone(), range, map, phi, nodes: m }),
            Err(CrxError::MapNonConvergence(r)) => {
                if m * 2 > MAX_NODES || m >= 4 * nodes {
                    return Err(CrxError::MapNonConvergence(r));
                }
                m *= 2;
            }
            Err(e) => return Err(e),
        }
    }
}
