//! Wavefront OBJ export for sampled parametric surfaces.
//!
//! Vertices are written in the grid's row-major order with 17 significant
//! digits. Each grid cell becomes two triangles. A missing vertex (a point
//! mapped to infinity) is written as `v nan nan nan`, announced by a comment,
//! and every face touching it is dropped.

use std::io::{self, Write};

use crate::grid::Grid;
use crate::weierstrass::SurfacePoint;

/// Face and vertex counts of a written mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeshStats {
    pub vertices: usize,
    pub faces: usize,
    pub degenerate: usize,
}

pub fn write_obj<W: Write>(
    mut out: W,
    grid: &Grid,
    vertices: &[Option<SurfacePoint>],
    comment: &str,
) -> io::Result<MeshStats> {
    assert_eq!(vertices.len(), grid.len(), "vertex count must match the grid");
    for line in comment.lines() {
        writeln!(out, "# {line}")?;
    }
    writeln!(out, "# grid {} x {}", grid.nx, grid.ny)?;
    let mut degenerate = 0;
    for (k, v) in vertices.iter().enumerate() {
        match v {
            Some(p) => writeln!(out, "v {:.16e} {:.16e} {:.16e}", p.u1, p.u2, p.u3)?,
            None => {
                degenerate += 1;
                writeln!(out, "# degenerate vertex {}", k + 1)?;
                writeln!(out, "v nan nan nan")?;
            }
        }
    }
    let mut faces = 0;
    for tri in grid.triangles() {
        if tri.iter().all(|&k| vertices[k].is_some()) {
            writeln!(out, "f {} {} {}", tri[0] + 1, tri[1] + 1, tri[2] + 1)?;
            faces += 1;
        }
    }
    Ok(MeshStats {
        vertices: vertices.len(),
        faces,
        degenerate,
    })
}
