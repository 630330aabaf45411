//! JSON mesh format: `{"vertices": [[x, y], ...], "cells": [[v0, v1, ...], ...]}`.

use std::fmt::Write as _;

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use super::Mesh;
use crate::error::{Error, Result};
use crate::Real;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeshFile {
    pub vertices: Vec<[f64; 2]>,
    pub cells: Vec<Vec<usize>>,
}

pub fn load_mesh<T: Real>(bytes: &[u8]) -> Result<Mesh<T>> {
    let file: MeshFile = serde_json::from_slice(bytes).map_err(|e| Error::MeshFormat(e.to_string()))?;
    if file.vertices.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::MeshFormat("non-finite coordinate".into()));
    }
    let verts = file.vertices.iter().map(|p| Vector2::new(T::of(p[0]), T::of(p[1]))).collect();
    Mesh::from_cells(verts, file.cells)
}

/// Formats a float with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

impl<T: Real> Mesh<T> {
    /// Canonical JSON: vertices and cells in stored order, 17 significant digits.
    pub fn to_json(&self) -> String {
        let mut s = String::from("{\n  \"vertices\": [\n");
        let nv = self.vertices().len();
        for (i, p) in self.vertices().iter().enumerate() {
            let sep = if i + 1 < nv { "," } else { "" };
            let _ = writeln!(s, "    [{}, {}]{sep}", fmt17(p.x.to_f64_lossy()), fmt17(p.y.to_f64_lossy()));
        }
        s.push_str("  ],\n  \"cells\": [\n");
        let nc = self.n_cells();
        for (i, c) in self.cells().iter().enumerate() {
            let sep = if i + 1 < nc { "," } else { "" };
            let ids: Vec<String> = c.vertices.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(s, "    [{}]{sep}", ids.join(", "));
        }
        s.push_str("  ]\n}\n");
        s
    }
}
