use std::path::Path;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::dofmap::{DofMap, SpaceKind};
use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::Real;

/// Coefficients of a discrete field in one of the spaces.
#[derive(Clone, Debug, PartialEq)]
pub struct DofVector<T: Real> {
    pub kind: SpaceKind,
    pub k: usize,
    pub values: DVector<T>,
}

#[derive(Serialize, Deserialize)]
struct Header {
    kind: SpaceKind,
    degree: usize,
    len: usize,
    format: String,
}

impl<T: Real> DofVector<T> {
    pub fn zeros(map: &DofMap) -> Self {
        Self { kind: map.kind, k: map.k, values: DVector::zeros(map.dim()) }
    }

    pub fn from_values(map: &DofMap, values: DVector<T>) -> Result<Self> {
        if values.len() != map.dim() {
            return Err(Error::InvalidArgument(format!("expected {} dofs, got {}", map.dim(), values.len())));
        }
        Ok(Self { kind: map.kind, k: map.k, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn restrict(&self, map: &DofMap, mesh: &Mesh<T>, c: usize) -> DVector<T> {
        let idx = map.local_dofs(mesh, c);
        DVector::from_iterator(idx.len(), idx.iter().map(|&i| self.values[i]))
    }

    /// Writes the local values of a cell back into the global vector.
    pub fn scatter(&mut self, map: &DofMap, mesh: &Mesh<T>, c: usize, local: &DVector<T>) {
        for (l, g) in map.local_dofs(mesh, c).into_iter().enumerate() {
            self.values[g] = local[l];
        }
    }

    /// Writes `<path>` (little-endian f64 array) and `<path>.json` (header).
    pub fn write_sidecar(&self, path: &Path) -> Result<()> {
        let mut bytes = Vec::with_capacity(8 * self.len());
        for x in self.values.iter() {
            bytes.extend_from_slice(&x.to_f64_lossy().to_le_bytes());
        }
        std::fs::write(path, bytes)?;
        let header = Header { kind: self.kind, degree: self.k, len: self.len(), format: "f64-le".into() };
        std::fs::write(sidecar(path), serde_json::to_string_pretty(&header)?)?;
        Ok(())
    }

    pub fn read_sidecar(path: &Path) -> Result<Self> {
        let header: Header = serde_json::from_slice(&std::fs::read(sidecar(path))?)?;
        let bytes = std::fs::read(path)?;
        if bytes.len() != 8 * header.len {
            return Err(Error::InvalidArgument(format!("{} holds {} bytes, expected {}", path.display(), bytes.len(), 8 * header.len)));
        }
        let values = DVector::from_iterator(
            header.len,
            bytes.chunks_exact(8).map(|c| T::of(f64::from_le_bytes(c.try_into().unwrap()))),
        );
        Ok(Self { kind: header.kind, k: header.degree, values })
    }
}

fn sidecar(path: &Path) -> std::path::PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    s.into()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate_cartesian;

    #[test]
    fn restrict_scatter_round_trip() {
        let m = generate_cartesian::<f64>(3).unwrap();
        let map = DofMap::new(&m, 1, SpaceKind::XGrad);
        let v = DofVector::from_values(&map, DVector::from_fn(map.dim(), |i, _| i as f64)).unwrap();
        let mut w = DofVector::zeros(&map);
        for c in 0..m.n_cells() {
            w.scatter(&map, &m, c, &v.restrict(&map, &m, c));
        }
        assert_eq!(v, w);
    }

    #[test]
    fn sidecar_round_trip() {
        let m = generate_cartesian::<f64>(2).unwrap();
        let map = DofMap::new(&m, 0, SpaceKind::XL2);
        let v = DofVector::from_values(&map, DVector::from_fn(map.dim(), |i, _| (i as f64).sin())).unwrap();
        let dir = std::env::temp_dir().join(format!("polystokes-dofvec-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("p.bin");
        v.write_sidecar(&p).unwrap();
        let r: DofVector<f64> = DofVector::read_sidecar(&p).unwrap();
        assert_eq!(r, v);
        std::fs::remove_dir_all(&dir).unwrap();
        assert!(DofVector::<f64>::from_values(&map, DVector::zeros(3)).is_err());
    }
}
