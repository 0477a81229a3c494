use std::io::{Read, Write};

use faer::linalg::solvers::Solve;
use faer::{Mat, MatRef};
use rayon::prelude::*;

use super::kernel::triangle_inverse_distance;
use super::SurfaceDensity;
use crate::geometry::TriMesh;
use crate::quadrature::triangle_points;
use crate::{Error, Result, Vec3};

/// Relative residual every density solve must reach.
pub const SOLVE_TOLERANCE: f64 = 1e-10;

const DUMP_MAGIC: &[u8; 8] = b"SLP1\0\0\0\0";

/// Pairs closer than this multiple of the larger triangle diameter use the
/// near-field rule.
pub const NEAR_FIELD_FACTOR: f64 = 2.0;

/// Which collocation pairs `(i, j)` count as near.
pub(crate) fn is_near(mesh: &TriMesh, diam: &[f64], i: usize, j: usize) -> bool {
    let d = (mesh.centroids()[i] - mesh.centroids()[j]).norm();
    d <= NEAR_FIELD_FACTOR * diam[i].max(diam[j])
}

/// Collocation matrix of `μ ↦ ∫ μ(p)/|p − r| dσ(p)` with piecewise-constant
/// densities.
///
/// Far pairs use the one-point rule `Aⱼ/|cⱼ − cᵢ|`. For near pairs and the
/// diagonal, the exact panel integral `∫_{Tⱼ} dσ/|p − x|` is averaged over
/// the 3-point rule on `Tᵢ`, which agrees with centroid collocation for
/// data linear on `Tᵢ`. Near pairs are then averaged so that
/// `Aᵢ Sᵢⱼ = Aⱼ Sⱼᵢ`; the discrete operator thereby keeps the reciprocity of
/// the continuous one exactly.
#[derive(Debug, Clone)]
pub struct SingleLayerOperator<'m> {
    mesh: &'m TriMesh,
    matrix: Mat<f64>,
}

impl<'m> SingleLayerOperator<'m> {
    pub fn assemble(mesh: &'m TriMesh) -> Self {
        let n = mesh.len();
        let diam: Vec<f64> = (0..n).map(|i| mesh.triangle_diameter(i)).collect();
        let centroids = mesh.centroids();
        let areas = mesh.areas();

        // Column-major storage; column j integrates over triangle j.
        let mut data = vec![0.0; n * n];
        let rule: Vec<[Vec3; 3]> = (0..n).map(|i| triangle_points(&mesh.corners(i))).collect();
        data.par_chunks_mut(n).enumerate().for_each(|(j, column)| {
            let corners = mesh.corners(j);
            let normal = &mesh.normals()[j];
            for (i, entry) in column.iter_mut().enumerate() {
                *entry = if i == j || is_near(mesh, &diam, i, j) {
                    rule[i].iter().map(|x| triangle_inverse_distance(&corners, normal, x)).sum::<f64>() / 3.0
                } else {
                    areas[j] / (centroids[j] - centroids[i]).norm()
                };
            }
        });

        // Area-weighted symmetrisation of the near field.
        let near_pairs: Vec<(usize, usize)> = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                let diam = &diam;
                (i + 1..n).filter(move |&j| is_near(mesh, diam, i, j)).map(move |j| (i, j))
            })
            .collect();
        for (i, j) in near_pairs {
            let (sij, sji) = (data[j * n + i], data[i * n + j]);
            let mean = 0.5 * (areas[i] * sij + areas[j] * sji);
            data[j * n + i] = mean / areas[i];
            data[i * n + j] = mean / areas[j];
        }

        SingleLayerOperator {
            mesh,
            matrix: MatRef::from_column_major_slice(&data, n, n).to_owned(),
        }
    }

    pub fn mesh(&self) -> &'m TriMesh {
        self.mesh
    }

    pub fn len(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)]
    }

    pub fn matrix(&self) -> MatRef<'_, f64> {
        self.matrix.as_ref()
    }

    /// `S·μ`.
    pub fn apply(&self, density: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .into_par_iter()
            .map(|i| (0..n).map(|j| self.matrix[(i, j)] * density[j]).sum())
            .collect()
    }

    /// `max|Sᵢⱼ − Sⱼᵢ| / max|S|`.
    pub fn asymmetry(&self) -> f64 {
        let n = self.len();
        let mut diff = 0.0f64;
        let mut scale = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                diff = diff.max((self.matrix[(i, j)] - self.matrix[(j, i)]).abs());
                scale = scale.max(self.matrix[(i, j)].abs());
            }
        }
        diff / scale
    }

    /// LU factorisation with partial pivoting.
    pub fn factor(&self) -> Result<FactoredOperator<'_, 'm>> {
        let lu = self.matrix.partial_piv_lu();
        let diag: Vec<f64> = (0..self.len()).map(|i| lu.U()[(i, i)].abs()).collect();
        let max = diag.iter().cloned().fold(0.0, f64::max);
        let min = diag.iter().cloned().fold(f64::INFINITY, f64::min);
        let condition = if min > 0.0 { max / min } else { f64::INFINITY };
        if !condition.is_finite() || condition > 1e14 {
            return Err(Error::Singular { condition });
        }
        Ok(FactoredOperator {
            operator: self,
            lu,
            condition,
        })
    }

    /// Writes the binary dump: 8-byte magic `SLP1\0\0\0\0`, `n` as u64,
    /// then `n²` f64 values row-major, all little-endian.
    pub fn write_binary(&self, mut out: impl Write) -> Result<()> {
        let n = self.len();
        out.write_all(DUMP_MAGIC)?;
        out.write_all(&(n as u64).to_le_bytes())?;
        let mut row = Vec::with_capacity(8 * n);
        for i in 0..n {
            row.clear();
            for j in 0..n {
                row.extend_from_slice(&self.matrix[(i, j)].to_le_bytes());
            }
            out.write_all(&row)?;
        }
        Ok(())
    }
}

/// Reads a dump written by [`SingleLayerOperator::write_binary`] as a dense
/// row-major matrix.
pub fn read_operator_dump(mut input: impl Read) -> Result<(usize, Vec<f64>)> {
    let mut header = [0u8; 16];
    input.read_exact(&mut header)?;
    if &header[..8] != DUMP_MAGIC {
        return Err(Error::Parse {
            line: 0,
            message: "missing SLP1 magic".into(),
        });
    }
    let n = u64::from_le_bytes(header[8..].try_into().expect("8 bytes")) as usize;
    let mut bytes = vec![0u8; 8 * n * n];
    input.read_exact(&mut bytes)?;
    let values = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    Ok((n, values))
}

/// A factorised operator ready for repeated solves.
pub struct FactoredOperator<'s, 'm> {
    operator: &'s SingleLayerOperator<'m>,
    lu: faer::linalg::solvers::PartialPivLu<f64>,
    condition: f64,
}

impl<'s, 'm> FactoredOperator<'s, 'm> {
    pub fn operator(&self) -> &'s SingleLayerOperator<'m> {
        self.operator
    }

    pub fn mesh(&self) -> &'m TriMesh {
        self.operator.mesh
    }

    /// Ratio of the extreme pivots of `U`; a cheap conditioning indicator.
    pub fn condition_estimate(&self) -> f64 {
        self.condition
    }

    /// Solves `S μ = g` and checks the relative residual.
    pub fn solve(&self, data: &[f64]) -> Result<SurfaceDensity> {
        let n = self.operator.len();
        if data.len() != n {
            return Err(Error::invalid("data", format!("expected {n} values, got {}", data.len())));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("data", "non-finite boundary value"));
        }
        let scale = data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return Ok(SurfaceDensity::new(vec![0.0; n]));
        }
        let rhs = Mat::from_fn(n, 1, |i, _| data[i]);
        let x = self.lu.solve(&rhs);
        let values: Vec<f64> = (0..n).map(|i| x[(i, 0)]).collect();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Singular {
                condition: self.condition,
            });
        }
        let applied = self.operator.apply(&values);
        let residual = applied
            .iter()
            .zip(data)
            .fold(0.0f64, |m, (a, g)| m.max((a - g).abs()))
            / scale;
        if residual > SOLVE_TOLERANCE {
            return Err(Error::Residual {
                residual,
                tolerance: SOLVE_TOLERANCE,
            });
        }
        Ok(SurfaceDensity::new(values))
    }
}

/// `solve_density` in operation form.
pub fn solve_density(factored: &FactoredOperator<'_, '_>, data: &[f64]) -> Result<SurfaceDensity> {
    factored.solve(data)
}
