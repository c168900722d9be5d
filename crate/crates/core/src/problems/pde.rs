use std::f64::consts::PI;

use rand::Rng;

use super::{derived_rng, GeneratedProblem};
use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

const MIN_GRID: usize = 8;
/// Weak-direction diffusivity of the anisotropic tensor.
const ANISOTROPY: f64 = 1e-4;
/// Diffusion coefficient of the advection-diffusion operator.
const ADV_EPS: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Zero-flux: couplings to cells outside the domain are dropped entirely.
    Neumann,
    /// Zero value: couplings to ghost cells are dropped but kept on the diagonal.
    Dirichlet,
}

/// Cell-centred uniform grid on the unit square or cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    pub dim: usize,
    pub n: usize,
}

impl Grid {
    pub fn new(dim: usize, n: usize) -> Self {
        assert!(dim == 2 || dim == 3, "grid dimension must be 2 or 3");
        Self { dim, n }
    }

    pub fn cells(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Row-major index with x varying fastest.
    pub fn index(&self, c: [usize; 3]) -> usize {
        c[0] + self.n * (c[1] + self.n * c[2])
    }

    pub fn coords(&self, idx: usize) -> [usize; 3] {
        let n = self.n;
        [idx % n, (idx / n) % n, idx / (n * n)]
    }

    pub fn centre(&self, c: [usize; 3]) -> [f64; 3] {
        let h = self.h();
        let mut x = [0.0; 3];
        for d in 0..self.dim {
            x[d] = (c[d] as f64 + 0.5) * h;
        }
        x
    }

    /// Cell at integer offset `off` from `c`, if inside the domain.
    pub fn offset(&self, c: [usize; 3], off: [i64; 3]) -> Option<[usize; 3]> {
        let mut out = [0usize; 3];
        for d in 0..self.dim {
            let v = c[d] as i64 + off[d];
            if v < 0 || v >= self.n as i64 {
                return None;
            }
            out[d] = v as usize;
        }
        Some(out)
    }
}

fn midpoint(x: [f64; 3], off: [i64; 3], h: f64) -> [f64; 3] {
    [
        x[0] + 0.5 * h * off[0] as f64,
        x[1] + 0.5 * h * off[1] as f64,
        x[2] + 0.5 * h * off[2] as f64,
    ]
}

fn unit(axis: usize) -> [i64; 3] {
    let mut e = [0i64; 3];
    e[axis] = 1;
    e
}

/// Finite-volume discretisation of `−∇·(σ∇u)` with face fluxes for the
/// diagonal tensor entries and centred cross stencils for the mixed ones.
///
/// Coefficients are sampled at the midpoint between the two coupled cells, so
/// the result is symmetric; the diagonal is minus the sum of all couplings.
pub fn diffusion_operator(
    grid: Grid,
    boundary: Boundary,
    sigma: impl Fn([f64; 3]) -> [[f64; 3]; 3],
) -> SparseMatrix {
    let h = grid.h();
    let h2 = h * h;
    let mut t = Vec::with_capacity(grid.cells() * if grid.dim == 2 { 9 } else { 19 });
    for idx in 0..grid.cells() {
        let c = grid.coords(idx);
        let x = grid.centre(c);
        let mut diag = 0.0;
        let mut couple = |off: [i64; 3], value: f64, t: &mut Vec<(usize, usize, f64)>| match grid
            .offset(c, off)
        {
            _ if value == 0.0 => {}
            Some(q) => {
                t.push((idx, grid.index(q), value));
                diag -= value;
            }
            None if boundary == Boundary::Dirichlet => diag -= value,
            None => {}
        };
        for d in 0..grid.dim {
            for s in [-1i64, 1] {
                let off = unit(d).map(|v| v * s);
                let k = sigma(midpoint(x, off, h));
                couple(off, -k[d][d] / h2, &mut t);
            }
        }
        for d in 0..grid.dim {
            for e in d + 1..grid.dim {
                for sd in [-1i64, 1] {
                    for se in [-1i64, 1] {
                        let mut off = [0i64; 3];
                        off[d] = sd;
                        off[e] = se;
                        let k = sigma(midpoint(x, off, h));
                        couple(off, -(sd * se) as f64 * k[d][e] / (2.0 * h2), &mut t);
                    }
                }
            }
        }
        t.push((idx, idx, diag));
    }
    SparseMatrix::from_triplets(grid.cells(), grid.cells(), &t).expect("grid indices are in range")
}

/// `−ε∇²u + v·∇u` with zero Dirichlet data, centred diffusion and first-order
/// upwind advection evaluated at cell centres.
///
/// The diagonal is rounded so that every row is weakly diagonally dominant in
/// the stored single-precision values.
pub fn advection_diffusion_operator(
    grid: Grid,
    eps: f64,
    velocity: impl Fn([f64; 3]) -> [f64; 3],
) -> SparseMatrix {
    let h = grid.h();
    let diff = eps / (h * h);
    let mut t = Vec::with_capacity(grid.cells() * (2 * grid.dim + 1));
    for idx in 0..grid.cells() {
        let c = grid.coords(idx);
        let v = velocity(grid.centre(c));
        let mut diag = 2.0 * grid.dim as f64 * diff;
        for d in 0..grid.dim {
            let upwind = if v[d] > 0.0 { -1i64 } else { 1 };
            for s in [-1i64, 1] {
                let mut value = -diff;
                if s == upwind && v[d] != 0.0 {
                    value -= v[d].abs() / h;
                    diag += v[d].abs() / h;
                }
                if let Some(q) = grid.offset(c, unit(d).map(|u| u * s)) {
                    t.push((idx, grid.index(q), value));
                }
            }
        }
        t.push((idx, idx, diag));
    }
    let a = SparseMatrix::from_triplets(grid.cells(), grid.cells(), &t)
        .expect("grid indices are in range");
    round_diagonal_up_to_dominance(a)
}

fn round_diagonal_up_to_dominance(a: SparseMatrix) -> SparseMatrix {
    let mut values = a.values().to_vec();
    for i in 0..a.n_rows() {
        let off: f64 = a
            .iter_row(i)
            .filter(|&(j, _)| j != i)
            .map(|(_, v)| (v as f64).abs())
            .sum();
        if let Some(p) = a.position(i, i) {
            let d = values[p];
            if (d.abs() as f64) < off {
                let mut bumped = off as f32;
                if (bumped as f64) < off {
                    bumped = bumped.next_up();
                }
                values[p] = bumped.copysign(d);
            }
        }
    }
    a.with_values(values).expect("same pattern")
}

/// Unscaled 5-point Dirichlet Laplacian on an `m × m` grid (4 on the diagonal).
pub fn poisson_2d(m: usize) -> SparseMatrix {
    let grid = Grid::new(2, m);
    let mut t = Vec::with_capacity(5 * m * m);
    for idx in 0..grid.cells() {
        let c = grid.coords(idx);
        for off in [[0, -1, 0], [-1, 0, 0], [1, 0, 0], [0, 1, 0]] {
            if let Some(q) = grid.offset(c, off) {
                t.push((idx, grid.index(q), -1.0));
            }
        }
        t.push((idx, idx, 4.0));
    }
    SparseMatrix::from_triplets(m * m, m * m, &t).expect("grid indices are in range")
}

/// Tensor `κ I + (1 − κ) d dᵀ` with strong direction `d`.
fn directional_tensor(d: [f64; 3]) -> [[f64; 3]; 3] {
    let mut s = [[0.0; 3]; 3];
    for (i, row) in s.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = (1.0 - ANISOTROPY) * d[i] * d[j] + if i == j { ANISOTROPY } else { 0.0 };
        }
    }
    s
}

fn normalized(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if n == 0.0 {
        [0.0; 3]
    } else {
        v.map(|c| c / n)
    }
}

fn check_grid(grid_n: usize, dim: usize) -> Result<()> {
    if dim != 2 && dim != 3 {
        return Err(Error::Usage(format!(
            "PDE problems support dim 2 or 3, got {dim}"
        )));
    }
    if grid_n < MIN_GRID {
        return Err(Error::Usage(format!(
            "grid size must be at least {MIN_GRID}, got {grid_n}"
        )));
    }
    Ok(())
}

/// Angle sweep `θ(y) = (θ0 + (θ1 − θ0) y) π` with `θ0 ~ U[0, 2)` and `θ1 − θ0 ~ U[−spread, spread]`.
fn sample_angles(seed: u64, spread: f64) -> (f64, f64) {
    let mut rng = derived_rng(seed, 0xa1);
    let theta0 = rng.random_range(0.0..2.0);
    let delta = rng.random_range(-spread..=spread);
    (theta0, theta0 + delta)
}

fn angle_at(theta0: f64, theta1: f64, y: f64) -> f64 {
    (theta0 + (theta1 - theta0) * y) * PI
}

/// Rotated anisotropic diffusion. In 2D the strong direction turns linearly
/// in `y` with a seeded angle range and zero-flux boundaries; in 3D it follows
/// a fixed smooth field with zero Dirichlet data.
pub fn gen_aniso_diffusion(dim: usize, grid_n: usize, seed: u64) -> Result<GeneratedProblem> {
    check_grid(grid_n, dim)?;
    let grid = Grid::new(dim, grid_n);
    if dim == 2 {
        let (theta0, theta1) = sample_angles(seed, 8.0 / 9.0);
        let a = diffusion_operator(grid, Boundary::Neumann, |x| {
            let th = angle_at(theta0, theta1, x[1]);
            directional_tensor([th.cos(), th.sin(), 0.0])
        });
        let mut p = GeneratedProblem::new(a, "aniso2d", seed);
        p.meta
            .push("grid_n", grid_n)
            .push("theta0", theta0)
            .push("theta1", theta1);
        Ok(p)
    } else {
        let a = diffusion_operator(grid, Boundary::Dirichlet, |[x, y, z]| {
            directional_tensor(normalized([
                x * (1.0 - y) * (2.0 - z),
                y * (1.0 - z) * (2.0 - x),
                z * (1.0 - x) * (2.0 - y),
            ]))
        });
        let mut p = GeneratedProblem::new(a, "aniso3d", seed);
        p.meta.push("grid_n", grid_n);
        Ok(p)
    }
}

/// Advection-dominated transport with zero Dirichlet data. The 2D velocity is
/// a unit vector turning linearly in `y`; the 3D velocity is a fixed field.
pub fn gen_adv_diffusion(dim: usize, grid_n: usize, seed: u64) -> Result<GeneratedProblem> {
    check_grid(grid_n, dim)?;
    let grid = Grid::new(dim, grid_n);
    if dim == 2 {
        let (theta0, theta1) = sample_angles(seed, 1.0 / 6.0);
        let a = advection_diffusion_operator(grid, ADV_EPS, |x| {
            let th = angle_at(theta0, theta1, x[1]);
            [th.cos(), th.sin(), 0.0]
        });
        let mut p = GeneratedProblem::new(a, "advdiff2d", seed);
        p.meta
            .push("grid_n", grid_n)
            .push("theta0", theta0)
            .push("theta1", theta1)
            .push("eps", ADV_EPS);
        Ok(p)
    } else {
        let a = advection_diffusion_operator(grid, ADV_EPS, |[x, y, z]| {
            [
                x * (1.0 - 2.0 * y) * (1.0 - z),
                y * (1.0 - 2.0 * z) * (1.0 - x),
                z * (1.0 - 2.0 * x) * (1.0 - y),
            ]
        });
        let mut p = GeneratedProblem::new(a, "advdiff3d", seed);
        p.meta.push("grid_n", grid_n).push("eps", ADV_EPS);
        Ok(p)
    }
}
