//! Unnormalized 2-D FFT over row-major grids (x fastest).

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub struct Fft2 {
    nx: usize,
    ny: usize,
    row_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    transposed: Vec<Complex64>,
}

impl Fft2 {
    pub fn new(nx: usize, ny: usize) -> Self {
        let mut planner = FftPlanner::new();
        let row_fwd = planner.plan_fft_forward(nx);
        let row_inv = planner.plan_fft_inverse(nx);
        let col_fwd = planner.plan_fft_forward(ny);
        let col_inv = planner.plan_fft_inverse(ny);
        let scratch_len = [&row_fwd, &row_inv, &col_fwd, &col_inv]
            .iter()
            .map(|f| f.get_inplace_scratch_len())
            .max()
            .unwrap_or(0);
        Fft2 {
            nx,
            ny,
            row_fwd,
            row_inv,
            col_fwd,
            col_inv,
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
            transposed: vec![Complex64::new(0.0, 0.0); nx * ny],
        }
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `ψ̂[k] = Σ_j ψ[j] e^{-2πi k·j/n}`.
    pub fn forward(&mut self, data: &mut [Complex64]) {
        let (row, col) = (self.row_fwd.clone(), self.col_fwd.clone());
        self.apply(data, &*row, &*col);
    }

    /// Inverse transform including the `1/(nx·ny)` factor.
    pub fn inverse(&mut self, data: &mut [Complex64]) {
        let (row, col) = (self.row_inv.clone(), self.col_inv.clone());
        self.apply(data, &*row, &*col);
        let scale = 1.0 / self.len() as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }

    fn apply(&mut self, data: &mut [Complex64], row: &dyn Fft<f64>, col: &dyn Fft<f64>) {
        assert_eq!(data.len(), self.len(), "buffer does not match the planned grid");
        let (nx, ny) = (self.nx, self.ny);
        row.process_with_scratch(data, &mut self.scratch);
        transpose(data, &mut self.transposed, nx, ny);
        col.process_with_scratch(&mut self.transposed, &mut self.scratch);
        transpose(&self.transposed, data, ny, nx);
    }
}

/// `dst[i·rows + j] = src[j·cols + i]` for a `rows × cols` source.
fn transpose(src: &[Complex64], dst: &mut [Complex64], cols: usize, rows: usize) {
    const BLOCK: usize = 16;
    for jb in (0..rows).step_by(BLOCK) {
        for ib in (0..cols).step_by(BLOCK) {
            for j in jb..(jb + BLOCK).min(rows) {
                for i in ib..(ib + BLOCK).min(cols) {
                    dst[i * rows + j] = src[j * cols + i];
                }
            }
        }
    }
}

/// Angular wavenumbers `2π m / (n dx)` with `m` in FFT order.
pub fn wavenumbers(n: usize, dx: f64) -> Vec<f64> {
    let base = 2.0 * std::f64::consts::PI / (n as f64 * dx);
    (0..n)
        .map(|i| {
            let m = if i < n / 2 { i as f64 } else { i as f64 - n as f64 };
            base * m
        })
        .collect()
}
