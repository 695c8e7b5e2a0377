//! Finite-difference stencils and the small linear algebra they need.
//!
//! The public derivative operators are the second-order stencils the rest of
//! the crate's convergence tests are calibrated against.  Energy-density
//! fields and eigenvector extraction need more accuracy at the same grids,
//! so fourth-order variants live here as crate internals; both families get
//! their boundary closures from the same weight generator.

use crate::grid::GridKind;
use crate::wavefunction::Wavefunction;
use crate::{Error, Result};
use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

/// Finite-difference weights at evaluation point `z` over nodes `x`, for all
/// derivative orders `0..=m` (Fornberg's recurrence).  `w[k][j]` weights
/// sample `j` in the `k`-th derivative.
pub fn fd_weights(z: f64, x: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    assert!(n > m, "need more nodes than the derivative order");
    let mut c = vec![vec![0.0; n]; m + 1];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

fn combine<T>(samples: &[T], offset: usize, weights: &[f64]) -> T
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    let mut acc = samples[offset] * weights[0];
    for (k, &w) in weights.iter().enumerate().skip(1) {
        acc = acc + samples[offset + k] * w;
    }
    acc
}

/// First derivative: centered second-order stencil in the interior,
/// one-sided second-order at the two boundary nodes.
pub fn gradient(psi: &Wavefunction) -> Vec<Complex64> {
    let f = psi.values();
    let h = psi.grid().h();
    let n = f.len();
    let mut out = Vec::with_capacity(n);
    out.push((f[0] * -3.0 + f[1] * 4.0 - f[2]) * (0.5 / h));
    for i in 1..n - 1 {
        out.push((f[i + 1] - f[i - 1]) * (0.5 / h));
    }
    out.push((f[n - 1] * 3.0 - f[n - 2] * 4.0 + f[n - 3]) * (0.5 / h));
    out
}

/// Second derivative: centered three-point stencil in the interior,
/// one-sided second-order at the two boundary nodes.
pub fn second_derivative(psi: &Wavefunction) -> Vec<Complex64> {
    let f = psi.values();
    let h = psi.grid().h();
    let n = f.len();
    let h2 = h * h;
    let mut out = Vec::with_capacity(n);
    out.push((f[0] * 2.0 - f[1] * 5.0 + f[2] * 4.0 - f[3]) / h2);
    for i in 1..n - 1 {
        out.push((f[i + 1] - f[i] * 2.0 + f[i - 1]) / h2);
    }
    out.push((f[n - 1] * 2.0 - f[n - 2] * 5.0 + f[n - 3] * 4.0 - f[n - 4]) / h2);
    out
}

/// Radial Laplacian of an s-wave sample set: `psi'' + 2 psi'/r`, evaluated
/// with the public second-order stencils.
pub fn radial_laplacian(psi: &Wavefunction) -> Result<Vec<Complex64>> {
    if psi.grid().kind() != GridKind::Radial {
        return Err(Error::Domain("radial Laplacian requires a radial grid".into()));
    }
    let d1 = gradient(psi);
    let d2 = second_derivative(psi);
    Ok(psi
        .grid()
        .nodes()
        .iter()
        .zip(d1.iter().zip(&d2))
        .map(|(&r, (g, s))| s + g * (2.0 / r))
        .collect())
}

/// Fourth-order first derivative: five-point interior stencil, one-sided
/// fourth-order closures on the outermost two nodes at each end.
pub(crate) fn gradient4<T>(f: &[T], h: f64) -> Vec<T>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    let n = f.len();
    assert!(n >= 6, "fourth-order stencils need at least 6 nodes");
    let xs: Vec<f64> = (0..6).map(|i| i as f64 * h).collect();
    let w0 = fd_weights(0.0, &xs, 1)[1].clone();
    let w1 = fd_weights(h, &xs, 1)[1].clone();
    let wm2 = fd_weights(4.0 * h, &xs, 1)[1].clone();
    let wm1 = fd_weights(5.0 * h, &xs, 1)[1].clone();
    let c = 1.0 / (12.0 * h);
    let mut out = Vec::with_capacity(n);
    out.push(combine(f, 0, &w0));
    out.push(combine(f, 0, &w1));
    for i in 2..n - 2 {
        out.push((f[i - 2] - f[i + 2] + (f[i + 1] - f[i - 1]) * 8.0) * c);
    }
    out.push(combine(f, n - 6, &wm2));
    out.push(combine(f, n - 6, &wm1));
    out
}

/// Fourth-order second derivative on a plain 1D sample set (no boundary
/// condition assumed): five-point interior, one-sided closures at the ends.
pub(crate) fn second_derivative4<T>(f: &[T], h: f64) -> Vec<T>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    let n = f.len();
    assert!(n >= 6, "fourth-order stencils need at least 6 nodes");
    let xs: Vec<f64> = (0..6).map(|i| i as f64 * h).collect();
    let w0 = fd_weights(0.0, &xs, 2)[2].clone();
    let w1 = fd_weights(h, &xs, 2)[2].clone();
    let wm2 = fd_weights(4.0 * h, &xs, 2)[2].clone();
    let wm1 = fd_weights(5.0 * h, &xs, 2)[2].clone();
    let c = 1.0 / (12.0 * h * h);
    let mut out = Vec::with_capacity(n);
    out.push(combine(f, 0, &w0));
    out.push(combine(f, 0, &w1));
    for i in 2..n - 2 {
        out.push((f[i + 1] + f[i - 1]) * (16.0 * c) - f[i] * (30.0 * c) - (f[i + 2] + f[i - 2]) * c);
    }
    out.push(combine(f, n - 6, &wm2));
    out.push(combine(f, n - 6, &wm1));
    out
}

/// Fourth-order second derivative for samples at nodes `h, 2h, ..., n*h` of
/// a function that vanishes at `0` and at `(n+1)*h`.  The vanishing phantom
/// nodes close the boundary stencils, so every row is genuinely fourth
/// order; the bandwidth stays at 4 on each side.
pub(crate) struct DirichletSecondDerivative {
    n: usize,
    scale: f64,
    // (start column, weights) for the two special rows at each end
    first: [(usize, Vec<f64>); 2],
    last: [(usize, Vec<f64>); 2],
}

impl DirichletSecondDerivative {
    /// Boxed variant: the function also vanishes at the outer phantom node
    /// (n+1)h, as an eigenproblem's Dirichlet box requires.
    pub fn new(n: usize, h: f64) -> Self {
        let scale = 1.0 / (12.0 * h * h);
        // node (n-1)h: centered over {(n-3)h, .., (n+1)h}, phantom dropped
        let rowm1 = vec![-scale, 16.0 * scale, -30.0 * scale, 16.0 * scale];
        // node nh: one-sided over {(n-4)h, .., (n+1)h}, phantom dropped
        let xs_top: Vec<f64> = (0..=5).map(|i| (n as f64 - 4.0 + i as f64) * h).collect();
        let rowm0 = fd_weights(n as f64 * h, &xs_top, 2)[2][..5].to_vec();
        Self::with_last_rows(n, h, [(n - 4, rowm1), (n - 5, rowm0)])
    }

    /// Half-open variant: zero only at the origin phantom (exact for
    /// u = rψ); the outer rows use plain one-sided stencils, so a function
    /// that has not fully decayed is not clamped to a fictitious box edge.
    pub fn half_open(n: usize, h: f64) -> Self {
        let xs: Vec<f64> = (0..=5).map(|i| (n as f64 - 5.0 + i as f64) * h).collect();
        let rowm1 = fd_weights((n as f64 - 1.0) * h, &xs, 2)[2].clone();
        let rowm0 = fd_weights(n as f64 * h, &xs, 2)[2].clone();
        Self::with_last_rows(n, h, [(n - 6, rowm1), (n - 6, rowm0)])
    }

    fn with_last_rows(n: usize, h: f64, last: [(usize, Vec<f64>); 2]) -> Self {
        assert!(n >= 8, "Dirichlet stencils need at least 8 nodes");
        let scale = 1.0 / (12.0 * h * h);
        // node h: one-sided over {0, h, .., 5h}, phantom value at 0 dropped
        let xs0: Vec<f64> = (0..=5).map(|i| i as f64 * h).collect();
        let row0 = fd_weights(h, &xs0, 2)[2][1..].to_vec();
        // node 2h: centered over {0, .., 4h}, phantom at 0 dropped
        let row1 = vec![16.0 * scale, -30.0 * scale, 16.0 * scale, -scale];
        DirichletSecondDerivative { n, scale, first: [(0, row0), (0, row1)], last }
    }

    pub fn apply<T>(&self, u: &[T]) -> Vec<T>
    where
        T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
    {
        assert_eq!(u.len(), self.n);
        let n = self.n;
        let c = self.scale;
        let mut out = Vec::with_capacity(n);
        out.push(combine(u, self.first[0].0, &self.first[0].1));
        out.push(combine(u, self.first[1].0, &self.first[1].1));
        for i in 2..n - 2 {
            out.push((u[i + 1] + u[i - 1]) * (16.0 * c) - u[i] * (30.0 * c) - (u[i + 2] + u[i - 2]) * c);
        }
        out.push(combine(u, self.last[0].0, &self.last[0].1));
        out.push(combine(u, self.last[1].0, &self.last[1].1));
        out
    }

    /// Visits every matrix entry as (row, column, value).
    pub fn for_each_entry(&self, mut visit: impl FnMut(usize, usize, f64)) {
        let n = self.n;
        let c = self.scale;
        for (row, (start, w)) in self.first.iter().enumerate() {
            for (k, &v) in w.iter().enumerate() {
                visit(row, start + k, v);
            }
        }
        let interior = [-c, 16.0 * c, -30.0 * c, 16.0 * c, -c];
        for i in 2..n - 2 {
            for (k, &v) in interior.iter().enumerate() {
                visit(i, i - 2 + k, v);
            }
        }
        for (idx, (start, w)) in self.last.iter().enumerate() {
            let row = n - 2 + idx;
            for (k, &v) in w.iter().enumerate() {
                visit(row, start + k, v);
            }
        }
    }
}

/// Band matrix with `kl` sub- and `ku` super-diagonals, LU-factored in band
/// storage with partial pivoting (the extra `kl` upper rows hold pivoting
/// fill-in).
pub(crate) struct Banded {
    n: usize,
    kl: usize,
    ku: usize,
    rows: usize,
    ab: Vec<f64>,
}

pub(crate) struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    rows: usize,
    ab: Vec<f64>,
    ipiv: Vec<usize>,
}

impl Banded {
    pub fn new(n: usize, kl: usize, ku: usize) -> Self {
        let rows = 2 * kl + ku + 1;
        Banded { n, kl, ku, rows, ab: vec![0.0; rows * n] }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        // entry (i, j) lives at band row kl + ku + i - j of column j
        j * self.rows + (self.kl + self.ku + i - j)
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.n && j < self.n);
        debug_assert!(j + self.kl >= i && i + self.ku >= j, "entry outside band");
        let at = self.idx(i, j);
        self.ab[at] += v;
    }

    pub fn lu(mut self) -> Result<BandedLu> {
        let n = self.n;
        let kl = self.kl;
        let width = self.kl + self.ku;
        let mut ipiv = vec![0usize; n];
        for j in 0..n {
            let i_max = (j + kl).min(n - 1);
            let mut piv = j;
            let mut best = self.ab[self.idx(j, j)].abs();
            for i in j + 1..=i_max {
                let v = self.ab[self.idx(i, j)].abs();
                if v > best {
                    best = v;
                    piv = i;
                }
            }
            if best < 1e-300 {
                return Err(Error::Solver(format!("singular band matrix at column {j}")));
            }
            ipiv[j] = piv;
            let k_max = (j + width).min(n - 1);
            if piv != j {
                for k in j..=k_max {
                    let a = self.idx(j, k);
                    let b = self.idx(piv, k);
                    self.ab.swap(a, b);
                }
            }
            let djj = self.ab[self.idx(j, j)];
            for i in j + 1..=i_max {
                let at = self.idx(i, j);
                let l = self.ab[at] / djj;
                self.ab[at] = l;
                for k in j + 1..=k_max {
                    let upd = self.ab[self.idx(j, k)] * l;
                    let at2 = self.idx(i, k);
                    self.ab[at2] -= upd;
                }
            }
        }
        Ok(BandedLu { n, kl: self.kl, ku: self.ku, rows: self.rows, ab: self.ab, ipiv })
    }
}

impl BandedLu {
    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        j * self.rows + (self.kl + self.ku + i - j)
    }

    pub fn solve(&self, b: &mut [f64]) {
        assert_eq!(b.len(), self.n);
        let n = self.n;
        let width = self.kl + self.ku;
        for j in 0..n {
            let piv = self.ipiv[j];
            if piv != j {
                b.swap(j, piv);
            }
            let bj = b[j];
            let i_max = (j + self.kl).min(n - 1);
            for i in j + 1..=i_max {
                b[i] -= self.ab[self.idx(i, j)] * bj;
            }
        }
        for j in (0..n).rev() {
            b[j] /= self.ab[self.idx(j, j)];
            let bj = b[j];
            let i_min = j.saturating_sub(width);
            for i in i_min..j {
                b[i] -= self.ab[self.idx(i, j)] * bj;
            }
        }
    }
}
