//! Dense cyclic Jacobi eigensolver for real symmetric and complex Hermitian
//! matrices, and a sparse symmetric container that splits into irreducible
//! blocks before diagonalisation.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Off-diagonal Frobenius norm, relative to `max(1, ||A||_F)`, at which a
/// Jacobi iteration is considered converged.
pub const JACOBI_TOLERANCE: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Dense real symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        SymmetricMatrix { n, data: vec![0.0; n * n] }
    }

    /// Builds from row-major data; the input must be symmetric to `1e-12`.
    pub fn from_rows(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::domain(format!("expected {} entries, got {}", n * n, data.len())));
        }
        let m = SymmetricMatrix { n, data };
        for i in 0..n {
            for j in 0..i {
                if (m.get(i, j) - m.get(j, i)).abs() > 1e-12 {
                    return Err(Error::domain(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Eigenvalues in ascending order, by cyclic Jacobi rotations.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let n = self.n;
        if n == 0 {
            return Ok(Vec::new());
        }
        if n == 1 {
            return Ok(vec![self.data[0]]);
        }
        let mut a = self.data.clone();
        let threshold = JACOBI_TOLERANCE * self.frobenius().max(1.0);
        let mut sweeps = 0;
        loop {
            let off = off_norm_raw(&a, n);
            if off < threshold {
                break;
            }
            if sweeps == JACOBI_MAX_SWEEPS {
                return Err(Error::Convergence {
                    routine: "jacobi",
                    detail: format!(
                        "off-diagonal norm {off:.3e} after {sweeps} sweeps on a {n}x{n} matrix (||A||_F = {:.3e}, diag = {:?})",
                        self.frobenius(),
                        (0..n.min(8)).map(|i| a[i * n + i]).collect::<Vec<_>>()
                    ),
                });
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let apq = a[p * n + q];
                    if apq == 0.0 {
                        continue;
                    }
                    let (app, aqq) = (a[p * n + p], a[q * n + q]);
                    let theta = (aqq - app) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        a[k * n + p] = c * akp - s * akq;
                        a[k * n + q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[p * n + k];
                        let aqk = a[q * n + k];
                        a[p * n + k] = c * apk - s * aqk;
                        a[q * n + k] = s * apk + c * aqk;
                    }
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                }
            }
            sweeps += 1;
        }
        let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
        ev.sort_by(f64::total_cmp);
        Ok(ev)
    }
}

fn off_norm_raw(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

/// Dense complex Hermitian matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn from_rows(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::domain(format!("expected {} entries, got {}", n * n, data.len())));
        }
        for i in 0..n {
            for j in 0..=i {
                if (data[i * n + j] - data[j * n + i].conj()).norm() > 1e-12 {
                    return Err(Error::domain(format!("matrix is not Hermitian at ({i}, {j})")));
                }
            }
        }
        Ok(HermitianMatrix { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    /// Eigenvalues in ascending order.
    ///
    /// `H = X + iY` is embedded as the real symmetric `[[X, -Y], [Y, X]]`,
    /// whose spectrum is that of `H` with every eigenvalue doubled. Real
    /// input takes the direct symmetric path.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let n = self.n;
        if self.data.iter().all(|z| z.im == 0.0) {
            return SymmetricMatrix {
                n,
                data: self.data.iter().map(|z| z.re).collect(),
            }
            .eigenvalues();
        }
        let mut emb = SymmetricMatrix::zeros(2 * n);
        for i in 0..n {
            for j in 0..n {
                let z = self.get(i, j);
                emb.data[i * 2 * n + j] = z.re;
                emb.data[(i + n) * 2 * n + j + n] = z.re;
                emb.data[i * 2 * n + j + n] = -z.im;
                emb.data[(i + n) * 2 * n + j] = z.im;
            }
        }
        let doubled = emb.eigenvalues()?;
        Ok(doubled.chunks(2).map(|pair| 0.5 * (pair[0] + pair[1])).collect())
    }
}

/// Sparse real symmetric matrix; only `i <= j` entries are stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseSymmetric {
    dim: usize,
    upper: BTreeMap<(usize, usize), f64>,
}

impl SparseSymmetric {
    pub fn new(dim: usize) -> Self {
        SparseSymmetric { dim, upper: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Adds `v` at `(i, j)` (and implicitly `(j, i)`).
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let key = if i <= j { (i, j) } else { (j, i) };
        *self.upper.entry(key).or_insert(0.0) += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.upper.get(&key).copied().unwrap_or(0.0)
    }

    pub fn nonzeros(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.upper.iter().filter(|(_, v)| **v != 0.0).map(|(k, v)| (*k, *v))
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn to_dense(&self) -> SymmetricMatrix {
        let mut m = SymmetricMatrix::zeros(self.dim);
        for (&(i, j), &v) in &self.upper {
            m.set(i, j, v);
        }
        m
    }

    /// Irreducible diagonal blocks: connected components of the graph of
    /// nonzero off-diagonal entries. Indices in each block are ascending and
    /// blocks are ordered by their smallest index. Indices with no stored
    /// entries at all are omitted (they carry eigenvalue zero).
    pub fn blocks(&self) -> Vec<(Vec<usize>, SymmetricMatrix)> {
        let mut parent: Vec<usize> = (0..self.dim).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut touched = vec![false; self.dim];
        for ((i, j), _) in self.nonzeros() {
            touched[i] = true;
            touched[j] = true;
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..self.dim {
            if touched[i] {
                let root = find(&mut parent, i);
                groups.entry(root).or_default().push(i);
            }
        }
        groups
            .into_values()
            .map(|idx| {
                let pos: BTreeMap<usize, usize> = idx.iter().enumerate().map(|(k, &i)| (i, k)).collect();
                let mut m = SymmetricMatrix::zeros(idx.len());
                for &i in &idx {
                    for (&(_, j), &v) in self.upper.range((i, i)..(i, self.dim)) {
                        if let Some(&pj) = pos.get(&j) {
                            m.set(pos[&i], pj, v);
                        }
                    }
                }
                (idx, m)
            })
            .collect()
    }

    /// Eigenvalues (ascending) of the stored entries, block by block. Zero
    /// eigenvalues of omitted empty rows are included so that the list has
    /// `dim` entries.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let blocks = self.blocks();
        let covered: usize = blocks.iter().map(|(idx, _)| idx.len()).sum();
        let mut ev = vec![0.0; self.dim - covered];
        for (_, m) in blocks {
            ev.extend(m.eigenvalues()?);
        }
        ev.sort_by(f64::total_cmp);
        Ok(ev)
    }
}
