//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use accel_entanglement::fock::BellVector;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

/// `ln Gamma(z)` by upward shift to `Re z >= 12` and the Stirling series.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    let mut z = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.re < 12.0 {
        shift += z.ln();
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 * (1.0 / 1188.0)))));
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + series - shift
}

pub fn gamma_modulus(re: f64, im: f64) -> f64 {
    ln_gamma(Complex64::new(re, im)).re.exp()
}

/// Log-negativity from an explicit dense representation over the full
/// tensor-product space of the occupied slots, diagonalised with nalgebra.
pub fn dense_log_negativity(state: &BellVector, side_a: &[usize], side_b: &[usize]) -> f64 {
    let traced: Vec<usize> = (0..4).filter(|s| !side_a.contains(s) && !side_b.contains(s)).collect();
    let limits = state.occupancy_limits();
    let dims = |slots: &[usize]| slots.iter().map(|&s| limits[s] as usize + 1).product::<usize>();
    let index = |occ: &[u32; 4], slots: &[usize]| {
        slots
            .iter()
            .fold(0usize, |acc, &s| acc * (limits[s] as usize + 1) + occ[s] as usize)
    };
    let (da, db) = (dims(side_a), dims(side_b));
    let mut by_traced: BTreeMap<usize, Vec<(usize, usize, f64)>> = BTreeMap::new();
    for (occ, amp) in state.terms() {
        by_traced
            .entry(index(occ, &traced))
            .or_default()
            .push((index(occ, side_a), index(occ, side_b), amp));
    }
    let n = da * db;
    let mut pt = DMatrix::<f64>::zeros(n, n);
    for group in by_traced.values() {
        for &(ia, ib, u) in group {
            for &(ja, jb, v) in group {
                // rho[(ia,ib),(ja,jb)] goes to [(ja,ib),(ia,jb)]
                pt[(ja * db + ib, ia * db + jb)] += u * v;
            }
        }
    }
    let eig = SymmetricEigen::new(pt);
    let neg: f64 = eig.eigenvalues.iter().filter(|&&e| e < -1e-12).map(|e| -e).sum();
    (1.0 + 2.0 * neg).log2()
}

/// Purity of the one-particle reduced state from singular values of the
/// wavefunction sampled on a uniform grid.
pub fn grid_purity(f: impl Fn(f64, f64) -> Complex64, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / (n - 1) as f64;
    let m = nalgebra::DMatrix::<Complex64>::from_fn(n, n, |i, j| f(lo + i as f64 * h, lo + j as f64 * h) * h);
    let sv = m.singular_values();
    let s2: f64 = sv.iter().map(|s| s * s).sum();
    let s4: f64 = sv.iter().map(|s| s.powi(4)).sum();
    s4 / (s2 * s2)
}
