//! Partial trace, partial transpose and negativity over four-slot Fock
//! states, plus closed-form logarithmic negativities used as oracles.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{FRAC_PI_2, LN_2};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bogoliubov::SCALAR_R_MAX;
use crate::error::{Error, Result};
use crate::fock::{BellVector, RestrictionParams, SlotLabel};
use crate::linalg::{HermitianMatrix, SparseSymmetric};

/// Eigenvalues above this are treated as numerical zeros.
pub const NEGATIVE_EIGENVALUE_THRESHOLD: f64 = -1e-12;

/// Largest density matrix (side length) the partial-transpose route accepts.
pub const MAX_DIMENSION: usize = 4096;

/// Pure bipartitions with `d_A * d_B` above this use the Schmidt route.
pub const SCHMIDT_ROUTE_DIMENSION: usize = 256;

pub const MAX_SERIES_TERMS: usize = 100_000;
const SERIES_TERM_TOLERANCE: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartitionSpec {
    side_a: Vec<SlotLabel>,
    side_b: Vec<SlotLabel>,
    traced_out: Vec<SlotLabel>,
}

impl BipartitionSpec {
    /// Slots not named on either side are traced out.
    pub fn new(side_a: &[SlotLabel], side_b: &[SlotLabel]) -> Result<Self> {
        if side_a.is_empty() || side_b.is_empty() {
            return Err(Error::Bipartition("both sides must be nonempty".into()));
        }
        let a: BTreeSet<SlotLabel> = side_a.iter().copied().collect();
        let b: BTreeSet<SlotLabel> = side_b.iter().copied().collect();
        if a.len() != side_a.len() || b.len() != side_b.len() {
            return Err(Error::Bipartition("a slot is listed twice".into()));
        }
        if let Some(s) = a.intersection(&b).next() {
            return Err(Error::Bipartition(format!("slot {} is on both sides", s.short_name())));
        }
        let sorted = |set: &BTreeSet<SlotLabel>| {
            let mut v: Vec<SlotLabel> = set.iter().copied().collect();
            v.sort_by_key(|s| s.index());
            v
        };
        let traced: BTreeSet<SlotLabel> = SlotLabel::ALL
            .iter()
            .copied()
            .filter(|s| !a.contains(s) && !b.contains(s))
            .collect();
        Ok(BipartitionSpec {
            side_a: sorted(&a),
            side_b: sorted(&b),
            traced_out: sorted(&traced),
        })
    }

    pub fn side_a(&self) -> &[SlotLabel] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[SlotLabel] {
        &self.side_b
    }

    pub fn traced_out(&self) -> &[SlotLabel] {
        &self.traced_out
    }
}

/// The named bipartitions of the Bell state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subsystem {
    /// `s` against all of `omega`; also the particle-antiparticle split of
    /// both modes when both are accelerated.
    Total,
    /// `s` against the `omega` particles.
    Sp,
    /// `s` against the `omega` antiparticles.
    Sa,
    Pp,
    Aa,
    /// `s` particles against `omega` antiparticles.
    Pa,
    /// `s` antiparticles against `omega` particles.
    Ap,
}

impl Subsystem {
    pub const ONE_ACCELERATED: [Subsystem; 3] = [Subsystem::Total, Subsystem::Sp, Subsystem::Sa];
    pub const BOTH_ACCELERATED: [Subsystem; 5] = [
        Subsystem::Pp,
        Subsystem::Pa,
        Subsystem::Aa,
        Subsystem::Ap,
        Subsystem::Total,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Subsystem::Total => "total",
            Subsystem::Sp => "sp",
            Subsystem::Sa => "sa",
            Subsystem::Pp => "pp",
            Subsystem::Aa => "aa",
            Subsystem::Pa => "pa",
            Subsystem::Ap => "ap",
        }
    }

    pub fn bipartition(self) -> BipartitionSpec {
        use SlotLabel as L;
        let (a, b): (&[SlotLabel], &[SlotLabel]) = match self {
            Subsystem::Total => (&[L::S_P, L::S_A], &[L::W_P, L::W_A]),
            Subsystem::Sp => (&[L::S_P, L::S_A], &[L::W_P]),
            Subsystem::Sa => (&[L::S_P, L::S_A], &[L::W_A]),
            Subsystem::Pp => (&[L::S_P], &[L::W_P]),
            Subsystem::Aa => (&[L::S_A], &[L::W_A]),
            Subsystem::Pa => (&[L::S_P], &[L::W_A]),
            Subsystem::Ap => (&[L::S_A], &[L::W_P]),
        };
        BipartitionSpec::new(a, b).expect("named bipartitions are valid")
    }
}

impl fmt::Display for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Subsystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "total" => Subsystem::Total,
            "sp" => Subsystem::Sp,
            "sa" => Subsystem::Sa,
            "pp" => Subsystem::Pp,
            "aa" => Subsystem::Aa,
            "pa" => Subsystem::Pa,
            "ap" => Subsystem::Ap,
            _ => return Err(Error::Bipartition(format!("unknown subsystem '{s}'"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// Only the `omega` mode is accelerated.
    OneAccelerated,
    BothAccelerated,
}

impl Scenario {
    pub fn subsystems(self) -> &'static [Subsystem] {
        match self {
            Scenario::OneAccelerated => &Subsystem::ONE_ACCELERATED,
            Scenario::BothAccelerated => &Subsystem::BOTH_ACCELERATED,
        }
    }
}

impl std::str::FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one" | "one_accelerated" => Ok(Scenario::OneAccelerated),
            "both" | "both_accelerated" => Ok(Scenario::BothAccelerated),
            _ => Err(Error::domain(format!("unknown scenario '{s}' (expected one or both)"))),
        }
    }
}

/// Reduced density matrix on the support basis: the distinct A and B
/// occupation configurations present in the state. Index `ia * d_B + ib`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    a_basis: Vec<Vec<u32>>,
    b_basis: Vec<Vec<u32>>,
    entries: SparseSymmetric,
}

impl DensityMatrix {
    pub fn a_basis(&self) -> &[Vec<u32>] {
        &self.a_basis
    }

    pub fn b_basis(&self) -> &[Vec<u32>] {
        &self.b_basis
    }

    pub fn dim_a(&self) -> usize {
        self.a_basis.len()
    }

    pub fn dim_b(&self) -> usize {
        self.b_basis.len()
    }

    pub fn dim(&self) -> usize {
        self.entries.dim()
    }

    pub fn index(&self, ia: usize, ib: usize) -> usize {
        ia * self.dim_b() + ib
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries.get(i, j)
    }

    pub fn entries(&self) -> &SparseSymmetric {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    /// `Tr rho^2`.
    pub fn purity(&self) -> f64 {
        self.entries
            .nonzeros()
            .map(|((i, j), v)| if i == j { v * v } else { 2.0 * v * v })
            .sum()
    }

    pub fn to_hermitian(&self) -> Result<HermitianMatrix> {
        let dense = self.entries.to_dense();
        let n = dense.dim();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(num_complex::Complex64::new(dense.get(i, j), 0.0));
            }
        }
        HermitianMatrix::from_rows(n, data)
    }
}

fn project(occ: &[u32; 4], slots: &[SlotLabel]) -> Vec<u32> {
    slots.iter().map(|s| occ[s.index()]).collect()
}

fn support(state: &BellVector, slots: &[SlotLabel]) -> BTreeMap<Vec<u32>, usize> {
    let set: BTreeSet<Vec<u32>> = state.terms().map(|(occ, _)| project(occ, slots)).collect();
    set.into_iter().enumerate().map(|(i, c)| (c, i)).collect()
}

/// Adds `sum_g |g><g|` for vectors `g` given sparsely as `(index, value)`.
fn accumulate_outer(groups: &BTreeMap<Vec<u32>, Vec<(usize, f64)>>, out: &mut SparseSymmetric) {
    for group in groups.values() {
        for (k, &(p, v)) in group.iter().enumerate() {
            out.add(p, p, v * v);
            for &(q, w) in &group[k + 1..] {
                out.add(p, q, v * w);
            }
        }
    }
}

/// `Tr_traced |psi><psi|` on the A x B support basis.
pub fn reduced_density(state: &BellVector, spec: &BipartitionSpec) -> Result<DensityMatrix> {
    let a_index = support(state, &spec.side_a);
    let b_index = support(state, &spec.side_b);
    let (da, db) = (a_index.len(), b_index.len());
    let dim = da * db;
    if dim > MAX_DIMENSION {
        return Err(Error::Dimension {
            dim,
            limit: MAX_DIMENSION,
        });
    }
    let mut groups: BTreeMap<Vec<u32>, Vec<(usize, f64)>> = BTreeMap::new();
    for (occ, amp) in state.terms() {
        let p = a_index[&project(occ, &spec.side_a)] * db + b_index[&project(occ, &spec.side_b)];
        groups.entry(project(occ, &spec.traced_out)).or_default().push((p, amp));
    }
    let mut entries = SparseSymmetric::new(dim);
    accumulate_outer(&groups, &mut entries);
    Ok(DensityMatrix {
        a_basis: a_index.into_keys().collect(),
        b_basis: b_index.into_keys().collect(),
        entries,
    })
}

/// Transposes the A indices: `<ia ib|rho|ja jb> -> <ja ib|rho^T_A|ia jb>`.
pub fn partial_transpose(rho: &DensityMatrix) -> SparseSymmetric {
    let db = rho.dim_b();
    let mut out = SparseSymmetric::new(rho.dim());
    for ((p, q), v) in rho.entries.nonzeros() {
        let (ia, ib) = (p / db, p % db);
        let (ja, jb) = (q / db, q % db);
        out.add(ja * db + ib, ia * db + jb, v);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Negativity {
    pub value: f64,
    /// Eigenvalues below the threshold, ascending.
    pub negative_eigenvalues: Vec<f64>,
}

/// Absolute sum of the eigenvalues below [`NEGATIVE_EIGENVALUE_THRESHOLD`].
pub fn negativity(pt: &SparseSymmetric) -> Result<Negativity> {
    let mut negative = Vec::new();
    for (_, block) in pt.blocks() {
        negative.extend(
            block
                .eigenvalues()?
                .into_iter()
                .filter(|&e| e < NEGATIVE_EIGENVALUE_THRESHOLD),
        );
    }
    negative.sort_by(f64::total_cmp);
    Ok(Negativity {
        value: 0.0 + negative.iter().map(|e| -e).sum::<f64>(),
        negative_eigenvalues: negative,
    })
}

/// `log2(2 N + 1)`.
pub fn log_negativity(n: f64) -> Result<f64> {
    if !(n >= 0.0) {
        return Err(Error::domain(format!("negativity must be non-negative, got {n}")));
    }
    Ok((2.0 * n).ln_1p() / LN_2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    PartialTranspose,
    /// Pure bipartition: negativity from the Schmidt coefficients of the
    /// smaller side's reduced state.
    Schmidt,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementReport {
    pub negativity: f64,
    pub log_negativity: f64,
    pub negative_eigenvalues: Vec<f64>,
    /// Bound on `|N_exact - N_truncated|`.
    pub negativity_error: f64,
    /// Bound on the log-negativity error implied by `negativity_error`.
    pub truncation_error: f64,
    pub route: Route,
}

/// Bound on the negativity change from the truncation recorded in `state`.
///
/// The exact and truncated partially transposed matrices differ by
/// `Y = sum_t (|k_t><e_t| + |e_t><k_t| + |e_t><e_t|)^T_A` over traced
/// configurations `t`, with kept part `k_t` and discarded part `e_t`. Each
/// rank-one piece has trace norm at most the product of l1 norms, and the
/// negativity moves by at most `(||Y||_1 + |Tr Y|) / 2` with `Tr Y = delta`.
pub fn truncation_bound(state: &BellVector, spec: &BipartitionSpec) -> f64 {
    let delta = state.truncation_tail();
    let remainder = state.discarded_l1_remainder();
    if delta == 0.0 && remainder == 0.0 && state.discarded_terms().next().is_none() {
        return 0.0;
    }
    let mut kept: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
    for (occ, amp) in state.terms() {
        *kept.entry(project(occ, &spec.traced_out)).or_insert(0.0) += amp.abs();
    }
    let mut lost: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
    for (occ, amp) in state.discarded_terms() {
        *lost.entry(project(occ, &spec.traced_out)).or_insert(0.0) += amp.abs();
    }
    let mut y = 0.0;
    for (t, &e) in &lost {
        let k = kept.get(t).copied().unwrap_or(0.0);
        y += 2.0 * e * k + e * e;
    }
    let k_max = kept.values().copied().fold(0.0, f64::max);
    let e_sum: f64 = lost.values().sum();
    y += 2.0 * remainder * (k_max + e_sum) + remainder * remainder;
    0.5 * (y + delta)
}

/// Schmidt coefficients of a pure bipartition are the positive eigenvalues
/// of `[[0, C], [C^T, 0]]` for the coefficient matrix `C`; working with `C`
/// rather than `C C^T` keeps small coefficients accurate.
fn schmidt_negativity(state: &BellVector, spec: &BipartitionSpec) -> Result<Negativity> {
    let a_index = support(state, &spec.side_a);
    let b_index = support(state, &spec.side_b);
    let da = a_index.len();
    let dim = da + b_index.len();
    if dim > MAX_DIMENSION {
        return Err(Error::Dimension {
            dim,
            limit: MAX_DIMENSION,
        });
    }
    let mut embedded = SparseSymmetric::new(dim);
    for (occ, amp) in state.terms() {
        let i = a_index[&project(occ, &spec.side_a)];
        let j = b_index[&project(occ, &spec.side_b)];
        embedded.add(i, da + j, amp);
    }
    let mut sigma = Vec::new();
    for (_, block) in embedded.blocks() {
        sigma.extend(block.eigenvalues()?.into_iter().filter(|&e| e > 0.0));
    }
    sigma.sort_by(|x, y| y.total_cmp(x));
    let mut negative = Vec::new();
    for i in 0..sigma.len() {
        for j in i + 1..sigma.len() {
            let e = -sigma[i] * sigma[j];
            if e < NEGATIVE_EIGENVALUE_THRESHOLD {
                negative.push(e);
            } else {
                break;
            }
        }
    }
    negative.sort_by(f64::total_cmp);
    let s: f64 = sigma.iter().sum();
    let q: f64 = sigma.iter().map(|x| x * x).sum();
    Ok(Negativity {
        value: (0.5 * (s * s - q)).max(0.0),
        negative_eigenvalues: negative,
    })
}

/// Negativity and log-negativity of `state` across `spec`, with the
/// truncation error bound.
pub fn analyze(state: &BellVector, spec: &BipartitionSpec) -> Result<EntanglementReport> {
    let pure = spec.traced_out.is_empty();
    let large = support(state, &spec.side_a).len() * support(state, &spec.side_b).len() > SCHMIDT_ROUTE_DIMENSION;
    let (neg, route) = if pure && large {
        (schmidt_negativity(state, spec)?, Route::Schmidt)
    } else {
        let rho = reduced_density(state, spec)?;
        (negativity(&partial_transpose(&rho))?, Route::PartialTranspose)
    };
    analyze_finish(state, spec, neg, route)
}

/// As [`analyze`] but forcing the given route.
pub fn analyze_with_route(state: &BellVector, spec: &BipartitionSpec, route: Route) -> Result<EntanglementReport> {
    let neg = match route {
        Route::Schmidt => {
            if !spec.traced_out.is_empty() {
                return Err(Error::Bipartition("the Schmidt route needs a pure bipartition".into()));
            }
            schmidt_negativity(state, spec)?
        }
        Route::PartialTranspose => negativity(&partial_transpose(&reduced_density(state, spec)?))?,
    };
    analyze_finish(state, spec, neg, route)
}

fn analyze_finish(state: &BellVector, spec: &BipartitionSpec, neg: Negativity, route: Route) -> Result<EntanglementReport> {
    let negativity_error = truncation_bound(state, spec);
    Ok(EntanglementReport {
        negativity: neg.value,
        log_negativity: log_negativity(neg.value)?,
        negative_eigenvalues: neg.negative_eigenvalues,
        negativity_error,
        truncation_error: 2.0 * negativity_error / LN_2,
        route,
    })
}

/// Log-negativities keyed by subsystem, with a shared error bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LnSet {
    pub values: BTreeMap<Subsystem, f64>,
    pub error_bound: f64,
}

impl LnSet {
    pub fn get(&self, s: Subsystem) -> Option<f64> {
        self.values.get(&s).copied()
    }
}

pub fn fermion_closed_forms(r_f: f64, scenario: Scenario) -> Result<LnSet> {
    if !(0.0..=FRAC_PI_2).contains(&r_f) {
        return Err(Error::domain(format!("r_f must lie in [0, pi/2], got {r_f}")));
    }
    let (s, c) = r_f.sin_cos();
    let (s2, c2) = (s * s, c * c);
    let lg = |x: f64| x.ln_1p() / LN_2;
    let values = match scenario {
        Scenario::OneAccelerated => BTreeMap::from([
            (Subsystem::Total, 1.0),
            (Subsystem::Sp, lg(c2)),
            (Subsystem::Sa, lg(s2)),
        ]),
        Scenario::BothAccelerated => BTreeMap::from([
            (Subsystem::Total, 1.0),
            (Subsystem::Pp, lg(c2 * c2)),
            (Subsystem::Aa, lg(s2 * s2)),
            (Subsystem::Pa, lg(c2 * s2)),
            (Subsystem::Ap, lg(c2 * s2)),
        ]),
    };
    Ok(LnSet {
        values,
        error_bound: 0.0,
    })
}

fn check_scalar_r(r: f64) -> Result<()> {
    if !(r >= 0.0 && r <= SCALAR_R_MAX * (1.0 + 1e-12)) {
        return Err(Error::domain(format!("r must lie in [0, asinh 1], got {r}")));
    }
    Ok(())
}

/// Partial sum of the unrestricted series for the `s, p` bipartition and a
/// bound on the omitted tail. Terms are written in powers of `x = tanh^2 r`.
pub fn scalar_sp_series(r: f64) -> Result<(f64, f64, usize)> {
    check_scalar_r(r)?;
    let x = r.tanh().powi(2);
    let c2 = r.cosh().powi(2);
    let pref = 0.5 / c2;
    let term = |n: usize| -> f64 {
        let nf = n as f64;
        let lead = if n == 0 { 0.0 } else { nf * x.powi(n as i32 - 1) / c2 };
        let a = lead + x.powi(n as i32 + 1);
        pref * (a * a + 4.0 * x.powi(2 * n as i32) / c2).sqrt()
    };
    let mut sum = pref;
    let mut n = 0;
    loop {
        let t = term(n);
        sum += t;
        n += 1;
        if (n > 2 && t < SERIES_TERM_TOLERANCE) || n == MAX_SERIES_TERMS {
            break;
        }
    }
    // Tail over m >= n, using sqrt(a^2 + b) <= a + sqrt(b).
    let k = n as f64 - 1.0;
    let tail = if x == 0.0 {
        0.0
    } else {
        let geo = x.powi(n as i32) / (1.0 - x);
        let lin = ((k + 1.0) * x.powi(n as i32 - 1) - k * x.powi(n as i32)) / (1.0 - x).powi(2);
        pref * (lin / c2 + x * geo + 2.0 * geo / c2.sqrt())
    };
    Ok((sum, tail, n))
}

/// Closed-form log-negativities for the scalar field with only `omega`
/// accelerated. `None` selects the untruncated state.
pub fn scalar_closed_forms(r: f64, restriction: Option<usize>) -> Result<LnSet> {
    check_scalar_r(r)?;
    match restriction {
        None => {
            let (sum, tail, _) = scalar_sp_series(r)?;
            let ln_sp = sum.log2();
            Ok(LnSet {
                values: BTreeMap::from([
                    (Subsystem::Total, 1.0),
                    (Subsystem::Sp, ln_sp),
                    (Subsystem::Sa, 0.0),
                    (Subsystem::Pa, 0.0),
                    (Subsystem::Aa, 0.0),
                ]),
                error_bound: tail / (sum * LN_2),
            })
        }
        Some(m) => {
            let p = RestrictionParams::new(r, m)?;
            let x = r.tanh().powi(2);
            let c2 = r.cosh().powi(2);
            let (n1s, n2s) = (p.n1 * p.n1, p.n2 * p.n2);
            // q - sqrt(q^2 + z) = -z / (q + sqrt(q^2 + z))
            let dip = |q: f64, z: f64| if z == 0.0 { 0.0 } else { -z / (q + (q * q + z).sqrt()) };
            let mut sp = 1.0;
            for n in 1..=m {
                let a = if n == 1 { 0.0 } else { (n - 1) as f64 * n2s * x.powi(n as i32 - 2) / c2 };
                let b = n1s * x.powi(n as i32);
                let z = 4.0 * n1s * n2s * x.powi(2 * n as i32 - 2) / c2;
                sp -= 0.5 / c2 * dip(a + b, z);
            }
            let y = 4.0 * n2s * m as f64 * x / (n1s * c2);
            let sa = 1.0 - n1s * x.powi(m as i32 - 1) / (2.0 * c2) * dip(1.0, y);
            Ok(LnSet {
                values: BTreeMap::from([
                    (Subsystem::Total, 1.0),
                    (Subsystem::Sp, sp.log2()),
                    (Subsystem::Sa, sa.log2()),
                ]),
                error_bound: 0.0,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_bell_out, FockStatistics, ModeSpec};
    use std::f64::consts::FRAC_PI_4;

    fn bell(spec_w: ModeSpec) -> BellVector {
        build_bell_out(&ModeSpec::Inertial, &spec_w).unwrap()
    }

    #[test]
    fn bipartition_validation() {
        assert!(BipartitionSpec::new(&[], &[SlotLabel::W_P]).is_err());
        assert!(BipartitionSpec::new(&[SlotLabel::S_P], &[SlotLabel::S_P]).is_err());
        let spec = BipartitionSpec::new(&[SlotLabel::S_P], &[SlotLabel::W_A]).unwrap();
        assert_eq!(spec.traced_out(), &[SlotLabel::S_A, SlotLabel::W_P]);
    }

    #[test]
    fn bell_state_is_maximally_entangled() {
        let state = bell(ModeSpec::Inertial);
        let rho = reduced_density(&state, &Subsystem::Total.bipartition()).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-15);
        let neg = negativity(&partial_transpose(&rho)).unwrap();
        assert!((neg.value - 0.5).abs() < 1e-15);
        assert_eq!(neg.negative_eigenvalues.len(), 1);
        assert!((log_negativity(neg.value).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn double_transpose_is_identity() {
        let state = bell(ModeSpec::Fermion { r_f: 0.5 });
        let rho = reduced_density(&state, &Subsystem::Sp.bipartition()).unwrap();
        let once = partial_transpose(&rho);
        let back = partial_transpose(&DensityMatrix {
            a_basis: rho.a_basis.clone(),
            b_basis: rho.b_basis.clone(),
            entries: once,
        });
        assert_eq!(back, rho.entries);
    }

    #[test]
    fn product_state_has_zero_negativity() {
        let state = BellVector::from_terms(FockStatistics::Fermion, [([1, 0, 1, 0], 1.0)]).unwrap();
        let rep = analyze(&state, &Subsystem::Total.bipartition()).unwrap();
        assert_eq!(rep.negativity, 0.0);
        assert!(rep.negative_eigenvalues.is_empty());
    }

    #[test]
    fn log_negativity_rejects_negative_input() {
        assert!(log_negativity(-0.1).is_err());
        assert!(log_negativity(f64::NAN).is_err());
        assert!((log_negativity(0.25).unwrap() - 1.5f64.log2()).abs() < 1e-15);
    }

    #[test]
    fn fermion_sp_matches_closed_form() {
        for &r_f in &[0.0, 0.3, FRAC_PI_4, 1.2, FRAC_PI_2] {
            let state = bell(ModeSpec::Fermion { r_f });
            let cf = fermion_closed_forms(r_f, Scenario::OneAccelerated).unwrap();
            for &s in &Subsystem::ONE_ACCELERATED {
                let rep = analyze(&state, &s.bipartition()).unwrap();
                assert!((rep.log_negativity - cf.get(s).unwrap()).abs() < 1e-12, "{s} at {r_f}");
            }
        }
    }

    #[test]
    fn fermion_quarter_pi_values() {
        let cf = fermion_closed_forms(FRAC_PI_4, Scenario::BothAccelerated).unwrap();
        for s in [Subsystem::Pp, Subsystem::Aa, Subsystem::Pa] {
            assert!((cf.get(s).unwrap() - 1.25f64.log2()).abs() < 1e-15);
        }
    }

    #[test]
    fn schmidt_route_agrees_with_partial_transpose() {
        let spec = ModeSpec::ScalarRestricted { r: 0.7, max_pairs: 3 };
        let state = build_bell_out(&spec, &spec).unwrap();
        let bip = Subsystem::Total.bipartition();
        let a = analyze_with_route(&state, &bip, Route::PartialTranspose).unwrap();
        let b = analyze_with_route(&state, &bip, Route::Schmidt).unwrap();
        assert!((a.negativity - b.negativity).abs() < 1e-12, "{} {}", a.negativity, b.negativity);
        assert!((a.log_negativity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn series_limit_at_zero() {
        let (sum, tail, _) = scalar_sp_series(0.0).unwrap();
        assert!((sum - 2.0).abs() < 1e-15);
        assert_eq!(tail, 0.0);
        let cf = scalar_closed_forms(0.0, None).unwrap();
        assert!((cf.get(Subsystem::Sp).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn restricted_single_pair_at_max_acceleration() {
        let cf = scalar_closed_forms(SCALAR_R_MAX, Some(1)).unwrap();
        assert!((cf.get(Subsystem::Sa).unwrap() - (4.0f64 / 3.0).log2()).abs() < 1e-13);
    }

    #[test]
    fn restricted_pipeline_matches_closed_form() {
        for m in 1..=3 {
            for &r in &[0.1, 0.5, SCALAR_R_MAX] {
                let state = bell(ModeSpec::ScalarRestricted { r, max_pairs: m });
                let cf = scalar_closed_forms(r, Some(m)).unwrap();
                for s in [Subsystem::Sp, Subsystem::Sa] {
                    let rep = analyze(&state, &s.bipartition()).unwrap();
                    assert!((rep.log_negativity - cf.get(s).unwrap()).abs() < 1e-11, "{s} M={m} r={r}");
                }
            }
        }
    }

    #[test]
    fn rejects_out_of_range_parameters() {
        assert!(fermion_closed_forms(1.6, Scenario::OneAccelerated).is_err());
        assert!(scalar_closed_forms(0.9, None).is_err());
        assert!(scalar_closed_forms(-0.1, Some(1)).is_err());
    }
}
