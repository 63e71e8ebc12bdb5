//! Out-basis Fock expansions of in-basis states and the four-slot Bell-type
//! states built from them.
//!
//! A single field mode carries two slots, particle and antiparticle. The
//! two-mode states used for entanglement analysis carry four slots, always
//! ordered `(s,p), (s,a), (omega,p), (omega,a)`.
//!
//! Truncated scalar series keep their `1/cosh r` normalisation and record the
//! discarded probability mass. They also keep an explicit list of the first
//! discarded terms (plus a bound on the l1 mass of everything beyond), which
//! is what the entanglement module uses to propagate truncation error.
//! Pair-number-restricted states are a different object: they are finite
//! sums renormalised by `N1`/`N2`.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::bogoliubov::{FERMION_R_MAX, SCALAR_R_MAX};
use crate::error::{Error, Result};

/// Slack allowed on `r <= asinh(1)` for parameters that were printed and
/// parsed back.
const R_SLACK: f64 = 1e-12;
/// Hard cap on the truncated series length.
const MAX_CUTOFF: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    S,
    Omega,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Species {
    Particle,
    Antiparticle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SlotLabel {
    pub mode: Mode,
    pub species: Species,
}

impl SlotLabel {
    pub const S_P: SlotLabel = SlotLabel::new(Mode::S, Species::Particle);
    pub const S_A: SlotLabel = SlotLabel::new(Mode::S, Species::Antiparticle);
    pub const W_P: SlotLabel = SlotLabel::new(Mode::Omega, Species::Particle);
    pub const W_A: SlotLabel = SlotLabel::new(Mode::Omega, Species::Antiparticle);

    /// All four slots in occupation-tuple order.
    pub const ALL: [SlotLabel; 4] = [Self::S_P, Self::S_A, Self::W_P, Self::W_A];

    pub const fn new(mode: Mode, species: Species) -> Self {
        SlotLabel { mode, species }
    }

    /// Position of this slot in a four-slot occupation tuple.
    pub fn index(self) -> usize {
        let m = match self.mode {
            Mode::S => 0,
            Mode::Omega => 2,
        };
        let s = match self.species {
            Species::Particle => 0,
            Species::Antiparticle => 1,
        };
        m + s
    }

    pub fn short_name(self) -> &'static str {
        match (self.mode, self.species) {
            (Mode::S, Species::Particle) => "s_p",
            (Mode::S, Species::Antiparticle) => "s_a",
            (Mode::Omega, Species::Particle) => "w_p",
            (Mode::Omega, Species::Antiparticle) => "w_a",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FockStatistics {
    Fermion,
    Boson,
}

/// How the occupation numbers of a state were limited.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Truncation {
    /// The expansion is finite by construction (fermions, inertial modes).
    Exact,
    /// Infinite series cut after `n = cutoff`; not renormalised.
    Cutoff { cutoff: usize },
    /// At most `max_pairs` produced pairs; renormalised.
    Restricted { max_pairs: usize },
}

pub type Occupation<const N: usize> = [u32; N];

/// A finite superposition of occupation-number basis states with real
/// amplitudes (all Bogoliubov phases are zero).
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector<const N: usize> {
    statistics: FockStatistics,
    truncation: Vec<Truncation>,
    terms: BTreeMap<Occupation<N>, f64>,
    truncation_tail: f64,
    discarded: BTreeMap<Occupation<N>, f64>,
    discarded_l1_remainder: f64,
}

/// Two-slot `(particle, antiparticle)` state of one mode.
pub type ModeVector = FockVector<2>;

/// Four-slot state over both modes.
pub type BellVector = FockVector<4>;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AmplitudeEntry {
    pub occupations: Vec<u32>,
    pub amplitude: f64,
}

impl<const N: usize> FockVector<N> {
    /// A state with exactly the given terms and no truncation.
    pub fn from_terms(
        statistics: FockStatistics,
        terms: impl IntoIterator<Item = (Occupation<N>, f64)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (occ, amp) in terms {
            if statistics == FockStatistics::Fermion && occ.iter().any(|&n| n > 1) {
                return Err(Error::domain(format!("fermion occupation {occ:?} exceeds 1")));
            }
            *map.entry(occ).or_insert(0.0) += amp;
        }
        Ok(FockVector {
            statistics,
            truncation: vec![Truncation::Exact],
            terms: map,
            truncation_tail: 0.0,
            discarded: BTreeMap::new(),
            discarded_l1_remainder: 0.0,
        })
    }

    pub fn statistics(&self) -> FockStatistics {
        self.statistics
    }

    /// Per-mode truncation metadata (one entry for a single-mode state,
    /// `[s, omega]` for a four-slot state).
    pub fn truncation(&self) -> &[Truncation] {
        &self.truncation
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Occupation<N>, f64)> {
        self.terms.iter().map(|(k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn amplitude(&self, occ: &Occupation<N>) -> f64 {
        self.terms.get(occ).copied().unwrap_or(0.0)
    }

    pub fn norm_squared(&self) -> f64 {
        self.terms.values().map(|a| a * a).sum()
    }

    /// Exact probability mass removed by truncation (zero when nothing was).
    pub fn truncation_tail(&self) -> f64 {
        self.truncation_tail
    }

    /// Terms removed by truncation that were enumerated explicitly.
    pub fn discarded_terms(&self) -> impl Iterator<Item = (&Occupation<N>, f64)> {
        self.discarded.iter().map(|(k, &v)| (k, v))
    }

    /// Upper bound on the l1 mass of discarded amplitudes not listed in
    /// [`Self::discarded_terms`].
    pub fn discarded_l1_remainder(&self) -> f64 {
        self.discarded_l1_remainder
    }

    /// Largest occupation number present in each slot.
    pub fn occupancy_limits(&self) -> [u32; N] {
        let mut out = [0; N];
        for occ in self.terms.keys() {
            for (o, &n) in out.iter_mut().zip(occ) {
                *o = (*o).max(n);
            }
        }
        out
    }

    pub fn amplitude_table(&self) -> Vec<AmplitudeEntry> {
        self.terms
            .iter()
            .map(|(occ, &amplitude)| AmplitudeEntry {
                occupations: occ.to_vec(),
                amplitude,
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.amplitude_table()).expect("amplitude table serialises")
    }
}

/// Out-basis images of the in-vacuum and in-one-particle states of a mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ModePair {
    pub vacuum: ModeVector,
    pub one: ModeVector,
}

fn mode_vector(
    statistics: FockStatistics,
    truncation: Truncation,
    terms: Vec<([u32; 2], f64)>,
) -> ModeVector {
    FockVector {
        statistics,
        truncation: vec![truncation],
        terms: terms.into_iter().collect(),
        truncation_tail: 0.0,
        discarded: BTreeMap::new(),
        discarded_l1_remainder: 0.0,
    }
}

fn check_fermion_r(r_f: f64) -> Result<()> {
    if r_f.is_nan() || !(-R_SLACK..=FERMION_R_MAX + R_SLACK).contains(&r_f) {
        return Err(Error::domain(format!("r_f must lie in [0, pi/2], got {r_f}")));
    }
    Ok(())
}

fn check_scalar_r(r: f64) -> Result<()> {
    if r.is_nan() || !(-R_SLACK..=SCALAR_R_MAX + R_SLACK).contains(&r) {
        return Err(Error::domain(format!("r must lie in [0, asinh 1], got {r}")));
    }
    Ok(())
}

/// `cos r_f |0_p 0_a> - sin r_f |1_p 1_a>`.
pub fn fermion_out_vacuum(r_f: f64) -> Result<ModeVector> {
    check_fermion_r(r_f)?;
    let r_f = r_f.clamp(0.0, FERMION_R_MAX);
    let mut terms = vec![([0, 0], r_f.cos())];
    if r_f > 0.0 {
        terms.push(([1, 1], -r_f.sin()));
    }
    if r_f == FERMION_R_MAX {
        terms.retain(|&(occ, _)| occ == [1, 1]);
        terms[0].1 = -1.0;
    }
    Ok(mode_vector(FockStatistics::Fermion, Truncation::Exact, terms))
}

/// `|1_p 0_a>`, independent of `r_f`.
pub fn fermion_out_one(r_f: f64) -> Result<ModeVector> {
    check_fermion_r(r_f)?;
    Ok(mode_vector(FockStatistics::Fermion, Truncation::Exact, vec![([1, 0], 1.0)]))
}

/// Which one of the two scalar series.
#[derive(Clone, Copy, PartialEq, Eq)]
enum ScalarBranch {
    Vacuum,
    One,
}

impl ScalarBranch {
    /// Occupation and amplitude of the `n`th term.
    fn term(self, n: usize, tanh_r: f64, cosh_r: f64) -> ([u32; 2], f64) {
        let n32 = n as u32;
        match self {
            ScalarBranch::Vacuum => ([n32, n32], tanh_r.powi(n as i32) / cosh_r),
            ScalarBranch::One => (
                [n32 + 1, n32],
                ((n + 1) as f64).sqrt() * tanh_r.powi(n as i32) / (cosh_r * cosh_r),
            ),
        }
    }

    /// Probability mass of all terms with index `> cutoff`, with `x = tanh^2 r`.
    fn tail_mass(self, cutoff: usize, x: f64) -> f64 {
        let k = cutoff as i32;
        match self {
            ScalarBranch::Vacuum => x.powi(k + 1),
            ScalarBranch::One => {
                let k = cutoff as f64;
                x.powi(cutoff as i32 + 1) * ((k + 2.0) - (k + 1.0) * x)
            }
        }
    }

    /// Upper bound on the l1 mass of all terms with index `> cutoff`.
    fn tail_l1(self, cutoff: usize, tanh_r: f64, cosh_r: f64) -> f64 {
        let t = tanh_r;
        let tk = t.powi(cutoff as i32 + 1);
        match self {
            ScalarBranch::Vacuum => tk / (cosh_r * (1.0 - t)),
            ScalarBranch::One => {
                // sqrt(n+1) <= n+1 and sum_{n>K} (n+1) t^n in closed form
                let k = cutoff as f64;
                tk * ((k + 2.0) - (k + 1.0) * t) / ((1.0 - t) * (1.0 - t) * cosh_r * cosh_r)
            }
        }
    }
}

/// Cutoff for a truncated scalar series: the closed-form starting estimate
/// `ceil(ln(eps (1 - tanh^2 r)) / (2 ln tanh r)) + 2`, raised until the exact
/// tail mass is at most `eps`. `r = 0` needs no terms beyond `n = 0`.
pub fn scalar_cutoff(r: f64, epsilon: f64) -> Result<usize> {
    check_scalar_r(r)?;
    check_epsilon(epsilon)?;
    Ok(cutoff_for(ScalarBranch::One, r.max(0.0), epsilon))
}

fn cutoff_for(branch: ScalarBranch, r: f64, epsilon: f64) -> usize {
    let t = r.tanh();
    if t == 0.0 {
        return 0;
    }
    let x = t * t;
    let start = ((epsilon * (1.0 - x)).ln() / (2.0 * t.ln())).ceil().max(0.0) as usize + 2;
    let mut n = start;
    while branch.tail_mass(n, x) > epsilon && n < MAX_CUTOFF {
        n += 1;
    }
    n
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::domain(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    Ok(())
}

fn scalar_truncated(branch: ScalarBranch, r: f64, epsilon: f64) -> Result<ModeVector> {
    check_scalar_r(r)?;
    check_epsilon(epsilon)?;
    let r = r.clamp(0.0, SCALAR_R_MAX);
    let (t, c) = (r.tanh(), r.cosh());
    let cutoff = cutoff_for(branch, r, epsilon);
    let terms = (0..=cutoff).map(|n| branch.term(n, t, c)).collect();
    let mut v = mode_vector(FockStatistics::Boson, Truncation::Cutoff { cutoff }, terms);
    if t > 0.0 {
        v.truncation_tail = branch.tail_mass(cutoff, t * t);
        // Discarded terms are listed until the unlisted l1 mass is below epsilon.
        let mut last = cutoff;
        while branch.tail_l1(last, t, c) > epsilon && last < MAX_CUTOFF {
            last += 1;
            let (occ, amp) = branch.term(last, t, c);
            v.discarded.insert(occ, amp);
        }
        v.discarded_l1_remainder = branch.tail_l1(last, t, c);
    }
    Ok(v)
}

/// `(1/cosh r) sum_n tanh^n r |n_p n_a>`, cut so that the discarded mass is
/// at most `epsilon`.
pub fn scalar_out_vacuum(r: f64, epsilon: f64) -> Result<ModeVector> {
    scalar_truncated(ScalarBranch::Vacuum, r, epsilon)
}

/// `(1/cosh^2 r) sum_n sqrt(n+1) tanh^n r |(n+1)_p n_a>`, cut so that the
/// discarded mass is at most `epsilon`.
pub fn scalar_out_one(r: f64, epsilon: f64) -> Result<ModeVector> {
    scalar_truncated(ScalarBranch::One, r, epsilon)
}

/// Normalisation factors for at most `M` produced pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RestrictionParams {
    pub max_pairs: usize,
    pub n1: f64,
    pub n2: f64,
}

impl RestrictionParams {
    pub fn new(r: f64, max_pairs: usize) -> Result<Self> {
        check_scalar_r(r)?;
        if max_pairs < 1 {
            return Err(Error::domain("the number of produced pairs M must be at least 1"));
        }
        let x = r.clamp(0.0, SCALAR_R_MAX).tanh().powi(2);
        let m = max_pairs as i32;
        let n1 = (1.0 - x.powi(m + 1)).powf(-0.5);
        let n2 = (1.0 - (m as f64 + 1.0) * x.powi(m) + m as f64 * x.powi(m + 1)).powf(-0.5);
        Ok(RestrictionParams { max_pairs, n1, n2 })
    }
}

fn scalar_restricted(branch: ScalarBranch, r: f64, max_pairs: usize) -> Result<ModeVector> {
    let rp = RestrictionParams::new(r, max_pairs)?;
    let r = r.clamp(0.0, SCALAR_R_MAX);
    let (t, c) = (r.tanh(), r.cosh());
    let (last, factor) = match branch {
        ScalarBranch::Vacuum => (max_pairs, rp.n1),
        ScalarBranch::One => (max_pairs - 1, rp.n2),
    };
    let terms = (0..=last)
        .map(|n| {
            let (occ, amp) = branch.term(n, t, c);
            (occ, amp * factor)
        })
        .filter(|&(_, amp)| amp != 0.0)
        .collect();
    Ok(mode_vector(FockStatistics::Boson, Truncation::Restricted { max_pairs }, terms))
}

/// `(N1/cosh r) sum_{n=0}^{M} tanh^n r |n_p n_a>`.
pub fn scalar_restricted_vacuum(r: f64, max_pairs: usize) -> Result<ModeVector> {
    scalar_restricted(ScalarBranch::Vacuum, r, max_pairs)
}

/// `(N2/cosh^2 r) sum_{n=0}^{M-1} sqrt(n+1) tanh^n r |(n+1)_p n_a>`.
pub fn scalar_restricted_one(r: f64, max_pairs: usize) -> Result<ModeVector> {
    scalar_restricted(ScalarBranch::One, r, max_pairs)
}

/// How a mode's in-states map to out-states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModeSpec {
    /// Not accelerated: `|0> -> |0_p 0_a>`, `|1> -> |1_p 0_a>`.
    Inertial,
    Fermion { r_f: f64 },
    Scalar { r: f64, epsilon: f64 },
    ScalarRestricted { r: f64, max_pairs: usize },
}

impl ModeSpec {
    fn statistics(&self) -> Option<FockStatistics> {
        match self {
            ModeSpec::Inertial => None,
            ModeSpec::Fermion { .. } => Some(FockStatistics::Fermion),
            ModeSpec::Scalar { .. } | ModeSpec::ScalarRestricted { .. } => Some(FockStatistics::Boson),
        }
    }

    pub fn mode_pair(&self) -> Result<ModePair> {
        Ok(match *self {
            ModeSpec::Inertial => ModePair {
                vacuum: mode_vector(FockStatistics::Fermion, Truncation::Exact, vec![([0, 0], 1.0)]),
                one: mode_vector(FockStatistics::Fermion, Truncation::Exact, vec![([1, 0], 1.0)]),
            },
            ModeSpec::Fermion { r_f } => ModePair {
                vacuum: fermion_out_vacuum(r_f)?,
                one: fermion_out_one(r_f)?,
            },
            ModeSpec::Scalar { r, epsilon } => ModePair {
                vacuum: scalar_out_vacuum(r, epsilon)?,
                one: scalar_out_one(r, epsilon)?,
            },
            ModeSpec::ScalarRestricted { r, max_pairs } => ModePair {
                vacuum: scalar_restricted_vacuum(r, max_pairs)?,
                one: scalar_restricted_one(r, max_pairs)?,
            },
        })
    }
}

impl std::str::FromStr for ModeSpec {
    type Err = Error;

    /// `inertial`, `fermion:<r_f>`, `scalar:<r>[:<epsilon>]` or
    /// `restricted:<r>:<M>`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<f64> {
            parts
                .get(i)
                .ok_or_else(|| Error::domain(format!("mode spec '{s}' is missing a parameter")))?
                .parse::<f64>()
                .map_err(|e| Error::domain(format!("mode spec '{s}': {e}")))
        };
        let spec = match parts[0] {
            "inertial" if parts.len() == 1 => ModeSpec::Inertial,
            "fermion" if parts.len() == 2 => ModeSpec::Fermion { r_f: num(1)? },
            "scalar" if parts.len() == 2 => ModeSpec::Scalar {
                r: num(1)?,
                epsilon: crate::DEFAULT_EPSILON,
            },
            "scalar" if parts.len() == 3 => ModeSpec::Scalar {
                r: num(1)?,
                epsilon: num(2)?,
            },
            "restricted" if parts.len() == 3 => ModeSpec::ScalarRestricted {
                r: num(1)?,
                max_pairs: parts[2]
                    .parse()
                    .map_err(|e| Error::domain(format!("mode spec '{s}': {e}")))?,
            },
            _ => return Err(Error::domain(format!("unrecognised mode spec '{s}'"))),
        };
        Ok(spec)
    }
}

/// Tensor product of a single-mode factor in `s` with one in `omega`,
/// scaled by `weight`, including the discarded-term bookkeeping.
fn product_branch(s: &ModeVector, w: &ModeVector, weight: f64, out: &mut BellVector) {
    let join = |a: &[u32; 2], b: &[u32; 2]| [a[0], a[1], b[0], b[1]];
    for (ks, &as_) in &s.terms {
        for (kw, &aw) in &w.terms {
            *out.terms.entry(join(ks, kw)).or_insert(0.0) += weight * as_ * aw;
        }
    }
    let full = |v: &ModeVector| -> Vec<([u32; 2], f64, bool)> {
        v.terms
            .iter()
            .map(|(k, &a)| (*k, a, true))
            .chain(v.discarded.iter().map(|(k, &a)| (*k, a, false)))
            .collect()
    };
    if !s.discarded.is_empty() || !w.discarded.is_empty() {
        let (fs, fw) = (full(s), full(w));
        for &(ks, as_, keep_s) in &fs {
            for &(kw, aw, keep_w) in &fw {
                if !(keep_s && keep_w) {
                    *out.discarded.entry(join(&ks, &kw)).or_insert(0.0) += weight * as_ * aw;
                }
            }
        }
    }
    let l1 = |v: &ModeVector| -> f64 { v.terms.values().chain(v.discarded.values()).map(|a| a.abs()).sum() };
    let (ls, lw) = (l1(s), l1(w));
    let (rs, rw) = (s.discarded_l1_remainder, w.discarded_l1_remainder);
    out.discarded_l1_remainder += weight * ((ls + rs) * (lw + rw) - ls * lw);
}

/// `(1/sqrt 2) (|0>_s |0>_omega + |1>_s |1>_omega)` with each in-state
/// replaced by its out-basis image under the corresponding spec.
pub fn build_bell_out(spec_s: &ModeSpec, spec_omega: &ModeSpec) -> Result<BellVector> {
    let statistics = match (spec_s.statistics(), spec_omega.statistics()) {
        (Some(a), Some(b)) if a != b => return Err(Error::MixedStatistics),
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => FockStatistics::Fermion,
    };
    let s = spec_s.mode_pair()?;
    let w = spec_omega.mode_pair()?;
    let mut out = FockVector {
        statistics,
        truncation: vec![s.one.truncation[0], w.one.truncation[0]],
        terms: BTreeMap::new(),
        truncation_tail: 0.0,
        discarded: BTreeMap::new(),
        discarded_l1_remainder: 0.0,
    };
    product_branch(&s.vacuum, &w.vacuum, FRAC_1_SQRT_2, &mut out);
    product_branch(&s.one, &w.one, FRAC_1_SQRT_2, &mut out);
    let kept = |a: &ModeVector, b: &ModeVector| (1.0 - a.truncation_tail) * (1.0 - b.truncation_tail);
    out.truncation_tail = (1.0 - 0.5 * (kept(&s.vacuum, &w.vacuum) + kept(&s.one, &w.one))).max(0.0);
    out.terms.retain(|_, a| *a != 0.0);
    Ok(out)
}
