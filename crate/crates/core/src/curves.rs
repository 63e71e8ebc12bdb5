//! Parameter sweeps producing the tables behind each figure, with residual
//! and truncation-error columns.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::bogoliubov::{spectra, Statistics, FERMION_R_MAX, SCALAR_R_MAX};
use crate::entanglement::{
    analyze, fermion_closed_forms, scalar_closed_forms, EntanglementReport, Scenario, Subsystem,
};
use crate::error::{Error, Result};
use crate::fock::{build_bell_out, scalar_cutoff, BellVector, ModeSpec};
use crate::packets::{schmidt_number_closed, PacketParams, Sign, TwoBodyParams, TwoBodyState};
use crate::DEFAULT_EPSILON;

pub const DEFAULT_POINTS: usize = 101;
pub const DEFAULT_V_TILDE_MAX: f64 = 4.0;
pub const DEFAULT_PACKET_POINTS: usize = 101;
/// Packet grids span the outermost centres plus this many widths.
pub const PACKET_RANGE_SIGMAS: f64 = 5.0;

/// The nine figure tables, by file stem.
pub const FIGURE_IDS: [&str; 9] = [
    "bfacc", "enb_1", "encp_1", "nop_tp", "bsacc_1", "bsacc_2", "schno", "accwp_0", "accwp_2",
];

/// A rectangular table of floats with `#` metadata lines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: Vec<String>) -> Self {
        Table {
            name: name.into(),
            metadata: Vec::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.push((key.to_string(), value.to_string()));
        self
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Keeps only the named columns, in the given order.
    pub fn select(&self, names: &[&str]) -> Result<Table> {
        let idx: Vec<usize> = names
            .iter()
            .map(|n| self.column_index(n).ok_or_else(|| Error::domain(format!("no column '{n}'"))))
            .collect::<Result<_>>()?;
        Ok(Table {
            name: self.name.clone(),
            metadata: self.metadata.clone(),
            columns: names.iter().map(|s| s.to_string()).collect(),
            rows: self.rows.iter().map(|r| idx.iter().map(|&i| r[i]).collect()).collect(),
        })
    }

    /// Concatenates tables with identical columns, prefixing a key column.
    pub fn stack(name: &str, key: &str, parts: Vec<(f64, Table)>) -> Result<Table> {
        let first = parts.first().ok_or_else(|| Error::domain("nothing to stack"))?;
        let mut columns = vec![key.to_string()];
        columns.extend(first.1.columns.iter().cloned());
        let mut out = Table::new(name, columns);
        out.metadata = first.1.metadata.clone();
        for (k, part) in &parts {
            if part.columns != first.1.columns {
                return Err(Error::domain("stacked tables must share columns"));
            }
            for row in &part.rows {
                let mut r = vec![*k];
                r.extend(row);
                out.rows.push(r);
            }
        }
        Ok(out)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        writeln!(s, "# table: {}", self.name).unwrap();
        for (k, v) in &self.metadata {
            writeln!(s, "# {k}: {v}").unwrap();
        }
        writeln!(s, "{}", self.columns.join(",")).unwrap();
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format_float(*v)).collect();
            writeln!(s, "{}", cells.join(",")).unwrap();
        }
        s
    }

    /// Non-finite values become `null`.
    pub fn to_json(&self) -> serde_json::Value {
        let metadata: serde_json::Map<String, serde_json::Value> =
            self.metadata.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        json!({
            "name": self.name,
            "metadata": metadata,
            "columns": self.columns,
            "rows": self.rows,
        })
    }

    pub fn write_csv(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_csv())
    }
}

/// Seventeen significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}

pub fn default_fermion_grid() -> Vec<f64> {
    linspace(0.0, FERMION_R_MAX, DEFAULT_POINTS)
}

pub fn default_scalar_grid() -> Vec<f64> {
    linspace(0.0, SCALAR_R_MAX, DEFAULT_POINTS)
}

pub fn default_v_tilde_grid() -> Vec<f64> {
    linspace(0.0, DEFAULT_V_TILDE_MAX, DEFAULT_POINTS)
}

fn describe_grid(grid: &[f64]) -> String {
    match (grid.first(), grid.last()) {
        (Some(a), Some(b)) => format!("{} points on [{a}, {b}]", grid.len()),
        _ => "empty".into(),
    }
}

fn map_grid<T, R, F>(grid: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        grid.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        grid.iter().map(f).collect()
    }
}

/// What to sweep: statistics, scenarios, grid and truncation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub statistics: Statistics,
    pub scenarios: Vec<Scenario>,
    pub grid: Vec<f64>,
    pub epsilon: f64,
    pub restriction: Option<usize>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let hi = match self.statistics {
            Statistics::Fermion => FERMION_R_MAX,
            Statistics::Scalar => SCALAR_R_MAX,
        };
        if self.grid.is_empty() {
            return Err(Error::domain("grid is empty"));
        }
        if let Some(bad) = self.grid.iter().find(|&&r| !(r >= 0.0 && r <= hi * (1.0 + 1e-12))) {
            return Err(Error::domain(format!("grid value {bad} outside [0, {hi}]")));
        }
        if self.scenarios.is_empty() {
            return Err(Error::domain("no scenario selected"));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::domain(format!("epsilon must lie in (0, 1), got {}", self.epsilon)));
        }
        if self.restriction == Some(0) {
            return Err(Error::domain("the pair restriction M must be at least 1"));
        }
        if self.statistics == Statistics::Fermion && self.restriction.is_some() {
            return Err(Error::domain("a pair restriction only applies to scalar fields"));
        }
        Ok(())
    }

    pub fn run(&self) -> Result<Table> {
        self.validate()?;
        match self.statistics {
            Statistics::Fermion => fermion_table(&self.grid, &self.scenarios),
            Statistics::Scalar => scalar_table(&self.grid, self.epsilon, self.restriction, &self.scenarios),
        }
    }
}

fn ln_column(scenario: Scenario, s: Subsystem) -> String {
    match (scenario, s) {
        (Scenario::BothAccelerated, Subsystem::Total) => "LN_total_both".into(),
        _ => format!("LN_{}", s.label()),
    }
}

fn all_ln_columns(scenarios: &[Scenario]) -> Vec<(Scenario, Subsystem, String)> {
    scenarios
        .iter()
        .flat_map(|&sc| sc.subsystems().iter().map(move |&s| (sc, s, ln_column(sc, s))))
        .collect()
}

fn reports(state: &BellVector, subs: &[Subsystem]) -> Result<Vec<EntanglementReport>> {
    subs.iter().map(|s| analyze(state, &s.bipartition())).collect()
}

/// `sum of subsystem negativities - total negativity` for one scenario.
fn additivity_gap(subs: &[Subsystem], reps: &[EntanglementReport]) -> f64 {
    let mut gap = 0.0;
    for (s, r) in subs.iter().zip(reps) {
        if *s == Subsystem::Total {
            gap -= r.negativity;
        } else {
            gap += r.negativity;
        }
    }
    gap
}

fn sorted_scenarios(scenarios: &[Scenario]) -> Vec<Scenario> {
    [Scenario::OneAccelerated, Scenario::BothAccelerated]
        .into_iter()
        .filter(|s| scenarios.contains(s))
        .collect()
}

/// Fermion log-negativities for both scenarios, with residuals against the
/// closed forms and the negativity additivity gaps.
pub fn fermion_curves(grid: &[f64]) -> Result<Table> {
    fermion_table(grid, &[Scenario::OneAccelerated, Scenario::BothAccelerated])
}

pub fn fermion_table(grid: &[f64], scenarios: &[Scenario]) -> Result<Table> {
    let scenarios = sorted_scenarios(scenarios);
    let ln_cols = all_ln_columns(&scenarios);
    let mut columns = vec!["r_f".to_string()];
    columns.extend(ln_cols.iter().map(|c| c.2.clone()));
    columns.extend(ln_cols.iter().map(|c| format!("res_{}", &c.2[3..])));
    columns.extend(scenarios.iter().map(|sc| match sc {
        Scenario::OneAccelerated => "additivity_one".to_string(),
        Scenario::BothAccelerated => "additivity_both".to_string(),
    }));
    let rows = map_grid(grid, |&r_f| -> Result<Vec<f64>> {
        let mut ln = Vec::new();
        let mut res = Vec::new();
        let mut gaps = Vec::new();
        for &sc in &scenarios {
            let s_spec = match sc {
                Scenario::OneAccelerated => ModeSpec::Inertial,
                Scenario::BothAccelerated => ModeSpec::Fermion { r_f },
            };
            let state = build_bell_out(&s_spec, &ModeSpec::Fermion { r_f })?;
            let subs = sc.subsystems();
            let reps = reports(&state, subs)?;
            let cf = fermion_closed_forms(r_f, sc)?;
            for (s, rep) in subs.iter().zip(&reps) {
                ln.push(rep.log_negativity);
                res.push((rep.log_negativity - cf.get(*s).expect("closed form present")).abs());
            }
            gaps.push(additivity_gap(subs, &reps));
        }
        let mut row = vec![r_f];
        row.extend(ln);
        row.extend(res);
        row.extend(gaps);
        Ok(row)
    })?;
    let mut table = Table::new("fermion", columns)
        .meta("statistics", "fermion")
        .meta("grid", describe_grid(grid))
        .meta("truncation", "exact");
    table.rows = rows;
    Ok(table)
}

/// Scalar log-negativities with truncation-error bounds; `restriction`
/// selects the state with at most `M` produced pairs.
pub fn scalar_curves(grid: &[f64], epsilon: f64, restriction: Option<usize>) -> Result<Table> {
    scalar_table(
        grid,
        epsilon,
        restriction,
        &[Scenario::OneAccelerated, Scenario::BothAccelerated],
    )
}

pub fn scalar_table(
    grid: &[f64],
    epsilon: f64,
    restriction: Option<usize>,
    scenarios: &[Scenario],
) -> Result<Table> {
    let scenarios = sorted_scenarios(scenarios);
    let ln_cols = all_ln_columns(&scenarios);
    let one = scenarios.contains(&Scenario::OneAccelerated);
    let mut columns = vec!["r".to_string()];
    columns.extend(ln_cols.iter().map(|c| c.2.clone()));
    columns.extend(ln_cols.iter().map(|c| format!("bound_{}", &c.2[3..])));
    if one {
        for c in ["LN_sp_closed", "LN_sa_closed", "closed_error", "res_sp", "res_sa"] {
            columns.push(c.into());
        }
    }
    columns.extend(scenarios.iter().map(|sc| match sc {
        Scenario::OneAccelerated => "additivity_one".to_string(),
        Scenario::BothAccelerated => "additivity_both".to_string(),
    }));
    columns.push("truncation_error".into());
    let mode = |r: f64| match restriction {
        Some(m) => ModeSpec::ScalarRestricted { r, max_pairs: m },
        None => ModeSpec::Scalar { r, epsilon },
    };
    let rows = map_grid(grid, |&r| -> Result<Vec<f64>> {
        let mut ln = Vec::new();
        let mut bounds = Vec::new();
        let mut gaps = Vec::new();
        let mut closed = Vec::new();
        for &sc in &scenarios {
            let s_spec = match sc {
                Scenario::OneAccelerated => ModeSpec::Inertial,
                Scenario::BothAccelerated => mode(r),
            };
            let state = build_bell_out(&s_spec, &mode(r))?;
            let subs = sc.subsystems();
            let reps = reports(&state, subs)?;
            for rep in &reps {
                ln.push(rep.log_negativity);
                bounds.push(rep.truncation_error);
            }
            gaps.push(additivity_gap(subs, &reps));
            if sc == Scenario::OneAccelerated {
                let cf = scalar_closed_forms(r, restriction)?;
                let sp = cf.get(Subsystem::Sp).expect("sp closed form");
                let sa = cf.get(Subsystem::Sa).expect("sa closed form");
                let pick = |s: Subsystem| reps[subs.iter().position(|&x| x == s).expect("subsystem")].log_negativity;
                closed = vec![sp, sa, cf.error_bound, (pick(Subsystem::Sp) - sp).abs(), (pick(Subsystem::Sa) - sa).abs()];
            }
        }
        let worst = bounds.iter().copied().fold(0.0, f64::max);
        let mut row = vec![r];
        row.extend(ln);
        row.extend(bounds);
        row.extend(closed);
        row.extend(gaps);
        row.push(worst);
        Ok(row)
    })?;
    let r_max = grid.iter().copied().fold(0.0, f64::max);
    let mut table = Table::new("scalar", columns)
        .meta("statistics", "scalar")
        .meta("grid", describe_grid(grid));
    table = match restriction {
        Some(m) => table.meta("truncation", format!("at most {m} pairs, renormalised")),
        None => table
            .meta("truncation", "series cutoff, not renormalised")
            .meta("epsilon", epsilon)
            .meta("cutoff_at_max_r", scalar_cutoff(r_max, epsilon)?),
    };
    table.rows = rows;
    Ok(table)
}

/// `LN_sp` and `LN_sa` at fixed `r` as a function of the pair restriction.
pub fn pairs_scan(ms: &[usize], r: f64) -> Result<Table> {
    if let Some(&bad) = ms.iter().find(|&&m| m == 0) {
        return Err(Error::domain(format!("pair restriction must be positive, got {bad}")));
    }
    let columns = ["M", "LN_sp", "LN_sa", "LN_sp_closed", "LN_sa_closed", "res_sp", "res_sa"];
    let rows = map_grid(ms, |&m| -> Result<Vec<f64>> {
        let state = build_bell_out(&ModeSpec::Inertial, &ModeSpec::ScalarRestricted { r, max_pairs: m })?;
        let sp = analyze(&state, &Subsystem::Sp.bipartition())?.log_negativity;
        let sa = analyze(&state, &Subsystem::Sa.bipartition())?.log_negativity;
        let cf = scalar_closed_forms(r, Some(m))?;
        let (csp, csa) = (cf.get(Subsystem::Sp).unwrap(), cf.get(Subsystem::Sa).unwrap());
        Ok(vec![m as f64, sp, sa, csp, csa, (sp - csp).abs(), (sa - csa).abs()])
    })?;
    let mut table = Table::new("pairs_scan", columns.iter().map(|s| s.to_string()).collect())
        .meta("statistics", "scalar")
        .meta("r", r);
    table.rows = rows;
    Ok(table)
}

/// Closed-form and numerical (inverse purity) Schmidt numbers at `t = 0`
/// for unit mass and width. `K_minus_numeric` is undefined at `v_tilde = 0`.
pub fn schmidt_curve(grid: &[f64]) -> Result<Table> {
    if let Some(bad) = grid.iter().find(|v| !v.is_finite()) {
        return Err(Error::domain(format!("invalid v_tilde {bad}")));
    }
    let columns = [
        "v_tilde",
        "K_plus",
        "K_plus_numeric",
        "K_minus",
        "K_minus_numeric",
        "purity_plus",
        "purity_minus",
        "res_plus",
        "res_minus",
    ];
    let rows = map_grid(grid, |&v| -> Result<Vec<f64>> {
        let plus = TwoBodyState::new(TwoBodyParams::from_v_tilde(v, Sign::Plus), 0.0)?.schmidt()?;
        let minus = if v == 0.0 {
            None
        } else {
            Some(TwoBodyState::new(TwoBodyParams::from_v_tilde(v, Sign::Minus), 0.0)?.schmidt()?)
        };
        let kp = schmidt_number_closed(v, Sign::Plus);
        let km = schmidt_number_closed(v, Sign::Minus);
        let (kmn, pm) = minus.map_or((f64::NAN, f64::NAN), |m| (m.schmidt_number, m.purity));
        Ok(vec![
            v,
            kp,
            plus.schmidt_number,
            km,
            kmn,
            plus.purity,
            pm,
            (plus.schmidt_number - kp).abs(),
            (kmn - km).abs(),
        ])
    })?;
    let mut table = Table::new("schmidt", columns.iter().map(|s| s.to_string()).collect())
        .meta("grid", describe_grid(grid))
        .meta("mass", 1)
        .meta("b", 1)
        .meta("t", 0);
    table.rows = rows;
    Ok(table)
}

/// Accelerated-particle and Unruh spectra over a grid of accelerations.
pub fn spectra_curve(mass: f64, omega: f64, accels: &[f64]) -> Result<Table> {
    let columns = ["accel", "S_accelerated", "S_unruh", "sinh2_r", "identity_residual"];
    let rows = map_grid(accels, |&a| -> Result<Vec<f64>> {
        let s = spectra(mass, a, omega)?;
        Ok(vec![a, s.accelerated, s.unruh, s.sinh2_r, (s.sinh2_r - s.accelerated).abs()])
    })?;
    let mut table = Table::new("spectra", columns.iter().map(|s| s.to_string()).collect())
        .meta("mass", mass)
        .meta("omega", omega)
        .meta("grid", describe_grid(accels));
    table.rows = rows;
    Ok(table)
}

/// Square window covering both coordinates' packet centres at time `t`.
pub fn packet_window(params: &TwoBodyParams, t: f64) -> (f64, f64) {
    let [(a0, b0), (a1, b1)] = params.factors();
    let all: [PacketParams; 4] = [a0, b0, a1, b1];
    let lo = all.iter().map(|p| p.center(t) - PACKET_RANGE_SIGMAS * p.sigma(t)).fold(f64::INFINITY, f64::min);
    let hi = all.iter().map(|p| p.center(t) + PACKET_RANGE_SIGMAS * p.sigma(t)).fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// `|Psi(x, y, t)|` on an `n x n` grid; `range` defaults to
/// [`packet_window`].
pub fn packet_grid(params: TwoBodyParams, t: f64, n: usize, range: Option<(f64, f64)>) -> Result<Table> {
    if n < 2 {
        return Err(Error::domain("a packet grid needs at least 2 points per axis"));
    }
    let (lo, hi) = range.unwrap_or_else(|| packet_window(&params, t));
    if !(lo < hi) {
        return Err(Error::domain(format!("invalid packet range [{lo}, {hi}]")));
    }
    let state = TwoBodyState::new(params, t)?;
    let axis = linspace(lo, hi, n);
    let rows: Vec<Vec<Vec<f64>>> = map_grid(&axis, |&x| {
        Ok(axis.iter().map(|&y| vec![t, x, y, state.amplitude(x, y).norm()]).collect())
    })?;
    let mut table = Table::new("packet", vec!["t".into(), "x".into(), "y".into(), "abs_psi".into()])
        .meta("mass", params.mass)
        .meta("b", params.b)
        .meta("x0", params.x0)
        .meta("v1", params.v1)
        .meta("v2", params.v2)
        .meta("a1", params.a1)
        .meta("a2", params.a2)
        .meta("sign", format!("{:?}", params.sign).to_lowercase())
        .meta("grid", format!("{n} x {n} on [{lo}, {hi}]^2"));
    table.rows = rows.into_iter().flatten().collect();
    Ok(table)
}

/// Parameters of the two-body packet snapshots.
pub fn figure_packet_params(accelerated: bool) -> TwoBodyParams {
    let a = if accelerated { 0.5 } else { 0.0 };
    TwoBodyParams {
        mass: 1.0,
        b: 1.0,
        x0: 0.0,
        v1: -1.0,
        v2: 1.0,
        a1: -a,
        a2: a,
        sign: Sign::Plus,
    }
}

fn named(mut t: Table, name: &str) -> Table {
    t.name = name.to_string();
    t
}

/// Builds the table for one figure id.
pub fn figure(id: &str, epsilon: f64) -> Result<Table> {
    let sgrid = default_scalar_grid();
    let both = [Scenario::OneAccelerated, Scenario::BothAccelerated];
    let t = match id {
        "bfacc" => fermion_curves(&default_fermion_grid())?,
        "enb_1" => scalar_table(&sgrid, epsilon, None, &both)?,
        "encp_1" => Table::stack(
            id,
            "M",
            vec![
                (1.0, scalar_table(&sgrid, epsilon, Some(1), &[Scenario::OneAccelerated])?),
                (2.0, scalar_table(&sgrid, epsilon, Some(2), &[Scenario::OneAccelerated])?),
            ],
        )?,
        "nop_tp" => pairs_scan(&(1..=10).collect::<Vec<_>>(), SCALAR_R_MAX)?,
        "bsacc_1" => scalar_table(&sgrid, epsilon, Some(1), &both)?,
        "bsacc_2" => scalar_table(&sgrid, epsilon, Some(2), &both)?,
        "schno" => schmidt_curve(&default_v_tilde_grid())?,
        "accwp_0" => {
            let p = figure_packet_params(true);
            let mut a = packet_grid(p, 0.0, DEFAULT_PACKET_POINTS, None)?;
            let b = packet_grid(p, 15.0, DEFAULT_PACKET_POINTS, None)?;
            a.metadata.retain(|(k, _)| k != "grid");
            a.metadata.push(("grid".into(), "per snapshot, see t column".into()));
            a.rows.extend(b.rows);
            a
        }
        "accwp_2" => packet_grid(figure_packet_params(false), 15.0, DEFAULT_PACKET_POINTS, None)?,
        _ => return Err(Error::domain(format!("unknown figure id '{id}'"))),
    };
    Ok(named(t, id))
}

/// Writes every figure table as `<id>.csv` under `dir`, returning the paths.
pub fn write_figures(dir: &Path, epsilon: f64) -> Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::domain(format!("cannot create {}: {e}", dir.display())))?;
    let mut paths = Vec::new();
    for id in FIGURE_IDS {
        let table = figure(id, epsilon)?;
        let path = dir.join(format!("{id}.csv"));
        table
            .write_csv(&path)
            .map_err(|e| Error::domain(format!("cannot write {}: {e}", path.display())))?;
        paths.push(path);
    }
    Ok(paths)
}

/// Figures at the default truncation.
pub fn write_default_figures(dir: &Path) -> Result<Vec<std::path::PathBuf>> {
    write_figures(dir, DEFAULT_EPSILON)
}
