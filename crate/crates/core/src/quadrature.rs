//! Adaptive Gauss-Kronrod (7/15) quadrature for complex-valued integrands,
//! plus a fixed tensor-product rule for two-dimensional checks.

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights at the odd-indexed Kronrod nodes.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-14,
            rel: 1e-13,
            max_intervals: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

fn kronrod_panel<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * w;
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    Panel {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).norm(),
    }
}

/// Integrates `f` over `[a, b]`, bisecting the panel with the largest error
/// estimate until the total estimate meets `tol`.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate> {
    if !(a.is_finite() && b.is_finite()) || b <= a {
        return Err(Error::domain(format!("invalid integration interval [{a}, {b}]")));
    }
    let mut panels = vec![kronrod_panel(&f, a, b)];
    loop {
        let total = compensated_sum(&mut panels);
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if error <= tol.abs.max(tol.rel * total.norm()) {
            return Ok(Estimate {
                value: total,
                error,
                intervals: panels.len(),
            });
        }
        if panels.len() >= tol.max_intervals {
            return Err(Error::Convergence {
                routine: "gauss-kronrod",
                detail: format!(
                    "error estimate {error:.3e} above tolerance after {} panels on [{a}, {b}], value {total}",
                    panels.len()
                ),
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        panels.push(kronrod_panel(&f, p.a, mid));
        panels.push(kronrod_panel(&f, mid, p.b));
    }
}

/// Sums panel values in order of their left endpoint with Neumaier
/// compensation, so the result does not depend on refinement history.
fn compensated_sum(panels: &mut [Panel]) -> Complex64 {
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let (mut re, mut im) = (Neumaier::default(), Neumaier::default());
    for p in panels.iter() {
        re.add(p.value.re);
        im.add(p.value.im);
    }
    Complex64::new(re.total(), im.total())
}

#[derive(Default)]
struct Neumaier {
    sum: f64,
    carry: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Composite tensor-product Gauss-Kronrod rule on a rectangle split into
/// `panels x panels` cells. The returned error compares against the embedded
/// 7-point Gauss tensor rule.
pub fn tensor_product_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    x_range: (f64, f64),
    y_range: (f64, f64),
    panels: usize,
) -> Result<(f64, f64)> {
    if panels == 0 || x_range.1 <= x_range.0 || y_range.1 <= y_range.0 {
        return Err(Error::domain("invalid tensor-product rectangle"));
    }
    let nodes = |lo: f64, hi: f64| -> Vec<(f64, f64, f64)> {
        // (abscissa, kronrod weight, gauss weight)
        let h = (hi - lo) / panels as f64;
        let mut out = Vec::with_capacity(15 * panels);
        for k in 0..panels {
            let a = lo + h * k as f64;
            let c = a + 0.5 * h;
            let half = 0.5 * h;
            out.push((c, WGK[7] * half, WG[3] * half));
            for j in 0..7 {
                let wg = if j % 2 == 1 { WG[j / 2] * half } else { 0.0 };
                out.push((c - half * XGK[j], WGK[j] * half, wg));
                out.push((c + half * XGK[j], WGK[j] * half, wg));
            }
        }
        out
    };
    let xs = nodes(x_range.0, x_range.1);
    let ys = nodes(y_range.0, y_range.1);
    let (mut kronrod, mut gauss) = (Neumaier::default(), Neumaier::default());
    for &(x, wkx, wgx) in &xs {
        let (mut row_k, mut row_g) = (Neumaier::default(), Neumaier::default());
        for &(y, wky, wgy) in &ys {
            let v = f(x, y);
            row_k.add(v * wky);
            if wgy != 0.0 {
                row_g.add(v * wgy);
            }
        }
        kronrod.add(row_k.total() * wkx);
        if wgx != 0.0 {
            gauss.add(row_g.total() * wgx);
        }
    }
    let value = kronrod.total();
    Ok((value, (value - gauss.total()).abs()))
}
