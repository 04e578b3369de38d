//! Where a secret key survives: `ΔI = I^{AB} − I^{AE} > 0`.

use alloc::vec::Vec;

use crate::error::{check_range, Error, Result};
use crate::infotheory::{
    binary_entropy, binary_entropy_difference, equal_concurrence_flip, i_ab,
    i_ae_equal_concurrence, i_ae_independent, independent_flip,
};

/// Disturbance beyond which the standard six-state attack leaves no key.
pub const BRUSS_THRESHOLD: f64 = 0.1565;

/// `|ΔI|` values below this are reported as indistinguishable from zero.
pub const DELTA_FLOOR: f64 = 1e-12;

/// Default distance of sweep grids from the endpoints of `(0, ½)`.
pub const DEFAULT_D_MIN: f64 = 1e-3;

const BISECTION_MAX_ITER: usize = 200;
const BISECTION_TOL: f64 = 1e-12;

/// Which Alice–Eve expression is compared against Alice–Bob.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KeyRegionMode {
    /// Eve's information depends on `D` (equal ψ and χ concurrences, lower branch).
    Dependent,
    /// Eve's information depends only on the concurrence (upper branch).
    Independent,
}

impl KeyRegionMode {
    pub fn name(self) -> &'static str {
        match self {
            KeyRegionMode::Dependent => "dependent",
            KeyRegionMode::Independent => "independent",
        }
    }
}

impl core::str::FromStr for KeyRegionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dependent" => Ok(KeyRegionMode::Dependent),
            "independent" => Ok(KeyRegionMode::Independent),
            _ => Err(Error::OutOfRange {
                name: "mode",
                value: f64::NAN,
                range: "{dependent, independent}",
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub c: f64,
    pub d: f64,
    pub i_ab: f64,
    pub i_ae: f64,
    pub delta: f64,
    pub key: bool,
}

fn eve_information(mode: KeyRegionMode, c: f64, d: f64) -> Result<f64> {
    match mode {
        KeyRegionMode::Dependent => i_ae_equal_concurrence(c, d),
        KeyRegionMode::Independent => i_ae_independent(c),
    }
}

fn check_point(mode: KeyRegionMode, c: f64, d: f64) -> Result<()> {
    match mode {
        KeyRegionMode::Dependent => check_range("C", c, 0.0, 1.0, "[0, 1]")?,
        KeyRegionMode::Independent => {
            check_range("C", c, 0.0, 1.0, "(0, 1]")?;
            if c == 0.0 {
                return Err(Error::SingularConcurrence);
            }
        }
    }
    check_range("D", d, 0.0, 0.5, "[0, 0.5]")
}

/// `I^{AB}(d) − I^{AE}`.
///
/// Both modes reduce to `h(p) − h(d)` for a flip probability `p`; the
/// difference is taken with [`binary_entropy_difference`] so that it keeps
/// relative precision when `p` is close to `d`.
pub fn delta_i(mode: KeyRegionMode, c: f64, d: f64) -> Result<f64> {
    check_point(mode, c, d)?;
    let p = match mode {
        KeyRegionMode::Dependent => equal_concurrence_flip(c, d)?,
        KeyRegionMode::Independent => independent_flip(c)?,
    };
    if (p - d).abs() < 0.25 * d.min(1.0 - d) {
        binary_entropy_difference(d, p - d)
    } else {
        Ok(binary_entropy(p)? - binary_entropy(d)?)
    }
}

pub fn row(mode: KeyRegionMode, c: f64, d: f64) -> Result<SweepRow> {
    let delta = delta_i(mode, c, d)?;
    Ok(SweepRow {
        c,
        d,
        i_ab: i_ab(d)?,
        i_ae: eve_information(mode, c, d)?,
        delta,
        key: delta > 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub mode: KeyRegionMode,
    pub c: f64,
    /// Disturbance where `ΔI` changes sign inside `(0, ½)`, if it does.
    pub d_star: Option<f64>,
    /// Smallest `d` past which `|ΔI| < DELTA_FLOOR` all the way to ½.
    pub precision_floor: Option<f64>,
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let f_lo = f(lo)?;
    for _ in 0..BISECTION_MAX_ITER {
        if hi - lo <= BISECTION_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm > 0.0) == (f_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Largest grid point maximizing `|ΔI|`, then bisection for `|ΔI| = DELTA_FLOOR` above it.
fn precision_floor(mode: KeyRegionMode, c: f64) -> Result<Option<f64>> {
    const GRID: usize = 1000;
    let mut peak = 0.0;
    let mut peak_val = 0.0f64;
    for i in 1..GRID {
        let d = 0.5 * i as f64 / GRID as f64;
        let v = delta_i(mode, c, d)?.abs();
        if v > peak_val {
            peak_val = v;
            peak = d;
        }
    }
    if peak_val < DELTA_FLOOR {
        return Ok(Some(0.0));
    }
    let g = |d: f64| delta_i(mode, c, d).map(|v| v.abs() - DELTA_FLOOR);
    if g(0.5)? >= 0.0 {
        return Ok(None);
    }
    bisect(peak, 0.5, g).map(Some)
}

/// Bisection for the sign change of `ΔI` in `d ∈ [0, ½]`.
///
/// `d_star` is `None` when `ΔI` keeps a strict sign (or vanishes) on the
/// open interval, i.e. the key survives everywhere or nowhere.
pub fn critical_disturbance(mode: KeyRegionMode, c: f64) -> Result<CriticalPoint> {
    check_point(mode, c, 0.25)?;
    let f = |d: f64| delta_i(mode, c, d);
    let lo = f(0.0)?;
    let hi = f(0.5)?;
    let d_star = if lo * hi < 0.0 {
        Some(bisect(0.0, 0.5, f)?)
    } else {
        None
    };
    Ok(CriticalPoint {
        mode,
        c,
        d_star,
        precision_floor: precision_floor(mode, c)?,
    })
}

/// Closed-form crossing for the independent mode, `(1 − √(1 − c²))/2`.
pub fn independent_threshold(c: f64) -> Result<f64> {
    independent_flip(c)
}

/// Inclusive disturbance range of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DRange {
    pub min: f64,
    pub max: f64,
}

impl Default for DRange {
    fn default() -> Self {
        Self {
            min: DEFAULT_D_MIN,
            max: 0.5 - DEFAULT_D_MIN,
        }
    }
}

/// Uniform `d` grid of `steps` points per concurrence; rows ordered by `(c, d)`
/// in the order the concurrences are given.
pub fn sweep(
    mode: KeyRegionMode,
    c_values: &[f64],
    range: DRange,
    steps: usize,
) -> Result<Vec<SweepRow>> {
    if c_values.is_empty() {
        return Err(Error::Dimension("no concurrence values"));
    }
    if range.min.is_nan() || range.max.is_nan() || range.min > range.max {
        return Err(Error::OutOfRange {
            name: "d range",
            value: range.min,
            range: "min <= max",
        });
    }
    if steps == 0 || (steps == 1 && range.min != range.max) {
        return Err(Error::OutOfRange {
            name: "steps",
            value: steps as f64,
            range: ">= 2 (or 1 for a single point)",
        });
    }
    let mut rows = Vec::with_capacity(c_values.len() * steps);
    for &c in c_values {
        for i in 0..steps {
            let d = if steps == 1 {
                range.min
            } else {
                range.min + (range.max - range.min) * i as f64 / (steps - 1) as f64
            };
            rows.push(row(mode, c, d)?);
        }
    }
    Ok(rows)
}

/// Whether the standard six-state attack still leaves a key at disturbance `d`.
pub fn bruss_baseline(d: f64) -> bool {
    d < BRUSS_THRESHOLD
}
