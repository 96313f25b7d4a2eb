//! Orbit classification over dynamical-plane grids, parameter sweeps on the
//! unit circle, and deterministic raster rendering.

use crate::rotation::RotationNumber;
use crate::siegel;
use crate::tangent::{EvalResult, TangentMap};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("resolution must be positive and at most 8192 per axis")]
    BadResolution,
    #[error("output failed: {0}")]
    IoFailure(#[from] std::io::Error),
}

/// Once |Im z| exceeds this, tan(z) equals +-i to double precision
/// (tanh saturation), and cos/sin would overflow anyway.
pub const DEEP_HALFPLANE_IM: f64 = 17.0;

/// Parallel work unit: square tiles of cells.
const TILE: usize = 64;

/// Variance bound on argument increments under which a bounded,
/// non-converging orbit reads as rotation-like. Heuristic.
const ROTATION_VARIANCE_TOL: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanConfig {
    pub max_iter: u32,
    pub escape_im: f64,
    pub cycle_tol: f64,
    pub cycle_max_period: u32,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            max_iter: 2000,
            escape_im: DEEP_HALFPLANE_IM,
            cycle_tol: 1e-9,
            cycle_max_period: 8,
        }
    }
}

impl ScanConfig {
    /// Default config with the escape height grounded in the strip geometry:
    /// escape_im = max(17, R) with R the half-plane radius for disks of
    /// radius 0.25|lambda| around the asymptotic values.
    pub fn for_map(map: &TangentMap) -> Self {
        let r = map
            .halfplane_radius_for_disk(0.25 * map.lambda().norm())
            .map(|s| s.half_width)
            .unwrap_or(0.0);
        Self {
            escape_im: DEEP_HALFPLANE_IM.max(r),
            ..Self::default()
        }
    }
}

/// Per-cell dynamical classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CellTag {
    AttractedToCycle { period: u32 },
    SiegelCandidate,
    NearPoleEscape,
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellClass {
    pub tag: CellTag,
    pub iterations_used: u32,
}

/// An attracting cycle detected from the singular orbits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleInfo {
    pub period: u32,
    #[serde(skip)]
    pub representative: Complex64,
    #[serde(skip)]
    pub multiplier: Complex64,
    #[serde(skip)]
    pub points: Vec<Complex64>,
}

/// One iteration step with the deep-half-plane shortcut: past the
/// saturation height tan(z) is replaced by its limit +-i exactly.
pub fn step(map: &TangentMap, z: Complex64) -> EvalResult {
    if z.im.abs() > DEEP_HALFPLANE_IM {
        let (av1, av2) = map.asymptotic_values();
        return EvalResult::Finite(if z.im > 0.0 { av1 } else { av2 });
    }
    map.evaluate(z)
}

/// Iterate f for up to n steps. A pole hit terminates the orbit with the
/// prefix (ending in the Pole marker) returned.
pub fn orbit(map: &TangentMap, z0: Complex64, n: usize, _config: &ScanConfig) -> Vec<EvalResult> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(EvalResult::Finite(z0));
    let mut z = z0;
    for _ in 0..n {
        match step(map, z) {
            EvalResult::Finite(v) => {
                out.push(EvalResult::Finite(v));
                z = v;
            }
            EvalResult::Pole => {
                out.push(EvalResult::Pole);
                break;
            }
        }
    }
    out
}

/// Iterate both asymptotic values and look for convergence to a cycle of
/// period <= cycle_max_period. Absence is a valid result.
pub fn detect_cycle(map: &TangentMap, config: &ScanConfig) -> Option<CycleInfo> {
    let (av1, av2) = map.asymptotic_values();
    for start in [av1, av2] {
        if let Some(info) = cycle_from(map, start, config) {
            return Some(info);
        }
    }
    None
}

fn cycle_from(map: &TangentMap, z0: Complex64, config: &ScanConfig) -> Option<CycleInfo> {
    let p_max = config.cycle_max_period as usize;
    let mut window: Vec<Complex64> = Vec::with_capacity(p_max + 1);
    let mut z = z0;
    for _ in 0..config.max_iter {
        window.push(z);
        if window.len() > p_max + 1 {
            window.remove(0);
        }
        let next = match step(map, z) {
            EvalResult::Finite(v) => v,
            EvalResult::Pole => return None,
        };
        // recurrence check against the trailing window
        let m = window.len();
        for p in 1..=p_max.min(m) {
            if (next - window[m - p]).norm() < config.cycle_tol {
                return build_cycle(map, next, p as u32, config);
            }
        }
        z = next;
    }
    None
}

fn build_cycle(map: &TangentMap, rep: Complex64, period: u32, config: &ScanConfig) -> Option<CycleInfo> {
    // walk one period to collect the cycle and its multiplier
    let mut points = Vec::with_capacity(period as usize);
    let mut mult = Complex64::new(1.0, 0.0);
    let mut z = rep;
    for _ in 0..period {
        points.push(z);
        mult *= map.derivative(z).finite()?;
        z = step(map, z).finite()?;
    }
    if (z - rep).norm() > 10.0 * config.cycle_tol {
        return None;
    }
    // reduce to minimal period: the smallest divisor p with f^p(rep) = rep
    for p in 1..period {
        if period % p == 0 && (points[p as usize] - rep).norm() < config.cycle_tol {
            return build_cycle(map, rep, p, config);
        }
    }
    Some(CycleInfo {
        period,
        representative: rep,
        multiplier: mult,
        points,
    })
}

/// Classify a single starting point.
pub fn classify_point(
    map: &TangentMap,
    z0: Complex64,
    config: &ScanConfig,
    cycle_hint: Option<&CycleInfo>,
) -> CellClass {
    let window = 4.0 * config.escape_im;
    let mut z = z0;
    let mut prev_arg_inc: Vec<f64> = Vec::new();
    let mut bounded = true;
    for it in 0..config.max_iter {
        if let Some(cycle) = cycle_hint {
            if cycle.points.iter().any(|&p| (z - p).norm() < config.cycle_tol) {
                return CellClass {
                    tag: CellTag::AttractedToCycle { period: cycle.period },
                    iterations_used: it,
                };
            }
        }
        let next = match step(map, z) {
            EvalResult::Finite(v) => v,
            EvalResult::Pole => {
                return CellClass {
                    tag: CellTag::NearPoleEscape,
                    iterations_used: it,
                }
            }
        };
        if next.norm() >= window {
            bounded = false;
        }
        if z.norm() > 0.0 && next.norm() > 0.0 {
            prev_arg_inc.push((next / z).arg());
        }
        z = next;
    }
    if bounded && rotation_like(&prev_arg_inc) {
        return CellClass {
            tag: CellTag::SiegelCandidate,
            iterations_used: config.max_iter,
        };
    }
    CellClass {
        tag: CellTag::Undecided,
        iterations_used: config.max_iter,
    }
}

fn rotation_like(incs: &[f64]) -> bool {
    if incs.len() < 8 {
        return false;
    }
    let n = incs.len() as f64;
    let mean = incs.iter().sum::<f64>() / n;
    let var = incs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n;
    var < ROTATION_VARIANCE_TOL
}

/// Rectangular grid of classified cells.
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationGrid {
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
    pub cells: Vec<CellClass>,
    pub config: ScanConfig,
    pub cycle: Option<CycleInfo>,
}

impl ClassificationGrid {
    pub fn cell(&self, ix: usize, iy: usize) -> &CellClass {
        &self.cells[iy * self.nx + ix]
    }

    pub fn histogram(&self) -> Vec<(String, usize)> {
        let mut counts: std::collections::BTreeMap<String, usize> = Default::default();
        for c in &self.cells {
            *counts.entry(tag_name(&c.tag)).or_default() += 1;
        }
        counts.into_iter().collect()
    }
}

pub fn tag_name(tag: &CellTag) -> String {
    match tag {
        CellTag::AttractedToCycle { period } => format!("attracted_p{period}"),
        CellTag::SiegelCandidate => "siegel_candidate".into(),
        CellTag::NearPoleEscape => "near_pole_escape".into(),
        CellTag::Undecided => "undecided".into(),
    }
}

/// Classify cell centers over a rectangle. Deterministic: the result is
/// independent of evaluation order and worker count.
pub fn scan_dynamical(
    map: &TangentMap,
    rect: (Complex64, Complex64),
    resolution: (usize, usize),
    config: &ScanConfig,
) -> Result<ClassificationGrid, ScanError> {
    let (nx, ny) = resolution;
    if nx == 0 || ny == 0 || nx > 8192 || ny > 8192 {
        return Err(ScanError::BadResolution);
    }
    let (lo, hi) = rect;
    let dx = (hi.re - lo.re) / nx as f64;
    let dy = (hi.im - lo.im) / ny as f64;
    let cycle = detect_cycle(map, config);

    let mut cells = vec![
        CellClass {
            tag: CellTag::Undecided,
            iterations_used: 0
        };
        nx * ny
    ];
    // tiles of rows: cache-friendly parallel unit, order-independent writes
    cells
        .par_chunks_mut(nx * TILE)
        .enumerate()
        .for_each(|(tile_idx, chunk)| {
            let row0 = tile_idx * TILE;
            for (local, cell) in chunk.iter_mut().enumerate() {
                let iy = row0 + local / nx;
                let ix = local % nx;
                let z = Complex64::new(
                    lo.re + (ix as f64 + 0.5) * dx,
                    lo.im + (iy as f64 + 0.5) * dy,
                );
                *cell = classify_point(map, z, config, cycle.as_ref());
            }
        });

    Ok(ClassificationGrid {
        lambda_re: map.lambda().re,
        lambda_im: map.lambda().im,
        x0: lo.re,
        y0: lo.im,
        x1: hi.re,
        y1: hi.im,
        nx,
        ny,
        cells,
        config: *config,
        cycle,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamSample {
    pub theta: f64,
    pub period: Option<u32>,
    pub multiplier_abs: Option<f64>,
    pub siegel_flag: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeConfig {
    /// Radial probe at (1 - epsilon) e^{2 pi i theta}.
    pub epsilon: f64,
    pub scan: ScanConfig,
    /// Short linearizer run deciding the Siegel flag.
    pub linearizer_coeffs: usize,
    pub precision_digits: u32,
    pub cf_depth: usize,
    /// Bounded-type prefix bound gating the linearizer probe.
    pub quotient_bound: u64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.05,
            scan: ScanConfig::default(),
            linearizer_coeffs: 60,
            precision_digits: 50,
            cf_depth: 20,
            quotient_bound: 1000,
        }
    }
}

/// Sweep theta over [range.0, range.1): cycle data at the radial probe
/// inside the circle, Siegel flag from a short linearizer run on it.
pub fn scan_parameter(range: (f64, f64), samples: usize, probe: &ProbeConfig) -> Vec<ParamSample> {
    assert!(probe.epsilon > 0.0 && probe.epsilon < 1.0);
    (0..samples)
        .into_par_iter()
        .map(|j| {
            let theta = range.0 + (range.1 - range.0) * j as f64 / samples as f64;
            probe_theta(theta, probe)
        })
        .collect()
}

fn probe_theta(theta: f64, probe: &ProbeConfig) -> ParamSample {
    let lam = Complex64::from_polar(1.0 - probe.epsilon, 2.0 * PI * theta);
    let mut sample = ParamSample {
        theta,
        period: None,
        multiplier_abs: None,
        siegel_flag: false,
        error: None,
    };
    match TangentMap::new(lam) {
        Ok(map) => {
            if let Some(cycle) = detect_cycle(&map, &probe.scan) {
                sample.period = Some(cycle.period);
                sample.multiplier_abs = Some(cycle.multiplier.norm());
            }
        }
        Err(e) => sample.error = Some(e.to_string()),
    }
    if theta > 0.0 && theta < 1.0 {
        match RotationNumber::from_real(theta, probe.cf_depth, probe.precision_digits) {
            Ok(rn) if !rn.is_rational() && rn.bounded_type_prefix().is_bounded_by(probe.quotient_bound) => {
                match siegel::linearizer(&rn, probe.linearizer_coeffs, probe.precision_digits) {
                    Ok(_) => sample.siegel_flag = true,
                    Err(e) => sample.error = Some(e.to_string()),
                }
            }
            Ok(_) => {
                sample.error = Some("rational or unbounded-prefix rotation number".into());
            }
            Err(e) => sample.error = Some(e.to_string()),
        }
    }
    sample
}

/// CSV for parameter sweeps: theta, period, |multiplier|, siegel_flag.
pub fn param_sweep_csv(samples: &[ParamSample]) -> String {
    let mut out = String::from("theta,period,multiplier_abs,siegel_flag\n");
    for s in samples {
        out.push_str(&format!(
            "{},{},{},{}\n",
            s.theta,
            s.period.map(|p| p.to_string()).unwrap_or_default(),
            s.multiplier_abs.map(|m| m.to_string()).unwrap_or_default(),
            s.siegel_flag
        ));
    }
    out
}

/// Fixed color assignment per class. Deterministic by construction.
#[derive(Debug, Clone, Serialize)]
pub struct Palette {
    pub cycle_colors: Vec<[u8; 3]>,
    pub siegel: [u8; 3],
    pub near_pole: [u8; 3],
    pub undecided: [u8; 3],
}

impl Default for Palette {
    fn default() -> Self {
        Self {
            cycle_colors: vec![
                [66, 135, 245],
                [52, 168, 83],
                [251, 188, 5],
                [171, 71, 188],
                [0, 172, 193],
                [255, 112, 67],
                [124, 179, 66],
                [94, 53, 177],
            ],
            siegel: [255, 215, 0],
            near_pole: [120, 20, 20],
            undecided: [0, 0, 0],
        }
    }
}

impl Palette {
    pub fn color(&self, tag: &CellTag) -> [u8; 3] {
        match tag {
            CellTag::AttractedToCycle { period } => {
                self.cycle_colors[(*period as usize - 1) % self.cycle_colors.len()]
            }
            CellTag::SiegelCandidate => self.siegel,
            CellTag::NearPoleEscape => self.near_pole,
            CellTag::Undecided => self.undecided,
        }
    }
}

/// Write the grid as a raster image: PPM (P6, 8-bit) always; additionally
/// PNG when the path carries a .png extension. A JSON legend sidecar maps
/// classes to colors and echoes the scan config.
pub fn render(grid: &ClassificationGrid, palette: &Palette, path: &Path) -> Result<(), ScanError> {
    let mut pixels = Vec::with_capacity(grid.nx * grid.ny * 3);
    // raster rows top-down: flip y so increasing Im points up in the image
    for iy in (0..grid.ny).rev() {
        for ix in 0..grid.nx {
            pixels.extend_from_slice(&palette.color(&grid.cell(ix, iy).tag));
        }
    }

    let ppm_path = path.with_extension("ppm");
    let mut f = std::fs::File::create(&ppm_path)?;
    write!(f, "P6\n{} {}\n255\n", grid.nx, grid.ny)?;
    f.write_all(&pixels)?;

    if path.extension().map(|e| e == "png").unwrap_or(false) {
        let img: image::RgbImage =
            image::ImageBuffer::from_raw(grid.nx as u32, grid.ny as u32, pixels.clone())
                .expect("pixel buffer matches dimensions");
        img.save(path).map_err(|e| {
            ScanError::IoFailure(std::io::Error::new(std::io::ErrorKind::Other, e.to_string()))
        })?;
    }

    let legend = legend_json(grid, palette);
    std::fs::write(path.with_extension("legend.json"), legend)?;
    Ok(())
}

/// Legend document; flags the Siegel class as heuristic (no finite-time
/// membership certificate exists).
pub fn legend_json(grid: &ClassificationGrid, palette: &Palette) -> String {
    #[derive(Serialize)]
    struct Legend<'a> {
        classes: Vec<LegendEntry>,
        config: &'a ScanConfig,
        lambda: [f64; 2],
        note: &'static str,
    }
    #[derive(Serialize)]
    struct LegendEntry {
        class: String,
        color: [u8; 3],
    }
    let mut classes = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for cell in &grid.cells {
        let name = tag_name(&cell.tag);
        if seen.insert(name.clone()) {
            classes.push(LegendEntry {
                class: name,
                color: palette.color(&cell.tag),
            });
        }
    }
    serde_json::to_string_pretty(&Legend {
        classes,
        config: &grid.config,
        lambda: [grid.lambda_re, grid.lambda_im],
        note: "siegel_candidate is a heuristic class: bounded rotation-like orbits, not a certificate of Siegel disk membership",
    })
    .expect("legend serializes")
}
