//! Per-pixel classification of dynamical and parameter planes.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{classify_parameter_with, classify_point, in_s_region, ParamClass, PointClass, CYCLE_EPS};
use crate::schwarz::SchwarzParam;

pub const DEFAULT_BUDGET: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Plane {
    Dynamical { a: Complex64 },
    Parameter,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub center: Complex64,
    pub width: f64,
    pub height: f64,
}

impl Window {
    pub fn from_bounds(re: (f64, f64), im: (f64, f64)) -> Self {
        Window {
            center: Complex64::new(0.5 * (re.0 + re.1), 0.5 * (im.0 + im.1)),
            width: re.1 - re.0,
            height: im.1 - im.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Palette {
    #[default]
    Classic,
    Gray,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RasterJob {
    pub plane: Plane,
    pub window: Window,
    pub resolution: (usize, usize),
    pub max_iter: usize,
    pub palette: Palette,
}

impl RasterJob {
    /// Plane point at the center of pixel `(i, j)`, row-major from the top left.
    pub fn pixel_point(&self, i: usize, j: usize) -> Complex64 {
        let (px, py) = self.resolution;
        let sx = self.window.width / px as f64;
        let sy = self.window.height / py as f64;
        let x = self.window.center.re + sx * (i as f64 - (px as f64 - 1.0) / 2.0);
        let y = self.window.center.im + sy * ((py as f64 - 1.0) / 2.0 - j as f64);
        Complex64::new(x, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PixelKind {
    /// Dynamical plane: landed in the fundamental tile after `value` steps.
    Tile,
    /// Parameter plane: escaping with depth `value`.
    Escaping,
    NonEscaping,
    /// Attracting cycle of period `value`.
    Cycle,
    /// Parameter outside `S`.
    Outside,
    /// Classification failed (ambiguous membership).
    Ambiguous,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pixel {
    pub kind: PixelKind,
    pub value: u32,
    /// Continuous shade in `[0, 1]`: `|multiplier|` for cycles, zero otherwise.
    pub shade: f32,
}

impl Pixel {
    fn new(kind: PixelKind, value: usize) -> Self {
        Pixel { kind, value: value as u32, shade: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<Pixel>,
}

impl Raster {
    pub fn get(&self, i: usize, j: usize) -> Pixel {
        self.pixels[j * self.width + i]
    }
}

pub fn classify_dynamical_pixel(w: Complex64, a: &SchwarzParam, max_iter: usize) -> Pixel {
    match classify_point(w.into(), a, max_iter) {
        Ok(PointClass::Tile { rank }) => Pixel::new(PixelKind::Tile, rank),
        Ok(PointClass::NonEscaping { .. }) => Pixel::new(PixelKind::NonEscaping, 0),
        Err(_) => Pixel::new(PixelKind::Ambiguous, 0),
    }
}

pub fn classify_parameter_pixel(a: Complex64, max_iter: usize) -> Pixel {
    if !in_s_region(a) {
        return Pixel::new(PixelKind::Outside, 0);
    }
    let Ok(p) = SchwarzParam::new(a) else {
        return Pixel::new(PixelKind::Outside, 0);
    };
    match classify_parameter_with(&p, max_iter, CYCLE_EPS, false) {
        Ok(ParamClass::Escaping { depth, .. }) => Pixel::new(PixelKind::Escaping, depth),
        Ok(ParamClass::NonEscaping { .. }) => Pixel::new(PixelKind::NonEscaping, 0),
        Ok(ParamClass::CycleDetected { period, multiplier_sq, .. }) => Pixel {
            kind: PixelKind::Cycle,
            value: period as u32,
            shade: multiplier_sq.norm().min(1.0) as f32,
        },
        Err(_) => Pixel::new(PixelKind::Ambiguous, 0),
    }
}

fn render_with<F>(job: &RasterJob, threads: Option<usize>, per_pixel: F) -> Result<Raster>
where
    F: Fn(Complex64) -> Pixel + Sync,
{
    let (px, py) = job.resolution;
    if px == 0 || py == 0 {
        return Err(Error::InvalidArgument("empty resolution".into()));
    }
    let work = || -> Vec<Pixel> {
        (0..px * py)
            .into_par_iter()
            .map(|k| per_pixel(job.pixel_point(k % px, k / px)))
            .collect()
    };
    let pixels = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(work),
        None => work(),
    };
    Ok(Raster { width: px, height: py, pixels })
}

pub fn render_dynamical(job: &RasterJob, threads: Option<usize>) -> Result<Raster> {
    let Plane::Dynamical { a } = job.plane else {
        return Err(Error::InvalidArgument("render_dynamical needs a dynamical plane".into()));
    };
    let p = SchwarzParam::new(a)?;
    render_with(job, threads, |w| classify_dynamical_pixel(w, &p, job.max_iter))
}

pub fn render_parameter(job: &RasterJob, threads: Option<usize>) -> Result<Raster> {
    if job.plane != Plane::Parameter {
        return Err(Error::InvalidArgument("render_parameter needs the parameter plane".into()));
    }
    render_with(job, threads, |a| classify_parameter_pixel(a, job.max_iter))
}

pub fn render(job: &RasterJob, threads: Option<usize>) -> Result<Raster> {
    match job.plane {
        Plane::Dynamical { .. } => render_dynamical(job, threads),
        Plane::Parameter => render_parameter(job, threads),
    }
}

const CLASSIC: [[u8; 3]; 8] = [
    [230, 240, 255],
    [158, 202, 225],
    [66, 146, 198],
    [33, 113, 181],
    [253, 208, 162],
    [253, 141, 60],
    [217, 72, 1],
    [140, 45, 4],
];

const CYCLE: [[u8; 3]; 6] = [
    [35, 139, 69],
    [116, 196, 118],
    [106, 81, 163],
    [158, 154, 200],
    [203, 24, 29],
    [251, 106, 74],
];

pub fn pixel_color(p: Pixel, palette: Palette) -> [u8; 3] {
    match palette {
        Palette::Classic => match p.kind {
            PixelKind::Tile | PixelKind::Escaping => CLASSIC[p.value as usize % CLASSIC.len()],
            PixelKind::NonEscaping => [0, 0, 0],
            PixelKind::Cycle => {
                let base = CYCLE[(p.value as usize).saturating_sub(1) % CYCLE.len()];
                let k = 1.0 - 0.5 * p.shade;
                base.map(|c| (c as f32 * k).round() as u8)
            }
            PixelKind::Outside => [128, 128, 128],
            PixelKind::Ambiguous => [255, 0, 255],
        },
        Palette::Gray => {
            let g = match p.kind {
                PixelKind::Tile | PixelKind::Escaping => 255 - (p.value.min(15) * 12) as u8,
                PixelKind::NonEscaping | PixelKind::Cycle => 0,
                PixelKind::Outside => 128,
                PixelKind::Ambiguous => 64,
            };
            [g; 3]
        }
    }
}

/// Binary PPM (P6, maxval 255).
pub fn to_ppm(raster: &Raster, palette: Palette) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", raster.width, raster.height).into_bytes();
    out.reserve(raster.pixels.len() * 3);
    for &p in &raster.pixels {
        out.extend_from_slice(&pixel_color(p, palette));
    }
    out
}

pub fn to_png(raster: &Raster, palette: Palette, path: &Path) -> Result<()> {
    let mut img = image::RgbImage::new(raster.width as u32, raster.height as u32);
    for (k, &p) in raster.pixels.iter().enumerate() {
        let (i, j) = (k % raster.width, k / raster.width);
        img.put_pixel(i as u32, j as u32, image::Rgb(pixel_color(p, palette)));
    }
    img.save(path).map_err(|e| Error::InvalidArgument(format!("png: {e}")))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Sidecar {
    pub job: RasterJob,
    pub config: serde_json::Value,
    pub volatile: Volatile,
}

/// Fields that may differ between otherwise identical runs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Volatile {
    pub unix_time: u64,
}

/// Writes `stem.ppm`, `stem.png` and `stem.json` into `dir`.
pub fn write_outputs(dir: &Path, stem: &str, job: &RasterJob, raster: &Raster, config: serde_json::Value) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::InvalidArgument(format!("{}: {e}", dir.display())))?;
    let io = |e: std::io::Error| Error::InvalidArgument(e.to_string());
    let ppm = dir.join(format!("{stem}.ppm"));
    fs::write(&ppm, to_ppm(raster, job.palette)).map_err(io)?;
    let png = dir.join(format!("{stem}.png"));
    to_png(raster, job.palette, &png)?;
    let unix_time = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let sidecar = Sidecar { job: *job, config, volatile: Volatile { unix_time } };
    let json = dir.join(format!("{stem}.json"));
    fs::write(&json, serde_json::to_string_pretty(&sidecar).expect("serializable")).map_err(io)?;
    Ok(vec![ppm, png, json])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(plane: Plane, win: Window, res: (usize, usize)) -> RasterJob {
        RasterJob { plane, window: win, resolution: res, max_iter: 200, palette: Palette::Classic }
    }

    #[test]
    fn pixel_centers_are_symmetric() {
        let j = job(Plane::Parameter, Window::from_bounds((1.6, 3.9), (-1.2, 1.2)), (40, 40));
        for row in 0..40 {
            for col in 0..40 {
                assert_eq!(j.pixel_point(col, row), j.pixel_point(col, 39 - row).conj());
            }
        }
        let odd = job(Plane::Parameter, Window::from_bounds((0.0, 1.0), (-1.0, 1.0)), (3, 3));
        assert_eq!(odd.pixel_point(1, 1), Complex64::new(0.5, 0.0));
    }

    #[test]
    fn dynamical_examples() {
        let j = job(Plane::Dynamical { a: Complex64::new(3.0, 0.0) }, Window::from_bounds((1.9, 2.1), (-0.1, 0.1)), (9, 9));
        let r = render_dynamical(&j, None).unwrap();
        assert_eq!(r.get(4, 4).kind, PixelKind::NonEscaping);
        let p = classify_dynamical_pixel(Complex64::new(2.0, 0.0), &SchwarzParam::from_re_im(2.0, 0.0).unwrap(), 50);
        assert_eq!((p.kind, p.value), (PixelKind::Tile, 1));
    }

    #[test]
    fn ppm_header_and_size() {
        let j = job(Plane::Parameter, Window::from_bounds((1.6, 3.9), (-1.2, 1.2)), (8, 6));
        let r = render_parameter(&j, Some(2)).unwrap();
        let ppm = to_ppm(&r, Palette::Classic);
        assert!(ppm.starts_with(b"P6\n8 6\n255\n"));
        assert_eq!(ppm.len(), b"P6\n8 6\n255\n".len() + 8 * 6 * 3);
    }
}
