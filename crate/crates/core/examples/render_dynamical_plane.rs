// Renders the tiling of the dynamical plane for one parameter.
//
// Usage: `render_dynamical_plane [OUT_DIR] [RES] [A]`

use std::path::{Path, PathBuf};

use schwarz_core::complex::parse_complex;
use schwarz_core::render::{render, write_outputs, Palette, PixelKind, Plane, RasterJob, Window};
use schwarz_core::Complex64;

pub fn run(out: &Path, res: usize, a: Complex64) -> Vec<PathBuf> {
    let job = RasterJob {
        plane: Plane::Dynamical { a },
        window: Window { center: Complex64::new(0.0, 0.0), width: 8.0, height: 8.0 },
        resolution: (res, res),
        max_iter: 500,
        palette: Palette::Classic,
    };
    let raster = render(&job, None).unwrap();
    let deepest = raster.pixels.iter().filter(|p| p.kind == PixelKind::Tile).map(|p| p.value).max().unwrap_or(0);
    let stuck = raster.pixels.iter().filter(|p| p.kind == PixelKind::NonEscaping).count();
    println!("a = {a}: deepest tile rank {deepest}, {stuck} non-escaping pixels");
    let paths = write_outputs(out, "dyn_render", &job, &raster, serde_json::json!({ "a": a.to_string() })).unwrap();
    for p in &paths {
        println!("wrote {}", p.display());
    }
    paths
}

#[allow(dead_code)]
fn main() {
    let mut args = std::env::args().skip(1);
    let out = args.next().unwrap_or_else(|| ".".into());
    let res = args.next().map_or(400, |r| r.parse().expect("RES must be an integer"));
    let a = args.next().map_or(Complex64::new(3.0, 0.0), |s| parse_complex(&s).ok().and_then(|p| p.finite()).expect("A must be a finite re,im"));
    run(Path::new(&out), res, a);
}
