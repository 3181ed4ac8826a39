// Renders the parameter plane to PPM, PNG and a JSON sidecar.
//
// Usage: `render_parameter_plane [OUT_DIR] [RES]`

use std::path::{Path, PathBuf};

use schwarz_core::render::{render, write_outputs, Palette, PixelKind, Plane, RasterJob, Window};

pub fn run(out: &Path, res: usize) -> Vec<PathBuf> {
    let job = RasterJob {
        plane: Plane::Parameter,
        window: Window::from_bounds((1.6, 3.9), (-1.2, 1.2)),
        resolution: (res, res),
        max_iter: 500,
        palette: Palette::Classic,
    };
    let raster = render(&job, None).unwrap();
    let count = |k: PixelKind| raster.pixels.iter().filter(|p| p.kind == k).count();
    println!(
        "{res}x{res}: {} escaping, {} cycle, {} non-escaping, {} outside",
        count(PixelKind::Escaping),
        count(PixelKind::Cycle),
        count(PixelKind::NonEscaping),
        count(PixelKind::Outside)
    );
    let paths = write_outputs(out, "param_render", &job, &raster, serde_json::json!({})).unwrap();
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
    run(Path::new(&out), res);
}
