use num_complex::Complex64;
use schwarz_core::render::{
    classify_dynamical_pixel, render, to_ppm, write_outputs, Palette, PixelKind, Plane, RasterJob, Sidecar, Window,
};
use schwarz_core::SchwarzParam;

fn job(plane: Plane, window: Window, res: (usize, usize), max_iter: usize) -> RasterJob {
    RasterJob { plane, window, resolution: res, max_iter, palette: Palette::Classic }
}

#[test]
fn parameter_render_is_thread_independent() {
    let j = job(Plane::Parameter, Window::from_bounds((1.6, 3.9), (-1.2, 1.2)), (48, 40), 300);
    let one = render(&j, Some(1)).unwrap();
    let three = render(&j, Some(3)).unwrap();
    let default = render(&j, None).unwrap();
    assert_eq!(to_ppm(&one, j.palette), to_ppm(&three, j.palette));
    assert_eq!(one, default);
}

#[test]
fn parameter_render_is_conjugation_symmetric() {
    let j = job(Plane::Parameter, Window::from_bounds((1.6, 3.9), (-1.2, 1.2)), (50, 50), 300);
    let r = render(&j, None).unwrap();
    for row in 0..25 {
        for col in 0..50 {
            let (p, q) = (r.get(col, row), r.get(col, 49 - row));
            assert_eq!((p.kind, p.value), (q.kind, q.value), "pixel ({col},{row})");
        }
    }
}

#[test]
fn period_two_near_centers() {
    for im in [3f64.sqrt() / 2.0, -(3f64.sqrt()) / 2.0] {
        let j = job(Plane::Parameter, Window { center: Complex64::new(3.5, im), width: 0.02, height: 0.02 }, (3, 3), 500);
        let r = render(&j, None).unwrap();
        let p = r.get(1, 1);
        assert_eq!((p.kind, p.value), (PixelKind::Cycle, 2));
    }
}

#[test]
fn tripled_grid_keeps_shared_centers() {
    let a = Complex64::new(3.0, 0.0);
    let win = Window { center: Complex64::new(1.0, 0.0), width: 5.0, height: 5.0 };
    let coarse = job(Plane::Dynamical { a }, win, (10, 10), 200);
    let fine = job(Plane::Dynamical { a }, win, (30, 30), 200);
    let (rc, rf) = (render(&coarse, None).unwrap(), render(&fine, None).unwrap());
    let p = SchwarzParam::new(a).unwrap();
    for j in 0..10 {
        for i in 0..10 {
            assert!((coarse.pixel_point(i, j) - fine.pixel_point(3 * i + 1, 3 * j + 1)).norm() < 1e-12);
            assert_eq!(rc.get(i, j), rf.get(3 * i + 1, 3 * j + 1));
            assert_eq!(rc.get(i, j), classify_dynamical_pixel(coarse.pixel_point(i, j), &p, 200));
        }
    }
}

#[test]
fn dynamical_landmarks() {
    let a3 = job(Plane::Dynamical { a: Complex64::new(3.0, 0.0) }, Window { center: Complex64::new(2.0, 0.0), width: 0.5, height: 0.5 }, (21, 21), 500);
    let r = render(&a3, None).unwrap();
    assert!(r.pixels.iter().any(|p| p.kind == PixelKind::NonEscaping));
    let a2 = job(Plane::Dynamical { a: Complex64::new(2.0, 0.0) }, Window { center: Complex64::new(2.0, 0.0), width: 4.0, height: 4.0 }, (41, 41), 500);
    let r = render(&a2, None).unwrap();
    let centre = (a2.pixel_point(20, 20) - Complex64::new(2.0, 0.0)).norm();
    assert!(centre < 1e-12);
    assert_eq!((r.get(20, 20).kind, r.get(20, 20).value), (PixelKind::Tile, 1));
}

#[test]
fn outputs_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let j = job(Plane::Parameter, Window::from_bounds((1.6, 3.9), (-1.2, 1.2)), (12, 10), 100);
    let r = render(&j, None).unwrap();
    let paths = write_outputs(dir.path(), "p", &j, &r, serde_json::json!({"budget": 100})).unwrap();
    assert_eq!(paths.len(), 3);
    let ppm = std::fs::read(&paths[0]).unwrap();
    assert!(ppm.starts_with(b"P6\n12 10\n255\n"));
    let side: Sidecar = serde_json::from_str(&std::fs::read_to_string(&paths[2]).unwrap()).unwrap();
    assert_eq!(side.job, j);
    assert_eq!(side.config["budget"], 100);
    assert!(image::open(&paths[1]).is_ok());
}
