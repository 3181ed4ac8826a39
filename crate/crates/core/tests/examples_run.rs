macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));
        }
    };
}

example!(cubic_fibers);
example!(schwarz_map);
example!(parameter_slice);
example!(triangle_group);
example!(ecalle_height);
example!(correspondence);
example!(render_parameter_plane);
example!(render_dynamical_plane);

#[test]
fn symbolic_examples_run() {
    cubic_fibers::run();
    schwarz_map::run();
    triangle_group::run();
    correspondence::run();
}

#[test]
fn parameter_examples_run() {
    parameter_slice::run();
    ecalle_height::run();
}

#[test]
fn render_examples_write_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let p = render_parameter_plane::run(dir.path(), 24);
    let d = render_dynamical_plane::run(dir.path(), 24, num_complex::Complex64::new(3.0, 0.0));
    for path in p.iter().chain(&d) {
        assert!(std::fs::metadata(path).unwrap().len() > 0);
    }
}
