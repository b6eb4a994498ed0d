use augteich_core::cli;
use augteich_core::collar::{collar_chart as core_collar_chart, hexagon_from_sides};
use augteich_core::error::Error;
use augteich_core::moduli;
use augteich_core::qc_bounds::{self, UniversalConstants};
use augteich_core::standard_maps::{AnnulusMap, TwistProfile};
use augteich_core::teich::{build_surface, curve_word, FNPoint, PantsComplex};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(augteich, AugteichError, PyException);
create_exception!(augteich, DomainError, AugteichError);
create_exception!(augteich, BoundVacuousError, AugteichError);
create_exception!(augteich, SchemaError, AugteichError);
create_exception!(augteich, NumericalError, AugteichError);

fn to_py(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::Domain(_) | Error::Structure(_) | Error::NodeCrossing(_) => DomainError::new_err(msg),
        Error::BoundVacuous(_) => BoundVacuousError::new_err(msg),
        Error::Schema { .. } => SchemaError::new_err(msg),
        _ => NumericalError::new_err(msg),
    }
}

fn constants(b0: f64, b1: f64) -> PyResult<UniversalConstants> {
    UniversalConstants::new(b0, b1).map_err(to_py)
}

/// Grötzsch modulus μ(r).
#[pyfunction]
fn mu(r: f64) -> PyResult<f64> {
    moduli::grotzsch_mu(r).map_err(to_py)
}

#[pyfunction]
fn mu_inverse(m: f64) -> PyResult<f64> {
    moduli::mu_inverse(m).map_err(to_py)
}

/// Distortion function λ(K).
#[pyfunction]
fn lambda_of_k(k: f64) -> PyResult<f64> {
    moduli::lambda_of_k(k).map_err(to_py)
}

#[pyfunction]
fn annulus_modulus(r: f64) -> PyResult<f64> {
    moduli::annulus_modulus(r).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (k, eps, b0 = 2.0, b1 = 1.0))]
fn k_eps(k: f64, eps: f64, b0: f64, b1: f64) -> PyResult<f64> {
    qc_bounds::k_eps(k, eps, &constants(b0, b1)?).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (k, eps, b0 = 2.0, b1 = 1.0))]
fn k_tilde(k: f64, eps: f64, b0: f64, b1: f64) -> PyResult<f64> {
    qc_bounds::k_tilde(k, eps, &constants(b0, b1)?).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (k, eps, b0 = 2.0, b1 = 1.0))]
fn k_hat(k: f64, eps: f64, b0: f64, b1: f64) -> PyResult<f64> {
    Ok(qc_bounds::k_hat(k, eps, &constants(b0, b1)?).map_err(to_py)?.bound)
}

#[pyfunction]
#[pyo3(signature = (r, b0 = 2.0, b1 = 1.0))]
fn extension_constant(r: f64, b0: f64, b1: f64) -> PyResult<f64> {
    qc_bounds::extension_constant(r, &constants(b0, b1)?).map_err(to_py)
}

/// Width, outer length and area of the collar A_t(ℓ).
#[pyfunction]
fn collar_chart<'py>(py: Python<'py>, length: f64, t: f64) -> PyResult<Bound<'py, PyDict>> {
    let c = core_collar_chart(length, t).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("length", c.length())?;
    d.set_item("t", c.t())?;
    d.set_item("width", c.width())?;
    d.set_item("outer_length", c.outer_length())?;
    d.set_item("area", c.area())?;
    d.set_item("cusp", c.is_cusp())?;
    Ok(d)
}

/// Seam lengths of the right-angled hexagon with alternate sides h1, h2, h3.
#[pyfunction]
fn hexagon_seams(h1: f64, h2: f64, h3: f64) -> PyResult<[f64; 3]> {
    Ok(hexagon_from_sides(h1, h2, h3).map_err(to_py)?.seams())
}

/// Sup dilatation and metric deviation of σ_a(ϑ) from A_t(ℓ) to A_t(ℓ̃).
#[pyfunction]
#[pyo3(signature = (source, target, theta = 0.0, t = 1.0, grid = 32))]
fn annulus_distortion<'py>(
    py: Python<'py>,
    source: f64,
    target: f64,
    theta: f64,
    t: f64,
    grid: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let rep = py
        .detach(|| -> augteich_core::Result<_> {
            let m = AnnulusMap::new(
                core_collar_chart(source, t)?,
                core_collar_chart(target, t)?,
                theta,
                TwistProfile::default(),
            )?;
            m.distortion(grid)
        })
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("sup_k", rep.sup_k)?;
    d.set_item("sup_eps", rep.sup_eps)?;
    d.set_item("sup_eps_inverse", rep.sup_eps_inverse)?;
    d.set_item("samples", rep.samples.len())?;
    Ok(d)
}

/// |trace| of the holonomy of each internal curve of a standard complex
/// ("one_holed_torus", "four_holed_sphere" or "genus_two").
#[pyfunction]
fn holonomy_traces(complex: &str, lengths: Vec<f64>, twists: Vec<f64>, free: Vec<f64>) -> PyResult<Vec<f64>> {
    let c = match complex {
        "one_holed_torus" => PantsComplex::one_holed_torus(),
        "four_holed_sphere" => PantsComplex::four_holed_sphere(),
        "genus_two" => PantsComplex::genus_two(),
        other => return Err(DomainError::new_err(format!("unknown complex {other:?}"))),
    };
    let s = build_surface(&c, &FNPoint::new(lengths, twists, free)).map_err(to_py)?;
    (0..c.n_curves())
        .map(|k| s.holonomy(&curve_word(&c, k)).map(|h| h.trace().abs()).map_err(to_py))
        .collect()
}

/// Runs the command-line front end in-process: returns (exit code, stdout, stderr).
#[pyfunction]
#[pyo3(signature = (args, constants_file = None))]
fn run_cli(py: Python<'_>, args: Vec<String>, constants_file: Option<String>) -> (i32, String, String) {
    let out = py.detach(|| {
        cli::run(
            std::iter::once("augteich".to_string()).chain(args),
            constants_file.as_deref().map(std::path::Path::new),
        )
    });
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
fn augteich(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("AugteichError", py.get_type::<AugteichError>())?;
    m.add("DomainError", py.get_type::<DomainError>())?;
    m.add("BoundVacuousError", py.get_type::<BoundVacuousError>())?;
    m.add("SchemaError", py.get_type::<SchemaError>())?;
    m.add("NumericalError", py.get_type::<NumericalError>())?;
    m.add_function(wrap_pyfunction!(mu, m)?)?;
    m.add_function(wrap_pyfunction!(mu_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_of_k, m)?)?;
    m.add_function(wrap_pyfunction!(annulus_modulus, m)?)?;
    m.add_function(wrap_pyfunction!(k_eps, m)?)?;
    m.add_function(wrap_pyfunction!(k_tilde, m)?)?;
    m.add_function(wrap_pyfunction!(k_hat, m)?)?;
    m.add_function(wrap_pyfunction!(extension_constant, m)?)?;
    m.add_function(wrap_pyfunction!(collar_chart, m)?)?;
    m.add_function(wrap_pyfunction!(hexagon_seams, m)?)?;
    m.add_function(wrap_pyfunction!(annulus_distortion, m)?)?;
    m.add_function(wrap_pyfunction!(holonomy_traces, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
