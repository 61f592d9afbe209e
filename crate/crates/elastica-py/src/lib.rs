use pyo3::prelude::*;

#[pymodule]
fn elastica_py(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
