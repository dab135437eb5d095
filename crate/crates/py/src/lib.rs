//! Python bindings for the burst-deletion codec.
//!
//! Words cross the boundary as plain lists of small ints; parameter sets are
//! wrapped in a frozen [`Params`] class. Every fallible core operation maps
//! its error onto `ValueError` with the display message intact.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use std::str::FromStr;

use qburst::harness::{BurstPlan, CampaignSpec};
use qburst::params::{min_codec_n, ParamMode, SketchMode};
use qburst::sketch::{f_sketch as core_f_sketch, SketchCache};
use qburst::word::Word;

fn to_py_err(e: qburst::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_modes(mode: &str, sketch_mode: &str) -> PyResult<(ParamMode, SketchMode)> {
    let mode = ParamMode::from_str(mode).map_err(to_py_err)?;
    let sketch = SketchMode::from_str(sketch_mode).map_err(to_py_err)?;
    Ok((mode, sketch))
}

/// Derived parameter set for a `(q, t, n)` code instance.
#[pyclass(frozen, name = "Params", module = "qburst_py")]
struct Params {
    inner: qburst::params::Params,
}

#[pymethods]
impl Params {
    /// Derive parameters; `mode` is `"compact"` or `"paper"`, `sketch_mode`
    /// is `"compressed"` or `"raw"`.
    #[staticmethod]
    #[pyo3(signature = (q, t, n, mode = "compact", sketch_mode = "compressed"))]
    fn derive(q: u32, t: usize, n: usize, mode: &str, sketch_mode: &str) -> PyResult<Self> {
        let (mode, sketch) = parse_modes(mode, sketch_mode)?;
        let inner = qburst::params::Params::derive(q, t, n, mode, sketch).map_err(to_py_err)?;
        Ok(Params { inner })
    }

    /// Smallest `n` for which the full codec is feasible.
    #[staticmethod]
    #[pyo3(signature = (q, t, mode = "compact", sketch_mode = "compressed"))]
    fn min_codec_n(q: u32, t: usize, mode: &str, sketch_mode: &str) -> PyResult<usize> {
        let (mode, sketch) = parse_modes(mode, sketch_mode)?;
        min_codec_n(q, t, mode, sketch).map_err(to_py_err)
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.q
    }

    #[getter]
    fn t(&self) -> usize {
        self.inner.t
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn delta(&self) -> usize {
        self.inner.delta
    }

    #[getter]
    fn rho(&self) -> usize {
        self.inner.rho
    }

    #[getter]
    fn sketch_width(&self) -> usize {
        self.inner.sketch_width
    }

    #[getter]
    fn redundancy(&self) -> usize {
        self.inner.r
    }

    #[getter]
    fn message_len(&self) -> usize {
        self.inner.message_len()
    }

    #[getter]
    fn codeword_len(&self) -> usize {
        self.inner.codeword_len()
    }

    /// The `key=value` parameter block, one pair per line.
    fn to_kv(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.inner.to_kv_pairs() {
            out.push_str(k);
            out.push('=');
            out.push_str(&v);
            out.push('\n');
        }
        out
    }

    fn __repr__(&self) -> String {
        format!(
            "Params(q={}, t={}, n={}, mode={}, sketch_mode={}, r={})",
            self.inner.q,
            self.inner.t,
            self.inner.n,
            self.inner.mode,
            self.inner.sketch_mode,
            self.inner.r
        )
    }
}

fn word_from(params: &Params, syms: Vec<u8>) -> PyResult<Word> {
    Word::new(params.inner.q, syms).map_err(to_py_err)
}

/// Symbols as a Python list of ints (a bare `Vec<u8>` would turn into bytes).
fn symbol_list(py: Python<'_>, w: Word) -> PyResult<Bound<'_, PyList>> {
    PyList::new(py, w.into_symbols())
}

/// Systematic encode: message of length `n - 1` to codeword of length `n + r`.
#[pyfunction]
fn encode<'py>(py: Python<'py>, params: &Params, message: Vec<u8>) -> PyResult<Bound<'py, PyList>> {
    let u = word_from(params, message)?;
    let z = qburst::codec::encode(&u, &params.inner).map_err(to_py_err)?;
    symbol_list(py, z)
}

/// Decode a received word that lost one burst of at most `t` symbols (or
/// nothing); returns the message.
#[pyfunction]
fn decode<'py>(
    py: Python<'py>,
    params: &Params,
    received: Vec<u8>,
) -> PyResult<Bound<'py, PyList>> {
    let yz = word_from(params, received)?;
    let u = qburst::codec::decode(&yz, &params.inner).map_err(to_py_err)?;
    symbol_list(py, u)
}

/// Dense-encode a message of length `n - 1` into a dense word of length `n`.
#[pyfunction]
fn enc_den<'py>(
    py: Python<'py>,
    params: &Params,
    message: Vec<u8>,
) -> PyResult<Bound<'py, PyList>> {
    let u = word_from(params, message)?;
    let x = qburst::dense::enc_den(&u, &params.inner).map_err(to_py_err)?;
    symbol_list(py, x)
}

/// Invert [`enc_den`].
#[pyfunction]
fn dec_den<'py>(py: Python<'py>, params: &Params, dense: Vec<u8>) -> PyResult<Bound<'py, PyList>> {
    let x = word_from(params, dense)?;
    let u = qburst::dense::dec_den(&x, &params.inner).map_err(to_py_err)?;
    symbol_list(py, u)
}

/// Delete `length` adjacent symbols starting at 1-based position `pos`.
#[pyfunction]
fn delete_burst(
    py: Python<'_>,
    q: u32,
    word: Vec<u8>,
    pos: usize,
    length: usize,
) -> PyResult<Bound<'_, PyList>> {
    let w = Word::new(q, word).map_err(to_py_err)?;
    let out = w.delete_burst(pos, length).map_err(to_py_err)?;
    symbol_list(py, out)
}

/// Four-field sketch of a dense word of length `n`, as a dict with keys
/// `a0_mod4`, `a1_mod2n`, `h0`, `h1`.
#[pyfunction]
fn f_sketch<'py>(py: Python<'py>, params: &Params, dense: Vec<u8>) -> PyResult<Bound<'py, PyDict>> {
    let x = word_from(params, dense)?;
    let mut cache = SketchCache::new();
    let sk = core_f_sketch(&x, &params.inner, &mut cache).map_err(to_py_err)?;
    let d = PyDict::new(py);
    d.set_item("a0_mod4", sk.a0_mod4)?;
    d.set_item("a1_mod2n", sk.a1_mod2n)?;
    d.set_item("h0", sk.h0)?;
    d.set_item("h1", sk.h1)?;
    Ok(d)
}

/// Run an encode→delete→decode campaign and return the JSON report.
/// `bursts` is `"exhaustive"` or `"sample:<k>"`.
#[pyfunction]
#[pyo3(signature = (q, t, n, mode = "compact", sketch_mode = "compressed",
                    seed = 0, messages = 1, bursts = "exhaustive"))]
#[allow(clippy::too_many_arguments)]
fn run_campaign(
    q: u32,
    t: usize,
    n: usize,
    mode: &str,
    sketch_mode: &str,
    seed: u64,
    messages: usize,
    bursts: &str,
) -> PyResult<String> {
    let (mode, sketch_mode) = parse_modes(mode, sketch_mode)?;
    let bursts = BurstPlan::from_str(bursts).map_err(to_py_err)?;
    let spec = CampaignSpec {
        q,
        t,
        n,
        mode,
        sketch_mode,
        seed,
        messages,
        bursts,
    };
    qburst::harness::run_campaign(&spec)
        .map(|report| report.to_json())
        .map_err(to_py_err)
}

#[pymodule]
fn qburst_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Params>()?;
    m.add_function(wrap_pyfunction!(encode, m)?)?;
    m.add_function(wrap_pyfunction!(decode, m)?)?;
    m.add_function(wrap_pyfunction!(enc_den, m)?)?;
    m.add_function(wrap_pyfunction!(dec_den, m)?)?;
    m.add_function(wrap_pyfunction!(delete_burst, m)?)?;
    m.add_function(wrap_pyfunction!(f_sketch, m)?)?;
    m.add_function(wrap_pyfunction!(run_campaign, m)?)?;
    Ok(())
}
