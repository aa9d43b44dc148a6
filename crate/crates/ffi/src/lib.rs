//! C ABI over the onebit classifier.
//!
//! Every function returns an [`OnebitStatus`]; on failure a message is
//! available from [`onebit_last_error`] on the same thread. Models are opaque
//! [`OnebitModel`] handles released with [`onebit_model_free`]. Point data is
//! column-major: `count` points of dimension `n`, point `j` at
//! `data[j * n .. (j + 1) * n]`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use onebit::classify::{classify_code, classify_point, Classification};
use onebit::measure::DataMatrix;
use onebit::model::{fit, TrainedModel};
use onebit::persist::{load_model, save_model};
use onebit::synthgen::ConeGeometry;
use onebit::theory::theorem_bound;
use onebit::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OnebitStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Dimension = 3,
    Io = 4,
    ModelFormat = 5,
    Unsupported = 6,
    Range = 7,
    Data = 8,
    Panic = 99,
}

/// Opaque trained model.
pub struct OnebitModel {
    inner: TrainedModel,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> OnebitStatus {
    match e {
        Error::Config(_)
        | Error::Label { .. }
        | Error::Empty(_)
        | Error::InsufficientClass { .. } => OnebitStatus::InvalidArgument,
        Error::Dimension { .. } => OnebitStatus::Dimension,
        Error::Io(_) => OnebitStatus::Io,
        Error::Model(_) | Error::ModelVersion { .. } => OnebitStatus::ModelFormat,
        Error::Unsupported(_) => OnebitStatus::Unsupported,
        Error::Range(_) => OnebitStatus::Range,
        Error::Idx { .. } | Error::Csv { .. } => OnebitStatus::Data,
    }
}

struct Fail(OnebitStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(OnebitStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> OnebitStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            OnebitStatus::Ok
        }
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            OnebitStatus::Panic
        }
    }
}

unsafe fn path_arg<'a>(path: *const c_char) -> Result<&'a str, Fail> {
    if path.is_null() {
        return Err(null("path"));
    }
    CStr::from_ptr(path)
        .to_str()
        .map_err(|_| Fail(OnebitStatus::InvalidArgument, "path is not UTF-8".into()))
}

unsafe fn model_arg<'a>(model: *const OnebitModel) -> Result<&'a TrainedModel, Fail> {
    model
        .as_ref()
        .map(|m| &m.inner)
        .ok_or_else(|| null("model"))
}

unsafe fn write_result(
    c: &Classification,
    label: *mut usize,
    scores: *mut f64,
    scores_len: usize,
) -> Result<(), Fail> {
    if label.is_null() {
        return Err(null("label"));
    }
    if !scores.is_null() {
        if scores_len < c.scores.len() {
            return Err(Fail(
                OnebitStatus::Dimension,
                format!("scores buffer holds {scores_len}, need {}", c.scores.len()),
            ));
        }
        ptr::copy_nonoverlapping(c.scores.as_ptr(), scores, c.scores.len());
    }
    *label = c.label;
    Ok(())
}

/// Last error message on this thread, or an empty string. The pointer stays
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn onebit_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Trains a model on `count` labeled points of dimension `n` (labels in
/// `1..=classes`) with `m` measurements, `layers` layers and `seed`.
///
/// # Safety
/// `data` must point to `n * count` doubles, `labels` to `count` values and
/// `out` to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn onebit_train(
    data: *const f64,
    n: usize,
    count: usize,
    labels: *const usize,
    classes: usize,
    m: usize,
    layers: usize,
    seed: u64,
    out: *mut *mut OnebitModel,
) -> OnebitStatus {
    guard(|| {
        if data.is_null() {
            return Err(null("data"));
        }
        if labels.is_null() {
            return Err(null("labels"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let values = slice::from_raw_parts(data, n * count).to_vec();
        let labels = slice::from_raw_parts(labels, count);
        let x = DataMatrix::new(n, values)?;
        let model = fit(&x, labels, classes, m, layers, seed)?;
        *out = Box::into_raw(Box::new(OnebitModel { inner: model }));
        Ok(())
    })
}

/// Loads a model file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn onebit_model_load(
    path: *const c_char,
    out: *mut *mut OnebitModel,
) -> OnebitStatus {
    guard(|| {
        let path = path_arg(path)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let model = load_model(path)?;
        *out = Box::into_raw(Box::new(OnebitModel { inner: model }));
        Ok(())
    })
}

/// Writes a model file.
///
/// # Safety
/// `model` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn onebit_model_save(
    model: *const OnebitModel,
    path: *const c_char,
) -> OnebitStatus {
    guard(|| {
        let model = model_arg(model)?;
        save_model(model, path_arg(path)?)?;
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `model` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn onebit_model_free(model: *mut OnebitModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Reports `m`, `n`, the number of classes and layers. Any output pointer may
/// be null.
///
/// # Safety
/// `model` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn onebit_model_dims(
    model: *const OnebitModel,
    m: *mut usize,
    n: *mut usize,
    classes: *mut usize,
    layers: *mut usize,
) -> OnebitStatus {
    guard(|| {
        let model = model_arg(model)?;
        for (ptr, v) in [
            (m, model.m()),
            (n, model.n()),
            (classes, model.classes()),
            (layers, model.layers()),
        ] {
            if !ptr.is_null() {
                *ptr = v;
            }
        }
        Ok(())
    })
}

/// Classifies a raw point `x` of length `n`. Writes the 1-based label and,
/// when `scores` is non-null, the `classes` normalized scores.
///
/// # Safety
/// `x` must hold `n` doubles, `label` be writable and `scores` null or
/// writable for `scores_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn onebit_classify_point(
    model: *const OnebitModel,
    x: *const f64,
    n: usize,
    label: *mut usize,
    scores: *mut f64,
    scores_len: usize,
) -> OnebitStatus {
    guard(|| {
        let model = model_arg(model)?;
        if x.is_null() {
            return Err(null("x"));
        }
        let c = classify_point(model, slice::from_raw_parts(x, n))?;
        write_result(&c, label, scores, scores_len)
    })
}

/// Classifies from one-bit measurements `q` (entries +1 or -1, length `m`).
///
/// # Safety
/// As [`onebit_classify_point`], with `q` holding `m` bytes.
#[no_mangle]
pub unsafe extern "C" fn onebit_classify_code(
    model: *const OnebitModel,
    q: *const i8,
    m: usize,
    label: *mut usize,
    scores: *mut f64,
    scores_len: usize,
) -> OnebitStatus {
    guard(|| {
        let model = model_arg(model)?;
        if q.is_null() {
            return Err(null("q"));
        }
        let code = slice::from_raw_parts(q, m);
        if code.iter().any(|&v| v != 1 && v != -1) {
            return Err(Fail(
                OnebitStatus::InvalidArgument,
                "code entries must be +1 or -1".into(),
            ));
        }
        let c = classify_code(model, code)?;
        write_result(&c, label, scores, scores_len)
    })
}

/// Lower bound on the correct-classification probability for two equal cones
/// of width `a1_deg` separated by `a12_deg`, test point centered, `m` random
/// hyperplanes.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn onebit_theorem_bound(
    m: usize,
    a1_deg: f64,
    a12_deg: f64,
    out: *mut f64,
) -> OnebitStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let geom = ConeGeometry::symmetric_degrees(a1_deg, a12_deg)?;
        *out = theorem_bound(m, &geom)?.lower_bound;
        Ok(())
    })
}
