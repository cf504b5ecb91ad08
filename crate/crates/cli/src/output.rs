//! CSV and JSON writers. Files are written to a temporary sibling and renamed
//! into place.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

/// Law parameters attached to every output record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LawParams {
    pub alpha: f64,
    pub rho: f64,
}

/// One grid point of a transform or density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub x_or_t: f64,
    pub value: f64,
    pub abs_err: f64,
    pub law: LawParams,
    pub operation: String,
}

/// Reals are printed with 17 significant digits in exponent form.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn records_csv(records: &[OutputRecord]) -> String {
    let mut s = String::from("x,value,abs_err\n");
    for r in records {
        s.push_str(&format!(
            "{},{},{}\n",
            fmt_real(r.x_or_t),
            fmt_real(r.value),
            fmt_real(r.abs_err)
        ));
    }
    s
}

pub fn values_csv(values: &[f64]) -> String {
    let mut s = String::with_capacity(24 * (values.len() + 1));
    s.push_str("value\n");
    for &v in values {
        s.push_str(&fmt_real(v));
        s.push('\n');
    }
    s
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path.file_name().ok_or_else(|| {
        io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name")
    })?;
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

/// Writes to `path`, or to standard output when `path` is `None`.
pub fn emit(path: Option<&Path>, contents: &str) -> io::Result<()> {
    match path {
        Some(p) => write_atomic(p, contents),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(contents.as_bytes())?;
            out.flush()
        }
    }
}

/// `draws.csv` → `draws.json`; a path without extension gets `.json` appended.
pub fn sidecar_path(path: &Path) -> PathBuf {
    if path.extension().is_some_and(|e| e != "json") {
        path.with_extension("json")
    } else {
        let mut s = path.as_os_str().to_owned();
        s.push(".json");
        PathBuf::from(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let r = OutputRecord {
            x_or_t: 0.5,
            value: 1.5,
            abs_err: 0.0,
            law: LawParams {
                alpha: 1.5,
                rho: 0.5,
            },
            operation: "kappa".into(),
        };
        assert_eq!(
            records_csv(&[r]),
            "x,value,abs_err\n5.0000000000000000e-1,1.5000000000000000e0,0.0000000000000000e0\n"
        );
        assert_eq!(values_csv(&[2.0]), "value\n2.0000000000000000e0\n");
        assert_eq!(
            "1.0000000000000001e0".parse::<f64>().unwrap(),
            1.0000000000000001
        );
    }

    #[test]
    fn atomic_write_and_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.csv");
        write_atomic(&p, "x\n").unwrap();
        write_atomic(&p, "y\n").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "y\n");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
        assert_eq!(sidecar_path(&p), dir.path().join("a.json"));
        assert_eq!(sidecar_path(Path::new("out")), PathBuf::from("out.json"));
        assert_eq!(
            sidecar_path(Path::new("o.json")),
            PathBuf::from("o.json.json")
        );
        assert!(write_atomic(&dir.path().join("missing/x.csv"), "z").is_err());
    }
}
