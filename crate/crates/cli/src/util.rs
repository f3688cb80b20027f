use std::fs;
use std::path::Path;

use bohr_szego_core::error::Error as CoreError;
use num_complex::Complex64;

/// Failure classes mapped onto exit codes: input problems exit 2,
/// failed assertion-style checks exit 1.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Check(String),
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::DegenerateWeight { .. } | CoreError::NotOuter { .. } => {
                Failure::Check(e.to_string())
            }
            other => Failure::Input(other.to_string()),
        }
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        Failure::Input(format!(
            "{}: parse error at line {} column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

/// Writes through a temp file in the target directory, then renames, so a
/// failing run never leaves a partial output behind.
pub fn emit(out: Option<&Path>, content: &str) -> Result<(), Failure> {
    match out {
        None => {
            print!("{content}");
            if !content.ends_with('\n') {
                println!();
            }
            Ok(())
        }
        Some(path) => {
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
            let tmp = match dir {
                Some(d) => d.join(format!(
                    ".{}.tmp",
                    path.file_name().unwrap_or_default().to_string_lossy()
                )),
                None => Path::new(&format!(
                    ".{}.tmp",
                    path.file_name().unwrap_or_default().to_string_lossy()
                ))
                .to_path_buf(),
            };
            fs::write(&tmp, content)
                .map_err(|e| Failure::Input(format!("{}: {e}", tmp.display())))?;
            fs::rename(&tmp, path)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            Ok(())
        }
    }
}

/// Parses "re,im;re,im;..." into complex coordinates.
pub fn parse_point(text: &str) -> Result<Vec<Complex64>, Failure> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let mut it = pair.split(',');
            let re = it
                .next()
                .ok_or_else(|| Failure::Input(format!("bad coordinate '{pair}'")))?
                .trim()
                .parse::<f64>()
                .map_err(|e| Failure::Input(format!("bad coordinate '{pair}': {e}")))?;
            let im = match it.next() {
                Some(s) => s
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Failure::Input(format!("bad coordinate '{pair}': {e}")))?,
                None => 0.0,
            };
            Ok(Complex64::new(re, im))
        })
        .collect()
}

pub fn parse_f64_list(text: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Failure::Input(format!("bad number '{s}': {e}")))
        })
        .collect()
}

pub fn parse_usize_list(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|e| Failure::Input(format!("bad integer '{s}': {e}")))
        })
        .collect()
}

/// JSON value for possibly infinite quantities.
pub fn json_finite(x: f64) -> serde_json::Value {
    if x.is_finite() {
        serde_json::json!(x)
    } else {
        serde_json::json!("infinity")
    }
}
