//! Versioned plain-text snapshots of `(eta, xi)`.
//!
//! ```text
//! cvwave-snapshot 1
//! L 6.2831853071795862e0
//! N 4
//! g 9.8100000000000005e0
//! omega 0.0000000000000000e0
//! d_ref 1.0000000000000000e0
//! t 0.0000000000000000e0
//! eta xi
//! 1.0000000000000000e0 0.0000000000000000e0
//! ...
//! ```
//!
//! Numbers carry 17 significant digits, so doubles round-trip exactly.

use std::fmt::Write as _;
use std::path::Path;

use cvwave_core::{SurfaceState, WaveParameters};

use crate::error::{CliError, Result};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "cvwave-snapshot";

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub length: f64,
    pub gravity: f64,
    pub omega: f64,
    pub d_ref: f64,
    pub state: SurfaceState,
}

impl Snapshot {
    pub fn new(params: &WaveParameters, state: SurfaceState) -> Self {
        Self {
            length: params.length,
            gravity: params.gravity,
            omega: params.omega,
            d_ref: params.d_ref,
            state,
        }
    }

    pub fn n(&self) -> usize {
        self.state.eta.len()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{MAGIC} {FORMAT_VERSION}");
        let _ = writeln!(s, "L {:.16e}", self.length);
        let _ = writeln!(s, "N {}", self.n());
        let _ = writeln!(s, "g {:.16e}", self.gravity);
        let _ = writeln!(s, "omega {:.16e}", self.omega);
        let _ = writeln!(s, "d_ref {:.16e}", self.d_ref);
        let _ = writeln!(s, "t {:.16e}", self.state.t);
        s.push_str("eta xi\n");
        for (e, x) in self.state.eta.iter().zip(&self.state.xi) {
            let _ = writeln!(s, "{e:.16e} {x:.16e}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |line: usize, msg: &str| CliError::Config(format!("snapshot line {line}: {msg}"));
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let (_, head) = lines.next().ok_or_else(|| bad(1, "empty file"))?;
        let version = head
            .strip_prefix(MAGIC)
            .map(str::trim)
            .ok_or_else(|| bad(1, "not a cvwave snapshot"))?;
        if version != FORMAT_VERSION.to_string() {
            return Err(bad(
                1,
                &format!("unsupported format version {version:?} (expected {FORMAT_VERSION})"),
            ));
        }
        let mut header = |key: &str| -> Result<(usize, String)> {
            let (no, line) = lines.next().ok_or_else(|| bad(0, "truncated header"))?;
            let value = line
                .strip_prefix(key)
                .filter(|r| r.starts_with(' '))
                .ok_or_else(|| bad(no, &format!("expected `{key}`")))?;
            Ok((no, value.trim().to_string()))
        };
        let num = |(no, v): (usize, String)| v.parse::<f64>().map_err(|_| bad(no, "bad number"));
        let length = num(header("L")?)?;
        let (no, n) = header("N")?;
        let n: usize = n.parse().map_err(|_| bad(no, "bad node count"))?;
        let gravity = num(header("g")?)?;
        let omega = num(header("omega")?)?;
        let d_ref = num(header("d_ref")?)?;
        let t = num(header("t")?)?;
        match lines.next() {
            Some((_, "eta xi")) => {}
            Some((no, _)) => return Err(bad(no, "expected column header `eta xi`")),
            None => return Err(bad(0, "missing data")),
        }
        let (mut eta, mut xi) = (Vec::with_capacity(n), Vec::with_capacity(n));
        for (no, line) in lines.filter(|(_, l)| !l.is_empty()) {
            let mut parts = line.split_whitespace();
            let mut next = || -> Result<f64> {
                parts
                    .next()
                    .ok_or_else(|| bad(no, "expected two columns"))?
                    .parse()
                    .map_err(|_| bad(no, "bad number"))
            };
            eta.push(next()?);
            xi.push(next()?);
        }
        if eta.len() != n {
            return Err(CliError::Config(format!(
                "snapshot holds {} rows but header says N = {n}",
                eta.len()
            )));
        }
        Ok(Self {
            length,
            gravity,
            omega,
            d_ref,
            state: SurfaceState { t, eta, xi },
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| CliError::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_text(&text)
    }
}
