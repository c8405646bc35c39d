//! Helpers shared by the CLI integration tests: running the compiled
//! binary, scratch config files, and a small quote-aware CSV reader.

#![allow(dead_code)]

use std::fs;
use std::path::PathBuf;
use std::process::Command;

/// Path of the compiled `cpolder` binary under test.
pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_cpolder")
}

/// Per-test scratch directory under the cargo-managed tmp root.
pub fn scratch(test: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(test);
    fs::create_dir_all(&dir).expect("create scratch dir");
    dir
}

/// Write a config file into `dir` and return its path as a string.
pub fn write_config(dir: &PathBuf, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).expect("write config");
    path.to_str().expect("utf-8 path").to_string()
}

/// Run the binary with `args`; returns (exit code, stdout, stderr).
pub fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(bin()).args(args).output().expect("spawn cpolder");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
    )
}

/// Split one CSV record, honoring double-quoted fields with `""` escapes.
pub fn split_csv(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut field = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        if quoted {
            if c == '"' {
                if chars.peek() == Some(&'"') {
                    chars.next();
                    field.push('"');
                } else {
                    quoted = false;
                }
            } else {
                field.push(c);
            }
        } else {
            match c {
                '"' => quoted = true,
                ',' => fields.push(std::mem::take(&mut field)),
                _ => field.push(c),
            }
        }
    }
    fields.push(field);
    fields
}

/// Parsed CSV body: header names and data rows (comment lines skipped).
pub struct Csv {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn parse(text: &str) -> Csv {
        let mut comments = Vec::new();
        let mut header = Vec::new();
        let mut rows = Vec::new();
        for line in text.lines() {
            if line.starts_with('#') {
                comments.push(line.to_string());
            } else if header.is_empty() {
                header = split_csv(line).into_iter().collect();
            } else if !line.is_empty() {
                rows.push(split_csv(line));
            }
        }
        Csv { comments, header, rows }
    }

    /// Column index for a header name; panics if missing.
    pub fn col(&self, name: &str) -> usize {
        self.header
            .iter()
            .position(|h| h == name)
            .unwrap_or_else(|| panic!("no column {name:?} in header {:?}", self.header))
    }

    /// Field (row, named column) parsed as f64.
    pub fn num(&self, row: usize, name: &str) -> f64 {
        self.rows[row][self.col(name)].parse().expect("numeric field")
    }

    /// Field (row, named column) as text.
    pub fn text(&self, row: usize, name: &str) -> &str {
        &self.rows[row][self.col(name)]
    }
}

/// Minimal deterministic generator (64-bit LCG) for reproducible random
/// sampling in tests; not a statistical-quality RNG.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Log-uniform in [lo, hi), lo > 0.
    pub fn log_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo * (hi / lo).powf(self.next_f64())
    }
}

/// Least-squares slope of ln|y| against ln x.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let lx = x.ln();
        let ly = y.abs().ln();
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}
