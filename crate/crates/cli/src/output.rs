//! CSV serialization helpers. Files are written atomically (temp file
//! plus rename) and numbers carry 17 significant digits so identical
//! command lines produce byte-identical bodies.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

/// Format a float at 17 significant digits.
pub fn sig17(value: f64) -> String {
    format!("{value:.16e}")
}

/// Write `contents` to `path` atomically.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut tmp = PathBuf::from(path);
    let mut name = path
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(".tmp");
    tmp.set_file_name(name);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}

/// A CSV body under construction: a header row plus numeric rows.
pub struct Csv {
    body: String,
}

impl Csv {
    pub fn new(header: &str) -> Self {
        Csv {
            body: format!("{header}\n"),
        }
    }

    pub fn row(&mut self, fields: &[f64]) {
        let mut first = true;
        for &f in fields {
            if !first {
                self.body.push(',');
            }
            self.body.push_str(&sig17(f));
            first = false;
        }
        self.body.push('\n');
    }

    /// A row with a leading integer column.
    pub fn indexed_row(&mut self, index: usize, fields: &[f64]) {
        self.body.push_str(&index.to_string());
        for &f in fields {
            self.body.push(',');
            self.body.push_str(&sig17(f));
        }
        self.body.push('\n');
    }

    /// A row with arbitrary string fields.
    pub fn raw_row(&mut self, fields: &[&str]) {
        self.body.push_str(&fields.join(","));
        self.body.push('\n');
    }

    pub fn body(&self) -> &str {
        &self.body
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        write_atomic(path, &self.body)
    }
}
