//! Append-only on-disk store for strip solutions.
//!
//! One JSON object per line. Floating-point values are kept as the hex of
//! their bit patterns so reloaded entries are bit-identical.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cache::{SolutionCache, SolutionKey};
use crate::error::{IoError, Result};
use crate::minimal_surface::{Branch, TurningPointSolution};

#[derive(Debug, Serialize, Deserialize)]
struct Line {
    key: String,
    z_star: String,
    width: String,
    area_reg: String,
    cutoff: String,
    branch: Branch,
}

fn hex(x: f64) -> String {
    format!("{:016x}", x.to_bits())
}

fn unhex(s: &str) -> Option<f64> {
    u64::from_str_radix(s, 16).ok().map(f64::from_bits)
}

fn encode_key(k: &SolutionKey) -> String {
    format!(
        "{}:strip:{:016x}:{:016x}:{}:{:016x}",
        k.geometry, k.width, k.eps, k.node_count, k.rel_tol
    )
}

fn decode_key(s: &str) -> Option<SolutionKey> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [g, "strip", w, e, n, t] => Some(SolutionKey {
            geometry: (*g).to_owned(),
            width: u64::from_str_radix(w, 16).ok()?,
            eps: u64::from_str_radix(e, 16).ok()?,
            node_count: n.parse().ok()?,
            rel_tol: u64::from_str_radix(t, 16).ok()?,
        }),
        _ => None,
    }
}

fn decode(line: &str) -> Option<(SolutionKey, TurningPointSolution)> {
    let l: Line = serde_json::from_str(line).ok()?;
    Some((
        decode_key(&l.key)?,
        TurningPointSolution {
            z_star: unhex(&l.z_star)?,
            width: unhex(&l.width)?,
            area_reg: unhex(&l.area_reg)?,
            cutoff: unhex(&l.cutoff)?,
            branch: l.branch,
        },
    ))
}

/// An open, exclusively locked cache file.
#[derive(Debug)]
pub struct DiskCache {
    file: File,
    path: PathBuf,
    loaded: usize,
}

impl DiskCache {
    /// Opens (creating if needed) and locks the file, loads every entry into
    /// `cache`, and drops a torn final line.
    pub fn open(path: &Path, cache: &SolutionCache) -> Result<Self> {
        let mut file = OpenOptions::new()
            .read(true)
            .write(true)
            .create(true)
            .truncate(false)
            .open(path)?;
        file.lock()?;
        let mut good_len = 0u64;
        let mut loaded = 0;
        let mut lines = Vec::new();
        {
            let mut reader = BufReader::new(&file);
            let mut buf = String::new();
            loop {
                buf.clear();
                let n = reader.read_line(&mut buf)?;
                if n == 0 {
                    break;
                }
                lines.push((
                    n,
                    buf.ends_with('\n'),
                    buf.trim_end_matches('\n').to_owned(),
                ));
            }
        }
        let count = lines.len();
        for (i, (n, terminated, text)) in lines.into_iter().enumerate() {
            match decode(&text) {
                Some((k, v)) if terminated => {
                    cache.preload(k, v);
                    loaded += 1;
                    good_len += n as u64;
                }
                _ if i + 1 == count => break,
                _ => {
                    return Err(IoError::Malformed(format!(
                        "cache file {} has a corrupt entry on line {}",
                        path.display(),
                        i + 1
                    ))
                    .into())
                }
            }
        }
        file.set_len(good_len)?;
        file.seek(SeekFrom::End(0))?;
        Ok(Self {
            file,
            path: path.to_owned(),
            loaded,
        })
    }

    pub fn loaded(&self) -> usize {
        self.loaded
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Appends the entries computed since the last flush.
    pub fn persist(&mut self, cache: &SolutionCache) -> Result<usize> {
        let fresh = cache.take_fresh();
        let mut out = String::new();
        for (k, v) in &fresh {
            let line = Line {
                key: encode_key(k),
                z_star: hex(v.z_star),
                width: hex(v.width),
                area_reg: hex(v.area_reg),
                cutoff: hex(v.cutoff),
                branch: v.branch,
            };
            out.push_str(&serde_json::to_string(&line).map_err(IoError::from)?);
            out.push('\n');
        }
        self.file.write_all(out.as_bytes())?;
        self.file.flush()?;
        Ok(fresh.len())
    }
}
