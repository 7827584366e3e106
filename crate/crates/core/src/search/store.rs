//! On-disk τ catalog: one line-delimited shard per program length plus an index.
//!
//! Every file is written to a temporary name and renamed into place, and the
//! index is written last, so a crash leaves either the old cache or the new
//! one. An exclusive advisory lock on `.lock` serializes concurrent runs.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::enumerate::{enumerate_slps, key_to_poly, poly_to_key, EnumCaps, Key, TauCatalog};
use crate::circuit::Slp;
use crate::error::{Error, Result};
use crate::poly::SparsePoly;

/// Environment variable naming the default cache directory.
pub const CACHE_DIR_ENV: &str = "SIGMATAU_CACHE_DIR";

const FORMAT: u32 = 1;
const INDEX: &str = "index.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct ShardInfo {
    tau: usize,
    file: String,
    entries: usize,
    prunes: u64,
    sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Index {
    format: u32,
    caps: EnumCaps,
    shards: Vec<ShardInfo>,
}

#[derive(Serialize, Deserialize)]
struct Record {
    poly: SparsePoly,
    tau: usize,
    witness: Slp,
}

/// What a [`load_or_enumerate`] call had to do.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CacheOutcome {
    /// Every requested shard was already on disk and verified.
    Hit,
    /// Enumeration ran; shards already present were checked against the result.
    Computed { reused_shards: usize },
}

fn shard_name(tau: usize) -> String {
    format!("tau-{tau}.jsonl")
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<()> {
    let tmp = dir.join(format!(".{name}.tmp"));
    {
        let mut f = File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, dir.join(name))?;
    Ok(())
}

fn shard_bytes(cat: &TauCatalog, tau: usize) -> Vec<u8> {
    let mut out = Vec::new();
    for (k, slp) in cat.entries_of_len(tau) {
        let rec = Record {
            poly: key_to_poly(&k),
            tau,
            witness: slp,
        };
        serde_json::to_writer(&mut out, &rec).expect("records serialize");
        out.push(b'\n');
    }
    out
}

fn read_index(dir: &Path) -> Result<Option<Index>> {
    let path = dir.join(INDEX);
    if !path.exists() {
        return Ok(None);
    }
    let idx: Index = serde_json::from_slice(&fs::read(path)?)
        .map_err(|e| Error::CacheCorrupt(format!("index unreadable: {e}")))?;
    if idx.format != FORMAT {
        return Err(Error::CacheIncompatible(format!(
            "index format {} but this build writes {FORMAT}",
            idx.format
        )));
    }
    Ok(Some(idx))
}

fn read_shard(dir: &Path, info: &ShardInfo) -> Result<Vec<(Key, usize, Slp)>> {
    let bytes = fs::read(dir.join(&info.file))?;
    if sha256_hex(&bytes) != info.sha256 {
        return Err(Error::CacheCorrupt(format!("checksum mismatch in {}", info.file)));
    }
    let mut out = Vec::with_capacity(info.entries);
    for line in BufReader::new(&bytes[..]).lines() {
        let rec: Record = serde_json::from_str(&line?)
            .map_err(|e| Error::CacheCorrupt(format!("{}: {e}", info.file)))?;
        rec.witness
            .validate()
            .map_err(|e| Error::CacheCorrupt(format!("{}: {e}", info.file)))?;
        let key = poly_to_key(&rec.poly)
            .ok_or_else(|| Error::CacheCorrupt(format!("{}: non-integral key", info.file)))?;
        if rec.tau != info.tau {
            return Err(Error::CacheCorrupt(format!("{}: record with tau {}", info.file, rec.tau)));
        }
        out.push((key, rec.tau, rec.witness));
    }
    if out.len() != info.entries {
        return Err(Error::CacheCorrupt(format!("{}: entry count differs from index", info.file)));
    }
    Ok(out)
}

struct Lock(File);

impl Lock {
    fn acquire(dir: &Path) -> Result<Lock> {
        let f = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(dir.join(".lock"))?;
        f.lock()?;
        Ok(Lock(f))
    }
}

impl Drop for Lock {
    fn drop(&mut self) {
        let _ = self.0.unlock();
    }
}

/// Default cache directory: `$SIGMATAU_CACHE_DIR`, else `./.sigmatau-cache`.
pub fn default_cache_dir() -> PathBuf {
    std::env::var_os(CACHE_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(".sigmatau-cache"))
}

/// Catalog for `max_len`, served from `dir` when every shard is present and
/// intact, otherwise enumerated and persisted.
pub fn load_or_enumerate(dir: &Path, max_len: usize, caps: EnumCaps) -> Result<(TauCatalog, CacheOutcome)> {
    fs::create_dir_all(dir)?;
    let _lock = Lock::acquire(dir)?;
    let index = read_index(dir)?;
    if let Some(idx) = &index {
        if idx.caps != caps {
            return Err(Error::CacheIncompatible(format!(
                "cache built with caps {:?}, requested {:?}",
                idx.caps, caps
            )));
        }
        if idx.shards.len() > max_len {
            let mut entries = Vec::new();
            let mut prunes = Vec::new();
            for info in &idx.shards[..=max_len] {
                entries.extend(read_shard(dir, info)?);
                prunes.push(info.prunes);
            }
            return Ok((TauCatalog::from_parts(max_len, caps, entries, prunes)?, CacheOutcome::Hit));
        }
    }

    let cat = enumerate_slps(max_len, caps)?;
    let old = index.map(|i| i.shards).unwrap_or_default();
    let mut shards = Vec::with_capacity(max_len + 1);
    let mut reused = 0;
    for tau in 0..=max_len {
        let bytes = shard_bytes(&cat, tau);
        let info = ShardInfo {
            tau,
            file: shard_name(tau),
            entries: cat.count_at(tau),
            prunes: cat.prunes[tau],
            sha256: sha256_hex(&bytes),
        };
        match old.get(tau) {
            Some(prev) if *prev == info && sha256_hex(&fs::read(dir.join(&prev.file))?) == prev.sha256 => {
                reused += 1;
            }
            Some(prev) if prev.sha256 != info.sha256 => {
                return Err(Error::CacheCorrupt(format!(
                    "{} disagrees with a fresh enumeration",
                    prev.file
                )));
            }
            _ => write_atomic(dir, &info.file, &bytes)?,
        }
        shards.push(info);
    }
    let idx = Index {
        format: FORMAT,
        caps,
        shards,
    };
    write_atomic(dir, INDEX, &serde_json::to_vec_pretty(&idx)?)?;
    Ok((cat, CacheOutcome::Computed { reused_shards: reused }))
}
