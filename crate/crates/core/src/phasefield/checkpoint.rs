//! Binary checkpoint format, so runs resume bit-identically.
//!
//! Layout (all little-endian):
//! ```text
//! bytes 0..8   magic "ACPF0001"
//! bytes 8..16  eps (f64)
//! bytes 16..24 time stamp (f64)
//! bytes 24..32 grid spec hash (u64)
//! bytes 32..40 node count (u64)
//! bytes 40..   node values, row-major (f64 each)
//! ```

use super::PhaseField;
use crate::manifold::{grid_spec_hash, ChartGrid, ScalarField};
use std::io::{Read, Write};
use std::path::Path;
use std::sync::Arc;
use thiserror::Error;

const MAGIC: &[u8; 8] = b"ACPF0001";

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("checkpoint io: {0}")]
    Io(#[from] std::io::Error),
    #[error("not a checkpoint file (bad magic)")]
    BadMagic,
    #[error("checkpoint grid hash {got:#x} does not match grid {expected:#x}")]
    GridMismatch { expected: u64, got: u64 },
    #[error("checkpoint truncated: expected {expected} values, got {got}")]
    Truncated { expected: usize, got: usize },
}

pub fn write_checkpoint(path: &Path, s: &PhaseField) -> Result<(), CheckpointError> {
    let mut buf = Vec::with_capacity(40 + 8 * s.u.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&s.eps.to_le_bytes());
    buf.extend_from_slice(&s.t.to_le_bytes());
    buf.extend_from_slice(&grid_spec_hash(&s.grid).to_le_bytes());
    buf.extend_from_slice(&(s.u.len() as u64).to_le_bytes());
    for v in &s.u.values {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(&buf)?;
    Ok(())
}

pub fn read_checkpoint(path: &Path, grid: &Arc<ChartGrid>) -> Result<PhaseField, CheckpointError> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    if bytes.len() < 40 || &bytes[0..8] != MAGIC {
        return Err(CheckpointError::BadMagic);
    }
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let u64_at = |o: usize| u64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let eps = f64_at(8);
    let t = f64_at(16);
    let hash = u64_at(24);
    let expected_hash = grid_spec_hash(grid);
    if hash != expected_hash {
        return Err(CheckpointError::GridMismatch { expected: expected_hash, got: hash });
    }
    let n = u64_at(32) as usize;
    let avail = (bytes.len() - 40) / 8;
    if n != grid.node_count() || avail < n {
        return Err(CheckpointError::Truncated { expected: grid.node_count(), got: avail.min(n) });
    }
    let mut values = Vec::with_capacity(n);
    for k in 0..n {
        values.push(f64_at(40 + 8 * k));
    }
    Ok(PhaseField::new(ScalarField { values }, eps, t, grid.clone()))
}
