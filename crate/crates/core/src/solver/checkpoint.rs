//! Binary checkpoints.
//!
//! Layout, all little-endian:
//!
//! ```text
//! magic     8 bytes  "DRAGFLOW"
//! version   u32      1
//! n         u64      modes per axis
//! L         f64      box length
//! c         f64
//! t         f64
//! 7 arrays  phi, u1, u2, u3, v1, v2, v3; each n^3 pairs (re, im) of f64
//! ```
//!
//! Within an array modes run over integer triples `(k1, k2, k3)`, each
//! `k_i` in `-n/2 .. n/2 - 1`, in lexicographic order (`k3` fastest).

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::{build_grid, SpectralGrid};
use crate::state::State;

pub const MAGIC: &[u8; 8] = b"DRAGFLOW";
pub const VERSION: u32 = 1;

/// Storage index of every mode in lexicographic `k` order.
fn lexicographic_order<T: Real>(grid: &SpectralGrid<T>) -> Vec<usize> {
    let h = (grid.n() / 2) as i64;
    let mut out = Vec::with_capacity(grid.len());
    for k1 in -h..h {
        for k2 in -h..h {
            for k3 in -h..h {
                out.push(grid.index_of([k1, k2, k3]).expect("lattice mode"));
            }
        }
    }
    out
}

pub fn write_checkpoint<T: Real>(state: &State<T>, w: impl Write) -> Result<()> {
    let mut w = BufWriter::new(w);
    let g = state.grid();
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(g.n() as u64).to_le_bytes())?;
    for x in [g.box_length(), state.c, state.t] {
        w.write_all(&x.as_f64().to_le_bytes())?;
    }
    let order = lexicographic_order(g);
    for f in state.fields() {
        for &idx in &order {
            let z = f.get(idx);
            w.write_all(&z.re.as_f64().to_le_bytes())?;
            w.write_all(&z.im.as_f64().to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

fn read_array<const N: usize>(r: &mut impl Read) -> Result<[u8; N]> {
    let mut b = [0u8; N];
    r.read_exact(&mut b).map_err(|e| Error::Format(format!("truncated checkpoint: {e}")))?;
    Ok(b)
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    Ok(f64::from_le_bytes(read_array::<8>(r)?))
}

pub fn read_checkpoint<T: Real>(r: impl Read) -> Result<State<T>> {
    let mut r = BufReader::new(r);
    if &read_array::<8>(&mut r)? != MAGIC {
        return Err(Error::Format("not a dragflow checkpoint (bad magic)".into()));
    }
    let version = u32::from_le_bytes(read_array::<4>(&mut r)?);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported checkpoint version {version}")));
    }
    let n = u64::from_le_bytes(read_array::<8>(&mut r)?);
    let n = usize::try_from(n).map_err(|_| Error::Format(format!("grid size {n} too large")))?;
    let l = read_f64(&mut r)?;
    let c = read_f64(&mut r)?;
    let t = read_f64(&mut r)?;
    let grid = build_grid(n, T::lit(l)).map_err(|e| Error::Format(format!("bad grid in checkpoint: {e}")))?;
    let mut state = State::zeros(&grid, T::lit(c));
    state.t = T::lit(t);
    let order = lexicographic_order(&grid);
    for f in state.fields_mut() {
        for &idx in &order {
            let re = read_f64(&mut r)?;
            let im = read_f64(&mut r)?;
            f.set(idx, Complex::new(T::lit(re), T::lit(im)));
        }
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::Format("trailing bytes after checkpoint payload".into()));
    }
    Ok(state)
}

pub fn save_checkpoint<T: Real>(state: &State<T>, path: &Path) -> Result<()> {
    write_checkpoint(state, File::create(path)?)
}

pub fn load_checkpoint<T: Real>(path: &Path) -> Result<State<T>> {
    read_checkpoint(File::open(path)?)
}
