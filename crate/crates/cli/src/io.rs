use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use bscroll_core::Vec3L;
use serde::Serialize;

/// Writes an `ns × nt` grid of vertices (row-major, `s` outer) as a
/// Wavefront OBJ with one quad per grid cell.
pub fn write_obj(path: &Path, vertices: &[Vec3L], ns: usize, nt: usize) -> Result<()> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    let mut w = BufWriter::new(file);
    obj_to(&mut w, vertices, ns, nt)?;
    w.flush()?;
    Ok(())
}

pub fn obj_to(w: &mut impl Write, vertices: &[Vec3L], ns: usize, nt: usize) -> io::Result<()> {
    assert_eq!(vertices.len(), ns * nt);
    for v in vertices {
        writeln!(w, "v {} {} {}", v[0], v[1], v[2])?;
    }
    let idx = |i: usize, j: usize| i * nt + j + 1;
    for i in 0..ns - 1 {
        for j in 0..nt - 1 {
            writeln!(
                w,
                "f {} {} {} {}",
                idx(i, j),
                idx(i + 1, j),
                idx(i + 1, j + 1),
                idx(i, j + 1)
            )?;
        }
    }
    Ok(())
}

/// CSV with columns `s, t`; `t` is left blank where the curve is unbounded.
pub fn write_curve_csv(path: &Path, rows: &[(f64, Option<f64>)]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot create {}", path.display()))?;
    w.write_record(["s", "t"])?;
    for &(s, t) in rows {
        w.write_record([fmt17(s), t.map(fmt17).unwrap_or_default()])?;
    }
    w.flush()?;
    Ok(())
}

/// 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Pretty JSON to `path`, or to stdout when `path` is `None`.
pub fn emit_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
