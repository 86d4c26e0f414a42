//! ASCII mesh format.
//!
//! ```text
//! NODES n
//! <index> <x> <y>          (n lines, 17 significant digits)
//! TRIANGLES m
//! <a> <b> <c>              (m lines, 0-based node indices)
//! BOUNDARY k
//! <a> <b> <tag>            (k lines)
//! ```
//!
//! Blank lines and lines starting with `#` are ignored by the reader.

use std::io::{BufRead, Write};

use super::{Point, TriangleMesh};
use crate::{Error, Result};

pub fn write_mesh<W: Write>(mesh: &TriangleMesh, mut out: W) -> Result<()> {
    writeln!(out, "NODES {}", mesh.num_nodes())?;
    for (i, p) in mesh.nodes().iter().enumerate() {
        writeln!(out, "{i} {:.16e} {:.16e}", p.x, p.y)?;
    }
    writeln!(out, "TRIANGLES {}", mesh.num_triangles())?;
    for [a, b, c] in mesh.triangles() {
        writeln!(out, "{a} {b} {c}")?;
    }
    writeln!(out, "BOUNDARY {}", mesh.boundary_edges().len())?;
    for e in mesh.boundary_edges() {
        writeln!(out, "{} {} {}", e.nodes[0], e.nodes[1], e.tag)?;
    }
    Ok(())
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    line: usize,
}

impl<R: BufRead> Lines<R> {
    /// Next significant line with its 1-based number.
    fn next(&mut self, what: &str) -> Result<String> {
        loop {
            self.line += 1;
            match self.inner.next() {
                None => return Err(self.err(format!("unexpected end of file, expected {what}"))),
                Some(line) => {
                    let line = line?;
                    let trimmed = line.trim();
                    if !trimmed.is_empty() && !trimmed.starts_with('#') {
                        return Ok(trimmed.to_owned());
                    }
                }
            }
        }
    }

    fn err(&self, message: String) -> Error {
        Error::Parse {
            line: self.line,
            message,
        }
    }

    fn header(&mut self, keyword: &str) -> Result<usize> {
        let line = self.next(keyword)?;
        let mut parts = line.split_whitespace();
        if parts.next() != Some(keyword) {
            return Err(self.err(format!("expected `{keyword} <count>`, found `{line}`")));
        }
        let count = parts.next().and_then(|c| c.parse().ok());
        match (count, parts.next()) {
            (Some(c), None) => Ok(c),
            _ => Err(self.err(format!("malformed {keyword} header `{line}`"))),
        }
    }

    fn record<T: std::str::FromStr, const N: usize>(&mut self, what: &str) -> Result<[T; N]> {
        let line = self.next(what)?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != N {
            return Err(self.err(format!(
                "expected {N} fields in {what} record, found {}",
                fields.len()
            )));
        }
        let mut parsed = Vec::with_capacity(N);
        for f in fields {
            parsed.push(
                f.parse::<T>()
                    .map_err(|_| self.err(format!("invalid {what} field `{f}`")))?,
            );
        }
        Ok(parsed.try_into().unwrap_or_else(|_| unreachable!()))
    }
}

/// Reads a mesh written by [`write_mesh`]. The level is reset to zero and
/// `h_global` to the largest diameter.
pub fn read_mesh<R: BufRead>(input: R) -> Result<TriangleMesh> {
    let mut lines = Lines {
        inner: input.lines(),
        line: 0,
    };
    let n = lines.header("NODES")?;
    let mut nodes = Vec::with_capacity(n);
    for i in 0..n {
        let [idx, x, y]: [f64; 3] = lines.record("node")?;
        if idx != i as f64 {
            return Err(lines.err(format!("node index {idx} out of sequence, expected {i}")));
        }
        nodes.push(Point::new(x, y));
    }
    let m = lines.header("TRIANGLES")?;
    let mut triangles = Vec::with_capacity(m);
    for _ in 0..m {
        triangles.push(lines.record::<usize, 3>("triangle")?);
    }
    let k = lines.header("BOUNDARY")?;
    let mut boundary = Vec::with_capacity(k);
    for _ in 0..k {
        let [a, b, tag] = lines.record::<usize, 3>("boundary")?;
        boundary.push(([a, b], tag));
    }
    TriangleMesh::new(nodes, triangles, boundary, 0)
}
