//! Plain-text graph files.
//!
//! ```text
//! V d mode
//! i j [multiplicity]
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Consecutive copies of
//! the same stored edge are written as one line with a multiplicity, which
//! keeps the directed-edge indexing intact across a round trip.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{GraphMode, RegularGraph};
use crate::error::{Error, Result};

pub fn write_graph<W: Write>(g: &RegularGraph, mut out: W) -> Result<()> {
    writeln!(out, "{} {} {}", g.vertex_count(), g.degree(), g.mode())?;
    let edges = g.edges();
    let mut i = 0;
    while i < edges.len() {
        let run = edges[i..].iter().take_while(|&&e| e == edges[i]).count();
        let (u, v) = edges[i];
        if run == 1 {
            writeln!(out, "{u} {v}")?;
        } else {
            writeln!(out, "{u} {v} {run}")?;
        }
        i += run;
    }
    Ok(())
}

pub fn read_graph<R: BufRead>(input: R) -> Result<RegularGraph> {
    let mut header = None;
    let mut edges = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|e| Error::Parse {
                line: line_no,
                message: format!("{s:?}: {e}"),
            })
        };
        if header.is_none() {
            if fields.len() != 3 {
                return Err(Error::Parse {
                    line: line_no,
                    message: "expected header \"V d mode\"".into(),
                });
            }
            let mode: GraphMode = fields[2].parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("unknown mode {:?}", fields[2]),
            })?;
            header = Some((parse(fields[0])?, parse(fields[1])?, mode));
            continue;
        }
        let (u, v, mult) = match fields.as_slice() {
            [u, v] => (parse(u)?, parse(v)?, 1),
            [u, v, m] => (parse(u)?, parse(v)?, parse(m)?),
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: "expected \"i j [multiplicity]\"".into(),
                })
            }
        };
        edges.extend(std::iter::repeat_n((u, v), mult));
    }
    let (vertex_count, degree, mode) = header.ok_or(Error::Parse {
        line: 0,
        message: "missing header".into(),
    })?;
    RegularGraph::new(vertex_count, degree, edges, mode)
}

pub fn to_text(g: &RegularGraph) -> String {
    let mut buf = Vec::new();
    write_graph(g, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

pub fn from_text(text: &str) -> Result<RegularGraph> {
    read_graph(text.as_bytes())
}

pub fn load(path: impl AsRef<Path>) -> Result<RegularGraph> {
    read_graph(BufReader::new(File::open(path)?))
}

pub fn save(g: &RegularGraph, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_graph(g, &mut out)?;
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::{dipole, petersen};

    #[test]
    fn round_trip_preserves_indexing() {
        for g in [petersen(), dipole(3)] {
            let back = from_text(&to_text(&g)).unwrap();
            assert_eq!(back, g);
        }
    }

    #[test]
    fn multiplicity_lines() {
        let text = "2 3 multigraph\n# three parallel edges\n0 1 3\n";
        assert_eq!(from_text(text).unwrap(), dipole(3));
        assert_eq!(to_text(&dipole(3)), "2 3 multigraph\n0 1 3\n");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match from_text("4 3 simple\n0 x\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(from_text(""), Err(Error::Parse { .. })));
    }
}
