//! Plain-text network files: a header line `n m`, then `m` lines `u v c`
//! (0-based, `u < v`, decimal conductance).

use std::io::{BufRead, Write};

use super::{ElectricNetwork, NetworkError};

pub fn write_network<W: Write>(net: &ElectricNetwork, mut out: W) -> Result<(), NetworkError> {
    writeln!(out, "{} {}", net.vertex_count(), net.edge_count())?;
    for e in 0..net.edge_count() {
        let (u, v) = net.endpoints(e);
        writeln!(out, "{} {} {}", u, v, net.conductance(e))?;
    }
    Ok(())
}

pub fn read_network<R: BufRead>(input: R) -> Result<ElectricNetwork, NetworkError> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| match l {
            Ok(s) => {
                let t = s.trim();
                !t.is_empty() && !t.starts_with('#')
            }
            Err(_) => true,
        });
    let (line_no, header) = lines.next().ok_or(NetworkError::Parse {
        line: 1,
        message: "missing header `n m`".into(),
    })?;
    let header = header?;
    let mut fields = header.split_whitespace();
    let n: usize = parse_field(fields.next(), line_no, "n")?;
    let m: usize = parse_field(fields.next(), line_no, "m")?;
    let mut edges = Vec::with_capacity(m);
    for (line_no, line) in lines.by_ref().take(m) {
        let line = line?;
        let mut f = line.split_whitespace();
        let u: usize = parse_field(f.next(), line_no, "u")?;
        let v: usize = parse_field(f.next(), line_no, "v")?;
        let c: f64 = parse_field(f.next(), line_no, "c")?;
        if u >= v {
            return Err(NetworkError::Parse {
                line: line_no,
                message: format!("expected u < v, found {u} {v}"),
            });
        }
        edges.push((u, v, c));
    }
    if edges.len() != m {
        return Err(NetworkError::Parse {
            line: line_no,
            message: format!("header announces {m} edges, file has {}", edges.len()),
        });
    }
    ElectricNetwork::new(n, &edges)
}

fn parse_field<T: std::str::FromStr>(
    field: Option<&str>,
    line: usize,
    name: &str,
) -> Result<T, NetworkError> {
    let raw = field.ok_or_else(|| NetworkError::Parse {
        line,
        message: format!("missing field `{name}`"),
    })?;
    raw.parse().map_err(|_| NetworkError::Parse {
        line,
        message: format!("cannot parse `{name}` from `{raw}`"),
    })
}
