//! PGM (P2/P5) and CSV I/O for two-dimensional grid functions.
//!
//! Pixel `(column c, row r)` maps to the cell with lattice index `(c, r)`,
//! so axis 0 runs left to right and axis 1 runs top to bottom. Gray levels
//! are mapped affinely to `[0, 1]` by `value = level / maxval`.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::domain::GridDomain;
use crate::lattice::function::GridFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmFormat {
    /// ASCII `P2`.
    Plain,
    /// Binary `P5`.
    Raw,
}

/// A decoded image and the gray-level mapping used to read it.
#[derive(Debug, Clone, PartialEq)]
pub struct PgmImage {
    pub function: GridFunction,
    pub maxval: u16,
    pub format: PgmFormat,
}

impl PgmImage {
    /// Width and height in pixels.
    pub fn size(&self) -> (usize, usize) {
        let s = self.function.domain().shape();
        (s[0], s[1])
    }
}

fn pgm_err(message: impl Into<String>) -> Error {
    Error::Parse {
        line: 0,
        message: message.into(),
    }
}

/// Splits the header into whitespace-separated tokens, skipping `#`
/// comments, and returns the byte offset right after the last token.
fn header_tokens(bytes: &[u8], count: usize) -> Result<(Vec<String>, usize)> {
    let mut tokens = Vec::with_capacity(count);
    let mut i = 0;
    while tokens.len() < count {
        while i < bytes.len() && (bytes[i].is_ascii_whitespace() || bytes[i] == b'#') {
            if bytes[i] == b'#' {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            } else {
                i += 1;
            }
        }
        let start = i;
        while i < bytes.len() && !bytes[i].is_ascii_whitespace() && bytes[i] != b'#' {
            i += 1;
        }
        if start == i {
            return Err(pgm_err("truncated PGM header"));
        }
        tokens.push(String::from_utf8_lossy(&bytes[start..i]).into_owned());
    }
    Ok((tokens, i))
}

/// Decodes a PGM image onto a grid of mesh `h` with lower corner at the
/// origin.
pub fn read_pgm(bytes: &[u8], h: f64) -> Result<PgmImage> {
    let (tokens, end) = header_tokens(bytes, 4)?;
    let format = match tokens[0].as_str() {
        "P2" => PgmFormat::Plain,
        "P5" => PgmFormat::Raw,
        other => return Err(pgm_err(format!("unsupported magic '{other}'"))),
    };
    let parse = |t: &str, what: &str| {
        t.parse::<usize>()
            .map_err(|_| pgm_err(format!("invalid {what} '{t}'")))
    };
    let width = parse(&tokens[1], "width")?;
    let height = parse(&tokens[2], "height")?;
    let maxval = parse(&tokens[3], "maxval")?;
    if width == 0 || height == 0 {
        return Err(pgm_err("empty image"));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(pgm_err(format!("maxval {maxval} outside 1..=65535")));
    }
    let n = width * height;
    let levels: Vec<usize> = match format {
        PgmFormat::Plain => {
            let text = String::from_utf8_lossy(&bytes[end..]);
            let levels: Vec<usize> = text
                .split_whitespace()
                .take(n)
                .map(|t| parse(t, "gray level"))
                .collect::<Result<_>>()?;
            if levels.len() != n {
                return Err(pgm_err(format!("expected {n} gray levels, found {}", levels.len())));
            }
            levels
        }
        PgmFormat::Raw => {
            // exactly one whitespace byte separates header and raster
            let data = bytes.get(end + 1..).unwrap_or(&[]);
            let wide = maxval > 255;
            let need = if wide { 2 * n } else { n };
            if data.len() < need {
                return Err(pgm_err(format!("raster has {} bytes, expected {need}", data.len())));
            }
            if wide {
                data[..need]
                    .chunks_exact(2)
                    .map(|p| usize::from(u16::from_be_bytes([p[0], p[1]])))
                    .collect()
            } else {
                data[..n].iter().map(|&b| usize::from(b)).collect()
            }
        }
    };
    if let Some(bad) = levels.iter().find(|&&l| l > maxval) {
        return Err(pgm_err(format!("gray level {bad} exceeds maxval {maxval}")));
    }
    let domain = Arc::new(GridDomain::new(h, vec![0, 0], vec![width, height])?);
    let mut values = vec![0.0; n];
    for row in 0..height {
        for col in 0..width {
            values[col * height + row] = levels[row * width + col] as f64 / maxval as f64;
        }
    }
    Ok(PgmImage {
        function: GridFunction::new(domain, values)?,
        maxval: maxval as u16,
        format,
    })
}

/// Encodes a 2D grid function; values are clamped to `[0, 1]` and scaled
/// by `maxval`.
pub fn write_pgm(u: &GridFunction, maxval: u16, format: PgmFormat) -> Result<Vec<u8>> {
    let shape = u.domain().shape();
    if shape.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: shape.len(),
        });
    }
    if maxval == 0 {
        return Err(Error::Config("maxval must be positive".into()));
    }
    let (width, height) = (shape[0], shape[1]);
    let level = |row: usize, col: usize| -> u16 {
        let v = u.value(col * height + row).clamp(0.0, 1.0);
        (v * f64::from(maxval)).round() as u16
    };
    let magic = match format {
        PgmFormat::Plain => "P2",
        PgmFormat::Raw => "P5",
    };
    let mut out = format!("{magic}\n{width} {height}\n{maxval}\n").into_bytes();
    match format {
        PgmFormat::Plain => {
            let mut text = String::new();
            for row in 0..height {
                let line: Vec<String> = (0..width).map(|c| level(row, c).to_string()).collect();
                writeln!(text, "{}", line.join(" ")).unwrap();
            }
            out.extend_from_slice(text.as_bytes());
        }
        PgmFormat::Raw => {
            for row in 0..height {
                for col in 0..width {
                    let l = level(row, col);
                    if maxval > 255 {
                        out.extend_from_slice(&l.to_be_bytes());
                    } else {
                        out.push(l as u8);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// One line `x_1,...,x_N,value` per cell of `Ω`, `x` the cell center.
pub fn write_csv(u: &GridFunction) -> String {
    let domain = u.domain();
    let mut out = String::new();
    let header: Vec<String> = (1..=domain.dim()).map(|k| format!("x_{k}")).collect();
    writeln!(out, "{},value", header.join(",")).unwrap();
    for c in 0..domain.num_cells() {
        if !domain.is_inside(c) {
            continue;
        }
        let x: Vec<String> = domain.cell_center(c).iter().map(|v| format!("{v}")).collect();
        writeln!(out, "{},{}", x.join(","), u.value(c)).unwrap();
    }
    out
}
