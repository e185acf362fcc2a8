//! Representation file format.
//!
//! ```text
//! rep <D> <m> perm|dense
//! ```
//!
//! followed, for `perm`, by m lines of D space-separated 0-based images
//! (matrix entry (u, v) = 1 iff u = σ(v)); for `dense`, by m blocks of D
//! lines, each holding D whitespace-separated `re,im` pairs (row-major).
//! Loaded dense matrices must be unitary to within 1e-12 in max-entry norm.

use std::path::Path;

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::repkit::representation::{Family, GeneratorMatrix, Representation};

pub const UNITARY_TOLERANCE: f64 = 1e-12;

pub fn load_representation(path: &Path) -> Result<Representation> {
    let text = std::fs::read_to_string(path)?;
    parse_representation(&text, &path.display().to_string())
}

pub fn parse_representation(text: &str, origin: &str) -> Result<Representation> {
    let mut lines = text.lines().enumerate();
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, 1, "empty representation file"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 4 || tokens[0] != "rep" {
        return Err(Error::parse(
            header_line + 1,
            1,
            "expected header: rep <D> <m> perm|dense",
        ));
    }
    let dim: usize = tokens[1]
        .parse()
        .map_err(|_| Error::parse(header_line + 1, 5, "invalid dimension"))?;
    let m: usize = tokens[2]
        .parse()
        .map_err(|_| Error::parse(header_line + 1, 5, "invalid generator count"))?;
    if dim == 0 || m == 0 {
        return Err(Error::parse(header_line + 1, 5, "D and m must be positive"));
    }

    let mats = match tokens[3] {
        "perm" => read_permutations(&mut lines, dim, m)?,
        "dense" => read_dense(&mut lines, dim, m)?,
        other => {
            return Err(Error::parse(
                header_line + 1,
                1,
                format!("unknown representation kind '{other}'"),
            ))
        }
    };

    Representation::new(
        dim,
        mats,
        Family::File {
            path: origin.to_string(),
        },
    )
}

type NumberedLines<'a> = std::iter::Enumerate<std::str::Lines<'a>>;

fn next_content_line<'a>(lines: &mut NumberedLines<'a>) -> Option<(usize, &'a str)> {
    lines.find(|(_, l)| !l.trim().is_empty())
}

fn read_permutations(
    lines: &mut NumberedLines<'_>,
    dim: usize,
    m: usize,
) -> Result<Vec<GeneratorMatrix>> {
    let mut mats = Vec::with_capacity(m);
    for g in 1..=m {
        let (line_idx, line) = next_content_line(lines).ok_or_else(|| {
            Error::parse(0, 1, format!("missing permutation line for generator {g}"))
        })?;
        let images: Vec<usize> = line
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>().map_err(|_| {
                    Error::parse(line_idx + 1, 1, format!("invalid image '{t}'"))
                })
            })
            .collect::<Result<_>>()?;
        if images.len() != dim {
            return Err(Error::parse(
                line_idx + 1,
                1,
                format!("generator {g}: expected {dim} images, found {}", images.len()),
            ));
        }
        let mut seen = vec![false; dim];
        for &u in &images {
            if u >= dim {
                return Err(Error::parse(
                    line_idx + 1,
                    1,
                    format!("generator {g}: image {u} out of range 0..{dim}"),
                ));
            }
            if seen[u] {
                return Err(Error::parse(
                    line_idx + 1,
                    1,
                    format!("generator {g}: repeated image {u}, not a permutation"),
                ));
            }
            seen[u] = true;
        }
        mats.push(GeneratorMatrix::Permutation(images));
    }
    Ok(mats)
}

fn read_dense(
    lines: &mut NumberedLines<'_>,
    dim: usize,
    m: usize,
) -> Result<Vec<GeneratorMatrix>> {
    let mut mats = Vec::with_capacity(m);
    for g in 1..=m {
        let mut mat: Mat<Complex64> = Mat::zeros(dim, dim);
        for row in 0..dim {
            let (line_idx, line) = next_content_line(lines).ok_or_else(|| {
                Error::parse(0, 1, format!("missing row {row} of generator {g}"))
            })?;
            let entries: Vec<&str> = line.split_whitespace().collect();
            if entries.len() != dim {
                return Err(Error::parse(
                    line_idx + 1,
                    1,
                    format!(
                        "generator {g} row {row}: expected {dim} entries, found {}",
                        entries.len()
                    ),
                ));
            }
            for (col, tok) in entries.iter().enumerate() {
                let (re, im) = tok.split_once(',').ok_or_else(|| {
                    Error::parse(line_idx + 1, 1, format!("expected re,im pair, found '{tok}'"))
                })?;
                let re: f64 = re.parse().map_err(|_| {
                    Error::parse(line_idx + 1, 1, format!("invalid real part '{re}'"))
                })?;
                let im: f64 = im.parse().map_err(|_| {
                    Error::parse(line_idx + 1, 1, format!("invalid imaginary part '{im}'"))
                })?;
                mat[(row, col)] = Complex64::new(re, im);
            }
        }
        let gm = GeneratorMatrix::Dense(mat);
        let defect = gm.unitarity_defect();
        if defect > UNITARY_TOLERANCE {
            return Err(Error::usage(format!(
                "generator {g} is not unitary: ‖U*U − I‖_max = {defect:.3e} exceeds {UNITARY_TOLERANCE:.0e}"
            )));
        }
        mats.push(gm);
    }
    Ok(mats)
}

/// Serializes a representation in the file format (permutations stay exact;
/// dense matrices are written with full float precision).
pub fn format_representation(rep: &Representation) -> String {
    let dim = rep.dim();
    let kind = if rep
        .generators()
        .iter()
        .all(|g| matches!(g, GeneratorMatrix::Permutation(_)))
    {
        "perm"
    } else {
        "dense"
    };
    let mut out = format!("rep {dim} {} {kind}\n", rep.num_generators());
    for g in rep.generators() {
        match (kind, g) {
            ("perm", GeneratorMatrix::Permutation(images)) => {
                let row: Vec<String> = images.iter().map(|u| u.to_string()).collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
            _ => {
                let dense = g.to_dense();
                for row in 0..dim {
                    let cells: Vec<String> = (0..dim)
                        .map(|col| {
                            let z = dense[(row, col)];
                            format!("{:?},{:?}", z.re, z.im)
                        })
                        .collect();
                    out.push_str(&cells.join(" "));
                    out.push('\n');
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repkit::representation::cyclic_shift;

    #[test]
    fn permutation_round_trip() {
        let rep = cyclic_shift(3).unwrap();
        let text = format_representation(&rep);
        let loaded = parse_representation(&text, "roundtrip").unwrap();
        assert_eq!(loaded.dim(), 3);
        assert_eq!(loaded.num_generators(), 1);
        match (rep.generator(0), loaded.generator(0)) {
            (GeneratorMatrix::Permutation(a), GeneratorMatrix::Permutation(b)) => {
                assert_eq!(a, b)
            }
            _ => panic!("expected permutations"),
        }
    }

    #[test]
    fn dense_round_trip() {
        let text = "rep 2 1 dense\n0.0,0.0 0.0,-1.0\n0.0,-1.0 0.0,0.0\n";
        let rep = parse_representation(text, "inline").unwrap();
        assert_eq!(rep.unitarity_defect(), 0.0);
        let again = parse_representation(&format_representation(&rep), "again").unwrap();
        assert_eq!(again.dim(), 2);
    }

    #[test]
    fn rejects_non_unitary_dense() {
        let text = "rep 2 1 dense\n1.0,0.0 0.5,0.0\n0.0,0.0 1.0,0.0\n";
        let err = parse_representation(text, "inline").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("generator 1"), "message: {msg}");
        assert!(msg.contains("not unitary"), "message: {msg}");
    }

    #[test]
    fn rejects_repeated_image() {
        let text = "rep 3 1 perm\n0 0 2\n";
        let err = parse_representation(text, "inline").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("repeated image"), "message: {msg}");
        assert!(msg.contains("not a permutation"), "message: {msg}");
    }

    #[test]
    fn rejects_malformed_header() {
        assert!(parse_representation("xyz", "inline").is_err());
        assert!(parse_representation("rep 2 1 sparse\n", "inline").is_err());
        assert!(parse_representation("rep 0 1 perm\n", "inline").is_err());
    }
}
