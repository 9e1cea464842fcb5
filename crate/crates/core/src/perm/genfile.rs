//! Generator files: a `degree n` header, then one permutation per line in
//! cycle notation. Blank lines and `#` comments are ignored.

use std::path::Path;

use super::Permutation;
use crate::error::{Error, Result};

pub fn parse_generators(text: &str) -> Result<(usize, Vec<Permutation>)> {
    let mut degree = None;
    let mut gens = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let start = offset;
        offset += line.len();
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        match degree {
            None => {
                let n = body
                    .strip_prefix("degree")
                    .map(str::trim)
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| Error::Parse {
                        position: start,
                        message: "expected `degree n` header".into(),
                    })?;
                degree = Some(n);
            }
            Some(n) => {
                let lead = line.len() - line.trim_start().len();
                let g = Permutation::parse_cycles(n, body).map_err(|e| match e {
                    Error::Parse { position, message } => Error::Parse {
                        position: start + lead + position,
                        message,
                    },
                    other => other,
                })?;
                gens.push(g);
            }
        }
    }
    let n = degree.ok_or(Error::Parse {
        position: 0,
        message: "missing `degree n` header".into(),
    })?;
    if gens.is_empty() {
        gens.push(Permutation::identity(n));
    }
    Ok((n, gens))
}

pub fn read_generators(path: &Path) -> Result<(usize, Vec<Permutation>)> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_generators(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_header_comments_and_identity() {
        let (n, gens) =
            parse_generators("# A4\ndegree 4\n\n(0 1 2)\n(0 1)(2 3) # double\n()\n").unwrap();
        assert_eq!(n, 4);
        assert_eq!(gens.len(), 3);
        assert!(gens[2].is_identity());
    }

    #[test]
    fn reports_positions() {
        assert!(matches!(
            parse_generators("(0 1)\n"),
            Err(Error::Parse { position: 0, .. })
        ));
        assert!(parse_generators("degree 3\n(0 5)\n").is_err());
        match parse_generators("degree 3\n(0 x)\n") {
            Err(Error::Parse { position, .. }) => assert!(position >= 9),
            other => panic!("{other:?}"),
        }
    }
}
