use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::field::Field;
use crate::ncalg::{AlgebraPresentation, GeneratorMap};

pub const MAX_GENUS: usize = 8;
pub const MAX_BOUNDARY: usize = 8;
pub const MAX_MARKINGS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("surface description: {0}")]
pub struct SurfaceError(pub String);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MarkingKind {
    Mirabolic,
}

impl fmt::Display for MarkingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MarkingKind::Mirabolic => f.write_str("mirabolic"),
        }
    }
}

/// `genus=<g> boundary=<r> markings=[label:kind, ...]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceSpec {
    pub genus: usize,
    pub boundary: usize,
    pub markings: Vec<(String, MarkingKind)>,
}

/// A marked point compiled to an algebra with its moment map.
#[derive(Clone, Debug)]
pub struct MarkingRef<F: Field> {
    pub label: String,
    pub algebra: Arc<AlgebraPresentation<F>>,
    pub moment_map: GeneratorMap<F>,
}

impl SurfaceSpec {
    /// Closed genus-`g` surface with one disc removed.
    pub fn closed_minus_disc(genus: usize) -> Self {
        Self {
            genus,
            boundary: 1,
            markings: Vec::new(),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary as i64
    }
}

impl fmt::Display for SurfaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self
            .markings
            .iter()
            .map(|(l, k)| format!("{l}:{k}"))
            .collect();
        write!(
            f,
            "genus={} boundary={} markings=[{}]",
            self.genus,
            self.boundary,
            m.join(", ")
        )
    }
}

impl FromStr for SurfaceSpec {
    type Err = SurfaceError;

    fn from_str(s: &str) -> Result<Self, SurfaceError> {
        let err = |m: &str| SurfaceError(m.to_string());
        let mut genus = None;
        let mut boundary = None;
        let mut markings = None;
        let mut rest = s.trim();
        while !rest.is_empty() {
            let (key, after) = rest
                .split_once('=')
                .ok_or_else(|| err("expected key=value"))?;
            let key = key.trim();
            let after = after.trim_start();
            let (value, tail) = if after.starts_with('[') {
                let end = after
                    .find(']')
                    .ok_or_else(|| err("unterminated marking list"))?;
                (&after[..=end], &after[end + 1..])
            } else {
                let end = after.find(char::is_whitespace).unwrap_or(after.len());
                (&after[..end], &after[end..])
            };
            rest = tail.trim_start();
            let num = |v: &str, max: usize| -> Result<usize, SurfaceError> {
                let n: usize = v
                    .parse()
                    .map_err(|_| err("expected a nonnegative integer"))?;
                if n > max {
                    return Err(SurfaceError(format!("value {n} exceeds the limit {max}")));
                }
                Ok(n)
            };
            match key {
                "genus" if genus.is_none() => genus = Some(num(value, MAX_GENUS)?),
                "boundary" if boundary.is_none() => boundary = Some(num(value, MAX_BOUNDARY)?),
                "markings" if markings.is_none() => {
                    let inner = value
                        .strip_prefix('[')
                        .and_then(|v| v.strip_suffix(']'))
                        .ok_or_else(|| err("markings must be a [list]"))?;
                    let mut list = Vec::new();
                    for (i, item) in inner
                        .split(',')
                        .map(str::trim)
                        .filter(|x| !x.is_empty())
                        .enumerate()
                    {
                        let (label, kind) = match item.split_once(':') {
                            Some((l, k)) => (l.trim().to_string(), k.trim()),
                            None => (format!("p{}", i + 1), item),
                        };
                        if label.is_empty()
                            || !label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                        {
                            return Err(err("marking labels are alphanumeric"));
                        }
                        let kind = match kind {
                            "mirabolic" => MarkingKind::Mirabolic,
                            other => {
                                return Err(SurfaceError(format!("unknown marking kind {other:?}")))
                            }
                        };
                        if list.iter().any(|(l, _)| *l == label) {
                            return Err(err("duplicate marking label"));
                        }
                        list.push((label, kind));
                    }
                    if list.len() > MAX_MARKINGS {
                        return Err(err("too many markings"));
                    }
                    markings = Some(list);
                }
                _ => return Err(SurfaceError(format!("unknown or repeated key {key:?}"))),
            }
        }
        Ok(Self {
            genus: genus.ok_or_else(|| err("missing genus"))?,
            boundary: boundary.unwrap_or(1),
            markings: markings.unwrap_or_default(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let s: SurfaceSpec = "genus=1 boundary=1 markings=[x:mirabolic]".parse().unwrap();
        assert_eq!(s.genus, 1);
        assert_eq!(s.markings, vec![("x".to_string(), MarkingKind::Mirabolic)]);
        assert_eq!(s.to_string().parse::<SurfaceSpec>().unwrap(), s);
        let t: SurfaceSpec = "genus=2".parse().unwrap();
        assert_eq!(t.boundary, 1);
        assert_eq!(t.euler_characteristic(), -3);
        for bad in [
            "",
            "genus=x",
            "genus=1 genus=2",
            "genus=1 markings=[a:b]",
            "genus=99",
            "genus=1 markings=[a",
        ] {
            assert!(bad.parse::<SurfaceSpec>().is_err(), "{bad}");
        }
    }
}
