//! The line-oriented complex/cycle format.
//!
//! ```text
//! # boundary of a triangle
//! dim 2
//! field Q
//! 1 2 : 1
//! 2 3 : 1
//! 1 3 : -1
//! ```
//!
//! `dim d` gives the number of vertices per facet. Vertex labels are
//! positive integers. Either every facet carries a `: c` coefficient or none
//! does; without coefficients the cycle is derived from the top homology.

use std::collections::BTreeSet;
use std::fmt::Write;

use facering::complex::{Face, SimplicialComplex, SimplicialCycle, MAX_VERTEX};
use facering::scalars::{BaseField, FieldKind};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetLine {
    pub line: usize,
    /// Vertices in the order written, which fixes the orientation.
    pub vertices: Vec<usize>,
    pub coefficient: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexInput {
    pub d: usize,
    pub field: Option<FieldKind>,
    pub facets: Vec<FacetLine>,
}

fn parse_error(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_input(text: &str) -> CliResult<ComplexInput> {
    let mut d = None;
    let mut field = None;
    let mut facets: Vec<FacetLine> = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        match words.next() {
            Some("dim") => {
                if d.is_some() {
                    return Err(parse_error(line, "repeated 'dim' header"));
                }
                if !facets.is_empty() {
                    return Err(parse_error(line, "'dim' must precede the facets"));
                }
                let value = words
                    .next()
                    .and_then(|w| w.parse::<usize>().ok())
                    .filter(|&v| v > 0)
                    .ok_or_else(|| parse_error(line, "expected 'dim d' with a positive integer d"))?;
                if words.next().is_some() {
                    return Err(parse_error(line, "trailing text after 'dim d'"));
                }
                d = Some(value);
            }
            Some("field") => {
                if field.is_some() {
                    return Err(parse_error(line, "repeated 'field' header"));
                }
                if !facets.is_empty() {
                    return Err(parse_error(line, "'field' must precede the facets"));
                }
                let word = words.next().ok_or_else(|| parse_error(line, "expected 'field p' or 'field Q'"))?;
                let kind = FieldKind::parse(word).map_err(|e| parse_error(line, e.to_string()))?;
                if words.next().is_some() {
                    return Err(parse_error(line, "trailing text after 'field'"));
                }
                field = Some(kind);
            }
            Some(_) => {
                let d = d.ok_or_else(|| parse_error(line, "facet before the 'dim d' header"))?;
                let facet = parse_facet(line, content, d)?;
                if !seen.insert(Face::of(&facet.vertices)) {
                    return Err(parse_error(line, format!("facet {:?} is listed twice", facet.vertices)));
                }
                if let Some(first) = facets.first() {
                    if first.coefficient.is_some() != facet.coefficient.is_some() {
                        return Err(parse_error(
                            line,
                            "either every facet has a coefficient or none has",
                        ));
                    }
                }
                facets.push(facet);
            }
            None => unreachable!("empty lines are skipped"),
        }
    }
    let d = d.ok_or_else(|| parse_error(text.lines().count().max(1), "missing 'dim d' header"))?;
    if facets.is_empty() {
        return Err(parse_error(text.lines().count().max(1), "no facets"));
    }
    Ok(ComplexInput { d, field, facets })
}

fn parse_facet(line: usize, content: &str, d: usize) -> CliResult<FacetLine> {
    let (labels, coefficient) = match content.split_once(':') {
        Some((l, c)) => {
            let c = c.trim();
            let value = c
                .parse::<i64>()
                .map_err(|_| parse_error(line, format!("coefficient '{c}' is not an integer")))?;
            (l, Some(value))
        }
        None => (content, None),
    };
    let mut vertices = Vec::new();
    for w in labels.split_whitespace() {
        let v = w
            .parse::<usize>()
            .ok()
            .filter(|&v| (1..=MAX_VERTEX).contains(&v))
            .ok_or_else(|| {
                parse_error(line, format!("vertex label '{w}' is not an integer in 1..={}", MAX_VERTEX))
            })?;
        if vertices.contains(&v) {
            return Err(parse_error(line, format!("vertex {v} repeated in a facet")));
        }
        vertices.push(v);
    }
    if vertices.len() != d {
        return Err(parse_error(
            line,
            format!("facet has {} vertices, expected {d}", vertices.len()),
        ));
    }
    Ok(FacetLine {
        line,
        vertices,
        coefficient,
    })
}

impl ComplexInput {
    pub fn has_coefficients(&self) -> bool {
        self.facets.iter().any(|f| f.coefficient.is_some())
    }

    pub fn complex(&self) -> CliResult<SimplicialComplex> {
        let n = self.facets.iter().flat_map(|f| f.vertices.iter().copied()).max().unwrap_or(0);
        let faces: Vec<Face> = self.facets.iter().map(|f| Face::of(&f.vertices)).collect();
        Ok(SimplicialComplex::from_facets(n, &faces)?)
    }

    /// The cycle over `C`: the given coefficients (validated), or the
    /// generator of top homology when none are given.
    pub fn cycle<C: BaseField>(&self) -> CliResult<SimplicialCycle<C>> {
        if self.has_coefficients() {
            let entries: Vec<(Vec<usize>, C)> = self
                .facets
                .iter()
                .map(|f| (f.vertices.clone(), C::from_i64(f.coefficient.unwrap_or(0))))
                .collect();
            let cycle = SimplicialCycle::from_oriented(self.d, &entries)?;
            cycle.require_cycle()?;
            if cycle.is_zero() {
                return Err(facering::Error::DegenerateCycle.into());
            }
            Ok(cycle)
        } else {
            let complex = self.complex()?;
            if complex.max_facet_size() != self.d {
                return Err(facering::Error::Dimension("facets do not match 'dim'".into()).into());
            }
            Ok(SimplicialCycle::fundamental(&complex)?)
        }
    }

    /// Canonical rendering: headers, then facets sorted as faces.
    pub fn canonical(&self) -> String {
        let mut facets = self.facets.clone();
        facets.sort_by_key(|f| Face::of(&f.vertices));
        let mut out = format!("dim {}\n", self.d);
        if let Some(field) = self.field {
            let _ = writeln!(out, "field {}", field_word(field));
        }
        for f in facets {
            out.push_str(&render_facet(&f.vertices, f.coefficient));
        }
        out
    }
}

fn field_word(field: FieldKind) -> String {
    match field {
        FieldKind::Rationals => "Q".to_string(),
        FieldKind::Prime(p) => p.to_string(),
    }
}

fn render_facet(vertices: &[usize], coefficient: Option<i64>) -> String {
    let labels: Vec<String> = vertices.iter().map(|v| v.to_string()).collect();
    match coefficient {
        Some(c) => format!("{} : {c}\n", labels.join(" ")),
        None => format!("{}\n", labels.join(" ")),
    }
}

/// Renders a complex in the input format, with integer coefficients when
/// given (one per facet, in `complex.facets()` order).
pub fn render_complex(
    comment: &str,
    complex: &SimplicialComplex,
    field: Option<FieldKind>,
    coefficients: Option<&[i64]>,
) -> String {
    let mut out = String::new();
    for line in comment.lines() {
        let _ = writeln!(out, "# {line}");
    }
    let _ = writeln!(out, "dim {}", complex.max_facet_size());
    if let Some(field) = field {
        let _ = writeln!(out, "field {}", field_word(field));
    }
    for (i, f) in complex.facets().iter().enumerate() {
        out.push_str(&render_facet(&f.to_vec(), coefficients.map(|c| c[i])));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use facering::Q;

    const TRIANGLE: &str = "# triangle\ndim 2\nfield Q\n1 2 : 1\n2 3 : 1\n1 3 : -1\n";

    #[test]
    fn triangle_round_trip() {
        let input = parse_input(TRIANGLE).unwrap();
        assert_eq!(input.d, 2);
        assert_eq!(input.field, Some(FieldKind::Rationals));
        let cycle = input.cycle::<Q>().unwrap();
        assert_eq!(cycle.coeff(Face::of(&[1, 3])), Q::from_integer((-1).into()));
        let again = parse_input(&input.canonical()).unwrap();
        assert_eq!(again.canonical(), input.canonical());
        assert_eq!(again.cycle::<Q>().unwrap(), cycle);
    }

    #[test]
    fn duplicate_facet_reports_line() {
        let err = parse_input("dim 2\n1 2\n2 3\n2 1\n").unwrap_err();
        assert_eq!(
            err,
            CliError::Parse {
                line: 4,
                message: "facet [2, 1] is listed twice".into()
            }
        );
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(parse_input("1 2\n"), Err(CliError::Parse { line: 1, .. })));
        assert!(matches!(parse_input("dim 2\n1 2 3\n"), Err(CliError::Parse { line: 2, .. })));
        assert!(matches!(parse_input("dim 2\n1 x\n"), Err(CliError::Parse { line: 2, .. })));
        assert!(matches!(parse_input("dim 2\n1 2 : 1\n2 3\n"), Err(CliError::Parse { line: 3, .. })));
        assert!(matches!(parse_input("dim 2\nfield 4\n"), Err(CliError::Parse { line: 2, .. })));
        assert!(matches!(parse_input("dim 2\n1 2 : a\n"), Err(CliError::Parse { line: 2, .. })));
        assert!(matches!(parse_input("dim 2\n"), Err(CliError::Parse { .. })));
    }

    #[test]
    fn non_cycle_names_the_face() {
        let input = parse_input("dim 2\n1 2 : 1\n2 3 : 1\n").unwrap();
        assert_eq!(
            input.cycle::<Q>().unwrap_err(),
            CliError::Core(facering::Error::NotACycle(Face::of(&[1])))
        );
    }

    #[test]
    fn cycle_derived_from_kernel() {
        let input = parse_input("dim 2\n1 2\n2 3\n1 3\n").unwrap();
        let derived = input.cycle::<Q>().unwrap();
        let explicit = parse_input(TRIANGLE).unwrap().cycle::<Q>().unwrap();
        assert!(derived == explicit || derived == explicit.negate());
    }
}
