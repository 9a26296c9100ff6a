//! Line-oriented ring and module description files.
//!
//! Module file:
//! ```text
//! name: M            (optional)
//! ring: Z | zn:<n> | custom:<path>
//! orders: 2 16
//! act e1 g2 = 0 1    (custom rings only: g2 * e1)
//! ```
//! Ring file (for `custom:`):
//! ```text
//! orders: 2 2
//! unit: 1 0
//! mul e2 e2 = 0 1    (e2 * e2; omitted products are zero)
//! ```
//! Blank lines and text after `#` are ignored. Indices are 1-based.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rickart_core::{FiniteModule, FiniteRing, ModuleSpec, RingSpec, RingTag};

use crate::error::CliError;

/// Ring designator of a module file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingRef {
    Integers,
    Zn(u64),
    /// Path as written in the file.
    Custom(String),
}

impl RingRef {
    pub fn parse(text: &str) -> Option<RingRef> {
        let text = text.trim();
        if text == "Z" {
            return Some(RingRef::Integers);
        }
        if let Some(n) = text.strip_prefix("zn:") {
            return n.trim().parse().ok().filter(|&n| n >= 1).map(RingRef::Zn);
        }
        text.strip_prefix("custom:")
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| RingRef::Custom(p.to_string()))
    }
}

impl std::fmt::Display for RingRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RingRef::Integers => write!(f, "Z"),
            RingRef::Zn(n) => write!(f, "zn:{n}"),
            RingRef::Custom(p) => write!(f, "custom:{p}"),
        }
    }
}

/// A parsed and validated module file.
#[derive(Debug, Clone)]
pub struct ModuleFile {
    pub name: Option<String>,
    pub ring: RingRef,
    pub module: FiniteModule,
}

fn syntax(line: usize, message: impl Into<String>) -> CliError {
    CliError::Syntax {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn numbers(line: usize, text: &str, what: &str) -> Result<Vec<i64>, CliError> {
    text.split_whitespace()
        .map(|w| {
            w.parse::<i64>()
                .map_err(|_| syntax(line, format!("{what}: `{w}` is not an integer")))
        })
        .collect()
}

fn positive_orders(line: usize, text: &str) -> Result<Vec<i64>, CliError> {
    let orders = numbers(line, text, "orders")?;
    if orders.is_empty() {
        return Err(syntax(line, "orders: expected at least one order"));
    }
    if let Some(o) = orders.iter().find(|&&o| o < 1) {
        return Err(syntax(
            line,
            format!("orders: {o} is not a positive integer"),
        ));
    }
    Ok(orders)
}

/// Parses `<tag><i> <tag><j> = <coeffs>` into 0-based indices.
fn indexed_line(
    line: usize,
    rest: &str,
    tags: (char, char),
) -> Result<(usize, usize, Vec<i64>), CliError> {
    let (lhs, rhs) = rest
        .split_once('=')
        .ok_or_else(|| syntax(line, "expected `=` followed by coefficients"))?;
    let words: Vec<&str> = lhs.split_whitespace().collect();
    let index = |w: &str, tag: char| -> Result<usize, CliError> {
        w.strip_prefix(tag)
            .and_then(|n| n.parse::<usize>().ok())
            .filter(|&n| n >= 1)
            .map(|n| n - 1)
            .ok_or_else(|| {
                syntax(
                    line,
                    format!("expected `{tag}<index>` with index >= 1, found `{w}`"),
                )
            })
    };
    match words.as_slice() {
        [a, b] => Ok((
            index(a, tags.0)?,
            index(b, tags.1)?,
            numbers(line, rhs, "coefficients")?,
        )),
        _ => Err(syntax(
            line,
            format!("expected two indices `{}<i> {}<j>`", tags.0, tags.1),
        )),
    }
}

fn non_negative(line: usize, v: Vec<i64>, len: usize) -> Result<Vec<u64>, CliError> {
    if v.len() != len {
        return Err(syntax(
            line,
            format!("expected {len} coefficients, found {}", v.len()),
        ));
    }
    v.into_iter()
        .map(|c| u64::try_from(c).map_err(|_| syntax(line, format!("coefficient {c} is negative"))))
        .collect()
}

/// Parses a custom ring file.
pub fn parse_ring_spec(text: &str) -> Result<FiniteRing, CliError> {
    let mut orders: Option<(usize, Vec<u64>)> = None;
    let mut unit: Option<(usize, Vec<i64>)> = None;
    let mut products: Vec<(usize, usize, usize, Vec<i64>)> = Vec::new();
    for (line, l) in lines(text) {
        if let Some(rest) = l.strip_prefix("orders:") {
            if orders.is_some() {
                return Err(syntax(line, "duplicate `orders:` line"));
            }
            let o = positive_orders(line, rest)?;
            orders = Some((line, o.into_iter().map(|o| o as u64).collect()));
        } else if let Some(rest) = l.strip_prefix("unit:") {
            if unit.is_some() {
                return Err(syntax(line, "duplicate `unit:` line"));
            }
            unit = Some((line, numbers(line, rest, "unit")?));
        } else if let Some(rest) = l.strip_prefix("mul") {
            let (i, j, c) = indexed_line(line, rest, ('e', 'e'))?;
            products.push((line, i, j, c));
        } else {
            return Err(syntax(line, format!("unrecognised line `{l}`")));
        }
    }
    let (_, orders) = orders.ok_or_else(|| syntax(0, "missing `orders:` line"))?;
    let t = orders.len();
    let (unit_line, unit) = unit.ok_or_else(|| syntax(0, "missing `unit:` line"))?;
    let unit = non_negative(unit_line, unit, t)?;
    let mut mul = vec![vec![vec![0u64; t]; t]; t];
    let mut seen = vec![vec![false; t]; t];
    for (line, i, j, c) in products {
        if i >= t || j >= t {
            return Err(syntax(
                line,
                format!("index out of range: the ring has {t} generators"),
            ));
        }
        if std::mem::replace(&mut seen[i][j], true) {
            return Err(syntax(
                line,
                format!("duplicate product e{} e{}", i + 1, j + 1),
            ));
        }
        mul[i][j] = non_negative(line, c, t)?;
    }
    Ok(FiniteRing::new(RingSpec::Custom { orders, unit, mul })?)
}

/// Parses a module file. `base` resolves relative `custom:` paths.
pub fn parse_module_spec(text: &str, base: Option<&Path>) -> Result<ModuleFile, CliError> {
    let mut name = None;
    let mut ring: Option<(usize, RingRef)> = None;
    let mut orders: Option<(usize, Vec<i64>)> = None;
    let mut acts: Vec<(usize, usize, usize, Vec<i64>)> = Vec::new();
    for (line, l) in lines(text) {
        if let Some(rest) = l.strip_prefix("name:") {
            name = Some(rest.trim().to_string());
        } else if let Some(rest) = l.strip_prefix("ring:") {
            if ring.is_some() {
                return Err(syntax(line, "duplicate `ring:` line"));
            }
            let r = RingRef::parse(rest).ok_or_else(|| {
                syntax(
                    line,
                    format!(
                        "ring: expected `Z`, `zn:<n>` or `custom:<path>`, found `{}`",
                        rest.trim()
                    ),
                )
            })?;
            ring = Some((line, r));
        } else if let Some(rest) = l.strip_prefix("orders:") {
            if orders.is_some() {
                return Err(syntax(line, "duplicate `orders:` line"));
            }
            orders = Some((line, positive_orders(line, rest)?));
        } else if let Some(rest) = l.strip_prefix("act") {
            let (i, j, c) = indexed_line(line, rest, ('e', 'g'))?;
            acts.push((line, i, j, c));
        } else {
            return Err(syntax(line, format!("unrecognised line `{l}`")));
        }
    }
    let (ring_line, ring_ref) = ring.ok_or_else(|| syntax(0, "missing `ring:` line"))?;
    let (orders_line, orders) = orders.ok_or_else(|| syntax(0, "missing `orders:` line"))?;
    let at = |line: usize| move |e: rickart_core::Error| CliError::Invalid { line, source: e };
    let (finite_ring, action) = match &ring_ref {
        RingRef::Integers | RingRef::Zn(_) => {
            if let Some((line, ..)) = acts.first() {
                return Err(syntax(*line, "`act` lines are only used with custom rings"));
            }
            let r = match ring_ref {
                RingRef::Zn(n) => FiniteRing::zn(n).map_err(at(ring_line))?,
                _ => FiniteRing::integers(),
            };
            (r, None)
        }
        RingRef::Custom(path) => {
            let full = match base {
                Some(dir) if Path::new(path).is_relative() => dir.join(path),
                _ => PathBuf::from(path),
            };
            let text = std::fs::read_to_string(&full).map_err(|e| CliError::Io {
                path: full.display().to_string(),
                message: e.to_string(),
            })?;
            let r = parse_ring_spec(&text).map_err(|e| CliError::InRingFile {
                path: full.display().to_string(),
                source: Box::new(e),
            })?;
            let t = orders.len();
            let mut action = vec![vec![vec![0u64; t]; t]; r.generator_count()];
            let mut seen = vec![vec![false; t]; r.generator_count()];
            for (line, i, j, c) in acts {
                if i >= r.generator_count() || j >= t {
                    return Err(syntax(
                        line,
                        format!(
                            "index out of range: {} ring generators, {t} module generators",
                            r.generator_count()
                        ),
                    ));
                }
                if std::mem::replace(&mut seen[i][j], true) {
                    return Err(syntax(
                        line,
                        format!("duplicate action e{} g{}", i + 1, j + 1),
                    ));
                }
                action[i][j] = non_negative(line, c, t)?;
            }
            (r, Some(action))
        }
    };
    let module =
        FiniteModule::new(&finite_ring, ModuleSpec { orders, action }).map_err(at(orders_line))?;
    Ok(ModuleFile {
        name,
        ring: ring_ref,
        module,
    })
}

/// Reads and parses a module file from disk.
pub fn read_module(path: &Path) -> Result<ModuleFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_module_spec(&text, path.parent()).map_err(|e| e.in_file(path))
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

/// Module file text. Custom rings are referenced through `ring`, which
/// must then be `RingRef::Custom`.
pub fn module_to_spec_text(m: &FiniteModule, ring: &RingRef, name: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(n) = name {
        let _ = writeln!(out, "name: {n}");
    }
    let _ = writeln!(out, "ring: {ring}");
    let _ = writeln!(out, "orders: {}", join(m.orders()));
    if m.ring().tag() == RingTag::Custom {
        for (i, row) in m.action_constants().iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if c.iter().any(|&x| x != 0) {
                    let _ = writeln!(out, "act e{} g{} = {}", i + 1, j + 1, join(c));
                }
            }
        }
    }
    out
}

/// Ring file text for a custom ring.
pub fn ring_to_spec_text(r: &FiniteRing) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "orders: {}", join(r.orders()));
    let _ = writeln!(out, "unit: {}", join(r.unit()));
    for (i, row) in r.structure_constants().iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if c.iter().any(|&x| x != 0) {
                let _ = writeln!(out, "mul e{} e{} = {}", i + 1, j + 1, join(c));
            }
        }
    }
    out
}

/// The ring designator of a module over Z or Z_n.
pub fn builtin_ring_ref(m: &FiniteModule) -> Option<RingRef> {
    match m.ring().tag() {
        RingTag::Integers => Some(RingRef::Integers),
        RingTag::Zn(n) => Some(RingRef::Zn(n)),
        RingTag::Custom => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_groups_and_residue_modules() {
        let f = parse_module_spec("ring: Z\norders: 2 16\n", None).unwrap();
        assert_eq!(f.module.orders(), &[2, 16]);
        assert!(f.module.ring().is_integers());
        let f =
            parse_module_spec("# regular module\nname: R\nring: zn:4\norders: 4\n", None).unwrap();
        assert_eq!(f.name.as_deref(), Some("R"));
        assert_eq!(f.module.ring().tag(), RingTag::Zn(4));
    }

    #[test]
    fn rejects_with_line_numbers() {
        let cases = [
            ("ring: Z\norders: 0 3\n", 2),
            ("ring: Q\norders: 2\n", 1),
            ("ring: Z\n\norders: 2 x\n", 3),
            ("ring: Z\norders: 2\nact e1 g1 = 1\n", 3),
            ("ring: Z\norders: 2\nfoo\n", 3),
            ("ring: zn:4\norders: 8\n", 2),
        ];
        for (text, line) in cases {
            match parse_module_spec(text, None) {
                Err(e) => assert_eq!(e.line(), Some(line), "{text:?}: {e}"),
                Ok(m) => panic!("{text:?} parsed as {}", m.module),
            }
        }
        assert!(matches!(
            parse_module_spec("orders: 2\n", None),
            Err(CliError::Syntax { line: 0, .. })
        ));
    }

    #[test]
    fn ring_files() {
        let r = parse_ring_spec(
            "orders: 2 2\nunit: 1 0\nmul e1 e1 = 1 0\nmul e1 e2 = 0 1\nmul e2 e1 = 0 1\n",
        )
        .unwrap();
        assert_eq!(r.size(), 4);
        let text = ring_to_spec_text(&r);
        assert_eq!(
            parse_ring_spec(&text).unwrap().structure_constants(),
            r.structure_constants()
        );
        let bad = parse_ring_spec("orders: 2\nunit: 1\nmul e1 e2 = 1\n").unwrap_err();
        assert_eq!(bad.line(), Some(3));
    }

    #[test]
    fn round_trip() {
        for text in [
            "ring: Z\norders: 2 16\n",
            "name: X\nring: zn:6\norders: 2 6\n",
        ] {
            let f = parse_module_spec(text, None).unwrap();
            let printed = module_to_spec_text(&f.module, &f.ring, f.name.as_deref());
            assert_eq!(printed, text);
            assert_eq!(parse_module_spec(&printed, None).unwrap().module, f.module);
        }
    }
}
