//! Versioned text format for path systems.
//!
//! ```text
//! seppath-system 1
//! mode strong
//! target 2
//! 0 1
//! 1 2
//! paths 1
//! 0 1 2
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. The target section may be
//! omitted, in which case the reader's caller supplies one.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Edge, EdgeSet, Path};
use crate::separation::{Mode, PathSystem};

pub const SYSTEM_FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "seppath-system";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("missing section: {0}")]
    Missing(&'static str),
}

pub fn write_system(sys: &PathSystem) -> String {
    let mut out = String::new();
    writeln!(out, "{MAGIC} {SYSTEM_FORMAT_VERSION}").unwrap();
    writeln!(out, "mode {}", sys.mode).unwrap();
    writeln!(out, "target {}", sys.target.len()).unwrap();
    for e in &sys.target {
        writeln!(out, "{} {}", e.0, e.1).unwrap();
    }
    writeln!(out, "paths {}", sys.paths.len()).unwrap();
    for p in &sys.paths {
        let vs: Vec<String> = p.vertices().iter().map(ToString::to_string).collect();
        writeln!(out, "{}", vs.join(" ")).unwrap();
    }
    out
}

/// A parsed system; `target` is `None` when the file has no target section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemDoc {
    pub mode: Mode,
    pub target: Option<EdgeSet>,
    pub paths: Vec<Path>,
}

impl SystemDoc {
    pub fn into_system(self, default_target: impl FnOnce() -> EdgeSet) -> PathSystem {
        let target = self.target.unwrap_or_else(default_target);
        PathSystem::new(self.paths, target, self.mode)
    }
}

pub fn read_system(text: &str) -> Result<SystemDoc, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let syntax = |line: usize, msg: String| FormatError::Syntax { line, msg };
    let nums = |line: usize, l: &str| -> Result<Vec<usize>, FormatError> {
        l.split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| syntax(line, format!("bad vertex {t:?}"))))
            .collect()
    };
    let (line, head) = lines.next().ok_or(FormatError::Missing("header"))?;
    let version = match head.split_whitespace().collect::<Vec<_>>()[..] {
        [MAGIC, v] => v.parse::<u32>().map_err(|_| syntax(line, format!("bad version {v:?}")))?,
        _ => return Err(syntax(line, format!("expected \"{MAGIC} <version>\""))),
    };
    if version != SYSTEM_FORMAT_VERSION {
        return Err(FormatError::Version(version));
    }
    let mut mode = None;
    let mut target = None;
    let mut paths = None;
    while let Some((line, l)) = lines.next() {
        let mut it = l.split_whitespace();
        let key = it.next().expect("nonempty line");
        let arg = it.next().ok_or_else(|| syntax(line, format!("{key} needs an argument")))?;
        if it.next().is_some() {
            return Err(syntax(line, format!("unexpected tokens after {key} {arg}")));
        }
        match key {
            "mode" => mode = Some(arg.parse::<Mode>().map_err(|e| syntax(line, e.to_string()))?),
            "target" | "paths" => {
                let count: usize = arg.parse().map_err(|_| syntax(line, format!("bad count {arg:?}")))?;
                let mut rows = Vec::with_capacity(count);
                for _ in 0..count {
                    let (line, l) = lines.next().ok_or(FormatError::Missing(if key == "target" { "target rows" } else { "path rows" }))?;
                    rows.push((line, nums(line, l)?));
                }
                if key == "target" {
                    let mut set = EdgeSet::new();
                    for (line, r) in rows {
                        match r[..] {
                            [a, b] if a != b => {
                                set.insert(Edge::new(a, b));
                            }
                            _ => return Err(syntax(line, "target rows are \"u v\" with u != v".into())),
                        }
                    }
                    target = Some(set);
                } else {
                    let mut ps = Vec::with_capacity(count);
                    for (line, r) in rows {
                        ps.push(Path::new(r).map_err(|e| syntax(line, e.to_string()))?);
                    }
                    paths = Some(ps);
                }
            }
            other => return Err(syntax(line, format!("unknown section {other:?}"))),
        }
    }
    Ok(SystemDoc {
        mode: mode.ok_or(FormatError::Missing("mode"))?,
        target,
        paths: paths.ok_or(FormatError::Missing("paths"))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, Family};
    use crate::separation::singleton_baseline;

    #[test]
    fn round_trip() {
        let g = generate(&Family::Complete(4), 0).unwrap();
        let sys = singleton_baseline(&g);
        let text = write_system(&sys);
        assert!(text.starts_with("seppath-system 1\nmode strong\ntarget 6\n"));
        let back = read_system(&text).unwrap().into_system(EdgeSet::new);
        assert_eq!(back, sys);
    }

    #[test]
    fn target_optional() {
        let doc = read_system("seppath-system 1\n# comment\nmode weak\npaths 1\n0 1 2\n").unwrap();
        assert_eq!(doc.mode, Mode::Weak);
        assert!(doc.target.is_none());
        assert_eq!(doc.paths.len(), 1);
    }

    #[test]
    fn errors() {
        assert_eq!(read_system(""), Err(FormatError::Missing("header")));
        assert_eq!(read_system("seppath-system 2\n"), Err(FormatError::Version(2)));
        assert!(matches!(read_system("seppath-system 1\nmode strong\npaths 1\n0 1 0\n"), Err(FormatError::Syntax { .. })));
        assert!(matches!(read_system("seppath-system 1\nmode strong\npaths 2\n0 1\n"), Err(FormatError::Missing(_))));
        assert!(matches!(read_system("seppath-system 1\nmode sideways\npaths 0\n"), Err(FormatError::Syntax { .. })));
        assert_eq!(read_system("seppath-system 1\npaths 0\n"), Err(FormatError::Missing("mode")));
    }
}
