//! Line-oriented text formats for instances and matchings.
//!
//! Instance files:
//!
//! ```text
//! # comment
//! students: a a'
//! courses: b b'
//! cap: b 2
//! pref: a b b'
//! ```
//!
//! Matching files hold one `<student> <course>` pair per line. The JSON emitted by
//! `popmatch solve --format json` is accepted as a matching file as well.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::{Instance, InstanceError, Matching, MatchingError, RawInstance, Side};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: unknown vertex `{name}`")]
    UnknownVertex { line: usize, column: usize, name: String },
    #[error(transparent)]
    Invalid(#[from] InstanceError),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum MatchingParseError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: unknown {side:?} `{name}`")]
    UnknownVertex {
        line: usize,
        column: usize,
        side: Side,
        name: String,
    },
    #[error("malformed JSON matching: {0}")]
    Json(String),
    #[error(transparent)]
    Invalid(#[from] MatchingError),
}

/// Splits a line into whitespace-separated tokens with their 1-based columns, dropping comments.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let line = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(s, t)| (line[..s].chars().count() + 1, t))
        .collect()
}

/// `(line, side, owner, [(column, name)])` of one `pref:` line.
type PrefLine = (usize, Side, usize, Vec<(usize, String)>);

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut raw = RawInstance::default();
    let mut names: HashMap<String, (Side, usize)> = HashMap::new();
    let mut caps: Vec<(Side, usize, i64)> = Vec::new();
    let mut prefs: Vec<PrefLine> = Vec::new();
    let mut cap_seen: HashMap<(Side, usize), usize> = HashMap::new();
    let mut pref_seen: HashMap<(Side, usize), usize> = HashMap::new();

    for (ln, line) in text.lines().enumerate() {
        let line_no = ln + 1;
        let toks = tokens(line);
        let Some(&(col, head)) = toks.first() else { continue };
        let syntax = |column: usize, message: String| ParseError::Syntax {
            line: line_no,
            column,
            message,
        };
        // the directive is the text up to the first ':', which may be glued to the next token
        let (directive, rest): (&str, Vec<(usize, &str)>) = match head.find(':') {
            Some(p) => {
                let mut rest = Vec::new();
                if p + 1 < head.len() {
                    rest.push((col + head[..=p].chars().count(), &head[p + 1..]));
                }
                rest.extend_from_slice(&toks[1..]);
                (&head[..p], rest)
            }
            None => return Err(syntax(col, format!("expected `<directive>:`, found `{head}`"))),
        };
        let resolve = |names: &HashMap<String, (Side, usize)>, c: usize, name: &str| {
            names.get(name).copied().ok_or_else(|| ParseError::UnknownVertex {
                line: line_no,
                column: c,
                name: name.to_string(),
            })
        };
        match directive {
            "students" | "courses" => {
                let side = if directive == "students" {
                    Side::Student
                } else {
                    Side::Course
                };
                for &(c, name) in &rest {
                    if let Some(&(s, _)) = names.get(name) {
                        let message = if s == side {
                            format!("duplicate vertex name `{name}`")
                        } else {
                            format!("`{name}` is already declared on the other side")
                        };
                        return Err(syntax(c, message));
                    }
                    let list = match side {
                        Side::Student => &mut raw.students,
                        Side::Course => &mut raw.courses,
                    };
                    names.insert(name.to_string(), (side, list.len()));
                    list.push(name.to_string());
                }
            }
            "cap" => {
                let [(c, name), (cc, value)] = rest[..] else {
                    return Err(syntax(col, "expected `cap: <name> <positive int>`".into()));
                };
                let (side, idx) = resolve(&names, c, name)?;
                let value: i64 = value
                    .parse()
                    .map_err(|_| syntax(cc, format!("expected an integer, found `{value}`")))?;
                if let Some(prev) = cap_seen.insert((side, idx), line_no) {
                    return Err(syntax(c, format!("capacity of `{name}` already set on line {prev}")));
                }
                caps.push((side, idx, value));
            }
            "pref" => {
                let Some(&(c, name)) = rest.first() else {
                    return Err(syntax(col, "expected `pref: <name> <neighbor> ...`".into()));
                };
                let (side, idx) = resolve(&names, c, name)?;
                if let Some(prev) = pref_seen.insert((side, idx), line_no) {
                    return Err(syntax(
                        c,
                        format!("preferences of `{name}` already given on line {prev}"),
                    ));
                }
                let list = rest[1..].iter().map(|&(c, n)| (c, n.to_string())).collect();
                prefs.push((line_no, side, idx, list));
            }
            other => return Err(syntax(col, format!("unknown directive `{other}`"))),
        }
    }

    raw.student_caps = vec![1; raw.students.len()];
    raw.course_caps = vec![1; raw.courses.len()];
    raw.student_prefs = vec![Vec::new(); raw.students.len()];
    raw.course_prefs = vec![Vec::new(); raw.courses.len()];
    for (side, idx, value) in caps {
        match side {
            Side::Student => raw.student_caps[idx] = value,
            Side::Course => raw.course_caps[idx] = value,
        }
    }
    for (line, side, idx, list) in prefs {
        let mut resolved = Vec::with_capacity(list.len());
        for (column, n) in list {
            match names.get(&n) {
                Some(&(s, j)) if s == side.opposite() => resolved.push(j),
                Some(_) => {
                    return Err(ParseError::Syntax {
                        line,
                        column,
                        message: format!("`{n}` is on the same side as the list owner"),
                    })
                }
                None => return Err(ParseError::UnknownVertex { line, column, name: n }),
            }
        }
        match side {
            Side::Student => raw.student_prefs[idx] = resolved,
            Side::Course => raw.course_prefs[idx] = resolved,
        }
    }
    Ok(Instance::from_raw(raw)?)
}

/// Writes `inst` in the instance file format. `parse_instance` inverts it exactly.
pub fn write_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "students: {}", inst.students.join(" "));
    let _ = writeln!(out, "courses: {}", inst.courses.join(" "));
    for (names, caps) in [(&inst.students, &inst.student_caps), (&inst.courses, &inst.course_caps)] {
        for (name, &c) in names.iter().zip(caps) {
            if c != 1 {
                let _ = writeln!(out, "cap: {name} {c}");
            }
        }
    }
    for (names, other, prefs) in [
        (&inst.students, &inst.courses, &inst.student_prefs),
        (&inst.courses, &inst.students, &inst.course_prefs),
    ] {
        for (i, list) in prefs.iter().enumerate() {
            if list.is_empty() {
                continue;
            }
            out.push_str("pref: ");
            out.push_str(&names[i]);
            for &v in list {
                out.push(' ');
                out.push_str(&other[v]);
            }
            out.push('\n');
        }
    }
    out
}

/// Parses a matching of `inst` from the text pair format or from `solve --format json` output.
pub fn parse_matching(inst: &Instance, text: &str) -> Result<Matching, MatchingParseError> {
    if text.trim_start().starts_with('{') {
        return parse_matching_json(inst, text);
    }
    let mut pairs = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let toks = tokens(line);
        match toks[..] {
            [] => continue,
            [(cs, s), (cc, c)] => {
                let student = inst
                    .lookup(Side::Student, s)
                    .ok_or_else(|| MatchingParseError::UnknownVertex {
                        line: ln + 1,
                        column: cs,
                        side: Side::Student,
                        name: s.to_string(),
                    })?;
                let course = inst
                    .lookup(Side::Course, c)
                    .ok_or_else(|| MatchingParseError::UnknownVertex {
                        line: ln + 1,
                        column: cc,
                        side: Side::Course,
                        name: c.to_string(),
                    })?;
                pairs.push((student, course));
            }
            [(col, _), ..] => {
                return Err(MatchingParseError::Syntax {
                    line: ln + 1,
                    column: col,
                    message: "expected `<student> <course>`".into(),
                })
            }
        }
    }
    Ok(Matching::new(inst, pairs)?)
}

fn parse_matching_json(inst: &Instance, text: &str) -> Result<Matching, MatchingParseError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| MatchingParseError::Json(e.to_string()))?;
    let list = value
        .get("matching")
        .and_then(|m| m.as_array())
        .ok_or_else(|| MatchingParseError::Json("missing `matching` array".into()))?;
    let mut pairs = Vec::with_capacity(list.len());
    for entry in list {
        let student = entry.get("student").and_then(|s| s.as_str());
        let course = entry.get("course").and_then(|s| s.as_str());
        let (Some(s), Some(c)) = (student, course) else {
            return Err(MatchingParseError::Json(
                "entries need `student` and `course` strings".into(),
            ));
        };
        let unknown = |side, name: &str| MatchingParseError::UnknownVertex {
            line: 0,
            column: 0,
            side,
            name: name.into(),
        };
        let a = inst.lookup(Side::Student, s).ok_or_else(|| unknown(Side::Student, s))?;
        let b = inst.lookup(Side::Course, c).ok_or_else(|| unknown(Side::Course, c))?;
        pairs.push((a, b));
    }
    Ok(Matching::new(inst, pairs)?)
}

/// Writes one `<student> <course>` line per pair.
pub fn write_matching(inst: &Instance, m: &Matching) -> String {
    let mut out = String::new();
    for &(a, b) in m.pairs() {
        let _ = writeln!(out, "{} {}", inst.students[a], inst.courses[b]);
    }
    out
}
