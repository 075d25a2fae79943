//! Burmeister `.cxt` context files.
//!
//! ```text
//! B
//!
//! 2
//! 3
//!
//! obj1
//! obj2
//! prop1
//! prop2
//! prop3
//! X.X
//! .XX
//! ```

use std::fmt::Write as _;

use super::{FcaError, FormalContext};

pub fn to_cxt(ctx: &FormalContext) -> String {
    let mut out = String::new();
    let _ = write!(out, "B\n\n{}\n{}\n\n", ctx.objects().len(), ctx.properties().len());
    for name in ctx.objects().iter().chain(ctx.properties()) {
        out.push_str(name);
        out.push('\n');
    }
    for oi in 0..ctx.objects().len() {
        for pi in 0..ctx.properties().len() {
            out.push(if ctx.incident(oi, pi) { 'X' } else { '.' });
        }
        out.push('\n');
    }
    out
}

pub fn from_cxt(text: &str) -> Result<FormalContext, FcaError> {
    let mut lines = text.lines().map(|l| l.trim_end_matches('\r')).enumerate().peekable();
    let err = |line: usize, message: &str| FcaError::Cxt { line: line + 1, message: message.to_string() };

    match lines.next() {
        Some((_, "B")) => {}
        Some((n, _)) => return Err(err(n, "expected header `B`")),
        None => return Err(err(0, "empty input")),
    }

    // An optional context name sits between the header and the counts.
    let mut counts = Vec::with_capacity(2);
    let mut skipped_name = false;
    while counts.len() < 2 {
        let Some((n, line)) = lines.next() else {
            return Err(err(0, "missing object/property counts"));
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        match line.parse::<usize>() {
            Ok(v) => counts.push(v),
            Err(_) if counts.is_empty() && !skipped_name => skipped_name = true,
            Err(_) => return Err(err(n, "expected a count")),
        }
    }
    let (n_obj, n_prop) = (counts[0], counts[1]);

    while lines.peek().is_some_and(|(_, l)| l.trim().is_empty()) && n_obj + n_prop > 0 {
        lines.next();
    }
    let mut names = Vec::with_capacity(n_obj + n_prop);
    for _ in 0..n_obj + n_prop {
        let (_, line) = lines.next().ok_or_else(|| err(0, "missing object or property names"))?;
        names.push(line.trim().to_string());
    }
    let properties = names.split_off(n_obj);
    let objects = names;

    let mut matrix = Vec::with_capacity(n_obj);
    for _ in 0..n_obj {
        let (n, line) = lines.next().ok_or_else(|| err(0, "missing incidence rows"))?;
        let row: Vec<bool> = line
            .trim()
            .chars()
            .map(|c| match c {
                'X' | 'x' => Ok(true),
                '.' => Ok(false),
                _ => Err(err(n, "incidence rows may only contain `X` and `.`")),
            })
            .collect::<Result<_, _>>()?;
        if row.len() != n_prop {
            return Err(err(n, "incidence row length does not match the property count"));
        }
        matrix.push(row);
    }
    if let Some((n, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(err(n, "trailing content after incidence rows"));
    }
    FormalContext::from_matrix(objects, properties, &matrix)
}
