//! Line-oriented text formats and command-line argument loaders.
//!
//! Model files:
//!
//! ```text
//! model
//! worlds 3
//! edge 0 1
//! val p 0 2
//! end
//! ```
//!
//! Kernel files wrap an FO body between `fo <k>` and `end`. Torus valuation
//! files list grid points per variable as `val p 0,0 1,1`. In all of them
//! `#` starts a comment that runs to the end of the line.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use kframe_core::fo::{builtin, parse_fo_expr, BUILTIN_NAMES};
use kframe_core::grid::GridValuation;
use kframe_core::{parse_modal, FoKernel, Frame, ModalFormula, Model, Partition};

use crate::error::{Error, Result};

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
    .trim()
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_index(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::format(line, format!("expected {what}, found `{tok}`")))
}

fn parse_world(tok: &str, line: usize, n: usize) -> Result<usize> {
    let w = parse_index(tok, line, "a world index")?;
    if w >= n {
        return Err(Error::format(
            line,
            format!("world {w} out of range (worlds {n})"),
        ));
    }
    Ok(w)
}

pub fn parse_model(text: &str) -> Result<Model> {
    enum State {
        Start,
        Header,
        Body,
        Done,
    }
    let mut state = State::Start;
    let mut model: Option<Model> = None;
    let mut seen_vals = BTreeSet::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = strip_comment(raw);
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match state {
            State::Start => {
                if toks != ["model"] {
                    return Err(Error::format(
                        line,
                        format!("expected `model`, found `{content}`"),
                    ));
                }
                state = State::Header;
            }
            State::Header => {
                if toks.len() != 2 || toks[0] != "worlds" {
                    return Err(Error::format(
                        line,
                        format!("expected `worlds <n>`, found `{content}`"),
                    ));
                }
                let n = parse_index(toks[1], line, "a world count")?;
                model = Some(Model::new(Frame::new(n)));
                state = State::Body;
            }
            State::Body => {
                let m = model.as_mut().expect("set in header");
                let n = m.world_count();
                match toks[0] {
                    "edge" => {
                        if toks.len() != 3 {
                            return Err(Error::format(line, "expected `edge <i> <j>`"));
                        }
                        let i = parse_world(toks[1], line, n)?;
                        let j = parse_world(toks[2], line, n)?;
                        if m.frame().has_edge(i, j) {
                            return Err(Error::format(line, format!("duplicate edge {i} {j}")));
                        }
                        m.frame_mut().add_edge(i, j);
                    }
                    "val" => {
                        if toks.len() < 3 {
                            return Err(Error::format(line, "expected `val <var> <i> [<i> ...]`"));
                        }
                        let var = toks[1];
                        if !is_identifier(var) {
                            return Err(Error::format(
                                line,
                                format!("invalid variable name `{var}`"),
                            ));
                        }
                        if !seen_vals.insert(var.to_string()) {
                            return Err(Error::format(line, format!("repeated `val` for `{var}`")));
                        }
                        for tok in &toks[2..] {
                            let w = parse_world(tok, line, n)?;
                            m.set(var, w, true);
                        }
                    }
                    "end" if toks.len() == 1 => state = State::Done,
                    other => {
                        return Err(Error::format(line, format!("unknown directive `{other}`")));
                    }
                }
            }
            State::Done => {
                return Err(Error::format(
                    line,
                    format!("unexpected `{content}` after `end`"),
                ));
            }
        }
    }
    match state {
        State::Done => Ok(model.expect("set in header")),
        State::Start => Err(Error::format(last_line.max(1), "missing `model`")),
        State::Header => Err(Error::format(last_line, "missing `worlds <n>`")),
        State::Body => Err(Error::format(last_line, "missing `end`")),
    }
}

pub fn write_model(m: &Model) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "model");
    let _ = writeln!(out, "worlds {}", m.world_count());
    for (i, j) in m.frame().edges() {
        let _ = writeln!(out, "edge {i} {j}");
    }
    for var in m.variables() {
        let _ = write!(out, "val {var}");
        for w in m.truth_set(&var) {
            let _ = write!(out, " {w}");
        }
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

/// The quotient model preceded by a comment block mapping each class to
/// its member worlds.
pub fn write_quotient(q: &Model, part: &Partition) -> String {
    let mut out = String::from("# class: member worlds of the source model\n");
    for (c, members) in part.classes().iter().enumerate() {
        let _ = write!(out, "# {c}:");
        for w in members {
            let _ = write!(out, " {w}");
        }
        out.push('\n');
    }
    out.push_str(&write_model(q));
    out
}

/// Parses `fo <k>`, a body over `R(xi,xj)` and `=(xi,xj)` atoms that may
/// span several lines, and `end`.
pub fn parse_kernel(text: &str, name: &str) -> Result<FoKernel> {
    let mut var_count = None;
    let mut body = String::new();
    let mut body_start = 0;
    let mut closed = false;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = strip_comment(raw);
        if content.is_empty() {
            if var_count.is_some() && !closed {
                body.push('\n');
            }
            continue;
        }
        if closed {
            return Err(Error::format(
                line,
                format!("unexpected `{content}` after `end`"),
            ));
        }
        match var_count {
            None => {
                let toks: Vec<&str> = content.split_whitespace().collect();
                if toks.len() != 2 || toks[0] != "fo" {
                    return Err(Error::format(
                        line,
                        format!("expected `fo <k>`, found `{content}`"),
                    ));
                }
                var_count = Some(parse_index(toks[1], line, "a variable count")?);
                body_start = line + 1;
            }
            Some(_) if content == "end" => closed = true,
            Some(_) => {
                body.push_str(content);
                body.push('\n');
            }
        }
    }
    let Some(k) = var_count else {
        return Err(Error::format(last_line.max(1), "missing `fo <k>`"));
    };
    if !closed {
        return Err(Error::format(last_line, "missing `end`"));
    }
    let expr = parse_fo_expr(&body).map_err(|e| match e {
        kframe_core::Error::Syntax { line, message, .. } => {
            Error::format(body_start + line - 1, message)
        }
        other => other.into(),
    })?;
    Ok(FoKernel::new(name, k, expr)?)
}

pub fn write_kernel(k: &FoKernel) -> String {
    format!("# {}\nfo {}\n{}\nend\n", k.name(), k.var_count(), k.body())
}

/// `val <var> i,j ...` lines; a variable may be listed with no points.
pub fn parse_grid_valuation(text: &str) -> Result<GridValuation> {
    let mut val = GridValuation::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = strip_comment(raw);
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        if toks[0] != "val" || toks.len() < 2 {
            return Err(Error::format(
                line,
                format!("expected `val <var> <i,j> ...`, found `{content}`"),
            ));
        }
        let var = toks[1];
        if !is_identifier(var) {
            return Err(Error::format(
                line,
                format!("invalid variable name `{var}`"),
            ));
        }
        if val.contains_key(var) {
            return Err(Error::format(line, format!("repeated `val` for `{var}`")));
        }
        let points = val.entry(var.to_string()).or_default();
        for tok in &toks[2..] {
            let (i, j) = tok
                .split_once(',')
                .ok_or_else(|| Error::format(line, format!("expected `i,j`, found `{tok}`")))?;
            points.insert((
                parse_index(i, line, "a column")?,
                parse_index(j, line, "a row")?,
            ));
        }
    }
    Ok(val)
}

pub fn write_grid_valuation(val: &GridValuation) -> String {
    let mut out = String::new();
    for (var, points) in val {
        let _ = write!(out, "val {var}");
        for (i, j) in points {
            let _ = write!(out, " {i},{j}");
        }
        out.push('\n');
    }
    out
}

pub fn read_file(path: impl AsRef<Path>) -> Result<String> {
    let path = path.as_ref();
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_file(path: impl AsRef<Path>, contents: &str) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Model> {
    parse_model(&read_file(path)?)
}

/// Formula text, or `@path` to read it from a file.
pub fn load_formula(arg: &str) -> Result<ModalFormula> {
    match arg.strip_prefix('@') {
        Some(path) => Ok(parse_modal(&read_file(path)?)?),
        None => Ok(parse_modal(arg)?),
    }
}

/// `builtin:NAME`, `@path` to a kernel file, or an inline body whose
/// variable count is its highest index.
pub fn load_kernel(arg: &str) -> Result<FoKernel> {
    if let Some(name) = arg.strip_prefix("builtin:") {
        return Ok(builtin(name)?);
    }
    if let Some(path) = arg.strip_prefix('@') {
        let name = Path::new(path)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "kernel".into());
        return parse_kernel(&read_file(path)?, &name);
    }
    Ok(kframe_core::fo::parse_kernel_body(arg)?)
}

/// A one-line spec that [`parse_kernel_spec`] turns back into `k`.
pub fn kernel_spec(k: &FoKernel) -> String {
    if BUILTIN_NAMES.contains(&k.name()) && builtin(k.name()).as_ref() == Ok(k) {
        format!("builtin:{}", k.name())
    } else {
        format!("{} {} {}", k.name(), k.var_count(), k.body())
    }
}

pub fn parse_kernel_spec(spec: &str) -> Result<FoKernel> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return Ok(builtin(name.trim())?);
    }
    let mut parts = spec.splitn(3, ' ');
    match (parts.next(), parts.next(), parts.next()) {
        (Some(name), Some(k), Some(body)) => {
            let k = parse_index(k, 0, "a variable count")?;
            Ok(FoKernel::new(name, k, parse_fo_expr(body)?)?)
        }
        _ => Err(Error::Usage(format!("malformed kernel spec `{spec}`"))),
    }
}
