//! Plain-text syntax for path-group words.
//!
//! `a^2 t_e c t_~e` is a word: generator powers belong to the vertex group
//! where the path currently sits, `t_<dart>` is a stable letter, `1` is the
//! identity and `[ ... ]` (optionally followed by `^k`) is an element of a
//! vertex group that is itself a fundamental group, written in the same
//! syntax. Factors may also be separated by `*` or `·`.

use crate::error::GogError;
use crate::free_word::FreeWord;
use crate::gog::GraphOfGroups;
use crate::graph::VertexId;
use crate::group::{GroupElement, VertexGroup};
use crate::word::{PathLetter, PathWord};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Stable(String),
    Gen(String, i64),
    Open,
    Close(i64),
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, GogError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    let is_sep = |c: char| c.is_whitespace() || c == '*' || c == '·';
    while i < chars.len() {
        let (col, c) = chars[i];
        if is_sep(c) {
            i += 1;
            continue;
        }
        if c == '[' {
            out.push((Tok::Open, col + 1));
            i += 1;
            continue;
        }
        let start = i;
        if c == ']' {
            i += 1;
        } else {
            while i < chars.len() && !is_sep(chars[i].1) && chars[i].1 != '[' && chars[i].1 != ']' {
                i += 1;
            }
        }
        // A `^k` suffix may follow a closing bracket.
        let mut end = i;
        if c == ']' && end < chars.len() && chars[end].1 == '^' {
            while end < chars.len() && !is_sep(chars[end].1) && chars[end].1 != '[' && chars[end].1 != ']' {
                end += 1;
            }
            i = end;
        }
        let token: String = chars[start..end].iter().map(|p| p.1).collect();
        let column = col + 1;
        let (body, exp) = match token.split_once('^') {
            Some((b, e)) => {
                let k: i64 = e.parse().map_err(|_| GogError::Syntax {
                    column,
                    message: format!("bad exponent in `{token}`"),
                })?;
                (b.to_string(), k)
            }
            None => (token.clone(), 1),
        };
        let tok = if body == "]" {
            Tok::Close(exp)
        } else if let Some(name) = body.strip_prefix("t_") {
            if exp != 1 {
                return Err(GogError::Syntax {
                    column,
                    message: "stable letters take no exponent; repeat the letter".into(),
                });
            }
            Tok::Stable(name.to_string())
        } else if body == "1" {
            continue;
        } else if body.is_empty() {
            return Err(GogError::Syntax {
                column,
                message: format!("unexpected `{token}`"),
            });
        } else {
            Tok::Gen(body, exp)
        };
        out.push((tok, column));
    }
    Ok(out)
}

/// Parses a word; with `start == None` the base vertex is inferred from the
/// first stable letter or, failing that, from the generators used.
pub fn parse_word(
    gog: &GraphOfGroups,
    text: &str,
    start: Option<VertexId>,
) -> Result<PathWord, GogError> {
    let toks = tokenize(text)?;
    let start = match start {
        Some(v) => v,
        None => infer_start(gog, &toks)?,
    };
    let mut pos = 0;
    let w = parse_seq(gog, &toks, &mut pos, start)?;
    if pos != toks.len() {
        return Err(GogError::Syntax {
            column: toks[pos].1,
            message: "unbalanced `]`".into(),
        });
    }
    Ok(w)
}

fn infer_start(gog: &GraphOfGroups, toks: &[(Tok, usize)]) -> Result<VertexId, GogError> {
    let mut depth = 0usize;
    for (t, col) in toks {
        match t {
            Tok::Open => depth += 1,
            Tok::Close(_) => depth = depth.saturating_sub(1),
            Tok::Stable(name) if depth == 0 => {
                let d = gog.graph().dart(name).ok_or_else(|| GogError::Syntax {
                    column: *col,
                    message: format!("unknown dart `{name}`"),
                })?;
                return Ok(gog.graph().initial(d));
            }
            _ => {}
        }
    }
    let candidates: Vec<VertexId> = gog
        .graph()
        .vertices()
        .filter(|&v| {
            let mut pos = 0;
            parse_seq(gog, toks, &mut pos, v).is_ok() && pos == toks.len()
        })
        .collect();
    match candidates.as_slice() {
        [v] => Ok(*v),
        [] => Err(GogError::Syntax {
            column: 1,
            message: "no vertex group contains this word".into(),
        }),
        _ => Err(GogError::Syntax {
            column: 1,
            message: "ambiguous base vertex; name it explicitly".into(),
        }),
    }
}

fn parse_seq(
    gog: &GraphOfGroups,
    toks: &[(Tok, usize)],
    pos: &mut usize,
    start: VertexId,
) -> Result<PathWord, GogError> {
    let graph = gog.graph();
    let mut letters = Vec::new();
    let mut cur = start;
    while *pos < toks.len() {
        let (tok, column) = &toks[*pos];
        let column = *column;
        match tok {
            Tok::Close(_) => break,
            Tok::Stable(name) => {
                let d = graph.dart(name).ok_or_else(|| GogError::Syntax {
                    column,
                    message: format!("unknown dart `{name}`"),
                })?;
                if graph.initial(d) != cur {
                    return Err(GogError::Syntax {
                        column,
                        message: format!(
                            "word is not connected: `t_{name}` leaves `{}` but the path is at `{}`",
                            graph.vertex_name(graph.initial(d)),
                            graph.vertex_name(cur)
                        ),
                    });
                }
                letters.push(PathLetter::Stable(d));
                cur = graph.terminal(d);
                *pos += 1;
            }
            Tok::Gen(name, k) => {
                let VertexGroup::Free(f) = gog.vertex_group(cur) else {
                    return Err(GogError::Syntax {
                        column,
                        message: format!(
                            "group at `{}` is a fundamental group; use brackets",
                            graph.vertex_name(cur)
                        ),
                    });
                };
                let g = f.names().iter().position(|n| n == name).ok_or_else(|| GogError::Syntax {
                    column,
                    message: format!(
                        "`{name}` is not a generator of the group at `{}`",
                        graph.vertex_name(cur)
                    ),
                })?;
                letters.push(PathLetter::Vertex(
                    cur,
                    GroupElement::Free(FreeWord::power(g as u32, *k)),
                ));
                *pos += 1;
            }
            Tok::Open => {
                let VertexGroup::Pi1(p) = gog.vertex_group(cur) else {
                    return Err(GogError::Syntax {
                        column,
                        message: format!(
                            "group at `{}` is free; brackets are for fundamental groups",
                            graph.vertex_name(cur)
                        ),
                    });
                };
                *pos += 1;
                let inner = parse_seq(&p.gog, toks, pos, p.base)?;
                let Some((Tok::Close(k), _)) = toks.get(*pos) else {
                    return Err(GogError::Syntax {
                        column,
                        message: "missing `]`".into(),
                    });
                };
                let k = *k;
                *pos += 1;
                if !inner.is_closed(&p.gog) {
                    return Err(GogError::Syntax {
                        column,
                        message: "bracketed word is not a loop at its base".into(),
                    });
                }
                let elem = gog.vertex_group(cur).pow(&GroupElement::Pi1(inner), k);
                letters.push(PathLetter::Vertex(cur, elem));
            }
        }
    }
    PathWord::from_letters(gog, Some(start), &letters)
}

/// Renders a word in the syntax accepted by [`parse_word`].
pub fn format_word(gog: &GraphOfGroups, w: &PathWord) -> String {
    let graph = gog.graph();
    let mut parts = Vec::new();
    for (i, s) in w.syllables().iter().enumerate() {
        if i > 0 {
            parts.push(format!("t_{}", graph.dart_name(w.darts()[i - 1])));
        }
        let group = gog.vertex_group(w.syllable_vertex(gog, i));
        if !group.is_identity(s) {
            parts.push(group.display(s));
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join(" ")
    }
}

/// Parses an element of a single vertex group.
pub fn parse_element(group: &VertexGroup, text: &str) -> Result<GroupElement, GogError> {
    match group {
        VertexGroup::Free(f) => Ok(GroupElement::Free(FreeWord::parse(text, f.names())?)),
        VertexGroup::Pi1(p) => {
            let w = parse_word(&p.gog, text, Some(p.base))?;
            if !w.is_closed(&p.gog) {
                return Err(GogError::Syntax {
                    column: 1,
                    message: "element is not a loop at the base vertex".into(),
                });
            }
            Ok(GroupElement::Pi1(w))
        }
    }
}

/// Renders an element of a single vertex group without outer brackets.
pub fn format_element(group: &VertexGroup, x: &GroupElement) -> String {
    match (group, x) {
        (VertexGroup::Pi1(p), GroupElement::Pi1(w)) => format_word(&p.gog, w),
        _ => group.display(x),
    }
}
