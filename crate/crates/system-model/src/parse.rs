//! Line-oriented reader for system documents and polynomial expressions.
//!
//! ```text
//! file     := { "vars" name+ | "param" name* | "system" | assign | comment }
//! assign   := name "'" "=" expr
//! expr     := term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' nat)?
//! base     := rational | name | '(' expr ')' | '-' base
//! rational := int ('/' posint)?
//! ```
//!
//! `#` starts a comment, `t` is reserved for time, and there is no implicit
//! multiplication. One deliberate reading: unary minus applies after `^`, so
//! `-x^2` means `-(x^2)`; the set of accepted strings is unchanged and the
//! canonical printer's output re-parses to the printed polynomial.

use std::sync::Arc;

use algebra_core::{MultiPoly, Rational, VarTable};
use num_bigint::BigInt;

use crate::{SystemDef, SystemError};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Int(String),
    Prime,
    Eq,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Sp {
    tok: Tok,
    line: usize,
    col: usize,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> SystemError {
    SystemError::Syntax { line, col, msg: msg.into() }
}

fn lex_line(lineno: usize, text: &str) -> Result<Vec<Sp>, SystemError> {
    let body = match text.find('#') {
        Some(i) => &text[..i],
        None => text,
    };
    let chars: Vec<char> = body.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '\'' => {
                i += 1;
                Tok::Prime
            }
            '=' => {
                i += 1;
                Tok::Eq
            }
            '+' => {
                i += 1;
                Tok::Plus
            }
            '-' => {
                i += 1;
                Tok::Minus
            }
            '*' => {
                i += 1;
                Tok::Star
            }
            '^' => {
                i += 1;
                Tok::Caret
            }
            '/' => {
                i += 1;
                Tok::Slash
            }
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                Tok::Int(chars[start..i].iter().collect())
            }
            'A'..='Z' | 'a'..='z' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                Tok::Name(chars[start..i].iter().collect())
            }
            other => return Err(syntax(lineno, col, format!("unexpected character `{other}`"))),
        };
        toks.push(Sp { tok, line: lineno, col });
    }
    Ok(toks)
}

const KEYWORDS: [&str; 3] = ["vars", "param", "system"];

fn declared_name(sp: &Sp, what: &str) -> Result<String, SystemError> {
    match &sp.tok {
        Tok::Name(n) if n == "t" => Err(syntax(
            sp.line,
            sp.col,
            "`t` is reserved as the time variable and need not be declared",
        )),
        Tok::Name(n) if KEYWORDS.contains(&n.as_str()) => {
            Err(syntax(sp.line, sp.col, format!("`{n}` is a keyword, not a {what}")))
        }
        Tok::Name(n) => Ok(n.clone()),
        _ => Err(syntax(sp.line, sp.col, format!("expected a {what}"))),
    }
}

/// Parses a full system document.
pub fn parse_system(text: &str) -> Result<SystemDef, SystemError> {
    let mut states: Vec<String> = Vec::new();
    let mut params: Vec<String> = Vec::new();
    // assign lines are kept as tokens until all declarations are known
    let mut pending: Vec<(String, usize, usize, Vec<Sp>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let toks = lex_line(idx + 1, raw)?;
        let Some(first) = toks.first() else { continue };
        match &first.tok {
            Tok::Name(w) if w == "vars" => {
                if toks.len() == 1 {
                    return Err(syntax(first.line, first.col, "`vars` needs at least one name"));
                }
                for sp in &toks[1..] {
                    let name = declared_name(sp, "variable name")?;
                    if states.contains(&name) || params.contains(&name) {
                        return Err(SystemError::DuplicateVariable {
                            line: sp.line,
                            col: sp.col,
                            name,
                        });
                    }
                    states.push(name);
                }
            }
            Tok::Name(w) if w == "param" => {
                for sp in &toks[1..] {
                    let name = declared_name(sp, "parameter name")?;
                    if states.contains(&name) || params.contains(&name) {
                        return Err(SystemError::DuplicateVariable {
                            line: sp.line,
                            col: sp.col,
                            name,
                        });
                    }
                    params.push(name);
                }
            }
            Tok::Name(w) if w == "system" && toks.len() == 1 => {}
            Tok::Name(name) => {
                if toks.len() < 2 || toks[1].tok != Tok::Prime {
                    return Err(syntax(
                        first.line,
                        first.col,
                        format!("expected `{name}' = ...`, a `vars`/`param` line, or `system`"),
                    ));
                }
                if toks.len() < 3 || toks[2].tok != Tok::Eq {
                    let sp = toks.get(2).unwrap_or(&toks[1]);
                    return Err(syntax(sp.line, sp.col, "expected `=` after the prime"));
                }
                if toks.len() == 3 {
                    return Err(syntax(toks[2].line, toks[2].col, "empty right-hand side"));
                }
                pending.push((name.clone(), first.line, first.col, toks[3..].to_vec()));
            }
            _ => {
                return Err(syntax(
                    first.line,
                    first.col,
                    "expected a declaration or an equation",
                ))
            }
        }
    }

    if states.is_empty() {
        return Err(SystemError::NoStates);
    }
    let state_refs: Vec<&str> = states.iter().map(String::as_str).collect();
    let param_refs: Vec<&str> = params.iter().map(String::as_str).collect();
    let table = VarTable::for_system(&state_refs, "t", &param_refs);

    let mut rhs: Vec<Option<MultiPoly>> = vec![None; states.len()];
    for (name, line, col, toks) in pending {
        let Some(slot) = states.iter().position(|s| *s == name) else {
            if name == "t" || params.contains(&name) {
                return Err(syntax(
                    line,
                    col,
                    format!("`{name}` is not a state variable; only states take equations"),
                ));
            }
            return Err(SystemError::UnknownIdentifier { line, col, name });
        };
        if rhs[slot].is_some() {
            return Err(SystemError::DuplicateEquation { line, col, name });
        }
        rhs[slot] = Some(parse_tokens(&toks, line, &table)?);
    }
    let rhs: Vec<MultiPoly> = rhs
        .into_iter()
        .zip(&states)
        .map(|(p, name)| p.ok_or_else(|| SystemError::MissingEquation { name: name.clone() }))
        .collect::<Result<_, _>>()?;

    SystemDef::new(table, rhs)
}

/// Parses one polynomial expression against an existing variable table.
/// Positions in errors refer to line 1.
pub fn parse_poly(src: &str, table: &Arc<VarTable>) -> Result<MultiPoly, SystemError> {
    let toks = lex_line(1, src)?;
    parse_tokens(&toks, 1, table)
}

fn parse_tokens(
    toks: &[Sp],
    line: usize,
    table: &Arc<VarTable>,
) -> Result<MultiPoly, SystemError> {
    let mut p = Parser { toks, pos: 0, line, table };
    let expr = p.expr()?;
    if let Some(sp) = p.toks.get(p.pos) {
        return Err(syntax(
            sp.line,
            sp.col,
            "expected an operator here (implicit multiplication is not allowed)",
        ));
    }
    Ok(expr)
}

struct Parser<'a> {
    toks: &'a [Sp],
    pos: usize,
    line: usize,
    table: &'a Arc<VarTable>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|sp| &sp.tok)
    }

    fn bump(&mut self) -> Option<&Sp> {
        let sp = self.toks.get(self.pos);
        if sp.is_some() {
            self.pos += 1;
        }
        sp
    }

    fn end_col(&self) -> usize {
        self.toks.last().map(|sp| sp.col + 1).unwrap_or(1)
    }

    fn expr(&mut self) -> Result<MultiPoly, SystemError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, SystemError> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly, SystemError> {
        // negation distributes over the whole power: -x^2 = -(x^2)
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.pos += 1;
            return Ok(-self.factor()?);
        }
        let base = self.base()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.pos += 1;
            let sp = self
                .bump()
                .cloned()
                .ok_or_else(|| syntax(self.line, self.end_col(), "expected an exponent"))?;
            let Tok::Int(digits) = &sp.tok else {
                return Err(syntax(sp.line, sp.col, "exponent must be a nonnegative integer"));
            };
            let e: u32 = digits
                .parse()
                .map_err(|_| syntax(sp.line, sp.col, "exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<MultiPoly, SystemError> {
        let Some(sp) = self.bump().cloned() else {
            return Err(syntax(self.line, self.end_col(), "unexpected end of expression"));
        };
        match &sp.tok {
            Tok::Int(digits) => {
                let num: BigInt = digits.parse().expect("digit run parses as an integer");
                if matches!(self.peek(), Some(Tok::Slash)) {
                    self.pos += 1;
                    let dsp = self
                        .bump()
                        .cloned()
                        .ok_or_else(|| syntax(self.line, self.end_col(), "expected a denominator"))?;
                    let Tok::Int(den) = &dsp.tok else {
                        return Err(syntax(dsp.line, dsp.col, "denominator must be a positive integer"));
                    };
                    let den: BigInt = den.parse().expect("digit run parses as an integer");
                    if den == BigInt::from(0) {
                        return Err(syntax(dsp.line, dsp.col, "denominator must be positive"));
                    }
                    Ok(MultiPoly::from_rational(self.table, Rational::new(num, den)))
                } else {
                    Ok(MultiPoly::from_rational(self.table, Rational::from_integer(num)))
                }
            }
            Tok::Name(name) => match self.table.index_of(name) {
                Some(idx) => Ok(MultiPoly::var(self.table, idx)),
                None => Err(SystemError::UnknownIdentifier {
                    line: sp.line,
                    col: sp.col,
                    name: name.clone(),
                }),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(close) if close.tok == Tok::RParen => Ok(inner),
                    Some(close) => Err(syntax(close.line, close.col, "expected `)`")),
                    None => Err(syntax(self.line, self.end_col(), "missing `)`")),
                }
            }
            Tok::Minus => {
                // grammar also allows '-' inside a base ("(-x)^2" and "--x")
                Ok(-self.base()?)
            }
            _ => Err(syntax(
                sp.line,
                sp.col,
                "expected a number, a name, or a parenthesized expression",
            )),
        }
    }
}
