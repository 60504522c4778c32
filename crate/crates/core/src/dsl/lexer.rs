//! Tokenizer for the kernel expression language.

use super::parser::ParseError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Tok {
    Num(f64),
    Var(super::ast::VarName),
    /// The reduction index identifier `i`.
    IndexVar,
    Inf,
    If,
    Else,
    Abs,
    Even,
    Min,
    Max,
    PowFn,
    SumI,
    MaxI,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("number `{n}`"),
            Tok::Var(v) => format!("variable `{v}`"),
            Tok::IndexVar => "index `i`".into(),
            Tok::Inf => "`INF`".into(),
            Tok::If => "`if`".into(),
            Tok::Else => "`else`".into(),
            Tok::Abs => "`abs`".into(),
            Tok::Even => "`even`".into(),
            Tok::Min => "`min`".into(),
            Tok::Max => "`max`".into(),
            Tok::PowFn => "`pow`".into(),
            Tok::SumI => "`sum_i`".into(),
            Tok::MaxI => "`max_i`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Ne => "`!=`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Le => "`<=`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Ge => "`>=`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Lexeme {
    pub tok: Tok,
    /// Byte offset of the first character in the source text.
    pub offset: usize,
}

pub(crate) fn lex(source: &str) -> Result<Vec<Lexeme>, ParseError> {
    let bytes = source.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0usize;

    while pos < bytes.len() {
        let b = bytes[pos];
        if b.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let start = pos;
        let tok = match b {
            b'+' => {
                pos += 1;
                Tok::Plus
            }
            b'-' => {
                pos += 1;
                Tok::Minus
            }
            b'*' => {
                pos += 1;
                Tok::Star
            }
            b'/' => {
                pos += 1;
                Tok::Slash
            }
            b'^' => {
                pos += 1;
                Tok::Caret
            }
            b'(' => {
                pos += 1;
                Tok::LParen
            }
            b')' => {
                pos += 1;
                Tok::RParen
            }
            b'[' => {
                pos += 1;
                Tok::LBracket
            }
            b']' => {
                pos += 1;
                Tok::RBracket
            }
            b',' => {
                pos += 1;
                Tok::Comma
            }
            b'=' => {
                pos += 1;
                if bytes.get(pos) == Some(&b'=') {
                    pos += 1;
                }
                Tok::Eq
            }
            b'!' => {
                if bytes.get(pos + 1) == Some(&b'=') {
                    pos += 2;
                    Tok::Ne
                } else {
                    return Err(ParseError::syntax(start, "`!=`", "`!`"));
                }
            }
            b'<' => {
                pos += 1;
                if bytes.get(pos) == Some(&b'=') {
                    pos += 1;
                    Tok::Le
                } else {
                    Tok::Lt
                }
            }
            b'>' => {
                pos += 1;
                if bytes.get(pos) == Some(&b'=') {
                    pos += 1;
                    Tok::Ge
                } else {
                    Tok::Gt
                }
            }
            b'0'..=b'9' => {
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos < bytes.len() && bytes[pos] == b'.' {
                    if !bytes.get(pos + 1).is_some_and(u8::is_ascii_digit) {
                        return Err(ParseError::syntax(pos, "digit after `.`", "end of digits"));
                    }
                    pos += 1;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                }
                if pos < bytes.len() && (bytes[pos] == b'e' || bytes[pos] == b'E') {
                    let mut probe = pos + 1;
                    if probe < bytes.len() && (bytes[probe] == b'+' || bytes[probe] == b'-') {
                        probe += 1;
                    }
                    if probe < bytes.len() && bytes[probe].is_ascii_digit() {
                        pos = probe;
                        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                            pos += 1;
                        }
                    }
                }
                let text = &source[start..pos];
                let value: f64 = text
                    .parse()
                    .map_err(|_| ParseError::syntax(start, "numeric literal", text))?;
                if !value.is_finite() {
                    return Err(ParseError::NonFiniteLiteral { offset: start });
                }
                Tok::Num(value)
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while pos < bytes.len()
                    && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_')
                {
                    pos += 1;
                }
                let word = &source[start..pos];
                match word {
                    "x" => Tok::Var(super::ast::VarName::X),
                    "y" => Tok::Var(super::ast::VarName::Y),
                    "z" => Tok::Var(super::ast::VarName::Z),
                    "t" => Tok::Var(super::ast::VarName::T),
                    "i" => Tok::IndexVar,
                    "INF" => Tok::Inf,
                    "if" => Tok::If,
                    "else" => Tok::Else,
                    "abs" => Tok::Abs,
                    "even" => Tok::Even,
                    "min" => Tok::Min,
                    "max" => Tok::Max,
                    "pow" => Tok::PowFn,
                    "sum_i" => Tok::SumI,
                    "max_i" => Tok::MaxI,
                    other => {
                        return Err(ParseError::syntax(
                            start,
                            "variable, function, or keyword",
                            &format!("`{other}`"),
                        ))
                    }
                }
            }
            other => {
                return Err(ParseError::syntax(
                    start,
                    "expression token",
                    &format!("byte 0x{other:02x}"),
                ))
            }
        };
        out.push(Lexeme { tok, offset: start });
    }
    Ok(out)
}
