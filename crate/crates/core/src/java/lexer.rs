use std::fmt;

use super::model::Span;
use super::FrontendError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Ident,
    Keyword,
    Literal(LiteralKind),
    Punct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiteralKind {
    Int,
    Float,
    Str,
    Char,
    Bool,
    Null,
}

impl LiteralKind {
    pub fn java_type(self) -> Option<&'static str> {
        match self {
            LiteralKind::Int => Some("int"),
            LiteralKind::Float => Some("double"),
            LiteralKind::Str => Some("String"),
            LiteralKind::Char => Some("char"),
            LiteralKind::Bool => Some("boolean"),
            LiteralKind::Null => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token<'s> {
    pub kind: TokenKind,
    pub text: &'s str,
    pub span: Span,
}

impl Token<'_> {
    pub fn is_punct(&self, p: &str) -> bool {
        self.kind == TokenKind::Punct && self.text == p
    }

    pub fn is_keyword(&self, k: &str) -> bool {
        self.kind == TokenKind::Keyword && self.text == k
    }
}

impl fmt::Display for Token<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TokenKind::Ident => write!(f, "id:{}", self.text),
            TokenKind::Keyword => write!(f, "kw:{}", self.text),
            TokenKind::Literal(_) => write!(f, "lit:{}", self.text),
            TokenKind::Punct => f.write_str(self.text),
        }
    }
}

const KEYWORDS: &[&str] = &[
    "abstract",
    "boolean",
    "break",
    "byte",
    "case",
    "catch",
    "char",
    "class",
    "continue",
    "default",
    "do",
    "double",
    "else",
    "extends",
    "final",
    "finally",
    "float",
    "for",
    "if",
    "implements",
    "import",
    "instanceof",
    "int",
    "interface",
    "long",
    "native",
    "new",
    "package",
    "private",
    "protected",
    "public",
    "return",
    "short",
    "static",
    "super",
    "switch",
    "synchronized",
    "this",
    "throw",
    "throws",
    "transient",
    "try",
    "void",
    "volatile",
    "while",
];

// Longest first so that maximal munch works with a linear scan.
const PUNCTUATION: &[&str] = &[
    ">>>=", "<<=", ">>=", ">>>", "...", "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=", "%=",
    "&=", "|=", "^=", "<<", ">>", "->", "::", "(", ")", "{", "}", "[", "]", ";", ",", ".", "=", "<", ">", "!", "~",
    "?", ":", "+", "-", "*", "/", "&", "|", "^", "%",
];

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.contains(&word)
}

/// Splits source text into tokens, dropping whitespace and comments.
pub fn tokenize(text: &str) -> Result<Vec<Token<'_>>, FrontendError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;

    while pos < text.len() {
        let rest = &text[pos..];
        let c = rest.chars().next().expect("non-empty rest");

        if c.is_whitespace() {
            pos += c.len_utf8();
            continue;
        }
        if rest.starts_with("//") {
            pos += rest.find('\n').unwrap_or(rest.len());
            continue;
        }
        if let Some(comment) = rest.strip_prefix("/*") {
            match comment.find("*/") {
                Some(end) => pos += end + 4,
                None => return Err(lex_error(pos, "unterminated block comment")),
            }
            continue;
        }

        let start = pos;
        let kind = if c.is_alphabetic() || c == '_' || c == '$' {
            let len = rest
                .char_indices()
                .find(|&(_, ch)| !(ch.is_alphanumeric() || ch == '_' || ch == '$'))
                .map_or(rest.len(), |(i, _)| i);
            pos += len;
            match &text[start..pos] {
                "true" | "false" => TokenKind::Literal(LiteralKind::Bool),
                "null" => TokenKind::Literal(LiteralKind::Null),
                w if is_keyword(w) => TokenKind::Keyword,
                _ => TokenKind::Ident,
            }
        } else if c.is_ascii_digit() || (c == '.' && bytes.get(pos + 1).is_some_and(u8::is_ascii_digit)) {
            let (len, float) = scan_number(rest);
            pos += len;
            TokenKind::Literal(if float { LiteralKind::Float } else { LiteralKind::Int })
        } else if c == '"' {
            pos += scan_quoted(rest, '"').ok_or_else(|| lex_error(start, "unterminated string literal"))?;
            TokenKind::Literal(LiteralKind::Str)
        } else if c == '\'' {
            pos += scan_quoted(rest, '\'').ok_or_else(|| lex_error(start, "unterminated character literal"))?;
            TokenKind::Literal(LiteralKind::Char)
        } else if let Some(p) = PUNCTUATION.iter().find(|p| rest.starts_with(**p)) {
            pos += p.len();
            TokenKind::Punct
        } else {
            return Err(lex_error(start, format!("illegal character '{c}'")));
        };

        tokens.push(Token { kind, text: &text[start..pos], span: Span::new(start, pos) });
    }
    Ok(tokens)
}

fn lex_error(offset: usize, message: impl Into<String>) -> FrontendError {
    FrontendError::Lex { offset, message: message.into() }
}

fn scan_number(rest: &str) -> (usize, bool) {
    let b = rest.as_bytes();
    let mut i = 0;
    let mut float = false;
    if b.len() > 1 && b[0] == b'0' && (b[1] == b'x' || b[1] == b'X') {
        i = 2;
        while i < b.len() && (b[i].is_ascii_hexdigit() || b[i] == b'_') {
            i += 1;
        }
    } else {
        while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'_') {
            i += 1;
        }
        if i < b.len() && b[i] == b'.' && b.get(i + 1).is_some_and(u8::is_ascii_digit) {
            float = true;
            i += 1;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
        }
        if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
            let mut j = i + 1;
            if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                j += 1;
            }
            if j < b.len() && b[j].is_ascii_digit() {
                float = true;
                i = j;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
            }
        }
    }
    if i < b.len() {
        match b[i] {
            b'l' | b'L' => i += 1,
            b'f' | b'F' | b'd' | b'D' => {
                float = true;
                i += 1;
            }
            _ => {}
        }
    }
    (i, float)
}

fn scan_quoted(rest: &str, quote: char) -> Option<usize> {
    let mut chars = rest.char_indices().skip(1);
    while let Some((i, ch)) = chars.next() {
        match ch {
            '\\' => {
                chars.next();
            }
            '\n' => return None,
            c if c == quote => return Some(i + 1),
            _ => {}
        }
    }
    None
}
