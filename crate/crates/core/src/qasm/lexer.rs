use super::QasmError;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    /// Numeric literal, kept as text so `2.0` and `2` stay distinguishable.
    Number(String),
    Str(String),
    Sym(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
    /// Byte offsets into the source.
    pub start: usize,
    pub end: usize,
}

const SYMBOLS: [&str; 15] = [
    "->", "==", ";", ",", "(", ")", "[", "]", "{", "}", "+", "-", "*", "/", "^",
];

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, QasmError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let (mut i, mut line, mut line_start) = (0usize, 1usize, 0usize);

    while i < bytes.len() {
        let c = bytes[i];
        let col = i - line_start + 1;
        if c == b'\n' {
            i += 1;
            line += 1;
            line_start = i;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if bytes[i..].starts_with(b"//") {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        if bytes[i..].starts_with(b"/*") {
            let rest = &src[i + 2..];
            let Some(close) = rest.find("*/") else {
                return Err(QasmError::syntax(line, col, "unterminated block comment"));
            };
            let body = &rest[..close];
            if let Some(nl) = body.rfind('\n') {
                line += body.matches('\n').count();
                line_start = i + 2 + nl + 1;
            }
            i += close + 4;
            continue;
        }

        let start = i;
        let tok = if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            Tok::Ident(src[start..i].to_string())
        } else if c.is_ascii_digit() || (c == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            Tok::Number(src[start..i].to_string())
        } else if c == b'"' {
            i += 1;
            while i < bytes.len() && bytes[i] != b'"' && bytes[i] != b'\n' {
                i += 1;
            }
            if i >= bytes.len() || bytes[i] != b'"' {
                return Err(QasmError::syntax(line, col, "unterminated string literal"));
            }
            i += 1;
            Tok::Str(src[start + 1..i - 1].to_string())
        } else if let Some(sym) = SYMBOLS.iter().find(|s| bytes[i..].starts_with(s.as_bytes())) {
            i += sym.len();
            Tok::Sym(sym)
        } else {
            let ch = src[i..].chars().next().unwrap_or('?');
            return Err(QasmError::syntax(line, col, format!("unexpected character `{ch}`")));
        };
        out.push(Token {
            tok,
            line,
            col,
            start,
            end: i,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col: bytes.len() - line_start + 1,
        start: bytes.len(),
        end: bytes.len(),
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<Tok> {
        tokenize(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn numbers_symbols_and_comments() {
        assert_eq!(
            kinds("rz(1.5e-3) q[0]; // tail\n"),
            vec![
                Tok::Ident("rz".into()),
                Tok::Sym("("),
                Tok::Number("1.5e-3".into()),
                Tok::Sym(")"),
                Tok::Ident("q".into()),
                Tok::Sym("["),
                Tok::Number("0".into()),
                Tok::Sym("]"),
                Tok::Sym(";"),
                Tok::Eof,
            ]
        );
    }

    #[test]
    fn positions_track_lines() {
        let toks = tokenize("a\n /* x\n y */  b").unwrap();
        assert_eq!((toks[0].line, toks[0].col), (1, 1));
        assert_eq!((toks[1].line, toks[1].col), (3, 8));
    }

    #[test]
    fn bad_character_is_positioned() {
        let err = tokenize("qreg q[2];\n  @").unwrap_err();
        assert_eq!(err.position(), Some((2, 3)));
    }
}
