use crate::error::{ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Num(String),
    Ident(String),
    Str(String),
    Sym(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    /// 1-based column of the first character.
    pub col: usize,
}

impl Token {
    pub fn is_sym(&self, s: &str) -> bool {
        matches!(&self.tok, Tok::Sym(t) if *t == s)
    }

    pub fn is_ident(&self, s: &str) -> bool {
        matches!(&self.tok, Tok::Ident(t) if t == s)
    }

    pub fn describe(&self) -> String {
        match &self.tok {
            Tok::Num(n) => format!("`{n}`"),
            Tok::Ident(i) => format!("`{i}`"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Sym(s) => format!("`{s}`"),
        }
    }
}

const SYMBOLS: [&str; 21] = [
    ">=", "<=", "&&", "(", ")", "[", "]", "{", "}", ",", ";", ":", "=", "+", "-", "*", "/", "^",
    ">", "<", "!",
];

/// Strips a trailing `#` comment, ignoring `#` inside string literals.
pub fn strip_comment(line: &str) -> &str {
    let mut in_str = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_str = !in_str,
            '#' if !in_str => return &line[..i],
            _ => {}
        }
    }
    line
}

pub fn lex(line: &str, line_no: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    let err = |col: usize, msg: String| ParseError::new(ParseErrorKind::Syntax, line_no, col, msg);
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            if text.matches('.').count() > 1 {
                return Err(err(col, format!("malformed number `{text}`")));
            }
            tokens.push(Token { tok: Tok::Num(text), col });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            tokens.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), col });
            continue;
        }
        if c == '"' {
            let start = i + 1;
            i += 1;
            while i < chars.len() && chars[i] != '"' {
                i += 1;
            }
            if i == chars.len() {
                return Err(err(col, "unterminated string".into()));
            }
            tokens.push(Token { tok: Tok::Str(chars[start..i].iter().collect()), col });
            i += 1;
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                tokens.push(Token { tok: Tok::Sym(s), col });
                i += s.len();
            }
            None => return Err(err(col, format!("unexpected character `{c}`"))),
        }
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_numbers_identifiers_and_symbols() {
        let toks = lex("F1 = x^(2/3) >= 1.5e-3 && y", 1).unwrap();
        let kinds: Vec<_> = toks.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(kinds[0], Tok::Ident("F1".into()));
        assert_eq!(kinds[1], Tok::Sym("="));
        assert!(kinds.contains(&Tok::Num("1.5e-3".into())));
        assert!(kinds.contains(&Tok::Sym(">=")));
        assert!(kinds.contains(&Tok::Sym("&&")));
        assert_eq!(toks[2].col, 6);
    }

    #[test]
    fn comments_are_stripped_outside_strings() {
        assert_eq!(strip_comment("x = 1 # note"), "x = 1 ");
        assert_eq!(strip_comment("problem \"a#b\""), "problem \"a#b\"");
    }

    #[test]
    fn rejects_stray_characters() {
        let e = lex("x $ 1", 3).unwrap_err();
        assert_eq!((e.line, e.column), (3, 3));
    }
}
