use super::error::{LangError, Pos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    /// Identifiers, keywords, numbers and hyphenated forms such as `3-right`
    /// or `move-to-leftend`.
    Word(String),
    Quoted(String),
    Colon,
    Semi,
    LParen,
    RParen,
    Equals,
    And,
    Or,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Quoted(s) => format!("'{s}'"),
            Tok::Colon => "`:`".into(),
            Tok::Semi => "`;`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Equals => "`=`".into(),
            Tok::And => "`&&`".into(),
            Tok::Or => "`||`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>, LangError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let (mut line, mut col) = (1, 1);

    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '(' && chars.get(i + 1) == Some(&'*') {
            bump!();
            bump!();
            loop {
                if i >= chars.len() {
                    return Err(LangError::Syntax {
                        pos,
                        found: "unterminated comment".into(),
                        expected: vec!["`*)`".into()],
                    });
                }
                if chars[i] == '*' && chars.get(i + 1) == Some(&')') {
                    bump!();
                    bump!();
                    break;
                }
                bump!();
            }
            continue;
        }
        let tok = match c {
            '\'' => {
                bump!();
                let start = i;
                while i < chars.len() && chars[i] != '\'' && chars[i] != '\n' {
                    bump!();
                }
                if i >= chars.len() || chars[i] != '\'' {
                    return Err(LangError::Syntax {
                        pos,
                        found: "unterminated constant".into(),
                        expected: vec!["`'`".into()],
                    });
                }
                let body: String = chars[start..i].iter().collect();
                bump!();
                out.push((Tok::Quoted(body), pos));
                continue;
            }
            ':' => Tok::Colon,
            ';' => Tok::Semi,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '=' => Tok::Equals,
            '∧' => Tok::And,
            '∨' => Tok::Or,
            '&' if chars.get(i + 1) == Some(&'&') => {
                bump!();
                Tok::And
            }
            '|' if chars.get(i + 1) == Some(&'|') => {
                bump!();
                Tok::Or
            }
            c if is_word_char(c) => {
                let start = i;
                while i < chars.len() {
                    let hyphen =
                        chars[i] == '-' && chars.get(i + 1).is_some_and(|&n| is_word_char(n));
                    if is_word_char(chars[i]) || hyphen {
                        bump!();
                    } else {
                        break;
                    }
                }
                out.push((Tok::Word(chars[start..i].iter().collect()), pos));
                continue;
            }
            other => {
                return Err(LangError::Syntax {
                    pos,
                    found: format!("`{other}`"),
                    expected: vec!["a command".into()],
                })
            }
        };
        bump!();
        out.push((tok, pos));
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}
