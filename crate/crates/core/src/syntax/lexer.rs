use std::fmt;

use super::parser::ParseError;
use super::Pos;

#[derive(Clone, Debug, PartialEq)]
pub enum TokenKind {
    Ident(String),
    Num(f64),
    Imag(f64),
    // keywords
    Let,
    In,
    If,
    Then,
    Else,
    True,
    False,
    Fst,
    Snd,
    Meas,
    TrL,
    MZero,
    InvSqrt2,
    TyBool,
    TyVec,
    TyDens,
    TyLin,
    TySuper,
    // symbols
    Lambda,
    ArrowLambda,
    Bullet,
    Dot,
    Comma,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Equals,
    EqEq,
    LArrow,
    RArrow,
    Plus,
    Minus,
    Star,
    Colon,
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TokenKind::Ident(x) => return write!(f, "identifier `{x}`"),
            TokenKind::Num(n) => return write!(f, "number `{n}`"),
            TokenKind::Imag(n) => return write!(f, "number `{n}i`"),
            TokenKind::Let => "`let`",
            TokenKind::In => "`in`",
            TokenKind::If => "`if`",
            TokenKind::Then => "`then`",
            TokenKind::Else => "`else`",
            TokenKind::True => "`True`",
            TokenKind::False => "`False`",
            TokenKind::Fst => "`fst`",
            TokenKind::Snd => "`snd`",
            TokenKind::Meas => "`meas`",
            TokenKind::TrL => "`trL`",
            TokenKind::MZero => "`mzero`",
            TokenKind::InvSqrt2 => "`invsqrt2`",
            TokenKind::TyBool => "`Bool`",
            TokenKind::TyVec => "`Vec`",
            TokenKind::TyDens => "`Dens`",
            TokenKind::TyLin => "`Lin`",
            TokenKind::TySuper => "`Super`",
            TokenKind::Lambda => "`\\`",
            TokenKind::ArrowLambda => "`\\•`",
            TokenKind::Bullet => "`•`",
            TokenKind::Dot => "`.`",
            TokenKind::Comma => "`,`",
            TokenKind::LParen => "`(`",
            TokenKind::RParen => "`)`",
            TokenKind::LBracket => "`[`",
            TokenKind::RBracket => "`]`",
            TokenKind::Equals => "`=`",
            TokenKind::EqEq => "`==`",
            TokenKind::LArrow => "`<-`",
            TokenKind::RArrow => "`->`",
            TokenKind::Plus => "`+`",
            TokenKind::Minus => "`-`",
            TokenKind::Star => "`*`",
            TokenKind::Colon => "`:`",
            TokenKind::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
}

fn keyword(word: &str) -> Option<TokenKind> {
    Some(match word {
        "let" => TokenKind::Let,
        "in" => TokenKind::In,
        "if" => TokenKind::If,
        "then" => TokenKind::Then,
        "else" => TokenKind::Else,
        "True" => TokenKind::True,
        "False" => TokenKind::False,
        "fst" => TokenKind::Fst,
        "snd" => TokenKind::Snd,
        "meas" => TokenKind::Meas,
        "trL" => TokenKind::TrL,
        "mzero" => TokenKind::MZero,
        "invsqrt2" => TokenKind::InvSqrt2,
        "Bool" => TokenKind::TyBool,
        "Vec" => TokenKind::TyVec,
        "Dens" => TokenKind::TyDens,
        "Lin" => TokenKind::TyLin,
        "Super" => TokenKind::TySuper,
        _ => return None,
    })
}

/// Reserved words, which cannot name variables.
pub fn is_keyword(word: &str) -> bool {
    keyword(word).is_some()
}

fn is_ident_start(c: char) -> bool {
    (c.is_alphabetic() && c != 'λ') || c == '_'
}

fn is_ident_char(c: char) -> bool {
    (c.is_alphanumeric() && c != 'λ') || c == '_' || c == '\''
}

/// Splits source text into tokens. `--` starts a line comment.
pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);

    macro_rules! advance {
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
        let pos = Pos::new(line, col);
        if c.is_whitespace() {
            advance!();
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                advance!();
            }
            continue;
        }
        let single = |k: TokenKind| Token { kind: k, pos };
        if c == 'λ' {
            advance!();
            if matches!(chars.get(i), Some('•') | Some('@')) {
                advance!();
                tokens.push(single(TokenKind::ArrowLambda));
            } else {
                tokens.push(single(TokenKind::Lambda));
            }
            continue;
        }
        if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                advance!();
            }
            let word: String = chars[start..i].iter().collect();
            let kind = keyword(&word).unwrap_or(TokenKind::Ident(word));
            tokens.push(Token { kind, pos });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance!();
            }
            if chars.get(i) == Some(&'.') && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                advance!();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    advance!();
                }
            }
            if matches!(chars.get(i), Some('e') | Some('E')) {
                let mut j = i + 1;
                if matches!(chars.get(j), Some('+') | Some('-')) {
                    j += 1;
                }
                if chars.get(j).is_some_and(|d| d.is_ascii_digit()) {
                    while i < j {
                        advance!();
                    }
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        advance!();
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let value: f64 = text.parse().map_err(|_| ParseError::new(pos, vec![], format!("malformed number `{text}`")))?;
            if chars.get(i) == Some(&'i') && !chars.get(i + 1).is_some_and(|&d| is_ident_char(d)) {
                advance!();
                tokens.push(single(TokenKind::Imag(value)));
            } else {
                tokens.push(single(TokenKind::Num(value)));
            }
            continue;
        }
        let kind = match c {
            '\\' => {
                advance!();
                if matches!(chars.get(i), Some('•') | Some('@')) {
                    advance!();
                    tokens.push(single(TokenKind::ArrowLambda));
                } else {
                    tokens.push(single(TokenKind::Lambda));
                }
                continue;
            }
            '•' | '@' => TokenKind::Bullet,
            '.' => TokenKind::Dot,
            ',' => TokenKind::Comma,
            '(' => TokenKind::LParen,
            ')' => TokenKind::RParen,
            '[' => TokenKind::LBracket,
            ']' => TokenKind::RBracket,
            '+' => TokenKind::Plus,
            '*' => TokenKind::Star,
            ':' => TokenKind::Colon,
            '=' if chars.get(i + 1) == Some(&'=') => {
                advance!();
                TokenKind::EqEq
            }
            '=' => TokenKind::Equals,
            '<' if chars.get(i + 1) == Some(&'-') => {
                advance!();
                TokenKind::LArrow
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                advance!();
                TokenKind::RArrow
            }
            '-' => TokenKind::Minus,
            '→' => TokenKind::RArrow,
            '←' => TokenKind::LArrow,
            other => {
                return Err(ParseError::new(pos, vec![], format!("unexpected character `{other}`")));
            }
        };
        advance!();
        tokens.push(single(kind));
    }
    tokens.push(Token { kind: TokenKind::Eof, pos: Pos::new(line, col) });
    Ok(tokens)
}
