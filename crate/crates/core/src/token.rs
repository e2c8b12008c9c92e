//! Tokenizer: source text to a position-indexed token sequence with interned
//! identifier and literal spellings.

use serde::Serialize;
use std::collections::HashMap;
use std::fmt;

/// Interned spelling handle. Handles are dense: the k-th distinct spelling
/// interned in a unit gets handle k-1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Ident(pub u32);

/// Per-compilation-unit interner. Not shared across units.
#[derive(Debug, Default, Clone)]
pub struct Interner {
    by_text: HashMap<String, Ident>,
    texts: Vec<String>,
}

impl Interner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, text: &str) -> Ident {
        if let Some(&id) = self.by_text.get(text) {
            return id;
        }
        let id = Ident(self.texts.len() as u32);
        self.texts.push(text.to_owned());
        self.by_text.insert(text.to_owned(), id);
        id
    }

    pub fn lookup(&self, text: &str) -> Option<Ident> {
        self.by_text.get(text).copied()
    }

    pub fn text(&self, id: Ident) -> &str {
        &self.texts[id.0 as usize]
    }

    pub fn len(&self) -> usize {
        self.texts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.texts.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LiteralKind {
    Int,
    Float,
}

/// A numeric literal; the spelling is interned like an identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Literal {
    pub kind: LiteralKind,
    /// Interned spelling handle.
    pub text: Ident,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StmtKeyword {
    Let,
    If,
    Else,
    Return,
    Assert,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DefnKeyword {
    Struct,
    Enum,
    Fn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Keyword {
    Stmt(StmtKeyword),
    Defn(DefnKeyword),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PrefixOpr {
    Plus,
    Minus,
    Not,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BinaryOpr {
    Add,
    Sub,
    Mul,
    Div,
    Eq,
    Lt,
    Gt,
    Assign,
    AddAssign,
    /// `:` in annotations, parameters and struct fields.
    TypeIs,
    /// `->` before a return type.
    LightArrow,
    /// `.` field access.
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SuffixOpr {
    Incr,
    Decr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Opr {
    Prefix(PrefixOpr),
    Binary(BinaryOpr),
    Suffix(SuffixOpr),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Delimiter {
    Parenthesis,
    Bracket,
    Curly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LeftDelimiter(pub Delimiter);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RightDelimiter(pub Delimiter);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Separator {
    Comma,
    Semicolon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Token {
    Literal(Literal),
    Keyword(Keyword),
    Ident(Ident),
    Opr(Opr),
    LeftDelimiter(LeftDelimiter),
    RightDelimiter(RightDelimiter),
    Separator(Separator),
}

impl Keyword {
    pub fn spelling(self) -> &'static str {
        match self {
            Keyword::Stmt(StmtKeyword::Let) => "let",
            Keyword::Stmt(StmtKeyword::If) => "if",
            Keyword::Stmt(StmtKeyword::Else) => "else",
            Keyword::Stmt(StmtKeyword::Return) => "return",
            Keyword::Stmt(StmtKeyword::Assert) => "assert",
            Keyword::Defn(DefnKeyword::Struct) => "struct",
            Keyword::Defn(DefnKeyword::Enum) => "enum",
            Keyword::Defn(DefnKeyword::Fn) => "fn",
        }
    }

    fn from_spelling(s: &str) -> Option<Keyword> {
        Some(match s {
            "let" => Keyword::Stmt(StmtKeyword::Let),
            "if" => Keyword::Stmt(StmtKeyword::If),
            "else" => Keyword::Stmt(StmtKeyword::Else),
            "return" => Keyword::Stmt(StmtKeyword::Return),
            "assert" => Keyword::Stmt(StmtKeyword::Assert),
            "struct" => Keyword::Defn(DefnKeyword::Struct),
            "enum" => Keyword::Defn(DefnKeyword::Enum),
            "fn" => Keyword::Defn(DefnKeyword::Fn),
            _ => return None,
        })
    }
}

impl Opr {
    pub fn spelling(self) -> &'static str {
        match self {
            Opr::Prefix(PrefixOpr::Plus) => "+",
            Opr::Prefix(PrefixOpr::Minus) => "-",
            Opr::Prefix(PrefixOpr::Not) => "!",
            Opr::Binary(BinaryOpr::Add) => "+",
            Opr::Binary(BinaryOpr::Sub) => "-",
            Opr::Binary(BinaryOpr::Mul) => "*",
            Opr::Binary(BinaryOpr::Div) => "/",
            Opr::Binary(BinaryOpr::Eq) => "==",
            Opr::Binary(BinaryOpr::Lt) => "<",
            Opr::Binary(BinaryOpr::Gt) => ">",
            Opr::Binary(BinaryOpr::Assign) => "=",
            Opr::Binary(BinaryOpr::AddAssign) => "+=",
            Opr::Binary(BinaryOpr::TypeIs) => ":",
            Opr::Binary(BinaryOpr::LightArrow) => "->",
            Opr::Binary(BinaryOpr::Dot) => ".",
            Opr::Suffix(SuffixOpr::Incr) => "++",
            Opr::Suffix(SuffixOpr::Decr) => "--",
        }
    }
}

impl Delimiter {
    pub fn left_spelling(self) -> &'static str {
        match self {
            Delimiter::Parenthesis => "(",
            Delimiter::Bracket => "[",
            Delimiter::Curly => "{",
        }
    }

    pub fn right_spelling(self) -> &'static str {
        match self {
            Delimiter::Parenthesis => ")",
            Delimiter::Bracket => "]",
            Delimiter::Curly => "}",
        }
    }
}

impl Separator {
    pub fn spelling(self) -> &'static str {
        match self {
            Separator::Comma => ",",
            Separator::Semicolon => ";",
        }
    }
}

impl Token {
    /// Coarse class name used by the `tokenize` subcommand output.
    pub fn kind_name(self) -> &'static str {
        match self {
            Token::Literal(Literal { kind: LiteralKind::Int, .. }) => "literal-int",
            Token::Literal(Literal { kind: LiteralKind::Float, .. }) => "literal-float",
            Token::Keyword(_) => "keyword",
            Token::Ident(_) => "ident",
            Token::Opr(Opr::Prefix(_)) => "opr-prefix",
            Token::Opr(Opr::Binary(_)) => "opr-binary",
            Token::Opr(Opr::Suffix(_)) => "opr-suffix",
            Token::LeftDelimiter(_) => "ldelim",
            Token::RightDelimiter(_) => "rdelim",
            Token::Separator(_) => "separator",
        }
    }
}

/// Token sequence of one compilation unit plus its interner.
#[derive(Debug, Clone, Default)]
pub struct TokenSeq {
    pub tokens: Vec<Token>,
    pub interner: Interner,
}

impl TokenSeq {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn spelling(&self, token: Token) -> &str {
        match token {
            Token::Literal(lit) => self.interner.text(lit.text),
            Token::Ident(id) => self.interner.text(id),
            Token::Keyword(kw) => kw.spelling(),
            Token::Opr(opr) => opr.spelling(),
            Token::LeftDelimiter(LeftDelimiter(d)) => d.left_spelling(),
            Token::RightDelimiter(RightDelimiter(d)) => d.right_spelling(),
            Token::Separator(sep) => sep.spelling(),
        }
    }

    /// Joins token spellings with single spaces. Re-tokenizing the result
    /// yields the same token sequence.
    pub fn detokenize(&self) -> String {
        self.tokens
            .iter()
            .map(|&t| self.spelling(t))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LexError {
    /// Byte offset of the first byte outside the token alphabet.
    UnknownCharacter(usize),
}

impl fmt::Display for LexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LexError::UnknownCharacter(pos) => {
                write!(f, "unknown character at byte offset {pos}")
            }
        }
    }
}

impl std::error::Error for LexError {}

/// `+`/`-` lex as binary when the previous token can end an expression,
/// otherwise as prefix.
fn plus_minus_is_binary(prev: Option<&Token>) -> bool {
    matches!(
        prev,
        Some(Token::Literal(_))
            | Some(Token::Ident(_))
            | Some(Token::RightDelimiter(_))
            | Some(Token::Opr(Opr::Suffix(_)))
    )
}

/// Greedy longest-match lexer over ASCII source text. Whitespace separates
/// tokens and is not emitted.
pub fn tokenize(source: &str) -> Result<TokenSeq, LexError> {
    let bytes = source.as_bytes();
    let mut seq = TokenSeq::default();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if !b.is_ascii() {
            return Err(LexError::UnknownCharacter(i));
        }
        if b.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &source[start..i];
            let token = match Keyword::from_spelling(word) {
                Some(kw) => Token::Keyword(kw),
                None => Token::Ident(seq.interner.intern(word)),
            };
            seq.tokens.push(token);
            continue;
        }
        if b.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            // A decimal point only joins the literal when a digit follows;
            // otherwise it lexes as the field-access operator.
            let mut kind = LiteralKind::Int;
            if i + 1 < bytes.len() && bytes[i] == b'.' && bytes[i + 1].is_ascii_digit() {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                kind = LiteralKind::Float;
            }
            let text = seq.interner.intern(&source[start..i]);
            seq.tokens.push(Token::Literal(Literal { kind, text }));
            continue;
        }
        let two = if i + 1 < bytes.len() { &bytes[i..i + 2] } else { &bytes[i..i + 1] };
        let (token, width) = match two {
            b"++" => (Token::Opr(Opr::Suffix(SuffixOpr::Incr)), 2),
            b"--" => (Token::Opr(Opr::Suffix(SuffixOpr::Decr)), 2),
            b"+=" => (Token::Opr(Opr::Binary(BinaryOpr::AddAssign)), 2),
            b"->" => (Token::Opr(Opr::Binary(BinaryOpr::LightArrow)), 2),
            b"==" => (Token::Opr(Opr::Binary(BinaryOpr::Eq)), 2),
            _ => {
                let prev = seq.tokens.last();
                let token = match b {
                    b'+' if plus_minus_is_binary(prev) => Token::Opr(Opr::Binary(BinaryOpr::Add)),
                    b'+' => Token::Opr(Opr::Prefix(PrefixOpr::Plus)),
                    b'-' if plus_minus_is_binary(prev) => Token::Opr(Opr::Binary(BinaryOpr::Sub)),
                    b'-' => Token::Opr(Opr::Prefix(PrefixOpr::Minus)),
                    b'!' => Token::Opr(Opr::Prefix(PrefixOpr::Not)),
                    b'*' => Token::Opr(Opr::Binary(BinaryOpr::Mul)),
                    b'/' => Token::Opr(Opr::Binary(BinaryOpr::Div)),
                    b'=' => Token::Opr(Opr::Binary(BinaryOpr::Assign)),
                    b'<' => Token::Opr(Opr::Binary(BinaryOpr::Lt)),
                    b'>' => Token::Opr(Opr::Binary(BinaryOpr::Gt)),
                    b':' => Token::Opr(Opr::Binary(BinaryOpr::TypeIs)),
                    b'.' => Token::Opr(Opr::Binary(BinaryOpr::Dot)),
                    b'(' => Token::LeftDelimiter(LeftDelimiter(Delimiter::Parenthesis)),
                    b'[' => Token::LeftDelimiter(LeftDelimiter(Delimiter::Bracket)),
                    b'{' => Token::LeftDelimiter(LeftDelimiter(Delimiter::Curly)),
                    b')' => Token::RightDelimiter(RightDelimiter(Delimiter::Parenthesis)),
                    b']' => Token::RightDelimiter(RightDelimiter(Delimiter::Bracket)),
                    b'}' => Token::RightDelimiter(RightDelimiter(Delimiter::Curly)),
                    b',' => Token::Separator(Separator::Comma),
                    b';' => Token::Separator(Separator::Semicolon),
                    _ => return Err(LexError::UnknownCharacter(i)),
                };
                (token, 1)
            }
        };
        seq.tokens.push(token);
        i += width;
    }
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<&'static str> {
        tokenize(src).unwrap().tokens.iter().map(|t| t.kind_name()).collect()
    }

    #[test]
    fn classifies_fn_header() {
        assert_eq!(
            kinds("fn f ( ) { }"),
            ["keyword", "ident", "ldelim", "rdelim", "ldelim", "rdelim"]
        );
    }

    #[test]
    fn classifies_let_stmt() {
        let seq = tokenize("let x : i32 = 1 ;").unwrap();
        assert_eq!(
            seq.tokens.iter().map(|t| t.kind_name()).collect::<Vec<_>>(),
            ["keyword", "ident", "opr-binary", "ident", "opr-binary", "literal-int", "separator"]
        );
    }

    #[test]
    fn interning_is_stable_and_dense() {
        let mut interner = Interner::new();
        let f1 = interner.intern("f");
        let f2 = interner.intern("f");
        let g = interner.intern("g");
        assert_eq!(f1, f2);
        assert_ne!(f1, g);
        // after k distinct spellings, max handle is k-1
        assert_eq!(g, Ident(1));
        assert_eq!(interner.len(), 2);
    }

    #[test]
    fn repeated_idents_share_handles() {
        let seq = tokenize("a . b a a").unwrap();
        let handles: Vec<_> = seq
            .tokens
            .iter()
            .filter_map(|t| match t {
                Token::Ident(id) => Some(*id),
                _ => None,
            })
            .collect();
        assert_eq!(handles[0], handles[2]);
        assert_eq!(handles[0], handles[3]);
        assert_ne!(handles[0], handles[1]);
    }

    #[test]
    fn handle_space_fits_token_count() {
        let seq = tokenize("a b c a b c d 1 2 1").unwrap();
        assert!(seq.interner.len() <= seq.len());
    }

    #[test]
    fn float_requires_digit_on_both_sides() {
        let seq = tokenize("1.5 2. .5").unwrap();
        assert_eq!(
            seq.tokens.iter().map(|t| t.kind_name()).collect::<Vec<_>>(),
            ["literal-float", "literal-int", "opr-binary", "opr-binary", "literal-int"]
        );
    }

    #[test]
    fn plus_minus_context() {
        // statement start: prefix; after operand: binary; after suffix op: binary
        let seq = tokenize("- x + y ++ - 1").unwrap();
        let oprs: Vec<_> = seq
            .tokens
            .iter()
            .filter_map(|t| match t {
                Token::Opr(o) => Some(*o),
                _ => None,
            })
            .collect();
        assert_eq!(
            oprs,
            [
                Opr::Prefix(PrefixOpr::Minus),
                Opr::Binary(BinaryOpr::Add),
                Opr::Suffix(SuffixOpr::Incr),
                Opr::Binary(BinaryOpr::Sub),
            ]
        );
    }

    #[test]
    fn longest_match_compound_operators() {
        let seq = tokenize("fee += 100.0 ; a -> b").unwrap();
        assert!(seq
            .tokens
            .iter()
            .any(|t| matches!(t, Token::Opr(Opr::Binary(BinaryOpr::AddAssign)))));
        assert!(seq
            .tokens
            .iter()
            .any(|t| matches!(t, Token::Opr(Opr::Binary(BinaryOpr::LightArrow)))));
    }

    #[test]
    fn unknown_character_reports_offset() {
        assert!(matches!(tokenize("a b @ c"), Err(LexError::UnknownCharacter(4))));
        assert!(matches!(tokenize("münchen"), Err(LexError::UnknownCharacter(1))));
    }

    #[test]
    fn detokenize_round_trip() {
        let src = "fn f ( a : i32 ) -> i32 { let x = a + 1 ; return x }";
        let seq = tokenize(src).unwrap();
        let again = tokenize(&seq.detokenize()).unwrap();
        assert_eq!(seq.tokens, again.tokens);
        assert_eq!(seq.detokenize(), again.detokenize());
    }
}
