//! Arena AST: the whole tree of one unit is a length-L sequence of nullable
//! nodes referencing parents by token position.

mod dyck;
mod reduce;

pub use dyck::dyck_step;
pub use reduce::{init_pre_asts, reduce, reduce_n_times};

use crate::config::Config;
use crate::seq::{tag_bits, Idx, Local, Runtime, Seq, WidthParams};
use crate::token::{
    DefnKeyword, Ident, Keyword, LeftDelimiter, Literal, Opr, PrefixOpr, RightDelimiter,
    Separator, SuffixOpr, TokenSeq,
};
use crate::token::BinaryOpr;
use serde::Serialize;

/// Per-position intermediate value during bottom-up parsing: an unconsumed
/// token class or a freshly built node payload awaiting consumption.
/// Literal and identifier tokens never appear here; they are promoted to
/// `Ast` payloads at initialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreAst {
    Keyword(Keyword),
    Opr(Opr),
    LeftDelimiter(LeftDelimiter),
    RightDelimiter(RightDelimiter),
    Ast(AstData),
    Separator(Separator),
}

/// Node payload. Child references are token positions whose node slots are
/// non-null; `lopd_ident`/`caller_ident` carry the identifier when the
/// corresponding child is a bare identifier node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AstData {
    Literal(Literal),
    Ident(Ident),
    Prefix {
        opr: PrefixOpr,
        opd: Idx,
    },
    Binary {
        lopd: Idx,
        opr: BinaryOpr,
        ropd: Idx,
        lopd_ident: Option<Ident>,
    },
    Suffix {
        opd: Idx,
        opr: SuffixOpr,
    },
    Delimited {
        left_delimiter_idx: Idx,
        left_delimiter: LeftDelimiter,
        right_delimiter: RightDelimiter,
    },
    SeparatedItem {
        content: Option<Idx>,
        separator: Separator,
    },
    Call {
        caller: Idx,
        caller_ident: Option<Ident>,
        left_delimiter: LeftDelimiter,
        right_delimiter: RightDelimiter,
        delimited_arguments: Idx,
    },
    LetInit {
        expr: Idx,
        pattern: Idx,
        initial_value: Option<Idx>,
    },
    Return {
        result: Idx,
    },
    Assert {
        condition: Idx,
    },
    If {
        condition: Idx,
        body: Idx,
    },
    Else {
        if_stmt: Idx,
        body: Idx,
    },
    Defn {
        keyword: DefnKeyword,
        ident_idx: Idx,
        ident: Ident,
        content: Idx,
    },
}

/// An allocated node: parent position (null for roots) plus payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Ast {
    pub parent: Option<Idx>,
    pub data: AstData,
}

impl AstData {
    pub fn kind_name(&self) -> &'static str {
        match self {
            AstData::Literal(_) => "literal",
            AstData::Ident(_) => "ident",
            AstData::Prefix { .. } => "prefix",
            AstData::Binary { .. } => "binary",
            AstData::Suffix { .. } => "suffix",
            AstData::Delimited { .. } => "delimited",
            AstData::SeparatedItem { .. } => "separated-item",
            AstData::Call { .. } => "call",
            AstData::LetInit { .. } => "let-init",
            AstData::Return { .. } => "return",
            AstData::Assert { .. } => "assert",
            AstData::If { .. } => "if",
            AstData::Else { .. } => "else",
            AstData::Defn { .. } => "defn",
        }
    }

    /// Child positions in field order.
    pub fn children(&self) -> Vec<Idx> {
        match *self {
            AstData::Literal(_) | AstData::Ident(_) => vec![],
            AstData::Prefix { opd, .. } => vec![opd],
            AstData::Binary { lopd, ropd, .. } => vec![lopd, ropd],
            AstData::Suffix { opd, .. } => vec![opd],
            // delimited children (the items between the delimiters) are not
            // stored; they are recovered from parent links
            AstData::Delimited { .. } => vec![],
            AstData::SeparatedItem { content, .. } => content.into_iter().collect(),
            AstData::Call { caller, delimited_arguments, .. } => {
                vec![caller, delimited_arguments]
            }
            AstData::LetInit { expr, .. } => vec![expr],
            AstData::Return { result } => vec![result],
            AstData::Assert { condition } => vec![condition],
            AstData::If { condition, body } => vec![condition, body],
            AstData::Else { if_stmt, body } => vec![if_stmt, body],
            AstData::Defn { ident_idx, content, .. } => vec![ident_idx, content],
        }
    }
}

impl Local for PreAst {
    fn width_bits(p: &WidthParams) -> u32 {
        // token classes are small; the Ast payload dominates
        tag_bits(6) + AstData::width_bits(p)
    }
}

impl Local for AstData {
    fn width_bits(p: &WidthParams) -> u32 {
        let idx = p.idx_bits;
        let ident = idx;
        // widest variants: Call carries two positions, two delimiters and an
        // optional identifier; Defn carries two positions and an identifier
        let call = idx + (1 + ident) + 2 + 2 + idx;
        let binary = idx + 4 + idx + (1 + ident);
        let defn = 2 + idx + ident + idx;
        tag_bits(14) + call.max(binary).max(defn)
    }
}

impl Local for Ast {
    fn width_bits(p: &WidthParams) -> u32 {
        1 + p.idx_bits + AstData::width_bits(p)
    }
}

impl Local for Ident {
    fn width_bits(p: &WidthParams) -> u32 {
        p.idx_bits
    }
}

impl Local for Literal {
    fn width_bits(p: &WidthParams) -> u32 {
        1 + p.idx_bits
    }
}

impl Local for crate::token::Token {
    fn width_bits(p: &WidthParams) -> u32 {
        tag_bits(7) + (1 + p.idx_bits)
    }
}

/// Final parse verdict. Malformed input is data, not failure: positions that
/// never reduce are reported as stuck.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseStatus {
    Complete,
    /// Positions still holding unconsumed non-node token classes.
    Stuck(Vec<Idx>),
}

impl ParseStatus {
    pub fn is_complete(&self) -> bool {
        matches!(self, ParseStatus::Complete)
    }
}

#[derive(Debug, Clone)]
pub struct ParseOutcome {
    pub pre_asts: Seq<PreAst>,
    pub asts: Seq<Ast>,
    pub status: ParseStatus,
}

/// Runs initialization plus `max_rounds` reduction rounds and classifies the
/// result. Surviving `PreAst::Ast` entries are roots; surviving token
/// classes mean the input is stuck at those positions.
pub fn parse_to_asts(
    rt: &mut Runtime,
    cfg: &Config,
    tokens: &TokenSeq,
    max_rounds: usize,
) -> ParseOutcome {
    let (pre_asts, asts) = init_pre_asts(rt, tokens);
    let (pre_asts, asts) = reduce_n_times(rt, cfg, pre_asts, asts, max_rounds);
    let status = classify(&pre_asts);
    ParseOutcome { pre_asts, asts, status }
}

pub fn classify(pre_asts: &Seq<PreAst>) -> ParseStatus {
    let stuck: Vec<Idx> = pre_asts
        .items()
        .iter()
        .enumerate()
        .filter_map(|(p, item)| match item {
            None | Some(PreAst::Ast(_)) => None,
            Some(_) => Some(p),
        })
        .collect();
    if stuck.is_empty() {
        ParseStatus::Complete
    } else {
        ParseStatus::Stuck(stuck)
    }
}

/// Root positions (allocated nodes with no parent that still sit in the
/// pre-ast sequence).
pub fn roots(pre_asts: &Seq<PreAst>, asts: &Seq<Ast>) -> Vec<Idx> {
    (0..asts.len())
        .filter(|&p| {
            matches!(pre_asts.get(p), Some(PreAst::Ast(_)))
                && matches!(asts.get(p), Some(Ast { parent: None, .. }))
        })
        .collect()
}

/// Children of each position, recovered from parent links, in position order.
pub fn child_lists(asts: &Seq<Ast>) -> Vec<Vec<Idx>> {
    let mut children = vec![Vec::new(); asts.len()];
    for p in 0..asts.len() {
        if let Some(ast) = asts.get(p) {
            if let Some(q) = ast.parent {
                children[q].push(p);
            }
        }
    }
    children
}
