//! Bottom-up reduction: five sub-passes per round, each proposing new nodes
//! from nearest-neighbor context, consuming their operands and recording
//! parent links.

use super::{Ast, AstData, PreAst};
use crate::config::{Config, PrecedenceTable};
use crate::seq::{Idx, Option2, Runtime, Seq};
use crate::token::{
    BinaryOpr, DefnKeyword, Delimiter, Keyword, LeftDelimiter, Opr, RightDelimiter, Separator,
    StmtKeyword, Token, TokenSeq,
};

type Neighbor = Option<(Idx, PreAst)>;

fn first(two: Option<Option2<(Idx, PreAst)>>) -> Neighbor {
    two.map(|o2| o2.first)
}

fn second(two: Option<Option2<(Idx, PreAst)>>) -> Neighbor {
    two.and_then(|o2| o2.second)
}

/// Literal and identifier tokens are promoted to allocated leaf nodes at
/// their positions; every other token starts as its unconsumed class.
pub fn init_pre_asts(rt: &mut Runtime, tokens: &TokenSeq) -> (Seq<PreAst>, Seq<Ast>) {
    let token_seq: Seq<Token> =
        Seq::from_options(tokens.tokens.iter().map(|&t| Some(t)).collect());
    rt.map_enumerated_unzip("init_pre_asts", &token_seq, |_, token| {
        let Some(token) = token else { return (None, None) };
        let leaf = |data: AstData| {
            (
                Some(PreAst::Ast(data)),
                Some(Ast { parent: None, data }),
            )
        };
        match token {
            Token::Literal(lit) => leaf(AstData::Literal(lit)),
            Token::Ident(id) => leaf(AstData::Ident(id)),
            Token::Keyword(kw) => (Some(PreAst::Keyword(kw)), None),
            Token::Opr(opr) => (Some(PreAst::Opr(opr)), None),
            Token::LeftDelimiter(d) => (Some(PreAst::LeftDelimiter(d)), None),
            Token::RightDelimiter(d) => (Some(PreAst::RightDelimiter(d)), None),
            Token::Separator(sep) => (Some(PreAst::Separator(sep)), None),
        }
    })
}

/// One full round: operators, delimited groups (with separated items),
/// calls, statements, definitions — in that order, each seeing the previous
/// sub-pass's output.
pub fn reduce(
    rt: &mut Runtime,
    cfg: &Config,
    pre_asts: Seq<PreAst>,
    asts: Seq<Ast>,
) -> (Seq<PreAst>, Seq<Ast>) {
    let (pre_asts, asts) = reduce_by_opr(rt, cfg, pre_asts, asts);
    let (pre_asts, asts) = reduce_by_delimited(rt, pre_asts, asts);
    let (pre_asts, asts) = reduce_by_call(rt, pre_asts, asts);
    let (pre_asts, asts) = reduce_by_stmt(rt, pre_asts, asts);
    reduce_by_defn(rt, pre_asts, asts)
}

pub fn reduce_n_times(
    rt: &mut Runtime,
    cfg: &Config,
    mut pre_asts: Seq<PreAst>,
    mut asts: Seq<Ast>,
    n: usize,
) -> (Seq<PreAst>, Seq<Ast>) {
    for _ in 0..n {
        let (p, a) = reduce(rt, cfg, pre_asts, asts);
        pre_asts = p;
        asts = a;
    }
    (pre_asts, asts)
}

fn update_pre_asts_by_new_asts(
    rt: &mut Runtime,
    pre_asts: &Seq<PreAst>,
    new_asts: &Seq<AstData>,
) -> Seq<PreAst> {
    rt.map2("update_pre_asts", pre_asts, new_asts, |pre, new| match new {
        Some(data) => Some(PreAst::Ast(data)),
        None => pre,
    })
}

fn allocate_asts_and_update_parents(
    rt: &mut Runtime,
    allocated: &Seq<Ast>,
    new_asts: &Seq<AstData>,
    new_parents: &Seq<Idx>,
) -> Seq<Ast> {
    rt.map3(
        "allocate_asts",
        allocated,
        new_asts,
        new_parents,
        |existing, new, parent| {
            if let Some(data) = new {
                return Some(Ast { parent: None, data });
            }
            let mut ast = existing?;
            if parent.is_some() {
                ast.parent = parent;
            }
            Some(ast)
        },
    )
}

// ---- operators ----

fn reduce_by_opr(
    rt: &mut Runtime,
    cfg: &Config,
    pre_asts: Seq<PreAst>,
    asts: Seq<Ast>,
) -> (Seq<PreAst>, Seq<Ast>) {
    let left2 = rt.nearest_left2(&pre_asts);
    let right2 = rt.nearest_right2(&pre_asts);
    let prec = &cfg.precedence;
    let new_asts = rt.map3("new_opr_ast", &left2, &pre_asts, &right2, |l2, cur, r2| {
        new_opr_ast(prec, l2, cur, r2)
    });
    let (pre_asts, new_parents) = reduce_pre_asts_by_opr(rt, &pre_asts, &new_asts);
    let pre_asts = update_pre_asts_by_new_asts(rt, &pre_asts, &new_asts);
    let asts = allocate_asts_and_update_parents(rt, &asts, &new_asts, &new_parents);
    (pre_asts, asts)
}

fn new_opr_ast(
    prec: &PrecedenceTable,
    left2: Option<Option2<(Idx, PreAst)>>,
    current: Option<PreAst>,
    right2: Option<Option2<(Idx, PreAst)>>,
) -> Option<AstData> {
    let Some(PreAst::Opr(opr)) = current else {
        return None;
    };
    match opr {
        Opr::Prefix(opr) => {
            let Some((opd, PreAst::Ast(_))) = first(right2) else {
                return None;
            };
            if let Some((_, snd)) = second(right2) {
                match snd {
                    PreAst::Keyword(_) => (),
                    PreAst::Opr(right_opr) => match right_opr {
                        Opr::Prefix(_) => (),
                        // binary operators are left-associative, so strict >
                        Opr::Binary(r) => {
                            if prec.binary(r) > prec.prefix(opr) {
                                return None;
                            }
                        }
                        Opr::Suffix(r) => {
                            if prec.suffix(r) > prec.prefix(opr) {
                                return None;
                            }
                        }
                    },
                    PreAst::Ast(_) => (),
                    // a call or index form binds tighter
                    PreAst::LeftDelimiter(_) => return None,
                    PreAst::RightDelimiter(_) => (),
                    PreAst::Separator(_) => (),
                }
            }
            Some(AstData::Prefix { opr, opd })
        }
        Opr::Binary(opr) => {
            let Some((lopd, PreAst::Ast(lopd_ast))) = first(left2) else {
                return None;
            };
            let Some((ropd, PreAst::Ast(_))) = first(right2) else {
                return None;
            };
            if let Some((_, snd)) = second(left2) {
                match snd {
                    PreAst::Keyword(_) => (),
                    PreAst::Opr(left_opr) => match left_opr {
                        Opr::Prefix(l) => {
                            if prec.prefix(l) >= prec.binary(opr) {
                                return None;
                            }
                        }
                        // left-associative, so >= defers to the left operator
                        Opr::Binary(l) => {
                            if prec.binary(l) >= prec.binary(opr) {
                                return None;
                            }
                        }
                        Opr::Suffix(_) => (),
                    },
                    // two adjacent operands only happen in the return-type
                    // position `( .. ) -> ty`
                    PreAst::Ast(_) => {
                        if opr != BinaryOpr::LightArrow {
                            return None;
                        }
                    }
                    PreAst::LeftDelimiter(_) => (),
                    PreAst::RightDelimiter(_) => return None,
                    PreAst::Separator(_) => (),
                }
            }
            if let Some((_, snd)) = second(right2) {
                match snd {
                    PreAst::Keyword(kw) => match kw {
                        Keyword::Stmt(StmtKeyword::Else) => return None,
                        _ => (),
                    },
                    PreAst::Opr(right_opr) => match right_opr {
                        Opr::Prefix(_) => (),
                        Opr::Binary(r) => {
                            if prec.binary(r) > prec.binary(opr) {
                                return None;
                            }
                        }
                        Opr::Suffix(r) => {
                            if prec.suffix(r) >= prec.binary(opr) {
                                return None;
                            }
                        }
                    },
                    // a call or index form binds tighter
                    PreAst::LeftDelimiter(_) => return None,
                    PreAst::RightDelimiter(_) => (),
                    PreAst::Ast(_) => (),
                    PreAst::Separator(_) => (),
                }
            }
            let lopd_ident = match lopd_ast {
                AstData::Ident(id) => Some(id),
                _ => None,
            };
            Some(AstData::Binary { lopd, opr, ropd, lopd_ident })
        }
        Opr::Suffix(opr) => {
            let Some((opd, PreAst::Ast(_))) = first(left2) else {
                return None;
            };
            if let Some((_, snd)) = second(left2) {
                match snd {
                    PreAst::Keyword(_) => (),
                    PreAst::Opr(left_opr) => match left_opr {
                        Opr::Prefix(l) => {
                            if prec.prefix(l) > prec.suffix(opr) {
                                return None;
                            }
                        }
                        Opr::Binary(l) => {
                            if prec.binary(l) > prec.suffix(opr) {
                                return None;
                            }
                        }
                        Opr::Suffix(_) => (),
                    },
                    PreAst::LeftDelimiter(_) => (),
                    PreAst::RightDelimiter(_) => return None,
                    PreAst::Ast(_) => return None,
                    PreAst::Separator(_) => (),
                }
            }
            Some(AstData::Suffix { opd, opr })
        }
    }
}

fn reduce_pre_asts_by_opr(
    rt: &mut Runtime,
    pre_asts: &Seq<PreAst>,
    new_asts: &Seq<AstData>,
) -> (Seq<PreAst>, Seq<Idx>) {
    let new_left = rt.nearest_left(new_asts);
    let pre_asts = rt.map2("clear_opr_anchor", pre_asts, new_asts, |pre, new| {
        if new.is_some() {
            None
        } else {
            pre
        }
    });
    let (pre_asts, new_parents) = rt.map2_enumerated_unzip(
        "consume_opr_left",
        &new_left,
        &pre_asts,
        |idx, nearest, pre| {
            let Some(pre_ast) = pre else { return (None, None) };
            let Some((new_idx, data)) = nearest else {
                return (Some(pre_ast), None);
            };
            match data {
                AstData::Binary { ropd: opd, .. } | AstData::Prefix { opd, .. } if opd == idx => {
                    (None, Some(new_idx))
                }
                _ => (Some(pre_ast), None),
            }
        },
    );
    let new_right = rt.nearest_right(new_asts);
    rt.map3_enumerated_unzip(
        "consume_opr_right",
        &new_right,
        &pre_asts,
        &new_parents,
        |idx, nearest, pre, parent| {
            let Some(pre_ast) = pre else { return (None, parent) };
            if parent.is_some() {
                return (None, parent);
            }
            let Some((new_idx, data)) = nearest else {
                return (Some(pre_ast), None);
            };
            match data {
                AstData::Binary { lopd: opd, .. } | AstData::Suffix { opd, .. } if opd == idx => {
                    (None, Some(new_idx))
                }
                _ => (Some(pre_ast), None),
            }
        },
    )
}

// ---- delimited groups and separated items ----

fn reduce_by_delimited(
    rt: &mut Runtime,
    pre_asts: Seq<PreAst>,
    asts: Seq<Ast>,
) -> (Seq<PreAst>, Seq<Ast>) {
    // separated items first, so a freshly wrapped statement can close its
    // enclosing block within the same round
    let left2 = rt.nearest_left2(&pre_asts);
    let new_sep_asts = rt.map2("new_separated_item", &left2, &pre_asts, new_separated_item_ast);
    let sep_right = rt.nearest_right(&new_sep_asts);
    let (pre_asts, sep_parents) = rt.map2_enumerated_unzip(
        "consume_sep_content",
        &sep_right,
        &pre_asts,
        |idx, nearest, pre| {
            let Some(pre_ast) = pre else { return (None, None) };
            if let Some((j, AstData::SeparatedItem { content: Some(c), .. })) = nearest {
                if c == idx {
                    return (None, Some(j));
                }
            }
            (Some(pre_ast), None)
        },
    );
    let pre_asts = update_pre_asts_by_new_asts(rt, &pre_asts, &new_sep_asts);
    let asts = allocate_asts_and_update_parents(rt, &asts, &new_sep_asts, &sep_parents);

    // a right delimiter reduces when the nearest non-node value to its left
    // is the matching left delimiter: everything between is settled
    let blockers = rt.map("delimiter_blockers", &pre_asts, |pa| match pa {
        Some(PreAst::Ast(_)) | None => None,
        other => other,
    });
    let blocker_left = rt.nearest_left(&blockers);
    let new_delim_asts = rt.map2_enumerated(
        "new_delimited",
        &blocker_left,
        &pre_asts,
        |_idx, nearest, cur| {
            let Some(PreAst::RightDelimiter(right_delimiter)) = cur else {
                return None;
            };
            let Some((i, PreAst::LeftDelimiter(left_delimiter))) = nearest else {
                return None;
            };
            if left_delimiter.0 != right_delimiter.0 {
                return None;
            }
            Some(AstData::Delimited {
                left_delimiter_idx: i,
                left_delimiter,
                right_delimiter,
            })
        },
    );
    let delim_right = rt.nearest_right(&new_delim_asts);
    let (pre_asts, delim_parents) = rt.map2_enumerated_unzip(
        "consume_delimited",
        &delim_right,
        &pre_asts,
        |idx, nearest, pre| {
            let Some(pre_ast) = pre else { return (None, None) };
            if let Some((j, AstData::Delimited { left_delimiter_idx: i, .. })) = nearest {
                match pre_ast {
                    // item strictly inside (i, j) becomes a child of the group
                    PreAst::Ast(_) if i < idx => return (None, Some(j)),
                    // the left delimiter itself is consumed
                    PreAst::LeftDelimiter(_) if i == idx => return (None, None),
                    _ => (),
                }
            }
            (Some(pre_ast), None)
        },
    );
    let pre_asts = update_pre_asts_by_new_asts(rt, &pre_asts, &new_delim_asts);
    let asts = allocate_asts_and_update_parents(rt, &asts, &new_delim_asts, &delim_parents);
    (pre_asts, asts)
}

fn new_separated_item_ast(
    left2: Option<Option2<(Idx, PreAst)>>,
    current: Option<PreAst>,
) -> Option<AstData> {
    let Some(PreAst::Separator(separator)) = current else {
        return None;
    };
    match first(left2) {
        // nothing before the separator: empty item
        None => Some(AstData::SeparatedItem { content: None, separator }),
        Some((i, PreAst::Ast(_))) => match second(left2) {
            // a pending keyword or operator may still extend the value
            Some((_, PreAst::Keyword(_))) | Some((_, PreAst::Opr(_))) => None,
            _ => Some(AstData::SeparatedItem { content: Some(i), separator }),
        },
        Some((_, PreAst::LeftDelimiter(_))) | Some((_, PreAst::Separator(_))) => {
            Some(AstData::SeparatedItem { content: None, separator })
        }
        // an unreduced right delimiter will become a node at that position
        Some((_, PreAst::RightDelimiter(_))) => None,
        // malformed input; stays stuck
        Some((_, PreAst::Keyword(_))) | Some((_, PreAst::Opr(_))) => None,
    }
}

// ---- generalized call forms ----

fn reduce_by_call(
    rt: &mut Runtime,
    pre_asts: Seq<PreAst>,
    asts: Seq<Ast>,
) -> (Seq<PreAst>, Seq<Ast>) {
    let left2 = rt.nearest_left2(&pre_asts);
    let right1 = rt.nearest_right(&pre_asts);
    let new_asts = rt.map2_enumerated("new_call_ast", &left2, &right1, new_call_ast);
    let (pre_asts, new_parents) = reduce_pre_asts_by_call(rt, &pre_asts, &new_asts);
    let asts = allocate_asts_and_update_parents(rt, &asts, &new_asts, &new_parents);
    let pre_asts = update_pre_asts_by_new_asts(rt, &pre_asts, &new_asts);
    (pre_asts, asts)
}

fn new_call_ast(idx: Idx, left2: Option<Option2<(Idx, PreAst)>>, right1: Neighbor) -> Option<AstData> {
    let Some((caller, PreAst::Ast(caller_ast))) = first(left2) else {
        return None;
    };
    let Some((
        delimited_arguments,
        PreAst::Ast(AstData::Delimited {
            left_delimiter_idx,
            left_delimiter,
            right_delimiter,
        }),
    )) = right1
    else {
        return None;
    };
    if let Some((_, snd)) = second(left2) {
        match snd {
            PreAst::Keyword(kw) => match kw {
                Keyword::Defn(kw) => match kw {
                    DefnKeyword::Struct | DefnKeyword::Enum => return None,
                    // `fn name(params) {body}` is a call form on the curly group
                    DefnKeyword::Fn => match left_delimiter.0 {
                        Delimiter::Parenthesis | Delimiter::Bracket => return None,
                        Delimiter::Curly => (),
                    },
                },
                Keyword::Stmt(kw) => match kw {
                    StmtKeyword::Let | StmtKeyword::Return | StmtKeyword::Assert => (),
                    StmtKeyword::If => match left_delimiter.0 {
                        Delimiter::Parenthesis | Delimiter::Bracket => (),
                        // the curly group after a condition is the body
                        Delimiter::Curly => return None,
                    },
                    StmtKeyword::Else => return None,
                },
            },
            PreAst::Opr(opr) => match opr {
                Opr::Prefix(_) | Opr::Binary(_) => match left_delimiter.0 {
                    Delimiter::Parenthesis | Delimiter::Bracket => (),
                    Delimiter::Curly => return None,
                },
                Opr::Suffix(_) => return None,
            },
            PreAst::LeftDelimiter(_) => (),
            PreAst::RightDelimiter(_) => return None,
            PreAst::Ast(snd_ast) => {
                // `ident (params) {body}` / `ident (params) -> ty {body}`
                let is_defn_header = matches!(snd_ast, AstData::Ident(_))
                    && left_delimiter.0 == Delimiter::Curly;
                if is_defn_header {
                    match caller_ast {
                        AstData::Binary { opr: BinaryOpr::LightArrow, .. } => (),
                        AstData::Delimited {
                            left_delimiter: LeftDelimiter(Delimiter::Parenthesis),
                            right_delimiter: RightDelimiter(Delimiter::Parenthesis),
                            ..
                        } => (),
                        _ => return None,
                    }
                } else {
                    return None;
                }
            }
            PreAst::Separator(_) => (),
        }
    }
    if left_delimiter_idx != idx {
        return None;
    }
    let caller_ident = match caller_ast {
        AstData::Ident(id) => Some(id),
        _ => None,
    };
    Some(AstData::Call {
        caller,
        caller_ident,
        left_delimiter,
        right_delimiter,
        delimited_arguments,
    })
}

fn reduce_pre_asts_by_call(
    rt: &mut Runtime,
    pre_asts: &Seq<PreAst>,
    new_asts: &Seq<AstData>,
) -> (Seq<PreAst>, Seq<Idx>) {
    let new_left = rt.nearest_left(new_asts);
    let new_right = rt.nearest_right(new_asts);
    rt.map3_enumerated_unzip(
        "consume_call",
        &new_left,
        &new_right,
        pre_asts,
        |idx, left, right, pre| {
            if let Some((j, AstData::Call { delimited_arguments, .. })) = left {
                if delimited_arguments == idx {
                    return (None, Some(j));
                }
            }
            if let Some((j, AstData::Call { caller, .. })) = right {
                if caller == idx {
                    return (None, Some(j));
                }
            }
            (pre, None)
        },
    )
}

// ---- statements ----

fn reduce_by_stmt(
    rt: &mut Runtime,
    pre_asts: Seq<PreAst>,
    asts: Seq<Ast>,
) -> (Seq<PreAst>, Seq<Ast>) {
    let left2 = rt.nearest_left2(&pre_asts);
    let right2 = rt.nearest_right2(&pre_asts);
    let new_asts = rt.map3("new_stmt_ast", &left2, &pre_asts, &right2, new_stmt_ast);
    let (pre_asts, new_parents) = reduce_pre_asts_by_stmt(rt, &pre_asts, &new_asts);
    let asts = allocate_asts_and_update_parents(rt, &asts, &new_asts, &new_parents);
    let pre_asts = update_pre_asts_by_new_asts(rt, &pre_asts, &new_asts);
    (pre_asts, asts)
}

fn new_stmt_ast(
    left2: Option<Option2<(Idx, PreAst)>>,
    current: Option<PreAst>,
    right2: Option<Option2<(Idx, PreAst)>>,
) -> Option<AstData> {
    let Some(PreAst::Keyword(Keyword::Stmt(kw))) = current else {
        return None;
    };
    match kw {
        StmtKeyword::Let | StmtKeyword::Return | StmtKeyword::Assert => {
            let Some((idx1, PreAst::Ast(ast))) = first(right2) else {
                return None;
            };
            if let Some((_, snd)) = second(right2) {
                match snd {
                    PreAst::Keyword(_) => (),
                    // the inner value may still grow
                    PreAst::Opr(_) | PreAst::LeftDelimiter(_) => return None,
                    PreAst::RightDelimiter(_) => (),
                    PreAst::Ast(_) => return None,
                    PreAst::Separator(separator) => match separator {
                        Separator::Comma => return None,
                        Separator::Semicolon => (),
                    },
                }
            }
            match kw {
                StmtKeyword::Let => {
                    let (pattern, initial_value) = match ast {
                        AstData::Binary {
                            lopd,
                            opr: BinaryOpr::Assign,
                            ropd,
                            ..
                        } => (lopd, Some(ropd)),
                        AstData::Ident(_)
                        | AstData::Prefix { .. }
                        | AstData::Binary { .. }
                        | AstData::Delimited { .. }
                        | AstData::Call { .. } => (idx1, None),
                        _ => return None,
                    };
                    Some(AstData::LetInit { expr: idx1, pattern, initial_value })
                }
                StmtKeyword::Return => Some(AstData::Return { result: idx1 }),
                StmtKeyword::Assert => Some(AstData::Assert { condition: idx1 }),
                _ => unreachable!(),
            }
        }
        StmtKeyword::If => {
            let Some((condition, PreAst::Ast(_))) = first(right2) else {
                return None;
            };
            let Some((
                body,
                PreAst::Ast(AstData::Delimited {
                    left_delimiter: LeftDelimiter(Delimiter::Curly),
                    right_delimiter: RightDelimiter(Delimiter::Curly),
                    ..
                }),
            )) = second(right2)
            else {
                return None;
            };
            Some(AstData::If { condition, body })
        }
        StmtKeyword::Else => {
            let Some((if_stmt, PreAst::Ast(AstData::If { .. }))) = first(left2) else {
                return None;
            };
            let Some((body, PreAst::Ast(body_ast))) = first(right2) else {
                return None;
            };
            match body_ast {
                AstData::Delimited {
                    left_delimiter: LeftDelimiter(Delimiter::Curly),
                    right_delimiter: RightDelimiter(Delimiter::Curly),
                    ..
                }
                | AstData::If { .. }
                | AstData::Else { .. } => (),
                _ => return None,
            }
            if let Some((_, PreAst::Keyword(Keyword::Stmt(StmtKeyword::Else)))) = second(right2) {
                return None;
            }
            Some(AstData::Else { if_stmt, body })
        }
    }
}

fn reduce_pre_asts_by_stmt(
    rt: &mut Runtime,
    pre_asts: &Seq<PreAst>,
    new_asts: &Seq<AstData>,
) -> (Seq<PreAst>, Seq<Idx>) {
    let new_left = rt.nearest_left(new_asts);
    let new_right = rt.nearest_right(new_asts);
    rt.map3_enumerated_unzip(
        "consume_stmt",
        &new_left,
        &new_right,
        pre_asts,
        |idx, left, right, pre| {
            if let Some((j, data)) = left {
                let consumed = match data {
                    AstData::LetInit { expr, .. } => expr == idx,
                    AstData::Return { result } => result == idx,
                    AstData::Assert { condition } => condition == idx,
                    AstData::If { condition, body } => condition == idx || body == idx,
                    AstData::Else { body, .. } => body == idx,
                    _ => false,
                };
                if consumed {
                    return (None, Some(j));
                }
            }
            if let Some((j, AstData::Else { if_stmt, .. })) = right {
                if if_stmt == idx {
                    return (None, Some(j));
                }
            }
            (pre, None)
        },
    )
}

// ---- definitions ----

fn reduce_by_defn(
    rt: &mut Runtime,
    pre_asts: Seq<PreAst>,
    asts: Seq<Ast>,
) -> (Seq<PreAst>, Seq<Ast>) {
    let right2 = rt.nearest_right2(&pre_asts);
    let new_asts = rt.map2("new_defn_ast", &pre_asts, &right2, new_defn_ast);
    let (pre_asts, new_parents) = reduce_pre_asts_by_defn(rt, &pre_asts, &new_asts);
    let asts = allocate_asts_and_update_parents(rt, &asts, &new_asts, &new_parents);
    let pre_asts = update_pre_asts_by_new_asts(rt, &pre_asts, &new_asts);
    (pre_asts, asts)
}

fn new_defn_ast(
    current: Option<PreAst>,
    right2: Option<Option2<(Idx, PreAst)>>,
) -> Option<AstData> {
    let Some(PreAst::Keyword(Keyword::Defn(keyword))) = current else {
        return None;
    };
    let Some((ident_idx, PreAst::Ast(AstData::Ident(ident)))) = first(right2) else {
        return None;
    };
    let Some((content, PreAst::Ast(content_ast))) = second(right2) else {
        return None;
    };
    match keyword {
        DefnKeyword::Struct | DefnKeyword::Enum => match content_ast {
            AstData::Delimited { .. } => (),
            _ => return None,
        },
        DefnKeyword::Fn => match content_ast {
            AstData::Call { .. } => (),
            _ => return None,
        },
    }
    Some(AstData::Defn { keyword, ident_idx, ident, content })
}

fn reduce_pre_asts_by_defn(
    rt: &mut Runtime,
    pre_asts: &Seq<PreAst>,
    new_asts: &Seq<AstData>,
) -> (Seq<PreAst>, Seq<Idx>) {
    let new_left = rt.nearest_left(new_asts);
    rt.map2_enumerated_unzip("consume_defn", &new_left, pre_asts, |idx, left, pre| {
        if let Some((j, AstData::Defn { ident_idx, content, .. })) = left {
            if ident_idx == idx || content == idx {
                return (None, Some(j));
            }
        }
        (pre, None)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{classify, parse_to_asts, roots, ParseStatus};
    use crate::token::tokenize;

    fn setup(src: &str) -> (Runtime, Config, TokenSeq) {
        let cfg = Config::default();
        let tokens = tokenize(src).unwrap();
        let rt = Runtime::new(tokens.len(), &cfg);
        (rt, cfg, tokens)
    }

    fn binary_at(asts: &Seq<Ast>, p: Idx) -> Option<(Idx, BinaryOpr, Idx)> {
        match asts.get(p)?.data {
            AstData::Binary { lopd, opr, ropd, .. } => Some((lopd, opr, ropd)),
            _ => None,
        }
    }

    #[test]
    fn init_promotes_atoms() {
        let (mut rt, _cfg, tokens) = setup("1 + 2");
        let (pre_asts, asts) = init_pre_asts(&mut rt, &tokens);
        assert!(matches!(pre_asts.get(0), Some(PreAst::Ast(AstData::Literal(_)))));
        assert!(matches!(pre_asts.get(1), Some(PreAst::Opr(_))));
        assert!(asts.get(0).is_some());
        assert!(asts.get(1).is_none());
        assert!(asts.get(2).is_some());
    }

    #[test]
    fn init_keyword_has_no_node() {
        let (mut rt, _cfg, tokens) = setup("fn");
        let (pre_asts, asts) = init_pre_asts(&mut rt, &tokens);
        assert!(matches!(pre_asts.get(0), Some(PreAst::Keyword(_))));
        assert!(asts.get(0).is_none());
    }

    #[test]
    fn init_empty_input() {
        let (mut rt, _cfg, tokens) = setup("");
        let (pre_asts, asts) = init_pre_asts(&mut rt, &tokens);
        assert_eq!(pre_asts.len(), 0);
        assert_eq!(asts.len(), 0);
    }

    #[test]
    fn precedence_defers_lower_operator() {
        // round 1 builds only 2 * 3; + waits for the tighter right operator
        let (mut rt, cfg, tokens) = setup("1 + 2 * 3");
        let (pre_asts, asts) = init_pre_asts(&mut rt, &tokens);
        let (pre_asts, asts) = reduce(&mut rt, &cfg, pre_asts, asts);
        assert_eq!(binary_at(&asts, 3), Some((2, BinaryOpr::Mul, 4)));
        assert!(binary_at(&asts, 1).is_none());
        let (_pre_asts, asts) = reduce(&mut rt, &cfg, pre_asts, asts);
        assert_eq!(binary_at(&asts, 1), Some((0, BinaryOpr::Add, 3)));
        assert_eq!(asts.get(3).unwrap().parent, Some(1));
    }

    #[test]
    fn suffix_binds_before_prefix() {
        let (mut rt, cfg, tokens) = setup("- x ++");
        let (pre_asts, asts) = init_pre_asts(&mut rt, &tokens);
        let (pre_asts, asts) = reduce(&mut rt, &cfg, pre_asts, asts);
        assert!(matches!(asts.get(2).unwrap().data, AstData::Suffix { opd: 1, .. }));
        assert!(asts.get(0).is_none());
        let (_p, asts) = reduce(&mut rt, &cfg, pre_asts, asts);
        assert!(matches!(asts.get(0).unwrap().data, AstData::Prefix { opd: 2, .. }));
    }

    #[test]
    fn let_with_initializer_extracts_pattern() {
        let (mut rt, cfg, tokens) = setup("let x = 1 ;");
        let outcome = parse_to_asts(&mut rt, &cfg, &tokens, 8);
        assert!(outcome.status.is_complete());
        match outcome.asts.get(0).unwrap().data {
            AstData::LetInit { expr, pattern, initial_value } => {
                assert_eq!(expr, 2);
                assert_eq!(pattern, 1);
                assert_eq!(initial_value, Some(3));
            }
            other => panic!("expected let-init, got {other:?}"),
        }
        // the trailing separator wraps the statement
        assert!(matches!(
            outcome.asts.get(4).unwrap().data,
            AstData::SeparatedItem { content: Some(0), .. }
        ));
    }

    #[test]
    fn reduce_zero_times_is_identity() {
        let (mut rt, cfg, tokens) = setup("let x = 1 ;");
        let (pre_asts, asts) = init_pre_asts(&mut rt, &tokens);
        let (p2, a2) = reduce_n_times(&mut rt, &cfg, pre_asts.clone(), asts.clone(), 0);
        assert_eq!(p2, pre_asts);
        assert_eq!(a2, asts);
    }

    #[test]
    fn unmatched_delimiter_reports_stuck() {
        let (mut rt, cfg, tokens) = setup("( 1 + 2");
        let outcome = parse_to_asts(&mut rt, &cfg, &tokens, 16);
        assert_eq!(outcome.status, ParseStatus::Stuck(vec![0]));
    }

    #[test]
    fn empty_input_is_complete() {
        let (mut rt, cfg, tokens) = setup("");
        let outcome = parse_to_asts(&mut rt, &cfg, &tokens, 16);
        assert!(outcome.status.is_complete());
        assert!(roots(&outcome.pre_asts, &outcome.asts).is_empty());
    }

    #[test]
    fn fn_defn_forms_call_shape() {
        let (mut rt, cfg, tokens) = setup("fn f ( ) { }");
        let outcome = parse_to_asts(&mut rt, &cfg, &tokens, 8);
        assert!(outcome.status.is_complete());
        let root_list = roots(&outcome.pre_asts, &outcome.asts);
        assert_eq!(root_list, vec![0]);
        let AstData::Defn { keyword: DefnKeyword::Fn, ident_idx, content, .. } =
            outcome.asts.get(0).unwrap().data
        else {
            panic!("expected fn defn at position 0");
        };
        assert_eq!(ident_idx, 1);
        // content is the call form on the body group at the `{` position
        match outcome.asts.get(content).unwrap().data {
            AstData::Call { caller, delimited_arguments, .. } => {
                assert_eq!(caller, 3);
                assert_eq!(delimited_arguments, 5);
            }
            other => panic!("expected call form, got {other:?}"),
        }
    }

    #[test]
    fn struct_defn_takes_delimited_content() {
        let (mut rt, cfg, tokens) = setup("struct Dog { weight : f32 }");
        let outcome = parse_to_asts(&mut rt, &cfg, &tokens, 8);
        assert!(outcome.status.is_complete());
        let AstData::Defn { keyword: DefnKeyword::Struct, content, .. } =
            outcome.asts.get(0).unwrap().data
        else {
            panic!("expected struct defn");
        };
        assert!(matches!(outcome.asts.get(content).unwrap().data, AstData::Delimited { .. }));
        assert_eq!(binary_at(&outcome.asts, 4).map(|(l, _, r)| (l, r)), Some((3, 5)));
    }

    #[test]
    fn fn_with_return_type_completes() {
        let src = "fn see_vet ( dog : Dog ) -> f32 { assert dog . weight < 100 ; \
                   let fee = dog . weight * 10.0 ; fee += 100.0 ; return fee }";
        let (mut rt, cfg, tokens) = setup(src);
        let outcome = parse_to_asts(&mut rt, &cfg, &tokens, 16);
        assert!(outcome.status.is_complete(), "status: {:?}", outcome.status);
        let root_list = roots(&outcome.pre_asts, &outcome.asts);
        assert_eq!(root_list.len(), 1);
        assert!(matches!(
            outcome.asts.get(0).unwrap().data,
            AstData::Defn { keyword: DefnKeyword::Fn, .. }
        ));
    }

    #[test]
    fn if_else_chains_reduce() {
        let (mut rt, cfg, tokens) = setup("fn f ( ) { if a { } else { } }");
        let outcome = parse_to_asts(&mut rt, &cfg, &tokens, 16);
        assert!(outcome.status.is_complete(), "status: {:?}", outcome.status);
        let else_pos = (0..tokens.len())
            .find(|&p| matches!(outcome.asts.get(p), Some(Ast { data: AstData::Else { .. }, .. })))
            .expect("else node");
        let AstData::Else { if_stmt, .. } = outcome.asts.get(else_pos).unwrap().data else {
            unreachable!()
        };
        assert!(matches!(outcome.asts.get(if_stmt).unwrap().data, AstData::If { .. }));
    }

    #[test]
    fn completion_is_a_fixpoint() {
        let src = "fn f ( ) { let a = 1 ; let b = a + 2 ; }";
        let (mut rt, cfg, tokens) = setup(src);
        let outcome = parse_to_asts(&mut rt, &cfg, &tokens, 16);
        assert!(outcome.status.is_complete());
        let (p2, a2) = reduce_n_times(
            &mut rt,
            &cfg,
            outcome.pre_asts.clone(),
            outcome.asts.clone(),
            2,
        );
        assert_eq!(p2, outcome.pre_asts);
        assert_eq!(a2, outcome.asts);
        assert!(classify(&p2).is_complete());
    }
}
