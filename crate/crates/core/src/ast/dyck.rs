//! Matched-pair erasure over delimiter-only sequences.

use super::PreAst;
use crate::seq::{Runtime, Seq};

/// One erasure step: a left delimiter vanishes iff its nearest non-null
/// right neighbor is the matching right delimiter, and symmetrically for
/// right delimiters. Intended for sequences holding only delimiter classes;
/// other values pass through unchanged.
pub fn dyck_step(rt: &mut Runtime, pre_asts: &Seq<PreAst>) -> Seq<PreAst> {
    let nearest_left = rt.nearest_left(pre_asts);
    let nearest_right = rt.nearest_right(pre_asts);
    rt.map3(
        "dyck_step",
        &nearest_left,
        pre_asts,
        &nearest_right,
        |left, cur, right| match cur? {
            PreAst::LeftDelimiter(ld) => match right {
                Some((_, PreAst::RightDelimiter(rd))) if rd.0 == ld.0 => None,
                _ => cur,
            },
            PreAst::RightDelimiter(rd) => match left {
                Some((_, PreAst::LeftDelimiter(ld))) if ld.0 == rd.0 => None,
                _ => cur,
            },
            _ => cur,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::token::{Delimiter, LeftDelimiter, RightDelimiter};

    fn delims(src: &str) -> Seq<PreAst> {
        let items = src
            .chars()
            .map(|c| {
                Some(match c {
                    '(' => PreAst::LeftDelimiter(LeftDelimiter(Delimiter::Parenthesis)),
                    ')' => PreAst::RightDelimiter(RightDelimiter(Delimiter::Parenthesis)),
                    '[' => PreAst::LeftDelimiter(LeftDelimiter(Delimiter::Bracket)),
                    ']' => PreAst::RightDelimiter(RightDelimiter(Delimiter::Bracket)),
                    '{' => PreAst::LeftDelimiter(LeftDelimiter(Delimiter::Curly)),
                    '}' => PreAst::RightDelimiter(RightDelimiter(Delimiter::Curly)),
                    _ => panic!("not a delimiter: {c}"),
                })
            })
            .collect();
        Seq::from_options(items)
    }

    #[test]
    fn matched_pair_erases_in_one_step() {
        let mut rt = Runtime::new(2, &Config::default());
        let out = dyck_step(&mut rt, &delims("()"));
        assert_eq!(out.count_some(), 0);
    }

    #[test]
    fn inner_pair_erases_outer_survives() {
        // hand-simulation: the unmatched outer "(" sees a left paren to its
        // right, so only the inner pair goes
        let mut rt = Runtime::new(3, &Config::default());
        let out = dyck_step(&mut rt, &delims("(()"));
        assert!(matches!(out.get(0), Some(PreAst::LeftDelimiter(_))));
        assert_eq!(out.get(1), None);
        assert_eq!(out.get(2), None);
    }

    #[test]
    fn mismatched_kinds_do_not_erase() {
        let mut rt = Runtime::new(2, &Config::default());
        let out = dyck_step(&mut rt, &delims("(]"));
        assert_eq!(out.count_some(), 2);
    }

    #[test]
    fn nesting_depth_k_takes_k_steps() {
        for depth in 1..=6usize {
            let src: String = "(".repeat(depth) + &")".repeat(depth);
            let mut rt = Runtime::new(src.len(), &Config::default());
            let mut s = delims(&src);
            for step in 0..depth {
                assert!(s.count_some() > 0, "emptied early at step {step}");
                s = dyck_step(&mut rt, &s);
            }
            assert_eq!(s.count_some(), 0, "depth {depth} should empty in {depth} steps");
        }
    }
}
