//! Length-preserving sequence combinators with hard-attention semantics.
//!
//! Every value the pipeline computes is a length-L sequence of nullable
//! per-token facts. Combinators never change the length and never mutate
//! their inputs; each call charges the cost ledger with the layers, heads and
//! width a transformer realization of that step would need.

mod ledger;
mod rt;
mod width;

pub use ledger::{CostLedger, LedgerEntry};
pub use rt::Runtime;
pub use width::{ceil_log2, tag_bits, Local, WidthParams};

/// Position index into a compilation unit's token sequence.
pub type Idx = usize;

/// A length-L sequence of nullable local values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seq<T> {
    items: Vec<Option<T>>,
}

impl<T: Copy> Seq<T> {
    pub fn from_options(items: Vec<Option<T>>) -> Self {
        Seq { items }
    }

    pub fn all_none(len: usize) -> Self {
        Seq { items: vec![None; len] }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn get(&self, p: Idx) -> Option<T> {
        self.items.get(p).copied().flatten()
    }

    pub fn items(&self) -> &[Option<T>] {
        &self.items
    }

    pub fn iter(&self) -> impl Iterator<Item = Option<T>> + '_ {
        self.items.iter().copied()
    }

    /// Number of non-null positions.
    pub fn count_some(&self) -> usize {
        self.items.iter().filter(|x| x.is_some()).count()
    }
}

/// Up to two values, nearest first. The second slot may be empty when only
/// one neighbor exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Option2<T> {
    pub first: T,
    pub second: Option<T>,
}

impl<T: Copy> Option2<T> {
    pub fn first(&self) -> T {
        self.first
    }

    pub fn second(&self) -> Option<T> {
        self.second
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;

    fn rt(len: usize) -> Runtime {
        Runtime::new(len, &Config::default())
    }

    #[test]
    fn map_identity_preserves_nulls() {
        let mut rt = rt(3);
        let s = Seq::from_options(vec![Some(1u32), None, Some(3)]);
        let out = rt.map("id", &s, |x| x);
        assert_eq!(out.items(), s.items());
    }

    #[test]
    fn map2_boolean_and() {
        let mut rt = rt(2);
        let a = Seq::from_options(vec![Some(true), Some(false)]);
        let b = Seq::from_options(vec![Some(true), Some(true)]);
        let out = rt.map2("and", &a, &b, |x, y| Some(x? && y?));
        assert_eq!(out.items(), &[Some(true), Some(false)]);
    }

    #[test]
    fn map_enumerated_yields_positions() {
        let mut rt = rt(3);
        let s = Seq::from_options(vec![Some(()), Some(()), Some(())]);
        let out = rt.map_enumerated("pos", &s, |p, _| Some(p));
        assert_eq!(out.items(), &[Some(0), Some(1), Some(2)]);
    }

    #[test]
    #[should_panic(expected = "length mismatch")]
    fn map2_rejects_length_mismatch() {
        let mut rt = rt(2);
        let a: Seq<bool> = Seq::all_none(2);
        let b: Seq<bool> = Seq::all_none(3);
        let _ = rt.map2("bad", &a, &b, |x, _| x);
    }

    #[test]
    fn nearest_left_strictly_excludes_self() {
        let mut rt = rt(5);
        let s = Seq::from_options(vec![None, Some('a'), None, Some('b'), None]);
        let out = rt.nearest_left(&s);
        assert_eq!(
            out.items(),
            &[None, None, Some((1, 'a')), Some((1, 'a')), Some((3, 'b'))]
        );
    }

    #[test]
    fn nearest_left_all_null() {
        let mut rt = rt(4);
        let s: Seq<char> = Seq::all_none(4);
        assert_eq!(rt.nearest_left(&s).count_some(), 0);
    }

    #[test]
    fn nearest_right_two_elements() {
        let mut rt = rt(2);
        let s = Seq::from_options(vec![Some('a'), Some('b')]);
        let out = rt.nearest_right(&s);
        assert_eq!(out.items(), &[Some((1, 'b')), None]);
    }

    #[test]
    fn nearest_left2_orders_nearest_first() {
        let mut rt = rt(4);
        let s = Seq::from_options(vec![Some('a'), Some('b'), None, Some('c')]);
        let out = rt.nearest_left2(&s);
        let at3 = out.get(3).unwrap();
        assert_eq!(at3.first(), (1, 'b'));
        assert_eq!(at3.second(), Some((0, 'a')));
        let at1 = out.get(1).unwrap();
        assert_eq!(at1.first(), (0, 'a'));
        assert_eq!(at1.second(), None);
    }

    #[test]
    fn nearest2_singleton_is_null_everywhere() {
        let mut rt = rt(1);
        let s = Seq::from_options(vec![Some('x')]);
        assert_eq!(rt.nearest_left2(&s).count_some(), 0);
        assert_eq!(rt.nearest_right2(&s).count_some(), 0);
    }

    #[test]
    fn count_past_constant_predicates() {
        let mut rt = rt(4);
        let s = Seq::from_options(vec![Some(0u32); 4]);
        let t = s.clone();
        let always = rt.count_past_by_attention("t", &s, &t, |_, _| true);
        assert_eq!(always.items(), &[Some(0), Some(1), Some(2), Some(3)]);
        let never = rt.count_past_by_attention("f", &s, &t, |_, _| false);
        assert_eq!(never.items(), &[Some(0); 4]);
    }

    #[test]
    fn attend_filtered_false_predicate_is_null() {
        let mut rt = rt(3);
        let v = Seq::from_options(vec![Some(1u32), Some(2), Some(3)]);
        let out = rt.attend_filtered("none", &v, &v, &v, |_, _| false, |_, _, _| 0u32);
        assert_eq!(out.count_some(), 0);
    }

    #[test]
    fn attend_filtered_unique_key_ignores_score() {
        let mut rt = rt(3);
        let values = Seq::from_options(vec![Some(10u32), Some(20), Some(30)]);
        let keys = Seq::from_options(vec![Some(1u32), Some(2), Some(3)]);
        let queries = Seq::from_options(vec![Some(2u32); 3]);
        let out = rt.attend_filtered(
            "lookup",
            &values,
            &queries,
            &keys,
            |q, k| q == k,
            |_, _, _| 0u32,
        );
        assert_eq!(out.items(), &[Some(20); 3]);
    }

    #[test]
    fn attend_filtered_ties_break_to_smallest_index() {
        let mut rt = rt(3);
        let values = Seq::from_options(vec![Some('a'), Some('b'), Some('c')]);
        let ones = Seq::from_options(vec![Some(1u32); 3]);
        let out = rt.attend_filtered("tie", &values, &ones, &ones, |_, _| true, |_, _, _| 7u32);
        assert_eq!(out.items(), &[Some('a'); 3]);
    }

    #[test]
    fn gather_by_index() {
        let mut rt = rt(3);
        let s = Seq::from_options(vec![Some('a'), Some('b'), Some('c')]);
        let idxs = Seq::from_options(vec![Some(2usize), None, Some(0)]);
        let out = rt.gather("g", &s, &idxs);
        assert_eq!(out.items(), &[Some('c'), None, Some('a')]);
    }

    #[test]
    fn gather_identity() {
        let mut rt = rt(3);
        let s = Seq::from_options(vec![Some('a'), None, Some('c')]);
        let idxs = Seq::from_options(vec![Some(0usize), Some(1), Some(2)]);
        assert_eq!(rt.gather("g", &s, &idxs).items(), s.items());
    }

    #[test]
    #[should_panic(expected = "index out of range")]
    fn gather_rejects_out_of_range() {
        let mut rt = rt(2);
        let s = Seq::from_options(vec![Some('a'), Some('b')]);
        let idxs = Seq::from_options(vec![Some(5usize), None]);
        let _ = rt.gather("g", &s, &idxs);
    }

    #[test]
    fn ledger_layers_strictly_increase() {
        let mut rt = rt(3);
        let s: Seq<bool> = Seq::all_none(3);
        let before = rt.ledger().total_layers();
        let _ = rt.nearest_left(&s);
        let mid = rt.ledger().total_layers();
        let _ = rt.map("id", &s, |x| x);
        let after = rt.ledger().total_layers();
        assert!(before < mid && mid < after);
    }

    #[test]
    fn ledger_width_tracks_index_bits() {
        let small = {
            let mut rt = Runtime::new(64, &Config::default());
            let s: Seq<Idx> = Seq::all_none(64);
            let _ = rt.nearest_left(&s);
            rt.ledger().max_width_bits()
        };
        let large = {
            let mut rt = Runtime::new(4096, &Config::default());
            let s: Seq<Idx> = Seq::all_none(4096);
            let _ = rt.nearest_left(&s);
            rt.ledger().max_width_bits()
        };
        // ceil(log2 64) = 6, ceil(log2 4096) = 12; two Idx widths flow through
        assert_eq!(large - small, 2 * 6);
    }
}
