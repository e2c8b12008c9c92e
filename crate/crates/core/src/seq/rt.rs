//! The combinator runtime: a ledger-charging evaluator for sequence ops.
//!
//! Pipelines over one compilation unit run single-threaded through one
//! `Runtime` so the ledger order is deterministic. All combinators are pure
//! functions of their inputs.

use super::ledger::CostLedger;
use super::width::{ceil_log2, Local, WidthParams};
use super::{Idx, Option2, Seq};
use crate::config::{Config, LedgerCosts};

pub struct Runtime {
    len: usize,
    params: WidthParams,
    costs: LedgerCosts,
    ledger: CostLedger,
}

impl Runtime {
    pub fn new(len: usize, cfg: &Config) -> Self {
        Runtime {
            len,
            params: WidthParams {
                idx_bits: ceil_log2(len.max(2)),
                scope_slots: cfg.scope_capacity as u32,
            },
            costs: cfg.ledger.clone(),
            ledger: CostLedger::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn width_params(&self) -> &WidthParams {
        &self.params
    }

    pub fn ledger(&self) -> &CostLedger {
        &self.ledger
    }

    pub fn into_ledger(self) -> CostLedger {
        self.ledger
    }

    fn check_len<T: Copy>(&self, s: &Seq<T>) {
        assert!(s.len() == self.len, "length mismatch: seq {} vs unit {}", s.len(), self.len);
    }

    fn slot<T: Local>(&self) -> u32 {
        1 + T::width_bits(&self.params)
    }
}

/// Generates a position-wise map over k sequences plus its enumerated
/// variant (which also receives the position).
macro_rules! map_fns {
    ($name:ident, $named:ident, $(($arg:ident, $T:ident)),+) => {
        impl Runtime {
            pub fn $name<$($T: Local,)+ O: Local>(
                &mut self,
                op: &'static str,
                $($arg: &Seq<$T>,)+
                f: impl Fn($(Option<$T>,)+) -> Option<O>,
            ) -> Seq<O> {
                $(self.check_len($arg);)+
                let width = 0 $(+ self.slot::<$T>())+;
                self.ledger.charge(op, self.costs.map_layers, 0, width);
                let items = (0..self.len)
                    .map(|p| f($($arg.items[p],)+))
                    .collect();
                Seq { items }
            }

            pub fn $named<$($T: Local,)+ O: Local>(
                &mut self,
                op: &'static str,
                $($arg: &Seq<$T>,)+
                f: impl Fn(Idx, $(Option<$T>,)+) -> Option<O>,
            ) -> Seq<O> {
                $(self.check_len($arg);)+
                let width = self.params.idx_bits $(+ self.slot::<$T>())+;
                self.ledger.charge(op, self.costs.map_layers, 0, width);
                let items = (0..self.len)
                    .map(|p| f(p, $($arg.items[p],)+))
                    .collect();
                Seq { items }
            }
        }
    };
}

map_fns!(map, map_enumerated, (s1, T1));
map_fns!(map2, map2_enumerated, (s1, T1), (s2, T2));
map_fns!(map3, map3_enumerated, (s1, T1), (s2, T2), (s3, T3));
map_fns!(map4, map4_enumerated, (s1, T1), (s2, T2), (s3, T3), (s4, T4));
map_fns!(map5, map5_enumerated, (s1, T1), (s2, T2), (s3, T3), (s4, T4), (s5, T5));

/// Like the maps above but the local function produces two facts at once;
/// the pair is decoupled into two sequences. Charged as one map.
macro_rules! map_unzip_fns {
    ($named:ident, $(($arg:ident, $T:ident)),+) => {
        impl Runtime {
            pub fn $named<$($T: Local,)+ A: Local, B: Local>(
                &mut self,
                op: &'static str,
                $($arg: &Seq<$T>,)+
                f: impl Fn(Idx, $(Option<$T>,)+) -> (Option<A>, Option<B>),
            ) -> (Seq<A>, Seq<B>) {
                $(self.check_len($arg);)+
                let width = self.params.idx_bits $(+ self.slot::<$T>())+;
                self.ledger.charge(op, self.costs.map_layers, 0, width);
                let mut left = Vec::with_capacity(self.len);
                let mut right = Vec::with_capacity(self.len);
                for p in 0..self.len {
                    let (a, b) = f(p, $($arg.items[p],)+);
                    left.push(a);
                    right.push(b);
                }
                (Seq { items: left }, Seq { items: right })
            }
        }
    };
}

map_unzip_fns!(map_enumerated_unzip, (s1, T1));
map_unzip_fns!(map2_enumerated_unzip, (s1, T1), (s2, T2));
map_unzip_fns!(map3_enumerated_unzip, (s1, T1), (s2, T2), (s3, T3));
map_unzip_fns!(map4_enumerated_unzip, (s1, T1), (s2, T2), (s3, T3), (s4, T4));

impl Runtime {
    /// `Option::or` lifted over sequences: output keeps `a` where non-null,
    /// else takes `b`.
    pub fn or_else<T: Local>(&mut self, op: &'static str, a: &Seq<T>, b: &Seq<T>) -> Seq<T> {
        self.map2(op, a, b, |x, y| x.or(y))
    }

    /// For each position, the nearest strictly-left non-null value and its
    /// index. The position's own value is excluded.
    pub fn nearest_left<T: Local>(&mut self, s: &Seq<T>) -> Seq<(Idx, T)> {
        self.check_len(s);
        let width = T::width_bits(&self.params) + self.params.idx_bits + 1;
        self.ledger.charge("nearest_left", self.costs.nearest_layers, 1, width);
        let mut items = Vec::with_capacity(self.len);
        let mut last: Option<(Idx, T)> = None;
        for p in 0..self.len {
            items.push(last);
            if let Some(v) = s.items[p] {
                last = Some((p, v));
            }
        }
        Seq { items }
    }

    /// Mirror image of `nearest_left`.
    pub fn nearest_right<T: Local>(&mut self, s: &Seq<T>) -> Seq<(Idx, T)> {
        self.check_len(s);
        let width = T::width_bits(&self.params) + self.params.idx_bits + 1;
        self.ledger.charge("nearest_right", self.costs.nearest_layers, 1, width);
        let mut items = vec![None; self.len];
        let mut last: Option<(Idx, T)> = None;
        for p in (0..self.len).rev() {
            items[p] = last;
            if let Some(v) = s.items[p] {
                last = Some((p, v));
            }
        }
        Seq { items }
    }

    /// The two nearest strictly-left non-null values, nearest first.
    pub fn nearest_left2<T: Local>(&mut self, s: &Seq<T>) -> Seq<Option2<(Idx, T)>> {
        self.check_len(s);
        let width = 2 * (T::width_bits(&self.params) + self.params.idx_bits + 1);
        self.ledger.charge("nearest_left2", self.costs.nearest2_layers, 1, width);
        let mut items = Vec::with_capacity(self.len);
        let mut first: Option<(Idx, T)> = None;
        let mut second: Option<(Idx, T)> = None;
        for p in 0..self.len {
            items.push(first.map(|f| Option2 { first: f, second }));
            if let Some(v) = s.items[p] {
                second = first;
                first = Some((p, v));
            }
        }
        Seq { items }
    }

    /// The two nearest strictly-right non-null values, nearest first.
    pub fn nearest_right2<T: Local>(&mut self, s: &Seq<T>) -> Seq<Option2<(Idx, T)>> {
        self.check_len(s);
        let width = 2 * (T::width_bits(&self.params) + self.params.idx_bits + 1);
        self.ledger.charge("nearest_right2", self.costs.nearest2_layers, 1, width);
        let mut items = vec![None; self.len];
        let mut first: Option<(Idx, T)> = None;
        let mut second: Option<(Idx, T)> = None;
        for p in (0..self.len).rev() {
            items[p] = first.map(|f| Option2 { first: f, second });
            if let Some(v) = s.items[p] {
                second = first;
                first = Some((p, v));
            }
        }
        Seq { items }
    }

    /// `output[p] = |{ j < p : pred(s[p], t[j]) }|`. The count itself is
    /// always present.
    pub fn count_past_by_attention<A: Local, B: Local>(
        &mut self,
        op: &'static str,
        s: &Seq<A>,
        t: &Seq<B>,
        pred: impl Fn(Option<A>, Option<B>) -> bool,
    ) -> Seq<usize> {
        self.check_len(s);
        self.check_len(t);
        let width = self.slot::<A>() + self.slot::<B>() + self.params.idx_bits;
        self.ledger.charge(op, self.costs.count_layers, 1, width);
        let mut items = Vec::with_capacity(self.len);
        for p in 0..self.len {
            let mut count = 0usize;
            for j in 0..p {
                if pred(s.items[p], t.items[j]) {
                    count += 1;
                }
            }
            items.push(Some(count));
        }
        Seq { items }
    }

    /// Hard-attention retrieval: for each position p, among key positions j
    /// accepted by `pred(queries[p], keys[j])`, pick the j maximizing
    /// `score` (ties to the smallest j) and return `values[j]`.
    pub fn attend_filtered<V: Local, Q: Local, K: Local, S: Ord>(
        &mut self,
        op: &'static str,
        values: &Seq<V>,
        queries: &Seq<Q>,
        keys: &Seq<K>,
        pred: impl Fn(Option<Q>, Option<K>) -> bool,
        score: impl Fn(Option<Q>, Option<K>, Idx) -> S,
    ) -> Seq<V> {
        self.check_len(values);
        self.check_len(queries);
        self.check_len(keys);
        let width = self.slot::<Q>() + self.slot::<K>() + self.slot::<V>();
        self.ledger.charge(op, self.costs.attend_layers, 1, width);
        let mut items = Vec::with_capacity(self.len);
        for p in 0..self.len {
            let q = queries.items[p];
            let mut best: Option<(S, Idx)> = None;
            for j in 0..self.len {
                let k = keys.items[j];
                if !pred(q, k) {
                    continue;
                }
                let s = score(q, k, j);
                match &best {
                    Some((bs, _)) if *bs >= s => {}
                    _ => best = Some((s, j)),
                }
            }
            items.push(best.and_then(|(_, j)| values.items[j]));
        }
        Seq { items }
    }

    /// `output[p] = s[idxs[p]]`, null where the index is null.
    pub fn gather<T: Local>(&mut self, op: &'static str, s: &Seq<T>, idxs: &Seq<Idx>) -> Seq<T> {
        self.check_len(s);
        self.check_len(idxs);
        let width = self.slot::<T>() + self.slot::<Idx>();
        self.ledger.charge(op, self.costs.gather_layers, 1, width);
        let items = idxs
            .items
            .iter()
            .map(|idx| match idx {
                Some(j) => {
                    assert!(*j < self.len, "gather index out of range: {} >= {}", j, self.len);
                    s.items[*j]
                }
                None => None,
            })
            .collect();
        Seq { items }
    }
}
