//! Bit-width model for local values.
//!
//! Widths feed the cost ledger: a nullable slot costs the payload width plus
//! one presence flag, a sum type costs its tag plus the widest variant, a
//! product costs the sum of its fields. Position indices and interned handles
//! cost `idx_bits = ceil(log2 L)`, which is what makes the reported widths an
//! exact affine function of `ceil(log2 L)`.

/// Parameters the width of a local type may depend on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WidthParams {
    /// `ceil(log2 L)` for the current unit (at least 1).
    pub idx_bits: u32,
    /// Configured scope vector capacity.
    pub scope_slots: u32,
}

pub fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// Tag width of a sum type with `n` variants.
pub fn tag_bits(n: usize) -> u32 {
    ceil_log2(n)
}

/// A local (per-token) value with a declared encoding width.
pub trait Local: Copy {
    fn width_bits(p: &WidthParams) -> u32;
}

impl Local for () {
    fn width_bits(_: &WidthParams) -> u32 {
        0
    }
}

impl Local for bool {
    fn width_bits(_: &WidthParams) -> u32 {
        1
    }
}

/// Position index / count in `[0, L)`.
impl Local for usize {
    fn width_bits(p: &WidthParams) -> u32 {
        p.idx_bits
    }
}

impl<T: Local> Local for Option<T> {
    fn width_bits(p: &WidthParams) -> u32 {
        1 + T::width_bits(p)
    }
}

impl<T: Local> Local for super::Option2<T> {
    fn width_bits(p: &WidthParams) -> u32 {
        T::width_bits(p) + 1 + T::width_bits(p)
    }
}

impl<A: Local, B: Local> Local for (A, B) {
    fn width_bits(p: &WidthParams) -> u32 {
        A::width_bits(p) + B::width_bits(p)
    }
}

impl<A: Local, B: Local, C: Local> Local for (A, B, C) {
    fn width_bits(p: &WidthParams) -> u32 {
        A::width_bits(p) + B::width_bits(p) + C::width_bits(p)
    }
}

impl Local for char {
    fn width_bits(_: &WidthParams) -> u32 {
        8
    }
}

impl Local for u32 {
    fn width_bits(p: &WidthParams) -> u32 {
        p.idx_bits
    }
}
