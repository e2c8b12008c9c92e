//! Transformer-cost ledger.
//!
//! Each combinator call appends one entry. Layers add up across calls; heads
//! and width are tracked as maxima, mirroring how sequential composition
//! stacks layers while the model dimension must fit the widest step.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerEntry {
    pub op: &'static str,
    pub layers: u32,
    pub heads: u32,
    pub width_bits: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CostLedger {
    entries: Vec<LedgerEntry>,
    total_layers: u64,
    max_heads: u32,
    max_width_bits: u32,
}

impl CostLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn charge(&mut self, op: &'static str, layers: u32, heads: u32, width_bits: u32) {
        self.total_layers += u64::from(layers);
        self.max_heads = self.max_heads.max(heads);
        self.max_width_bits = self.max_width_bits.max(width_bits);
        self.entries.push(LedgerEntry { op, layers, heads, width_bits });
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn total_layers(&self) -> u64 {
        self.total_layers
    }

    pub fn max_heads(&self) -> u32 {
        self.max_heads
    }

    pub fn max_width_bits(&self) -> u32 {
        self.max_width_bits
    }

    /// TSV rows: op, layers, heads, width_bits, cumulative layers.
    pub fn report_tsv(&self) -> String {
        let mut out = String::from("op\tlayers\theads\twidth_bits\tcum_layers\n");
        let mut cum = 0u64;
        for e in &self.entries {
            cum += u64::from(e.layers);
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                e.op, e.layers, e.heads, e.width_bits, cum
            ));
        }
        out.push_str(&format!(
            "TOTAL\t{}\t{}\t{}\t{}\n",
            self.total_layers, self.max_heads, self.max_width_bits, self.total_layers
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charges_accumulate() {
        let mut ledger = CostLedger::new();
        ledger.charge("a", 2, 0, 10);
        ledger.charge("b", 1, 1, 7);
        assert_eq!(ledger.total_layers(), 3);
        assert_eq!(ledger.max_heads(), 1);
        assert_eq!(ledger.max_width_bits(), 10);
        assert_eq!(ledger.entries().len(), 2);
    }

    #[test]
    fn report_ends_with_total() {
        let mut ledger = CostLedger::new();
        ledger.charge("x", 1, 1, 4);
        let report = ledger.report_tsv();
        assert!(report.starts_with("op\t"));
        assert!(report.trim_end().ends_with("TOTAL\t1\t1\t4\t1"));
    }
}
