//! Shared configuration for the combinator pipeline and the reference compiler.
//!
//! Both sides read the same `Config` instance so that a differential failure
//! points at an algorithmic divergence rather than config skew.

use crate::token::{BinaryOpr, PrefixOpr, SuffixOpr};
use sha2::{Digest, Sha256};
use std::fmt;

/// Hard upper bound on scope nesting the `Scope` value can store.
/// `Config::scope_capacity` may be anything up to this.
pub const SCOPE_SLOTS_MAX: usize = 16;

/// Operator precedence table. Higher binds tighter; all binary operators are
/// left-associative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecedenceTable {
    pub dot: u8,
    pub suffix: u8,
    pub prefix: u8,
    pub mul_div: u8,
    pub add_sub: u8,
    pub compare: u8,
    pub arrow: u8,
    pub type_is: u8,
    pub assign: u8,
}

impl Default for PrecedenceTable {
    fn default() -> Self {
        PrecedenceTable {
            dot: 100,
            suffix: 90,
            prefix: 80,
            mul_div: 70,
            add_sub: 60,
            compare: 50,
            arrow: 30,
            type_is: 20,
            assign: 10,
        }
    }
}

impl PrecedenceTable {
    pub fn prefix(&self, _opr: PrefixOpr) -> u8 {
        self.prefix
    }

    pub fn binary(&self, opr: BinaryOpr) -> u8 {
        use BinaryOpr::*;
        match opr {
            Dot => self.dot,
            Mul | Div => self.mul_div,
            Add | Sub => self.add_sub,
            Eq | Lt | Gt => self.compare,
            LightArrow => self.arrow,
            TypeIs => self.type_is,
            Assign | AddAssign => self.assign,
        }
    }

    pub fn suffix(&self, _opr: SuffixOpr) -> u8 {
        self.suffix
    }
}

/// Spellings used to type literal tokens. `true`/`false` lex as identifiers,
/// so the bool entries are spellings too.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuiltinTypes {
    pub int_ty: String,
    pub float_ty: String,
    pub bool_ty: String,
    pub unit_ty: String,
}

impl Default for BuiltinTypes {
    fn default() -> Self {
        BuiltinTypes {
            int_ty: "Int".into(),
            float_ty: "Float".into(),
            bool_ty: "Bool".into(),
            unit_ty: "unit".into(),
        }
    }
}

impl BuiltinTypes {
    /// Preset for sources written with machine-word type names (`i32`/`f32`).
    pub fn i32_mode() -> Self {
        BuiltinTypes {
            int_ty: "i32".into(),
            float_ty: "f32".into(),
            ..Default::default()
        }
    }
}

/// Per-combinator layer charges. These are configuration so the asymptotic
/// accounting stays auditable instead of being buried in call sites.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerCosts {
    /// Position-wise map (one boolean/equality composite in a ResMLP).
    pub map_layers: u32,
    /// Nearest non-null neighbor on one side.
    pub nearest_layers: u32,
    /// Nearest two: two nearest passes plus a pack step.
    pub nearest2_layers: u32,
    /// Filtered argmax attention retrieval.
    pub attend_layers: u32,
    /// Position-indexed gather.
    pub gather_layers: u32,
    /// Count of matching past positions.
    pub count_layers: u32,
}

impl Default for LedgerCosts {
    fn default() -> Self {
        LedgerCosts {
            map_layers: 2,
            nearest_layers: 1,
            nearest2_layers: 3,
            attend_layers: 1,
            gather_layers: 1,
            count_layers: 1,
        }
    }
}

/// One configuration object shared by every stage.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    /// Maximum bottom-up reduction rounds (bounds representable AST depth).
    pub max_ast_rounds: usize,
    /// Type-inference rounds (bounds inference chain depth).
    pub inference_rounds: usize,
    /// Scope vector capacity (maximum curly-block nesting).
    pub scope_capacity: usize,
    /// When true, only call-argument mismatches are reported; the
    /// annotated-let check is disabled.
    pub strict_call_args_only: bool,
    pub precedence: PrecedenceTable,
    pub builtins: BuiltinTypes,
    pub ledger: LedgerCosts,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_ast_rounds: 16,
            inference_rounds: 8,
            scope_capacity: 8,
            strict_call_args_only: false,
            precedence: PrecedenceTable::default(),
            builtins: BuiltinTypes::default(),
            ledger: LedgerCosts::default(),
        }
    }
}

#[derive(Debug)]
pub enum ConfigError {
    UnknownKey(String),
    BadValue { key: String, value: String },
    MalformedLine(usize),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::UnknownKey(k) => write!(f, "unknown config key `{k}`"),
            ConfigError::BadValue { key, value } => {
                write!(f, "bad value `{value}` for config key `{key}`")
            }
            ConfigError::MalformedLine(n) => write!(f, "malformed config line {n}"),
        }
    }
}

impl std::error::Error for ConfigError {}

impl Config {
    /// Parses the flat `key = value` config format. Lines starting with `#`
    /// and blank lines are ignored. Unknown keys are errors.
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let mut cfg = Config::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::MalformedLine(lineno + 1));
            };
            let (key, value) = (key.trim(), value.trim());
            let bad = || ConfigError::BadValue {
                key: key.into(),
                value: value.into(),
            };
            let set_u8 = |slot: &mut u8| value.parse::<u8>().map(|v| *slot = v).map_err(|_| bad());
            match key {
                "max_ast_rounds" => cfg.max_ast_rounds = value.parse().map_err(|_| bad())?,
                "inference_rounds" => cfg.inference_rounds = value.parse().map_err(|_| bad())?,
                "scope_capacity" => {
                    let v: usize = value.parse().map_err(|_| bad())?;
                    if v == 0 || v > SCOPE_SLOTS_MAX {
                        return Err(bad());
                    }
                    cfg.scope_capacity = v;
                }
                "strict_call_args_only" => {
                    cfg.strict_call_args_only = value.parse().map_err(|_| bad())?
                }
                "precedence.dot" => set_u8(&mut cfg.precedence.dot)?,
                "precedence.suffix" => set_u8(&mut cfg.precedence.suffix)?,
                "precedence.prefix" => set_u8(&mut cfg.precedence.prefix)?,
                "precedence.mul_div" => set_u8(&mut cfg.precedence.mul_div)?,
                "precedence.add_sub" => set_u8(&mut cfg.precedence.add_sub)?,
                "precedence.compare" => set_u8(&mut cfg.precedence.compare)?,
                "precedence.arrow" => set_u8(&mut cfg.precedence.arrow)?,
                "precedence.type_is" => set_u8(&mut cfg.precedence.type_is)?,
                "precedence.assign" => set_u8(&mut cfg.precedence.assign)?,
                "builtin.int" => cfg.builtins.int_ty = value.into(),
                "builtin.float" => cfg.builtins.float_ty = value.into(),
                "builtin.bool" => cfg.builtins.bool_ty = value.into(),
                "builtin.unit" => cfg.builtins.unit_ty = value.into(),
                "ledger.map_layers" => cfg.ledger.map_layers = value.parse().map_err(|_| bad())?,
                "ledger.nearest_layers" => {
                    cfg.ledger.nearest_layers = value.parse().map_err(|_| bad())?
                }
                "ledger.nearest2_layers" => {
                    cfg.ledger.nearest2_layers = value.parse().map_err(|_| bad())?
                }
                "ledger.attend_layers" => {
                    cfg.ledger.attend_layers = value.parse().map_err(|_| bad())?
                }
                "ledger.gather_layers" => {
                    cfg.ledger.gather_layers = value.parse().map_err(|_| bad())?
                }
                "ledger.count_layers" => {
                    cfg.ledger.count_layers = value.parse().map_err(|_| bad())?
                }
                _ => return Err(ConfigError::UnknownKey(key.into())),
            }
        }
        Ok(cfg)
    }

    /// Canonical textual form; also the input of `hash()`.
    pub fn canonical_text(&self) -> String {
        let p = &self.precedence;
        let b = &self.builtins;
        let l = &self.ledger;
        format!(
            "max_ast_rounds = {}\ninference_rounds = {}\nscope_capacity = {}\n\
             strict_call_args_only = {}\n\
             precedence.dot = {}\nprecedence.suffix = {}\nprecedence.prefix = {}\n\
             precedence.mul_div = {}\nprecedence.add_sub = {}\nprecedence.compare = {}\n\
             precedence.arrow = {}\nprecedence.type_is = {}\nprecedence.assign = {}\n\
             builtin.int = {}\nbuiltin.float = {}\nbuiltin.bool = {}\nbuiltin.unit = {}\n\
             ledger.map_layers = {}\nledger.nearest_layers = {}\nledger.nearest2_layers = {}\n\
             ledger.attend_layers = {}\nledger.gather_layers = {}\nledger.count_layers = {}\n",
            self.max_ast_rounds,
            self.inference_rounds,
            self.scope_capacity,
            self.strict_call_args_only,
            p.dot,
            p.suffix,
            p.prefix,
            p.mul_div,
            p.add_sub,
            p.compare,
            p.arrow,
            p.type_is,
            p.assign,
            b.int_ty,
            b.float_ty,
            b.bool_ty,
            b.unit_ty,
            l.map_layers,
            l.nearest_layers,
            l.nearest2_layers,
            l.attend_layers,
            l.gather_layers,
            l.count_layers,
        )
    }

    /// Hex digest of the effective configuration, for run provenance.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_text().as_bytes());
        let mut out = String::with_capacity(16);
        for byte in &digest[..8] {
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trips_canonical_text() {
        let cfg = Config::default();
        let reparsed = Config::parse(&cfg.canonical_text()).unwrap();
        assert_eq!(cfg, reparsed);
    }

    #[test]
    fn parse_rejects_unknown_key() {
        assert!(matches!(
            Config::parse("no_such_key = 1"),
            Err(ConfigError::UnknownKey(_))
        ));
    }

    #[test]
    fn parse_rejects_oversized_scope_capacity() {
        assert!(Config::parse("scope_capacity = 99").is_err());
    }

    #[test]
    fn hash_tracks_content() {
        let a = Config::default();
        let mut b = Config::default();
        b.max_ast_rounds = 17;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash(), Config::default().hash());
    }
}
