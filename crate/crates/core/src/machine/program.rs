//! Programs and the bijection between programs and naturals.
//!
//! A program is a finite instruction list. Its raw code is a chain of
//! [`packed_pair`] cells, one per instruction, shifted by one so that 0
//! stays free for the empty program. Both layers are bijective, so every
//! natural is a program and every program has exactly one raw code; and
//! because the packed pairing is additive in the sizes of the parts, the
//! raw code is linear in the size of the program — specialization towers
//! (s-1-1 upon s-1-1) stay a few bits per layer instead of doubling.
//!
//! The *working* numbering used by `Call`/`Smn` additionally reserves the
//! first few indices for a fixed dictionary of template programs; see
//! [`super::dictionary`].

use super::instr::{packed_pair, packed_unpair, Instr};
use crate::nat::Nat;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Program {
    pub instrs: Vec<Instr>,
}

impl Program {
    pub fn new(instrs: Vec<Instr>) -> Program {
        Program { instrs }
    }

    pub fn empty() -> Program {
        Program { instrs: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.instrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instrs.is_empty()
    }

    /// Storage charged against budgets when this program is materialized:
    /// one unit per instruction plus the extra words of wide operands.
    pub fn weight(&self) -> u64 {
        self.instrs.iter().map(Instr::weight).sum()
    }
}

/// Raw program code, before the dictionary overlay: `0` for the empty
/// program, otherwise `packed_pair(head code, tail code) + 1`.
pub fn encode_raw(p: &Program) -> Nat {
    let mut code = Nat::zero();
    for instr in p.instrs.iter().rev() {
        code = packed_pair(&instr.code(), &code).succ();
    }
    code
}

/// Inverse of [`encode_raw`]. Total: every natural decodes to a program.
pub fn decode_raw(n: &Nat) -> Program {
    decode_raw_bounded(n, u64::MAX).expect("unbounded decode cannot be cut off")
}

/// Decode, giving up once the decoded instructions weigh more than
/// `max_words`. `None` never means the code is bad — every natural is a
/// program — only that this one is too wide to materialize under the given
/// budget. The evaluator uses this so that a handful of bits cannot demand
/// megabytes: a packed length field may claim up to 2^20 bits for an operand
/// the code itself never spells out.
pub fn decode_raw_bounded(n: &Nat, max_words: u64) -> Option<Program> {
    let mut instrs = Vec::new();
    let mut rest = n.clone();
    let mut spent: u64 = 0;
    while !rest.is_zero() {
        let (code, tail) = packed_unpair(&rest.pred());
        let instr = Instr::from_code(&code);
        spent = spent.saturating_add(instr.weight());
        if spent > max_words {
            return None;
        }
        instrs.push(instr);
        rest = tail;
    }
    Some(Program::new(instrs))
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ProgramParseError {
    pub line: usize,
    pub msg: String,
}

impl FromStr for Program {
    type Err = ProgramParseError;

    /// Parse the line-based text form: one instruction per line, `#` starts a
    /// comment, blank lines are skipped.
    fn from_str(s: &str) -> Result<Program, ProgramParseError> {
        let mut instrs = Vec::new();
        for (idx, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let instr = Instr::parse(&tokens).map_err(|msg| ProgramParseError {
                line: idx + 1,
                msg,
            })?;
            instrs.push(instr);
        }
        Ok(Program::new(instrs))
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.instrs {
            writeln!(f, "{i}")?;
        }
        Ok(())
    }
}
