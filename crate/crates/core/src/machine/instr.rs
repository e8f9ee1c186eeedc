//! Register-machine instructions and the bijection between instructions and
//! naturals.
//!
//! Every instruction carries its operands as naturals. The numeric code of an
//! instruction is `op + 15 * payload` where `op` is the opcode's position in
//! the fixed table below and `payload` packs the operands with nested
//! [`packed_pair`]s, cheapest field first. Both directions are total, so
//! instruction codes enumerate exactly the instructions.

use crate::nat::{pair, unpair, Nat};
use std::fmt;

pub const OP_COUNT: u64 = 15;

/// Length classes for [`packed_pair`]: `(start, span)` ranges of the first
/// component's bijective-binary length, cheapest first. A first component
/// whose length falls in class `i` costs its own bits plus `log2(span)` tag
/// bits; anything past the last class falls back to a Cantor pair.
const LEN_CLASSES: [(u64, u64); 3] = [(0, 8), (8, 2048), (2056, 1 << 20)];
const LEN_FALLBACK: u64 = 2056 + (1 << 20);

/// Length of `x` in bijective binary: `⌊log2(x+1)⌋`.
fn blen(x: &Nat) -> u64 {
    x.succ().bits() - 1
}

/// A pairing bijection whose codes stay *additive* in the sizes of the
/// parts (plus a small tag), as long as the first part is under 2^20 bits
/// wide. Instruction payloads and program lists are built from it; a Cantor
/// pair here would square the embedded value, and specialization towers
/// (an index stored as a literal inside a program that is itself stored as
/// a literal, and so on) would grow exponentially instead of linearly.
pub fn packed_pair(x: &Nat, y: &Nat) -> Nat {
    let four = Nat::from_u64(4);
    let l = blen(x);
    for (tag, (start, span)) in LEN_CLASSES.iter().enumerate() {
        if l < start + span {
            let off = x.monus(&Nat::one().shl(l).pred());
            let body = y
                .shl(l)
                .add(&off)
                .mul(&Nat::from_u64(*span))
                .add(&Nat::from_u64(l - start));
            return body.mul(&four).add(&Nat::from_u64(tag as u64));
        }
    }
    let floor = Nat::one().shl(LEN_FALLBACK).pred();
    pair(&x.monus(&floor), y)
        .mul(&four)
        .add(&Nat::from_u64(3))
}

/// Inverse of [`packed_pair`]. Total.
pub fn packed_unpair(z: &Nat) -> (Nat, Nat) {
    let four = Nat::from_u64(4);
    let tag = z.rem(&four).to_u64().expect("tag fits") as usize;
    let body = z.div_floor(&four);
    if tag == 3 {
        let (u, y) = unpair(&body);
        let floor = Nat::one().shl(LEN_FALLBACK).pred();
        return (u.add(&floor), y);
    }
    let (start, span) = LEN_CLASSES[tag];
    let span_n = Nat::from_u64(span);
    let l = body.rem(&span_n).to_u64().expect("length field fits") + start;
    let v = body.div_floor(&span_n);
    let x = Nat::one().shl(l).pred().add(&v.low_bits(l));
    (x, v.shr(l))
}

/// One register-machine instruction. Operands name registers unless noted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Instr {
    /// `[r] += 1`
    Inc(Nat),
    /// `pc := addr` (address literal; out of range halts with `[r0]`)
    Jump(Nat),
    /// If `[r] == 0` jump to the literal address, else `[r] -= 1` and fall
    /// through.
    DecJump(Nat, Nat),
    /// `[dst] := [src]`
    Copy(Nat, Nat),
    /// `[dst] := k` (literal)
    Const(Nat, Nat),
    /// `[dst] := [a] + [b]`
    Add(Nat, Nat, Nat),
    /// `[dst] := [a] ∸ [b]` (truncated)
    Sub(Nat, Nat, Nat),
    /// `[dst] := [a] * [b]`
    Mul(Nat, Nat, Nat),
    /// `[dst] := [a] / [b]`, floor, division by zero yields zero
    Div(Nat, Nat, Nat),
    /// `[dst] := pair([a], [b])`
    Pair(Nat, Nat, Nat),
    /// `([d1], [d2]) := unpair([src])`; `d1` is written first
    Unpair(Nat, Nat, Nat),
    /// `[dst] := oracle([q])`; an unanswered query ends the whole run
    Query(Nat, Nat),
    /// `[dst] := run(decode([e]), [x])` with handler selector `[h]`:
    /// `0` inherits the caller's oracle, `m + 1` answers the callee's queries
    /// by running program `m` on the query under the caller's environment.
    Call(Nat, Nat, Nat, Nat),
    /// `[dst] := s11([e], [v])` — the index of `[e]` specialized on `[v]`
    Smn(Nat, Nat, Nat),
    /// Halt with value `[r]`
    Halt(Nat),
}

impl Instr {
    fn op(&self) -> u64 {
        match self {
            Instr::Inc(..) => 0,
            Instr::Jump(..) => 1,
            Instr::DecJump(..) => 2,
            Instr::Copy(..) => 3,
            Instr::Const(..) => 4,
            Instr::Add(..) => 5,
            Instr::Sub(..) => 6,
            Instr::Mul(..) => 7,
            Instr::Div(..) => 8,
            Instr::Pair(..) => 9,
            Instr::Unpair(..) => 10,
            Instr::Query(..) => 11,
            Instr::Call(..) => 12,
            Instr::Smn(..) => 13,
            Instr::Halt(..) => 14,
        }
    }

    fn payload(&self) -> Nat {
        match self {
            Instr::Inc(a) | Instr::Jump(a) | Instr::Halt(a) => a.clone(),
            Instr::DecJump(a, b)
            | Instr::Copy(a, b)
            | Instr::Const(a, b)
            | Instr::Query(a, b) => packed_pair(a, b),
            Instr::Add(a, b, c)
            | Instr::Sub(a, b, c)
            | Instr::Mul(a, b, c)
            | Instr::Div(a, b, c)
            | Instr::Pair(a, b, c)
            | Instr::Unpair(a, b, c)
            | Instr::Smn(a, b, c) => packed_pair(a, &packed_pair(b, c)),
            Instr::Call(a, b, c, d) => {
                packed_pair(a, &packed_pair(b, &packed_pair(c, d)))
            }
        }
    }

    /// Numeric code of this instruction.
    pub fn code(&self) -> Nat {
        Nat::from_u64(OP_COUNT)
            .mul(&self.payload())
            .add(&Nat::from_u64(self.op()))
    }

    /// The instruction with the given code. Total: every natural decodes.
    pub fn from_code(code: &Nat) -> Instr {
        let fifteen = Nat::from_u64(OP_COUNT);
        let op = code.rem(&fifteen).to_u64().expect("opcode fits u64");
        let q = code.div_floor(&fifteen);
        let two = |q: &Nat| packed_unpair(q);
        let three = |q: &Nat| {
            let (a, rest) = packed_unpair(q);
            let (b, c) = packed_unpair(&rest);
            (a, b, c)
        };
        match op {
            0 => Instr::Inc(q),
            1 => Instr::Jump(q),
            2 => {
                let (a, b) = two(&q);
                Instr::DecJump(a, b)
            }
            3 => {
                let (a, b) = two(&q);
                Instr::Copy(a, b)
            }
            4 => {
                let (a, b) = two(&q);
                Instr::Const(a, b)
            }
            5 => {
                let (a, b, c) = three(&q);
                Instr::Add(a, b, c)
            }
            6 => {
                let (a, b, c) = three(&q);
                Instr::Sub(a, b, c)
            }
            7 => {
                let (a, b, c) = three(&q);
                Instr::Mul(a, b, c)
            }
            8 => {
                let (a, b, c) = three(&q);
                Instr::Div(a, b, c)
            }
            9 => {
                let (a, b, c) = three(&q);
                Instr::Pair(a, b, c)
            }
            10 => {
                let (a, b, c) = three(&q);
                Instr::Unpair(a, b, c)
            }
            11 => {
                let (a, b) = two(&q);
                Instr::Query(a, b)
            }
            12 => {
                let (a, rest) = packed_unpair(&q);
                let (b, rest) = packed_unpair(&rest);
                let (c, d) = packed_unpair(&rest);
                Instr::Call(a, b, c, d)
            }
            13 => {
                let (a, b, c) = three(&q);
                Instr::Smn(a, b, c)
            }
            14 => Instr::Halt(q),
            _ => unreachable!("residue mod 15"),
        }
    }

    pub fn mnemonic(&self) -> &'static str {
        match self {
            Instr::Inc(..) => "inc",
            Instr::Jump(..) => "jump",
            Instr::DecJump(..) => "decjmp",
            Instr::Copy(..) => "copy",
            Instr::Const(..) => "const",
            Instr::Add(..) => "add",
            Instr::Sub(..) => "sub",
            Instr::Mul(..) => "mul",
            Instr::Div(..) => "div",
            Instr::Pair(..) => "pair",
            Instr::Unpair(..) => "unpair",
            Instr::Query(..) => "query",
            Instr::Call(..) => "call",
            Instr::Smn(..) => "smn",
            Instr::Halt(..) => "halt",
        }
    }

    fn operands(&self) -> Vec<&Nat> {
        match self {
            Instr::Inc(a) | Instr::Jump(a) | Instr::Halt(a) => vec![a],
            Instr::DecJump(a, b)
            | Instr::Copy(a, b)
            | Instr::Const(a, b)
            | Instr::Query(a, b) => vec![a, b],
            Instr::Add(a, b, c)
            | Instr::Sub(a, b, c)
            | Instr::Mul(a, b, c)
            | Instr::Div(a, b, c)
            | Instr::Pair(a, b, c)
            | Instr::Unpair(a, b, c)
            | Instr::Smn(a, b, c) => vec![a, b, c],
            Instr::Call(a, b, c, d) => vec![a, b, c, d],
        }
    }

    /// Storage charged against budgets for this instruction: one unit plus
    /// the extra machine words of every operand.
    pub fn weight(&self) -> u64 {
        1 + self
            .operands()
            .iter()
            .map(|v| v.wide_words())
            .sum::<u64>()
    }

    /// Parse one instruction from its text form, e.g. `decjmp 2 7`.
    pub fn parse(tokens: &[&str]) -> Result<Instr, String> {
        let nat = |t: &str| -> Result<Nat, String> {
            t.parse::<Nat>()
                .map_err(|_| format!("bad numeral `{t}`"))
        };
        let argc = |want: usize| -> Result<(), String> {
            if tokens.len() - 1 == want {
                Ok(())
            } else {
                Err(format!(
                    "`{}` takes {} operand{}, got {}",
                    tokens[0],
                    want,
                    if want == 1 { "" } else { "s" },
                    tokens.len() - 1
                ))
            }
        };
        let one = |f: fn(Nat) -> Instr| -> Result<Instr, String> {
            argc(1)?;
            Ok(f(nat(tokens[1])?))
        };
        let two = |f: fn(Nat, Nat) -> Instr| -> Result<Instr, String> {
            argc(2)?;
            Ok(f(nat(tokens[1])?, nat(tokens[2])?))
        };
        let three = |f: fn(Nat, Nat, Nat) -> Instr| -> Result<Instr, String> {
            argc(3)?;
            Ok(f(nat(tokens[1])?, nat(tokens[2])?, nat(tokens[3])?))
        };
        match tokens[0] {
            "inc" => one(Instr::Inc),
            "jump" => one(Instr::Jump),
            "halt" => one(Instr::Halt),
            "decjmp" => two(Instr::DecJump),
            "copy" => two(Instr::Copy),
            "const" => two(Instr::Const),
            "query" => two(Instr::Query),
            "add" => three(Instr::Add),
            "sub" => three(Instr::Sub),
            "mul" => three(Instr::Mul),
            "div" => three(Instr::Div),
            "pair" => three(Instr::Pair),
            "unpair" => three(Instr::Unpair),
            "smn" => three(Instr::Smn),
            "call" => {
                argc(4)?;
                Ok(Instr::Call(
                    nat(tokens[1])?,
                    nat(tokens[2])?,
                    nat(tokens[3])?,
                    nat(tokens[4])?,
                ))
            }
            other => Err(format!("unknown mnemonic `{other}`")),
        }
    }
}

impl fmt::Display for Instr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.mnemonic())?;
        for x in self.operands() {
            write!(f, " {x}")?;
        }
        Ok(())
    }
}
