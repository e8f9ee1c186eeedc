//! A small builder for hand-writing machine programs with symbolic jump
//! targets. Used for the template programs behind the models' combinators;
//! anything user-facing goes through the text format instead.

use super::instr::Instr;
use super::program::Program;
use crate::nat::Nat;
use std::collections::HashMap;

enum Item {
    Fixed(Instr),
    JumpTo(String),
    DecJumpTo(u64, String),
}

#[derive(Default)]
pub struct Asm {
    items: Vec<Item>,
    labels: HashMap<String, usize>,
}

impl Asm {
    pub fn new() -> Asm {
        Asm::default()
    }

    /// Attach a label to the next instruction.
    pub fn label(&mut self, name: &str) -> &mut Asm {
        let prev = self.labels.insert(name.to_string(), self.items.len());
        assert!(prev.is_none(), "label `{name}` defined twice");
        self
    }

    fn push(&mut self, i: Instr) -> &mut Asm {
        self.items.push(Item::Fixed(i));
        self
    }

    pub fn inc(&mut self, r: u64) -> &mut Asm {
        self.push(Instr::Inc(Nat::from_u64(r)))
    }

    pub fn jump(&mut self, target: &str) -> &mut Asm {
        self.items.push(Item::JumpTo(target.to_string()));
        self
    }

    pub fn decjmp(&mut self, r: u64, target: &str) -> &mut Asm {
        self.items.push(Item::DecJumpTo(r, target.to_string()));
        self
    }

    pub fn copy(&mut self, dst: u64, src: u64) -> &mut Asm {
        self.push(Instr::Copy(Nat::from_u64(dst), Nat::from_u64(src)))
    }

    pub fn cnst(&mut self, dst: u64, k: impl Into<Nat>) -> &mut Asm {
        self.push(Instr::Const(Nat::from_u64(dst), k.into()))
    }

    pub fn cnst_nat(&mut self, dst: u64, k: Nat) -> &mut Asm {
        self.push(Instr::Const(Nat::from_u64(dst), k))
    }

    pub fn add(&mut self, dst: u64, a: u64, b: u64) -> &mut Asm {
        self.push(Instr::Add(
            Nat::from_u64(dst),
            Nat::from_u64(a),
            Nat::from_u64(b),
        ))
    }

    pub fn sub(&mut self, dst: u64, a: u64, b: u64) -> &mut Asm {
        self.push(Instr::Sub(
            Nat::from_u64(dst),
            Nat::from_u64(a),
            Nat::from_u64(b),
        ))
    }

    pub fn mul(&mut self, dst: u64, a: u64, b: u64) -> &mut Asm {
        self.push(Instr::Mul(
            Nat::from_u64(dst),
            Nat::from_u64(a),
            Nat::from_u64(b),
        ))
    }

    pub fn div(&mut self, dst: u64, a: u64, b: u64) -> &mut Asm {
        self.push(Instr::Div(
            Nat::from_u64(dst),
            Nat::from_u64(a),
            Nat::from_u64(b),
        ))
    }

    pub fn pair(&mut self, dst: u64, a: u64, b: u64) -> &mut Asm {
        self.push(Instr::Pair(
            Nat::from_u64(dst),
            Nat::from_u64(a),
            Nat::from_u64(b),
        ))
    }

    pub fn unpair(&mut self, d1: u64, d2: u64, src: u64) -> &mut Asm {
        self.push(Instr::Unpair(
            Nat::from_u64(d1),
            Nat::from_u64(d2),
            Nat::from_u64(src),
        ))
    }

    pub fn query(&mut self, dst: u64, q: u64) -> &mut Asm {
        self.push(Instr::Query(Nat::from_u64(dst), Nat::from_u64(q)))
    }

    pub fn call(&mut self, dst: u64, e: u64, x: u64, h: u64) -> &mut Asm {
        self.push(Instr::Call(
            Nat::from_u64(dst),
            Nat::from_u64(e),
            Nat::from_u64(x),
            Nat::from_u64(h),
        ))
    }

    pub fn smn(&mut self, dst: u64, e: u64, v: u64) -> &mut Asm {
        self.push(Instr::Smn(
            Nat::from_u64(dst),
            Nat::from_u64(e),
            Nat::from_u64(v),
        ))
    }

    pub fn halt(&mut self, r: u64) -> &mut Asm {
        self.push(Instr::Halt(Nat::from_u64(r)))
    }

    pub fn finish(self) -> Program {
        let resolve = |name: &str| -> Nat {
            let at = self
                .labels
                .get(name)
                .unwrap_or_else(|| panic!("unresolved label `{name}`"));
            Nat::from_usize(*at)
        };
        let instrs = self
            .items
            .iter()
            .map(|item| match item {
                Item::Fixed(i) => i.clone(),
                Item::JumpTo(l) => Instr::Jump(resolve(l)),
                Item::DecJumpTo(r, l) => Instr::DecJump(Nat::from_u64(*r), resolve(l)),
            })
            .collect();
        Program::new(instrs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_resolve_forward_and_backward() {
        let mut a = Asm::new();
        a.label("top")
            .decjmp(0, "done")
            .inc(1)
            .jump("top")
            .label("done")
            .halt(1);
        let p = a.finish();
        assert_eq!(p.instrs[0], Instr::DecJump(Nat::from_u64(0), Nat::from_u64(3)));
        assert_eq!(p.instrs[2], Instr::Jump(Nat::from_u64(0)));
    }

    #[test]
    #[should_panic(expected = "unresolved label")]
    fn missing_label_panics() {
        let mut a = Asm::new();
        a.jump("nowhere");
        a.finish();
    }
}
