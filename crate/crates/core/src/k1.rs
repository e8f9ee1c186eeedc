//! The index model: elements are naturals, `a·b` runs program `a` on input
//! `b` with no ambient oracle, and two elements are equal only when they are
//! literally the same number. Application is partial — most programs loop on
//! most inputs — and the strict equality is what makes this model a hard
//! target for embeddings.

use crate::machine::{
    asm::Asm, encode_program, recursion, run_index, Budget, EvalOutcome, Oracle,
};
use crate::nat::Nat;
use std::sync::OnceLock;

/// Φ_a(b) over the empty oracle.
pub fn k1_apply(a: &Nat, b: &Nat, budget: &Budget) -> EvalOutcome {
    run_index(a, b, &Oracle::Empty, budget)
}

/// Index of the pair-eating projection Φ(pair(x,y)) = x.
fn kconst_index() -> &'static Nat {
    static CELL: OnceLock<Nat> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut a = Asm::new();
        a.unpair(1, 2, 0).halt(1);
        encode_program(&a.finish())
    })
}

/// The `k` combinator: k·x is a specialized projection index, so k·x·y = x
/// on the nose.
pub fn k1_k() -> &'static Nat {
    static CELL: OnceLock<Nat> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut a = Asm::new();
        a.cnst_nat(1, kconst_index().clone()).smn(0, 1, 0).halt(0);
        encode_program(&a.finish())
    })
}

/// Φ(pair(x, pair(y, z))) ≃ (x·z)·(y·z), the final stage of `s`.
fn s_stage3_index() -> &'static Nat {
    static CELL: OnceLock<Nat> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut a = Asm::new();
        a.unpair(1, 2, 0)
            .unpair(2, 3, 2)
            .cnst(4, 0u64)
            .call(5, 1, 3, 4)
            .call(6, 2, 3, 4)
            .call(0, 5, 6, 4)
            .halt(0);
        encode_program(&a.finish())
    })
}

/// Φ(pair(x, y)) = an index for z ↦ (x·z)·(y·z); always defined.
fn s_stage2_index() -> &'static Nat {
    static CELL: OnceLock<Nat> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut a = Asm::new();
        a.unpair(1, 2, 0)
            .cnst_nat(3, s_stage3_index().clone())
            .smn(3, 3, 1)
            .smn(0, 3, 2)
            .halt(0);
        encode_program(&a.finish())
    })
}

/// The `s` combinator: s·x and s·x·y always land (they only specialize
/// indices); the third application is the one that may diverge.
pub fn k1_s() -> &'static Nat {
    static CELL: OnceLock<Nat> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut a = Asm::new();
        a.cnst_nat(1, s_stage2_index().clone()).smn(0, 1, 0).halt(0);
        encode_program(&a.finish())
    })
}

/// Index of the successor program.
fn succ_index() -> &'static Nat {
    static CELL: OnceLock<Nat> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut a = Asm::new();
        a.inc(0);
        encode_program(&a.finish())
    })
}

fn gen_template_index() -> &'static Nat {
    static CELL: OnceLock<Nat> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut a = Asm::new();
        a.unpair(1, 2, 0) // r1 = the generator's own index, r2 = argument
            .sub(3, 1, 2)
            .sub(4, 2, 1)
            .add(3, 3, 4) // r3 = |e - m|
            .decjmp(3, "same")
            .decjmp(2, "zero")
            .label("spin")
            .jump("spin")
            .label("same")
            .cnst(0, 0u64)
            .halt(0)
            .label("zero")
            .cnst_nat(0, succ_index().clone())
            .halt(0);
        encode_program(&a.finish())
    })
}

/// The numeral generator: an index e with e·e = 0, e·0 = an index of the
/// successor, and e·m undefined for every other m. Numerals grow from it by
/// application alone: 0 is e·e and n+1 is (e·(e·e))·n.
pub fn generator() -> &'static Nat {
    static CELL: OnceLock<Nat> = OnceLock::new();
    CELL.get_or_init(|| {
        let e = recursion::fixpoint(gen_template_index());
        assert!(!e.is_zero(), "the generator index must not collide with 0");
        e
    })
}

/// The numeral n computed entirely by model applications of the generator.
pub fn numeral(n: u64, budget: &Budget) -> EvalOutcome {
    let e = generator();
    let zero = match k1_apply(e, e, budget) {
        EvalOutcome::Halted(v) => v,
        other => return other,
    };
    let succ = match k1_apply(e, &zero, budget) {
        EvalOutcome::Halted(v) => v,
        other => return other,
    };
    let mut acc = zero;
    for _ in 0..n {
        acc = match k1_apply(&succ, &acc, budget) {
            EvalOutcome::Halted(v) => v,
            other => return other,
        };
    }
    EvalOutcome::Halted(acc)
}
