//! Index-level plumbing: freezing arguments into a program index and
//! building self-referential indices.
//!
//! `smn1` is the one-argument parameter freeze. The `Smn` opcode computes
//! exactly this function, so machine-side and host-side freezes produce the
//! same index bit for bit — several constructions depend on that.

use super::asm::Asm;
use super::{encode_program, Program};
use crate::nat::Nat;

/// The wrapper program whose index `smn1` returns: on input `x` it runs
/// program `e` on `pair(v, x)` under the caller's own environment.
pub fn smn1_program(e: &Nat, v: &Nat) -> Program {
    let mut a = Asm::new();
    a.cnst_nat(1, v.clone())
        .pair(0, 1, 0)
        .cnst_nat(1, e.clone())
        .cnst(2, 0u64)
        .call(0, 1, 0, 2)
        .halt(0);
    a.finish()
}

/// Freeze the first argument: `Φ_{smn1(e,v)}(x) = Φ_e(pair(v, x))`.
pub fn smn1(e: &Nat, v: &Nat) -> Nat {
    encode_program(&smn1_program(e, v))
}

/// Freeze several leading arguments in order, left fold of `smn1`.
pub fn smn(e: &Nat, args: &[Nat]) -> Nat {
    let mut acc = e.clone();
    for a in args {
        acc = smn1(&acc, a);
    }
    acc
}

/// An index that knows itself: returns `e` with
/// `Φ_e(x) = Φ_t(pair(e, x))`.
///
/// The trick is the usual one — build a program that, given its own blueprint
/// `w` and an input, freezes `w` into itself with the machine's `Smn` opcode
/// to reconstruct `e`, then defers to `t`. Applying the host freeze to the
/// blueprint twice closes the loop; the opcode/host bit-identity is what
/// makes the reconstructed index equal the returned one.
pub fn fixpoint(t: &Nat) -> Nat {
    let mut a = Asm::new();
    a.unpair(1, 2, 0)
        .smn(3, 1, 1)
        .pair(0, 3, 2)
        .cnst_nat(4, t.clone())
        .cnst(5, 0u64)
        .call(0, 4, 0, 5)
        .halt(0);
    let w = encode_program(&a.finish());
    smn1(&w, &w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{run_index, Budget, EvalOutcome, Oracle};
    use crate::nat::{pair, Nat};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn n(v: u64) -> Nat {
        Nat::from_u64(v)
    }

    fn b() -> Budget {
        Budget::default()
    }

    fn eval(e: &Nat, x: &Nat) -> EvalOutcome {
        run_index(e, x, &Oracle::Empty, &b())
    }

    fn adder_index() -> Nat {
        let mut a = Asm::new();
        a.unpair(1, 2, 0).add(0, 1, 2).halt(0);
        encode_program(&a.finish())
    }

    #[test]
    fn freezing_one_argument_of_add_gives_a_shift() {
        let e2 = smn1(&adder_index(), &n(2));
        for x in 0..20u64 {
            assert_eq!(eval(&e2, &n(x)), EvalOutcome::Halted(n(x + 2)));
        }
    }

    #[test]
    fn freezing_nothing_is_the_identity_on_indices() {
        let e = adder_index();
        assert_eq!(smn(&e, &[]), e);
    }

    #[test]
    fn freezing_the_first_projection_gives_a_constant() {
        let mut a = Asm::new();
        a.unpair(1, 2, 0).halt(1);
        let proj = encode_program(&a.finish());
        let c5 = smn1(&proj, &n(5));
        for x in [0u64, 3, 100] {
            assert_eq!(eval(&c5, &n(x)), EvalOutcome::Halted(n(5)));
        }
    }

    #[test]
    fn random_freezes_agree_with_direct_pairing() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5e1f);
        for _ in 0..200 {
            let e = n(rng.gen_range(0..50_000));
            let v = n(rng.gen_range(0..100));
            let x = n(rng.gen_range(0..100));
            let frozen = smn1(&e, &v);
            let via_wrapper = eval(&frozen, &x);
            let direct = eval(&e, &pair(&v, &x));
            assert!(
                via_wrapper.agrees(&direct),
                "e={e} v={v} x={x}: wrapper {via_wrapper} vs direct {direct}"
            );
        }
    }

    #[test]
    fn machine_freeze_equals_host_freeze() {
        let mut a = Asm::new();
        a.unpair(1, 2, 0).smn(0, 1, 2).halt(0);
        let freezer = a.finish();
        let mut rng = ChaCha8Rng::seed_from_u64(0xf00d);
        for _ in 0..50 {
            let e = n(rng.gen_range(0..1_000_000));
            let v = n(rng.gen_range(0..1_000_000));
            let out = crate::machine::run(&freezer, &pair(&e, &v), &Oracle::Empty, &b());
            assert_eq!(out, EvalOutcome::Halted(smn1(&e, &v)));
        }
    }

    #[test]
    fn fixpoint_of_the_first_projection_is_a_quine() {
        // Φ_t(pair(e, x)) = e, so the fixpoint returns its own index.
        let mut a = Asm::new();
        a.unpair(1, 2, 0).halt(1);
        let t = encode_program(&a.finish());
        let e = fixpoint(&t);
        assert_eq!(eval(&e, &n(0)), EvalOutcome::Halted(e.clone()));
        assert_eq!(eval(&e, &n(9)), EvalOutcome::Halted(e));
    }

    #[test]
    fn fixpoint_satisfies_its_equation_on_random_transformers() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xca11);
        let mut checked = 0;
        while checked < 20 {
            let t = n(rng.gen_range(0..50_000));
            let e = fixpoint(&t);
            for x in [0u64, 1, 7] {
                let lhs = eval(&e, &n(x));
                let rhs = eval(&t, &pair(&e, &n(x)));
                assert!(
                    lhs.agrees(&rhs),
                    "t={t} x={x}: fixpoint {lhs} vs unrolled {rhs}"
                );
            }
            checked += 1;
        }
    }
}
