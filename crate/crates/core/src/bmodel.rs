//! The effective function model: elements are program indices read as the
//! partial maps they compute, and f·g names a new program that runs the
//! machine Φ_{f(0)} against the joined oracle f⊕g. Application never fails
//! at the index level — partiality is observable only by evaluating the
//! result — which makes the model total as an applicative structure while
//! individual elements stay as partial as they like.
//!
//! Combinator heads reuse the sequence-model templates, so the k/s laws
//! close by the same dispatch discipline; on top of those live the model's
//! two designed gadgets: the difference detector `gadget_a` and the
//! numeral-reading generator `b_generator_j`.

use crate::machine::{
    asm::Asm, encode_program, recursion, run_index, slot, Budget, EvalOutcome, Oracle,
};
use crate::nat::Nat;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

/// The self-looping program: as an element, undefined at every point.
pub fn b_undefined() -> &'static Nat {
    static CELL: OnceLock<Nat> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut a = Asm::new();
        a.label("spin").jump("spin");
        encode_program(&a.finish())
    })
}

/// Answers joined queries for a fixed pair: even positions from f, odd from
/// g, both inheriting whatever ambient the caller runs under.
fn join_template_index() -> &'static Nat {
    static CELL: OnceLock<Nat> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut a = Asm::new();
        a.unpair(1, 2, 0) // r1 = f, r2 = pair(g, q)
            .unpair(2, 3, 2) // r2 = g, r3 = q
            .cnst(9, 2u64)
            .div(5, 3, 9) // r5 = q / 2
            .mul(6, 5, 9)
            .sub(7, 3, 6) // r7 = parity of q
            .cnst(8, 0u64)
            .decjmp(7, "even")
            .call(0, 2, 5, 8)
            .halt(0)
            .label("even")
            .call(0, 1, 5, 8)
            .halt(0);
        encode_program(&a.finish())
    })
}

fn apply_template_index() -> &'static Nat {
    static CELL: OnceLock<Nat> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut a = Asm::new();
        a.unpair(1, 2, 0) // r1 = f, r2 = pair(g, q)
            .unpair(2, 3, 2) // r2 = g, r3 = q
            .cnst_nat(4, join_template_index().clone())
            .smn(4, 4, 1)
            .smn(4, 4, 2) // r4 now answers this pair's joined queries
            .cnst(5, 0u64)
            .call(6, 1, 5, 5) // r6 = f(0) under the ambient
            .inc(4)
            .call(0, 6, 3, 4) // Φ_{f(0)}(q) with queries routed to f⊕g
            .halt(0);
        encode_program(&a.finish())
    })
}

/// f·g as an index: total, no budget involved. The returned program computes
/// x ↦ Φ_{f(0)}(x) over the joined oracle f⊕g, inheriting the ambient.
pub fn b_apply(f: &Nat, g: &Nat) -> Nat {
    recursion::smn(apply_template_index(), &[f.clone(), g.clone()])
}

/// One point of the element's graph.
pub fn b_value_at(f: &Nat, n: &Nat, ambient: &Oracle, budget: &Budget) -> EvalOutcome {
    run_index(f, n, ambient, budget)
}

/// Pointwise Kleene agreement on the window: equal values, or no value on
/// either side.
pub fn b_eq_window(f: &Nat, g: &Nat, ambient: &Oracle, budget: &Budget) -> Result<(), (Nat, String)> {
    for i in 0..budget.window {
        let n = Nat::from_u64(i);
        let of = b_value_at(f, &n, ambient, budget);
        let og = b_value_at(g, &n, ambient, budget);
        if !of.agrees(&og) {
            return Err((n, format!("left {of}, right {og}")));
        }
    }
    Ok(())
}

/// An eventually-constant stream as a program: `head` at 0, `tail` after.
fn headed_stream_index(head: &Nat, tail: u64) -> Nat {
    let mut a = Asm::new();
    a.copy(1, 0)
        .decjmp(1, "head")
        .cnst(0, tail)
        .halt(0)
        .label("head")
        .cnst_nat(0, head.clone())
        .halt(0);
    encode_program(&a.finish())
}

/// The `k` combinator: its stream leads with the shared k-dispatch template.
pub fn b_k() -> &'static Nat {
    static CELL: OnceLock<Nat> = OnceLock::new();
    CELL.get_or_init(|| headed_stream_index(&Nat::from_u64(slot::K2_K_HEAD), 0))
}

/// The `s` combinator.
pub fn b_s() -> &'static Nat {
    static CELL: OnceLock<Nat> = OnceLock::new();
    CELL.get_or_init(|| headed_stream_index(&Nat::from_u64(slot::K2_S1), 0))
}

/// The n-th numeral h_n = kⁿ(k), the value of the Church term c_n·k·k. Its
/// stream is n sevens, a six, then zeros — "count the sevens" is how the
/// generator reads it back.
pub fn church_h(n: u64) -> Nat {
    let mut h = b_k().clone();
    for _ in 0..n {
        h = b_apply(b_k(), &h);
    }
    h
}

fn jhead_template_index() -> &'static Nat {
    static CELL: OnceLock<Nat> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut a = Asm::new();
        a.copy(5, 0) // save q
            .cnst(1, 0u64) // i := 0
            .label("count")
            .cnst(9, 2u64)
            .mul(2, 1, 9)
            .inc(2) // position 2i+1: the right stream at i
            .query(3, 2)
            .cnst(4, 7u64)
            .sub(6, 3, 4)
            .sub(7, 4, 3)
            .add(6, 6, 7) // |X(i) − 7|
            .decjmp(6, "seven")
            .cnst(4, 6u64)
            .sub(6, 3, 4)
            .sub(7, 4, 3)
            .add(6, 6, 7) // |X(i) − 6|
            .decjmp(6, "done")
            .label("spin")
            .jump("spin") // not a numeral: no answer
            .label("seven")
            .inc(1)
            .jump("count")
            .label("done")
            .cnst_nat(8, b_undefined().clone())
            .inc(8)
            .call(0, 1, 5, 8) // Φ_i(q), oracle queries hang honestly
            .halt(0);
        encode_program(&a.finish())
    })
}

/// The generator j: applied to the numeral h_n it behaves as the n-th
/// program's graph. Programs that consult their oracle get a hanging one —
/// the generator only vouches for query-free indices.
pub fn b_generator_j() -> &'static Nat {
    static CELL: OnceLock<Nat> = OnceLock::new();
    CELL.get_or_init(|| headed_stream_index(jhead_template_index(), 0))
}

/// Stage 2 of the difference detector, specialized to h and run with the
/// pair (a·f)⊕g as its oracle: search for the first n with f(n) ≠ g(n);
/// found means "output h(x)", never found means the search itself diverges.
fn detector_search_template_index() -> &'static Nat {
    static CELL: OnceLock<Nat> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut a = Asm::new();
        a.unpair(1, 2, 0) // r1 = h, r2 = x
            .cnst(3, 0u64) // n := 0
            .label("scan")
            .cnst(9, 2u64)
            .mul(4, 3, 9) // 2n
            .add(5, 4, 9)
            .query(6, 5) // left(n+1) = f(n)
            .inc(4)
            .query(7, 4) // right(n) = g(n)
            .sub(10, 6, 7)
            .sub(11, 7, 6)
            .add(10, 10, 11) // |f(n) − g(n)|
            .decjmp(10, "same")
            .cnst_nat(12, b_undefined().clone())
            .inc(12)
            .call(0, 1, 2, 12) // h(x), oracle queries hang
            .halt(0)
            .label("same")
            .inc(3)
            .jump("scan");
        encode_program(&a.finish())
    })
}

/// Stage 1: the head of a·f. At 0 it manufactures the stage-2 index; past 0
/// it forwards f shifted by one, so the search stage can read f off its own
/// left stream.
fn detector_head_template_index() -> &'static Nat {
    static CELL: OnceLock<Nat> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut a = Asm::new();
        a.unpair(1, 2, 0) // r1 = h, r2 = n
            .decjmp(2, "head")
            .cnst(9, 2u64) // n ≥ 1: r2 is already n−1
            .mul(3, 2, 9)
            .inc(3)
            .query(0, 3) // f(n−1)
            .halt(0)
            .label("head")
            .cnst_nat(4, detector_search_template_index().clone())
            .smn(0, 4, 1)
            .halt(0);
        encode_program(&a.finish())
    })
}

/// The difference detector: a·f·g behaves as h when f and g disagree
/// somewhere, and as u when they never do — the unbounded search is itself
/// the divergence, so u enters only as the name of that behavior, and the
/// argument is pinned to the canonical self-looper.
pub fn gadget_a(u: &Nat, h: &Nat) -> Nat {
    assert_eq!(
        u,
        b_undefined(),
        "the detector's silent branch realizes the self-looping element"
    );
    let ea1 = recursion::smn1(detector_head_template_index(), h);
    headed_stream_index(&ea1, 0)
}

/// A finite piece of an element's graph: values seen, points certified
/// undefined (the run hit an undefined oracle point), and points the budget
/// left undetermined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePartialFn {
    pub window: u64,
    pub values: BTreeMap<u64, Nat>,
    pub certified_undefined: BTreeSet<u64>,
    pub undetermined: BTreeSet<u64>,
}

impl FinitePartialFn {
    /// The initial-segment order σ ⊑ f: every recorded value re-evaluates to
    /// itself, and every certified-undefined point stays certified.
    /// Undetermined points constrain nothing.
    pub fn refines(&self, f: &Nat, ambient: &Oracle, budget: &Budget) -> Result<(), String> {
        for (i, v) in &self.values {
            match b_value_at(f, &Nat::from_u64(*i), ambient, budget) {
                EvalOutcome::Halted(w) if w == *v => {}
                other => return Err(format!("at {i}: recorded {v}, re-evaluated {other}")),
            }
        }
        for i in &self.certified_undefined {
            match b_value_at(f, &Nat::from_u64(*i), ambient, budget) {
                EvalOutcome::OracleUndefined(_) => {}
                other => return Err(format!("at {i}: recorded undefined, re-evaluated {other}")),
            }
        }
        Ok(())
    }
}

/// Evaluate f on [0, w), recording what each point did.
pub fn segment_of(f: &Nat, w: u64, ambient: &Oracle, budget: &Budget) -> FinitePartialFn {
    let mut seg = FinitePartialFn {
        window: w,
        values: BTreeMap::new(),
        certified_undefined: BTreeSet::new(),
        undetermined: BTreeSet::new(),
    };
    for i in 0..w {
        match b_value_at(f, &Nat::from_u64(i), ambient, budget) {
            EvalOutcome::Halted(v) => {
                seg.values.insert(i, v);
            }
            EvalOutcome::OracleUndefined(_) => {
                seg.certified_undefined.insert(i);
            }
            EvalOutcome::OutOfFuel(_) => {
                seg.undetermined.insert(i);
            }
        }
    }
    seg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{Instr, Program};

    fn n(v: u64) -> Nat {
        Nat::from_u64(v)
    }

    fn b(steps: u64, window: u64) -> Budget {
        Budget::new(steps, window, 1)
    }

    /// Index of the stream x ↦ c.
    fn constant_stream(c: u64) -> Nat {
        let mut a = Asm::new();
        a.cnst(0, c).halt(0);
        encode_program(&a.finish())
    }

    fn assert_same(f: &Nat, g: &Nat, budget: &Budget) {
        if let Err((at, detail)) = b_eq_window(f, g, &Oracle::Empty, budget) {
            panic!("elements differ at {at}: {detail}");
        }
    }

    #[test]
    fn the_undefined_element_swallows_applications() {
        let ug = b_apply(b_undefined(), &constant_stream(3));
        for i in 0..4u64 {
            let out = b_value_at(&ug, &n(i), &Oracle::Empty, &b(3_000, 4));
            assert!(matches!(out, EvalOutcome::OutOfFuel(_)), "at {i}: {out}");
        }
    }

    #[test]
    fn an_identity_coded_head_forwards_its_argument() {
        // f's head names the program q ↦ oracle(2q+1), which under f⊕g is g.
        let forward = {
            let mut a = Asm::new();
            a.cnst(9, 2u64).mul(1, 0, 9).inc(1).query(0, 1).halt(0);
            encode_program(&a.finish())
        };
        let f = headed_stream_index(&forward, 0);
        let fg = b_apply(&f, &constant_stream(5));
        for i in 0..4u64 {
            assert_eq!(
                b_value_at(&fg, &n(i), &Oracle::Empty, &b(100_000, 4)),
                EvalOutcome::Halted(n(5))
            );
        }
    }

    #[test]
    fn k_law_holds_on_the_window() {
        // a is the successor stream, so any head-copying slip would show.
        let a = encode_program(&Program::new(vec![
            Instr::Inc(Nat::zero()),
            Instr::Halt(Nat::zero()),
        ]));
        let kab = b_apply(&b_apply(b_k(), &a), &constant_stream(0));
        assert_same(&kab, &a, &b(1_000_000, 8));
    }

    #[test]
    fn s_law_matches_direct_evaluation() {
        let x = b_k().clone();
        let y = b_apply(b_k(), &constant_stream(9));
        let z = encode_program(&Program::new(vec![
            Instr::Inc(Nat::zero()),
            Instr::Halt(Nat::zero()),
        ]));
        let lhs = b_apply(&b_apply(&b_apply(b_s(), &x), &y), &z);
        let xz = b_apply(&x, &z);
        let yz = b_apply(&y, &z);
        let rhs = b_apply(&xz, &yz);
        assert_same(&lhs, &rhs, &b(2_000_000, 6));
    }

    #[test]
    fn numeral_streams_count_in_sevens() {
        let h2 = church_h(2);
        let budget = b(1_000_000, 4);
        let expect = [7u64, 7, 6, 0];
        for (i, v) in expect.iter().enumerate() {
            assert_eq!(
                b_value_at(&h2, &n(i as u64), &Oracle::Empty, &budget),
                EvalOutcome::Halted(n(*v)),
                "h2 at {i}"
            );
        }
    }

    #[test]
    fn the_generator_reads_numerals_back() {
        // The identity program's index is small enough to reach by tower.
        let ident = encode_program(&Program::new(Vec::new()));
        let ident_tower = church_h(ident.to_u64().expect("identity index is tiny"));
        let jh = b_apply(b_generator_j(), &ident_tower);
        let budget = b(8_000_000, 3);
        for i in 0..3u64 {
            assert_eq!(
                b_value_at(&jh, &n(i), &Oracle::Empty, &budget),
                EvalOutcome::Halted(n(i)),
                "identity at {i}"
            );
        }
    }

    #[test]
    fn the_generator_is_honest_about_divergent_indices() {
        let spin = encode_program(&Program::new(vec![Instr::Jump(Nat::zero())]));
        let tower = church_h(spin.to_u64().expect("self-loop index is tiny"));
        let jh = b_apply(b_generator_j(), &tower);
        let out = b_value_at(&jh, &n(0), &Oracle::Empty, &b(2_000_000, 1));
        assert!(matches!(out, EvalOutcome::OutOfFuel(_)), "got {out}");
    }

    /// The stream that is 0 everywhere except d ↦ 1.
    fn bump_stream(d: u64) -> Nat {
        let mut a = Asm::new();
        a.cnst(1, d)
            .sub(2, 0, 1)
            .sub(3, 1, 0)
            .add(2, 2, 3)
            .decjmp(2, "hit")
            .cnst(0, 0u64)
            .halt(0)
            .label("hit")
            .cnst(0, 1u64)
            .halt(0);
        encode_program(&a.finish())
    }

    #[test]
    fn the_detector_separates_disagreeing_pairs() {
        let h = constant_stream(9);
        let a = gadget_a(b_undefined(), &h);
        let f = constant_stream(0);
        let g = bump_stream(2);
        let afg = b_apply(&b_apply(&a, &f), &g);
        let budget = b(2_000_000, 4);
        assert_eq!(
            b_value_at(&afg, &n(0), &Oracle::Empty, &budget),
            EvalOutcome::Halted(n(9))
        );
        // An immediate disagreement makes the whole window h.
        let g0 = constant_stream(1);
        let afg0 = b_apply(&b_apply(&a, &f), &g0);
        assert_same(&afg0, &h, &budget);
    }

    #[test]
    fn the_detector_stays_silent_on_equal_pairs() {
        let a = gadget_a(b_undefined(), &constant_stream(9));
        let f = constant_stream(0);
        let aff = b_apply(&b_apply(&a, &f), &f);
        let out = b_value_at(&aff, &n(0), &Oracle::Empty, &b(300_000, 4));
        assert!(matches!(out, EvalOutcome::OutOfFuel(_)), "got {out}");
    }

    #[test]
    fn segments_record_and_refine() {
        let five = constant_stream(5);
        let seg = segment_of(&five, 3, &Oracle::Empty, &b(10_000, 3));
        assert_eq!(seg.values.len(), 3);
        assert_eq!(seg.values[&2], n(5));
        assert!(seg.certified_undefined.is_empty());
        seg.refines(&five, &Oracle::Empty, &b(40_000, 3))
            .expect("segment is an initial segment of its source");

        let useg = segment_of(b_undefined(), 4, &Oracle::Empty, &b(2_000, 4));
        assert!(useg.values.is_empty());
        assert_eq!(useg.undetermined.len(), 4);
        useg.refines(b_undefined(), &Oracle::Empty, &b(8_000, 4))
            .expect("undetermined points constrain nothing");
    }
}
