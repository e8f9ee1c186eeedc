//! The sequence model over ℕ: elements are total maps ℕ→ℕ, and applying α
//! to β runs the program named by α's value at 0, with the pair α⊕β as its
//! oracle. The result is again a sequence, queried lazily point by point.
//!
//! `k` and `s` are eventually-constant sequences whose heads name dictionary
//! templates; partial applications materialize as fresh sequences whose heads
//! name the next template, so the combinator laws close pointwise.

use crate::machine::{
    self, decode_index, run_counted, slot, Budget, EvalOutcome, Oracle, Reply, TapAnswer,
};
use crate::nat::Nat;
use std::fmt;
use std::sync::Arc;

/// A host-computed sequence; the closure sees the fuel still available and
/// reports what its lookup cost.
#[derive(Clone)]
pub struct StreamFn {
    pub label: String,
    pub f: Arc<dyn Fn(&Nat, u64) -> TapAnswer + Send + Sync>,
}

impl StreamFn {
    pub fn new(
        label: impl Into<String>,
        f: impl Fn(&Nat, u64) -> TapAnswer + Send + Sync + 'static,
    ) -> StreamFn {
        StreamFn {
            label: label.into(),
            f: Arc::new(f),
        }
    }
}

#[derive(Clone)]
pub enum K2Elem {
    /// Explicit values for the first few positions, then a constant tail.
    Family { prefix: Vec<Nat>, tail: Nat },
    /// A sequence computed on the host side.
    Backed(StreamFn),
    /// A pending application: values come from running `left`'s head program
    /// under the joined oracle `left ⊕ right`.
    Applied {
        left: Box<K2Elem>,
        right: Box<K2Elem>,
    },
}

impl K2Elem {
    pub fn family(prefix: Vec<Nat>, tail: Nat) -> K2Elem {
        K2Elem::Family { prefix, tail }
    }

    pub fn constant(c: u64) -> K2Elem {
        K2Elem::family(Vec::new(), Nat::from_u64(c))
    }

    /// Head value at 0, constant tail after it.
    pub fn headed(head: u64, tail: u64) -> K2Elem {
        K2Elem::family(vec![Nat::from_u64(head)], Nat::from_u64(tail))
    }

    /// The sequence n ↦ Φ_e(n) over the empty oracle; honest about fuel and
    /// about points where the program queries the (empty) ambient.
    pub fn prog_stream(e: Nat) -> K2Elem {
        let label = format!("prog {e}");
        K2Elem::Backed(StreamFn::new(label, move |n, fuel| {
            if fuel == 0 {
                return TapAnswer {
                    reply: Reply::Exhausted,
                    cost: 0,
                };
            }
            let budget = Budget::new(fuel, 1, 1);
            let (out, used) = machine::run_index_counted(&e, n, &Oracle::Empty, &budget);
            let reply = match out {
                EvalOutcome::Halted(v) => Reply::Value(v),
                EvalOutcome::OutOfFuel(_) => Reply::Exhausted,
                EvalOutcome::OracleUndefined(_) => Reply::Undefined,
            };
            TapAnswer { reply, cost: used }
        }))
    }

    /// One value of the sequence. The answer carries the fuel the lookup
    /// consumed, so nested applications account honestly.
    pub fn tap(&self, q: &Nat, fuel: u64) -> TapAnswer {
        match self {
            K2Elem::Family { prefix, tail } => {
                let v = q
                    .to_usize()
                    .and_then(|i| prefix.get(i))
                    .unwrap_or(tail)
                    .clone();
                TapAnswer::value(v)
            }
            K2Elem::Backed(sf) => (sf.f)(q, fuel),
            K2Elem::Applied { left, right } => {
                let head = left.tap(&Nat::zero(), fuel);
                let spent = head.cost;
                let h = match head.reply {
                    Reply::Value(h) => h,
                    other => {
                        return TapAnswer {
                            reply: other,
                            cost: spent,
                        }
                    }
                };
                let rest = fuel.saturating_sub(spent);
                if rest == 0 {
                    return TapAnswer {
                        reply: Reply::Exhausted,
                        cost: spent,
                    };
                }
                let budget = Budget::new(rest, 1, 1);
                let oracle = join_oracle(left, right);
                let (out, used) = run_counted(&decode_index(&h), q, &oracle, &budget);
                let reply = match out {
                    EvalOutcome::Halted(v) => Reply::Value(v),
                    EvalOutcome::OutOfFuel(_) => Reply::Exhausted,
                    EvalOutcome::OracleUndefined(_) => Reply::Undefined,
                };
                TapAnswer {
                    reply,
                    cost: spent + used,
                }
            }
        }
    }

    /// Present the sequence as a machine oracle.
    pub fn as_oracle(&self) -> Oracle {
        let me = self.clone();
        Oracle::backed(self.to_string(), move |q, fuel| me.tap(q, fuel))
    }
}

/// The joined oracle α⊕β: even positions read α, odd positions read β.
pub fn join_oracle(left: &K2Elem, right: &K2Elem) -> Oracle {
    Oracle::join(left.as_oracle(), right.as_oracle())
}

impl fmt::Display for K2Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            K2Elem::Family { prefix, tail } => {
                write!(f, "[")?;
                for v in prefix {
                    write!(f, "{v},")?;
                }
                write!(f, "{tail}*]")
            }
            K2Elem::Backed(sf) => write!(f, "{}", sf.label),
            K2Elem::Applied { left, right } => write!(f, "({left} {right})"),
        }
    }
}

/// The sequence `k`: head names the template computing `k·X`.
pub fn k2_k() -> K2Elem {
    K2Elem::headed(slot::K2_K_HEAD, 0)
}

/// The sequence `s`.
pub fn k2_s() -> K2Elem {
    K2Elem::headed(slot::K2_S1, 0)
}

/// One point of the sequence as a machine-style outcome.
pub fn value_at(e: &K2Elem, n: &Nat, budget: &Budget) -> EvalOutcome {
    match e.tap(n, budget.steps).reply {
        Reply::Value(v) => EvalOutcome::Halted(v),
        Reply::Exhausted => EvalOutcome::OutOfFuel(budget.steps),
        Reply::Undefined => EvalOutcome::OracleUndefined(n.clone()),
    }
}

/// Outcome of applying α to β: the application is accepted once the result
/// sequence produces a value at every position of the window.
pub enum ApplyOutcome {
    Defined(K2Elem),
    /// Certified: some window position queried an undefined oracle point.
    Undefined { at: Nat },
    /// Unknown at this budget: some window position ran out of fuel.
    OutOfBudget { at: Nat },
}

pub fn apply(left: &K2Elem, right: &K2Elem, budget: &Budget) -> ApplyOutcome {
    let candidate = K2Elem::Applied {
        left: Box::new(left.clone()),
        right: Box::new(right.clone()),
    };
    for i in 0..budget.window {
        let n = Nat::from_u64(i);
        match value_at(&candidate, &n, budget) {
            EvalOutcome::Halted(_) => {}
            EvalOutcome::OutOfFuel(_) => return ApplyOutcome::OutOfBudget { at: n },
            EvalOutcome::OracleUndefined(_) => return ApplyOutcome::Undefined { at: n },
        }
    }
    ApplyOutcome::Defined(candidate)
}

/// Pointwise agreement over the window, in the Kleene sense per point: equal
/// values, or no value on either side.
pub fn eq_window(a: &K2Elem, b: &K2Elem, budget: &Budget) -> Result<(), (Nat, String)> {
    for i in 0..budget.window {
        let n = Nat::from_u64(i);
        let oa = value_at(a, &n, budget);
        let ob = value_at(b, &n, budget);
        if !oa.agrees(&ob) {
            return Err((n, format!("left {oa}, right {ob}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> Nat {
        Nat::from_u64(v)
    }

    fn b() -> Budget {
        Budget::default()
    }

    fn apply_ok(l: &K2Elem, r: &K2Elem) -> K2Elem {
        match apply(l, r, &b()) {
            ApplyOutcome::Defined(e) => e,
            ApplyOutcome::Undefined { at } => panic!("undefined at {at}"),
            ApplyOutcome::OutOfBudget { at } => panic!("out of budget at {at}"),
        }
    }

    fn assert_same(a: &K2Elem, b_: &K2Elem) {
        if let Err((at, detail)) = eq_window(a, b_, &b()) {
            panic!("sequences differ at {at}: {detail}");
        }
    }

    fn digits_of_pi() -> K2Elem {
        K2Elem::family(
            [3u64, 1, 4, 1, 5, 9, 2, 6].map(Nat::from_u64).to_vec(),
            n(7),
        )
    }

    #[test]
    fn applying_k_prefixes_a_projection_header() {
        let x = digits_of_pi();
        let kx = apply_ok(&k2_k(), &x);
        assert_eq!(value_at(&kx, &n(0), &b()), EvalOutcome::Halted(n(slot::K2_K_PROJ)));
        assert_eq!(value_at(&kx, &n(1), &b()), EvalOutcome::Halted(n(3)));
        assert_eq!(value_at(&kx, &n(8), &b()), EvalOutcome::Halted(n(6)));
        assert_eq!(value_at(&kx, &n(9), &b()), EvalOutcome::Halted(n(7)));
    }

    #[test]
    fn k_law_projects_the_first_argument() {
        let x = digits_of_pi();
        let y = K2Elem::constant(5);
        let kxy = apply_ok(&apply_ok(&k2_k(), &x), &y);
        assert_same(&kxy, &x);
    }

    #[test]
    fn s_k_k_is_the_identity() {
        let z = digits_of_pi();
        let skk = apply_ok(&apply_ok(&k2_s(), &k2_k()), &k2_k());
        let out = apply_ok(&skk, &z);
        assert_same(&out, &z);
    }

    #[test]
    fn s_law_matches_direct_evaluation() {
        // x = k and y = k·c make every intermediate application defined.
        let x = k2_k();
        let y = apply_ok(&k2_k(), &K2Elem::constant(9));
        let z = digits_of_pi();
        let lhs = apply_ok(
            &apply_ok(&apply_ok(&k2_s(), &x), &y),
            &z,
        );
        let xz = apply_ok(&x, &z);
        let yz = apply_ok(&y, &z);
        let rhs = apply_ok(&xz, &yz);
        assert_same(&lhs, &rhs);
    }

    #[test]
    fn a_looping_head_is_reported_as_budget_not_certainty() {
        // The one-instruction self-jump, at whatever index the numbering
        // assigns it past the dictionary block.
        let spin = machine::encode_program(&machine::Program::new(vec![
            machine::Instr::Jump(Nat::zero()),
        ]));
        let op = K2Elem::family(vec![spin], Nat::zero());
        match apply(&op, &K2Elem::constant(0), &Budget::new(2_000, 4, 1)) {
            ApplyOutcome::OutOfBudget { at } => assert_eq!(at, n(0)),
            _ => panic!("expected an out-of-budget application"),
        }
    }

    #[test]
    fn undefined_points_are_certified() {
        // A backed sequence that is undefined from position 2 on.
        let partial = K2Elem::Backed(StreamFn::new("partial", |q, _| {
            if *q < Nat::from_u64(2) {
                TapAnswer::value(Nat::zero())
            } else {
                TapAnswer::undefined()
            }
        }));
        // k·partial is fine below the window only while it reads positions
        // 0 and 1; position 3 of the result reads partial(2).
        let kp = K2Elem::Applied {
            left: Box::new(k2_k()),
            right: Box::new(partial),
        };
        assert_eq!(value_at(&kp, &n(1), &b()), EvalOutcome::Halted(n(0)));
        assert_eq!(
            value_at(&kp, &n(3), &b()),
            EvalOutcome::OracleUndefined(n(3))
        );
    }

    #[test]
    fn disagreement_reports_the_position() {
        let a = K2Elem::constant(1);
        let c = K2Elem::family(vec![n(1), n(1), n(2)], n(1));
        let err = eq_window(&a, &c, &b()).unwrap_err();
        assert_eq!(err.0, n(2));
    }
}
