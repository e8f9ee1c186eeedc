//! The sequence model restricted to 0/1 values.
//!
//! Values are bits, so a sequence cannot carry a program index in a single
//! cell the way the ℕ model does. Instead, every sequence built from `k` and
//! `s` marks itself with a single 1 in its first [`HEADER_SCAN`] positions;
//! the marker's *position* names the dictionary template that computes the
//! sequence's applications, and argument data is packed from position 32 up.
//! Application dispatches on the marker, and the host reduces every value
//! mod 2 at every boundary so the restriction is airtight.
//!
//! A sequence with no marker below the scan bound (arbitrary data, say) can
//! still be an *argument*, but applying it as an operator diverges — reported
//! as an out-of-budget outcome, never as a certified one, matching the
//! templates' own bounded scan followed by a deliberate spin.

use crate::k2::StreamFn;
use crate::machine::{
    self, decode_index, run_counted, Budget, EvalOutcome, Oracle, Reply, TapAnswer, HEADER_SCAN,
};
use crate::nat::Nat;
use std::fmt;

#[derive(Clone)]
pub enum K201Elem {
    /// Explicit bits for the first few positions, then a constant tail bit.
    Family { prefix: Vec<bool>, tail: bool },
    /// A bit sequence computed on the host side (values are reduced mod 2).
    Backed(StreamFn),
    /// A pending application, dispatched on `left`'s marker position.
    Applied {
        left: Box<K201Elem>,
        right: Box<K201Elem>,
    },
}

fn as_bit(v: Nat) -> Nat {
    if v.is_even() {
        Nat::zero()
    } else {
        Nat::one()
    }
}

impl K201Elem {
    pub fn from_bits(prefix: &[u8], tail: bool) -> K201Elem {
        K201Elem::Family {
            prefix: prefix.iter().map(|b| *b != 0).collect(),
            tail,
        }
    }

    /// All zeros except a single 1 at position `p`.
    pub fn unit(p: u64) -> K201Elem {
        let mut prefix = vec![false; p as usize];
        prefix.push(true);
        K201Elem::Family {
            prefix,
            tail: false,
        }
    }

    pub fn zeros() -> K201Elem {
        K201Elem::Family {
            prefix: Vec::new(),
            tail: false,
        }
    }

    /// The bit sequence n ↦ Φ_e(n) mod 2 over the empty oracle.
    pub fn prog_stream(e: Nat) -> K201Elem {
        let label = format!("prog {e}");
        K201Elem::Backed(StreamFn::new(label, move |n, fuel| {
            if fuel == 0 {
                return TapAnswer {
                    reply: Reply::Exhausted,
                    cost: 0,
                };
            }
            let budget = Budget::new(fuel, 1, 1);
            let (out, used) = machine::run_index_counted(&e, n, &Oracle::Empty, &budget);
            let reply = match out {
                EvalOutcome::Halted(v) => Reply::Value(as_bit(v)),
                EvalOutcome::OutOfFuel(_) => Reply::Exhausted,
                EvalOutcome::OracleUndefined(_) => Reply::Undefined,
            };
            TapAnswer { reply, cost: used }
        }))
    }

    /// One bit of the sequence.
    pub fn tap(&self, q: &Nat, fuel: u64) -> TapAnswer {
        match self {
            K201Elem::Family { prefix, tail } => {
                let set = q
                    .to_usize()
                    .and_then(|i| prefix.get(i).copied())
                    .unwrap_or(*tail);
                TapAnswer::value(if set { Nat::one() } else { Nat::zero() })
            }
            K201Elem::Backed(sf) => {
                let mut ans = (sf.f)(q, fuel);
                if let Reply::Value(v) = ans.reply {
                    ans.reply = Reply::Value(as_bit(v));
                }
                ans
            }
            K201Elem::Applied { left, right } => {
                let (slot, spent) = match marker_scan(left, fuel) {
                    Ok(found) => found,
                    Err(failed) => return failed,
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
                let (out, used) =
                    run_counted(&decode_index(&Nat::from_u64(slot)), q, &oracle, &budget);
                let reply = match out {
                    EvalOutcome::Halted(v) => Reply::Value(as_bit(v)),
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

    pub fn as_oracle(&self) -> Oracle {
        let me = self.clone();
        Oracle::backed(self.to_string(), move |q, fuel| me.tap(q, fuel))
    }
}

/// Find the marker: the least position below the scan bound holding a 1.
/// `Err` is the failure to report — exhaustion when no marker exists, since
/// the templates spin rather than certify in the same situation.
fn marker_scan(e: &K201Elem, fuel: u64) -> Result<(u64, u64), TapAnswer> {
    let mut spent = 0u64;
    for p in 0..HEADER_SCAN {
        let ans = e.tap(&Nat::from_u64(p), fuel.saturating_sub(spent));
        spent += ans.cost;
        match ans.reply {
            Reply::Value(v) if v.is_zero() => continue,
            Reply::Value(_) => return Ok((p, spent)),
            Reply::Undefined => {
                return Err(TapAnswer {
                    reply: Reply::Undefined,
                    cost: spent,
                })
            }
            Reply::Exhausted => {
                return Err(TapAnswer {
                    reply: Reply::Exhausted,
                    cost: spent,
                })
            }
        }
    }
    Err(TapAnswer {
        reply: Reply::Exhausted,
        cost: spent,
    })
}

pub fn join_oracle(left: &K201Elem, right: &K201Elem) -> Oracle {
    Oracle::join(left.as_oracle(), right.as_oracle())
}

impl fmt::Display for K201Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            K201Elem::Family { prefix, tail } => {
                write!(f, "[")?;
                for b in prefix {
                    write!(f, "{}", u8::from(*b))?;
                }
                write!(f, ";{}*]", u8::from(*tail))
            }
            K201Elem::Backed(sf) => write!(f, "{}", sf.label),
            K201Elem::Applied { left, right } => write!(f, "({left} {right})"),
        }
    }
}

/// `k`: marked at the position of the template computing `k·X`.
pub fn k201_k() -> K201Elem {
    K201Elem::unit(machine::slot::K201_K_HEAD)
}

/// `s`.
pub fn k201_s() -> K201Elem {
    K201Elem::unit(machine::slot::K201_S1)
}

pub fn value_at(e: &K201Elem, n: &Nat, budget: &Budget) -> EvalOutcome {
    match e.tap(n, budget.steps).reply {
        Reply::Value(v) => EvalOutcome::Halted(v),
        Reply::Exhausted => EvalOutcome::OutOfFuel(budget.steps),
        Reply::Undefined => EvalOutcome::OracleUndefined(n.clone()),
    }
}

pub enum ApplyOutcome {
    Defined(K201Elem),
    Undefined { at: Nat },
    OutOfBudget { at: Nat },
}

pub fn apply(left: &K201Elem, right: &K201Elem, budget: &Budget) -> ApplyOutcome {
    let candidate = K201Elem::Applied {
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

pub fn eq_window(a: &K201Elem, b: &K201Elem, budget: &Budget) -> Result<(), (Nat, String)> {
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
    use crate::machine::slot;

    fn n(v: u64) -> Nat {
        Nat::from_u64(v)
    }

    fn b() -> Budget {
        Budget::default()
    }

    fn apply_ok(l: &K201Elem, r: &K201Elem) -> K201Elem {
        match apply(l, r, &b()) {
            ApplyOutcome::Defined(e) => e,
            ApplyOutcome::Undefined { at } => panic!("undefined at {at}"),
            ApplyOutcome::OutOfBudget { at } => panic!("out of budget at {at}"),
        }
    }

    fn assert_same(a: &K201Elem, b_: &K201Elem) {
        if let Err((at, detail)) = eq_window(a, b_, &b()) {
            panic!("sequences differ at {at}: {detail}");
        }
    }

    fn bit_at(e: &K201Elem, i: u64) -> u64 {
        match value_at(e, &n(i), &b()) {
            EvalOutcome::Halted(v) => v.to_u64().unwrap(),
            other => panic!("no bit at {i}: {other}"),
        }
    }

    fn data() -> K201Elem {
        K201Elem::from_bits(&[1, 0, 1, 1, 0, 1], false)
    }

    #[test]
    fn applying_k_marks_the_projection_slot_and_packs_the_argument() {
        let ka = apply_ok(&k201_k(), &data());
        assert_eq!(bit_at(&ka, 0), 0);
        assert_eq!(bit_at(&ka, slot::K201_K_PROJ), 1);
        for i in 2..HEADER_SCAN {
            assert_eq!(bit_at(&ka, i), 0, "position {i} below the data area");
        }
        for (i, expect) in [1u64, 0, 1, 1, 0, 1, 0, 0].into_iter().enumerate() {
            assert_eq!(bit_at(&ka, 32 + i as u64), expect, "A({i})");
        }
    }

    #[test]
    fn k_law_projects_the_first_argument() {
        let a = data();
        let b_arg = K201Elem::unit(9);
        let kab = apply_ok(&apply_ok(&k201_k(), &a), &b_arg);
        assert_same(&kab, &a);
    }

    #[test]
    fn s_k_k_is_the_identity() {
        let z = data();
        let skk = apply_ok(&apply_ok(&k201_s(), &k201_k()), &k201_k());
        assert_same(&apply_ok(&skk, &z), &z);
    }

    #[test]
    fn s_law_matches_direct_evaluation() {
        let x = apply_ok(&k201_k(), &k201_k()); // (k·k): applying it to z gives back k
        let y = k201_k();
        let z = data();
        let lhs = apply_ok(&apply_ok(&apply_ok(&k201_s(), &x), &y), &z);
        let rhs = apply_ok(&apply_ok(&x, &z), &apply_ok(&y, &z));
        assert_same(&lhs, &rhs);
    }

    #[test]
    fn unmarked_operators_run_out_of_budget_not_certainty() {
        match apply(&K201Elem::zeros(), &data(), &Budget::new(5_000, 4, 1)) {
            ApplyOutcome::OutOfBudget { at } => assert_eq!(at, n(0)),
            _ => panic!("expected out-of-budget"),
        }
    }

    #[test]
    fn values_stay_bits_even_under_odd_dispatch() {
        // A marker right past the dictionary dispatches the identity
        // program, so the value at q would be q — the boundary reduces it.
        let odd = K201Elem::unit(machine::slot::COUNT);
        let applied = apply_ok(&odd, &data());
        for i in 0..8 {
            assert_eq!(bit_at(&applied, i), i % 2);
        }
    }

    #[test]
    fn eq_reports_the_first_differing_position() {
        let x = K201Elem::from_bits(&[0, 0, 1], false);
        let y = K201Elem::from_bits(&[0, 0, 1, 1], false);
        let err = eq_window(&x, &y, &b()).unwrap_err();
        assert_eq!(err.0, n(3));
    }
}
