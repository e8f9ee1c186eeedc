//! The enumeration-operator model: elements are sets of naturals, and
//! `n ∈ X·Y` exactly when X holds an axiom `pair(n,u)` whose finite premise
//! set `D_u` (the bit positions of u) lies inside Y. Application is total
//! and Scott-continuous; equality is stage-agreement — every set is viewed
//! through finite, monotone approximations indexed by a stage number.
//!
//! Sets come in three kinds: explicit finite sets, machine-enumerated sets
//! (a program maps each stage to "element+1" or 0 for none), and lazy
//! applications. The combinators k and s are enumerated sets whose stage
//! programs generate exactly the axiom families the laws need over the
//! desk-scale working range.

use crate::machine::{asm::Asm, encode_program, recursion, run_index, Budget, EvalOutcome, Oracle};
use crate::nat::{pair, set_decode, set_encode, unpair, Nat};
use crate::term::Term;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Fuel for one stage of an enumerator run. Stages that overrun are skipped
/// for good — determinism demands the limit never move.
pub const PER_STAGE_FUEL: u64 = 8192;

/// Stage by which the s combinator's generator has produced every axiom
/// relevant to arguments over {0..63}.
pub const S_FULL_STAGE: u64 = 65_536;

/// A machine-enumerated c.e. set with a memoized stage table.
pub struct Enumerator {
    pub label: String,
    pub prog: Nat,
    stages: Mutex<Vec<Option<Nat>>>,
}

impl Enumerator {
    fn approx(&self, stage: u64) -> BTreeSet<Nat> {
        assert!(stage <= 1 << 21, "stage {stage} beyond desk scale");
        let mut table = self.stages.lock().expect("enumerator cache poisoned");
        while (table.len() as u64) < stage {
            let t = Nat::from_u64(table.len() as u64);
            let budget = Budget::new(PER_STAGE_FUEL, 1, 1);
            let entry = match run_index(&self.prog, &t, &Oracle::Empty, &budget) {
                EvalOutcome::Halted(v) if !v.is_zero() => Some(v.pred()),
                _ => None,
            };
            table.push(entry);
        }
        table[..stage as usize]
            .iter()
            .flatten()
            .cloned()
            .collect()
    }
}

#[derive(Clone)]
pub enum GSet {
    Finite(BTreeSet<Nat>),
    Enumerated(Arc<Enumerator>),
    Applied(Box<GSet>, Box<GSet>),
}

impl GSet {
    pub fn empty() -> GSet {
        GSet::Finite(BTreeSet::new())
    }

    pub fn finite<I: IntoIterator<Item = u64>>(elems: I) -> GSet {
        GSet::Finite(elems.into_iter().map(Nat::from_u64).collect())
    }

    pub fn enumerated(label: impl Into<String>, prog: Nat) -> GSet {
        GSet::Enumerated(Arc::new(Enumerator {
            label: label.into(),
            prog,
            stages: Mutex::new(Vec::new()),
        }))
    }

    /// The finite stage-s approximation. Monotone in s by construction.
    pub fn approx(&self, stage: u64) -> BTreeSet<Nat> {
        match self {
            GSet::Finite(set) => set.clone(),
            GSet::Enumerated(e) => e.approx(stage),
            GSet::Applied(l, r) => apply_finite(&l.approx(stage), &r.approx(stage)),
        }
    }
}

impl fmt::Display for GSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GSet::Finite(set) => {
                write!(f, "{{")?;
                for (i, v) in set.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "}}")
            }
            GSet::Enumerated(e) => write!(f, "{}", e.label),
            GSet::Applied(l, r) => write!(f, "({l} {r})"),
        }
    }
}

/// One application step on explicit finite sets:
/// {n : ∃u, pair(n,u) ∈ x ∧ D_u ⊆ y}.
pub fn apply_finite(x: &BTreeSet<Nat>, y: &BTreeSet<Nat>) -> BTreeSet<Nat> {
    let mut out = BTreeSet::new();
    for e in x {
        let (n, u) = unpair(e);
        if set_decode(&u).is_subset(y) {
            out.insert(n);
        }
    }
    out
}

/// X·Y, lazily: approximations apply the stage-matched approximations.
pub fn g_apply(x: &GSet, y: &GSet) -> GSet {
    GSet::Applied(Box::new(x.clone()), Box::new(y.clone()))
}

/// The stage-s value of X·Y.
pub fn g_apply_at(x: &GSet, y: &GSet, stage: u64) -> BTreeSet<Nat> {
    g_apply(x, y).approx(stage)
}

/// Stage-agreement: equal approximations at the given stage, or the least
/// element on which they differ.
pub fn g_eq(a: &GSet, b: &GSet, stage: u64) -> Result<(), Nat> {
    let sa = a.approx(stage);
    let sb = b.approx(stage);
    match sa.symmetric_difference(&sb).next() {
        None => Ok(()),
        Some(d) => Err(d.clone()),
    }
}

/// Stage-agreement restricted to elements below a bound.
pub fn g_eq_below(a: &GSet, b: &GSet, stage: u64, bound: u64) -> Result<(), Nat> {
    let cap = Nat::from_u64(bound);
    let sa: BTreeSet<_> = a.approx(stage).into_iter().filter(|v| *v < cap).collect();
    let sb: BTreeSet<_> = b.approx(stage).into_iter().filter(|v| *v < cap).collect();
    match sa.symmetric_difference(&sb).next() {
        None => Ok(()),
        Some(d) => Err(d.clone()),
    }
}

/// How far the k combinator's axiom family reaches: k_G·X·Y = X holds
/// exactly for X with elements below this.
pub const K_HEAD_BOUND: u64 = 256;

fn k_enum_program() -> Nat {
    // Stage s < K_HEAD_BOUND emits pair(pair(s,0), 2^s) + 1: the axiom
    // putting s into k·X·Y whenever s ∈ X (premise on the first argument
    // only, nothing asked of the second).
    let mut a = Asm::new();
    a.cnst(1, K_HEAD_BOUND)
        .sub(2, 1, 0)
        .decjmp(2, "dead")
        .cnst(3, 0u64)
        .pair(4, 0, 3) // pair(s, 0)
        .cnst(5, 1u64)
        .cnst(7, 2u64)
        .copy(6, 0)
        .label("dbl")
        .decjmp(6, "fin")
        .mul(5, 5, 7)
        .jump("dbl")
        .label("fin")
        .pair(0, 4, 5) // pair(pair(s,0), 2^s)
        .inc(0)
        .halt(0)
        .label("dead")
        .cnst(0, 0u64)
        .halt(0);
    encode_program(&a.finish())
}

/// The k combinator as an enumerated set.
pub fn graph_k() -> GSet {
    static CELL: OnceLock<GSet> = OnceLock::new();
    CELL.get_or_init(|| GSet::enumerated("kG", k_enum_program()))
        .clone()
}

fn s_enum_program() -> Nat {
    // Stage s = c·1024 + w. c < 64 is the code of one axiom pair(pair(n,a),b)
    // of the first argument X; w spells out, in base 10, one choice of
    // second-argument axiom code c_m for each m ∈ D_a. The emitted axiom is
    //   pair(pair(pair(n, z-premises), y-premises), 2^c) + 1
    // where the y-premise set is {pair(m,c_m) : m ∈ D_a} and the z-premise
    // set is D_b ∪ ⋃_m D_{c_m}. Firing it needs: that X-axiom present, those
    // Y-axioms present, and all their Z-side premises in Z — exactly the
    // witness shape of n ∈ (X·Z)·(Y·Z), so the law is exact once every
    // relevant (c, w) block has been visited.
    let mut a = Asm::new();
    a.cnst(20, 1024u64)
        .div(1, 0, 20) // c
        .mul(21, 1, 20)
        .sub(2, 0, 21) // w
        .cnst(20, 64u64)
        .sub(21, 20, 1)
        .decjmp(21, "dead")
        .unpair(3, 4, 1) // t = pair(n,a), b
        .unpair(5, 6, 3); // n, a
    // Digit extraction: for m in 0..4, if a has bit m, take the next base-10
    // digit of w as c_m (value in r10+m, presence flag in r14+m).
    for m in 0..4u64 {
        a.cnst(20, 1u64 << m)
            .div(21, 6, 20)
            .cnst(22, 2u64)
            .div(23, 21, 22)
            .mul(23, 23, 22)
            .sub(23, 21, 23)
            .decjmp(23, &format!("a_no{m}"))
            .cnst(22, 10u64)
            .div(23, 2, 22)
            .mul(24, 23, 22)
            .sub(10 + m, 2, 24) // d_m = w mod 10
            .copy(2, 23) // w /= 10
            .cnst(14 + m, 1u64)
            .label(&format!("a_no{m}"));
    }
    // Y-premise mask in r7: sum of 2^pair(m, d_m) over present m.
    for m in 0..4u64 {
        a.copy(20, 14 + m)
            .decjmp(20, &format!("u2_no{m}"))
            .cnst(21, m)
            .pair(22, 21, 10 + m)
            .cnst(23, 1u64)
            .cnst(24, 2u64)
            .label(&format!("u2_dbl{m}"))
            .decjmp(22, &format!("u2_fin{m}"))
            .mul(23, 23, 24)
            .jump(&format!("u2_dbl{m}"))
            .label(&format!("u2_fin{m}"))
            .add(7, 7, 23)
            .label(&format!("u2_no{m}"));
    }
    // Z-premise mask in r8: bit i set when b or any present d_m has bit i.
    a.cnst(26, 12u64).cnst(27, 1u64).label("u3_loop").decjmp(26, "u3_done");
    a.cnst(22, 2u64)
        .div(21, 4, 27)
        .div(23, 21, 22)
        .mul(23, 23, 22)
        .sub(28, 21, 23); // indicator := bit_i(b)
    for m in 0..4u64 {
        a.div(21, 10 + m, 27)
            .div(23, 21, 22)
            .mul(23, 23, 22)
            .sub(23, 21, 23)
            .mul(23, 23, 14 + m)
            .add(28, 28, 23);
    }
    a.decjmp(28, "u3_skip")
        .add(8, 8, 27)
        .label("u3_skip")
        .cnst(22, 2u64)
        .mul(27, 27, 22)
        .jump("u3_loop")
        .label("u3_done");
    // Assemble pair(pair(pair(n, r8), r7), 2^c) + 1.
    a.pair(9, 5, 8)
        .pair(9, 9, 7)
        .copy(21, 1)
        .cnst(22, 1u64)
        .cnst(23, 2u64)
        .label("c_dbl")
        .decjmp(21, "c_fin")
        .mul(22, 22, 23)
        .jump("c_dbl")
        .label("c_fin")
        .pair(0, 9, 22)
        .inc(0)
        .halt(0)
        .label("dead")
        .cnst(0, 0u64)
        .halt(0);
    encode_program(&a.finish())
}

/// The s combinator as an enumerated set; full over arguments ⊆ {0..63} by
/// stage [`S_FULL_STAGE`].
pub fn graph_s() -> GSet {
    static CELL: OnceLock<GSet> = OnceLock::new();
    CELL.get_or_init(|| GSet::enumerated("sG", s_enum_program()))
        .clone()
}

/// One line of a finite operator table: these exact inputs produce exactly
/// this output.
#[derive(Debug, Clone)]
pub struct CurryRow {
    pub inputs: Vec<BTreeSet<Nat>>,
    pub output: BTreeSet<Nat>,
}

impl CurryRow {
    pub fn new<I, O>(inputs: Vec<I>, output: O) -> CurryRow
    where
        I: IntoIterator<Item = u64>,
        O: IntoIterator<Item = u64>,
    {
        CurryRow {
            inputs: inputs
                .into_iter()
                .map(|s| s.into_iter().map(Nat::from_u64).collect())
                .collect(),
            output: output.into_iter().map(Nat::from_u64).collect(),
        }
    }
}

/// Why a table cannot be the graph of a monotone operator: the inputs of
/// `smaller_row` are pointwise contained in those of `larger_row`, yet
/// `lost` is produced only by the smaller one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonicityViolation {
    pub smaller_row: usize,
    pub larger_row: usize,
    pub lost: Nat,
}

impl fmt::Display for MonotonicityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "row {} has inputs below row {} but its output element {} disappears",
            self.smaller_row, self.larger_row, self.lost
        )
    }
}

/// Compile a finite monotone operator table into a single set G with
/// G·Y₁·…·Y_k = F(Y₁,…,Y_k) on the covered fragment: each output element
/// becomes one curried axiom whose premise at depth i is the row's i-th
/// input. Tables that shrink anywhere are rejected with a witness.
pub fn curry_operator(rows: &[CurryRow]) -> Result<GSet, MonotonicityViolation> {
    let arity = rows.first().map(|r| r.inputs.len()).unwrap_or(0);
    assert!(
        rows.iter().all(|r| r.inputs.len() == arity),
        "all rows must share one arity"
    );
    for (i, small) in rows.iter().enumerate() {
        for (j, large) in rows.iter().enumerate() {
            if i == j {
                continue;
            }
            let below = small
                .inputs
                .iter()
                .zip(&large.inputs)
                .all(|(a, b)| a.is_subset(b));
            if !below {
                continue;
            }
            if let Some(lost) = small.output.difference(&large.output).next() {
                return Err(MonotonicityViolation {
                    smaller_row: i,
                    larger_row: j,
                    lost: lost.clone(),
                });
            }
        }
    }
    let mut axioms = BTreeSet::new();
    for row in rows {
        for n in &row.output {
            let mut acc = n.clone();
            for input in row.inputs.iter().rev() {
                acc = pair(&acc, &set_encode(input));
            }
            axioms.insert(acc);
        }
    }
    Ok(GSet::Finite(axioms))
}

/// The union detector R: R·X·Y = {0}, plus 1 exactly when 0 ∈ X ∪ Y.
pub fn gadget_r() -> GSet {
    static CELL: OnceLock<GSet> = OnceLock::new();
    CELL.get_or_init(|| {
        let rows = [
            CurryRow::new::<[u64; 0], _>(vec![[], []], [0]),
            CurryRow::new(vec![vec![0u64], vec![]], [0, 1]),
            CurryRow::new(vec![vec![], vec![0u64]], [0, 1]),
            CurryRow::new(vec![vec![0u64], vec![0u64]], [0, 1]),
        ];
        curry_operator(&rows).expect("the union detector's table is monotone")
    })
    .clone()
}

/// The joined code X⊕X̄ materialized below a bound: 2n for members, 2n+1 for
/// non-members, one of each per n.
pub fn joined_code(x: &BTreeSet<Nat>, bound: u64) -> GSet {
    let mut out = BTreeSet::new();
    for n in 0..bound {
        let nn = Nat::from_u64(n);
        out.insert(Nat::from_u64(if x.contains(&nn) { 2 * n } else { 2 * n + 1 }));
    }
    GSet::Finite(out)
}

/// The difference amplifier C for a proper inclusion A ⊊ B: applied to two
/// joined codes it yields A when they agree below the bound and B when any
/// disagreement point exists (the 2n-vs-2n+1 evidence fires the B rows).
pub fn gadget_c(a: &BTreeSet<Nat>, b: &BTreeSet<Nat>, bound: u64) -> GSet {
    assert!(
        a.is_subset(b) && a != b,
        "the amplifier needs a proper inclusion A ⊊ B"
    );
    let to_u64 = |s: &BTreeSet<Nat>| {
        s.iter()
            .map(|v| v.to_u64().expect("desk-scale amplifier sets"))
            .collect::<Vec<_>>()
    };
    let (av, bv) = (to_u64(a), to_u64(b));
    let mut rows = vec![CurryRow::new::<[u64; 0], _>(vec![[], []], av.clone())];
    let mut ab = av;
    ab.extend(bv);
    for n in 0..bound {
        rows.push(CurryRow::new(vec![vec![2 * n], vec![2 * n + 1]], ab.clone()));
        rows.push(CurryRow::new(vec![vec![2 * n + 1], vec![2 * n]], ab.clone()));
    }
    curry_operator(&rows).expect("the amplifier's table is monotone")
}

/// Search for a finite W with W·Y = Z below the bound (replay-validated).
/// Desk-scale Z are all finitely reducible, so the interesting content is
/// the witness itself.
pub fn e_reduces(z: &GSet, y: &GSet, stage: u64, bound: u64) -> Option<BTreeSet<Nat>> {
    let cap = Nat::from_u64(bound);
    let z_set: BTreeSet<_> = z.approx(stage).into_iter().filter(|v| *v < cap).collect();
    let y_set = y.approx(stage);
    let mut w = BTreeSet::new();
    for n in &z_set {
        let u = (0..64)
            .map(Nat::from_u64)
            .find(|u| set_decode(u).is_subset(&y_set))?;
        w.insert(pair(n, &u));
    }
    if apply_finite(&w, &y_set) == z_set {
        Some(w)
    } else {
        None
    }
}

/// How deep [`swap_index`] programs look: premises up to {0..3}, heads up to
/// 15, enumerations of the swapped program approximated to this stage.
pub const SWAP_EVAL_STAGE: u64 = 16;

fn swap_template_index() -> &'static Nat {
    static CELL: OnceLock<Nat> = OnceLock::new();
    CELL.get_or_init(|| {
        // Input pair(e, s) with s = u·16 + n: emit pair(n, 2^pair(n,u)) + 1
        // after verifying D_u ⊆ W_e by replaying e's first 16 stages per
        // premise element.
        let mut a = Asm::new();
        a.unpair(1, 2, 0) // e, s
            .cnst(20, 16u64)
            .div(5, 2, 20) // u
            .mul(21, 5, 20)
            .sub(6, 2, 21) // n
            .cnst(21, 16u64)
            .sub(22, 21, 5)
            .decjmp(22, "dead")
            .cnst(7, 1u64) // 2^i
            .cnst(8, 4u64) // premise bits to scan
            .cnst(9, 0u64) // i
            .label("iloop")
            .decjmp(8, "checked")
            .cnst(22, 2u64)
            .div(23, 5, 7)
            .div(24, 23, 22)
            .mul(24, 24, 22)
            .sub(24, 23, 24) // bit i of u
            .decjmp(24, "inext")
            .cnst(10, 0u64) // witness found?
            .cnst(11, 16u64) // e-stages to replay
            .cnst(12, 0u64) // j
            .cnst(13, 0u64)
            .label("jloop")
            .decjmp(11, "jdone")
            .call(14, 1, 12, 13) // Φ_e(j)
            .copy(15, 9)
            .inc(15) // target i+1
            .sub(16, 14, 15)
            .sub(17, 15, 14)
            .add(16, 16, 17)
            .decjmp(16, "hit")
            .jump("jnext")
            .label("hit")
            .cnst(10, 1u64)
            .label("jnext")
            .inc(12)
            .jump("jloop")
            .label("jdone")
            .decjmp(10, "dead") // premise element never appeared
            .label("inext")
            .cnst(22, 2u64)
            .mul(7, 7, 22)
            .inc(9)
            .jump("iloop")
            .label("checked")
            .pair(18, 6, 5) // pair(n, u)
            .cnst(19, 1u64)
            .cnst(22, 2u64)
            .label("qdbl")
            .decjmp(18, "qfin")
            .mul(19, 19, 22)
            .jump("qdbl")
            .label("qfin")
            .pair(0, 6, 19)
            .inc(0)
            .halt(0)
            .label("dead")
            .cnst(0, 0u64)
            .halt(0);
        encode_program(&a.finish())
    })
}

/// The symmetric-application index: for an enumerator program e, a program d
/// with W_d·X = X·W_e on the covered fragment (heads < 16, premises ⊆ {0..3},
/// e approximated to [`SWAP_EVAL_STAGE`]). Covers every X ⊆ {0..63}.
pub fn swap_index(e: &Nat) -> Nat {
    recursion::smn1(swap_template_index(), e)
}

/// The numeral value-sets: b_n = {4n+2}.
pub fn graph_numeral(n: u64) -> GSet {
    GSet::finite([4 * n + 2])
}

/// The numeral seed Z₀: Z₀·Z₀ = b₀ and Z₀·b_n = b_{n+1} exactly, for n < 16.
/// Every element of Z₀ is odd while numeral members 4n+2 are even, so no
/// axiom fires by accident.
pub fn numeral_seed() -> GSet {
    static CELL: OnceLock<GSet> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut set = BTreeSet::new();
        // pair(6, code({2})) = 59, which this axiom's own premise names:
        // {59} ⊆ Z₀ makes Z₀·Z₀ = {2} = b₀.
        let fifty_nine = pair(&Nat::from_u64(6), &set_encode(&[Nat::from_u64(2)].into()));
        assert_eq!(fifty_nine, Nat::from_u64(59));
        set.insert(pair(
            &Nat::from_u64(2),
            &set_encode(&[fifty_nine].into()),
        ));
        for n in 0..16u64 {
            set.insert(pair(
                &Nat::from_u64(4 * (n + 1) + 2),
                &set_encode(&[Nat::from_u64(4 * n + 2)].into()),
            ));
        }
        GSet::Finite(set)
    })
    .clone()
}

/// The ten catalog enumerators the term-synthesis generator recognizes.
pub fn catalog_programs() -> &'static Vec<Nat> {
    static CELL: OnceLock<Vec<Nat>> = OnceLock::new();
    CELL.get_or_init(|| {
        let enc = |a: &mut Asm| encode_program(&a.finish());
        let mut out = Vec::new();
        // ∅
        let mut a = Asm::new();
        a.cnst(0, 0u64).halt(0);
        out.push(enc(&mut a));
        // {0}
        let mut a = Asm::new();
        a.decjmp(0, "e").cnst(0, 0u64).halt(0).label("e").cnst(0, 1u64).halt(0);
        out.push(enc(&mut a));
        // evens below 16
        let mut a = Asm::new();
        a.cnst(1, 8u64)
            .sub(2, 1, 0)
            .decjmp(2, "z")
            .cnst(3, 2u64)
            .mul(0, 0, 3)
            .inc(0)
            .halt(0)
            .label("z")
            .cnst(0, 0u64)
            .halt(0);
        out.push(enc(&mut a));
        // {0..9}
        let mut a = Asm::new();
        a.cnst(1, 10u64)
            .sub(2, 1, 0)
            .decjmp(2, "z")
            .inc(0)
            .halt(0)
            .label("z")
            .cnst(0, 0u64)
            .halt(0);
        out.push(enc(&mut a));
        // squares below 64
        let mut a = Asm::new();
        a.cnst(1, 8u64)
            .sub(2, 1, 0)
            .decjmp(2, "z")
            .mul(0, 0, 0)
            .inc(0)
            .halt(0)
            .label("z")
            .cnst(0, 0u64)
            .halt(0);
        out.push(enc(&mut a));
        // {1}
        let mut a = Asm::new();
        a.decjmp(0, "e").cnst(0, 0u64).halt(0).label("e").cnst(0, 2u64).halt(0);
        out.push(enc(&mut a));
        // {5, 7}
        let mut a = Asm::new();
        a.decjmp(0, "a")
            .decjmp(0, "b")
            .cnst(0, 0u64)
            .halt(0)
            .label("a")
            .cnst(0, 6u64)
            .halt(0)
            .label("b")
            .cnst(0, 8u64)
            .halt(0);
        out.push(enc(&mut a));
        // odds below 10
        let mut a = Asm::new();
        a.cnst(1, 5u64)
            .sub(2, 1, 0)
            .decjmp(2, "z")
            .cnst(3, 2u64)
            .mul(0, 0, 3)
            .inc(0)
            .inc(0)
            .halt(0)
            .label("z")
            .cnst(0, 0u64)
            .halt(0);
        out.push(enc(&mut a));
        // {0..7}
        let mut a = Asm::new();
        a.cnst(1, 8u64)
            .sub(2, 1, 0)
            .decjmp(2, "z")
            .inc(0)
            .halt(0)
            .label("z")
            .cnst(0, 0u64)
            .halt(0);
        out.push(enc(&mut a));
        // powers of two below 64
        let mut a = Asm::new();
        a.cnst(1, 6u64)
            .sub(2, 1, 0)
            .decjmp(2, "z")
            .cnst(3, 1u64)
            .cnst(4, 2u64)
            .label("l")
            .decjmp(0, "d")
            .mul(3, 3, 4)
            .jump("l")
            .label("d")
            .copy(0, 3)
            .inc(0)
            .halt(0)
            .label("z")
            .cnst(0, 0u64)
            .halt(0);
        out.push(enc(&mut a));
        out
    })
}

fn j_template_index() -> Nat {
    // Input pair(p₀, pair(p₁, … pair(p₉, s)…)): stage s = 10σ + m asks
    // catalog program m for its σ-th element x and, if present, emits the
    // axiom pair(x, 2^(4m+2)) + 1 — premise "the numeral b_m".
    let mut a = Asm::new();
    a.unpair(1, 20, 0);
    for i in 1..10u64 {
        a.unpair(1 + i, 20 + i, 19 + i);
    }
    a.cnst(30, 10u64)
        .div(31, 29, 30) // σ
        .mul(32, 31, 30)
        .sub(33, 29, 32) // m
        .copy(35, 33);
    for i in 0..10u64 {
        a.decjmp(35, &format!("sel{i}"));
    }
    a.cnst(0, 0u64).halt(0);
    for i in 0..10u64 {
        a.label(&format!("sel{i}")).copy(34, 1 + i).jump("selected");
    }
    a.label("selected")
        .cnst(36, 0u64)
        .call(37, 34, 31, 36) // x = Φ_{p_m}(σ)
        .decjmp(37, "none") // x = 0 means nothing this stage; else r37 = x−1
        .cnst(38, 4u64)
        .mul(38, 38, 33)
        .cnst(39, 2u64)
        .add(38, 38, 39) // 4m+2
        .cnst(40, 1u64)
        .label("jdbl")
        .decjmp(38, "jfin")
        .mul(40, 40, 39)
        .jump("jdbl")
        .label("jfin")
        .pair(0, 37, 40)
        .inc(0)
        .halt(0)
        .label("none")
        .cnst(0, 0u64)
        .halt(0);
    encode_program(&a.finish())
}

/// The term-synthesis generator J: J·b_n = W_{catalog n}, exactly, because
/// each axiom's premise is the one-element numeral it serves.
pub fn generator_j() -> GSet {
    static CELL: OnceLock<GSet> = OnceLock::new();
    CELL.get_or_init(|| {
        let prog = recursion::smn(&j_template_index(), catalog_programs());
        GSet::enumerated("J", prog)
    })
    .clone()
}

/// The generator environment for term synthesis.
pub fn standard_generators() -> BTreeMap<String, GSet> {
    let mut env = BTreeMap::new();
    env.insert("kG".to_string(), graph_k());
    env.insert("sG".to_string(), graph_s());
    env.insert("J".to_string(), generator_j());
    env.insert("Z0".to_string(), numeral_seed());
    env
}

/// Evaluate a closed-over-generators term in the model.
pub fn eval_term(t: &Term, env: &BTreeMap<String, GSet>) -> Result<GSet, String> {
    match t {
        Term::Var(name) => env
            .get(name)
            .cloned()
            .ok_or_else(|| format!("unknown generator {name}")),
        Term::App(f, x) => Ok(g_apply(&eval_term(f, env)?, &eval_term(x, env)?)),
    }
}

/// The closed term over {kG, sG, J, Z0} whose value is W_n for a catalog
/// index n < 10: J applied to the n-th numeral tower.
pub fn term_for_w(n: usize) -> Option<Term> {
    if n >= catalog_programs().len() {
        return None;
    }
    let z0 = || Term::Var("Z0".to_string());
    let mut numeral = Term::App(Box::new(z0()), Box::new(z0()));
    for _ in 0..n {
        numeral = Term::App(Box::new(z0()), Box::new(numeral));
    }
    Some(Term::App(Box::new(Term::Var("J".to_string())), Box::new(numeral)))
}
