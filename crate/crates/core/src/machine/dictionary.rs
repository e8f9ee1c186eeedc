//! The reserved program dictionary and the working program numbering.
//!
//! The models need a handful of template programs to sit at *small* indices:
//! sequence application in the 0/1 model scans an argument's first 32 bits
//! for a header, so every header a combinator can carry must be below 32, and
//! the graph-coded embedding searches for function values by counting up from
//! zero, which only terminates quickly when those values are small.
//!
//! The working numbering therefore overlays a fixed dictionary on the raw
//! program coding: indices `0..COUNT` name the dictionary programs, and the
//! remaining indices enumerate all other programs in raw-code order, skipping
//! the dictionary members' raw codes so the overall map stays a bijection.
//!
//! Dictionary programs may mention other dictionary programs only by slot
//! number (the slot constants below appear as literals inside them), never by
//! raw code, so the table can be built without consulting itself.

use super::asm::Asm;
use super::program::{decode_raw, decode_raw_bounded, encode_raw, Program};
use crate::nat::Nat;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

/// Slot numbers of the dictionary programs. The first six sit below the
/// header scan bound on purpose; the rest just need to be small.
pub mod slot {
    /// 0/1 model: header carried by `k`; computes the `k·X` sequence.
    pub const K201_K_HEAD: u64 = 0;
    /// 0/1 model: header carried by `k·X`; projects `X` back out.
    pub const K201_K_PROJ: u64 = 1;
    /// 0/1 model: header carried by `s`.
    pub const K201_S1: u64 = 2;
    /// 0/1 model: header carried by `s·X`.
    pub const K201_S2: u64 = 3;
    /// 0/1 model: header carried by `s·X·Y`; computes `(X·Z)(Y·Z)`.
    pub const K201_S3: u64 = 4;
    /// Header position of every graph-coded image in the function-sequence
    /// embedding; evaluates applications on graph codes.
    pub const EMBED_GRAPH: u64 = 5;
    /// Sequence model over ℕ: value of `k` at 0.
    pub const K2_K_HEAD: u64 = 6;
    /// Sequence model over ℕ: value of `k·X` at 0.
    pub const K2_K_PROJ: u64 = 7;
    /// Sequence model over ℕ: value of `s` at 0.
    pub const K2_S1: u64 = 8;
    /// Sequence model over ℕ: value of `s·X` at 0.
    pub const K2_S2: u64 = 9;
    /// Sequence model over ℕ: value of `s·X·Y` at 0.
    pub const K2_S3: u64 = 10;
    /// Oracle adapter: presents `X⊕Z` on top of an `(s·X·Y)⊕Z` environment.
    pub const K2_VXZ: u64 = 11;
    /// Oracle adapter: presents `Y⊕Z` on top of an `(s·X·Y)⊕Z` environment.
    pub const K2_VYZ: u64 = 12;
    /// Oracle adapter: presents `(X·Z)⊕(Y·Z)` there.
    pub const K2_VFIN: u64 = 13;
    /// 0/1-model analogue of [`K2_VXZ`].
    pub const K201_VXZ: u64 = 14;
    /// 0/1-model analogue of [`K2_VYZ`].
    pub const K201_VYZ: u64 = 15;
    /// 0/1-model analogue of [`K2_VFIN`].
    pub const K201_VFIN: u64 = 16;
    /// Oracle adapter: reconstructs `f⊕g` from the graph codes of `f` and
    /// `g` for [`EMBED_GRAPH`].
    pub const EMBED_PSI: u64 = 17;

    pub const COUNT: u64 = 18;
}

/// Positions a combinator header may occupy; sequence application in the 0/1
/// model gives up scanning for a header at this bound.
pub const HEADER_SCAN: u64 = 32;

// The 0/1-model templates lay a result sequence out as: zeros below
// HEADER_SCAN except a single 1 naming the next template, then the argument
// data from position HEADER_SCAN upward. All positions here are *joined*
// positions: a query at 2p reads the left sequence at p, a query at 2p+1
// reads the right sequence at p.

fn k201_k_head() -> Program {
    // Computes k·A given ambient k⊕A: header 1 at position K201_K_PROJ,
    // A(m) at position 32+m.
    let mut a = Asm::new();
    a.copy(1, 0)
        .decjmp(1, "zero") // n == 0
        .decjmp(1, "one") // n == 1: the carried header
        .cnst(2, 31u64)
        .sub(3, 0, 2)
        .decjmp(3, "zero") // n ≤ 31
        .add(3, 3, 3) // r3 = n−32 after the decrement
        .inc(3)
        .query(0, 3) // A(n−32) at joined position 2(n−32)+1
        .halt(0)
        .label("zero")
        .cnst(0, 0u64)
        .halt(0)
        .label("one")
        .cnst(0, 1u64)
        .halt(0);
    a.finish()
}

fn k201_k_proj() -> Program {
    // Computes (k·A)·B = A given ambient (k·A)⊕B: A(n) sits at position
    // 32+n of the left sequence.
    let mut a = Asm::new();
    a.add(0, 0, 0)
        .cnst(1, 64u64)
        .add(0, 0, 1)
        .query(0, 0)
        .halt(0);
    a.finish()
}

fn k201_s1() -> Program {
    // s·X given s⊕X: header at K201_S2, X from 32 up.
    let mut a = Asm::new();
    a.cnst(2, 3u64)
        .sub(1, 0, 2)
        .sub(3, 2, 0)
        .add(1, 1, 3)
        .decjmp(1, "one") // n == 3
        .cnst(2, 31u64)
        .sub(3, 0, 2)
        .decjmp(3, "zero")
        .add(3, 3, 3)
        .inc(3)
        .query(0, 3)
        .halt(0)
        .label("one")
        .cnst(0, 1u64)
        .halt(0)
        .label("zero")
        .cnst(0, 0u64)
        .halt(0);
    a.finish()
}

fn k201_s2() -> Program {
    // (s·X)·Y given (s·X)⊕Y: header at K201_S3; X interleaved at 32+2m
    // (read through the left sequence's own data area), Y at 32+2m+1.
    let mut a = Asm::new();
    a.cnst(2, 4u64)
        .sub(1, 0, 2)
        .sub(3, 2, 0)
        .add(1, 1, 3)
        .decjmp(1, "one") // n == 4
        .cnst(2, 31u64)
        .sub(3, 0, 2)
        .decjmp(3, "zero") // else r3 = t = n−32
        .cnst(2, 2u64)
        .div(4, 3, 2)
        .mul(5, 4, 2)
        .sub(2, 3, 5) // t mod 2
        .decjmp(2, "even")
        .query(0, 3) // odd: Y(m) at joined position t
        .halt(0)
        .label("even")
        .cnst(1, 64u64)
        .add(1, 1, 3) // X(m) = left(32 + t/2 + ...) — left(32+m) at joined 64+t
        .query(0, 1)
        .halt(0)
        .label("one")
        .cnst(0, 1u64)
        .halt(0)
        .label("zero")
        .cnst(0, 0u64)
        .halt(0);
    a.finish()
}

fn k201_s3() -> Program {
    // (s·X·Y)·Z = (X·Z)(Y·Z) given ambient A = (s·X·Y)⊕Z, where
    // X(i) = A(64+4i), Y(i) = A(66+4i), Z(m) = A(2m+1).
    let mut a = Asm::new();
    a.copy(20, 0);
    // hx := least i < 32 with X(i) = 1
    a.cnst(5, 0u64).cnst(6, 32u64);
    a.label("sx")
        .decjmp(6, "diverge")
        .cnst(7, 4u64)
        .mul(7, 7, 5)
        .cnst(8, 64u64)
        .add(7, 7, 8)
        .query(7, 7)
        .decjmp(7, "sx_next")
        .jump("sx_done")
        .label("sx_next")
        .inc(5)
        .jump("sx");
    // hxz := least j < 32 with (X·Z)(j) = 1
    a.label("sx_done").cnst(9, 0u64).cnst(10, 32u64).cnst(
        11,
        slot::K201_VXZ + 1,
    );
    a.label("sz")
        .decjmp(10, "diverge")
        .call(12, 5, 9, 11)
        .cnst(13, 2u64)
        .div(14, 12, 13)
        .mul(14, 14, 13)
        .sub(12, 12, 14)
        .decjmp(12, "sz_next")
        .jump("sz_done")
        .label("sz_next")
        .inc(9)
        .jump("sz");
    // output ((X·Z)(Y·Z))(n)
    a.label("sz_done")
        .cnst(11, slot::K201_VFIN + 1)
        .call(0, 9, 20, 11)
        .cnst(13, 2u64)
        .div(14, 0, 13)
        .mul(14, 14, 13)
        .sub(0, 0, 14)
        .halt(0)
        .label("diverge")
        .jump("diverge");
    a.finish()
}

fn k201_vxz() -> Program {
    // q even → X(q/2) = A(64+2q); q odd → Z((q−1)/2) = A(q).
    let mut a = Asm::new();
    a.cnst(2, 2u64)
        .div(3, 0, 2)
        .mul(4, 3, 2)
        .sub(2, 0, 4)
        .decjmp(2, "even")
        .query(0, 0)
        .halt(0)
        .label("even")
        .add(1, 0, 0)
        .cnst(2, 64u64)
        .add(1, 1, 2)
        .query(0, 1)
        .halt(0);
    a.finish()
}

fn k201_vyz() -> Program {
    // q even → Y(q/2) = A(66+2q); q odd → Z((q−1)/2) = A(q).
    let mut a = Asm::new();
    a.cnst(2, 2u64)
        .div(3, 0, 2)
        .mul(4, 3, 2)
        .sub(2, 0, 4)
        .decjmp(2, "even")
        .query(0, 0)
        .halt(0)
        .label("even")
        .add(1, 0, 0)
        .cnst(2, 66u64)
        .add(1, 1, 2)
        .query(0, 1)
        .halt(0);
    a.finish()
}

fn k201_vfin() -> Program {
    // q even → (X·Z)(q/2); q odd → (Y·Z)((q−1)/2). Headers are rescanned on
    // every request: the adapter gets no state beyond the ambient bits.
    let mut a = Asm::new();
    a.cnst(2, 2u64)
        .div(3, 0, 2) // m
        .mul(4, 3, 2)
        .sub(2, 0, 4)
        .decjmp(2, "even");
    // odd: scan Y's header, then run it against Y⊕Z
    a.cnst(5, 0u64).cnst(6, 32u64);
    a.label("sy")
        .decjmp(6, "diverge")
        .cnst(7, 4u64)
        .mul(7, 7, 5)
        .cnst(8, 66u64)
        .add(7, 7, 8)
        .query(7, 7)
        .decjmp(7, "sy_next")
        .jump("sy_done")
        .label("sy_next")
        .inc(5)
        .jump("sy");
    a.label("sy_done")
        .cnst(11, slot::K201_VYZ + 1)
        .call(0, 5, 3, 11)
        .jump("modout");
    // even: scan X's header, then run it against X⊕Z
    a.label("even").cnst(5, 0u64).cnst(6, 32u64);
    a.label("sx")
        .decjmp(6, "diverge")
        .cnst(7, 4u64)
        .mul(7, 7, 5)
        .cnst(8, 64u64)
        .add(7, 7, 8)
        .query(7, 7)
        .decjmp(7, "sx_next")
        .jump("sx_done")
        .label("sx_next")
        .inc(5)
        .jump("sx");
    a.label("sx_done")
        .cnst(11, slot::K201_VXZ + 1)
        .call(0, 5, 3, 11);
    a.label("modout")
        .cnst(13, 2u64)
        .div(14, 0, 13)
        .mul(14, 14, 13)
        .sub(0, 0, 14)
        .halt(0)
        .label("diverge")
        .jump("diverge");
    a.finish()
}

fn embed_graph() -> Program {
    // Bits of F(f)·F(g) given ambient F(f)⊕F(g), where F(h) marks position 5
    // and stores the graph bit [h(x) = y] at position 6 + pair(x,y).
    // Output: F(f·g) — the same marker, and graph bits of Φ_{f(0)} under f⊕g.
    let mut a = Asm::new();
    a.cnst(1, 5u64)
        .sub(2, 0, 1)
        .sub(3, 1, 0)
        .decjmp(2, "le5") // n ≤ 5; else r2 = n−6
        .unpair(4, 5, 2); // x, y
    // f(0): least i with the graph bit of (0, i) set on the left sequence
    a.cnst(6, 0u64);
    a.label("hf")
        .cnst(7, 0u64)
        .pair(8, 7, 6)
        .cnst(9, 6u64)
        .add(8, 8, 9)
        .add(8, 8, 8)
        .query(8, 8)
        .decjmp(8, "hf_next")
        .jump("hf_done")
        .label("hf_next")
        .inc(6)
        .jump("hf");
    a.label("hf_done")
        .cnst(10, slot::EMBED_PSI + 1)
        .call(11, 6, 4, 10) // v = (f·g)(x)
        .sub(12, 11, 5)
        .sub(13, 5, 11)
        .add(12, 12, 13)
        .decjmp(12, "eq")
        .cnst(0, 0u64)
        .halt(0)
        .label("eq")
        .cnst(0, 1u64)
        .halt(0);
    a.label("le5")
        .decjmp(3, "is5")
        .cnst(0, 0u64)
        .halt(0)
        .label("is5")
        .cnst(0, 1u64)
        .halt(0);
    a.finish()
}

fn embed_psi() -> Program {
    // Answers f⊕g queries by reading graph bits: value h(m) is the least y
    // whose graph bit is set, on the left (f) for even queries and the right
    // (g) for odd ones.
    let mut a = Asm::new();
    a.cnst(2, 2u64)
        .div(3, 0, 2) // m
        .mul(4, 3, 2)
        .sub(2, 0, 4) // parity picks the side
        .cnst(6, 0u64);
    a.label("loop")
        .pair(8, 3, 6)
        .cnst(9, 6u64)
        .add(8, 8, 9)
        .add(8, 8, 8)
        .add(8, 8, 2)
        .query(8, 8)
        .decjmp(8, "next")
        .copy(0, 6)
        .halt(0)
        .label("next")
        .inc(6)
        .jump("loop");
    a.finish()
}

fn k2_k_head() -> Program {
    // k·X over ℕ given k⊕X: value K2_K_PROJ at 0, X(n−1) above.
    let mut a = Asm::new();
    a.copy(1, 0)
        .decjmp(1, "head")
        .add(1, 1, 1)
        .inc(1)
        .query(0, 1)
        .halt(0)
        .label("head")
        .cnst(0, slot::K2_K_PROJ)
        .halt(0);
    a.finish()
}

fn k2_k_proj() -> Program {
    // (k·X)·Y = X given (k·X)⊕Y: X(n) sits at position n+1 on the left.
    let mut a = Asm::new();
    a.add(0, 0, 0)
        .cnst(1, 2u64)
        .add(0, 0, 1)
        .query(0, 0)
        .halt(0);
    a.finish()
}

fn k2_s1() -> Program {
    // s·X given s⊕X: value K2_S2 at 0, X above.
    let mut a = Asm::new();
    a.copy(1, 0)
        .decjmp(1, "head")
        .add(1, 1, 1)
        .inc(1)
        .query(0, 1)
        .halt(0)
        .label("head")
        .cnst(0, slot::K2_S2)
        .halt(0);
    a.finish()
}

fn k2_s2() -> Program {
    // (s·X)·Y given (s·X)⊕Y: value K2_S3 at 0, then X and Y interleaved:
    // X(m) at 1+2m, Y(m) at 2+2m.
    let mut a = Asm::new();
    a.copy(1, 0)
        .decjmp(1, "head") // else r1 = t = n−1
        .cnst(2, 2u64)
        .div(3, 1, 2)
        .mul(4, 3, 2)
        .sub(2, 1, 4)
        .decjmp(2, "even")
        .query(0, 1) // t odd: Y(m) at joined position t
        .halt(0)
        .label("even")
        .cnst(2, 2u64)
        .add(1, 1, 2) // t even: X(m) = left(m+1) at joined t+2
        .query(0, 1)
        .halt(0)
        .label("head")
        .cnst(0, slot::K2_S3)
        .halt(0);
    a.finish()
}

fn k2_s3() -> Program {
    // (s·X·Y)·Z = (X·Z)(Y·Z) given ambient A = (s·X·Y)⊕Z:
    // X(m) = A(2+4m), Y(m) = A(4+4m), Z(m) = A(2m+1).
    let mut a = Asm::new();
    a.copy(20, 0)
        .cnst(1, 2u64)
        .query(2, 1) // hx = X(0)
        .cnst(3, 0u64)
        .cnst(4, slot::K2_VXZ + 1)
        .call(5, 2, 3, 4) // (X·Z)(0)
        .cnst(6, slot::K2_VFIN + 1)
        .call(0, 5, 20, 6)
        .halt(0);
    a.finish()
}

fn k2_vxz() -> Program {
    // q even → X(q/2) = A(2+2q); q odd → Z((q−1)/2) = A(q).
    let mut a = Asm::new();
    a.cnst(2, 2u64)
        .div(3, 0, 2)
        .mul(4, 3, 2)
        .sub(2, 0, 4)
        .decjmp(2, "even")
        .query(0, 0)
        .halt(0)
        .label("even")
        .add(1, 0, 0)
        .cnst(2, 2u64)
        .add(1, 1, 2)
        .query(0, 1)
        .halt(0);
    a.finish()
}

fn k2_vyz() -> Program {
    // q even → Y(q/2) = A(4+2q); q odd → Z((q−1)/2) = A(q).
    let mut a = Asm::new();
    a.cnst(2, 2u64)
        .div(3, 0, 2)
        .mul(4, 3, 2)
        .sub(2, 0, 4)
        .decjmp(2, "even")
        .query(0, 0)
        .halt(0)
        .label("even")
        .add(1, 0, 0)
        .cnst(2, 4u64)
        .add(1, 1, 2)
        .query(0, 1)
        .halt(0);
    a.finish()
}

fn k2_vfin() -> Program {
    // q even → (X·Z)(q/2); q odd → (Y·Z)((q−1)/2), reading the needed header
    // from the ambient each time.
    let mut a = Asm::new();
    a.cnst(2, 2u64)
        .div(3, 0, 2) // m
        .mul(4, 3, 2)
        .sub(2, 0, 4)
        .decjmp(2, "even")
        .cnst(5, 4u64)
        .query(6, 5) // hy = Y(0)
        .cnst(7, slot::K2_VYZ + 1)
        .call(0, 6, 3, 7)
        .halt(0)
        .label("even")
        .cnst(5, 2u64)
        .query(6, 5) // hx = X(0)
        .cnst(7, slot::K2_VXZ + 1)
        .call(0, 6, 3, 7)
        .halt(0);
    a.finish()
}

pub struct Dictionary {
    slots: Vec<Arc<Program>>,
    /// Raw code of each slot's program, in slot order.
    raw_codes: Vec<Nat>,
    /// The same codes sorted, for the skip adjustment.
    sorted_codes: Vec<Nat>,
    by_program: HashMap<Program, u64>,
}

impl Dictionary {
    fn build() -> Dictionary {
        let programs = vec![
            k201_k_head(),
            k201_k_proj(),
            k201_s1(),
            k201_s2(),
            k201_s3(),
            embed_graph(),
            k2_k_head(),
            k2_k_proj(),
            k2_s1(),
            k2_s2(),
            k2_s3(),
            k2_vxz(),
            k2_vyz(),
            k2_vfin(),
            k201_vxz(),
            k201_vyz(),
            k201_vfin(),
            embed_psi(),
        ];
        assert_eq!(programs.len() as u64, slot::COUNT);
        let mut by_program = HashMap::new();
        for (i, p) in programs.iter().enumerate() {
            let clash = by_program.insert(p.clone(), i as u64);
            assert!(clash.is_none(), "dictionary entries must be distinct");
        }
        let raw_codes: Vec<Nat> = programs.iter().map(encode_raw).collect();
        let mut sorted_codes = raw_codes.clone();
        sorted_codes.sort();
        Dictionary {
            slots: programs.into_iter().map(Arc::new).collect(),
            raw_codes,
            sorted_codes,
            by_program,
        }
    }

    pub fn len(&self) -> u64 {
        self.slots.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn program(&self, slot: u64) -> Arc<Program> {
        Arc::clone(&self.slots[slot as usize])
    }

    pub fn slot_of(&self, p: &Program) -> Option<u64> {
        self.by_program.get(p).copied()
    }

    pub fn raw_code(&self, slot: u64) -> &Nat {
        &self.raw_codes[slot as usize]
    }
}

pub fn dictionary() -> &'static Dictionary {
    static DICT: OnceLock<Dictionary> = OnceLock::new();
    DICT.get_or_init(Dictionary::build)
}

/// The program at working index `n`.
pub fn decode_index(n: &Nat) -> Arc<Program> {
    let dict = dictionary();
    let count = Nat::from_u64(dict.len());
    if *n < count {
        return dict.program(n.to_u64().expect("slot fits"));
    }
    // Enumerate the complement of the dictionary's raw codes.
    let mut m = n.monus(&count);
    for code in &dict.sorted_codes {
        if *code <= m {
            m = m.succ();
        }
    }
    Arc::new(decode_raw(&m))
}

/// [`decode_index`], but refusing to materialize more than `max_words`
/// words of program text; see [`decode_raw_bounded`].
pub fn decode_index_bounded(n: &Nat, max_words: u64) -> Option<Arc<Program>> {
    let dict = dictionary();
    let count = Nat::from_u64(dict.len());
    if *n < count {
        return Some(dict.program(n.to_u64().expect("slot fits")));
    }
    let mut m = n.monus(&count);
    for code in &dict.sorted_codes {
        if *code <= m {
            m = m.succ();
        }
    }
    decode_raw_bounded(&m, max_words).map(Arc::new)
}

/// The working index of a program — inverse of [`decode_index`].
pub fn encode_program(p: &Program) -> Nat {
    let dict = dictionary();
    if let Some(slot) = dict.slot_of(p) {
        return Nat::from_u64(slot);
    }
    let code = encode_raw(p);
    let skipped = dict
        .sorted_codes
        .iter()
        .filter(|c| **c < code)
        .count() as u64;
    code.monus(&Nat::from_u64(skipped))
        .add(&Nat::from_u64(dict.len()))
}
