//! Unbounded naturals with a machine-word fast path, plus the Cantor pairing
//! and finite-set bit codings shared by the machine and every model.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

/// A natural number. Values that fit in a `u64` stay unboxed; anything larger
/// is held as a `BigUint`. The representation is normalized (a value is
/// `Big` only when it exceeds `u64::MAX`), so derived equality and ordering
/// are correct: every `Small` sorts below every `Big`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Nat(Repr);

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Repr {
    Small(u64),
    Big(Box<BigUint>),
}

impl Nat {
    pub fn zero() -> Nat {
        Nat(Repr::Small(0))
    }

    pub fn one() -> Nat {
        Nat(Repr::Small(1))
    }

    pub fn from_u64(v: u64) -> Nat {
        Nat(Repr::Small(v))
    }

    pub fn from_usize(v: usize) -> Nat {
        Nat(Repr::Small(v as u64))
    }

    pub fn from_big(b: BigUint) -> Nat {
        match b.to_u64() {
            Some(v) => Nat(Repr::Small(v)),
            None => Nat(Repr::Big(Box::new(b))),
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        match &self.0 {
            Repr::Small(v) => Some(*v),
            Repr::Big(_) => None,
        }
    }

    pub fn to_usize(&self) -> Option<usize> {
        self.to_u64().and_then(|v| usize::try_from(v).ok())
    }

    pub fn to_big(&self) -> BigUint {
        match &self.0 {
            Repr::Small(v) => BigUint::from(*v),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Small(0))
    }

    /// Number of significant bits (0 for the value 0).
    pub fn bits(&self) -> u64 {
        match &self.0 {
            Repr::Small(v) => 64 - v.leading_zeros() as u64,
            Repr::Big(b) => b.bits(),
        }
    }

    pub fn bit(&self, i: u64) -> bool {
        match &self.0 {
            Repr::Small(v) => i < 64 && (v >> i) & 1 == 1,
            Repr::Big(b) => b.bit(i),
        }
    }

    pub fn succ(&self) -> Nat {
        match &self.0 {
            Repr::Small(v) => match v.checked_add(1) {
                Some(r) => Nat(Repr::Small(r)),
                None => Nat::from_big(BigUint::from(*v) + 1u32),
            },
            Repr::Big(b) => Nat::from_big((**b).clone() + 1u32),
        }
    }

    /// Truncated predecessor: `0.pred() == 0`.
    pub fn pred(&self) -> Nat {
        match &self.0 {
            Repr::Small(v) => Nat(Repr::Small(v.saturating_sub(1))),
            Repr::Big(b) => Nat::from_big((**b).clone() - 1u32),
        }
    }

    pub fn add(&self, other: &Nat) -> Nat {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => match a.checked_add(*b) {
                Some(r) => Nat(Repr::Small(r)),
                None => Nat::from_big(BigUint::from(*a) + BigUint::from(*b)),
            },
            _ => Nat::from_big(self.to_big() + other.to_big()),
        }
    }

    /// Truncated subtraction: `a.monus(b) == max(a - b, 0)`.
    pub fn monus(&self, other: &Nat) -> Nat {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => Nat(Repr::Small(a.saturating_sub(*b))),
            (Repr::Small(_), Repr::Big(_)) => Nat::zero(),
            _ => {
                let (a, b) = (self.to_big(), other.to_big());
                if a <= b {
                    Nat::zero()
                } else {
                    Nat::from_big(a - b)
                }
            }
        }
    }

    pub fn mul(&self, other: &Nat) -> Nat {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => match a.checked_mul(*b) {
                Some(r) => Nat(Repr::Small(r)),
                None => Nat::from_big(BigUint::from(*a) * BigUint::from(*b)),
            },
            _ => Nat::from_big(self.to_big() * other.to_big()),
        }
    }

    /// Floor division, total: anything divided by zero is zero.
    pub fn div_floor(&self, other: &Nat) -> Nat {
        if other.is_zero() {
            return Nat::zero();
        }
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => Nat(Repr::Small(a / b)),
            (Repr::Small(_), Repr::Big(_)) => Nat::zero(),
            _ => Nat::from_big(self.to_big() / other.to_big()),
        }
    }

    /// Remainder consistent with `div_floor`: `x.rem(0) == x`.
    pub fn rem(&self, other: &Nat) -> Nat {
        if other.is_zero() {
            return self.clone();
        }
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => Nat(Repr::Small(a % b)),
            (Repr::Small(_), Repr::Big(_)) => self.clone(),
            _ => Nat::from_big(self.to_big() % other.to_big()),
        }
    }

    /// Machine words beyond the first needed to hold the value: 0 for
    /// anything below 2^64. Used to charge wide values against budgets.
    pub fn wide_words(&self) -> u64 {
        self.bits().saturating_sub(1) / 64
    }

    /// `self * 2^k`.
    pub fn shl(&self, k: u64) -> Nat {
        if let Repr::Small(v) = &self.0 {
            if *v == 0 {
                return Nat::zero();
            }
            if self.bits() + k <= 64 {
                return Nat(Repr::Small(v << k));
            }
        }
        Nat::from_big(self.to_big() << k)
    }

    /// `self / 2^k`.
    pub fn shr(&self, k: u64) -> Nat {
        match &self.0 {
            Repr::Small(v) => {
                if k >= 64 {
                    Nat::zero()
                } else {
                    Nat(Repr::Small(v >> k))
                }
            }
            Repr::Big(b) => Nat::from_big((**b).clone() >> k),
        }
    }

    /// `self mod 2^k`.
    pub fn low_bits(&self, k: u64) -> Nat {
        match &self.0 {
            Repr::Small(v) => {
                if k >= 64 {
                    self.clone()
                } else {
                    Nat(Repr::Small(v & ((1u64 << k) - 1)))
                }
            }
            Repr::Big(b) => {
                if k >= b.bits() {
                    self.clone()
                } else {
                    let mask = (BigUint::from(1u8) << k) - 1u8;
                    Nat::from_big((**b).clone() & mask)
                }
            }
        }
    }

    pub fn is_even(&self) -> bool {
        !self.bit(0)
    }

    pub fn half(&self) -> Nat {
        match &self.0 {
            Repr::Small(v) => Nat(Repr::Small(v >> 1)),
            Repr::Big(b) => Nat::from_big((**b).clone() >> 1),
        }
    }

    pub fn double(&self) -> Nat {
        self.mul(&Nat::from_u64(2))
    }

    pub fn isqrt(&self) -> Nat {
        match &self.0 {
            Repr::Small(v) => {
                let mut r = (*v as f64).sqrt() as u64;
                while r.checked_mul(r).map_or(true, |sq| sq > *v) {
                    r -= 1;
                }
                while (r + 1).checked_mul(r + 1).map_or(false, |sq| sq <= *v) {
                    r += 1;
                }
                Nat(Repr::Small(r))
            }
            Repr::Big(b) => Nat::from_big(b.sqrt()),
        }
    }
}

impl From<u64> for Nat {
    fn from(v: u64) -> Nat {
        Nat::from_u64(v)
    }
}

impl From<u32> for Nat {
    fn from(v: u32) -> Nat {
        Nat::from_u64(v as u64)
    }
}

impl fmt::Display for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(v) => write!(f, "{v}"),
            Repr::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Nat {
    type Err = num_bigint::ParseBigIntError;

    fn from_str(s: &str) -> Result<Nat, Self::Err> {
        BigUint::from_str(s).map(Nat::from_big)
    }
}

/// Cantor pairing `(x + y)(x + y + 1)/2 + y`, a bijection between pairs of
/// naturals and naturals.
pub fn pair(x: &Nat, y: &Nat) -> Nat {
    let s = x.add(y);
    s.mul(&s.succ()).half().add(y)
}

/// Inverse of [`pair`].
pub fn unpair(z: &Nat) -> (Nat, Nat) {
    let w = z.mul(&Nat::from_u64(8)).succ().isqrt();
    let t = w.pred().half();
    let tri = t.mul(&t.succ()).half();
    let y = z.monus(&tri);
    let x = t.monus(&y);
    (x, y)
}

/// The finite set with canonical code `u`: the set of bit positions of `u`.
pub fn set_decode(u: &Nat) -> BTreeSet<Nat> {
    let mut out = BTreeSet::new();
    for i in 0..u.bits() {
        if u.bit(i) {
            out.insert(Nat::from_u64(i));
        }
    }
    out
}

/// Canonical code of a finite set of naturals (sum of `2^n`). Intended for
/// desk-scale sets; elements are capped well below anything that would
/// allocate an unreasonable bignum.
pub fn set_encode(set: &BTreeSet<Nat>) -> Nat {
    let mut acc = BigUint::zero();
    for n in set {
        let i = n
            .to_u64()
            .filter(|i| *i < 1 << 24)
            .unwrap_or_else(|| panic!("set element {n} too large for a canonical set code"));
        acc.set_bit(i, true);
    }
    Nat::from_big(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> Nat {
        Nat::from_u64(v)
    }

    #[test]
    fn pairing_worked_examples() {
        assert_eq!(pair(&n(1), &n(2)), n(8));
        assert_eq!(unpair(&n(8)), (n(1), n(2)));
        assert_eq!(pair(&n(0), &n(0)), n(0));
        assert_eq!(unpair(&n(0)), (n(0), n(0)));
    }

    #[test]
    fn pairing_round_trips_on_grid() {
        for x in 0..60u64 {
            for y in 0..60u64 {
                let z = pair(&n(x), &n(y));
                assert_eq!(unpair(&z), (n(x), n(y)), "at ({x},{y})");
            }
        }
        // And the other direction on an initial segment.
        for z in 0..4000u64 {
            let (x, y) = unpair(&n(z));
            assert_eq!(pair(&x, &y), n(z), "at {z}");
        }
    }

    #[test]
    fn pairing_handles_big_values() {
        let big = Nat::from_big(num_bigint::BigUint::from(7u32).pow(200));
        let z = pair(&big, &n(13));
        assert_eq!(unpair(&z), (big.clone(), n(13)));
        let z = pair(&n(13), &big);
        assert_eq!(unpair(&z), (n(13), big));
    }

    #[test]
    fn set_codes_worked_examples() {
        let d5: BTreeSet<Nat> = [n(0), n(2)].into_iter().collect();
        assert_eq!(set_decode(&n(5)), d5);
        let s12: BTreeSet<Nat> = [n(1), n(2)].into_iter().collect();
        assert_eq!(set_encode(&s12), n(6));
        assert_eq!(set_decode(&n(0)), BTreeSet::new());
        assert_eq!(set_encode(&BTreeSet::new()), n(0));
    }

    #[test]
    fn set_codes_round_trip() {
        for u in 0..1u64 << 16 {
            assert_eq!(set_encode(&set_decode(&n(u))), n(u));
        }
    }

    #[test]
    fn shifts_and_masks_agree_with_arithmetic() {
        for v in [0u64, 1, 5, 255, 1 << 40] {
            for k in [0u64, 1, 3, 17, 63, 64, 130] {
                let x = n(v);
                let shifted = x.shl(k);
                assert_eq!(shifted.shr(k), x, "shl/shr at {v}, {k}");
                assert_eq!(
                    shifted.low_bits(k),
                    Nat::zero(),
                    "low bits of a shift at {v}, {k}"
                );
                let mixed = shifted.add(&n(v % 7));
                assert_eq!(mixed.shr(k).shl(k).add(&mixed.low_bits(k)), mixed);
            }
        }
        let big = Nat::from_big(num_bigint::BigUint::from(3u8).pow(300));
        assert_eq!(big.shl(100).shr(100), big);
        assert_eq!(big.low_bits(big.bits()), big);
        assert_eq!(n(0).wide_words(), 0);
        assert_eq!(n(u64::MAX).wide_words(), 0);
        assert_eq!(n(u64::MAX).succ().wide_words(), 1);
    }

    #[test]
    fn monus_and_division_are_total() {
        assert_eq!(n(3).monus(&n(5)), n(0));
        assert_eq!(n(5).monus(&n(3)), n(2));
        assert_eq!(n(7).div_floor(&n(0)), n(0));
        assert_eq!(n(7).rem(&n(0)), n(7));
        assert_eq!(n(7).div_floor(&n(2)), n(3));
        assert_eq!(n(7).rem(&n(2)), n(1));
    }

    #[test]
    fn isqrt_is_exact_at_square_boundaries() {
        for v in 0..2000u64 {
            let r = n(v).isqrt().to_u64().unwrap();
            assert!(r * r <= v && (r + 1) * (r + 1) > v, "isqrt({v}) = {r}");
        }
        let big = Nat::from_big(num_bigint::BigUint::from(10u32).pow(40));
        let r = big.isqrt();
        assert!(r.mul(&r) <= big);
        assert!(r.succ().mul(&r.succ()) > big);
    }

    #[test]
    fn small_big_boundary_is_normalized() {
        let max = n(u64::MAX);
        let over = max.succ();
        assert!(over > max);
        assert_eq!(over.pred(), max);
        assert!(over.to_u64().is_none());
        assert_eq!(max.add(&n(1)), over);
    }
}
