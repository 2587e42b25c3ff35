//! Fixed-width bitsets backing set-algebra elements and truth tables.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// A bitset with a fixed number of bits, stored little-endian in 64-bit
/// words: bit `i` lives in word `i / 64` at position `i % 64`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut b = Bits::zeros(len);
        for w in b.words.iter_mut() {
            *w = !0;
        }
        b.mask_tail();
        b
    }

    fn mask_tail(&mut self) {
        let tail = self.len % 64;
        if tail != 0 {
            if let Some(w) = self.words.last_mut() {
                *w &= (1u64 << tail) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let w = &mut self.words[i / 64];
        if v {
            *w |= 1 << (i % 64);
        } else {
            *w &= !(1 << (i % 64));
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn and(&self, other: &Bits) -> Bits {
        debug_assert_eq!(self.len, other.len);
        Bits {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn or(&self, other: &Bits) -> Bits {
        debug_assert_eq!(self.len, other.len);
        Bits {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    pub fn xor(&self, other: &Bits) -> Bits {
        debug_assert_eq!(self.len, other.len);
        Bits {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }

    /// Complement within the fixed width.
    pub fn not(&self) -> Bits {
        let mut b = Bits {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        b.mask_tail();
        b
    }

    /// Set difference `self \ other`.
    pub fn diff(&self, other: &Bits) -> Bits {
        self.and(&other.not())
    }

    pub fn subset_of(&self, other: &Bits) -> bool {
        self.diff(other).is_zero()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// Index of the lowest set bit, if any.
    pub fn first_one(&self) -> Option<usize> {
        for (k, w) in self.words.iter().enumerate() {
            if *w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn from_indices(len: usize, idx: &[usize]) -> Self {
        let mut b = Bits::zeros(len);
        for &i in idx {
            b.set(i, true);
        }
        b
    }

    /// Lowercase hex encoding, byte 0 (bits 0..8) first.
    pub fn to_hex(&self) -> String {
        use core::fmt::Write;
        let nbytes = self.len.div_ceil(8);
        let mut s = String::with_capacity(nbytes * 2);
        for byte in 0..nbytes {
            let w = self.words[byte / 8];
            let b = (w >> ((byte % 8) * 8)) as u8;
            let _ = write!(s, "{b:02x}");
        }
        s
    }

    /// Inverse of [`Bits::to_hex`]. Fails on bad characters, wrong length,
    /// or bits set beyond `len`.
    pub fn from_hex(len: usize, s: &str) -> Option<Self> {
        let nbytes = len.div_ceil(8);
        if s.len() != nbytes * 2 || !s.is_ascii() {
            return None;
        }
        let mut b = Bits::zeros(len);
        for byte in 0..nbytes {
            let v = u8::from_str_radix(&s[byte * 2..byte * 2 + 2], 16).ok()?;
            for k in 0..8 {
                let i = byte * 8 + k;
                if v >> k & 1 == 1 {
                    if i >= len {
                        return None;
                    }
                    b.set(i, true);
                }
            }
        }
        Some(b)
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits[{}]{{", self.len)?;
        let mut first = true;
        for i in self.iter_ones() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
            first = false;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut a = Bits::zeros(70);
        a.set(0, true);
        a.set(69, true);
        assert!(a.get(0) && a.get(69) && !a.get(35));
        assert_eq!(a.count_ones(), 2);
        let b = a.not();
        assert_eq!(b.count_ones(), 68);
        assert!(a.and(&b).is_zero());
        assert_eq!(a.or(&b), Bits::ones(70));
    }

    #[test]
    fn hex_round_trip() {
        let a = Bits::from_indices(20, &[0, 3, 9, 19]);
        let h = a.to_hex();
        assert_eq!(Bits::from_hex(20, &h), Some(a));
        assert_eq!(Bits::from_hex(20, "zz0000"), None);
        assert_eq!(Bits::from_hex(20, "0000"), None);
    }

    #[test]
    fn empty_width() {
        let a = Bits::zeros(0);
        assert!(a.is_zero());
        assert_eq!(a, Bits::ones(0));
        assert_eq!(a.to_hex(), "");
        assert_eq!(Bits::from_hex(0, ""), Some(a));
    }
}
