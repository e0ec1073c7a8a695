//! Basis words as bitmasks: bit `i - 1` set means generator `i` is present.

use std::fmt::Debug;

pub type Word = u32;

pub const MAX_DIM: usize = 16;

pub fn len(w: Word) -> usize {
    w.count_ones() as usize
}

pub fn full(n: usize) -> Word {
    if n == 0 {
        0
    } else {
        (1u32 << n) - 1
    }
}

pub fn generator(i: usize) -> Word {
    debug_assert!((1..=MAX_DIM).contains(&i));
    1 << (i - 1)
}

pub fn from_axes(axes: &[usize]) -> Word {
    axes.iter().fold(0, |w, &i| w | generator(i))
}

/// Axes (1-based) in increasing order.
pub fn axes(w: Word) -> Vec<usize> {
    (0..32).filter(|b| w >> b & 1 == 1).map(|b| b + 1).collect()
}

/// Number of transpositions needed to sort the concatenation `a b`.
fn swaps(a: Word, b: Word) -> u32 {
    let mut count = 0;
    let mut rest = b;
    while rest != 0 {
        let bit = rest.trailing_zeros();
        rest &= rest - 1;
        count += (a >> (bit + 1)).count_ones();
    }
    count
}

/// How two basis words multiply: the product is `sign(a, b) · word(a ^ b)`.
pub trait ProductRule: Copy + Clone + Debug + PartialEq + Eq + Send + Sync + 'static {
    const NAME: &'static str;
    fn sign(a: Word, b: Word) -> i32;
}

/// `c^i c^j + c^j c^i = -2 δ_ij`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Clifford;

/// `e^i ∧ e^j + e^j ∧ e^i = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exterior;

impl ProductRule for Clifford {
    const NAME: &'static str = "clifford";

    fn sign(a: Word, b: Word) -> i32 {
        let s = swaps(a, b) + (a & b).count_ones();
        if s.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl ProductRule for Exterior {
    const NAME: &'static str = "exterior";

    fn sign(a: Word, b: Word) -> i32 {
        if a & b != 0 {
            0
        } else if swaps(a, b).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

pub fn display(w: Word, symbol: &str) -> String {
    if w == 0 {
        return "1".to_string();
    }
    axes(w)
        .iter()
        .map(|i| format!("{symbol}{i}"))
        .collect::<Vec<_>>()
        .join("")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clifford_signs() {
        assert_eq!(Clifford::sign(generator(1), generator(1)), -1);
        assert_eq!(Clifford::sign(generator(2), generator(1)), -1);
        assert_eq!(Clifford::sign(generator(1), generator(2)), 1);
        let w12 = from_axes(&[1, 2]);
        assert_eq!(Clifford::sign(w12, w12), -1);
    }

    #[test]
    fn exterior_signs() {
        assert_eq!(Exterior::sign(generator(1), generator(1)), 0);
        assert_eq!(Exterior::sign(generator(2), generator(1)), -1);
        assert_eq!(Exterior::sign(from_axes(&[1, 3]), generator(2)), -1);
    }

    #[test]
    fn axes_roundtrip() {
        assert_eq!(axes(from_axes(&[1, 4, 5])), vec![1, 4, 5]);
        assert_eq!(len(full(6)), 6);
    }
}
