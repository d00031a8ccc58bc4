use alloc::vec::Vec;
use core::fmt;

use crate::perms::add_mod;
use crate::set::{PositionSet, MAX_ELEMENTS};
use crate::{Error, Result};

/// Three lists of subsets of `[n]`, one per color.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CuttingFamily {
    n: usize,
    sets: [Vec<PositionSet>; 3],
}

impl CuttingFamily {
    pub fn new(n: usize, sets: [Vec<PositionSet>; 3]) -> Result<Self> {
        if n > MAX_ELEMENTS {
            return Err(Error::Capacity { n, max: MAX_ELEMENTS });
        }
        for (color, list) in sets.iter().enumerate() {
            for (l, s) in list.iter().enumerate() {
                if !s.is_subset(PositionSet::full(n)) {
                    return Err(Error::InvalidParameter(alloc::format!(
                        "set {l} of color {color} is not within [{n}]"
                    )));
                }
            }
        }
        Ok(CuttingFamily { n, sets })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sets(&self, color: usize) -> &[PositionSet] {
        &self.sets[color]
    }

    pub fn get(&self, color: usize, l: usize) -> PositionSet {
        self.sets[color][l]
    }
}

/// The standard family: twelve explicit sets for `n = 5`, and for `n >= 6`
/// the windows `{l, l+1, l+2}`, `{l, l+2, l+3}`, `{l, l+3, l+4}` mod `n`.
pub fn cutting_family(n: usize) -> Result<CuttingFamily> {
    if n < 5 {
        return Err(Error::InvalidParameter(alloc::format!("cutting families need n >= 5, got {n}")));
    }
    if n == 5 {
        let s = |v: &[usize]| v.iter().copied().collect::<PositionSet>();
        return CuttingFamily::new(
            5,
            [
                alloc::vec![s(&[0, 1, 2]), s(&[0, 3, 4]), s(&[1, 3]), s(&[2, 4])],
                alloc::vec![s(&[0, 1, 3]), s(&[0, 2, 4]), s(&[1, 4]), s(&[2, 3])],
                alloc::vec![s(&[0, 1, 4]), s(&[0, 2, 3]), s(&[1, 2]), s(&[3, 4])],
            ],
        );
    }
    let window = |a: usize, b: usize| -> Vec<PositionSet> {
        (0..n).map(|l| PositionSet::from([l, add_mod(l, a, n), add_mod(l, b, n)])).collect()
    };
    CuttingFamily::new(n, [window(1, 2), window(2, 3), window(3, 4)])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CuttingViolation {
    /// No set of `color` contains `u` but not `v`.
    Separation { color: usize, u: usize, v: usize },
    /// Set `next` of color `color + 1` is contained in set `l` of `color`.
    Containment { color: usize, l: usize, next: usize },
}

impl fmt::Display for CuttingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CuttingViolation::Separation { color, u, v } => {
                write!(f, "no set of color {color} contains {u} but not {v}")
            }
            CuttingViolation::Containment { color, l, next } => {
                write!(f, "set {next} of color {} lies inside set {l} of color {color}", (color + 1) % 3)
            }
        }
    }
}

/// Checks separation for every color and ordered pair, then cross-color
/// non-containment.
pub fn verify_cutting_family(f: &CuttingFamily) -> core::result::Result<(), CuttingViolation> {
    let n = f.n();
    for color in 0..3 {
        for u in 0..n {
            for v in (0..n).filter(|&v| v != u) {
                if !f.sets(color).iter().any(|s| s.contains(u) && !s.contains(v)) {
                    return Err(CuttingViolation::Separation { color, u, v });
                }
            }
        }
    }
    for color in 0..3 {
        for (l, s) in f.sets(color).iter().enumerate() {
            for (next, t) in f.sets((color + 1) % 3).iter().enumerate() {
                if t.is_subset(*s) {
                    return Err(CuttingViolation::Containment { color, l, next });
                }
            }
        }
    }
    Ok(())
}
