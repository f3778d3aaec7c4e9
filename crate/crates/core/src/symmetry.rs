//! The dihedral group of the square, its ten subgroups, and the seven
//! fixed-point classes of staircase polygons.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// An element of the dihedral group of order eight.
///
/// `r` is the counter-clockwise quarter turn, `h` the reflection in the
/// horizontal axis, `v` in the vertical axis, `d1` in the line `y = x` and
/// `d2` in the line `y = -x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymmetryElement {
    E,
    R,
    R2,
    R3,
    H,
    V,
    D1,
    D2,
}

impl SymmetryElement {
    pub const ALL: [SymmetryElement; 8] = [
        Self::E,
        Self::R,
        Self::R2,
        Self::R3,
        Self::H,
        Self::V,
        Self::D1,
        Self::D2,
    ];

    /// Integer matrix `[[a, b], [c, d]]` acting on column vectors `(x, y)`.
    pub fn matrix(self) -> [[i64; 2]; 2] {
        match self {
            Self::E => [[1, 0], [0, 1]],
            Self::R => [[0, -1], [1, 0]],
            Self::R2 => [[-1, 0], [0, -1]],
            Self::R3 => [[0, 1], [-1, 0]],
            Self::H => [[1, 0], [0, -1]],
            Self::V => [[-1, 0], [0, 1]],
            Self::D1 => [[0, 1], [1, 0]],
            Self::D2 => [[0, -1], [-1, 0]],
        }
    }

    pub fn apply(self, (x, y): (i64, i64)) -> (i64, i64) {
        let [[a, b], [c, d]] = self.matrix();
        (a * x + b * y, c * x + d * y)
    }

    fn from_matrix(m: [[i64; 2]; 2]) -> Self {
        *Self::ALL
            .iter()
            .find(|g| g.matrix() == m)
            .expect("dihedral group is closed")
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: Self) -> Self {
        let a = self.matrix();
        let b = other.matrix();
        let mut m = [[0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self::from_matrix(m)
    }

    pub fn inverse(self) -> Self {
        match self {
            Self::R => Self::R3,
            Self::R3 => Self::R,
            g => g,
        }
    }

    /// Whether the element exchanges the two axes (so width and height swap).
    pub fn swaps_axes(self) -> bool {
        self.matrix()[0][0] == 0
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::E => "e",
            Self::R => "r",
            Self::R2 => "r2",
            Self::R3 => "r3",
            Self::H => "h",
            Self::V => "v",
            Self::D1 => "d1",
            Self::D2 => "d2",
        }
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

impl fmt::Display for SymmetryElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A set of group elements packed as a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet(pub u8);

impl ElementSet {
    pub fn of(elements: &[SymmetryElement]) -> Self {
        Self(elements.iter().fold(0, |acc, g| acc | g.bit()))
    }

    pub fn contains(self, g: SymmetryElement) -> bool {
        self.0 & g.bit() != 0
    }

    pub fn insert(&mut self, g: SymmetryElement) {
        self.0 |= g.bit();
    }

    pub fn elements(self) -> impl Iterator<Item = SymmetryElement> {
        SymmetryElement::ALL
            .into_iter()
            .filter(move |g| self.contains(*g))
    }

    pub fn is_superset(self, other: Self) -> bool {
        self.0 & other.0 == other.0
    }
}

/// The ten subgroups of the dihedral group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subgroup {
    Trivial,
    R2,
    R,
    D1,
    D2,
    D1D2,
    H,
    V,
    HV,
    D4,
}

impl Subgroup {
    pub const ALL: [Subgroup; 10] = [
        Self::Trivial,
        Self::R2,
        Self::R,
        Self::D1,
        Self::D2,
        Self::D1D2,
        Self::H,
        Self::V,
        Self::HV,
        Self::D4,
    ];

    pub fn elements(self) -> &'static [SymmetryElement] {
        use SymmetryElement::*;
        match self {
            Self::Trivial => &[E],
            Self::R2 => &[E, R2],
            Self::R => &[E, R, R2, R3],
            Self::D1 => &[E, D1],
            Self::D2 => &[E, D2],
            Self::D1D2 => &[E, R2, D1, D2],
            Self::H => &[E, H],
            Self::V => &[E, V],
            Self::HV => &[E, R2, H, V],
            Self::D4 => &[E, R, R2, R3, H, V, D1, D2],
        }
    }

    pub fn order(self) -> usize {
        self.elements().len()
    }

    pub fn element_set(self) -> ElementSet {
        ElementSet::of(self.elements())
    }

    /// The subgroup with exactly this element set, if the set is a subgroup.
    pub fn from_set(set: ElementSet) -> Option<Self> {
        Self::ALL.into_iter().find(|h| h.element_set() == set)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Trivial => "e",
            Self::R2 => "r2",
            Self::R => "r",
            Self::D1 => "d1",
            Self::D2 => "d2",
            Self::D1D2 => "d1d2",
            Self::H => "h",
            Self::V => "v",
            Self::HV => "hv",
            Self::D4 => "d4",
        }
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Subgroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Self::ALL
            .into_iter()
            .find(|h| h.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Parse(format!("unknown subgroup '{s}'")))
    }
}

/// Staircase polygons fixed by a subgroup.
///
/// Only subgroups whose elements map staircase polygons to staircase
/// polygons give distinct classes; `h` or `v` symmetry already forces a
/// rectangle, and `r` a square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymmetryClass {
    Full,
    R2,
    D1,
    D2,
    D1D2,
    Rect,
    Square,
}

impl SymmetryClass {
    pub const ALL: [SymmetryClass; 7] = [
        Self::Full,
        Self::R2,
        Self::D1,
        Self::D2,
        Self::D1D2,
        Self::Rect,
        Self::Square,
    ];

    /// Elements a polygon must be fixed by to belong to the class.
    pub fn generators(self) -> &'static [SymmetryElement] {
        use SymmetryElement::*;
        match self {
            Self::Full => &[E],
            Self::R2 => &[R2],
            Self::D1 => &[D1],
            Self::D2 => &[D2],
            Self::D1D2 => &[D1, D2],
            Self::Rect => &[H, V],
            Self::Square => &[R],
        }
    }

    pub fn contains_stabilizer(self, stabilizer: ElementSet) -> bool {
        stabilizer.is_superset(ElementSet::of(self.generators()))
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Full => "full",
            Self::R2 => "r2",
            Self::D1 => "d1",
            Self::D2 => "d2",
            Self::D1D2 => "d1d2",
            Self::Rect => "rect",
            Self::Square => "square",
        }
    }
}

impl fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SymmetryClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Parse(format!("unknown class '{s}'")))
    }
}
