use std::ops::Neg;

use num_traits::Signed;

/// Exact sign of a predicate determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative = -1,
    Zero = 0,
    Positive = 1,
}

impl Sign {
    #[inline]
    pub fn of<T: Signed>(value: &T) -> Sign {
        if value.is_positive() {
            Sign::Positive
        } else if value.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }

    /// True for two nonzero signs that differ.
    #[inline]
    pub fn strictly_opposite(self, other: Sign) -> bool {
        (self as i8) * (other as i8) == -1
    }
}

impl Neg for Sign {
    type Output = Sign;

    #[inline]
    fn neg(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// Coordinate axis. Used as the axis dropped when projecting a plane onto a
/// coordinate plane for `orient2d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// Indices of the two coordinates kept when this axis is dropped.
    ///
    /// The kept pair is cyclic (`Z -> (x, y)`, `X -> (y, z)`, `Y -> (z, x)`), so
    /// a counter-clockwise turn in the projection is counter-clockwise seen
    /// from the positive end of the dropped axis.
    #[inline]
    pub fn kept(self) -> (usize, usize) {
        match self {
            Axis::X => (1, 2),
            Axis::Y => (2, 0),
            Axis::Z => (0, 1),
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }
}
