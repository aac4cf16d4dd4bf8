use crate::ring::{cyclo_pow, CycloNum, Tag, TagMonomial};
use serde::{Deserialize, Serialize};

/// How the six step directions ν = 1..6 are laid out.
///
/// `PtPrinted` keeps the turn phases of the triangular recurrence together with
/// its printed neighbour shifts, where ν = 3 steps by (+1, −1) and ν = 6 by (−1, +1).
/// Those shifts point at 300° and 120°, opposite to the 120° and 300° that the turn
/// phases assume. `PtPlanar` uses shifts consistent with ν at (ν − 1)·60°.
/// `Sc` is the simple-cubic lattice seen along its body diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Geometry {
    PtPrinted,
    PtPlanar,
    Sc,
}

impl Geometry {
    pub fn is_sc(self) -> bool {
        self == Geometry::Sc
    }

    pub fn name(self) -> &'static str {
        match self {
            Geometry::PtPrinted => "pt-printed",
            Geometry::PtPlanar => "pt-planar",
            Geometry::Sc => "sc",
        }
    }

    /// Direction angle in units of 60°.
    pub fn angle(self, nu: u8) -> i32 {
        debug_assert!((1..=6).contains(&nu));
        match self {
            Geometry::PtPrinted | Geometry::PtPlanar => nu as i32 - 1,
            // +x, +y, +z, −x, −y, −z
            Geometry::Sc => [0, 2, 4, 3, 5, 1][nu as usize - 1],
        }
    }

    /// Lattice step of direction ν; the third component is used only by `Sc`.
    pub fn shift(self, nu: u8) -> [i64; 3] {
        match self {
            Geometry::PtPrinted => [[1, 0, 0], [0, 1, 0], [1, -1, 0], [-1, 0, 0], [0, -1, 0], [-1, 1, 0]][nu as usize - 1],
            Geometry::PtPlanar => [[1, 0, 0], [0, 1, 0], [-1, 1, 0], [-1, 0, 0], [0, -1, 0], [1, -1, 0]][nu as usize - 1],
            Geometry::Sc => [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, 0, 0], [0, -1, 0], [0, 0, -1]][nu as usize - 1],
        }
    }

    /// Step in the triangular plane, in the basis e₁ = 0°, e₂ = 60°.
    pub fn plane_step(self, nu: u8) -> [i64; 2] {
        let s = self.shift(nu);
        match self {
            Geometry::Sc => project_sc([s[0], s[1], s[2]]),
            _ => [s[0], s[1]],
        }
    }

    /// Turn from `prev` to `next` in units of 60°, in −2..=2; `None` for a reversal.
    pub fn turn(self, prev: u8, next: u8) -> Option<i32> {
        let mut d = (self.angle(next) - self.angle(prev)).rem_euclid(6);
        if d > 3 {
            d -= 6;
        }
        if d == 3 {
            None
        } else {
            Some(d)
        }
    }

    /// u/v/w axis tag times l/m/n signed direction tag of a single step (SC only).
    pub fn step_tag(self, nu: u8) -> TagMonomial {
        if self != Geometry::Sc {
            return TagMonomial::ONE;
        }
        let axis = [Tag::U, Tag::V, Tag::W][(nu as usize - 1) % 3];
        let sign = [Tag::L, Tag::M, Tag::N][(nu as usize - 1) % 3];
        let e = if nu <= 3 { 1 } else { -1 };
        TagMonomial::single(axis, 1) * TagMonomial::single(sign, e)
    }

    /// e^{−shift} Fourier monomial attached to column ν.
    pub fn fourier_factor(self, nu: u8) -> TagMonomial {
        let s = self.shift(nu);
        TagMonomial::fourier(-s[0] as i32, -s[1] as i32, -s[2] as i32)
    }
}

/// Projection of the cubic lattice onto the triangular plane along (1,1,1).
pub fn project_sc(p: [i64; 3]) -> [i64; 2] {
    [p[0] - p[1], p[1] - p[2]]
}

/// Reverse of direction ν: pairs (1,4), (2,5), (3,6).
pub fn reverse(nu: u8) -> u8 {
    (nu + 2) % 6 + 1
}

/// A^turn as an exact phase.
pub fn turn_phase(turn: i32) -> CycloNum {
    cyclo_pow(turn as i64)
}

/// Hexagonal distance on the triangular lattice in axial coordinates.
pub fn plane_distance(p: [i64; 2]) -> i64 {
    (p[0].abs() + p[1].abs() + (p[0] + p[1]).abs()) / 2
}
