//! Coordinates, the toroidal metric, and geodesic move options.
//!
//! The torus is the Cartesian product of two n-cycles; a vertex is a pair
//! `(x, y)` with both coordinates reduced modulo n.  Inside the M-round
//! window analysis wraparound provably never occurs, so that code works with
//! unbounded [`PlanePoint`] displacements instead.

use crate::{Error, Result};

/// A vertex of the n-by-n torus; both coordinates lie in `[0, n)`.
/// The grid size is a parameter of the operations, not stored per point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPoint {
    pub x: u32,
    pub y: u32,
}

impl TorusPoint {
    pub fn new(x: u32, y: u32) -> Self {
        TorusPoint { x, y }
    }
}

/// An unwrapped displacement used inside the M-round window, where
/// `|x| + |y| <= M` keeps every quantity far from the wrap boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanePoint {
    pub x: i64,
    pub y: i64,
}

impl PlanePoint {
    pub const ORIGIN: PlanePoint = PlanePoint { x: 0, y: 0 };

    pub fn new(x: i64, y: i64) -> Self {
        PlanePoint { x, y }
    }

    /// L1 norm of the displacement.
    pub fn l1(&self) -> i64 {
        self.x.abs() + self.y.abs()
    }
}

/// The five legal survivor moves.  Zombies never stay put, so `Stay` is
/// only ever produced by survivor scripts and policies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Up,
    Down,
    Left,
    Right,
    Stay,
}

impl Move {
    /// All moves in the fixed order used for enumeration, tie-breaking and
    /// the text format.  `Up` is +y, `Down` is -y, `Right` is +x, `Left`
    /// is -x.
    pub const ALL: [Move; 5] = [Move::Up, Move::Down, Move::Left, Move::Right, Move::Stay];

    /// Unit displacement of the move.
    pub fn delta(self) -> (i64, i64) {
        match self {
            Move::Up => (0, 1),
            Move::Down => (0, -1),
            Move::Left => (-1, 0),
            Move::Right => (1, 0),
            Move::Stay => (0, 0),
        }
    }

    /// One-letter code used by the strategy text format.
    pub fn code(self) -> char {
        match self {
            Move::Up => 'U',
            Move::Down => 'D',
            Move::Left => 'L',
            Move::Right => 'R',
            Move::Stay => 'S',
        }
    }

    pub fn from_code(c: char) -> Result<Move> {
        match c {
            'U' => Ok(Move::Up),
            'D' => Ok(Move::Down),
            'L' => Ok(Move::Left),
            'R' => Ok(Move::Right),
            'S' => Ok(Move::Stay),
            other => Err(Error::IllegalMoveChar(other)),
        }
    }

    /// Mirror image under x -> -x.
    pub fn mirror_x(self) -> Move {
        match self {
            Move::Left => Move::Right,
            Move::Right => Move::Left,
            other => other,
        }
    }
}

/// Graph distance between two vertices of the n-torus: the sum over both
/// coordinates of the shorter arc around the corresponding cycle.
pub fn torus_distance(a: TorusPoint, b: TorusPoint, n: usize) -> u32 {
    let n = n as u32;
    let dx = a.x.abs_diff(b.x);
    let dy = a.y.abs_diff(b.y);
    dx.min(n - dx) + dy.min(n - dy)
}

/// Apply a move to a plane displacement.
pub fn apply_move(p: PlanePoint, m: Move) -> PlanePoint {
    let (dx, dy) = m.delta();
    PlanePoint::new(p.x + dx, p.y + dy)
}

/// Apply a move to a torus vertex, wrapping modulo n.
pub fn apply_move_torus(p: TorusPoint, m: Move, n: usize) -> TorusPoint {
    let n = n as u32;
    let shift = |c: u32, d: i64| -> u32 {
        match d {
            1 => (c + 1) % n,
            -1 => (c + n - 1) % n,
            _ => c,
        }
    };
    let (dx, dy) = m.delta();
    TorusPoint::new(shift(p.x, dx), shift(p.y, dy))
}

/// The distance-reducing neighbours of a zombie, in a fixed canonical
/// order: `x+1`, `x-1`, `y+1`, `y-1` (each included only if it moves the
/// zombie strictly closer to the survivor).  There are 1 to 4 of them; both
/// directions along one cycle appear exactly when that coordinate gap is
/// antipodal (n even, gap n/2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZombieOptions {
    opts: [TorusPoint; 4],
    len: u8,
}

impl ZombieOptions {
    pub fn as_slice(&self) -> &[TorusPoint] {
        &self.opts[..self.len as usize]
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of leading options that change the x coordinate.
    pub fn horizontal_count(&self, z: TorusPoint) -> usize {
        self.as_slice().iter().take_while(|p| p.y == z.y).count()
    }
}

/// Compute the zombie's legal moves toward the survivor.  Errors if zombie
/// and survivor already coincide (the game should have ended).
pub fn zombie_move_options(z: TorusPoint, s: TorusPoint, n: usize) -> Result<ZombieOptions> {
    if z == s {
        return Err(Error::ZombieAtSurvivor);
    }
    let d = torus_distance(z, s, n);
    let mut opts = [TorusPoint::new(0, 0); 4];
    let mut len = 0u8;
    for m in [Move::Right, Move::Left, Move::Up, Move::Down] {
        let cand = apply_move_torus(z, m, n);
        if torus_distance(cand, s, n) < d {
            opts[len as usize] = cand;
            len += 1;
        }
    }
    debug_assert!(len >= 1, "some neighbour always reduces the distance");
    Ok(ZombieOptions { opts, len })
}
