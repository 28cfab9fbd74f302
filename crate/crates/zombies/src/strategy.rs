//! Survivor move scripts of length `M = n/4` and their builders.
//!
//! A strategy fixes the survivor's first `M` moves in advance, independent
//! of anything the zombies do.  Because the torus is vertex transitive, a
//! script may be translated freely; the *normalized* scripts are those that
//! finish at the plane origin, and every builder here produces one.

use crate::rng::{Stream, TAG_WALK_BUILDER};
use crate::torus::{apply_move, Move, PlanePoint};
use crate::{Error, Result};

/// A scripted survivor walk: grid size, start displacement (relative to the
/// final vertex) and exactly `M = n/4` moves.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Strategy {
    n: usize,
    start: PlanePoint,
    moves: Vec<Move>,
}

/// The survivor's plane positions `positions[0..=M]` induced by a strategy;
/// `positions[0]` is the start displacement and consecutive entries differ
/// by one scripted move.  For a normalized strategy `positions[M]` is the
/// origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurvivorTrajectory {
    pub positions: Vec<PlanePoint>,
}

impl SurvivorTrajectory {
    /// Number of rounds covered (`M`).
    pub fn horizon(&self) -> usize {
        self.positions.len() - 1
    }
}

/// Horizon for a given grid size.
pub fn horizon_for(n: usize) -> usize {
    n / 4
}

impl Strategy {
    /// Build a strategy from explicit parts, checking the length invariant.
    pub fn new(n: usize, start: PlanePoint, moves: Vec<Move>) -> Result<Strategy> {
        if n < 4 {
            return Err(Error::GridTooSmall { n, min: 4 });
        }
        let expected = horizon_for(n);
        if moves.len() != expected {
            return Err(Error::WrongMoveCount { n, expected, got: moves.len() });
        }
        Ok(Strategy { n, start, moves })
    }

    /// Build the normalized strategy with the given moves: the start
    /// displacement is chosen so the walk ends at the origin.
    pub fn normalized(n: usize, moves: Vec<Move>) -> Result<Strategy> {
        let (dx, dy) = net_displacement(&moves);
        Strategy::new(n, PlanePoint::new(-dx, -dy), moves)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Script length `M = n/4`.
    pub fn m(&self) -> usize {
        self.moves.len()
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn start(&self) -> PlanePoint {
        self.start
    }

    /// True when the walk finishes at the plane origin.
    pub fn is_normalized(&self) -> bool {
        let (dx, dy) = net_displacement(&self.moves);
        self.start.x + dx == 0 && self.start.y + dy == 0
    }

    /// The move string in the one-letter code of the text format.
    pub fn move_string(&self) -> String {
        self.moves.iter().map(|m| m.code()).collect()
    }

    /// Same walk reflected through x -> -x (left and right swapped).
    pub fn mirror_x(&self) -> Strategy {
        Strategy {
            n: self.n,
            start: PlanePoint::new(-self.start.x, self.start.y),
            moves: self.moves.iter().map(|m| m.mirror_x()).collect(),
        }
    }

    /// Replace one move and re-normalize to end at the origin.
    pub fn with_move(&self, index: usize, m: Move) -> Strategy {
        let mut moves = self.moves.clone();
        moves[index] = m;
        Strategy::normalized(self.n, moves).expect("length unchanged")
    }
}

fn net_displacement(moves: &[Move]) -> (i64, i64) {
    moves.iter().fold((0, 0), |(x, y), m| {
        let (dx, dy) = m.delta();
        (x + dx, y + dy)
    })
}

/// The survivor's position sequence: `positions[0]` is the start
/// displacement and `positions[i]` follows by applying `moves[i-1]`.
pub fn trajectory(s: &Strategy) -> SurvivorTrajectory {
    let mut positions = Vec::with_capacity(s.m() + 1);
    positions.push(s.start);
    for &m in s.moves() {
        positions.push(apply_move(*positions.last().unwrap(), m));
    }
    SurvivorTrajectory { positions }
}

/// All-Stay script.
pub fn stay(n: usize) -> Result<Strategy> {
    require_builtin_size(n)?;
    Strategy::normalized(n, vec![Move::Stay; horizon_for(n)])
}

/// Straight vertical descent: `M` Down moves, entering the origin from
/// above.
pub fn go_down(n: usize) -> Result<Strategy> {
    require_builtin_size(n)?;
    Strategy::normalized(n, vec![Move::Down; horizon_for(n)])
}

/// Diagonal descent from `(floor(M/2), ceil(M/2))`: Down, then immediately
/// Left, in every pair of consecutive rounds.
pub fn diagonal(n: usize) -> Result<Strategy> {
    require_builtin_size(n)?;
    let m = horizon_for(n);
    let moves = (0..m).map(|i| if i % 2 == 0 { Move::Down } else { Move::Left }).collect();
    Strategy::normalized(n, moves)
}

/// A uniformly random script, frozen at construction time and translated to
/// end at the origin.  The same seed always yields the same walk.
pub fn random_walk(n: usize, seed: u64) -> Result<Strategy> {
    require_builtin_size(n)?;
    let mut stream = Stream::new(seed, &[TAG_WALK_BUILDER]);
    let moves = (0..horizon_for(n)).map(|_| Move::ALL[stream.below(5) as usize]).collect();
    Strategy::normalized(n, moves)
}

/// `k` counterclockwise traversals of an axis-aligned square of side
/// `floor(M / (4k))`, padded with Stay to length `M`.  With a tiny grid the
/// side degenerates to zero and the script is all Stay.
pub fn square(n: usize, k: u64) -> Result<Strategy> {
    require_builtin_size(n)?;
    if !matches!(k, 1 | 2 | 3 | 8) {
        return Err(Error::InvalidSquareCount(k));
    }
    let m = horizon_for(n);
    let side = m / (4 * k as usize);
    let mut moves = Vec::with_capacity(m);
    for _ in 0..k {
        for dir in [Move::Right, Move::Up, Move::Left, Move::Down] {
            moves.extend(std::iter::repeat(dir).take(side));
        }
    }
    moves.resize(m, Move::Stay);
    Strategy::normalized(n, moves)
}

fn require_builtin_size(n: usize) -> Result<()> {
    if n < 8 {
        return Err(Error::GridTooSmall { n, min: 8 });
    }
    Ok(())
}

/// Resolve a builtin by name: `stay`, `go_down`, `diagonal`, `random_walk`
/// (which uses `seed`) or `square:<k>`.
pub fn builtin(name: &str, n: usize, seed: u64) -> Result<Strategy> {
    match name {
        "stay" => stay(n),
        "go_down" => go_down(n),
        "diagonal" => diagonal(n),
        "random_walk" => random_walk(n, seed),
        other => {
            if let Some(k) = other.strip_prefix("square:") {
                let k: u64 = k.parse().map_err(|_| Error::UnknownStrategy(other.to_string()))?;
                square(n, k)
            } else {
                Err(Error::UnknownStrategy(other.to_string()))
            }
        }
    }
}

/// Names accepted by [`builtin`], for help texts and sweeps.
pub const BUILTIN_NAMES: [&str; 8] =
    ["stay", "random_walk", "go_down", "diagonal", "square:1", "square:2", "square:3", "square:8"];

/// Parse the two-line text format: `n=<int> start=<int>,<int>` followed by
/// a move string over `U D L R S` of length exactly `n/4`.
pub fn parse_strategy(text: &str) -> Result<Strategy> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::MalformedHeader("empty input".into()))?;
    let moves_line = lines.next().ok_or_else(|| Error::MalformedHeader("missing move line".into()))?;
    for extra in lines {
        if !extra.trim().is_empty() {
            return Err(Error::MalformedHeader(format!("unexpected trailing line {extra:?}")));
        }
    }

    let mut fields = header.split_whitespace();
    let n_field = fields.next().ok_or_else(|| Error::MalformedHeader(header.into()))?;
    let start_field = fields.next().ok_or_else(|| Error::MalformedHeader(header.into()))?;
    if fields.next().is_some() {
        return Err(Error::MalformedHeader(header.into()));
    }
    let n: usize = n_field
        .strip_prefix("n=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::MalformedHeader(header.into()))?;
    let (sx, sy) = start_field
        .strip_prefix("start=")
        .and_then(|v| v.split_once(','))
        .ok_or_else(|| Error::MalformedHeader(header.into()))?;
    let sx: i64 = sx.parse().map_err(|_| Error::MalformedHeader(header.into()))?;
    let sy: i64 = sy.parse().map_err(|_| Error::MalformedHeader(header.into()))?;

    let moves = moves_line.trim_end().chars().map(Move::from_code).collect::<Result<Vec<_>>>()?;
    Strategy::new(n, PlanePoint::new(sx, sy), moves)
}

/// Inverse of [`parse_strategy`]; `parse(format(s)) == s`.
pub fn format_strategy(s: &Strategy) -> String {
    format!("n={} start={},{}\n{}\n", s.n(), s.start().x, s.start().y, s.move_string())
}

/// All `5^M` normalized scripts of horizon `M`, in lexicographic order of
/// their move strings (with the letter order of [`Move::ALL`]).  Guarded to
/// toy horizons.
pub fn enumerate_f0(m: usize) -> Result<impl Iterator<Item = Strategy>> {
    const MAX_M: usize = 9;
    if m == 0 || m > MAX_M {
        return Err(Error::EnumerationTooLarge { m, max: MAX_M });
    }
    let total = 5u64.pow(m as u32);
    Ok((0..total).map(move |index| nth_strategy(m, index)))
}

/// The `index`-th script of horizon `m` in enumeration order.
pub fn nth_strategy(m: usize, index: u64) -> Strategy {
    let mut digits = vec![Move::Stay; m];
    let mut rest = index;
    for slot in digits.iter_mut().rev() {
        *slot = Move::ALL[(rest % 5) as usize];
        rest /= 5;
    }
    debug_assert_eq!(rest, 0);
    Strategy::normalized(4 * m, digits).expect("length matches by construction")
}
