//! Full game simulation on the torus: zombie placement, the chase loop,
//! Monte Carlo estimators, and the coupled-randomness replay harness.
//!
//! Every source of randomness is a counter-derived stream keyed by purpose
//! (placement of zombie `z`, moves of zombie `z`, trial `t`, ...), so a
//! trial's outcome depends only on the root seed — not on thread count,
//! evaluation order, or how many other trials run beside it.  Keeping the
//! move stream of zombie `z` independent of `k` also couples runs with
//! different horde sizes: adding zombies never changes what the existing
//! ones do, which makes capture monotone in `k` trial by trial.
//!
//! Phase convention: a scripted survivor stands on his start vertex while
//! round 1's zombies move, so during round `i` he occupies trajectory
//! position `i - 1`.  The analytic backward fold instead indexes the
//! survivor by position `i` during round `i` — one move of lead.  The two
//! models coincide after duplicating the start position and extending the
//! game by one round (see the oracle integration tests).

use rayon::prelude::*;

use crate::rng::{Stream, TAG_BRACKET, TAG_CHAIN, TAG_COIN_TAPE, TAG_PLACEMENT, TAG_TRIAL, TAG_ZOMBIE_MOVES};
use crate::strategy::{trajectory, Strategy};
use crate::torus::{apply_move_torus, torus_distance, zombie_move_options, Move, PlanePoint, TorusPoint, ZombieOptions};
use crate::{Error, Result};

/// One board mid-game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameState {
    pub n: usize,
    pub survivor: TorusPoint,
    pub zombies: Vec<TorusPoint>,
    /// Rounds completed; 0 right after placement.
    pub round: u64,
    pub alive: bool,
}

/// How the survivor chooses moves.
#[derive(Debug, Clone)]
pub enum SurvivorPolicy {
    /// Follow a scripted strategy anchored at a fixed vertex; after the
    /// script runs out, stand still.
    Scripted { strategy: Strategy, anchor: TorusPoint },
    /// Greedy evasion: take the move maximizing the distance to the
    /// nearest zombie, breaking ties by the summed distance.
    FleeNearest,
    /// Alternate down and left forever, never pausing.
    DiagonalForever,
}

/// Wrap a plane displacement onto the torus around `anchor`.
fn offset_vertex(anchor: TorusPoint, d: PlanePoint, n: usize) -> TorusPoint {
    let n = n as i64;
    TorusPoint::new(
        (anchor.x as i64 + d.x).rem_euclid(n) as u32,
        (anchor.y as i64 + d.y).rem_euclid(n) as u32,
    )
}

impl SurvivorPolicy {
    fn start_position(&self, n: usize) -> TorusPoint {
        match self {
            SurvivorPolicy::Scripted { strategy, anchor } => {
                offset_vertex(*anchor, strategy.start(), n)
            }
            _ => TorusPoint::new(0, 0),
        }
    }

    /// The move for the round `state.round` now in progress.
    fn pick_move(&self, state: &GameState) -> Move {
        match self {
            SurvivorPolicy::Scripted { strategy, .. } => {
                let i = state.round as usize;
                if i <= strategy.m() {
                    strategy.moves()[i - 1]
                } else {
                    Move::Stay
                }
            }
            SurvivorPolicy::DiagonalForever => {
                if state.round % 2 == 1 {
                    Move::Down
                } else {
                    Move::Left
                }
            }
            SurvivorPolicy::FleeNearest => {
                let score = |p: TorusPoint| {
                    let mut nearest = u32::MAX;
                    let mut total = 0u64;
                    for &z in &state.zombies {
                        let d = torus_distance(p, z, state.n);
                        nearest = nearest.min(d);
                        total += d as u64;
                    }
                    (nearest, total)
                };
                let mut best = Move::Up;
                let mut best_score = (0, 0);
                for (i, mv) in Move::ALL.into_iter().enumerate() {
                    let s = score(apply_move_torus(state.survivor, mv, state.n));
                    if i == 0 || s > best_score {
                        best = mv;
                        best_score = s;
                    }
                }
                best
            }
        }
    }
}

/// Result of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub captured: bool,
    /// Round of capture; 0 means a zombie spawned on the survivor.
    pub capture_round: Option<u64>,
    /// The seed this trial ran under.
    pub seed: u64,
}

/// Play one game to capture or to the horizon.  Equivalent to
/// [`play`] but invokes `observe` after placement and after every
/// completed round (and on the capturing half-round), for tracing.
pub fn play_traced(
    n: usize,
    k: u64,
    policy: &SurvivorPolicy,
    horizon: u64,
    seed: u64,
    mut observe: impl FnMut(&GameState),
) -> Result<TrialOutcome> {
    if n < 3 {
        return Err(Error::GridTooSmall { n, min: 3 });
    }
    if let SurvivorPolicy::Scripted { strategy, .. } = policy {
        assert_eq!(strategy.n(), n, "scripted strategy sized for a different grid");
    }
    let mut state = GameState {
        n,
        survivor: policy.start_position(n),
        zombies: (0..k)
            .map(|z| {
                let mut s = Stream::new(seed, &[TAG_PLACEMENT, z]);
                TorusPoint::new(s.below(n as u64) as u32, s.below(n as u64) as u32)
            })
            .collect(),
        round: 0,
        alive: true,
    };
    observe(&state);
    if state.zombies.contains(&state.survivor) {
        state.alive = false;
        observe(&state);
        return Ok(TrialOutcome { captured: true, capture_round: Some(0), seed });
    }
    let mut move_streams: Vec<Stream> =
        (0..k).map(|z| Stream::new(seed, &[TAG_ZOMBIE_MOVES, z])).collect();
    for round in 1..=horizon {
        state.round = round;
        // Zombies move first, one at a time in index order; each step is a
        // uniform choice among the strictly-distance-decreasing neighbours.
        for z in 0..state.zombies.len() {
            let opts = zombie_move_options(state.zombies[z], state.survivor, n)
                .expect("a zombie standing on the survivor would already have ended the game");
            let pick = opts.as_slice()[move_streams[z].below(opts.len() as u64) as usize];
            debug_assert_eq!(
                torus_distance(pick, state.survivor, n) + 1,
                torus_distance(state.zombies[z], state.survivor, n),
            );
            state.zombies[z] = pick;
            if pick == state.survivor {
                state.alive = false;
                observe(&state);
                return Ok(TrialOutcome { captured: true, capture_round: Some(round), seed });
            }
        }
        let mv = policy.pick_move(&state);
        state.survivor = apply_move_torus(state.survivor, mv, n);
        if state.zombies.contains(&state.survivor) {
            state.alive = false;
            observe(&state);
            return Ok(TrialOutcome { captured: true, capture_round: Some(round), seed });
        }
        observe(&state);
    }
    Ok(TrialOutcome { captured: false, capture_round: None, seed })
}

/// Play one game: place `k` zombies uniformly, then alternate
/// zombie moves and survivor moves until coincidence or `horizon` rounds.
pub fn play(n: usize, k: u64, policy: &SurvivorPolicy, horizon: u64, seed: u64) -> Result<TrialOutcome> {
    play_traced(n, k, policy, horizon, seed, |_| {})
}

/// Monte Carlo estimate of the capture probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaptureEstimate {
    pub captured_frac: f64,
    /// Normal-approximation 95% half-width, `1.96 * sqrt(p(1-p)/trials)`.
    pub ci_halfwidth: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Run independent trials in parallel and tally captures.  Trial `t`
/// always runs under the same derived seed, so the estimate is identical
/// for any worker count.
pub fn estimate_capture_prob(
    n: usize,
    k: u64,
    policy: &SurvivorPolicy,
    horizon: u64,
    trials: u64,
    seed: u64,
) -> Result<CaptureEstimate> {
    if trials == 0 {
        return Err(Error::TooFewTrials { got: 0, min: 1 });
    }
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|t| play(n, k, policy, horizon, Stream::new(seed, &[TAG_TRIAL, t]).next_u64()))
        .collect::<Result<_>>()?;
    let captured = outcomes.iter().filter(|o| o.captured).count() as f64;
    let frac = captured / trials as f64;
    Ok(CaptureEstimate {
        captured_frac: frac,
        ci_halfwidth: 1.96 * (frac * (1.0 - frac) / trials as f64).sqrt(),
        trials,
        seed,
    })
}

/// Bisect for the smallest horde size whose capture frequency reaches
/// one half within 10n rounds.  Returns `(lo, hi)` with `hi - lo == 1`:
/// the frequency is below half at `lo` (or `lo` is 0) and at least half
/// at `hi`.  Each candidate `k` is measured once under its own derived
/// seed, so the bracket is reproducible.
pub fn bracket_zombie_number(
    n: usize,
    policy: &SurvivorPolicy,
    trials: u64,
    seed: u64,
) -> Result<(u64, u64)> {
    if trials < 200 {
        return Err(Error::TooFewTrials { got: trials, min: 200 });
    }
    let nf = n as f64;
    let k_max = (3.0 * nf * nf * nf.ln()).ceil() as u64;
    let horizon = 10 * n as u64;
    let measure = |k: u64| -> Result<f64> {
        let s = Stream::new(seed, &[TAG_BRACKET, k]).next_u64();
        Ok(estimate_capture_prob(n, k, policy, horizon, trials, s)?.captured_frac)
    };
    if measure(k_max)? < 0.5 {
        return Err(Error::BracketExhausted { k_max });
    }
    let (mut lo, mut hi) = (0u64, k_max);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if measure(mid)? >= 0.5 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}

/// Outcome of replaying shared randomness against several boards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoupledReport {
    /// One outcome per input strategy, in order.
    pub outcomes: Vec<TrialOutcome>,
    /// Coins each board consumed from the shared tape.
    pub coins_used: Vec<u64>,
}

/// A growable tape of fair coins; every board reads it from position 0.
struct CoinTape {
    stream: Stream,
    coins: Vec<bool>,
}

impl CoinTape {
    fn get(&mut self, i: usize) -> bool {
        while self.coins.len() <= i {
            let c = self.stream.coin();
            self.coins.push(c);
        }
        self.coins[i]
    }
}

/// Resolve one zombie step using coins from the tape.  `false` selects
/// the earlier option in canonical order (horizontal before vertical,
/// positive before negative), so a two-way tie costs one coin, a four-way
/// tie two (axis, then direction), and a three-way tie rejection-samples
/// coin pairs.
fn pick_coupled(opts: &ZombieOptions, tape: &mut CoinTape, cursor: &mut u64) -> usize {
    let draw = |tape: &mut CoinTape, cursor: &mut u64| {
        let c = tape.get(*cursor as usize);
        *cursor += 1;
        c
    };
    match opts.len() {
        1 => 0,
        2 => draw(tape, cursor) as usize,
        4 => {
            let axis = draw(tape, cursor) as usize;
            let dir = draw(tape, cursor) as usize;
            2 * axis + dir
        }
        _ => loop {
            let v = 2 * draw(tape, cursor) as usize + draw(tape, cursor) as usize;
            if v < 3 {
                break v;
            }
        },
    }
}

/// Run the same zombie placements and the same coin tape against every
/// strategy in the list, each anchored at the origin and played for its
/// own M rounds.  Boards consume coins only while alive, so two copies of
/// the same strategy read identical prefixes and finish identically.
pub fn coupled_boards_check(
    n: usize,
    strategies: &[Strategy],
    k: u64,
    seed: u64,
) -> Result<CoupledReport> {
    if strategies.iter().any(|s| s.n() != n) {
        return Err(Error::MismatchedBoards);
    }
    let placements: Vec<TorusPoint> = (0..k)
        .map(|z| {
            let mut s = Stream::new(seed, &[TAG_PLACEMENT, z]);
            TorusPoint::new(s.below(n as u64) as u32, s.below(n as u64) as u32)
        })
        .collect();
    let mut tape = CoinTape { stream: Stream::new(seed, &[TAG_COIN_TAPE]), coins: Vec::new() };
    let anchor = TorusPoint::new(0, 0);

    let mut outcomes = Vec::with_capacity(strategies.len());
    let mut coins_used = Vec::with_capacity(strategies.len());
    for s in strategies {
        let traj = trajectory(s);
        let mut survivor = offset_vertex(anchor, traj.positions[0], n);
        let mut zombies = placements.clone();
        let mut cursor = 0u64;
        let mut outcome = TrialOutcome { captured: false, capture_round: None, seed };
        if zombies.contains(&survivor) {
            outcome = TrialOutcome { captured: true, capture_round: Some(0), seed };
        } else {
            'game: for round in 1..=traj.horizon() {
                for z in 0..zombies.len() {
                    let opts = zombie_move_options(zombies[z], survivor, n)
                        .expect("a zombie standing on the survivor would already have ended the game");
                    let pick = opts.as_slice()[pick_coupled(&opts, &mut tape, &mut cursor)];
                    zombies[z] = pick;
                    if pick == survivor {
                        outcome = TrialOutcome { captured: true, capture_round: Some(round as u64), seed };
                        break 'game;
                    }
                }
                survivor = offset_vertex(anchor, traj.positions[round], n);
                if zombies.contains(&survivor) {
                    outcome = TrialOutcome { captured: true, capture_round: Some(round as u64), seed };
                    break 'game;
                }
            }
        }
        outcomes.push(outcome);
        coins_used.push(cursor);
    }
    Ok(CoupledReport { outcomes, coins_used })
}

/// Monte Carlo return probability of the lazy drift chain after `y/2`
/// steps: from height 0 it climbs with probability one half, otherwise
/// holds; from positive height it climbs or falls with probability one
/// quarter each.  `y` must be even and positive.
pub fn r3_return_probability(y: u64, trials: u64, seed: u64) -> Result<f64> {
    if y == 0 || y % 2 != 0 {
        return Err(Error::OddDistance(y));
    }
    if trials == 0 {
        return Err(Error::TooFewTrials { got: 0, min: 1 });
    }
    let steps = y / 2;
    let returned = (0..trials)
        .into_par_iter()
        .filter(|&t| {
            let mut s = Stream::new(seed, &[TAG_CHAIN, t]);
            let mut z = 0u64;
            for _ in 0..steps {
                if z == 0 {
                    if s.coin() {
                        z = 1;
                    }
                } else {
                    match s.below(4) {
                        0 => z += 1,
                        1 => z -= 1,
                        _ => {}
                    }
                }
            }
            z == 0
        })
        .count();
    Ok(returned as f64 / trials as f64)
}

/// Survival frequency of the endless diagonal walk against a horde of
/// size `floor(sqrt(n) / omega)` over 10n rounds.  Returns 1 exactly when
/// the horde size rounds down to zero.
pub fn diagonal_survival_experiment(n: usize, omega: f64, trials: u64, seed: u64) -> Result<f64> {
    if n < 100 {
        return Err(Error::GridTooSmall { n, min: 100 });
    }
    assert!(omega > 0.0, "omega must be positive");
    let k = ((n as f64).sqrt() / omega).floor() as u64;
    if k == 0 {
        return Ok(1.0);
    }
    let est = estimate_capture_prob(n, k, &SurvivorPolicy::DiagonalForever, 10 * n as u64, trials, seed)?;
    Ok(1.0 - est.captured_frac)
}
