//! Brute-force capture probabilities by enumerating every tie decision.
//!
//! A zombie far from the grid's wrap-around seam performs a plane walk:
//! each round it steps one unit closer to the survivor, flipping a fair
//! coin only when both axes are unequal.  Enumerating both branches of
//! every coin gives the capture probability as a dyadic rational with
//! denominator at most `2^(M-1)` — exactly representable in an `f64`, so
//! the comparison against the backward-folded field is exact, not
//! approximate.  Only practical at toy window sizes: the tree has up to
//! `2^(M-1)` leaves per start cell.

use crate::field::ProbField;
use crate::strategy::{trajectory, Strategy, SurvivorTrajectory};
use crate::torus::PlanePoint;
use crate::{Error, Result};

const MAX_ENUMERATED_HORIZON: usize = 12;

/// Probability that a zombie starting at displacement `start` from the
/// walk's anchor is captured within the script window.
///
/// Capture at round `i` means the zombie begins the round within distance
/// 1 of the survivor's position — it is either already on the survivor or
/// steps onto them.
pub fn capture_probability(traj: &SurvivorTrajectory, start: PlanePoint) -> f64 {
    fn go(traj: &SurvivorTrajectory, z: PlanePoint, i: usize) -> f64 {
        let s = traj.positions[i];
        let (dx, dy) = (s.x - z.x, s.y - z.y);
        if dx.abs() + dy.abs() <= 1 {
            return 1.0;
        }
        if i == traj.horizon() {
            return 0.0;
        }
        let step_x = PlanePoint { x: z.x + dx.signum(), y: z.y };
        let step_y = PlanePoint { x: z.x, y: z.y + dy.signum() };
        if dx == 0 {
            go(traj, step_y, i + 1)
        } else if dy == 0 {
            go(traj, step_x, i + 1)
        } else {
            0.5 * go(traj, step_x, i + 1) + 0.5 * go(traj, step_y, i + 1)
        }
    }
    go(traj, start, 1)
}

/// The full capture field of a strategy, computed cell by cell from the
/// enumeration above instead of the backward fold.
pub fn capture_field_enumerated(s: &Strategy) -> Result<ProbField> {
    if !s.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let m = s.m();
    if m > MAX_ENUMERATED_HORIZON {
        return Err(Error::EnumerationTooLarge { m, max: MAX_ENUMERATED_HORIZON });
    }
    let traj = trajectory(s);
    let mut field = ProbField::zeros(m, 1);
    let mi = m as i64;
    for y in -mi..=mi {
        for x in -mi..=mi {
            if x.abs() + y.abs() <= mi {
                field.set(x, y, capture_probability(&traj, PlanePoint { x, y }));
            }
        }
    }
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::capture_field;
    use crate::strategy;

    #[test]
    fn forced_walks_need_no_coins() {
        // A zombie straight below a stationary survivor covers distance d
        // in exactly d rounds: captured iff d - 1 <= M.
        let s = strategy::stay(16).unwrap();
        let traj = strategy::trajectory(&s);
        assert_eq!(capture_probability(&traj, PlanePoint { x: 0, y: -4 }), 1.0);
        assert_eq!(capture_probability(&traj, PlanePoint::ORIGIN), 1.0);
    }

    #[test]
    fn single_coin_splits_evenly() {
        // Distance-3 diagonal start against a stationary survivor: both
        // branches converge, capture regardless of the coin.
        let s = strategy::stay(8).unwrap();
        let traj = strategy::trajectory(&s);
        assert_eq!(capture_probability(&traj, PlanePoint { x: 1, y: 1 }), 1.0);
        assert_eq!(capture_probability(&traj, PlanePoint { x: 1, y: -1 }), 1.0);
    }

    #[test]
    fn enumeration_matches_the_fold_exactly() {
        for name in ["stay", "go_down", "diagonal"] {
            let s = strategy::builtin(name, 16, 0).unwrap();
            let folded = capture_field(&s).unwrap();
            let enumerated = capture_field_enumerated(&s).unwrap();
            let m = s.m() as i64;
            for y in -m..=m {
                for x in -m..=m {
                    assert_eq!(
                        folded.get(x, y),
                        enumerated.get(x, y),
                        "{name} at ({x}, {y})"
                    );
                }
            }
        }
    }

    #[test]
    fn horizon_guard() {
        let s = strategy::stay(80).unwrap();
        assert!(matches!(
            capture_field_enumerated(&s),
            Err(Error::EnumerationTooLarge { m: 20, max: 12 })
        ));
    }
}
