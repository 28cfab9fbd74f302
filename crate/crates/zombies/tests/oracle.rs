//! Cross-checks between the backward fold and the independent
//! tie-enumeration oracle, at horizons small enough to enumerate.

use zombies::*;

/// Every normalized script up to M = 4 produces the same field from the
/// backward fold and from brute-force enumeration of all coin outcomes.
/// Both computations are exact in double precision (all values are dyadic
/// rationals), so the comparison is equality, not a tolerance.
#[test]
fn fold_and_enumeration_agree_for_all_short_scripts() {
    for m in 1..=4 {
        for s in enumerate_f0(m).unwrap() {
            let folded = capture_field(&s).unwrap();
            let enumerated = zombies::reference::capture_field_enumerated(&s).unwrap();
            let mi = m as i64;
            for y in -mi..=mi {
                for x in -mi..=mi {
                    assert_eq!(
                        folded.get(x, y),
                        enumerated.get(x, y),
                        "script {} cell ({x}, {y})",
                        s.move_string()
                    );
                }
            }
        }
    }
}

/// The exhaustive minimum is a lower bound for anything hill climbing
/// finds on the same grid.
#[test]
fn exhaustive_minimum_bounds_local_search() {
    let m = 3;
    let exact = exact_tn(m).unwrap();
    let init = Strategy::normalized(4 * m, vec![zombies::torus::Move::Stay; m]).unwrap();
    let climbed = local_search(4 * m, &init, 60, 1).unwrap();
    assert!(climbed.best_t >= exact.best_t - 1e-12);
}

/// The enumeration oracle predicts real game frequencies exactly once the
/// phase conventions are aligned.  In the game the survivor stands on his
/// start vertex while round 1's zombies move; the analytic trajectory
/// instead indexes the survivor one move ahead.  Duplicating the start
/// position (and running the game one round longer, which the scripted
/// survivor spends standing on the origin) makes the two models
/// identical, so the Monte Carlo frequency must match the enumerated
/// total to sampling error.
#[test]
fn enumerated_mass_predicts_game_capture_rates() {
    let n = 16;
    let s = builtin("diagonal", n, 0).unwrap();
    let m = s.m();
    let mut traj = trajectory(&s);
    traj.positions.insert(0, traj.positions[0]);
    let reach = (m + 2) as i64;
    let mut predicted = 0.0;
    for y in -reach..=reach {
        for x in -reach..=reach {
            predicted += zombies::reference::capture_probability(
                &traj,
                zombies::torus::PlanePoint { x, y },
            );
        }
    }
    predicted /= (n * n) as f64;

    let policy = SurvivorPolicy::Scripted {
        strategy: s.clone(),
        anchor: zombies::torus::TorusPoint::new(8, 8),
    };
    let trials = 40_000u64;
    let est = estimate_capture_prob(n, 1, &policy, m as u64 + 1, trials, 12).unwrap();
    let se = (predicted * (1.0 - predicted) / trials as f64).sqrt();
    assert!(
        (est.captured_frac - predicted).abs() < 4.0 * se,
        "predicted {predicted}, measured {} ± {se}",
        est.captured_frac
    );
}
