//! Optimizing the field mass t over scripted strategies: exhaustive
//! enumeration at toy horizons, hill climbing at real sizes, and the
//! log-log growth fit across grid sizes.

use rayon::prelude::*;

use crate::field::weight;
use crate::rng::{Stream, TAG_SEARCH};
use crate::strategy::{builtin, enumerate_f0, nth_strategy, Strategy};
use crate::torus::Move;
use crate::{Error, Result};

/// Outcome of a minimization run.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    /// Best normalized strategy found.
    pub best: Strategy,
    /// Its field mass t.
    pub best_t: f64,
    /// How many strategies were evaluated.
    pub evaluations: u64,
}

fn mass(s: &Strategy) -> f64 {
    weight(s).expect("search only evaluates normalized strategies").t
}

/// The exact minimum of t over every normalized script of length `m`
/// (grid size `4m`), by enumerating all `5^m` of them.  Ties resolve to
/// the enumeration's first strategy, so the result is deterministic.
pub fn exact_tn(m: usize) -> Result<SearchReport> {
    drop(enumerate_f0(m)?);
    let count = 5u64.pow(m as u32);
    let (best_t, best_index) = (0..count)
        .into_par_iter()
        .map(|i| (mass(&nth_strategy(m, i)), i))
        .reduce(
            || (f64::INFINITY, u64::MAX),
            |a, b| {
                if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    Ok(SearchReport { best: nth_strategy(m, best_index), best_t, evaluations: count })
}

/// Steepest-descent hill climbing over single-move edits, with random
/// restarts at local optima.  `budget` counts strategy evaluations (the
/// initial strategy is free); the best strategy ever seen is returned, so
/// the result is never worse than `init`.  A fixed seed gives a fixed
/// report regardless of worker count.
///
/// Panics if `init` was built for a different grid size than `n`.
pub fn local_search(n: usize, init: &Strategy, budget: u64, seed: u64) -> Result<SearchReport> {
    assert_eq!(init.n(), n, "initial strategy sized for a different grid");
    if !init.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let m = init.m();
    let mut cur = init.clone();
    let mut t_cur = mass(&cur);
    let mut best = cur.clone();
    let mut best_t = t_cur;
    let mut evals = 0u64;
    let mut restarts = Stream::new(seed, &[TAG_SEARCH]);

    while evals < budget {
        // The full one-edit neighbourhood, truncated to the remaining
        // budget in generation order.
        let mut neighbors = Vec::with_capacity(4 * m);
        for i in 0..m {
            for mv in Move::ALL {
                if mv != cur.moves()[i] {
                    neighbors.push(cur.with_move(i, mv));
                }
            }
        }
        neighbors.truncate((budget - evals) as usize);
        let ts: Vec<f64> = neighbors.par_iter().map(mass).collect();
        evals += neighbors.len() as u64;

        // Steepest descent; ties break on the move string so the pick is
        // independent of evaluation order.
        let mut pick: Option<usize> = None;
        for (i, &t) in ts.iter().enumerate() {
            if t >= t_cur {
                continue;
            }
            pick = match pick {
                None => Some(i),
                Some(j) if t < ts[j] => Some(i),
                Some(j) if t == ts[j] && neighbors[i].move_string() < neighbors[j].move_string() => {
                    Some(i)
                }
                keep => keep,
            };
        }
        match pick {
            Some(i) => {
                cur = neighbors[i].clone();
                t_cur = ts[i];
                if t_cur < best_t {
                    best = cur.clone();
                    best_t = t_cur;
                }
            }
            None => {
                if evals >= budget {
                    break;
                }
                // Local optimum: restart from a uniformly random script.
                let moves = (0..m).map(|_| Move::ALL[restarts.below(5) as usize]).collect();
                cur = Strategy::normalized(n, moves)?;
                t_cur = mass(&cur);
                evals += 1;
                if t_cur < best_t {
                    best = cur.clone();
                    best_t = t_cur;
                }
            }
        }
    }
    Ok(SearchReport { best, best_t, evaluations: evals })
}

/// The field mass of one named builtin at each grid size.
pub fn scaling_points(name: &str, n_list: &[usize], seed: u64) -> Result<Vec<(usize, f64)>> {
    n_list.iter().map(|&n| Ok((n, weight(&builtin(name, n, seed)?)?.t))).collect()
}

/// Least-squares slope of `ln t` against `ln n`.
pub fn fit_log_slope(points: &[(usize, f64)]) -> f64 {
    assert!(points.len() >= 2, "a slope needs at least two points");
    let logs: Vec<(f64, f64)> = points.iter().map(|&(n, t)| ((n as f64).ln(), t.ln())).collect();
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / logs.len() as f64;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / logs.len() as f64;
    let cov: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let var: f64 = logs.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    cov / var
}

/// Fit the growth exponent of t for a named builtin across at least
/// three grid sizes.
pub fn scaling_sweep(name: &str, n_list: &[usize], seed: u64) -> Result<f64> {
    if n_list.len() < 3 {
        return Err(Error::TooFewSizes(n_list.len()));
    }
    Ok(fit_log_slope(&scaling_points(name, n_list, seed)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy;
    use std::collections::HashMap;

    #[test]
    fn one_move_scripts_all_tie_at_the_terminal_mass() {
        let report = exact_tn(1).unwrap();
        assert_eq!(report.evaluations, 5);
        assert_eq!(report.best_t, 5.0);
        assert_eq!(report.best.move_string(), "U");
    }

    #[test]
    fn two_move_scripts_beat_standing_still() {
        // Standing still scores 13; a single vertical excursion already
        // reaches 11, so the exact minimum is strictly better.
        let report = exact_tn(2).unwrap();
        assert_eq!(report.evaluations, 25);
        assert!(report.best_t <= 11.0, "{report:?}");
        assert!(report.best_t >= 8.0, "{report:?}");
        let stay_t = weight(&strategy::stay(8).unwrap()).unwrap().t;
        assert_eq!(stay_t, 13.0);
        assert!(report.best_t < stay_t);
    }

    #[test]
    fn the_mass_is_mirror_symmetric() {
        let mut by_script: HashMap<String, f64> = HashMap::new();
        for s in enumerate_f0(3).unwrap() {
            by_script.insert(s.move_string(), mass(&s));
        }
        for (script, t) in &by_script {
            let mirrored: String = script
                .chars()
                .map(|c| Move::from_code(c).unwrap().mirror_x().code())
                .collect();
            let mt = by_script[&mirrored];
            assert!((t - mt).abs() <= 1e-12, "{script} vs {mirrored}: {t} vs {mt}");
        }
    }

    #[test]
    fn hill_climbing_improves_on_standing_still() {
        let init = strategy::stay(64).unwrap();
        let t0 = weight(&init).unwrap().t;
        let report = local_search(64, &init, 200, 17).unwrap();
        assert!(report.best_t < t0, "{report:?}");
        assert!(report.evaluations <= 200);
    }

    #[test]
    fn a_zero_budget_returns_the_initial_strategy() {
        let init = strategy::diagonal(32).unwrap();
        let report = local_search(32, &init, 0, 0).unwrap();
        assert_eq!(report.best, init);
        assert_eq!(report.evaluations, 0);
        assert_eq!(report.best_t, weight(&init).unwrap().t);
    }

    #[test]
    fn search_is_reproducible() {
        let init = strategy::go_down(40).unwrap();
        let a = local_search(40, &init, 150, 23).unwrap();
        let b = local_search(40, &init, 150, 23).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    #[should_panic(expected = "different grid")]
    fn search_rejects_a_mismatched_grid() {
        let init = strategy::stay(16).unwrap();
        let _ = local_search(64, &init, 10, 0);
    }

    #[test]
    fn standing_still_scales_quadratically() {
        let slope = scaling_sweep("stay", &[100, 200, 400], 0).unwrap();
        assert!((slope - 2.0).abs() < 0.05, "{slope}");
        assert!(matches!(
            scaling_sweep("stay", &[100, 200], 0),
            Err(Error::TooFewSizes(2))
        ));
    }
}
