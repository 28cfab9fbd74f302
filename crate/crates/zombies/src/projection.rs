//! One-dimensional projections of capture fields and two coupled
//! lower-bound profiles.
//!
//! Summing a field over `y` gives the column profile `q[i](x)`.  No closed
//! recursion exists for `q` itself, but two explicit profiles `w` and `z`
//! track it from the same terminal data `(1, 3, 1)`: at each backward step
//! the cell under the survivor's column gains 2, and every cell at offset
//! `j >= 1` from that column becomes the average of itself and its inward
//! neighbour — `w` additionally gains 1 at both offset-1 cells.  The `z`
//! profile keeps a bounded-difference property: adjacent values never
//! differ by more than 4.
//!
//! Whether `q >= w` pointwise (the stronger claimed coupling) actually
//! holds is checked empirically by [`check_domination`]; scripts with
//! vertical steps do violate it near the survivor's column, and the report
//! records the most negative gap rather than hiding it.

use crate::field::{fold_capture, ProbField};
use crate::strategy::{trajectory, Strategy};
use crate::Result;

/// Which quantity a profile holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    /// Column sums of the exact field.
    Q,
    /// Coupled lower-bound profile with the offset-1 bonus.
    W,
    /// Weaker coupled profile with the bounded-difference property.
    Z,
}

/// Values over `x` in `[-M, M]` for one round.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjProfile {
    m: usize,
    round: usize,
    kind: ProfileKind,
    values: Vec<f64>,
}

impl ProjProfile {
    fn zeros(m: usize, round: usize, kind: ProfileKind) -> ProjProfile {
        ProjProfile { m, round, kind, values: vec![0.0; 2 * m + 1] }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    /// Value at column `x`; zero outside `[-M, M]`.
    pub fn get(&self, x: i64) -> f64 {
        let m = self.m as i64;
        if x.abs() > m {
            0.0
        } else {
            self.values[(x + m) as usize]
        }
    }

    fn set(&mut self, x: i64, v: f64) {
        let m = self.m as i64;
        self.values[(x + m) as usize] = v;
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Largest absolute difference between adjacent values, including the
    /// implicit zeros just outside the window.
    pub fn max_adjacent_difference(&self) -> f64 {
        let m = self.m as i64;
        (-m - 1..=m)
            .map(|x| (self.get(x) - self.get(x + 1)).abs())
            .fold(0.0, f64::max)
    }

    /// CSV rows `x,value` over the whole window.
    pub fn to_csv(&self) -> String {
        let m = self.m as i64;
        let mut out = String::from("x,value\n");
        for x in -m..=m {
            out.push_str(&format!("{x},{:.9e}\n", self.get(x)));
        }
        out
    }
}

/// Column sums of a field.
pub fn project(field: &ProbField) -> ProjProfile {
    let m = field.m() as i64;
    let mut p = ProjProfile::zeros(field.m(), field.round(), ProfileKind::Q);
    for x in -m..=m {
        let col: f64 = (-m..=m).map(|y| field.get(x, y)).sum();
        p.set(x, col);
    }
    p
}

/// The terminal profile `(1, 3, 1)` at offsets `(-1, 0, 1)`.
fn terminal_profile(m: usize, kind: ProfileKind) -> ProjProfile {
    let mut p = ProjProfile::zeros(m, m, kind);
    p.set(-1, 1.0);
    p.set(0, 3.0);
    p.set(1, 1.0);
    p
}

/// One backward step of the coupling recursion around the survivor's
/// column `center`.  Values outside the window are treated as zero.
fn coupling_step(old: &ProjProfile, center: i64, with_delta: bool) -> ProjProfile {
    let m = old.m as i64;
    let mut new = ProjProfile::zeros(old.m, old.round - 1, old.kind);
    for x in -m..=m {
        let d = x - center;
        let v = if d == 0 {
            old.get(x) + 2.0
        } else {
            let inward = x - d.signum();
            let mut v = 0.5 * (old.get(inward) + old.get(x));
            if with_delta && d.abs() == 1 {
                v += 1.0;
            }
            v
        };
        new.set(x, v);
    }
    new
}

/// All rounds `M down to 1` of one coupling profile for a normalized
/// strategy.
pub fn coupling_profiles(s: &Strategy, kind: ProfileKind) -> Result<Vec<ProjProfile>> {
    assert!(matches!(kind, ProfileKind::W | ProfileKind::Z), "q has no recursion; fold the field instead");
    if !s.is_normalized() {
        return Err(crate::Error::NotNormalized);
    }
    let with_delta = matches!(kind, ProfileKind::W);
    let traj = trajectory(s);
    let m = s.m();
    let mut rounds = Vec::with_capacity(m);
    rounds.push(terminal_profile(m, kind));
    for i in (2..=m).rev() {
        let center = traj.positions[i - 1].x;
        let next = coupling_step(rounds.last().unwrap(), center, with_delta);
        rounds.push(next);
    }
    Ok(rounds)
}

/// The round-1 `w` profile of a strategy.
pub fn w_profile(s: &Strategy) -> Result<ProjProfile> {
    Ok(coupling_profiles(s, ProfileKind::W)?.pop().unwrap())
}

/// The round-1 `z` profile of a strategy.
pub fn z_profile(s: &Strategy) -> Result<ProjProfile> {
    Ok(coupling_profiles(s, ProfileKind::Z)?.pop().unwrap())
}

/// Extremes of the pointwise gaps `q - w` and `w - z` across all rounds
/// and columns.
#[derive(Debug, Clone, PartialEq)]
pub struct DominationReport {
    /// Most negative (or smallest) value of `q[i](x) - w[i](x)`.
    pub min_q_minus_w: f64,
    /// `(round, x)` attaining `min_q_minus_w`.
    pub argmin_q_minus_w: (usize, i64),
    /// Cells where `q - w < -1e-9` — honest counterexamples to the
    /// claimed stronger coupling.
    pub q_w_violations: u64,
    /// Most negative (or smallest) value of `w[i](x) - z[i](x)`.
    pub min_w_minus_z: f64,
    /// `(round, x)` attaining `min_w_minus_z`.
    pub argmin_w_minus_z: (usize, i64),
    /// Cells where `w - z < -1e-9` (expected none).
    pub w_z_violations: u64,
}

const GAP_TOLERANCE: f64 = 1e-9;

/// Compare the exact projection `q` against both coupled profiles for
/// every round and column, reporting the worst gaps.  Nothing is clamped:
/// if a claimed bound fails somewhere, the report says where and by how
/// much.
pub fn check_domination(s: &Strategy) -> Result<DominationReport> {
    let w_rounds = coupling_profiles(s, ProfileKind::W)?;
    let z_rounds = coupling_profiles(s, ProfileKind::Z)?;
    let m = s.m() as i64;

    let mut report = DominationReport {
        min_q_minus_w: f64::INFINITY,
        argmin_q_minus_w: (0, 0),
        q_w_violations: 0,
        min_w_minus_z: f64::INFINITY,
        argmin_w_minus_z: (0, 0),
        w_z_violations: 0,
    };

    let mut index = 0usize;
    fold_capture(s, |field| {
        let q = project(field);
        let w = &w_rounds[index];
        let z = &z_rounds[index];
        debug_assert_eq!(w.round(), field.round());
        for x in -m..=m {
            let qw = q.get(x) - w.get(x);
            if qw < report.min_q_minus_w {
                report.min_q_minus_w = qw;
                report.argmin_q_minus_w = (field.round(), x);
            }
            if qw < -GAP_TOLERANCE {
                report.q_w_violations += 1;
            }
            let wz = w.get(x) - z.get(x);
            if wz < report.min_w_minus_z {
                report.min_w_minus_z = wz;
                report.argmin_w_minus_z = (field.round(), x);
            }
            if wz < -GAP_TOLERANCE {
                report.w_z_violations += 1;
            }
        }
        index += 1;
    })?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{capture_field, terminal_field, ProbField};
    use crate::strategy;

    #[test]
    fn projecting_the_terminal_cross() {
        let q = project(&terminal_field(4));
        for (x, want) in [(-2, 0.0), (-1, 1.0), (0, 3.0), (1, 1.0), (2, 0.0)] {
            assert_eq!(q.get(x), want);
        }
        assert_eq!(q.sum(), 5.0);
    }

    #[test]
    fn projecting_the_stay_diamond() {
        let q = project(&capture_field(&strategy::stay(8).unwrap()).unwrap());
        for (x, want) in [(-2, 1.0), (-1, 3.0), (0, 5.0), (1, 3.0), (2, 1.0)] {
            assert_eq!(q.get(x), want);
        }
    }

    #[test]
    fn projecting_zero_is_zero() {
        let q = project(&ProbField::zeros(3, 2));
        assert_eq!(q.sum(), 0.0);
        assert_eq!(q.max_adjacent_difference(), 0.0);
    }

    #[test]
    fn one_coupling_step_by_hand() {
        // From (1, 3, 1) with the survivor's column at 0:
        // z spreads to (0.5, 2, 5, 2, 0.5); w adds 1 at both offset-1 cells.
        let z0 = terminal_profile(5, ProfileKind::Z);
        let z1 = coupling_step(&z0, 0, false);
        for (x, want) in [(-2, 0.5), (-1, 2.0), (0, 5.0), (1, 2.0), (2, 0.5), (3, 0.0)] {
            assert_eq!(z1.get(x), want, "z at {x}");
        }
        let w0 = terminal_profile(5, ProfileKind::W);
        let w1 = coupling_step(&w0, 0, true);
        for (x, want) in [(-2, 0.5), (-1, 3.0), (0, 5.0), (1, 3.0), (2, 0.5)] {
            assert_eq!(w1.get(x), want, "w at {x}");
        }
    }

    #[test]
    fn z_differences_stay_bounded_for_builtins() {
        for name in strategy::BUILTIN_NAMES {
            let s = strategy::builtin(name, 48, 5).unwrap();
            for z in coupling_profiles(&s, ProfileKind::Z).unwrap() {
                assert!(z.max_adjacent_difference() <= 4.0 + 1e-12, "{name} round {}", z.round());
            }
        }
    }

    #[test]
    fn w_dominates_z_and_sums_grow() {
        for name in strategy::BUILTIN_NAMES {
            let s = strategy::builtin(name, 40, 5).unwrap();
            let ws = coupling_profiles(&s, ProfileKind::W).unwrap();
            let zs = coupling_profiles(&s, ProfileKind::Z).unwrap();
            let m = s.m() as i64;
            for (w, z) in ws.iter().zip(&zs) {
                for x in -m..=m {
                    assert!(w.get(x) - z.get(x) >= -1e-12, "{name} round {} x {x}", w.round());
                }
            }
            for pair in zs.windows(2) {
                assert!(pair[1].sum() >= pair[0].sum() - 1e-9, "{name}: z mass must not shrink");
            }
        }
    }

    /// Along the survivor's own column the z value gains exactly 2 when the
    /// projected position pauses and loses at most 2 when it moves.
    #[test]
    fn drift_along_the_projected_trajectory() {
        for name in ["stay", "go_down", "diagonal", "square:1"] {
            let s = strategy::builtin(name, 48, 5).unwrap();
            let traj = strategy::trajectory(&s);
            let zs = coupling_profiles(&s, ProfileKind::Z).unwrap();
            // zs[k] is round M-k; the survivor's column at round i is
            // traj.positions[i].x.
            let m = s.m();
            for k in 0..zs.len() - 1 {
                let (i, i_prev) = (m - k, m - k - 1);
                let x_i = traj.positions[i].x;
                let x_prev = traj.positions[i_prev].x;
                let before = zs[k].get(x_i);
                let after = zs[k + 1].get(x_prev);
                if x_prev == x_i {
                    assert!((after - before - 2.0).abs() < 1e-12, "{name} round {i}");
                } else {
                    assert!(after - before >= -2.0 - 1e-12, "{name} round {i}");
                }
            }
        }
    }

    /// The exact projection does NOT dominate w everywhere: one vertical
    /// step already pushes w above q right next to the survivor's column
    /// (q = 2.5 vs w = 3 at offset 1).  The report records the gap instead
    /// of pretending the bound holds.
    #[test]
    fn domination_report_for_one_vertical_step() {
        let s = strategy::go_down(8).unwrap();
        let report = check_domination(&s).unwrap();
        assert!((report.min_q_minus_w - (-0.5)).abs() < 1e-12, "{report:?}");
        assert_eq!(report.argmin_q_minus_w.0, 1);
        assert_eq!(report.argmin_q_minus_w.1.abs(), 1);
        assert!(report.q_w_violations > 0);
        assert!(report.min_w_minus_z >= 0.0);
        assert_eq!(report.w_z_violations, 0);
    }

    #[test]
    fn stay_put_respects_both_bounds() {
        let s = strategy::stay(80).unwrap();
        let report = check_domination(&s).unwrap();
        assert!(report.min_q_minus_w >= -1e-12, "{report:?}");
        assert!(report.min_w_minus_z >= -1e-12, "{report:?}");
        assert_eq!(report.q_w_violations, 0);
        assert_eq!(report.w_z_violations, 0);
    }
}
