//! Exact capture-probability fields for scripted survivors.
//!
//! `p[i](x, y)` is the probability that a zombie whose displacement from
//! the survivor's final vertex is `(x, y)` at the beginning of round `i`
//! eats the survivor by the end of round `M`.  At round `M` the zombie must
//! already be within distance 1; earlier rounds follow by a backward sweep:
//! a zombie off both survivor axes steps horizontally or vertically toward
//! the survivor with probability 1/2 each, an aligned zombie's step is
//! forced, and after every sweep the survivor's vertex and its four
//! neighbours are set to probability 1.  The sweep reads one field and
//! writes a fresh one, so rows parallelize without write conflicts.

use crate::strategy::{trajectory, Strategy};
use crate::torus::PlanePoint;
use crate::{Error, Result};
use rayon::prelude::*;

/// Smallest horizon at which the row sweep is farmed out to rayon; tiny
/// fields stay serial to avoid scheduling overhead in enumeration loops.
const PARALLEL_MIN_M: usize = 64;

/// A `(2M+1) x (2M+1)` window of capture probabilities centered on the
/// survivor's final vertex, tagged with the round it describes.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbField {
    m: usize,
    round: usize,
    values: Vec<f64>,
}

impl ProbField {
    /// All-zero field.
    pub fn zeros(m: usize, round: usize) -> ProbField {
        let w = 2 * m + 1;
        ProbField { m, round, values: vec![0.0; w * w] }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// The round index `i` this field describes (1 ..= M).
    pub fn round(&self) -> usize {
        self.round
    }

    /// Window width `2M + 1`.
    pub fn width(&self) -> usize {
        2 * self.m + 1
    }

    #[inline]
    fn idx(&self, x: i64, y: i64) -> usize {
        let m = self.m as i64;
        debug_assert!(x.abs() <= m && y.abs() <= m);
        (y + m) as usize * self.width() + (x + m) as usize
    }

    /// Value at displacement `(x, y)`; zero outside the window.
    #[inline]
    pub fn get(&self, x: i64, y: i64) -> f64 {
        let m = self.m as i64;
        if x.abs() > m || y.abs() > m {
            0.0
        } else {
            self.values[self.idx(x, y)]
        }
    }

    pub fn set(&mut self, x: i64, y: i64, v: f64) {
        let i = self.idx(x, y);
        self.values[i] = v;
    }

    /// Total mass, accumulated per row and then across rows so the result
    /// does not depend on how many workers computed the field.
    pub fn sum(&self) -> f64 {
        self.values.chunks(self.width()).map(|row| row.iter().sum::<f64>()).sum()
    }

    /// Cells with nonzero probability, row by row (y ascending, then x).
    pub fn nonzero_cells(&self) -> impl Iterator<Item = (i64, i64, f64)> + '_ {
        let m = self.m as i64;
        (-m..=m).flat_map(move |y| {
            (-m..=m).filter_map(move |x| {
                let v = self.get(x, y);
                (v > 0.0).then_some((x, y, v))
            })
        })
    }
}

/// The round-`M` field: probability 1 on the survivor's final vertex and
/// its four neighbours, 0 elsewhere.
pub fn terminal_field(m: usize) -> ProbField {
    assert!(m >= 1, "horizon must be at least 1");
    let mut f = ProbField::zeros(m, m);
    for (x, y) in [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)] {
        f.set(x, y, 1.0);
    }
    f
}

/// One backward sweep: from the round-`i` field and the survivor's position
/// at round `i-1`, produce the round-`i-1` field.  The propagation
/// preserves total mass; the final overwrite of the survivor's cross can
/// only raise it, by at least 4.
pub fn step_back(field: &ProbField, survivor_pos: PlanePoint) -> Result<ProbField> {
    let m = field.m;
    if field.round < 2 || field.round > m {
        return Err(Error::BadRound { round: field.round, m });
    }
    if survivor_pos.l1() > m as i64 {
        return Err(Error::SurvivorOutOfWindow { x: survivor_pos.x, y: survivor_pos.y });
    }
    let mut out = ProbField::zeros(m, field.round - 1);
    sweep_into(field, &mut out, survivor_pos, m as i64);
    out.round = field.round - 1;
    Ok(out)
}

/// The round-1 field of a normalized strategy: the terminal cross folded
/// backwards through the survivor's positions at rounds `M-1 .. 1`.  Its
/// support stays inside the L1 diamond of radius `M`.
pub fn capture_field(s: &Strategy) -> Result<ProbField> {
    fold_capture(s, |_| {})
}

/// Summary of a strategy's field mass and its two conventional scalings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSummary {
    /// Total mass `t(S)` of the round-1 field.  Always between `4M` and
    /// `2M^2 + 2M + 1` (the diamond cell count, attained by all-Stay).
    pub t: f64,
    /// `t / (n^2 / 8)` — mass relative to the asymptotic diamond area.
    pub t_scaled_sq: f64,
    /// `t / n^(3/2)` — the scaling under which diagonal descent levels off.
    pub t_scaled_32: f64,
}

/// Total field mass and scalings for a normalized strategy.
pub fn weight(s: &Strategy) -> Result<WeightSummary> {
    let field = capture_field(s)?;
    let t = field.sum();
    let n = s.n() as f64;
    Ok(WeightSummary { t, t_scaled_sq: t / (n * n / 8.0), t_scaled_32: t / n.powf(1.5) })
}

/// Fold the backward sweep across all rounds, invoking `on_round` on every
/// intermediate field from round `M` down to round 1 (inclusive), and
/// return the round-1 field.
///
/// Two buffers ping-pong: the support of the round-`i` field lies in the
/// L1 diamond of radius `M - i + 1`, which grows by one per backward step,
/// so rewriting exactly that diamond always covers every cell the same
/// buffer held two steps earlier; everything outside stays zero.
pub(crate) fn fold_capture(s: &Strategy, mut on_round: impl FnMut(&ProbField)) -> Result<ProbField> {
    if !s.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let m = s.m();
    let traj = trajectory(s);
    let mut cur = terminal_field(m);
    on_round(&cur);
    let mut scratch = ProbField::zeros(m, m);
    for i in (2..=m).rev() {
        let pos = traj.positions[i - 1];
        debug_assert!(pos.l1() <= (m - i + 1) as i64);
        let radius = (m - i + 2) as i64;
        sweep_into(&cur, &mut scratch, pos, radius);
        scratch.round = i - 1;
        std::mem::swap(&mut cur, &mut scratch);
        on_round(&cur);
    }
    Ok(cur)
}

/// Write the gathered sweep of `old` into `out` over the L1 diamond of the
/// given radius (clipped to the window), then clamp the survivor's cross.
fn sweep_into(old: &ProbField, out: &mut ProbField, s: PlanePoint, radius: i64) {
    let m = old.m as i64;
    let w = old.width();
    let radius = radius.min(m);
    let (sx, sy) = (s.x, s.y);

    let row_range = move |y: i64| -> (i64, i64) {
        let half = radius - y.abs();
        (-half, half)
    };

    let sweep_row = |row: &mut [f64], y: i64| {
        let (lo, hi) = row_range(y);
        // Read rows: same-y for horizontal gathers, one step toward the
        // survivor's y for vertical gathers.
        let row_h = &old.values[(y + m) as usize * w..(y + m) as usize * w + w];
        let vy = y + (sy - y).signum();
        let row_v = &old.values[(vy + m) as usize * w..(vy + m) as usize * w + w];
        let at = |r: &[f64], x: i64| r[(x + m) as usize];
        if y == sy {
            // Zombies on the survivor's row move horizontally only.
            for x in lo..=hi {
                let hx = x + (sx - x).signum();
                row[(x + m) as usize] = at(row_h, hx);
            }
        } else {
            for x in lo..=hi {
                let v = if x == sx {
                    at(row_v, x)
                } else {
                    let hx = x + (sx - x).signum();
                    0.5 * at(row_h, hx) + 0.5 * at(row_v, x)
                };
                row[(x + m) as usize] = v;
            }
        }
    };

    if old.m >= PARALLEL_MIN_M {
        out.values.par_chunks_mut(w).enumerate().for_each(|(yi, row)| {
            let y = yi as i64 - m;
            if y.abs() <= radius {
                sweep_row(row, y);
            }
        });
    } else {
        for (yi, row) in out.values.chunks_mut(w).enumerate() {
            let y = yi as i64 - m;
            if y.abs() <= radius {
                sweep_row(row, y);
            }
        }
    }

    // The survivor's vertex and its neighbours are certain captures.
    for (x, y) in [(sx, sy), (sx + 1, sy), (sx - 1, sy), (sx, sy + 1), (sx, sy - 1)] {
        if x.abs() <= m && y.abs() <= m {
            out.set(x, y, 1.0);
        }
    }
}

/// Output encodings for a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    /// `x,y,p` rows for every nonzero cell, probabilities with 10
    /// significant digits.
    Csv,
    /// Binary 8-bit PGM (`P5`), one pixel per cell, dark = probable.
    PgmBinary,
    /// ASCII PGM (`P2`), same pixels as the binary variant.
    PgmAscii,
}

/// Serialize a field.  PGM pixels are `round(255 * (1 - p))`, so certain
/// capture renders black; the top image row is `y = +M`.
pub fn export_field(field: &ProbField, format: ExportFormat) -> Vec<u8> {
    let m = field.m as i64;
    let w = field.width();
    match format {
        ExportFormat::Csv => {
            let mut out = String::from("x,y,p\n");
            for (x, y, v) in field.nonzero_cells() {
                out.push_str(&format!("{x},{y},{v:.9e}\n"));
            }
            out.into_bytes()
        }
        ExportFormat::PgmBinary => {
            let mut out = format!("P5\n{w} {w}\n255\n").into_bytes();
            out.reserve(w * w);
            for y in (-m..=m).rev() {
                for x in -m..=m {
                    out.push(pixel(field.get(x, y)));
                }
            }
            out
        }
        ExportFormat::PgmAscii => {
            let mut out = format!("P2\n{w} {w}\n255\n");
            for y in (-m..=m).rev() {
                let row: Vec<String> = (-m..=m).map(|x| pixel(field.get(x, y)).to_string()).collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
            out.into_bytes()
        }
    }
}

fn pixel(p: f64) -> u8 {
    (255.0 * (1.0 - p)).round() as u8
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::{self, Strategy};
    use crate::torus::Move;

    fn field_cells(field: &ProbField) -> Vec<(i64, i64, f64)> {
        field.nonzero_cells().collect()
    }

    #[test]
    fn terminal_field_is_the_unit_cross() {
        let f = terminal_field(2);
        assert_eq!(f.sum(), 5.0);
        assert_eq!(f.get(0, 0), 1.0);
        assert_eq!(f.get(1, 1), 0.0);
        assert_eq!(field_cells(&f).len(), 5);
        let big = terminal_field(9);
        assert_eq!(big.get(0, 0), 1.0);
        assert_eq!(big.sum(), 5.0);
    }

    /// Stationary survivor: each sweep thickens the diamond of ones, with
    /// field sums 5, 13, 25.
    #[test]
    fn stationary_survivor_sums() {
        let f2 = terminal_field(2);
        let f1 = step_back(&f2, PlanePoint::ORIGIN).unwrap();
        assert_eq!(f1.sum(), 13.0);
        for y in -2i64..=2 {
            for x in -2i64..=2 {
                let want = if x.abs() + y.abs() <= 2 { 1.0 } else { 0.0 };
                assert_eq!(f1.get(x, y), want, "({x},{y})");
            }
        }

        let f3 = terminal_field(3);
        let f2 = step_back(&f3, PlanePoint::ORIGIN).unwrap();
        let f1 = step_back(&f2, PlanePoint::ORIGIN).unwrap();
        assert_eq!(f2.sum(), 13.0);
        assert_eq!(f1.sum(), 25.0);
    }

    /// Survivor climbing straight up, entering the origin from below: sweep
    /// sums 5, 11, 19, and the two-step field has thirteen cells of 1.0,
    /// four of 0.75, four of 0.50 and four of 0.25.
    #[test]
    fn ascending_survivor_sums_and_values() {
        let f3 = terminal_field(3);
        let f2 = step_back(&f3, PlanePoint::new(0, -1)).unwrap();
        assert_eq!(f2.sum(), 11.0);
        // Halves appear on the survivor's former row, certainty on the
        // cross around (0,-1) and straight above it.
        assert_eq!(f2.get(0, 2), 1.0);
        for x in [-1, 0, 1] {
            assert_eq!(f2.get(x, 1), 1.0);
            assert_eq!(f2.get(x, -1), 1.0);
        }
        for x in [-2, -1, 1, 2] {
            assert_eq!(f2.get(x, 0), 0.5);
        }
        assert_eq!(f2.get(0, 0), 1.0);
        assert_eq!(f2.get(0, -2), 1.0);

        let f1 = step_back(&f2, PlanePoint::new(0, -2)).unwrap();
        assert_eq!(f1.sum(), 19.0);
        let mut counts = std::collections::BTreeMap::new();
        for (_, _, v) in f1.nonzero_cells() {
            *counts.entry(format!("{v:.2}")).or_insert(0u32) += 1;
        }
        let want: std::collections::BTreeMap<String, u32> = [("1.00", 13), ("0.75", 4), ("0.50", 4), ("0.25", 4)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        assert_eq!(counts, want);
    }

    #[test]
    fn stay_field_is_the_full_diamond() {
        let s = strategy::stay(40).unwrap();
        let f = capture_field(&s).unwrap();
        assert_eq!(f.round(), 1);
        let m = 10i64;
        for y in -m..=m {
            for x in -m..=m {
                let want = if x.abs() + y.abs() <= m { 1.0 } else { 0.0 };
                assert_eq!(f.get(x, y), want, "({x},{y})");
            }
        }
    }

    #[test]
    fn origin_is_always_certain() {
        for name in strategy::BUILTIN_NAMES {
            let s = strategy::builtin(name, 24, 3).unwrap();
            let f = capture_field(&s).unwrap();
            assert_eq!(f.get(0, 0), 1.0, "{name}");
        }
    }

    #[test]
    fn vertical_scripts_are_mirror_symmetric() {
        for s in [strategy::stay(48).unwrap(), strategy::go_down(48).unwrap()] {
            let f = capture_field(&s).unwrap();
            let m = s.m() as i64;
            for y in -m..=m {
                for x in 0..=m {
                    assert_eq!(f.get(x, y), f.get(-x, y), "({x},{y})");
                }
            }
        }
    }

    #[test]
    fn stay_weight_matches_diamond_count() {
        let summary = weight(&strategy::stay(1000).unwrap()).unwrap();
        assert_eq!(summary.t, 125_501.0);
        assert!((summary.t_scaled_sq - 125_501.0 / 125_000.0).abs() < 1e-12);
    }

    #[test]
    fn step_back_rejects_bad_inputs() {
        let f = terminal_field(3);
        let f2 = step_back(&f, PlanePoint::ORIGIN).unwrap();
        let f1 = step_back(&f2, PlanePoint::ORIGIN).unwrap();
        assert_eq!(f1.round(), 1);
        assert_eq!(step_back(&f1, PlanePoint::ORIGIN), Err(Error::BadRound { round: 1, m: 3 }));
        assert_eq!(
            step_back(&f, PlanePoint::new(4, 0)),
            Err(Error::SurvivorOutOfWindow { x: 4, y: 0 })
        );
    }

    #[test]
    fn capture_field_requires_normalization() {
        let skewed = Strategy::new(8, PlanePoint::ORIGIN, vec![Move::Down, Move::Down]).unwrap();
        assert_eq!(capture_field(&skewed), Err(Error::NotNormalized));
    }

    #[test]
    fn csv_export_lists_nonzero_cells() {
        let out = export_field(&terminal_field(1), ExportFormat::Csv);
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,y,p");
        assert_eq!(lines.len(), 6);
        assert!(lines[1..].iter().all(|l| l.ends_with("1.000000000e0")));
    }

    #[test]
    fn pgm_export_shades_by_probability() {
        let empty = ProbField::zeros(2, 1);
        let out = export_field(&empty, ExportFormat::PgmBinary);
        let header = b"P5\n5 5\n255\n";
        assert_eq!(&out[..header.len()], header);
        assert!(out[header.len()..].iter().all(|&b| b == 255));
        assert_eq!(out[header.len()..].len(), 25);

        let ascii = export_field(&terminal_field(1), ExportFormat::PgmAscii);
        let text = String::from_utf8(ascii).unwrap();
        // Rows are printed top-down: the cross renders black on white.
        assert_eq!(text, "P2\n3 3\n255\n255 0 255\n0 0 0\n255 0 255\n");
    }
}
