//! Density evolution for the coarsely quantized decoders on the bi-AWGN
//! channel.
//!
//! For a `(dv, dc)`-regular ensemble the message distributions conditioned on
//! the transmitted +1 stay finite (two, three, or four masses), so the
//! evolution is exact: check updates have closed forms in the mass
//! differences, and variable updates are binomial/multinomial mixtures of
//! Gaussian tails.
//!
//! Check-message weights are the matched log ratios of the check output
//! distribution (`w = ln((1−q)/q)` for BMP and the per-magnitude analogues
//! for TMP/QMP), capped at [`W_MAX`]. Quantizer thresholds for TMP/QMP are
//! chosen greedily per iteration to maximize the mutual information between
//! the outgoing message and the code bit.

use crate::channel::{qfunc, ChannelParams};
use crate::decoders::{DecoderKind, ScheduleRow, WeightSchedule};
use thiserror::Error;

/// Weight cap in LLR units; `ln((1−q)/q)` diverges as q → 0.
pub const W_MAX: f64 = 30.0;

/// Iteration budget used by threshold searches.
pub const THRESHOLD_MAX_ITERS: usize = 2000;

/// Default Es/N0 bracket for threshold bisection, in dB.
pub const THRESHOLD_BRACKET: (f64, f64) = (0.0, 8.0);

/// Errors raised by the density evolution routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeError {
    #[error("p = {0} outside [0, 1/2]")]
    InvalidP(f64),
    #[error("unsupported kind: density evolution is defined for bmp|tmp|qmp")]
    UnsupportedKind,
    #[error("threshold not bracketed in [{lo}, {hi}] dB (target {target})")]
    BracketFailure { lo: f64, hi: f64, target: f64 },
}

/// Density evolution record: per-iteration error measures and the schedule
/// parameters they induce.
#[derive(Debug, Clone)]
pub struct DeTrajectory {
    pub kind: DecoderKind,
    pub dv: u32,
    pub dc: u32,
    pub esno_db: f64,
    /// VN-to-CN error probability per iteration; `p[0]` is the channel
    /// point. For TMP erasures count half, for QMP this is the sign error.
    pub p: Vec<f64>,
    /// CN-to-VN error probability per iteration (same convention).
    pub q: Vec<f64>,
    /// Weights and thresholds, one row per iteration.
    pub rows: Vec<ScheduleRow>,
    /// Channel quantizer threshold for the first TMP/QMP message.
    pub initial_threshold: f64,
}

impl DeTrajectory {
    /// True once the trajectory has pushed the error measure to `target`.
    pub fn reaches(&self, target: f64) -> bool {
        self.p.iter().any(|&p| p <= target)
    }
}

/// One BMP density evolution step.
///
/// Returns `(q, w, p_next)`: the check error probability
/// `q = (1 − (1−2p)^(dc−1))/2`, the matched weight `w = ln((1−q)/q)` capped
/// at [`W_MAX`], and the next variable message error probability as a
/// binomial mixture of Gaussian tails.
pub fn de_bmp_step(p: f64, dv: u32, dc: u32, esno_db: f64) -> Result<(f64, f64, f64), DeError> {
    if !(0.0..=0.5).contains(&p) {
        return Err(DeError::InvalidP(p));
    }
    let q = (1.0 - (1.0 - 2.0 * p).powi(dc as i32 - 1)) / 2.0;
    let w = bmp_weight(q);
    let sigma = ChannelParams::new(esno_db, 0).sigma();
    let mu = 2.0 / (sigma * sigma);
    let std = 2.0 / sigma;
    let dvm = dv as i32 - 1;
    let mut p_next = 0.0;
    for j in 0..=dvm {
        let coeff = binomial(dvm as usize, j as usize) * q.powi(j) * (1.0 - q).powi(dvm - j);
        // Sum of the other dv−1 signs is (dv−1−2j); error when the LLR pulls
        // the total below zero.
        p_next += coeff * qfunc((mu + w * f64::from(dvm - 2 * j)) / std);
    }
    Ok((q, w, p_next))
}

fn bmp_weight(q: f64) -> f64 {
    if q <= 0.0 {
        W_MAX
    } else {
        (((1.0 - q) / q).ln()).clamp(0.0, W_MAX)
    }
}

fn capped_log_ratio(num: f64, den: f64) -> f64 {
    if num <= 0.0 {
        return 0.0;
    }
    if den <= 0.0 {
        return W_MAX;
    }
    (num / den).ln().clamp(0.0, W_MAX)
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

// ---------------------------------------------------------------------------
// Finite message distributions (conditioned on transmitted +1)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
struct Ternary {
    plus: f64,
    zero: f64,
    minus: f64,
}

impl Ternary {
    fn error_measure(&self) -> f64 {
        self.minus + 0.5 * self.zero
    }

    fn mutual_information(&self) -> f64 {
        let cond = entropy(&[self.plus, self.zero, self.minus]);
        let half = (self.plus + self.minus) / 2.0;
        let marg = entropy(&[half, self.zero, half]);
        (marg - cond).max(0.0)
    }
}

#[derive(Debug, Clone, Copy)]
struct Quaternary {
    p2: f64,
    p1: f64,
    m1: f64,
    m2: f64,
}

impl Quaternary {
    fn error_measure(&self) -> f64 {
        self.m1 + self.m2
    }

    fn mutual_information(&self) -> f64 {
        let cond = entropy(&[self.p2, self.p1, self.m1, self.m2]);
        let s2 = (self.p2 + self.m2) / 2.0;
        let s1 = (self.p1 + self.m1) / 2.0;
        let marg = entropy(&[s2, s1, s1, s2]);
        (marg - cond).max(0.0)
    }
}

fn entropy(masses: &[f64]) -> f64 {
    masses
        .iter()
        .map(|&m| if m > 0.0 { -m * m.log2() } else { 0.0 })
        .sum()
}

/// P(L > x) for the channel LLR conditioned on +1: L ~ N(μ, σ_L²).
#[derive(Debug, Clone, Copy)]
struct LlrLaw {
    mu: f64,
    std: f64,
}

impl LlrLaw {
    fn new(esno_db: f64) -> Self {
        let sigma = ChannelParams::new(esno_db, 0).sigma();
        Self {
            mu: 2.0 / (sigma * sigma),
            std: 2.0 / sigma,
        }
    }

    #[inline]
    fn tail_above(&self, x: f64) -> f64 {
        qfunc((x - self.mu) / self.std)
    }
}

fn ternary_channel(law: LlrLaw, t: f64) -> Ternary {
    let plus = law.tail_above(t);
    let minus = 1.0 - law.tail_above(-t);
    Ternary {
        plus,
        minus,
        zero: (1.0 - plus - minus).max(0.0),
    }
}

fn quaternary_channel(law: LlrLaw, t: f64) -> Quaternary {
    let p2 = law.tail_above(t);
    let pp = law.tail_above(0.0);
    let pm = 1.0 - law.tail_above(-t);
    Quaternary {
        p2,
        p1: (pp - p2).max(0.0),
        m1: (1.0 - pp - pm).max(0.0),
        m2: pm,
    }
}

fn ternary_cn(input: Ternary, dc: u32) -> Ternary {
    let d = dc as i32 - 1;
    let a = input.plus + input.minus;
    let b = input.plus - input.minus;
    let ad = a.powi(d);
    let bd = b.powi(d);
    Ternary {
        plus: (ad + bd) / 2.0,
        minus: (ad - bd) / 2.0,
        zero: (1.0 - ad).max(0.0),
    }
}

fn quaternary_cn(input: Quaternary, dc: u32) -> Quaternary {
    let d = dc as i32 - 1;
    let strong = input.p2 + input.m2;
    let strong_diff = input.p2 - input.m2;
    let bias = input.p2 + input.p1 - input.m1 - input.m2;
    let sd = strong.powi(d);
    let dd = strong_diff.powi(d);
    let bd = bias.powi(d);
    let p2 = (sd + dd) / 2.0;
    let m2 = (sd - dd) / 2.0;
    Quaternary {
        p2,
        m2,
        p1: ((1.0 + bd) / 2.0 - p2).max(0.0),
        m1: ((1.0 - bd) / 2.0 - m2).max(0.0),
    }
}

/// Ternary VN update for fixed weight and threshold.
fn ternary_vn(law: LlrLaw, incoming: Ternary, dv: u32, w: f64, t: f64) -> Ternary {
    let d = dv as usize - 1;
    let mut out = Ternary {
        plus: 0.0,
        zero: 0.0,
        minus: 0.0,
    };
    for a in 0..=d {
        for b in 0..=d - a {
            let z = d - a - b;
            let coeff = multinomial3(d, a, b)
                * incoming.plus.powi(a as i32)
                * incoming.minus.powi(b as i32)
                * incoming.zero.powi(z as i32);
            if coeff == 0.0 {
                continue;
            }
            let off = w * (a as f64 - b as f64);
            let plus = law.tail_above(t - off);
            let minus = 1.0 - law.tail_above(-t - off);
            out.plus += coeff * plus;
            out.minus += coeff * minus;
            out.zero += coeff * (1.0 - plus - minus).max(0.0);
        }
    }
    out
}

/// Quaternary VN update for fixed weights and threshold.
fn quaternary_vn(law: LlrLaw, incoming: Quaternary, dv: u32, w1: f64, w2: f64, t: f64) -> Quaternary {
    let d = dv as usize - 1;
    let mut out = Quaternary {
        p2: 0.0,
        p1: 0.0,
        m1: 0.0,
        m2: 0.0,
    };
    for a2 in 0..=d {
        for a1 in 0..=d - a2 {
            for b1 in 0..=d - a2 - a1 {
                let b2 = d - a2 - a1 - b1;
                let coeff = multinomial4(d, a2, a1, b1)
                    * incoming.p2.powi(a2 as i32)
                    * incoming.p1.powi(a1 as i32)
                    * incoming.m1.powi(b1 as i32)
                    * incoming.m2.powi(b2 as i32);
                if coeff == 0.0 {
                    continue;
                }
                let off = w2 * (a2 as f64 - b2 as f64) + w1 * (a1 as f64 - b1 as f64);
                let p2 = law.tail_above(t - off);
                let pp = law.tail_above(-off);
                let pm = 1.0 - law.tail_above(-t - off);
                out.p2 += coeff * p2;
                out.p1 += coeff * (pp - p2).max(0.0);
                out.m1 += coeff * (1.0 - pp - pm).max(0.0);
                out.m2 += coeff * pm;
            }
        }
    }
    out
}

fn multinomial3(d: usize, a: usize, b: usize) -> f64 {
    binomial(d, a) * binomial(d - a, b)
}

fn multinomial4(d: usize, a: usize, b: usize, c: usize) -> f64 {
    binomial(d, a) * binomial(d - a, b) * binomial(d - a - b, c)
}

/// Threshold grid: 0..=max in `steps` uniform increments.
fn threshold_grid(max: f64, steps: usize) -> impl Iterator<Item = f64> {
    let step = max / steps as f64;
    (0..=steps).map(move |i| i as f64 * step)
}

const T_GRID_STEPS: usize = 160;

// ---------------------------------------------------------------------------
// Trajectory runner
// ---------------------------------------------------------------------------

/// Runs density evolution for `max_iters` iterations and returns the full
/// trajectory (error measures plus the induced weight schedule).
pub fn de_run(
    kind: DecoderKind,
    dv: u32,
    dc: u32,
    esno_db: f64,
    max_iters: usize,
) -> Result<DeTrajectory, DeError> {
    de_core(kind, dv, dc, esno_db, max_iters, None)
}

fn de_core(
    kind: DecoderKind,
    dv: u32,
    dc: u32,
    esno_db: f64,
    max_iters: usize,
    stop_below: Option<f64>,
) -> Result<DeTrajectory, DeError> {
    let law = LlrLaw::new(esno_db);
    let mut traj = DeTrajectory {
        kind,
        dv,
        dc,
        esno_db,
        p: Vec::with_capacity(max_iters + 1),
        q: Vec::with_capacity(max_iters),
        rows: Vec::with_capacity(max_iters),
        initial_threshold: 0.0,
    };
    // Stall detection: below threshold the maps contract onto a fixed point;
    // once progress stops there is nothing more to learn.
    let stalled = |prev: f64, next: f64| (prev - next).abs() < 1e-15;

    match kind {
        DecoderKind::Bmp => {
            let mut p = qfunc(law.mu / law.std);
            traj.p.push(p);
            for _ in 0..max_iters {
                let (q, w, p_next) = de_bmp_step(p, dv, dc, esno_db)?;
                traj.q.push(q);
                traj.rows.push(ScheduleRow {
                    weight: w,
                    strong_weight: w,
                    threshold: 0.0,
                });
                traj.p.push(p_next);
                let done = stop_below.is_some_and(|t| p_next <= t)
                    || (stop_below.is_some() && stalled(p, p_next));
                p = p_next;
                if done {
                    break;
                }
            }
        }
        DecoderKind::Tmp => {
            // Channel quantizer: pick the MI-maximizing initial threshold.
            let t_max0 = law.mu + 3.0 * law.std;
            let (t0, mut dist) = threshold_grid(t_max0, T_GRID_STEPS)
                .map(|t| (t, ternary_channel(law, t)))
                .max_by(|a, b| {
                    a.1.mutual_information()
                        .total_cmp(&b.1.mutual_information())
                })
                .expect("non-empty grid");
            traj.initial_threshold = t0;
            traj.p.push(dist.error_measure());
            for _ in 0..max_iters {
                let cn = ternary_cn(dist, dc);
                traj.q.push(cn.error_measure());
                let w = capped_log_ratio(cn.plus, cn.minus);
                let t_max = law.mu + 3.0 * law.std + w * f64::from(dv - 1);
                let (t, next) = threshold_grid(t_max, T_GRID_STEPS)
                    .map(|t| (t, ternary_vn(law, cn, dv, w, t)))
                    .max_by(|a, b| {
                        a.1.mutual_information()
                            .total_cmp(&b.1.mutual_information())
                    })
                    .expect("non-empty grid");
                traj.rows.push(ScheduleRow {
                    weight: w,
                    strong_weight: w,
                    threshold: t,
                });
                traj.p.push(next.error_measure());
                let done = stop_below.is_some_and(|tp| next.error_measure() <= tp)
                    || (stop_below.is_some() && stalled(dist.error_measure(), next.error_measure()));
                dist = next;
                if done {
                    break;
                }
            }
        }
        DecoderKind::Qmp => {
            let t_max0 = law.mu + 3.0 * law.std;
            let (t0, mut dist) = threshold_grid(t_max0, T_GRID_STEPS)
                .map(|t| (t, quaternary_channel(law, t)))
                .max_by(|a, b| {
                    a.1.mutual_information()
                        .total_cmp(&b.1.mutual_information())
                })
                .expect("non-empty grid");
            traj.initial_threshold = t0;
            traj.p.push(dist.error_measure());
            for _ in 0..max_iters {
                let cn = quaternary_cn(dist, dc);
                traj.q.push(cn.error_measure());
                let w1 = capped_log_ratio(cn.p1, cn.m1);
                let w2 = capped_log_ratio(cn.p2, cn.m2);
                let t_max = law.mu + 3.0 * law.std + w2 * f64::from(dv - 1);
                let (t, next) = threshold_grid(t_max, T_GRID_STEPS)
                    .map(|t| (t, quaternary_vn(law, cn, dv, w1, w2, t)))
                    .max_by(|a, b| {
                        a.1.mutual_information()
                            .total_cmp(&b.1.mutual_information())
                    })
                    .expect("non-empty grid");
                traj.rows.push(ScheduleRow {
                    weight: w1,
                    strong_weight: w2,
                    threshold: t,
                });
                traj.p.push(next.error_measure());
                let done = stop_below.is_some_and(|tp| next.error_measure() <= tp)
                    || (stop_below.is_some() && stalled(dist.error_measure(), next.error_measure()));
                dist = next;
                if done {
                    break;
                }
            }
        }
        DecoderKind::Bp => return Err(DeError::UnsupportedKind),
    }
    Ok(traj)
}

/// Iterative decoding threshold by bisection: the smallest Es/N0 (within
/// `tol_db`) at which density evolution reaches `target_p` within
/// [`THRESHOLD_MAX_ITERS`] iterations, searched over [`THRESHOLD_BRACKET`].
pub fn de_threshold(
    kind: DecoderKind,
    dv: u32,
    dc: u32,
    target_p: f64,
    tol_db: f64,
) -> Result<f64, DeError> {
    de_threshold_with(
        kind,
        dv,
        dc,
        target_p,
        tol_db,
        THRESHOLD_BRACKET,
        THRESHOLD_MAX_ITERS,
    )
}

/// [`de_threshold`] with an explicit bracket and iteration budget.
pub fn de_threshold_with(
    kind: DecoderKind,
    dv: u32,
    dc: u32,
    target_p: f64,
    tol_db: f64,
    bracket: (f64, f64),
    max_iters: usize,
) -> Result<f64, DeError> {
    assert!(target_p > 0.0 && tol_db > 0.0);
    if kind == DecoderKind::Bp {
        return Err(DeError::UnsupportedKind);
    }
    let converges = |esno: f64| -> Result<bool, DeError> {
        let traj = de_core(kind, dv, dc, esno, max_iters, Some(target_p))?;
        Ok(traj.reaches(target_p))
    };
    let (mut lo, mut hi) = bracket;
    if converges(lo)? || !converges(hi)? {
        return Err(DeError::BracketFailure {
            lo,
            hi,
            target: target_p,
        });
    }
    while hi - lo > tol_db {
        let mid = 0.5 * (lo + hi);
        if converges(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Extracts the weight schedule from a trajectory computed at `esno_db`.
pub fn export_weight_schedule(trajectory: &DeTrajectory, esno_db: f64) -> WeightSchedule {
    assert!(
        (trajectory.esno_db - esno_db).abs() < 1e-9,
        "trajectory was computed at {} dB, not {} dB",
        trajectory.esno_db,
        esno_db
    );
    WeightSchedule {
        rows: trajectory.rows.clone(),
        initial_threshold: trajectory.initial_threshold,
    }
}

/// Convenience: DE-derived schedule for a decoder at an operating point,
/// sized for `max_iters` decoder iterations.
pub fn schedule_for(
    kind: DecoderKind,
    dv: u32,
    dc: u32,
    esno_db: f64,
    max_iters: usize,
) -> Result<WeightSchedule, DeError> {
    let traj = de_run(kind, dv, dc, esno_db, max_iters)?;
    Ok(export_weight_schedule(&traj, esno_db))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bmp_step_fixed_points() {
        let (q, w, p_next) = de_bmp_step(0.0, 4, 24, 3.0).unwrap();
        assert_eq!(q, 0.0);
        assert_eq!(w, W_MAX);
        assert!(p_next < 1e-12);

        let (q, w, p_next) = de_bmp_step(0.5, 4, 24, 3.0).unwrap();
        assert!((q - 0.5).abs() < 1e-15);
        assert!(w.abs() < 1e-12);
        let p0 = ChannelParams::new(3.0, 0).crossover();
        assert!((p_next - p0).abs() < 1e-12, "uninformative messages leave the channel");
    }

    #[test]
    fn bmp_step_worked_example() {
        // dc = 24, p = 0.01: q = (1 − 0.98²³)/2 ≈ 0.18585, w ≈ 1.477.
        let (q, w, _) = de_bmp_step(0.01, 4, 24, 3.0).unwrap();
        assert!((q - 0.18585).abs() < 1e-4, "q = {q}");
        assert!((w - 1.477).abs() < 1e-3, "w = {w}");
    }

    #[test]
    fn bmp_step_rejects_bad_p() {
        assert!(de_bmp_step(0.6, 4, 24, 3.0).is_err());
        assert!(de_bmp_step(-0.1, 4, 24, 3.0).is_err());
    }

    #[test]
    fn trajectories_converge_or_stall() {
        // Far above threshold: monotone decrease to ~0.
        let traj = de_run(DecoderKind::Bmp, 4, 24, 5.0, 60).unwrap();
        assert!(traj.p.windows(2).all(|w| w[1] <= w[0] + 1e-15));
        assert!(*traj.p.last().unwrap() < 1e-10);
        // Far below: bounded away from zero.
        let traj = de_run(DecoderKind::Bmp, 4, 24, 1.0, 200).unwrap();
        assert!(traj.p.iter().all(|&p| p > 1e-3));
    }

    #[test]
    fn quantized_trajectories_converge_above_threshold() {
        for kind in [DecoderKind::Tmp, DecoderKind::Qmp] {
            let traj = de_run(kind, 4, 24, 4.5, 80).unwrap();
            assert!(
                traj.p.last().unwrap() < &1e-8,
                "{kind} stuck: final p = {}",
                traj.p.last().unwrap()
            );
            assert!(traj.rows.iter().all(|r| r.weight >= 0.0 && r.weight <= W_MAX));
        }
    }

    #[test]
    fn weight_schedule_properties() {
        let traj = de_run(DecoderKind::Bmp, 4, 24, 4.0, 50).unwrap();
        let sched = export_weight_schedule(&traj, 4.0);
        assert_eq!(sched.len(), 50);
        // Once p decreases monotonically the weights are non-decreasing and
        // reach the cap.
        assert!(sched
            .rows
            .windows(2)
            .all(|w| w[1].weight >= w[0].weight - 1e-12));
        assert_eq!(sched.rows.last().unwrap().weight, W_MAX);
    }

    #[test]
    fn stuck_channel_gives_zero_weights() {
        // At p = 1/2 the step keeps w = 0; synthesize the degenerate
        // trajectory via a huge-noise channel where p0 ≈ 1/2.
        let traj = de_run(DecoderKind::Bmp, 4, 24, -40.0, 5).unwrap();
        assert!(traj.rows.iter().all(|r| r.weight < 1e-3));
    }

    #[test]
    fn bmp_threshold_between_sd_and_hd_limits() {
        let th = de_threshold(DecoderKind::Bmp, 4, 24, 1e-10, 0.01).unwrap();
        assert!(th > 1.5713 && th < 2.8633, "BMP(4,24) threshold {th}");
        // Determinism.
        let th2 = de_threshold(DecoderKind::Bmp, 4, 24, 1e-10, 0.01).unwrap();
        assert!((th - th2).abs() < 1e-12);
    }

    #[test]
    fn threshold_monotone_in_rate() {
        let lo = de_threshold(DecoderKind::Bmp, 4, 24, 1e-8, 0.02).unwrap();
        let hi = de_threshold(DecoderKind::Bmp, 4, 40, 1e-8, 0.02).unwrap();
        assert!(hi > lo, "higher rate needs more SNR: {hi} vs {lo}");
    }

    #[test]
    fn threshold_rejects_bp() {
        assert_eq!(
            de_threshold(DecoderKind::Bp, 4, 24, 1e-8, 0.01),
            Err(DeError::UnsupportedKind)
        );
    }

    #[test]
    fn quantized_thresholds_improve_on_bmp() {
        let bmp = de_threshold(DecoderKind::Bmp, 4, 24, 1e-8, 0.02).unwrap();
        let tmp = de_threshold(DecoderKind::Tmp, 4, 24, 1e-8, 0.02).unwrap();
        let qmp = de_threshold(DecoderKind::Qmp, 4, 24, 1e-8, 0.02).unwrap();
        assert!(tmp < bmp, "TMP {tmp} vs BMP {bmp}");
        assert!(qmp < tmp + 0.05, "QMP {qmp} vs TMP {tmp}");
    }

    #[test]
    fn monotone_in_snr() {
        let mut last = f64::INFINITY;
        for i in 0..10 {
            let esno = 2.0 + 0.25 * i as f64;
            let traj = de_run(DecoderKind::Bmp, 4, 24, esno, 120).unwrap();
            let p_final = *traj.p.last().unwrap();
            assert!(p_final <= last + 1e-12, "final p not monotone at {esno} dB");
            last = p_final;
        }
    }

    /// Closed-form VN update vs a direct Monte Carlo estimate.
    #[test]
    fn bmp_step_matches_monte_carlo() {
        use rand::{Rng, SeedableRng};
        use rand_distr::{Distribution, Normal};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        let samples = 1_000_000usize;
        for trial in 0..10 {
            let p = 0.01 + 0.04 * f64::from(trial);
            let esno_db = 2.0 + 0.2 * f64::from(trial);
            let (q, w, p_next) = de_bmp_step(p, 4, 24, esno_db).unwrap();
            let sigma = ChannelParams::new(esno_db, 0).sigma();
            let normal = Normal::new(2.0 / (sigma * sigma), 2.0 / sigma).unwrap();
            let mut errs = 0usize;
            for _ in 0..samples {
                let l: f64 = normal.sample(&mut rng);
                let mut s = l;
                for _ in 0..3 {
                    let wrong = rng.gen_bool(q);
                    s += if wrong { -w } else { w };
                }
                if s <= 0.0 {
                    errs += 1;
                }
            }
            let est = errs as f64 / samples as f64;
            let se = (p_next * (1.0 - p_next) / samples as f64).sqrt().max(1e-9);
            assert!(
                (est - p_next).abs() <= 3.0 * se + 1e-6,
                "trial {trial}: mc {est} vs closed form {p_next} (se {se})"
            );
        }
    }
}
