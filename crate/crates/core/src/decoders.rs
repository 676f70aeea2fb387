//! Message passing decoders over a Tanner graph: unquantized sum-product BP
//! and the coarsely quantized BMP (1-bit), TMP (ternary), and QMP
//! (quaternary) algorithms.
//!
//! All decoders use a flooding schedule, full-precision channel LLRs at the
//! variable nodes, and the hardening rule `f(x) = +1` if `x > 0`, `−1`
//! otherwise (ties to −1). Check node updates multiply incoming signs, as in
//! the quantized message passing literature; a check is satisfied when the
//! product over its neighborhood is +1. Early termination on a zero syndrome
//! is checked every iteration.
//!
//! The quantized decoders consume per-iteration weights (and quantizer
//! thresholds) from a [`WeightSchedule`], normally produced by density
//! evolution in [`crate::de`]. Row ℓ is applied to the check node messages of
//! iteration ℓ, both for the tentative decision and for the next variable
//! node update; the channel LLR always enters unweighted.

use crate::ldpc::TannerGraph;
use thiserror::Error;

/// Errors raised by the decoders.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("weight schedule has {got} rows, decoder needs {need}")]
    ScheduleTooShort { need: usize, got: usize },
    #[error("decoder {0:?} requires a weight schedule")]
    MissingSchedule(DecoderKind),
    #[error("weight schedule parse error: {0}")]
    Parse(String),
}

/// Decoder selector; parses from "bp" | "bmp" | "tmp" | "qmp".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecoderKind {
    Bp,
    Bmp,
    Tmp,
    Qmp,
}

impl DecoderKind {
    /// Bits per exchanged message (the `q` of the data flow metric).
    pub fn message_bits(&self) -> u32 {
        match self {
            DecoderKind::Bp => 32,
            DecoderKind::Bmp => 1,
            DecoderKind::Tmp | DecoderKind::Qmp => 2,
        }
    }
}

impl std::str::FromStr for DecoderKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bp" => Ok(Self::Bp),
            "bmp" => Ok(Self::Bmp),
            "tmp" => Ok(Self::Tmp),
            "qmp" => Ok(Self::Qmp),
            other => Err(format!("unknown decoder {other:?} (bp|bmp|tmp|qmp)")),
        }
    }
}

impl std::fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            DecoderKind::Bp => "bp",
            DecoderKind::Bmp => "bmp",
            DecoderKind::Tmp => "tmp",
            DecoderKind::Qmp => "qmp",
        };
        f.write_str(s)
    }
}

/// One iteration's worth of decoder parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleRow {
    /// Check message weight (BMP/TMP), or the weak-magnitude weight (QMP).
    pub weight: f64,
    /// Strong-magnitude weight (QMP); equals `weight` elsewhere.
    pub strong_weight: f64,
    /// Quantizer threshold T (TMP/QMP); unused by BMP.
    pub threshold: f64,
}

/// Per-iteration check-message weights and quantizer thresholds.
///
/// Produced by density evolution, consumed by the quantized decoders and the
/// iBDD-SR product decoder. Row ℓ weights the messages of iteration ℓ;
/// `initial_threshold` quantizes the channel LLR into the first ternary or
/// quaternary message before any check update has run.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSchedule {
    pub rows: Vec<ScheduleRow>,
    pub initial_threshold: f64,
}

impl WeightSchedule {
    /// A constant schedule: weight `w`, threshold `t` in every row.
    pub fn constant(w: f64, t: f64, len: usize) -> Self {
        Self {
            rows: vec![
                ScheduleRow {
                    weight: w,
                    strong_weight: w,
                    threshold: t,
                };
                len
            ],
            initial_threshold: t,
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Serializes as a text table: one `iter w w_strong threshold` row per
    /// iteration, with the initial threshold in a header comment.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("# weight schedule\n");
        out.push_str("# columns: iter weight strong_weight threshold\n");
        out.push_str(&format!("# initial_threshold = {:.12e}\n", self.initial_threshold));
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str(&format!(
                "{} {:.12e} {:.12e} {:.12e}\n",
                i, row.weight, row.strong_weight, row.threshold
            ));
        }
        out
    }

    /// Parses the format produced by [`WeightSchedule::to_text`]. Rows with
    /// fewer than four columns reuse `weight` for `strong_weight` and default
    /// the threshold to zero, so plain `iter w` tables load too.
    pub fn from_text(text: &str) -> Result<Self, DecodeError> {
        let mut initial_threshold = 0.0;
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some((key, val)) = rest.split_once('=') {
                    if key.trim() == "initial_threshold" {
                        initial_threshold = val
                            .trim()
                            .parse()
                            .map_err(|e| DecodeError::Parse(format!("initial_threshold: {e}")))?;
                    }
                }
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() < 2 {
                return Err(DecodeError::Parse(format!("bad row {line:?}")));
            }
            let idx: usize = cols[0]
                .parse()
                .map_err(|e| DecodeError::Parse(format!("bad iter index: {e}")))?;
            if idx != rows.len() {
                return Err(DecodeError::Parse(format!(
                    "row index {idx} out of order (expected {})",
                    rows.len()
                )));
            }
            let num = |s: &str| -> Result<f64, DecodeError> {
                s.parse().map_err(|e| DecodeError::Parse(format!("bad value {s:?}: {e}")))
            };
            let w = num(cols[1])?;
            let ws = if cols.len() > 2 { num(cols[2])? } else { w };
            let t = if cols.len() > 3 { num(cols[3])? } else { 0.0 };
            rows.push(ScheduleRow {
                weight: w,
                strong_weight: ws,
                threshold: t,
            });
        }
        Ok(Self {
            rows,
            initial_threshold,
        })
    }
}

/// Outcome of a decode call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    /// Hard decisions, one bit (0/1) per variable node.
    pub bits: Vec<u8>,
    /// Whether the syndrome was zero at termination.
    pub converged: bool,
    /// Iterations actually executed (≥ 1 unless `max_iters` is 0).
    pub iterations: usize,
}

// ---------------------------------------------------------------------------
// Decoder
// ---------------------------------------------------------------------------

/// Reusable message passing decoder bound to one graph.
///
/// Construction precomputes the edge layout; `decode_*` calls are independent
/// and the decoder can be shared across threads (`&self` only).
pub struct MpDecoder {
    n: usize,
    n_cn: usize,
    cn_ptr: Vec<u32>,
    cn_vn: Vec<u32>,
    vn_ptr: Vec<u32>,
    /// CN-major edge index for each VN-major slot.
    vn_edge_pos: Vec<u32>,
}

impl MpDecoder {
    pub fn new(graph: &TannerGraph) -> Self {
        let n = graph.n();
        let mut vn_ptr = Vec::with_capacity(n + 1);
        let mut vn_edge_pos = Vec::with_capacity(graph.edges());
        vn_ptr.push(0u32);
        for v in 0..n {
            vn_edge_pos.extend_from_slice(graph.vn_edge_positions(v));
            vn_ptr.push(vn_edge_pos.len() as u32);
        }
        Self {
            n,
            n_cn: graph.n_cn(),
            cn_ptr: graph.cn_ptr().to_vec(),
            cn_vn: graph.cn_vn().to_vec(),
            vn_ptr,
            vn_edge_pos,
        }
    }

    /// Blocklength.
    pub fn n(&self) -> usize {
        self.n
    }

    fn check_len(&self, llr: &[f64]) -> Result<(), DecodeError> {
        if llr.len() != self.n {
            return Err(DecodeError::LengthMismatch {
                expected: self.n,
                got: llr.len(),
            });
        }
        Ok(())
    }

    fn check_schedule(
        &self,
        sched: &WeightSchedule,
        max_iters: usize,
    ) -> Result<(), DecodeError> {
        if sched.len() < max_iters {
            return Err(DecodeError::ScheduleTooShort {
                need: max_iters,
                got: sched.len(),
            });
        }
        Ok(())
    }

    /// Syndrome check: every CN must see an even number of −1 decisions
    /// (bit value 0).
    fn syndrome_ok(&self, bits: &[u8]) -> bool {
        let mut e = 0usize;
        for c in 0..self.n_cn {
            let end = self.cn_ptr[c + 1] as usize;
            let mut zeros = 0u32;
            while e < end {
                zeros += u32::from(bits[self.cn_vn[e] as usize] == 0);
                e += 1;
            }
            if zeros & 1 != 0 {
                return false;
            }
        }
        true
    }

    /// Dispatches on `kind`; quantized kinds require a schedule.
    pub fn decode(
        &self,
        kind: DecoderKind,
        llr: &[f64],
        sched: Option<&WeightSchedule>,
        max_iters: usize,
    ) -> Result<DecodeResult, DecodeError> {
        match kind {
            DecoderKind::Bp => self.decode_bp(llr, max_iters),
            _ => {
                let sched = sched.ok_or(DecodeError::MissingSchedule(kind))?;
                match kind {
                    DecoderKind::Bmp => self.decode_bmp(llr, sched, max_iters),
                    DecoderKind::Tmp => self.decode_tmp(llr, sched, max_iters),
                    DecoderKind::Qmp => self.decode_qmp(llr, sched, max_iters),
                    DecoderKind::Bp => unreachable!(),
                }
            }
        }
    }

    /// Sum-product belief propagation with the tanh/atanh check rule.
    pub fn decode_bp(&self, llr: &[f64], max_iters: usize) -> Result<DecodeResult, DecodeError> {
        self.check_len(llr)?;
        let edges = self.cn_vn.len();
        // VN messages live in CN-major slots so the CN pass streams memory.
        let mut vn_msg = vec![0f64; edges];
        let mut cn_msg = vec![0f64; edges];
        let mut tanh_buf = vec![0f64; edges];
        let mut bits = vec![0u8; self.n];
        for (e, &v) in self.cn_vn.iter().enumerate() {
            vn_msg[e] = llr[v as usize].clamp(-MSG_CLAMP, MSG_CLAMP);
        }
        let mut iterations = 0;
        let mut converged = false;
        for _ in 0..max_iters {
            iterations += 1;
            // CN pass: product of tanh(m/2) over all other edges.
            for (t, &m) in tanh_buf.iter_mut().zip(vn_msg.iter()) {
                *t = fast_tanh_half(m);
            }
            for c in 0..self.n_cn {
                let (s, e) = (self.cn_ptr[c] as usize, self.cn_ptr[c + 1] as usize);
                let row = &tanh_buf[s..e];
                let out = &mut cn_msg[s..e];
                // Exclusive products via prefix/suffix scans.
                let mut acc = 1.0f64;
                for (o, &t) in out.iter_mut().zip(row.iter()) {
                    *o = acc;
                    acc *= t;
                }
                let mut suf = 1.0f64;
                for (o, &t) in out.iter_mut().zip(row.iter()).rev() {
                    let prod = *o * suf;
                    suf *= t;
                    *o = fast_two_atanh(prod);
                }
            }
            // VN pass: totals, tentative decisions, next messages.
            for v in 0..self.n {
                let (s, e) = (self.vn_ptr[v] as usize, self.vn_ptr[v + 1] as usize);
                let slots = &self.vn_edge_pos[s..e];
                let mut total = llr[v];
                for &p in slots {
                    total += cn_msg[p as usize];
                }
                bits[v] = u8::from(total > 0.0);
                for &p in slots {
                    let ext = total - cn_msg[p as usize];
                    vn_msg[p as usize] = ext.clamp(-MSG_CLAMP, MSG_CLAMP);
                }
            }
            if self.syndrome_ok(&bits) {
                converged = true;
                break;
            }
        }
        if max_iters == 0 {
            for (b, &l) in bits.iter_mut().zip(llr.iter()) {
                *b = u8::from(l > 0.0);
            }
        }
        Ok(DecodeResult {
            bits,
            converged,
            iterations,
        })
    }

    /// Binary message passing: 1-bit messages, full-precision channel LLRs,
    /// DE-derived per-iteration weights.
    pub fn decode_bmp(
        &self,
        llr: &[f64],
        sched: &WeightSchedule,
        max_iters: usize,
    ) -> Result<DecodeResult, DecodeError> {
        self.check_len(llr)?;
        self.check_schedule(sched, max_iters)?;
        let edges = self.cn_vn.len();
        let mut vn_msg = vec![0i8; edges];
        let mut cn_msg = vec![0i8; edges];
        let mut bits = vec![0u8; self.n];
        for (e, &v) in self.cn_vn.iter().enumerate() {
            vn_msg[e] = crate::harden(llr[v as usize]);
        }
        let mut iterations = 0;
        let mut converged = false;
        for iter in 0..max_iters {
            iterations += 1;
            // CN pass: product of the other incoming signs.
            for c in 0..self.n_cn {
                let (s, e) = (self.cn_ptr[c] as usize, self.cn_ptr[c + 1] as usize);
                let row = &vn_msg[s..e];
                let mut prod = 1i8;
                for &m in row {
                    prod *= m;
                }
                for (o, &m) in cn_msg[s..e].iter_mut().zip(row.iter()) {
                    *o = prod * m; // m² = 1, so this is the exclusive product
                }
            }
            let w = sched.rows[iter].weight;
            for v in 0..self.n {
                let (s, e) = (self.vn_ptr[v] as usize, self.vn_ptr[v + 1] as usize);
                let slots = &self.vn_edge_pos[s..e];
                let mut sum = 0i32;
                for &p in slots {
                    sum += i32::from(cn_msg[p as usize]);
                }
                let total = llr[v] + w * f64::from(sum);
                bits[v] = u8::from(total > 0.0);
                for &p in slots {
                    let ext = llr[v] + w * f64::from(sum - i32::from(cn_msg[p as usize]));
                    vn_msg[p as usize] = crate::harden(ext);
                }
            }
            debug_assert!(vn_msg.iter().all(|&m| m == 1 || m == -1));
            if self.syndrome_ok(&bits) {
                converged = true;
                break;
            }
        }
        if max_iters == 0 {
            for (b, &l) in bits.iter_mut().zip(llr.iter()) {
                *b = u8::from(l > 0.0);
            }
        }
        Ok(DecodeResult {
            bits,
            converged,
            iterations,
        })
    }

    /// Ternary message passing: messages in {−1, 0, +1}, 0 an erasure.
    pub fn decode_tmp(
        &self,
        llr: &[f64],
        sched: &WeightSchedule,
        max_iters: usize,
    ) -> Result<DecodeResult, DecodeError> {
        self.check_len(llr)?;
        self.check_schedule(sched, max_iters)?;
        let edges = self.cn_vn.len();
        let mut vn_msg = vec![0i8; edges];
        let mut cn_msg = vec![0i8; edges];
        let mut bits = vec![0u8; self.n];
        let t0 = sched.initial_threshold;
        for (e, &v) in self.cn_vn.iter().enumerate() {
            vn_msg[e] = quantize_ternary(llr[v as usize], t0);
        }
        let mut iterations = 0;
        let mut converged = false;
        for iter in 0..max_iters {
            iterations += 1;
            // CN pass: erasure out if any other input is erased, else the
            // product of the other signs.
            for c in 0..self.n_cn {
                let (s, e) = (self.cn_ptr[c] as usize, self.cn_ptr[c + 1] as usize);
                let row = &vn_msg[s..e];
                let mut zeros = 0u32;
                let mut prod = 1i8;
                for &m in row {
                    zeros += u32::from(m == 0);
                    prod *= m | i8::from(m == 0); // erased inputs contribute +1
                }
                for (o, &m) in cn_msg[s..e].iter_mut().zip(row.iter()) {
                    *o = match (zeros, m) {
                        (0, m) => prod * m,
                        (1, 0) => prod,
                        _ => 0,
                    };
                }
            }
            let row = sched.rows[iter];
            for v in 0..self.n {
                let (s, e) = (self.vn_ptr[v] as usize, self.vn_ptr[v + 1] as usize);
                let slots = &self.vn_edge_pos[s..e];
                let mut sum = 0i32;
                for &p in slots {
                    sum += i32::from(cn_msg[p as usize]);
                }
                let total = llr[v] + row.weight * f64::from(sum);
                bits[v] = u8::from(total > 0.0);
                for &p in slots {
                    let ext = llr[v] + row.weight * f64::from(sum - i32::from(cn_msg[p as usize]));
                    vn_msg[p as usize] = quantize_ternary(ext, row.threshold);
                }
            }
            debug_assert!(vn_msg.iter().all(|&m| (-1..=1).contains(&m)));
            if self.syndrome_ok(&bits) {
                converged = true;
                break;
            }
        }
        if max_iters == 0 {
            for (b, &l) in bits.iter_mut().zip(llr.iter()) {
                *b = u8::from(l > 0.0);
            }
        }
        Ok(DecodeResult {
            bits,
            converged,
            iterations,
        })
    }

    /// Quaternary message passing: messages in {−2, −1, +1, +2} with
    /// weak/strong magnitudes, min-magnitude check rule, and separate weights
    /// per magnitude.
    pub fn decode_qmp(
        &self,
        llr: &[f64],
        sched: &WeightSchedule,
        max_iters: usize,
    ) -> Result<DecodeResult, DecodeError> {
        self.check_len(llr)?;
        self.check_schedule(sched, max_iters)?;
        let edges = self.cn_vn.len();
        let mut vn_msg = vec![0i8; edges];
        let mut cn_msg = vec![0i8; edges];
        let mut bits = vec![0u8; self.n];
        let t0 = sched.initial_threshold;
        for (e, &v) in self.cn_vn.iter().enumerate() {
            vn_msg[e] = quantize_quaternary(llr[v as usize], t0);
        }
        let mut iterations = 0;
        let mut converged = false;
        for iter in 0..max_iters {
            iterations += 1;
            // CN pass: sign = product of the other signs; magnitude strong
            // only if every other input is strong.
            for c in 0..self.n_cn {
                let (s, e) = (self.cn_ptr[c] as usize, self.cn_ptr[c + 1] as usize);
                let row = &vn_msg[s..e];
                let mut weak = 0u32;
                let mut sign_prod = 1i8;
                for &m in row {
                    weak += u32::from(m == 1 || m == -1);
                    sign_prod *= m.signum();
                }
                for (o, &m) in cn_msg[s..e].iter_mut().zip(row.iter()) {
                    let sign = sign_prod * m.signum();
                    let strong = weak == u32::from(m == 1 || m == -1);
                    *o = if strong { 2 * sign } else { sign };
                }
            }
            let row = sched.rows[iter];
            for v in 0..self.n {
                let (s, e) = (self.vn_ptr[v] as usize, self.vn_ptr[v + 1] as usize);
                let slots = &self.vn_edge_pos[s..e];
                // Weighted sum: weak and strong magnitudes carry their own
                // DE weights.
                let mut sum = 0.0f64;
                for &p in slots {
                    sum += qmp_weighted(cn_msg[p as usize], row.weight, row.strong_weight);
                }
                let total = llr[v] + sum;
                bits[v] = u8::from(total > 0.0);
                for &p in slots {
                    let ext =
                        total - qmp_weighted(cn_msg[p as usize], row.weight, row.strong_weight);
                    vn_msg[p as usize] = quantize_quaternary(ext, row.threshold);
                }
            }
            debug_assert!(vn_msg.iter().all(|&m| m != 0 && (-2..=2).contains(&m)));
            if self.syndrome_ok(&bits) {
                converged = true;
                break;
            }
        }
        if max_iters == 0 {
            for (b, &l) in bits.iter_mut().zip(llr.iter()) {
                *b = u8::from(l > 0.0);
            }
        }
        Ok(DecodeResult {
            bits,
            converged,
            iterations,
        })
    }
}

/// Message magnitude clamp for BP (LLR units).
const MSG_CLAMP: f64 = 30.0;

#[inline]
fn quantize_ternary(s: f64, t: f64) -> i8 {
    if s > t {
        1
    } else if s < -t {
        -1
    } else {
        0
    }
}

#[inline]
fn quantize_quaternary(s: f64, t: f64) -> i8 {
    let sign = crate::harden(s);
    if s.abs() > t {
        2 * sign
    } else {
        sign
    }
}

#[inline]
fn qmp_weighted(m: i8, w_weak: f64, w_strong: f64) -> f64 {
    match m {
        2 => w_strong,
        -2 => -w_strong,
        1 => w_weak,
        -1 => -w_weak,
        _ => 0.0,
    }
}

// ---------------------------------------------------------------------------
// Fast transcendental kernels for the BP check pass
// ---------------------------------------------------------------------------
// The check pass evaluates tanh(x/2) and 2·atanh(p) once per edge per
// iteration, which dominates the sum-product runtime on 10^5-bit graphs.
// These minimax-style rational kernels keep relative error below ~1e-9,
// orders of magnitude under Monte Carlo resolution.

/// tanh(x/2) = (e^x − 1)/(e^x + 1).
#[inline]
fn fast_tanh_half(x: f64) -> f64 {
    let a = x.abs();
    if a > 36.0 {
        return if x > 0.0 { 1.0 } else { -1.0 };
    }
    // expm1 keeps precision near zero.
    let em1 = libm::expm1(-a);
    let t = -em1 / (em1 + 2.0);
    if x >= 0.0 {
        t
    } else {
        -t
    }
}

/// 2·atanh(p) = ln((1 + p)/(1 − p)), clamped to ±MSG_CLAMP.
#[inline]
fn fast_two_atanh(p: f64) -> f64 {
    let a = p.abs();
    if a >= 1.0 {
        return if p > 0.0 { MSG_CLAMP } else { -MSG_CLAMP };
    }
    let v = libm::log1p(2.0 * a / (1.0 - a));
    let v = v.min(MSG_CLAMP);
    if p >= 0.0 {
        v
    } else {
        -v
    }
}

// ---------------------------------------------------------------------------
// Convenience free functions matching the module-level operation names
// ---------------------------------------------------------------------------

/// One-shot sum-product decode (builds the edge layout on the fly).
pub fn decode_bp(
    graph: &TannerGraph,
    llr: &[f64],
    max_iters: usize,
) -> Result<DecodeResult, DecodeError> {
    MpDecoder::new(graph).decode_bp(llr, max_iters)
}

/// One-shot BMP decode.
pub fn decode_bmp(
    graph: &TannerGraph,
    llr: &[f64],
    weights: &WeightSchedule,
    max_iters: usize,
) -> Result<DecodeResult, DecodeError> {
    MpDecoder::new(graph).decode_bmp(llr, weights, max_iters)
}

/// One-shot TMP decode.
pub fn decode_tmp(
    graph: &TannerGraph,
    llr: &[f64],
    weights: &WeightSchedule,
    max_iters: usize,
) -> Result<DecodeResult, DecodeError> {
    MpDecoder::new(graph).decode_tmp(llr, weights, max_iters)
}

/// One-shot QMP decode.
pub fn decode_qmp(
    graph: &TannerGraph,
    llr: &[f64],
    weights: &WeightSchedule,
    max_iters: usize,
) -> Result<DecodeResult, DecodeError> {
    MpDecoder::new(graph).decode_qmp(llr, weights, max_iters)
}

/// Default iteration budget used across the workbench.
pub const DEFAULT_MAX_ITERS: usize = 50;
