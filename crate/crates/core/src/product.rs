//! Product codes and staircase codes over BCH component codes, decoded with
//! iBDD (hard message passing) or iBDD-SR (scaled reliability).
//!
//! iBDD alternates bounded distance decoding of rows and columns, writing
//! corrected codewords back and leaving failed words untouched. iBDD-SR keeps
//! the same binary message exchange between component decoders but forms each
//! outbound hard decision as `ψ = f(w·μ̄ + L)`, where `μ̄ ∈ {−1, 0, +1}` is
//! the ternary BDD output (0 on decoding failure, which makes the whole word
//! fall back to the channel decision) and `L` is the channel reliability.
//!
//! Reliabilities are carried in the normalized scale of the channel output
//! `y` (the true LLR divided by `2/σ²`), so typical magnitudes are near 1 and
//! the scaling weights searched by [`optimize_sr_weights`] live on a grid of
//! order one. Hardening is `f(x) = +1` if `x > 0`, `−1` otherwise.

use crate::bch::{
    bch_encode, bdd_decode_in_place, syndromes_are_zero, BchError, BchSpec, BddScratch, BddStatus,
};
use crate::decoders::WeightSchedule;
use crate::gf::GfTable;
use crate::{bit_to_sign, harden, sign_to_bit};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::VecDeque;
use thiserror::Error;

/// Errors raised by the product/staircase codecs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProductError {
    #[error("shape mismatch: expected {expected} entries, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("iBDD-SR requires channel reliabilities")]
    MissingReliability,
    #[error("non-positive scaling weight {0}")]
    NonPositiveWeight(f64),
    #[error("weight schedule has {got} rows, decoder needs {need}")]
    ScheduleTooShort { need: usize, got: usize },
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("bad spec string {0:?}")]
    BadSpecString(String),
    #[error("information stream underflow: {missing} bits short of a full block")]
    StreamUnderflow { missing: usize },
    #[error("window must hold at least 2 blocks, got {0}")]
    WindowTooSmall(usize),
    #[error("empty candidate grid")]
    EmptyGrid,
    #[error(transparent)]
    Bch(#[from] BchError),
}

// ---------------------------------------------------------------------------
// Specs
// ---------------------------------------------------------------------------

/// A square product code: every row and every column of the n×n array is a
/// codeword of the same BCH component code.
#[derive(Debug, Clone)]
pub struct PcSpec {
    component: BchSpec,
    tbl: GfTable,
}

impl PcSpec {
    pub fn new(component: BchSpec, tbl: GfTable) -> Self {
        Self { component, tbl }
    }

    /// Parses `"pc:bch:n,k,t"`.
    pub fn from_spec_str(s: &str) -> Result<Self, ProductError> {
        let body = s
            .strip_prefix("pc:")
            .ok_or_else(|| ProductError::BadSpecString(s.into()))?;
        let (component, tbl) = BchSpec::from_spec_str(body)?;
        Ok(Self::new(component, tbl))
    }

    pub fn component(&self) -> &BchSpec {
        &self.component
    }

    pub fn table(&self) -> &GfTable {
        &self.tbl
    }

    /// Side length of the code array.
    pub fn n(&self) -> usize {
        self.component.n()
    }

    /// Code rate k²/n².
    pub fn rate(&self) -> f64 {
        let r = self.component.k() as f64 / self.component.n() as f64;
        r * r
    }
}

/// A staircase code: every row of `[Bᵢ₋₁ᵀ | Bᵢ]` is a codeword of the (even
/// length) BCH component code.
#[derive(Debug, Clone)]
pub struct StaircaseSpec {
    component: BchSpec,
    tbl: GfTable,
    /// Blocks held for sliding-window decoding.
    pub window: usize,
    /// Full component sweeps per window slide.
    pub sweeps: usize,
}

/// Default sliding window size in blocks.
pub const DEFAULT_WINDOW: usize = 7;
/// Default component sweeps per slide.
pub const DEFAULT_SWEEPS: usize = 2;

impl StaircaseSpec {
    pub fn new(component: BchSpec, tbl: GfTable, window: usize) -> Result<Self, ProductError> {
        if component.n() % 2 != 0 {
            return Err(ProductError::InvalidSpec(format!(
                "staircase component length {} must be even",
                component.n()
            )));
        }
        if component.n() - component.k() >= component.n() / 2 {
            return Err(ProductError::InvalidSpec(format!(
                "component ({}, {}) leaves no room for information bits",
                component.n(),
                component.k()
            )));
        }
        if window < 2 {
            return Err(ProductError::WindowTooSmall(window));
        }
        Ok(Self {
            component,
            tbl,
            window,
            sweeps: DEFAULT_SWEEPS,
        })
    }

    /// Parses `"staircase:bch:n,k,t[:W=w]"`.
    pub fn from_spec_str(s: &str) -> Result<Self, ProductError> {
        let body = s
            .strip_prefix("staircase:")
            .ok_or_else(|| ProductError::BadSpecString(s.into()))?;
        let (code_part, window) = match body.rsplit_once(":W=") {
            Some((code, w)) => (
                code,
                w.parse::<usize>()
                    .map_err(|_| ProductError::BadSpecString(s.into()))?,
            ),
            None => (body, DEFAULT_WINDOW),
        };
        let (component, tbl) = BchSpec::from_spec_str(code_part)?;
        Self::new(component, tbl, window)
    }

    pub fn component(&self) -> &BchSpec {
        &self.component
    }

    pub fn table(&self) -> &GfTable {
        &self.tbl
    }

    /// Block side a = n/2.
    pub fn block_side(&self) -> usize {
        self.component.n() / 2
    }

    /// Information bits per block: a·(a − (n−k)).
    pub fn info_bits_per_block(&self) -> usize {
        let a = self.block_side();
        a * (a - (self.component.n() - self.component.k()))
    }

    /// Code rate 1 − 2(n−k)/n.
    pub fn rate(&self) -> f64 {
        let n = self.component.n() as f64;
        let k = self.component.k() as f64;
        1.0 - 2.0 * (n - k) / n
    }
}

// ---------------------------------------------------------------------------
// Code array
// ---------------------------------------------------------------------------

/// Two-dimensional decoding state: hard decisions Ψ in {−1, +1} plus the
/// channel reliabilities the soft-aided decoder combines with.
#[derive(Debug, Clone)]
pub struct CodeArray {
    rows: usize,
    cols: usize,
    /// Hard decisions, row-major, −1 ↔ bit 0, +1 ↔ bit 1.
    pub hard: Vec<i8>,
    /// Channel reliabilities (normalized LLR scale), row-major.
    pub rel: Vec<f64>,
    /// Iterations applied by the most recent decoder run.
    pub iteration: usize,
}

impl CodeArray {
    /// Builds the array from raw channel outputs `y` (row-major); hard
    /// decisions are their signs.
    pub fn from_channel(y: &[f64], rows: usize, cols: usize) -> Result<Self, ProductError> {
        if y.len() != rows * cols {
            return Err(ProductError::ShapeMismatch {
                expected: rows * cols,
                got: y.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            hard: y.iter().map(|&v| harden(v)).collect(),
            rel: y.to_vec(),
            iteration: 0,
        })
    }

    /// Builds the array from hard bits only (reliabilities zeroed); enough
    /// for plain iBDD.
    pub fn from_bits(bits: &[u8], rows: usize, cols: usize) -> Result<Self, ProductError> {
        if bits.len() != rows * cols {
            return Err(ProductError::ShapeMismatch {
                expected: rows * cols,
                got: bits.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            hard: bits.iter().map(|&b| bit_to_sign(b)).collect(),
            rel: vec![0.0; bits.len()],
            iteration: 0,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Current hard decisions as bits.
    pub fn bits(&self) -> Vec<u8> {
        self.hard.iter().map(|&s| sign_to_bit(s)).collect()
    }
}

// ---------------------------------------------------------------------------
// Product code encoding
// ---------------------------------------------------------------------------

/// Systematic product encoding: rows then columns. The checks-on-checks
/// corner is consistent either way for a linear systematic component code.
pub fn pc_encode(info: &[u8], spec: &PcSpec) -> Result<Vec<u8>, ProductError> {
    let k = spec.component.k();
    let n = spec.n();
    if info.len() != k * k {
        return Err(ProductError::ShapeMismatch {
            expected: k * k,
            got: info.len(),
        });
    }
    let mut array = vec![0u8; n * n];
    for r in 0..k {
        let cw = bch_encode(&info[r * k..(r + 1) * k], &spec.component)?;
        array[r * n..(r + 1) * n].copy_from_slice(&cw);
    }
    let mut col = vec![0u8; k];
    for c in 0..n {
        for r in 0..k {
            col[r] = array[r * n + c];
        }
        let cw = bch_encode(&col, &spec.component)?;
        for r in k..n {
            array[r * n + c] = cw[r];
        }
    }
    Ok(array)
}

// ---------------------------------------------------------------------------
// iBDD / iBDD-SR
// ---------------------------------------------------------------------------

/// Outcome of an iterative product decode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductDecodeReport {
    /// Final hard decisions as bits, row-major.
    pub bits: Vec<u8>,
    /// All rows and columns are component codewords.
    pub converged: bool,
    /// Full row+column iterations executed.
    pub iterations: usize,
}

struct PcState {
    n: usize,
    bits: Vec<u8>,
    scratch: BddScratch,
    line: Vec<u8>,
}

impl PcState {
    fn new(array: &CodeArray) -> Self {
        Self {
            n: array.rows,
            bits: array.bits(),
            scratch: BddScratch::default(),
            line: vec![0u8; array.cols],
        }
    }

    fn read_col(&mut self, c: usize) {
        for r in 0..self.n {
            self.line[r] = self.bits[r * self.n + c];
        }
    }

    fn write_col(&mut self, c: usize) {
        for r in 0..self.n {
            self.bits[r * self.n + c] = self.line[r];
        }
    }

    /// All rows and columns satisfied?
    fn all_valid(&mut self, spec: &PcSpec) -> bool {
        let n = self.n;
        for r in 0..n {
            self.line.copy_from_slice(&self.bits[r * n..(r + 1) * n]);
            if !syndromes_are_zero(&self.line, &spec.component, &spec.tbl, &mut self.scratch) {
                return false;
            }
        }
        for c in 0..n {
            self.read_col(c);
            if !syndromes_are_zero(&self.line, &spec.component, &spec.tbl, &mut self.scratch) {
                return false;
            }
        }
        true
    }
}

/// Iterative bounded distance decoding: alternate row and column BDD, stop
/// when a full sweep changes nothing or the budget runs out.
pub fn ibdd(array: &CodeArray, spec: &PcSpec, max_iters: usize) -> Result<ProductDecodeReport, ProductError> {
    check_square(array, spec)?;
    let mut st = PcState::new(array);
    let n = st.n;
    let mut iterations = 0;
    for _ in 0..max_iters {
        iterations += 1;
        let mut changed = false;
        for r in 0..n {
            let row = &mut st.bits[r * n..(r + 1) * n];
            if let BddStatus::Corrected { num_flips } =
                bdd_decode_in_place(row, &spec.component, &spec.tbl, &mut st.scratch)?
            {
                changed |= num_flips > 0;
            }
        }
        for c in 0..n {
            st.read_col(c);
            if let BddStatus::Corrected { num_flips } =
                bdd_decode_in_place(&mut st.line, &spec.component, &spec.tbl, &mut st.scratch)?
            {
                if num_flips > 0 {
                    changed = true;
                    st.write_col(c);
                }
            }
        }
        if !changed {
            break;
        }
    }
    let converged = st.all_valid(spec);
    Ok(ProductDecodeReport {
        bits: st.bits,
        converged,
        iterations,
    })
}

/// The iBDD-SR combining rule: harden the scaled ternary BDD output plus the
/// channel reliability.
#[inline]
pub fn sr_combine(weight: f64, mu_bar: i8, rel: f64) -> i8 {
    harden(weight * f64::from(mu_bar) + rel)
}

/// iBDD with scaled reliability. Per half-iteration every row (then every
/// column) is BDD-decoded from the current hard array; the outbound hard
/// decisions `ψ = f(w·μ̄ + L)` replace it. A BDD failure zeroes `μ̄` for the
/// whole word, so the word falls back to the channel decisions.
pub fn ibdd_sr(
    array: &CodeArray,
    spec: &PcSpec,
    weights: &WeightSchedule,
    max_iters: usize,
) -> Result<ProductDecodeReport, ProductError> {
    check_square(array, spec)?;
    if array.rel.iter().all(|&r| r == 0.0) {
        return Err(ProductError::MissingReliability);
    }
    if weights.len() < max_iters {
        return Err(ProductError::ScheduleTooShort {
            need: max_iters,
            got: weights.len(),
        });
    }
    let mut st = PcState::new(array);
    let n = st.n;
    let mut mu_line = vec![0u8; n];
    let mut iterations = 0;
    let mut converged = false;
    let mut prev = st.bits.clone();
    for iter in 0..max_iters {
        iterations += 1;
        let w = weights.rows[iter].weight;
        if w <= 0.0 {
            return Err(ProductError::NonPositiveWeight(w));
        }
        for r in 0..n {
            mu_line.copy_from_slice(&st.bits[r * n..(r + 1) * n]);
            let ok = matches!(
                bdd_decode_in_place(&mut mu_line, &spec.component, &spec.tbl, &mut st.scratch)?,
                BddStatus::Corrected { .. }
            );
            let row = &mut st.bits[r * n..(r + 1) * n];
            for (j, b) in row.iter_mut().enumerate() {
                let mu_bar = if ok { bit_to_sign(mu_line[j]) } else { 0 };
                *b = sign_to_bit(sr_combine(w, mu_bar, array.rel[r * n + j]));
            }
        }
        for c in 0..n {
            st.read_col(c);
            mu_line.copy_from_slice(&st.line);
            let ok = matches!(
                bdd_decode_in_place(&mut mu_line, &spec.component, &spec.tbl, &mut st.scratch)?,
                BddStatus::Corrected { .. }
            );
            for r in 0..n {
                let mu_bar = if ok { bit_to_sign(mu_line[r]) } else { 0 };
                st.line[r] = sign_to_bit(sr_combine(w, mu_bar, array.rel[r * n + c]));
            }
            st.write_col(c);
        }
        if st.all_valid(spec) {
            converged = true;
            break;
        }
        if st.bits == prev {
            break; // fixed point short of validity
        }
        prev.copy_from_slice(&st.bits);
    }
    Ok(ProductDecodeReport {
        bits: st.bits,
        converged,
        iterations,
    })
}

fn check_square(array: &CodeArray, spec: &PcSpec) -> Result<(), ProductError> {
    let n = spec.n();
    if array.rows != n || array.cols != n {
        return Err(ProductError::ShapeMismatch {
            expected: n * n,
            got: array.rows * array.cols,
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Staircase encoding
// ---------------------------------------------------------------------------

/// Encodes an information stream into staircase blocks `B₁, B₂, …` with the
/// all-zero reference block `B₀`. The stream length must be a multiple of
/// [`StaircaseSpec::info_bits_per_block`].
pub fn staircase_encode(info: &[u8], spec: &StaircaseSpec) -> Result<Vec<Vec<u8>>, ProductError> {
    let a = spec.block_side();
    let per_block = spec.info_bits_per_block();
    if info.len() % per_block != 0 {
        return Err(ProductError::StreamUnderflow {
            missing: per_block - info.len() % per_block,
        });
    }
    let fresh = a - (spec.component.n() - spec.component.k());
    let mut blocks = Vec::new();
    let mut prev = vec![0u8; a * a]; // B₀
    for chunk in info.chunks(per_block) {
        let mut block = vec![0u8; a * a];
        for r in 0..a {
            // Row r of [Bᵢ₋₁ᵀ | Bᵢ]: first a bits are column r of Bᵢ₋₁.
            let mut word = Vec::with_capacity(spec.component.k());
            for c in 0..a {
                word.push(prev[c * a + r]);
            }
            word.extend_from_slice(&chunk[r * fresh..(r + 1) * fresh]);
            let cw = bch_encode(&word, &spec.component)?;
            block[r * a..(r + 1) * a].copy_from_slice(&cw[a..]);
        }
        blocks.push(block.clone());
        prev = block;
    }
    Ok(blocks)
}

// ---------------------------------------------------------------------------
// Staircase sliding-window decoder
// ---------------------------------------------------------------------------

/// Component decoding mode for the staircase window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StaircaseMode {
    Ibdd,
    IbddSr,
}

struct StairBlock {
    bits: Vec<u8>,
    rel: Vec<f64>,
    /// The all-zero reference block is never modified.
    pinned: bool,
}

/// Sliding-window staircase decoder.
///
/// Push received blocks in order; once the window is full each push finalizes
/// and returns the oldest block. Within a window slide, `spec.sweeps` passes
/// run over all adjacent block pairs (oldest first), decoding all component
/// words straddling each pair.
pub struct StaircaseDecoder {
    spec: StaircaseSpec,
    mode: StaircaseMode,
    weights: Option<WeightSchedule>,
    window: VecDeque<StairBlock>,
    scratch: BddScratch,
    word: Vec<u8>,
    mu: Vec<u8>,
}

impl StaircaseDecoder {
    pub fn new(
        spec: StaircaseSpec,
        mode: StaircaseMode,
        weights: Option<WeightSchedule>,
    ) -> Result<Self, ProductError> {
        if mode == StaircaseMode::IbddSr {
            let w = weights.as_ref().ok_or(ProductError::MissingReliability)?;
            if w.len() < spec.sweeps {
                return Err(ProductError::ScheduleTooShort {
                    need: spec.sweeps,
                    got: w.len(),
                });
            }
            if let Some(row) = w.rows.iter().find(|r| r.weight <= 0.0) {
                return Err(ProductError::NonPositiveWeight(row.weight));
            }
        }
        let a = spec.block_side();
        let n = spec.component.n();
        let mut window = VecDeque::with_capacity(spec.window + 1);
        window.push_back(StairBlock {
            bits: vec![0u8; a * a],
            rel: vec![f64::NEG_INFINITY; a * a],
            pinned: true,
        });
        Ok(Self {
            spec,
            mode,
            weights,
            window,
            scratch: BddScratch::default(),
            word: vec![0u8; n],
            mu: vec![0u8; n],
        })
    }

    /// Bits per block (a²).
    pub fn block_bits(&self) -> usize {
        let a = self.spec.block_side();
        a * a
    }

    /// Pushes a received block (hard bits plus reliabilities in iBDD-SR
    /// mode); returns the finalized oldest block once the window is full.
    pub fn push(
        &mut self,
        bits: Vec<u8>,
        rel: Option<Vec<f64>>,
    ) -> Result<Option<Vec<u8>>, ProductError> {
        let expect = self.block_bits();
        if bits.len() != expect {
            return Err(ProductError::ShapeMismatch {
                expected: expect,
                got: bits.len(),
            });
        }
        let rel = match (self.mode, rel) {
            (StaircaseMode::IbddSr, None) => return Err(ProductError::MissingReliability),
            (_, Some(r)) if r.len() != expect => {
                return Err(ProductError::ShapeMismatch {
                    expected: expect,
                    got: r.len(),
                })
            }
            (_, Some(r)) => r,
            (StaircaseMode::Ibdd, None) => vec![0.0; expect],
        };
        self.window.push_back(StairBlock {
            bits,
            rel,
            pinned: false,
        });
        self.run_sweeps()?;
        if self.window.len() > self.spec.window {
            let out = self.window.pop_front().expect("non-empty window");
            return Ok(if out.pinned { None } else { Some(out.bits) });
        }
        Ok(None)
    }

    /// Flushes the stream end: finalizes every remaining block, running the
    /// usual sweeps before each emission.
    pub fn flush(&mut self) -> Result<Vec<Vec<u8>>, ProductError> {
        let mut out = Vec::new();
        while self
            .window
            .iter()
            .any(|b| !b.pinned)
        {
            self.run_sweeps()?;
            let front = self.window.pop_front().expect("non-empty window");
            if !front.pinned {
                out.push(front.bits);
            }
        }
        Ok(out)
    }

    fn run_sweeps(&mut self) -> Result<(), ProductError> {
        for sweep in 0..self.spec.sweeps {
            for left in 0..self.window.len().saturating_sub(1) {
                self.decode_pair(left, sweep)?;
            }
        }
        Ok(())
    }

    /// Decodes all component words straddling blocks (left, left+1).
    fn decode_pair(&mut self, left: usize, sweep: usize) -> Result<(), ProductError> {
        let a = self.spec.block_side();
        let (w, t_unused) = match self.mode {
            StaircaseMode::Ibdd => (0.0, 0.0),
            StaircaseMode::IbddSr => {
                let sched = self.weights.as_ref().expect("checked in new");
                let row = sched.rows[sweep.min(sched.len() - 1)];
                (row.weight, row.threshold)
            }
        };
        let _ = t_unused;
        for r in 0..a {
            // word = [column r of left block | row r of right block]
            for c in 0..a {
                self.word[c] = self.window[left].bits[c * a + r];
            }
            self.word[a..2 * a]
                .copy_from_slice(&self.window[left + 1].bits[r * a..(r + 1) * a]);
            match self.mode {
                StaircaseMode::Ibdd => {
                    if let BddStatus::Corrected { num_flips } = bdd_decode_in_place(
                        &mut self.word,
                        &self.spec.component,
                        &self.spec.tbl,
                        &mut self.scratch,
                    )? {
                        if num_flips > 0 {
                            self.write_pair(left, r);
                        }
                    }
                }
                StaircaseMode::IbddSr => {
                    self.mu.copy_from_slice(&self.word);
                    let ok = matches!(
                        bdd_decode_in_place(
                            &mut self.mu,
                            &self.spec.component,
                            &self.spec.tbl,
                            &mut self.scratch,
                        )?,
                        BddStatus::Corrected { .. }
                    );
                    for j in 0..2 * a {
                        let rel = if j < a {
                            self.window[left].rel[(j % a) * a + r]
                        } else {
                            self.window[left + 1].rel[r * a + (j - a)]
                        };
                        let mu_bar = if ok { bit_to_sign(self.mu[j]) } else { 0 };
                        self.word[j] = if rel == f64::NEG_INFINITY {
                            0 // pinned reference bits stay zero
                        } else {
                            sign_to_bit(sr_combine(w, mu_bar, rel))
                        };
                    }
                    self.write_pair(left, r);
                }
            }
        }
        Ok(())
    }

    /// Writes `self.word` back into the straddling pair (skipping pinned
    /// blocks).
    fn write_pair(&mut self, left: usize, r: usize) {
        let a = self.spec.block_side();
        if !self.window[left].pinned {
            for c in 0..a {
                self.window[left].bits[c * a + r] = self.word[c];
            }
        }
        if !self.window[left + 1].pinned {
            self.window[left + 1].bits[r * a..(r + 1) * a].copy_from_slice(&self.word[a..2 * a]);
        }
    }
}

// ---------------------------------------------------------------------------
// Pilot-based weight optimization for iBDD-SR
// ---------------------------------------------------------------------------

/// Default candidate grid for the scaling weights: 0.2, 0.4, …, 3.0.
pub fn default_sr_grid() -> Vec<f64> {
    (1..=15).map(|i| 0.2 * f64::from(i)).collect()
}

/// Greedy per-iteration weight selection by pilot simulation.
///
/// A fixed batch of all-zero pilot frames is drawn at `esno_db` from `seed`;
/// iteration by iteration, the candidate minimizing the post-iteration pilot
/// BER (ties to the smaller weight) is frozen before moving on. Deterministic
/// for fixed arguments.
pub fn optimize_sr_weights(
    spec: &PcSpec,
    esno_db: f64,
    grid: &[f64],
    pilot_frames: usize,
    max_iters: usize,
    seed: u64,
) -> Result<WeightSchedule, ProductError> {
    if grid.is_empty() {
        return Err(ProductError::EmptyGrid);
    }
    if let Some(&w) = grid.iter().find(|&&w| w <= 0.0) {
        return Err(ProductError::NonPositiveWeight(w));
    }
    let n = spec.n();
    let sigma = crate::channel::ChannelParams::new(esno_db, 0).sigma();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Pilot state: current hard bits per frame plus frozen reliabilities.
    let mut frames: Vec<(Vec<u8>, Vec<f64>)> = (0..pilot_frames)
        .map(|_| {
            let mut y = vec![0.0f64; n * n];
            crate::channel::transmit_all_zero_into(&mut y, sigma, &mut rng);
            let bits: Vec<u8> = y.iter().map(|&v| sign_to_bit(harden(v))).collect();
            (bits, y)
        })
        .collect();
    let mut chosen = Vec::with_capacity(max_iters);
    let mut scratch = BddScratch::default();
    let mut best_states: Vec<Vec<u8>> = Vec::new();
    for _ in 0..max_iters {
        let mut best: Option<(f64, f64)> = None; // (ber, weight)
        for &w in grid {
            let mut errs = 0usize;
            let mut states = Vec::with_capacity(frames.len());
            for (bits, rel) in &frames {
                let mut state = bits.clone();
                sr_iteration(&mut state, rel, n, spec, w, &mut scratch)?;
                errs += state.iter().filter(|&&b| b != 0).count();
                states.push(state);
            }
            let ber = errs as f64 / (frames.len() * n * n) as f64;
            let better = match best {
                None => true,
                Some((b_ber, b_w)) => ber < b_ber || (ber == b_ber && w < b_w),
            };
            if better {
                best = Some((ber, w));
                best_states = states;
            }
        }
        let (_, w) = best.expect("non-empty grid");
        chosen.push(w);
        for (frame, state) in frames.iter_mut().zip(best_states.drain(..)) {
            frame.0 = state;
        }
    }
    Ok(WeightSchedule {
        rows: chosen
            .iter()
            .map(|&w| crate::decoders::ScheduleRow {
                weight: w,
                strong_weight: w,
                threshold: 0.0,
            })
            .collect(),
        initial_threshold: 0.0,
    })
}

/// One full iBDD-SR iteration (rows then columns) on a bit matrix.
fn sr_iteration(
    bits: &mut [u8],
    rel: &[f64],
    n: usize,
    spec: &PcSpec,
    w: f64,
    scratch: &mut BddScratch,
) -> Result<(), ProductError> {
    let mut mu = vec![0u8; n];
    let mut line = vec![0u8; n];
    for r in 0..n {
        mu.copy_from_slice(&bits[r * n..(r + 1) * n]);
        let ok = matches!(
            bdd_decode_in_place(&mut mu, &spec.component, &spec.tbl, scratch)?,
            BddStatus::Corrected { .. }
        );
        for j in 0..n {
            let mu_bar = if ok { bit_to_sign(mu[j]) } else { 0 };
            bits[r * n + j] = sign_to_bit(sr_combine(w, mu_bar, rel[r * n + j]));
        }
    }
    for c in 0..n {
        for r in 0..n {
            line[r] = bits[r * n + c];
        }
        mu.copy_from_slice(&line);
        let ok = matches!(
            bdd_decode_in_place(&mut mu, &spec.component, &spec.tbl, scratch)?,
            BddStatus::Corrected { .. }
        );
        for r in 0..n {
            let mu_bar = if ok { bit_to_sign(mu[r]) } else { 0 };
            bits[r * n + c] = sign_to_bit(sr_combine(w, mu_bar, rel[r * n + c]));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bch::bdd_decode;
    use crate::bch::BddOutcome;
    use rand::Rng;

    fn pc_15_5_3() -> PcSpec {
        let (component, tbl) = BchSpec::from_triple(15, 5, 3).unwrap();
        PcSpec::new(component, tbl)
    }

    #[test]
    fn spec_strings() {
        let pc = PcSpec::from_spec_str("pc:bch:255,231,3").unwrap();
        assert_eq!(pc.n(), 255);
        assert!((pc.rate() - (231.0f64 / 255.0).powi(2)).abs() < 1e-12);
        let sc = StaircaseSpec::from_spec_str("staircase:bch:510,483,3:W=7").unwrap();
        assert_eq!(sc.block_side(), 255);
        assert_eq!(sc.window, 7);
        assert!((sc.rate() - 0.89411764).abs() < 1e-6);
        let sc = StaircaseSpec::from_spec_str("staircase:bch:510,483,3").unwrap();
        assert_eq!(sc.window, DEFAULT_WINDOW);
        assert!(StaircaseSpec::from_spec_str("pc:bch:510,483,3").is_err());
        // Odd-length components cannot form a staircase.
        assert!(StaircaseSpec::from_spec_str("staircase:bch:255,231,3").is_err());
    }

    #[test]
    fn pc_encode_zero_and_membership() {
        let spec = pc_15_5_3();
        let zero = pc_encode(&vec![0u8; 25], &spec).unwrap();
        assert!(zero.iter().all(|&b| b == 0));

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let info: Vec<u8> = (0..25).map(|_| rng.gen_range(0..2u8)).collect();
        let arr = pc_encode(&info, &spec).unwrap();
        let n = spec.n();
        for r in 0..n {
            let row = arr[r * n..(r + 1) * n].to_vec();
            match bdd_decode(&row, spec.component(), spec.table()).unwrap() {
                BddOutcome::Corrected { num_flips, .. } => assert_eq!(num_flips, 0),
                BddOutcome::Failure => panic!("row {r} not a codeword"),
            }
        }
        for c in 0..n {
            let col: Vec<u8> = (0..n).map(|r| arr[r * n + c]).collect();
            match bdd_decode(&col, spec.component(), spec.table()).unwrap() {
                BddOutcome::Corrected { num_flips, .. } => assert_eq!(num_flips, 0),
                BddOutcome::Failure => panic!("column {c} not a codeword"),
            }
        }
    }

    #[test]
    fn pc_encode_order_commutes() {
        // Rows-then-columns equals columns-then-rows for the checks-on-checks
        // corner.
        let spec = pc_15_5_3();
        let (k, n) = (5usize, 15usize);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let info: Vec<u8> = (0..k * k).map(|_| rng.gen_range(0..2u8)).collect();
            let a = pc_encode(&info, &spec).unwrap();
            // Column-first encoding.
            let mut b = vec![0u8; n * n];
            for c in 0..k {
                let col: Vec<u8> = (0..k).map(|r| info[r * k + c]).collect();
                let cw = bch_encode(&col, spec.component()).unwrap();
                for r in 0..n {
                    b[r * n + c] = cw[r];
                }
            }
            for r in 0..n {
                let row: Vec<u8> = (0..k).map(|c| b[r * n + c]).collect();
                let cw = bch_encode(&row, spec.component()).unwrap();
                b[r * n..(r + 1) * n].copy_from_slice(&cw);
            }
            assert_eq!(a, b);
        }
    }

    #[test]
    fn ibdd_clean_and_single_flip() {
        let spec = pc_15_5_3();
        let n = spec.n();
        let clean = CodeArray::from_bits(&vec![0u8; n * n], n, n).unwrap();
        let rep = ibdd(&clean, &spec, 10).unwrap();
        assert!(rep.converged);
        assert_eq!(rep.iterations, 1);
        assert!(rep.bits.iter().all(|&b| b == 0));

        let mut bits = vec![0u8; n * n];
        bits[3 * n + 8] = 1;
        let arr = CodeArray::from_bits(&bits, n, n).unwrap();
        let rep = ibdd(&arr, &spec, 10).unwrap();
        assert!(rep.converged);
        assert!(rep.bits.iter().all(|&b| b == 0));
    }

    /// A (t+1)×(t+1) = 4×4 flip pattern stalls iBDD: every affected row and
    /// column carries t+1 = 4 errors. Verified against the brute-force
    /// nearest-codeword oracle that no affected line is within distance t of
    /// any codeword.
    #[test]
    fn ibdd_stall_pattern() {
        let spec = pc_15_5_3();
        let n = spec.n();
        let rows = [1usize, 4, 9, 12];
        let cols = [0usize, 5, 7, 13];
        let mut bits = vec![0u8; n * n];
        for &r in &rows {
            for &c in &cols {
                bits[r * n + c] = 1;
            }
        }
        // Oracle: enumerate all 2^5 codewords; the flipped lines must be at
        // distance > t from each.
        let mut codewords = Vec::new();
        for v in 0..32u32 {
            let info: Vec<u8> = (0..5).map(|i| ((v >> i) & 1) as u8).collect();
            codewords.push(bch_encode(&info, spec.component()).unwrap());
        }
        let line: Vec<u8> = {
            let mut l = vec![0u8; n];
            for &c in &cols {
                l[c] = 1;
            }
            l
        };
        for cw in &codewords {
            let dist = cw.iter().zip(&line).filter(|(a, b)| a != b).count();
            assert!(dist > 3, "stall line within t of a codeword");
        }
        let arr = CodeArray::from_bits(&bits, n, n).unwrap();
        let rep = ibdd(&arr, &spec, 20).unwrap();
        assert!(!rep.converged);
        assert_eq!(rep.bits, bits, "stall pattern must be untouched");
    }

    #[test]
    fn sr_combine_rule() {
        // BDD failure: outbound equals the channel hard decision.
        assert_eq!(sr_combine(2.0, 0, -0.3), harden(-0.3));
        assert_eq!(sr_combine(2.0, 0, 0.3), harden(0.3));
        // BDD overrides a weakly contrary channel.
        assert_eq!(sr_combine(2.0, 1, -1.0), 1);
        // A strong channel overrides the BDD output.
        assert_eq!(sr_combine(0.5, 1, -1.0), -1);
    }

    #[test]
    fn ibdd_sr_degenerates_to_ibdd_at_huge_weight() {
        // When no BDD call fails and w is above any |reliability|, iBDD-SR
        // reproduces iBDD decision for decision. One error per distinct
        // row/column keeps every BDD call successful.
        let spec = pc_15_5_3();
        let n = spec.n();
        for trial in 0..10 {
            let mut y = vec![-1.0f64; n * n];
            for i in 0..4usize {
                let r = (3 * i + trial) % n;
                let c = (5 * i + 2 * trial + 1) % n;
                y[r * n + c] = 0.8;
            }
            let arr = CodeArray::from_channel(&y, n, n).unwrap();
            let sr = ibdd_sr(&arr, &spec, &WeightSchedule::constant(1e9, 0.0, 10), 10).unwrap();
            let hd = ibdd(&arr, &spec, 10).unwrap();
            assert!(sr.converged && hd.converged);
            assert_eq!(sr.bits, hd.bits);
        }
    }

    #[test]
    fn ibdd_sr_requires_reliabilities_and_positive_weights() {
        let spec = pc_15_5_3();
        let n = spec.n();
        let arr = CodeArray::from_bits(&vec![0u8; n * n], n, n).unwrap();
        assert!(matches!(
            ibdd_sr(&arr, &spec, &WeightSchedule::constant(1.0, 0.0, 5), 5),
            Err(ProductError::MissingReliability)
        ));
        let arr = CodeArray::from_channel(&vec![-1.0; n * n], n, n).unwrap();
        assert!(matches!(
            ibdd_sr(&arr, &spec, &WeightSchedule::constant(-1.0, 0.0, 5), 5),
            Err(ProductError::NonPositiveWeight(_))
        ));
        assert!(matches!(
            ibdd_sr(&arr, &spec, &WeightSchedule::constant(1.0, 0.0, 2), 5),
            Err(ProductError::ScheduleTooShort { .. })
        ));
    }

    fn small_staircase() -> StaircaseSpec {
        // Shortened BCH(31,21,2) → (30,20,2): even length, a = 15, 10 parity
        // bits per component word.
        let (c, tbl) = BchSpec::from_triple(30, 20, 2).unwrap();
        StaircaseSpec::new(c, tbl, 4).unwrap()
    }

    #[test]
    fn staircase_encode_membership() {
        let spec = small_staircase();
        let a = spec.block_side();
        assert_eq!(a, 15);
        let per = spec.info_bits_per_block();
        let zero = staircase_encode(&vec![0u8; 3 * per], &spec).unwrap();
        assert!(zero.iter().all(|b| b.iter().all(|&x| x == 0)));

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let info: Vec<u8> = (0..3 * per).map(|_| rng.gen_range(0..2u8)).collect();
        let blocks = staircase_encode(&info, &spec).unwrap();
        assert_eq!(blocks.len(), 3);
        let mut prev = vec![0u8; a * a];
        for block in &blocks {
            for r in 0..a {
                let mut word: Vec<u8> = (0..a).map(|c| prev[c * a + r]).collect();
                word.extend_from_slice(&block[r * a..(r + 1) * a]);
                match bdd_decode(&word, spec.component(), spec.table()).unwrap() {
                    BddOutcome::Corrected { num_flips, .. } => assert_eq!(num_flips, 0),
                    BddOutcome::Failure => panic!("straddle row {r} invalid"),
                }
            }
            prev = block.clone();
        }
        assert!(matches!(
            staircase_encode(&vec![0u8; per - 1], &spec),
            Err(ProductError::StreamUnderflow { .. })
        ));
    }

    #[test]
    fn staircase_decoder_clean_and_single_flip() {
        let spec = small_staircase();
        let a = spec.block_side();
        for mode in [StaircaseMode::Ibdd, StaircaseMode::IbddSr] {
            let weights = match mode {
                StaircaseMode::Ibdd => None,
                StaircaseMode::IbddSr => Some(WeightSchedule::constant(2.0, 0.0, 8)),
            };
            let mut dec = StaircaseDecoder::new(spec.clone(), mode, weights).unwrap();
            let mut emitted = Vec::new();
            for i in 0..6 {
                let mut bits = vec![0u8; a * a];
                if i == 2 {
                    bits[11] = 1; // single flip somewhere in block 3
                }
                let rel: Vec<f64> = bits.iter().map(|&b| if b == 0 { -1.0 } else { 0.4 }).collect();
                if let Some(b) = dec.push(bits, Some(rel)).unwrap() {
                    emitted.push(b);
                }
            }
            emitted.extend(dec.flush().unwrap());
            assert_eq!(emitted.len(), 6);
            for (i, b) in emitted.iter().enumerate() {
                assert!(b.iter().all(|&x| x == 0), "{mode:?} block {i} has errors");
            }
        }
    }

    #[test]
    fn sr_weight_optimizer_basics() {
        let spec = pc_15_5_3();
        // Single-candidate grid returns that candidate everywhere.
        let sched = optimize_sr_weights(&spec, 6.0, &[0.8], 4, 3, 1).unwrap();
        assert!(sched.rows.iter().all(|r| r.weight == 0.8));
        // Deterministic.
        let a = optimize_sr_weights(&spec, 5.0, &default_sr_grid(), 4, 3, 7).unwrap();
        let b = optimize_sr_weights(&spec, 5.0, &default_sr_grid(), 4, 3, 7).unwrap();
        assert_eq!(a, b);
        assert!(matches!(
            optimize_sr_weights(&spec, 5.0, &[], 4, 3, 7),
            Err(ProductError::EmptyGrid)
        ));
    }
}
