//! Channel codes and decoders for high-throughput forward error correction
//! studies on the binary-input AWGN channel.
//!
//! The crate bundles the pieces needed to compare low-complexity decoding
//! architectures at desk scale:
//!
//! - [`gf`] / [`bch`] — GF(2^m) arithmetic and shortened binary BCH component
//!   codes with bounded distance decoding (Berlekamp–Massey + Chien search).
//! - [`ldpc`] — Tanner graphs: terminated spatially coupled LDPC construction
//!   via circulant lifting, generic regular codes, membership checks.
//! - [`decoders`] — message passing over a Tanner graph: unquantized
//!   sum-product BP and the coarsely quantized BMP / TMP / QMP algorithms.
//! - [`de`] — density evolution on the bi-AWGN channel for the quantized
//!   decoders: weight schedules, trajectories, decoding thresholds.
//! - [`product`] — product and staircase codes built from BCH component
//!   codes, decoded with iBDD or iBDD-SR (scaled reliability).
//! - [`hybrid`] — concatenation of an inner soft-decision LDPC code with an
//!   outer hard-decision staircase code.
//! - [`channel`] — bi-AWGN sampling, LLRs, uncoded BER, SD/HD capacity and
//!   Shannon limits.
//! - [`sim`] — seeded, reproducible Monte Carlo BER/FER sweeps with CSV
//!   output and curve post-processing.
//!
//! Hard decisions follow the bipolar convention used throughout: zeros are
//! represented by −1 and ones by +1, and the hardening function is
//! `f(x) = +1` if `x > 0`, `−1` otherwise.

pub mod bch;
pub mod channel;
pub mod de;
pub mod decoders;
pub mod gf;
pub mod ldpc;
pub mod product;

/// Hardening function `f(x) = +1` if `x > 0`, `−1` otherwise.
///
/// The tie `f(0) = −1` is deliberate and used consistently by every decoder
/// in this crate.
#[inline]
pub fn harden(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else {
        -1
    }
}

/// Maps a bipolar sign (−1/+1) to a bit (0/1).
#[inline]
pub fn sign_to_bit(s: i8) -> u8 {
    u8::from(s > 0)
}

/// Maps a bit (0/1) to a bipolar sign (−1/+1).
#[inline]
pub fn bit_to_sign(b: u8) -> i8 {
    if b == 0 {
        -1
    } else {
        1
    }
}
