//! Shortened binary BCH component codes: systematic encoding, syndrome
//! computation, and bounded distance decoding (BDD).
//!
//! BDD corrects up to `t` errors and signals [`BddOutcome::Failure`]
//! otherwise. Miscorrection — landing on a valid codeword other than the
//! transmitted one when more than `t` errors occurred — is intrinsic to BDD
//! and deliberately not suppressed.
//!
//! Bit `j` of a length-`n` word is the coefficient of `x^(n−1−j)`: the first
//! bit carries the highest power. A code shortened by `s` fixes the `s`
//! leading information bits of the native `(2^m − 1)` code to zero; those
//! positions are never transmitted and never searched for errors.

use crate::gf::GfTable;
use thiserror::Error;

/// Errors raised by BCH construction and codecs. Decoding failure is *not*
/// an error; it is the [`BddOutcome::Failure`] variant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BchError {
    /// Input slice length does not match the code parameter.
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    /// No valid BCH code with the requested parameters.
    #[error("invalid BCH parameters: {0}")]
    InvalidParams(String),
    /// Unparseable spec string.
    #[error("bad BCH spec string {0:?} (expected \"bch:n,k,t\")")]
    BadSpecString(String),
}

/// Parameters of a (possibly shortened) binary BCH code.
///
/// The native code has length `2^m − 1`; shortening removes `shorten`
/// leading information bits, giving the transmitted `(n, k)` with
/// `n − k = n_native − k_native`.
#[derive(Debug, Clone)]
pub struct BchSpec {
    m: u32,
    t: usize,
    n_native: usize,
    k_native: usize,
    shorten: usize,
    /// Generator coefficients, index = degree; `generator[deg] = 1`.
    generator: Vec<u8>,
}

impl BchSpec {
    /// Builds the narrow-sense binary BCH code over the field of `tbl` that
    /// corrects `t` errors, shortened by `shorten` information bits.
    pub fn new(tbl: &GfTable, t: usize, shorten: usize) -> Result<Self, BchError> {
        if t == 0 {
            return Err(BchError::InvalidParams("t must be ≥ 1".into()));
        }
        let n_native = tbl.order() as usize;
        let generator = generator_poly(tbl, t)?;
        let deg = generator.len() - 1;
        if deg >= n_native {
            return Err(BchError::InvalidParams(format!(
                "generator degree {deg} ≥ native length {n_native}"
            )));
        }
        let k_native = n_native - deg;
        if shorten >= k_native {
            return Err(BchError::InvalidParams(format!(
                "shorten {shorten} ≥ native dimension {k_native}"
            )));
        }
        Ok(Self {
            m: tbl.m(),
            t,
            n_native,
            k_native,
            shorten,
            generator,
        })
    }

    /// Resolves an `(n, k, t)` triple, e.g. from `"bch:255,231,3"`, searching
    /// field degrees upward and applying the shortening that fits.
    pub fn from_triple(n: usize, k: usize, t: usize) -> Result<(Self, GfTable), BchError> {
        if n <= k || t == 0 {
            return Err(BchError::InvalidParams(format!("bad triple ({n},{k},{t})")));
        }
        let mut m = 2;
        while (1usize << m) - 1 < n {
            m += 1;
            if m > 16 {
                return Err(BchError::InvalidParams(format!(
                    "no field of degree ≤ 16 fits n = {n}"
                )));
            }
        }
        for m in m..=16 {
            let tbl = GfTable::new(m as u32)
                .map_err(|e| BchError::InvalidParams(e.to_string()))?;
            let n_native = tbl.order() as usize;
            let shorten = n_native - n;
            if let Ok(spec) = Self::new(&tbl, t, shorten) {
                if spec.k() == k {
                    return Ok((spec, tbl));
                }
            }
        }
        Err(BchError::InvalidParams(format!(
            "no BCH code matches ({n},{k},{t})"
        )))
    }

    /// Parses a spec string of the form `"bch:n,k,t"` (the `bch:` prefix is
    /// optional).
    pub fn from_spec_str(s: &str) -> Result<(Self, GfTable), BchError> {
        let body = s.strip_prefix("bch:").unwrap_or(s);
        let parts: Vec<_> = body.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(BchError::BadSpecString(s.into()));
        }
        let parse = |p: &str| p.parse::<usize>().map_err(|_| BchError::BadSpecString(s.into()));
        let (n, k, t) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
        Self::from_triple(n, k, t)
    }

    /// Transmitted block length.
    #[inline]
    pub fn n(&self) -> usize {
        self.n_native - self.shorten
    }

    /// Transmitted dimension.
    #[inline]
    pub fn k(&self) -> usize {
        self.k_native - self.shorten
    }

    /// Error-correction capability.
    #[inline]
    pub fn t(&self) -> usize {
        self.t
    }

    /// Field extension degree.
    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Native (unshortened) block length `2^m − 1`.
    #[inline]
    pub fn n_native(&self) -> usize {
        self.n_native
    }

    /// Native dimension.
    #[inline]
    pub fn k_native(&self) -> usize {
        self.k_native
    }

    /// Number of removed leading information bits.
    #[inline]
    pub fn shorten(&self) -> usize {
        self.shorten
    }

    /// Generator polynomial coefficients, index = degree.
    #[inline]
    pub fn generator(&self) -> &[u8] {
        &self.generator
    }
}

/// g(x) = lcm of the minimal polynomials of α, α³, …, α^(2t−1).
fn generator_poly(tbl: &GfTable, t: usize) -> Result<Vec<u8>, BchError> {
    let order = tbl.order() as usize;
    let mut covered = vec![false; order + 1];
    // Generator over GF(2), kept as 0/1 coefficients.
    let mut g = vec![1u8];
    for i in (1..2 * t).step_by(2) {
        if i >= order {
            return Err(BchError::InvalidParams(format!(
                "designed distance exceeds field size (t = {t})"
            )));
        }
        if covered[i] {
            continue;
        }
        // Cyclotomic coset of i: {i, 2i, 4i, ...} mod (2^m − 1).
        let mut coset = Vec::new();
        let mut j = i;
        loop {
            coset.push(j);
            covered[j] = true;
            j = j * 2 % order;
            if j == i {
                break;
            }
        }
        // Minimal polynomial Π (x + α^j); coefficients land in GF(2).
        let mut mp: Vec<u32> = vec![1];
        for &j in &coset {
            let root = tbl.alpha_pow(j as u32);
            let mut next = vec![0u32; mp.len() + 1];
            for (d, &c) in mp.iter().enumerate() {
                next[d + 1] ^= c;
                next[d] ^= tbl.mul(c, root);
            }
            mp = next;
        }
        debug_assert!(mp.iter().all(|&c| c <= 1), "minimal poly not binary");
        // g *= mp over GF(2).
        let mut prod = vec![0u8; g.len() + mp.len() - 1];
        for (a, &ga) in g.iter().enumerate() {
            if ga == 1 {
                for (b, &mb) in mp.iter().enumerate() {
                    prod[a + b] ^= mb as u8;
                }
            }
        }
        g = prod;
    }
    Ok(g)
}

/// Systematic encoding: `info` (length k) followed by `n − k` parity bits.
pub fn bch_encode(info: &[u8], spec: &BchSpec) -> Result<Vec<u8>, BchError> {
    let k = spec.k();
    if info.len() != k {
        return Err(BchError::LengthMismatch {
            expected: k,
            got: info.len(),
        });
    }
    let nk = spec.n_native - spec.k_native;
    let g = &spec.generator;
    // LFSR division of x^(n−k)·i(x) by g(x); register r[d] holds the
    // coefficient of x^d of the running remainder.
    let mut r = vec![0u8; nk];
    for &bit in info {
        let fb = bit ^ r[nk - 1];
        for d in (1..nk).rev() {
            r[d] = r[d - 1] ^ (fb & g[d]);
        }
        r[0] = fb & g[0];
    }
    let mut cw = Vec::with_capacity(spec.n());
    cw.extend_from_slice(info);
    cw.extend((0..nk).rev().map(|d| r[d]));
    Ok(cw)
}

/// Outcome of bounded distance decoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BddOutcome {
    /// A codeword within Hamming distance t was found.
    Corrected {
        codeword: Vec<u8>,
        num_flips: usize,
    },
    /// No consistent error pattern of weight ≤ t exists.
    Failure,
}

/// In-place variant of [`BddOutcome`]; on `Corrected` the word has been
/// patched to the codeword.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BddStatus {
    Corrected { num_flips: usize },
    Failure,
}

/// Reusable scratch buffers for the decoding chain; hot loops decode
/// millions of component words and clean words must not allocate.
#[derive(Debug, Default, Clone)]
pub struct BddScratch {
    syndromes: Vec<u32>,
    lambda: Vec<u32>,
    prev: Vec<u32>,
    tmp: Vec<u32>,
    /// Error exponents found by the Chien search.
    roots: Vec<u32>,
}

/// True iff every syndrome of `word` is zero (i.e. `word` is a codeword).
pub fn syndromes_are_zero(
    word: &[u8],
    spec: &BchSpec,
    tbl: &GfTable,
    scratch: &mut BddScratch,
) -> bool {
    let n = spec.n();
    debug_assert_eq!(word.len(), n);
    let two_t = 2 * spec.t;
    scratch.syndromes.clear();
    scratch.syndromes.resize(two_t, 0);
    for (j, &bit) in word.iter().enumerate() {
        if bit != 0 {
            let e = (n - 1 - j) as u32;
            for (i, s) in scratch.syndromes.iter_mut().enumerate() {
                *s ^= tbl.alpha_pow(e * (i as u32 + 1) % tbl.order());
            }
        }
    }
    scratch.syndromes.iter().all(|&s| s == 0)
}

/// Bounded distance decoding; returns the corrected codeword or `Failure`.
pub fn bdd_decode(word: &[u8], spec: &BchSpec, tbl: &GfTable) -> Result<BddOutcome, BchError> {
    let mut w = word.to_vec();
    let mut scratch = BddScratch::default();
    Ok(match bdd_decode_in_place(&mut w, spec, tbl, &mut scratch)? {
        BddStatus::Corrected { num_flips } => BddOutcome::Corrected {
            codeword: w,
            num_flips,
        },
        BddStatus::Failure => BddOutcome::Failure,
    })
}

/// Bounded distance decoding without allocation; flips are applied to `word`
/// only on success.
pub fn bdd_decode_in_place(
    word: &mut [u8],
    spec: &BchSpec,
    tbl: &GfTable,
    scratch: &mut BddScratch,
) -> Result<BddStatus, BchError> {
    let n = spec.n();
    if word.len() != n {
        return Err(BchError::LengthMismatch {
            expected: n,
            got: word.len(),
        });
    }
    let two_t = 2 * spec.t;

    // Syndromes S_i = Σ_{set bits} α^(i·e), e = n−1−j. Iterating set bits
    // keeps near-codeword decodes cheap.
    scratch.syndromes.clear();
    scratch.syndromes.resize(two_t, 0);
    let mut any = false;
    for (j, &bit) in word.iter().enumerate() {
        if bit != 0 {
            any = true;
            let e = (n - 1 - j) as u32;
            for (i, s) in scratch.syndromes.iter_mut().enumerate() {
                *s ^= tbl.alpha_pow(e * (i as u32 + 1) % tbl.order());
            }
        }
    }
    if !any || scratch.syndromes.iter().all(|&s| s == 0) {
        return Ok(BddStatus::Corrected { num_flips: 0 });
    }

    // Berlekamp–Massey for the error locator Λ(x).
    let lambda_len = berlekamp_massey(tbl, scratch);
    let lambda = &scratch.lambda[..];
    if lambda_len > spec.t {
        return Ok(BddStatus::Failure);
    }
    let deg = match lambda.iter().rposition(|&c| c != 0) {
        Some(d) => d,
        None => return Ok(BddStatus::Failure),
    };
    if deg != lambda_len {
        return Ok(BddStatus::Failure);
    }

    // Chien search over transmitted positions only (exponents 0..n); a root
    // at a shortened position is never found, which fails the count check.
    scratch.roots.clear();
    let order = tbl.order();
    // term[i] = Λ_i · α^(−i·e), advanced by α^(−i) per step.
    scratch.tmp.clear();
    scratch.tmp.extend_from_slice(&lambda[..=deg]);
    for e in 0..n as u32 {
        let mut acc = 0u32;
        for &term in scratch.tmp.iter() {
            acc ^= term;
        }
        if acc == 0 {
            scratch.roots.push(e);
            if scratch.roots.len() > deg {
                break;
            }
        }
        for (i, term) in scratch.tmp.iter_mut().enumerate().skip(1) {
            *term = tbl.mul(*term, tbl.alpha_pow(order - i as u32));
        }
    }
    if scratch.roots.len() != deg {
        return Ok(BddStatus::Failure);
    }

    // Re-verify: the located pattern must reproduce every syndrome, so that
    // `Corrected` always returns a valid codeword. Spurious BM locators with
    // enough roots (possible beyond t channel errors) are rejected here.
    for (i, &s) in scratch.syndromes.iter().enumerate() {
        let mut acc = 0u32;
        for &e in &scratch.roots {
            acc ^= tbl.alpha_pow(e * (i as u32 + 1) % order);
        }
        if acc != s {
            return Ok(BddStatus::Failure);
        }
    }

    for &e in &scratch.roots {
        let j = n - 1 - e as usize;
        word[j] ^= 1;
    }
    Ok(BddStatus::Corrected { num_flips: deg })
}

/// Standard Berlekamp–Massey over the 2t syndromes in `scratch.syndromes`;
/// leaves Λ in `scratch.lambda` and returns the register length L.
fn berlekamp_massey(tbl: &GfTable, scratch: &mut BddScratch) -> usize {
    let syn = &scratch.syndromes;
    let two_t = syn.len();
    scratch.lambda.clear();
    scratch.lambda.resize(two_t + 1, 0);
    scratch.prev.clear();
    scratch.prev.resize(two_t + 1, 0);
    scratch.lambda[0] = 1;
    scratch.prev[0] = 1;
    let mut l = 0usize;
    let mut gap = 1usize;
    let mut b = 1u32;
    for step in 0..two_t {
        let mut delta = syn[step];
        for i in 1..=l {
            delta ^= tbl.mul(scratch.lambda[i], syn[step - i]);
        }
        if delta == 0 {
            gap += 1;
        } else if 2 * l <= step {
            scratch.tmp.clear();
            scratch.tmp.extend_from_slice(&scratch.lambda);
            let coef = tbl.div(delta, b);
            for i in 0..=two_t - gap {
                let add = tbl.mul(coef, scratch.prev[i]);
                scratch.lambda[i + gap] ^= add;
            }
            l = step + 1 - l;
            std::mem::swap(&mut scratch.prev, &mut scratch.tmp);
            b = delta;
            gap = 1;
        } else {
            let coef = tbl.div(delta, b);
            for i in 0..=two_t - gap {
                let add = tbl.mul(coef, scratch.prev[i]);
                scratch.lambda[i + gap] ^= add;
            }
            gap += 1;
        }
    }
    l
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bch_15_5_3() -> (BchSpec, GfTable) {
        BchSpec::from_triple(15, 5, 3).unwrap()
    }

    #[test]
    fn paper_triples_resolve() {
        let (s, _) = BchSpec::from_spec_str("bch:255,231,3").unwrap();
        assert_eq!((s.n(), s.k(), s.t(), s.m(), s.shorten()), (255, 231, 3, 8, 0));
        let (s, _) = BchSpec::from_spec_str("bch:310,283,3").unwrap();
        assert_eq!((s.n(), s.k(), s.t(), s.m(), s.shorten()), (310, 283, 3, 9, 201));
        let (s, _) = BchSpec::from_spec_str("bch:510,483,3").unwrap();
        assert_eq!((s.n(), s.k(), s.t(), s.m(), s.shorten()), (510, 483, 3, 9, 1));
        assert_eq!(s.n_native(), 511);
        assert_eq!(s.k_native(), 484);
    }

    #[test]
    fn bad_spec_strings_rejected() {
        assert!(BchSpec::from_spec_str("bch:255,231").is_err());
        assert!(BchSpec::from_spec_str("bch:a,b,c").is_err());
        assert!(BchSpec::from_spec_str("bch:231,255,3").is_err());
        assert!(BchSpec::from_spec_str("bch:255,230,3").is_err());
    }

    #[test]
    fn generator_divides_x_n_minus_one() {
        for (n, k, t) in [(15, 5, 3), (31, 21, 2), (255, 231, 3)] {
            let (spec, _) = BchSpec::from_triple(n, k, t).unwrap();
            let g = spec.generator();
            assert_eq!(g.len() - 1, spec.n_native() - spec.k_native());
            // Long division of x^n_native + 1 by g over GF(2).
            let mut rem = vec![0u8; spec.n_native() + 1];
            rem[0] = 1;
            rem[spec.n_native()] = 1;
            for d in (g.len() - 1..=spec.n_native()).rev() {
                if rem[d] == 1 {
                    let shift = d - (g.len() - 1);
                    for (i, &gc) in g.iter().enumerate() {
                        rem[i + shift] ^= gc;
                    }
                }
            }
            assert!(rem.iter().all(|&c| c == 0), "g does not divide x^n - 1");
        }
    }

    /// Independent long-division oracle for the parity bits.
    fn parity_oracle(info: &[u8], spec: &BchSpec) -> Vec<u8> {
        let nk = spec.n_native() - spec.k_native();
        let mut poly = vec![0u8; info.len() + nk]; // index = degree
        for (j, &b) in info.iter().enumerate() {
            poly[nk + info.len() - 1 - j] = b;
        }
        let g = spec.generator();
        for d in (nk..poly.len()).rev() {
            if poly[d] == 1 {
                let shift = d - nk;
                for (i, &gc) in g.iter().enumerate() {
                    poly[i + shift] ^= gc;
                }
            }
        }
        (0..nk).rev().map(|d| poly[d]).collect()
    }

    #[test]
    fn encode_matches_division_oracle() {
        let (spec, _) = bch_15_5_3();
        let info = [1, 0, 0, 0, 0];
        let cw = bch_encode(&info, &spec).unwrap();
        assert_eq!(&cw[..5], &info);
        assert_eq!(cw[5..], parity_oracle(&info, &spec));

        let (spec, _) = BchSpec::from_triple(310, 283, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let info: Vec<u8> = (0..spec.k()).map(|_| rng.gen_range(0..2u8)).collect();
            let cw = bch_encode(&info, &spec).unwrap();
            assert_eq!(cw[spec.k()..], parity_oracle(&info, &spec));
        }
    }

    #[test]
    fn encode_is_linear() {
        let (spec, _) = bch_15_5_3();
        assert_eq!(bch_encode(&[0; 5], &spec).unwrap(), vec![0; 15]);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a: Vec<u8> = (0..5).map(|_| rng.gen_range(0..2u8)).collect();
            let b: Vec<u8> = (0..5).map(|_| rng.gen_range(0..2u8)).collect();
            let ab: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
            let ca = bch_encode(&a, &spec).unwrap();
            let cb = bch_encode(&b, &spec).unwrap();
            let cab = bch_encode(&ab, &spec).unwrap();
            let xor: Vec<u8> = ca.iter().zip(&cb).map(|(x, y)| x ^ y).collect();
            assert_eq!(cab, xor);
        }
    }

    #[test]
    fn encode_length_mismatch() {
        let (spec, _) = bch_15_5_3();
        assert!(matches!(
            bch_encode(&[0; 4], &spec),
            Err(BchError::LengthMismatch { expected: 5, got: 4 })
        ));
    }

    #[test]
    fn roundtrip_and_zero_flip_count() {
        let (spec, tbl) = bch_15_5_3();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let info: Vec<u8> = (0..5).map(|_| rng.gen_range(0..2u8)).collect();
            let cw = bch_encode(&info, &spec).unwrap();
            match bdd_decode(&cw, &spec, &tbl).unwrap() {
                BddOutcome::Corrected {
                    codeword,
                    num_flips,
                } => {
                    assert_eq!(codeword, cw);
                    assert_eq!(num_flips, 0);
                }
                BddOutcome::Failure => panic!("clean codeword failed"),
            }
        }
    }

    #[test]
    fn corrects_exactly_t_flips() {
        let (spec, tbl) = bch_15_5_3();
        let info = [1, 0, 1, 1, 0];
        let cw = bch_encode(&info, &spec).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let mut word = cw.clone();
            let mut pos = std::collections::HashSet::new();
            while pos.len() < 3 {
                pos.insert(rng.gen_range(0..15));
            }
            for &p in &pos {
                word[p] ^= 1;
            }
            match bdd_decode(&word, &spec, &tbl).unwrap() {
                BddOutcome::Corrected {
                    codeword,
                    num_flips,
                } => {
                    assert_eq!(codeword, cw);
                    assert_eq!(num_flips, 3);
                }
                BddOutcome::Failure => panic!("t flips must be correctable"),
            }
        }
    }

    #[test]
    fn exhaustive_patterns_within_t() {
        // All C(15,≤3) = 576 patterns for (15,5,3) and C(31,≤2) = 497 for
        // (31,21,2) recover the transmitted codeword.
        exhaustive_check(15, 5, 3);
        exhaustive_check(31, 21, 2);
    }

    fn exhaustive_check(n: usize, k: usize, t: usize) {
        let (spec, tbl) = BchSpec::from_triple(n, k, t).unwrap();
        let mut info = vec![0u8; k];
        for (i, b) in info.iter_mut().enumerate() {
            *b = (i % 2) as u8;
        }
        let cw = bch_encode(&info, &spec).unwrap();
        let mut scratch = BddScratch::default();
        let mut patterns: Vec<Vec<usize>> = vec![vec![]];
        for w in 1..=t {
            patterns.extend(combinations(n, w));
        }
        for pat in patterns {
            let mut word = cw.clone();
            for &p in &pat {
                word[p] ^= 1;
            }
            match bdd_decode_in_place(&mut word, &spec, &tbl, &mut scratch).unwrap() {
                BddStatus::Corrected { num_flips } => {
                    assert_eq!(word, cw);
                    assert_eq!(num_flips, pat.len());
                }
                BddStatus::Failure => panic!("pattern {pat:?} not corrected"),
            }
        }
    }

    fn combinations(n: usize, w: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..w).collect();
        loop {
            out.push(idx.clone());
            let mut i = w;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if idx[i] != i + n - w {
                    break;
                }
            }
            idx[i] += 1;
            for j in i + 1..w {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    #[test]
    fn shortening_consistency() {
        // Decoding the shortened word equals decoding the zero-padded native
        // word, discounting native corrections that touch a shortened
        // position.
        let (short_spec, tbl) = BchSpec::from_triple(12, 2, 3).unwrap(); // (15,5,3) shortened by 3
        let (native_spec, _) = BchSpec::from_triple(15, 5, 3).unwrap();
        assert_eq!(short_spec.shorten(), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..500 {
            let word: Vec<u8> = (0..12).map(|_| rng.gen_range(0..2u8)).collect();
            let mut padded = vec![0u8; 3];
            padded.extend_from_slice(&word);
            let short_out = bdd_decode(&word, &short_spec, &tbl).unwrap();
            let native_out = bdd_decode(&padded, &native_spec, &tbl).unwrap();
            let native_equiv = match native_out {
                BddOutcome::Corrected {
                    codeword,
                    num_flips,
                } if codeword[..3] == [0, 0, 0] => BddOutcome::Corrected {
                    codeword: codeword[3..].to_vec(),
                    num_flips,
                },
                _ => BddOutcome::Failure,
            };
            assert_eq!(short_out, native_equiv);
        }
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let (spec, tbl) = bch_15_5_3();
        assert!(bdd_decode(&[0; 14], &spec, &tbl).is_err());
    }
}
