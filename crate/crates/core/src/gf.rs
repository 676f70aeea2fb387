//! GF(2^m) arithmetic over log/antilog tables.
//!
//! A [`GfTable`] fixes the field once (extension degree and primitive
//! polynomial) and every operation is a table lookup afterwards. Elements are
//! stored in polynomial basis as integers below `2^m`; the primitive element
//! α is `2` (the polynomial `x`).

use thiserror::Error;

/// Errors raised while constructing a field table.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    /// Extension degree outside the supported 2..=16 range.
    #[error("field degree m={0} out of range (2..=16)")]
    DegreeOutOfRange(u32),
    /// The supplied polynomial does not have degree m or is not primitive.
    #[error("polynomial {poly:#x} is not primitive for GF(2^{m})")]
    NotPrimitive { m: u32, poly: u32 },
}

/// GF(2^m) log/antilog tables under a fixed primitive polynomial.
#[derive(Debug, Clone)]
pub struct GfTable {
    m: u32,
    primitive_poly: u32,
    /// `log_table[x]` = discrete log of nonzero x (undefined 0 entry stays 0).
    log_table: Vec<u32>,
    /// `antilog_table[i]` = α^i for i in 0..2*(2^m − 1); doubled so that
    /// products of logs never need an explicit modulo.
    antilog_table: Vec<u32>,
}

impl GfTable {
    /// Builds GF(2^m) under the lexicographically smallest primitive
    /// polynomial of degree m.
    pub fn new(m: u32) -> Result<Self, GfError> {
        let poly = smallest_primitive_poly(m)?;
        Self::with_poly(m, poly)
    }

    /// Builds GF(2^m) under an explicit primitive polynomial (bitmask with
    /// the degree-m bit set).
    pub fn with_poly(m: u32, poly: u32) -> Result<Self, GfError> {
        if !(2..=16).contains(&m) {
            return Err(GfError::DegreeOutOfRange(m));
        }
        let order = (1u32 << m) - 1;
        if poly >> m != 1 {
            return Err(GfError::NotPrimitive { m, poly });
        }
        let mut log_table = vec![0u32; 1 << m];
        let mut antilog_table = vec![0u32; 2 * order as usize];
        let mut x = 1u32;
        for i in 0..order {
            if x == 1 && i > 0 {
                // α has period shorter than 2^m − 1: not primitive.
                return Err(GfError::NotPrimitive { m, poly });
            }
            antilog_table[i as usize] = x;
            antilog_table[(i + order) as usize] = x;
            log_table[x as usize] = i;
            x <<= 1;
            if x >> m == 1 {
                x ^= poly;
            }
        }
        if x != 1 {
            return Err(GfError::NotPrimitive { m, poly });
        }
        Ok(Self {
            m,
            primitive_poly: poly,
            log_table,
            antilog_table,
        })
    }

    /// Extension degree m.
    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    /// The primitive polynomial as a bitmask.
    #[inline]
    pub fn primitive_poly(&self) -> u32 {
        self.primitive_poly
    }

    /// Multiplicative group order 2^m − 1.
    #[inline]
    pub fn order(&self) -> u32 {
        (1 << self.m) - 1
    }

    /// Discrete log of a nonzero element.
    #[inline]
    pub fn log(&self, x: u32) -> u32 {
        debug_assert!(x != 0 && x < (1 << self.m));
        self.log_table[x as usize]
    }

    /// α^i, with i reduced mod 2^m − 1.
    #[inline]
    pub fn alpha_pow(&self, i: u32) -> u32 {
        let order = self.order();
        if i < 2 * order {
            self.antilog_table[i as usize]
        } else {
            self.antilog_table[(i % order) as usize]
        }
    }

    /// Product in GF(2^m). Total: `mul(a, 0) = 0`.
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.antilog_table[(self.log_table[a as usize] + self.log_table[b as usize]) as usize]
    }

    /// Multiplicative inverse of a nonzero element.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        let order = self.order();
        self.antilog_table[(order - self.log_table[a as usize]) as usize]
    }

    /// a / b for nonzero b.
    #[inline]
    pub fn div(&self, a: u32, b: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        self.mul(a, self.inv(b))
    }

    /// a^e for e ≥ 0.
    pub fn pow(&self, a: u32, e: u32) -> u32 {
        if a == 0 {
            return u32::from(e == 0);
        }
        let order = self.order() as u64;
        let l = (self.log_table[a as usize] as u64 * e as u64 % order) as u32;
        self.antilog_table[l as usize]
    }
}

/// Product in GF(2^m) under the given table (free-function form).
#[inline]
pub fn gf_mul(a: u32, b: u32, tbl: &GfTable) -> u32 {
    tbl.mul(a, b)
}

/// Lexicographically smallest primitive polynomial of degree m, found by
/// checking that `x` generates the full multiplicative group.
pub fn smallest_primitive_poly(m: u32) -> Result<u32, GfError> {
    if !(2..=16).contains(&m) {
        return Err(GfError::DegreeOutOfRange(m));
    }
    let lo = 1u32 << m;
    let hi = 1u32 << (m + 1);
    // Constant term must be 1 or x divides the polynomial.
    for poly in (lo | 1..hi).step_by(2) {
        if is_primitive(m, poly) {
            return Ok(poly);
        }
    }
    unreachable!("a primitive polynomial exists for every m");
}

fn is_primitive(m: u32, poly: u32) -> bool {
    let order = (1u32 << m) - 1;
    let mut x = 1u32;
    for i in 1..=order {
        x <<= 1;
        if x >> m == 1 {
            x ^= poly;
        }
        if x == 1 {
            return i == order;
        }
    }
    false
}
