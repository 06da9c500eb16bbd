//! Extended-precision arithmetic for quantities far below `f64` range.

use astro_float_num::{BigFloat, Consts, Radix, RoundingMode};

/// Working precision in bits.
pub(crate) const PRECISION: usize = 320;
const RM: RoundingMode = RoundingMode::ToEven;

/// A difference smaller than this many bits below its operands is rounding
/// noise from separately evaluated logarithms.
const NOISE_BITS: i32 = 32;

pub(crate) struct Precise {
    cc: Consts,
}

impl Precise {
    pub fn new() -> Self {
        Self { cc: Consts::new().expect("constant cache allocates") }
    }

    pub fn num(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, PRECISION)
    }

    pub fn ln(&mut self, x: &BigFloat) -> BigFloat {
        x.ln(PRECISION, RM, &mut self.cc)
    }

    pub fn exp(&mut self, x: &BigFloat) -> BigFloat {
        x.exp(PRECISION, RM, &mut self.cc)
    }

    /// Nearest `f64`; values below the subnormal range become `±0`.
    pub fn f64_of(&mut self, x: &BigFloat) -> f64 {
        if x.is_zero() {
            return 0.0;
        }
        if x.is_inf_pos() {
            return f64::INFINITY;
        }
        if x.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        if x.is_nan() {
            return f64::NAN;
        }
        let text = x.format(Radix::Dec, RM, &mut self.cc).expect("finite values format");
        text.parse::<f64>().expect("decimal formatting parses as f64")
    }
}

pub(crate) fn add(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.add(b, PRECISION, RM)
}

pub(crate) fn sub(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.sub(b, PRECISION, RM)
}

pub(crate) fn mul(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.mul(b, PRECISION, RM)
}

pub(crate) fn div(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.div(b, PRECISION, RM)
}

pub(crate) fn abs(a: &BigFloat) -> BigFloat {
    a.abs()
}

/// `a − b`, flushed to exactly zero when it is below the working precision
/// of the larger operand.
pub(crate) fn cancel(a: &BigFloat, b: &BigFloat) -> BigFloat {
    let d = sub(a, b);
    if d.is_zero() {
        return d;
    }
    let scale = if abs(a).cmp(&abs(b)).unwrap_or(0) >= 0 { a } else { b };
    match (d.exponent(), scale.exponent()) {
        (Some(ed), Some(es)) if ed < es - (PRECISION as i32 - NOISE_BITS) => BigFloat::new(PRECISION),
        _ => d,
    }
}
