//! Multiprecision evaluation with precision chosen from observed cancellation.

use rug::Float;

use crate::error::{Error, Result};

pub(crate) fn log2_abs(x: &Float) -> f64 {
    if x.is_zero() {
        f64::NEG_INFINITY
    } else {
        let (m, e) = x.to_f64_exp();
        m.abs().log2() + e as f64
    }
}

/// Below `2^F64_FLOOR` a result converts to zero in `f64`, so an absolute error under that
/// bound is as good as any relative one for callers that finish in `f64`.
pub(crate) const F64_FLOOR: f64 = -1100.0;

/// Calls `f(prec)`, which returns a value and `log2` of the largest summand that went into
/// it, raising `prec` until at least `bits` significant bits survive cancellation.
///
/// With `floor = Some(e)` the loop also stops once the absolute error is below `2^e`.
pub(crate) fn with_cancellation_guard(
    bits: u32,
    floor: Option<f64>,
    mut f: impl FnMut(u32) -> Result<(Float, f64)>,
) -> Result<Float> {
    let mut prec = bits + 64;
    for _ in 0..16 {
        let (v, maxlog) = f(prec)?;
        let abs_err_log2 = maxlog - prec as f64 + 16.0;
        if let Some(e) = floor {
            if abs_err_log2 < e && (v.is_zero() || log2_abs(&v) < e + 16.0) {
                return Ok(Float::with_val(prec, 0));
            }
        }
        if v.is_zero() {
            if maxlog == f64::NEG_INFINITY || prec > 1 << 16 {
                return Ok(v);
            }
            prec *= 2;
            continue;
        }
        let lost = (maxlog - log2_abs(&v)).max(0.0);
        if lost + bits as f64 + 16.0 <= prec as f64 {
            return Ok(v);
        }
        // When the result is mostly noise its magnitude says little about the true cancellation.
        let noisy = lost + 32.0 > prec as f64;
        let next = lost.ceil() as u32 + bits + 64;
        prec = if noisy { next.max(2 * prec) } else { next.max(prec + 64) };
    }
    Err(Error::Numeric("precision escalation did not converge".into()))
}
