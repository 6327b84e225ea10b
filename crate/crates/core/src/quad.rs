//! Adaptive Simpson quadrature.
//!
//! Used for the mean-integrated fBm double integral (as the definitional
//! cross-check), and by tests as an independent oracle for survival
//! functions and windowed constants.

use crate::{Error, Real, Result};

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Returns the estimate and the achieved error bound. Errors out if the
/// recursion bottoms out before reaching `tol`.
pub fn adaptive_simpson<T: Real>(
    f: &dyn Fn(T) -> T,
    a: T,
    b: T,
    tol: T,
) -> Result<(T, T)> {
    if !(b >= a) || !tol.is_finite() || tol <= T::zero() {
        return Err(Error::InvalidParameter(
            "adaptive_simpson requires b >= a and tol > 0".into(),
        ));
    }
    if a == b {
        return Ok((T::zero(), T::zero()));
    }
    let m = (a + b) * T::half();
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(a, b, fa, fm, fb);
    let mut achieved = T::zero();
    let value = recurse(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH, &mut achieved)?;
    Ok((value, achieved))
}

const MAX_DEPTH: usize = 48;

fn simpson<T: Real>(a: T, b: T, fa: T, fm: T, fb: T) -> T {
    (b - a) / T::of(6.0) * (fa + T::of(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<T: Real>(
    f: &dyn Fn(T) -> T,
    a: T,
    b: T,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    tol: T,
    depth: usize,
    achieved: &mut T,
) -> Result<T> {
    let m = (a + b) * T::half();
    let lm = (a + m) * T::half();
    let rm = (m + b) * T::half();
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    let fifteen = T::of(15.0);
    if delta.abs() <= fifteen * tol || (b - a) < T::epsilon() * (a.abs() + b.abs()) {
        if depth == 0 && delta.abs() > fifteen * tol {
            return Err(Error::QuadratureNonConvergence {
                achieved: (delta / fifteen).abs().as_f64(),
                requested: tol.as_f64(),
            });
        }
        *achieved = *achieved + delta.abs() / fifteen;
        return Ok(left + right + delta / fifteen);
    }
    if depth == 0 {
        return Err(Error::QuadratureNonConvergence {
            achieved: (delta / fifteen).abs().as_f64(),
            requested: tol.as_f64(),
        });
    }
    let half_tol = tol * T::half();
    let l = recurse(f, a, m, fa, flm, fm, left, half_tol, depth - 1, achieved)?;
    let r = recurse(f, m, b, fm, frm, fb, right, half_tol, depth - 1, achieved)?;
    Ok(l + r)
}
