use crate::special::normal_cdf;
use crate::Real;

/// Known exact Pickands constants: `H_1 = 1` and `H_2 = 1/sqrt(pi)`.
pub fn pickands_anchor<T: Real>(alpha: T) -> Option<T> {
    let tol = T::of(1e-12);
    if (alpha - T::one()).abs() <= tol {
        Some(T::one())
    } else if (alpha - T::two()).abs() <= tol {
        Some(T::PI().sqrt().recip())
    } else {
        None
    }
}

/// Derived closed form of `P^d_{2,1}`:
/// `Phi(d/sqrt2) + exp(-d^2/4) / (d sqrt(pi))`.
pub fn piterbarg_p21_derived<T: Real>(d: T) -> T {
    normal_cdf(d / T::SQRT_2()) + (-d * d / T::of(4.0)).exp() / (d * T::PI().sqrt())
}
