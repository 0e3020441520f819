/// Exponential of a real 2x2 matrix in closed form.
///
/// With `mu = (a+d)/2` and `delta^2 = ((a-d)/2)^2 + bc`,
/// `e^M = e^mu [cosh(delta) I + sinh(delta)/delta (M - mu I)]`, where for
/// `delta^2 < 0` the hyperbolic functions become `cos` and `sin(x)/x` of
/// `sqrt(-delta^2)`. Near `delta = 0` a truncated series in `delta^2` is used.
pub fn exp2x2(m: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let [[a, b], [c, d]] = m;
    let mu = 0.5 * (a + d);
    let p = 0.5 * (a - d);
    let delta2 = p * p + b * c;
    let (ch, sh) = cosh_sinch(delta2);
    let e = mu.exp();
    [[e * (ch + sh * p), e * sh * b], [e * sh * c, e * (ch - sh * p)]]
}

/// `(cosh(sqrt(x)), sinh(sqrt(x))/sqrt(x))` continued analytically to `x < 0`.
fn cosh_sinch(x: f64) -> (f64, f64) {
    let r = x.abs().sqrt();
    if r < 1e-4 {
        let ch = 1.0 + x * (1.0 / 2.0 + x * (1.0 / 24.0 + x / 720.0));
        let sh = 1.0 + x * (1.0 / 6.0 + x * (1.0 / 120.0 + x / 5040.0));
        (ch, sh)
    } else if x > 0.0 {
        (r.cosh(), r.sinh() / r)
    } else {
        (r.cos(), r.sin() / r)
    }
}
