use crate::densela::{matmul, DiagBlock, Mat, MatmulCounter};
use crate::error::Result;
use crate::scalar::Scalar;

/// Unscaled (quasi-)triangular matrix whose exponential is being squared up,
/// together with its diagonal block structure.
#[derive(Clone, Debug)]
pub struct TriangularDiag<T> {
    pub t: Mat<T>,
    pub blocks: Vec<DiagBlock>,
}

impl<T: Scalar> TriangularDiag<T> {
    pub fn detect(t: &Mat<T>) -> Option<Self> {
        t.quasi_triangular_blocks().map(|blocks| Self { t: t.clone(), blocks })
    }

    /// Overwrite the diagonal blocks of `x ~ e^(2^p T)` with their exact values,
    /// and the superdiagonal entries linking two consecutive 1x1 blocks.
    pub fn replace(&self, x: &mut Mat<T>, p: i64) {
        let t = &self.t;
        let sc = |z: T| mul_pow2(z, p);
        for blk in &self.blocks {
            match *blk {
                DiagBlock::One(i) => x[(i, i)] = sc(t[(i, i)]).exp(),
                DiagBlock::Two(i) => {
                    let b = [sc(t[(i, i)]), sc(t[(i + 1, i)]), sc(t[(i, i + 1)]), sc(t[(i + 1, i + 1)])];
                    if let Some(e) = T::exp_bump(b) {
                        x[(i, i)] = e[0];
                        x[(i + 1, i)] = e[1];
                        x[(i, i + 1)] = e[2];
                        x[(i + 1, i + 1)] = e[3];
                    }
                }
            }
        }
        for w in self.blocks.windows(2) {
            if let [DiagBlock::One(i), DiagBlock::One(j)] = *w {
                let (l1, l2) = (sc(t[(i, i)]), sc(t[(j, j)]));
                x[(i, j)] = sc(t[(i, j)]) * divided_exp(l1, l2);
            }
        }
    }
}

/// `(e^l2 - e^l1) / (l2 - l1)`, evaluated as `e^((l1+l2)/2) sinch((l2-l1)/2)`.
fn divided_exp<T: Scalar>(l1: T, l2: T) -> T {
    let half = T::from_real(0.5);
    let mid = (l1 + l2) * half;
    let delta = (l2 - l1) * half;
    let sinch = if delta.modulus() < 1e-4 {
        let d2 = delta * delta;
        T::one() + d2 * (T::from_real(1.0 / 6.0) + d2 * T::from_real(1.0 / 120.0))
    } else {
        delta.sinh() / delta
    };
    let v = mid.exp() * sinch;
    if v.is_finite() {
        v
    } else {
        (l2.exp() - l1.exp()) / (l2 - l1)
    }
}

fn mul_pow2<T: Scalar>(mut z: T, mut p: i64) -> T {
    while p != 0 {
        let step = p.clamp(-1000, 1000);
        z = z.mul_real(crate::scalar::pow2(step as i32));
        p -= step;
    }
    z
}

/// Which diagonal blocks get exact replacement during squaring.
#[derive(Clone, Debug)]
pub struct ReplacementContext<T> {
    pub a: Option<TriangularDiag<T>>,
    pub b: Option<TriangularDiag<T>>,
}

impl<T> ReplacementContext<T> {
    pub fn none() -> Self {
        Self { a: None, b: None }
    }
}

#[derive(Clone, Debug)]
pub struct SquaringOutput<T> {
    pub x: Mat<T>,
    pub y: Mat<T>,
    pub d: Mat<T>,
    pub overflow: bool,
}

/// `D <- X D + D Y`, then `X <- X^2`, `Y <- Y^2`, `s` times. Triangular
/// iterates listed in `ctx` get their diagonals recomputed from the unscaled
/// matrices after every squaring and once before the first.
pub fn squaring_phase<T: Scalar>(
    x0: Mat<T>,
    y0: Mat<T>,
    d0: Mat<T>,
    s: u32,
    ctx: &ReplacementContext<T>,
    counter: &MatmulCounter,
) -> Result<SquaringOutput<T>> {
    let (mut x, mut y, mut d) = (x0, y0, d0);
    let s = s as i64;
    let replace = |x: &mut Mat<T>, y: &mut Mat<T>, p: i64| {
        if let Some(ta) = &ctx.a {
            ta.replace(x, p);
        }
        if let Some(tb) = &ctx.b {
            tb.replace(y, p);
        }
    };
    if s > 0 {
        replace(&mut x, &mut y, -s);
    }
    for k in 1..=s {
        d = &matmul(&x, &d, counter)? + &matmul(&d, &y, counter)?;
        x = matmul(&x, &x, counter)?;
        y = matmul(&y, &y, counter)?;
        replace(&mut x, &mut y, k - s);
    }
    let overflow = !(x.is_finite() && y.is_finite() && d.is_finite());
    Ok(SquaringOutput { x, y, d, overflow })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_chain() {
        let ctr = MatmulCounter::new();
        let two = Mat::scalar(2.0);
        let out = squaring_phase(two.clone(), two, Mat::scalar(1.0), 2, &ReplacementContext::none(), &ctr).unwrap();
        assert_eq!((out.x[(0, 0)], out.y[(0, 0)], out.d[(0, 0)]), (16.0, 16.0, 32.0));
        assert_eq!(ctr.get(), 8);
    }

    #[test]
    fn zero_steps_is_identity_map() {
        let ctr = MatmulCounter::new();
        let x = Mat::from_rows(&[[1.0, 2.0], [3.0, 4.0]]);
        let out = squaring_phase(x.clone(), x.clone(), x.clone(), 0, &ReplacementContext::none(), &ctr).unwrap();
        assert_eq!((out.x, out.y, out.d), (x.clone(), x.clone(), x));
    }

    #[test]
    fn divided_exp_branches_agree() {
        let (a, b) = (0.3, 0.3 + 2e-4);
        let direct = (f64::exp(b) - f64::exp(a)) / (b - a);
        assert!((divided_exp(a, b) - direct).abs() < 1e-11);
        let close = divided_exp(0.3, 0.3 + 1e-9);
        assert!((close - (0.3f64 + 5e-10).exp()).abs() < 1e-15);
        let far = divided_exp(-800.0, 700.0);
        assert!(far.is_finite() && far > 0.0);
    }
}
