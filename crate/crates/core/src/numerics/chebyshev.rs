use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::Result;

/// Polynomial interpolant through Chebyshev points of the first kind on
/// `[a, b]`, evaluated with the barycentric formula.
#[derive(Debug, Clone, PartialEq)]
pub struct Chebyshev {
    a: f64,
    b: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    values: Vec<f64>,
}

impl Chebyshev {
    /// Interpolation nodes for `n` points on `[a, b]`.
    pub fn nodes(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|j| {
                let t = ((2 * j + 1) as f64 * PI / (2 * n) as f64).cos();
                0.5 * (a + b) + 0.5 * (b - a) * t
            })
            .collect()
    }

    /// Samples `f` at `n` Chebyshev points of `[a, b]`.
    pub fn fit<F>(a: f64, b: f64, n: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let nodes = Self::nodes(a, b, n);
        let values = nodes.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
        let weights = (0..n)
            .map(|j| {
                let w = ((2 * j + 1) as f64 * PI / (2 * n) as f64).sin();
                if j % 2 == 0 {
                    w
                } else {
                    -w
                }
            })
            .collect();
        Ok(Chebyshev {
            a,
            b,
            nodes,
            weights,
            values,
        })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((&xj, &wj), &fj) in self.nodes.iter().zip(&self.weights).zip(&self.values) {
            let d = x - xj;
            if d == 0.0 {
                return fj;
            }
            let c = wj / d;
            num += c * fj;
            den += c;
        }
        num / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_polynomials_and_smooth_functions() {
        let p = Chebyshev::fit(-1.0, 2.0, 6, |x| Ok(x * x * x - 2.0 * x + 1.0)).unwrap();
        for &x in &[-1.0, -0.3, 0.0, 0.77, 2.0] {
            assert!((p.eval(x) - (x * x * x - 2.0 * x + 1.0)).abs() < 1e-13);
        }
        let e = Chebyshev::fit(-0.2, 0.2, 12, |x| Ok(x.exp())).unwrap();
        for i in 0..=20 {
            let x = -0.2 + 0.02 * i as f64;
            assert!((e.eval(x) - x.exp()).abs() < 1e-15);
        }
    }
}
