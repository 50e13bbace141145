//! Symmetric tridiagonal eigenproblems with constant off-diagonal, solved by
//! Sturm-sequence bisection and inverse iteration.

/// `T = tridiag(e, d_i, e)`.
#[derive(Clone, Debug)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: f64,
}

impl Tridiagonal {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    fn pivmin(&self) -> f64 {
        f64::MIN_POSITIVE * (self.off * self.off).max(1.0)
    }

    /// Number of eigenvalues strictly below `lambda`.
    pub fn count_below(&self, lambda: f64) -> usize {
        let e2 = self.off * self.off;
        let pivmin = self.pivmin();
        let mut count = 0;
        let mut q = 1.0;
        for (i, &d) in self.diag.iter().enumerate() {
            q = if i == 0 { d - lambda } else { d - lambda - e2 / q };
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (zero based) by bisection to a relative
    /// width of about one ulp.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        assert!(k < self.len(), "eigenvalue index out of range");
        let finite_min = self.diag.iter().cloned().filter(|d| d.is_finite()).fold(f64::INFINITY, f64::min);
        let mut lo = finite_min - 2.0 * self.off.abs() - 1.0;
        let mut step = 1.0f64.max(finite_min.abs());
        let mut hi = lo + step;
        while self.count_below(hi) <= k {
            lo = hi;
            step *= 2.0;
            hi = lo + step;
        }
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 4.0 * f64::EPSILON * mid.abs().max(1e-300) {
                return mid;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }

    /// Unit eigenvector for an eigenvalue `lambda` already known to full
    /// precision.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.len();
        let scale = lambda.abs().max(self.off.abs()).max(1.0);
        let shift = lambda + 64.0 * f64::EPSILON * scale;
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64).collect();
        for _ in 0..3 {
            x = self.solve_shifted(shift, &x);
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= norm);
        }
        x
    }

    /// Solves `(T - shift) y = b` by elimination without pivoting; tiny
    /// pivots are nudged, which is harmless for inverse iteration.
    fn solve_shifted(&self, shift: f64, b: &[f64]) -> Vec<f64> {
        let n = self.len();
        let e = self.off;
        let tiny = self.pivmin().max(1e-300);
        let mut c = vec![0.0; n];
        let mut y = vec![0.0; n];
        let mut piv = self.diag[0] - shift;
        if piv.abs() < tiny {
            piv = tiny;
        }
        y[0] = b[0] / piv;
        for i in 1..n {
            c[i - 1] = e / piv;
            piv = self.diag[i] - shift - e * c[i - 1];
            if piv.abs() < tiny {
                piv = tiny;
            }
            y[i] = (b[i] - e * y[i - 1]) / piv;
        }
        for i in (0..n - 1).rev() {
            y[i] -= c[i] * y[i + 1];
        }
        // renormalize early to keep later iterations finite
        let m = y.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if m.is_finite() && m > 0.0 {
            y.iter_mut().for_each(|v| *v /= m);
        }
        y
    }
}

/// Sign changes along a grid vector, ignoring entries below `1e-8` of its
/// largest magnitude.
pub fn count_nodes(v: &[f64]) -> usize {
    let max = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let floor = 1e-8 * max;
    let mut last = 0.0f64;
    let mut count = 0;
    for &x in v {
        if x.abs() <= floor {
            continue;
        }
        if last != 0.0 && (x > 0.0) != (last > 0.0) {
            count += 1;
        }
        last = x;
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_laplacian() {
        // eigenvalues of tridiag(-1, 2, -1) of size n: 2 - 2 cos(k pi / (n + 1))
        let n = 50;
        let t = Tridiagonal { diag: vec![2.0; n], off: -1.0 };
        for k in 0..5 {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((t.eigenvalue(k) - exact).abs() < 1e-14);
            let v = t.eigenvector(t.eigenvalue(k));
            assert_eq!(count_nodes(&v), k);
        }
        assert_eq!(t.count_below(0.0), 0);
        assert_eq!(t.count_below(4.0), n);
    }

    #[test]
    fn huge_diagonal_entries() {
        let mut diag = vec![2.0; 100];
        diag[0] = 1e250;
        diag[99] = f64::INFINITY;
        let t = Tridiagonal { diag, off: -1.0 };
        let e0 = t.eigenvalue(0);
        assert!(e0 > 0.0 && e0 < 0.01);
        assert!(t.eigenvector(e0).iter().all(|v| v.is_finite()));
    }
}
