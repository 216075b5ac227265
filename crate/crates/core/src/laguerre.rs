//! Generalized Laguerre polynomials by upward recurrence in the degree.

/// `L_n^{(order)}(x)` for `n = 0..len`.
///
/// Uses `(n+1) L_{n+1} = (2n + 1 + order − x) L_n − (n + order) L_{n−1}`.
pub fn laguerre_row(order: usize, x: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return out;
    }
    let k = order as f64;
    out.push(1.0);
    if len == 1 {
        return out;
    }
    out.push(1.0 + k - x);
    for n in 1..len - 1 {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0 + k - x) * out[n] - (nf + k) * out[n - 1]) / (nf + 1.0);
        out.push(next);
    }
    out
}

/// `ln(j!)` for `j = 0..len`.
pub fn ln_factorials(len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut acc = 0.0;
    for j in 0..len {
        if j > 1 {
            acc += (j as f64).ln();
        }
        out.push(acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    // Explicit sum L_n^{(k)}(x) = Σ_i (−1)^i C(n+k, n−i) x^i / i!
    fn laguerre_explicit(n: usize, k: usize, x: f64) -> f64 {
        let mut total = 0.0;
        for i in 0..=n {
            let mut binom = 1.0;
            for j in 0..(n - i) {
                binom *= (n + k - j) as f64 / (j + 1) as f64;
            }
            let mut term = binom;
            for j in 1..=i {
                term *= x / j as f64;
            }
            total += if i % 2 == 0 { term } else { -term };
        }
        total
    }

    #[test]
    fn low_degree_closed_forms() {
        let x = 0.7;
        let k = 3.0;
        let row = laguerre_row(3, x, 3);
        assert_eq!(row[0], 1.0);
        assert!((row[1] - (1.0 + k - x)).abs() < 1e-15);
        let l2 = 0.5 * (x * x - 2.0 * (k + 2.0) * x + (k + 1.0) * (k + 2.0));
        assert!((row[2] - l2).abs() < 1e-14);
    }

    #[test]
    fn matches_explicit_sum() {
        for k in [0, 1, 4, 9] {
            for x in [0.0, 0.5, 2.0, 4.0] {
                let row = laguerre_row(k, x, 16);
                for (n, v) in row.iter().enumerate() {
                    let e = laguerre_explicit(n, k, x);
                    assert!((v - e).abs() <= 1e-9 * e.abs().max(1.0), "n={n} k={k} x={x}");
                }
            }
        }
    }

    #[test]
    fn value_at_zero_is_binomial() {
        let row = laguerre_row(2, 0.0, 6);
        // L_n^{(2)}(0) = C(n+2, n)
        for (n, v) in row.iter().enumerate() {
            assert_eq!(*v, ((n + 1) * (n + 2) / 2) as f64);
        }
    }

    #[test]
    fn factorials() {
        let f = ln_factorials(6);
        assert_eq!(f[0], 0.0);
        assert_eq!(f[1], 0.0);
        assert!((f[5] - 120f64.ln()).abs() < 1e-14);
        assert!(laguerre_row(0, 1.0, 0).is_empty());
    }
}
