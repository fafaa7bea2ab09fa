/// LU with partial pivoting on a row-major n×n matrix (overwritten).
/// Returns (sign, ln|det|); sign is 0 for a singular matrix.
pub fn lu_log_det(m: &mut [f64], n: usize) -> (f64, f64) {
    assert_eq!(m.len(), n * n);
    let mut sign = 1.0;
    let mut log_abs = 0.0;
    for k in 0..n {
        let mut piv = k;
        let mut best = m[k * n + k].abs();
        for i in k + 1..n {
            let v = m[i * n + k].abs();
            if v > best {
                best = v;
                piv = i;
            }
        }
        if best == 0.0 {
            return (0.0, f64::NEG_INFINITY);
        }
        if piv != k {
            for j in 0..n {
                m.swap(k * n + j, piv * n + j);
            }
            sign = -sign;
        }
        let d = m[k * n + k];
        if d < 0.0 {
            sign = -sign;
        }
        log_abs += d.abs().ln();
        for i in k + 1..n {
            let f = m[i * n + k] / d;
            if f != 0.0 {
                for j in k + 1..n {
                    m[i * n + j] -= f * m[k * n + j];
                }
            }
        }
    }
    (sign, log_abs)
}

pub fn dense_det(m: &[f64], n: usize) -> f64 {
    let mut a = m.to_vec();
    let (s, l) = lu_log_det(&mut a, n);
    s * l.exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_determinants() {
        assert!((dense_det(&[2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0], 3) - 4.0).abs() < 1e-14);
        assert!((dense_det(&[0.0, 1.0, 1.0, 0.0], 2) + 1.0).abs() < 1e-15);
        assert_eq!(dense_det(&[1.0, 2.0, 2.0, 4.0], 2), 0.0);
    }
}
