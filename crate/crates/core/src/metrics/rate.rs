use crate::error::{Error, Result};

/// Least-squares fit `log v = slope · log n + intercept`.
pub fn fit_rate(ns: &[f64], values: &[f64]) -> Result<(f64, f64)> {
    if ns.len() != values.len() {
        return Err(Error::Dimension {
            expected: ns.len(),
            actual: values.len(),
        });
    }
    if ns.len() < 3 {
        return Err(Error::Domain(format!("rate fit needs at least 3 points, got {}", ns.len())));
    }
    if let Some(bad) = ns.iter().chain(values).find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::Domain(format!("rate fit needs positive finite values, got {bad}")));
    }
    let xs: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("rate fit needs at least two distinct n".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Median of a nonempty slice; the mean of the middle pair for even length.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    })
}

fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let rank = 0.5 * (start + end - 1) as f64;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() || a.len() < 2 {
        return None;
    }
    let (ra, rb) = (ranks(a), ranks(b));
    let n = a.len() as f64;
    let (ma, mb) = (ra.iter().sum::<f64>() / n, rb.iter().sum::<f64>() / n);
    let mut cov = 0.0;
    let (mut va, mut vb) = (0.0, 0.0);
    for (x, y) in ra.iter().zip(&rb) {
        cov += (x - ma) * (y - mb);
        va += (x - ma).powi(2);
        vb += (y - mb).powi(2);
    }
    if va == 0.0 || vb == 0.0 {
        return None;
    }
    Some(cov / (va * vb).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    const NS: [f64; 5] = [10.0, 20.0, 50.0, 100.0, 1000.0];

    fn slope_of(f: impl Fn(f64) -> f64) -> f64 {
        let v: Vec<f64> = NS.iter().map(|&n| f(n)).collect();
        fit_rate(&NS, &v).unwrap().0
    }

    #[test]
    fn exact_power_laws() {
        assert!((slope_of(|n| 3.0 / n) + 1.0).abs() < 1e-9);
        assert!((slope_of(|n| 0.7 / n.sqrt()) + 0.5).abs() < 1e-9);
        assert!(slope_of(|_| 4.2).abs() < 1e-9);
    }

    #[test]
    fn too_few_points_or_nonpositive() {
        assert!(matches!(fit_rate(&[10.0], &[1.0]), Err(Error::Domain(_))));
        assert!(matches!(fit_rate(&[1.0, 2.0, 3.0], &[1.0, 0.0, 1.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(&[]), None);
    }

    #[test]
    fn rank_correlation() {
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 25.0]), Some(1.0));
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]), Some(-1.0));
        assert_eq!(spearman(&[1.0, 1.0], &[1.0, 2.0]), None);
    }
}
