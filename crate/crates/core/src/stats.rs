//! Order statistics used when summarising trials.

/// Linearly interpolated sample quantile (type 7). NaN for an empty sample.
pub fn quantile(xs: &[f64], q: f64) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
}

pub fn median(xs: &[f64]) -> f64 {
    quantile(xs, 0.5)
}

/// `(q25, q75)`
pub fn quartiles(xs: &[f64]) -> (f64, f64) {
    (quantile(xs, 0.25), quantile(xs, 0.75))
}

pub fn iqr(xs: &[f64]) -> f64 {
    let (a, b) = quartiles(xs);
    b - a
}

/// Length of the intersection of the two interquartile ranges; negative when
/// they are disjoint.
pub fn iqr_overlap(a: &[f64], b: &[f64]) -> f64 {
    let (a0, a1) = quartiles(a);
    let (b0, b1) = quartiles(b);
    a1.min(b1) - a0.max(b0)
}
