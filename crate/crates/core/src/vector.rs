//! Small dense-vector helpers shared by the numeric modules.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Cosine similarity clamped to `[-1, 1]`. A zero vector is similar to
/// nothing, so the result is `0.0` when either side has zero norm.
pub fn cosine_similarity(a: &[f64], b: &[f64]) -> f64 {
    let na = norm(a);
    let nb = norm(b);
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot(a, b) / (na * nb)).clamp(-1.0, 1.0)
}

/// `1 - cosine_similarity`, in `[0, 2]`.
pub fn cosine_distance(a: &[f64], b: &[f64]) -> f64 {
    1.0 - cosine_similarity(a, b)
}

pub fn add_assign(acc: &mut [f64], v: &[f64]) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a += x;
    }
}

pub fn scale(v: &mut [f64], factor: f64) {
    for x in v.iter_mut() {
        *x *= factor;
    }
}

/// Mean of the given rows; `None` for an empty iterator.
pub fn mean<'a, I>(rows: I, dim: usize) -> Option<Vec<f64>>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let mut acc = vec![0.0; dim];
    let mut n = 0usize;
    for row in rows {
        add_assign(&mut acc, row);
        n += 1;
    }
    if n == 0 {
        return None;
    }
    scale(&mut acc, 1.0 / n as f64);
    Some(acc)
}

pub fn is_zero(v: &[f64]) -> bool {
    v.iter().all(|&x| x == 0.0)
}
