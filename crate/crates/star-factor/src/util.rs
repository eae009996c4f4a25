//! Small numeric helpers shared by the solver stages.

/// Largest `k` with `k*k <= d`, in integer arithmetic.
pub fn isqrt(d: usize) -> usize {
    if d < 2 {
        return d;
    }
    let mut k = (d as f64).sqrt() as usize;
    while k * k > d {
        k -= 1;
    }
    while (k + 1) * (k + 1) <= d {
        k += 1;
    }
    k
}

/// Smallest `k` with `k*k >= d`.
pub fn ceil_sqrt(d: usize) -> usize {
    let k = isqrt(d);
    if k * k == d {
        k
    } else {
        k + 1
    }
}

/// Rounds to 12 significant decimal digits. Degree thresholds are compared
/// through this to keep borderline floating-point values stable.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let exp = x.abs().log10().floor();
    let scale = 10f64.powf(11.0 - exp);
    if !scale.is_finite() || scale == 0.0 {
        return x;
    }
    (x * scale).round() / scale
}

/// `sqrt(ln d)`, clamped below at 0.1 so probabilities stay positive for
/// degenerate degrees (`ln 1 = 0`).
pub fn sqrt_log(d: usize) -> f64 {
    ((d.max(1) as f64).ln()).sqrt().max(0.1)
}

/// `d^e` rounded to 12 significant digits (exact for integer exponents at
/// representable scales).
pub fn pow_f(d: usize, e: f64) -> f64 {
    round12((d as f64).powf(e))
}

/// Integer comparison `a >= b` with `b` rounded to 12 significant digits.
pub fn ge12(a: usize, b: f64) -> bool {
    (a as f64) >= round12(b)
}

/// SplitMix64 step; used to derive independent per-stage RNG seeds.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
