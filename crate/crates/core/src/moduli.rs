//! Dimension and stability bookkeeping for `M̄_{g,n}`.

/// `2g − 2 + n > 0`
pub fn is_stable(genus: u32, points: usize) -> bool {
    2 * genus as i64 - 2 + points as i64 > 0
}

/// `dim M̄_{g,n} = 3g − 3 + n`, negative for some unstable pairs.
pub fn dimension(genus: u32, points: usize) -> i64 {
    3 * genus as i64 - 3 + points as i64
}

/// All nonincreasing exponent vectors of length `points` summing to `total`.
pub fn exponent_multisets(total: u32, points: usize) -> Vec<Vec<u32>> {
    fn rec(remaining: u32, max_part: u32, slots: usize, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 0 {
            if remaining == 0 {
                out.push(acc.clone());
            }
            return;
        }
        // remaining must fit in `slots` parts of size ≤ max_part
        if remaining as u64 > max_part as u64 * slots as u64 {
            return;
        }
        for part in (0..=remaining.min(max_part)).rev() {
            acc.push(part);
            rec(remaining - part, part, slots - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, total, points, &mut Vec::with_capacity(points), &mut out);
    out
}

/// Exponent multisets `d` with `Σd = 3g − 3 + n`; empty when unstable.
pub fn psi_exponent_multisets(genus: u32, points: usize) -> Vec<Vec<u32>> {
    if !is_stable(genus, points) {
        return Vec::new();
    }
    exponent_multisets(dimension(genus, points) as u32, points)
}
