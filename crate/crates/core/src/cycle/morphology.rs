// SPDX-License-Identifier: Apache-2.0

//! Shape descriptors for population traces.

/// Number of strict interior local extrema (sign changes of the discrete
/// derivative; flat runs are skipped).
pub fn interior_extrema(values: &[f64]) -> usize {
    let mut count = 0;
    let mut last_sign = 0i8;
    for w in values.windows(2) {
        let d = w[1] - w[0];
        let sign = if d > 0.0 {
            1
        } else if d < 0.0 {
            -1
        } else {
            0
        };
        if sign == 0 {
            continue;
        }
        if last_sign != 0 && sign != last_sign {
            count += 1;
        }
        last_sign = sign;
    }
    count
}

/// Rises to a single interior maximum and then falls.
pub fn is_single_hump(values: &[f64]) -> bool {
    let Some((imax, _)) = values.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)) else {
        return false;
    };
    imax > 0 && imax + 1 < values.len() && interior_extrema(values) == 1
}
