//! Gaussian elimination over F_3.

fn neg3(c: u8) -> u8 {
    (3 - c) % 3
}

/// Solves `A x = b` over F_3 where `rows[i]` is row `i` of `A`.
///
/// Returns a particular solution together with a basis of the kernel, or
/// `None` if the system is inconsistent.
pub(crate) fn solve(rows: &[Vec<u8>], rhs: &[u8]) -> Option<(Vec<u8>, Vec<Vec<u8>>)> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    assert_eq!(rhs.len(), nrows);
    let mut aug: Vec<Vec<u8>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, &b)| {
            let mut row = r.clone();
            row.push(b);
            row
        })
        .collect();

    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..ncols {
        let Some(sel) = (prow..nrows).find(|&r| aug[r][col] != 0) else {
            continue;
        };
        aug.swap(prow, sel);
        // every nonzero element of F_3 is its own inverse
        let inv = aug[prow][col];
        for v in aug[prow].iter_mut() {
            *v = (*v * inv) % 3;
        }
        for r in 0..nrows {
            if r != prow && aug[r][col] != 0 {
                let f = neg3(aug[r][col]);
                for c in 0..=ncols {
                    aug[r][c] = (aug[r][c] + f * aug[prow][c]) % 3;
                }
            }
        }
        pivots.push(col);
        prow += 1;
        if prow == nrows {
            break;
        }
    }
    if aug[prow..].iter().any(|row| row[ncols] != 0) {
        return None;
    }

    let mut particular = vec![0u8; ncols];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = aug[r][ncols];
    }
    let kernel = (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u8; ncols];
            v[free] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = neg3(aug[r][free]);
            }
            v
        })
        .collect();
    Some((particular, kernel))
}
