use num_traits::{One, Zero};

use crate::numeric::Rat;

/// Inverse of a square matrix by Gauss-Jordan elimination over ℚ. `None` if
/// singular.
pub(crate) fn invert(mut a: Vec<Vec<Rat>>) -> Option<Vec<Vec<Rat>>> {
    let n = a.len();
    let mut inv: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let scale = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &scale;
        }
        for x in inv[col].iter_mut() {
            *x *= &scale;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..n {
                let d = &f * &a[col][c];
                a[r][c] -= d;
                let d = &f * &inv[col][c];
                inv[r][c] -= d;
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};

    #[test]
    fn inverts_small_matrix() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        let inv = invert(a).unwrap();
        assert_eq!(
            inv,
            vec![vec![rat(3, 5), rat(-1, 5)], vec![rat(-1, 5), rat(2, 5)]]
        );
    }

    #[test]
    fn singular_is_none() {
        assert!(invert(vec![vec![int(1), int(2)], vec![int(2), int(4)]]).is_none());
        assert_eq!(invert(vec![]), Some(vec![]));
    }
}
