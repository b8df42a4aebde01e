//! Dense Gaussian elimination over an exact field.

use crate::field::Field;

/// Solve `rows · u = rhs`. Free variables are set to zero. Returns `None`
/// when the system is inconsistent.
pub fn solve<F: Field>(mut rows: Vec<Vec<F>>, mut rhs: Vec<F>) -> Option<Vec<F>> {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        rhs.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for v in rows[r].iter_mut() {
            *v = v.mul(&inv);
        }
        rhs[r] = rhs[r].mul(&inv);
        for i in 0..m {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            let pivot = rows[r].clone();
            for (x, p) in rows[i][c..n].iter_mut().zip(&pivot[c..n]) {
                *x = x.sub(&f.mul(p));
            }
            let t = f.mul(&rhs[r]);
            rhs[i] = rhs[i].sub(&t);
        }
        pivots.push(c);
        r += 1;
        if r == m {
            break;
        }
    }
    if rhs[r..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut u = vec![F::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        u[c] = rhs[i].clone();
    }
    Some(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    #[test]
    fn solves_overdetermined_consistent_system() {
        // u + v = 3, u - v = 1, 2u = 4
        let rows = vec![vec![q(1), q(1)], vec![q(1), q(-1)], vec![q(2), q(0)]];
        let u = solve(rows, vec![q(3), q(1), q(4)]).unwrap();
        assert_eq!(u, vec![q(2), q(1)]);
    }

    #[test]
    fn detects_inconsistency() {
        let rows = vec![vec![q(1)], vec![q(1)]];
        assert!(solve(rows, vec![q(1), q(2)]).is_none());
    }
}
