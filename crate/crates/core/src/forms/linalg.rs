//! Exact Gaussian elimination over ℚ or ℚ(√D).

use crate::nf::AlgNum;

/// Reduced row echelon form; returns the pivot columns.
fn rref(m: &mut [Vec<AlgNum>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<AlgNum>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{v : M v = 0}`.
pub fn nullspace(rows: &[Vec<AlgNum>], cols: usize) -> Vec<Vec<AlgNum>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![AlgNum::zero(); cols];
            v[f] = AlgNum::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -&m[i][f];
            }
            v
        })
        .collect()
}

/// Basis of the linear relations `{λ : Σ λᵢ·rowᵢ = 0}`.
pub fn relations(rows: &[Vec<AlgNum>]) -> Vec<Vec<AlgNum>> {
    let n = rows.len();
    let cols = rows.first().map_or(0, |r| r.len());
    let t: Vec<Vec<AlgNum>> = (0..cols).map(|j| (0..n).map(|i| rows[i][j].clone()).collect()).collect();
    nullspace(&t, n)
}

pub fn det(rows: &[Vec<AlgNum>]) -> AlgNum {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut acc = AlgNum::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else { return AlgNum::zero() };
        if p != c {
            m.swap(p, c);
            acc = -acc;
        }
        acc = &acc * &m[c][c];
        let inv = m[c][c].recip();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..n {
                let t = &m[c][j] * &f;
                m[i][j] = &m[i][j] - &t;
            }
        }
    }
    acc
}

/// Indices of a maximal independent subset, scanning greedily in order.
pub fn independent_subset(rows: &[Vec<AlgNum>]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut current: Vec<Vec<AlgNum>> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        current.push(r.clone());
        if rank(&current) == current.len() {
            chosen.push(i);
        } else {
            current.pop();
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<AlgNum> {
        xs.iter().map(|&x| AlgNum::from_int(x)).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let m = vec![v(&[1, 0]), v(&[0, 1]), v(&[1, 1])];
        assert_eq!(rank(&m), 2);
        let rel = relations(&m);
        assert_eq!(rel.len(), 1);
        assert_eq!(rel[0], v(&[-1, -1, 1]));
        assert_eq!(det(&[v(&[2, 1]), v(&[1, 3])]), AlgNum::from_int(5));
        assert_eq!(independent_subset(&[v(&[1, 1]), v(&[2, 2]), v(&[0, 1])]), vec![0, 2]);
    }

    #[test]
    fn quadratic_entries() {
        let s = AlgNum::sqrt_radicand(2);
        let m = vec![vec![AlgNum::one(), s.clone()], vec![s.clone(), AlgNum::from_int(2)]];
        assert_eq!(rank(&m), 1);
        assert!(det(&m).is_zero());
    }
}
