//! Reference implementations used to validate the simulator: a dense
//! matrix exponential, the augmented-generator collision count and a direct
//! fixed-point solve for the limit cycle. Nothing here calls into the
//! library's integrators.

#![allow(clippy::needless_range_loop)]

#[cfg(test)]
mod library_agreement;

use otto_core::kinetics::Direction;
use otto_core::RateTable;
use rand::Rng;

pub type Mat = Vec<Vec<f64>>;

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut c = vec![vec![0.0; m]; n];
    for i in 0..n {
        for l in 0..k {
            let ail = a[i][l];
            if ail == 0.0 {
                continue;
            }
            for j in 0..m {
                c[i][j] += ail * b[l][j];
            }
        }
    }
    c
}

pub fn matvec(a: &Mat, x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(r, v)| r * v).sum())
        .collect()
}

fn norm1(a: &Mat) -> f64 {
    let n = a[0].len();
    (0..n)
        .map(|j| a.iter().map(|row| row[j].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// exp(A) by scaling and squaring with a 30-term Taylor series.
pub fn expm(a: &Mat) -> Mat {
    let n = a.len();
    let norm = norm1(a);
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scale = 2f64.powi(-s);
    let a: Mat = a
        .iter()
        .map(|r| r.iter().map(|v| v * scale).collect())
        .collect();
    let mut result = identity(n);
    let mut term = identity(n);
    for k in 1..=30 {
        term = matmul(&term, &a);
        for row in term.iter_mut() {
            for v in row.iter_mut() {
                *v /= k as f64;
            }
        }
        for i in 0..n {
            for j in 0..n {
                result[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..s {
        result = matmul(&result, &result);
    }
    result
}

/// Column-convention generator dp/dt = Q p of a one-directional chain.
pub fn generator(rates: &RateTable, direction: Direction) -> Mat {
    let mut q = vec![vec![0.0; 7]; 7];
    match direction {
        Direction::Heating => {
            for n in 0..6 {
                let r = rates.heating()[n];
                q[n][n] -= r;
                q[n + 1][n] += r;
            }
        }
        Direction::Cooling => {
            for n in 1..7 {
                let r = rates.cooling()[n - 1];
                q[n][n] -= r;
                q[n - 1][n] += r;
            }
        }
    }
    q
}

/// Final distribution and expected collision count after `t`, from the
/// 8×8 augmented generator whose last row integrates the outflow rate.
pub fn oracle_stroke(
    p0: &[f64; 7],
    rates: &RateTable,
    direction: Direction,
    t: f64,
) -> ([f64; 7], f64) {
    let q = generator(rates, direction);
    let mut aug = vec![vec![0.0; 8]; 8];
    for i in 0..7 {
        for j in 0..7 {
            aug[i][j] = q[i][j] * t;
        }
        aug[7][i] = -q[i][i] * t;
    }
    let e = expm(&aug);
    let mut x = p0.to_vec();
    x.push(0.0);
    let y = matvec(&e, &x);
    let mut p = [0.0; 7];
    p.copy_from_slice(&y[..7]);
    (p, y[7])
}

/// Solves A x = b by Gaussian elimination with partial pivoting.
pub fn solve(mut a: Mat, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x
}

/// Periodic state p_A of the cycle: the normalized null vector of
/// (C·H − I), with H and C the contact propagators.
pub fn oracle_limit_cycle(rates: &RateTable, tau_h: f64, tau_c: f64) -> [f64; 7] {
    let scaled = |d, t: f64| -> Mat {
        generator(rates, d)
            .into_iter()
            .map(|r| r.into_iter().map(|v| v * t).collect())
            .collect()
    };
    let h = expm(&scaled(Direction::Heating, tau_h));
    let c = expm(&scaled(Direction::Cooling, tau_c));
    let mut m = matmul(&c, &h);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= 1.0;
    }
    m[6] = vec![1.0; 7];
    let mut b = vec![0.0; 7];
    b[6] = 1.0;
    let x = solve(m, b);
    let mut p = [0.0; 7];
    p.copy_from_slice(&x);
    p
}

pub fn random_rates<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> RateTable {
    let mut h = [0.0; 6];
    let mut c = [0.0; 6];
    for v in h.iter_mut().chain(c.iter_mut()) {
        *v = rng.random_range(lo..hi);
    }
    RateTable::new(h, c).unwrap()
}

pub fn random_distribution<R: Rng>(rng: &mut R) -> [f64; 7] {
    let mut p = [0.0; 7];
    for v in p.iter_mut() {
        *v = rng.random::<f64>();
    }
    let s: f64 = p.iter().sum();
    p.map(|v| v / s)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
