//! Fraction-free (Bareiss) Gaussian elimination over the integers.
//!
//! Rational systems are scaled row by row to integer systems first. All
//! intermediate divisions in the Bareiss recurrence are exact, so entries
//! stay bounded by the corresponding minors of the input.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Rational;

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    row.iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect()
}

/// Solves the square system `matrix · x = rhs` exactly.
///
/// Pivots are chosen as the first nonzero entry in row order, which makes
/// the result independent of platform and run.
pub fn solve(matrix: &[Vec<Rational>], rhs: &[Rational]) -> Result<Vec<Rational>> {
    let n = matrix.len();
    if rhs.len() != n || matrix.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidParameter(format!(
            "solve needs a square system, got {} rows and rhs of length {}",
            n,
            rhs.len()
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a: Vec<Vec<BigInt>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut full = row.clone();
            full.push(b.clone());
            integer_row(&full)
        })
        .collect();

    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n)
            .find(|&i| !a[i][k].is_zero())
            .ok_or_else(|| Error::Singular(format!("no pivot in column {k} of {n}")))?;
        a.swap(k, pivot);
        for i in k + 1..n {
            let factor = a[i][k].clone();
            for j in k + 1..=n {
                let v = &a[i][j] * &a[k][k] - &factor * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }

    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from_integer(a[i][n].clone());
        for j in i + 1..n {
            acc -= Rational::from_integer(a[i][j].clone()) * &x[j];
        }
        x[i] = acc / Rational::from_integer(a[i][i].clone());
    }
    Ok(x)
}

/// Rank of a rectangular rational matrix.
pub fn rank(matrix: &[Vec<Rational>]) -> usize {
    let rows = matrix.len();
    if rows == 0 {
        return 0;
    }
    let cols = matrix[0].len();
    let mut a: Vec<Vec<BigInt>> = matrix.iter().map(|r| integer_row(r)).collect();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pivot) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pivot);
        for i in r + 1..rows {
            let factor = a[i][c].clone();
            for j in c + 1..cols {
                let v = &a[i][j] * &a[r][c] - &factor * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}
