#![allow(dead_code)]

use num_rational::BigRational;
use sparseres::family::SupportFamily;

pub fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Laplace expansion along the first row; independent of the library.
pub fn laplace_det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut total = 0;
    for c in 0..n {
        if m[0][c] == 0 {
            continue;
        }
        let minor: Vec<Vec<i128>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &v)| v).collect())
            .collect();
        let term = m[0][c] * laplace_det(&minor);
        total += if c % 2 == 0 { term } else { -term };
    }
    total
}

/// Sylvester matrix determinant of `sum p[k] x^k` and `sum r[k] x^k`.
pub fn sylvester_det(p: &[i128], r: &[i128]) -> i128 {
    let (d0, d1) = (p.len() - 1, r.len() - 1);
    let size = d0 + d1;
    let mut m = vec![vec![0i128; size]; size];
    for row in 0..d1 {
        for (k, &c) in p.iter().enumerate() {
            m[row][row + d0 - k] = c;
        }
    }
    for row in 0..d0 {
        for (k, &c) in r.iter().enumerate() {
            m[d1 + row][row + d1 - k] = c;
        }
    }
    laplace_det(&m)
}

/// The staircase lifting `(i + 1) * (a_x + a_y)` on a planar family.
pub fn staircase(family: &SupportFamily) -> Vec<BigRational> {
    (0..family.len())
        .flat_map(|i| {
            family
                .support(i)
                .iter()
                .map(move |a| q((i as i64 + 1) * a.coords().iter().sum::<i64>()))
        })
        .collect()
}
