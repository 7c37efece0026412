//! Determinant of the intersection matrix.

use num_bigint::BigInt;

use crate::graph::WeightedGraph;

/// `det M` where `M` has the weights on the diagonal and `M[u][v] = 1` for
/// every edge `{u, v}`.
///
/// Its absolute value is unchanged by blowups and blowdowns.
pub fn intersection_determinant(g: &WeightedGraph) -> i128 {
    let m = matrix(g);
    bareiss_i128(m.clone()).unwrap_or_else(|| {
        let big: Vec<Vec<BigInt>> = m.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
        i128::try_from(bareiss_big(big)).expect("intersection determinant exceeds i128")
    })
}

fn matrix(g: &WeightedGraph) -> Vec<Vec<i128>> {
    let ids: Vec<_> = g.vertex_ids().collect();
    let index = |v| ids.binary_search(&v).unwrap();
    let mut m = vec![vec![0i128; ids.len()]; ids.len()];
    for (i, &v) in ids.iter().enumerate() {
        m[i][i] = g.weight(v).unwrap() as i128;
    }
    for (u, v) in g.edges() {
        let (i, j) = (index(u), index(v));
        m[i][j] = 1;
        m[j][i] = 1;
    }
    m
}

/// Fraction-free elimination; `None` on overflow.
fn bareiss_i128(mut a: Vec<Vec<i128>>) -> Option<i128> {
    let n = a.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| a[r][k] != 0) else { return Some(0) };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = a[i][j].checked_mul(a[k][k])?.checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = x / prev;
            }
        }
        prev = a[k][k];
    }
    Some(sign * a[n - 1][n - 1])
}

fn bareiss_big(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let zero = BigInt::from(0);
    let mut negate = false;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k] == zero {
            let Some(p) = (k + 1..n).find(|&r| a[r][k] != zero) else { return zero };
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = x / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Cofactor expansion, independent of the elimination routine.
    fn laplace(m: &[Vec<i128>]) -> i128 {
        if m.len() == 1 {
            return m[0][0];
        }
        (0..m.len())
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * laplace(&minor)
            })
            .sum()
    }

    #[test]
    fn small_chains() {
        let det = |w: &[i64]| intersection_determinant(&WeightedGraph::chain(w).unwrap());
        assert_eq!(det(&[0]), 0);
        assert_eq!(det(&[2]), 2);
        assert_eq!(det(&[0, 0, -2]), 2);
        assert_eq!(det(&[-1, -1]), 0);
        assert_eq!(det(&[0, 0]), -1);
    }

    #[test]
    fn agrees_with_cofactor_expansion() {
        let graphs = [
            WeightedGraph::chain(&[0, 3, -2, 0, 0, -5]).unwrap(),
            WeightedGraph::cycle(&[0, 0, -2, -3, -4]).unwrap(),
            crate::fixtures::sample_tree(&[2, -3]),
            crate::fixtures::star(5, &[&[0], &[-2], &[-2, -3]]),
        ];
        for g in graphs {
            assert_eq!(intersection_determinant(&g), laplace(&matrix(&g)), "{g}");
        }
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let g = WeightedGraph::chain(&[-1_000_000_000; 4]).unwrap();
        let m: Vec<Vec<BigInt>> = matrix(&g).into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
        assert_eq!(BigInt::from(intersection_determinant(&g)), bareiss_big(m));
    }
}
