//! Gaussian elimination over a scalar field.

use std::cmp::Ordering;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum Solve<S> {
    /// Values for every unknown plus the indices that were free.
    Solved { values: Vec<S>, free: Vec<usize> },
    Inconsistent,
}

fn pick_pivot<S: Scalar>(a: &[Vec<S>], col: usize, from: usize) -> Option<usize> {
    if S::is_exact() {
        (from..a.len()).find(|&r| !a[r][col].is_zero())
    } else {
        let best = (from..a.len()).max_by(|&x, &y| {
            let ax = a[x][col].to_f64().abs();
            let ay = a[y][col].to_f64().abs();
            ax.partial_cmp(&ay).unwrap_or(Ordering::Equal)
        })?;
        if a[best][col].is_negligible() {
            None
        } else {
            Some(best)
        }
    }
}

/// Reduces the augmented system `a` (each row: coefficients then right-hand side).
/// Free unknowns are fixed by setting the first one to `1` and the rest to `0`.
pub fn solve_affine<S: Scalar>(mut a: Vec<Vec<S>>, nvars: usize) -> Solve<S> {
    let nrows = a.len();
    if !S::is_exact() {
        // row equilibration makes the negligibility tests relative
        for r in a.iter_mut() {
            let big = r
                .iter()
                .max_by(|x, y| x.to_f64().abs().total_cmp(&y.to_f64().abs()))
                .cloned();
            if let Some(big) = big.filter(|b| !b.is_zero()) {
                if let Ok(inv) = big.inv() {
                    for x in r.iter_mut() {
                        *x = x.clone() * inv.clone();
                    }
                }
            }
        }
    }
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..nvars {
        if row == nrows {
            break;
        }
        let Some(p) = pick_pivot(&a, col, row) else {
            continue;
        };
        a.swap(row, p);
        // division rather than multiplication by an inverse, so that a jet
        // pivot of positive valuation still works when the row is divisible
        let piv = a[row][col].clone();
        let Ok(scaled) = (col..=nvars)
            .map(|j| a[row][j].div(&piv))
            .collect::<Result<Vec<S>, _>>()
        else {
            continue;
        };
        for (j, v) in (col..=nvars).zip(scaled) {
            a[row][j] = v;
        }
        for r in 0..nrows {
            if r == row || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in col..=nvars {
                let t = a[row][j].clone() * f.clone();
                a[r][j] = a[r][j].clone() - t;
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    if a[row..].iter().any(|r| !r[nvars].is_negligible()) {
        return Solve::Inconsistent;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free: Vec<usize> = (0..nvars).filter(|c| !pivot_cols.contains(c)).collect();
    let mut values = vec![S::zero(); nvars];
    if let Some(&f0) = free.first() {
        values[f0] = S::one();
    }
    for &(r, c) in &pivots {
        let mut v = a[r][nvars].clone();
        for &f in &free {
            v = v - a[r][f].clone() * values[f].clone();
        }
        values[c] = v;
    }
    Solve::Solved { values, free }
}

/// Unique solution of a square system, if any.
pub fn solve_square<S: Scalar>(a: &mut [Vec<S>]) -> Option<Vec<S>> {
    let n = a.len();
    match solve_affine(a.to_vec(), n) {
        Solve::Solved { values, free } if free.is_empty() => Some(values),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    fn r(n: i64) -> Rational {
        rat(n, 1)
    }

    #[test]
    fn unique_system() {
        // x + y = 3, x - y = 1
        let a = vec![vec![r(1), r(1), r(3)], vec![r(1), r(-1), r(1)]];
        assert_eq!(
            solve_affine(a, 2),
            Solve::Solved {
                values: vec![r(2), r(1)],
                free: vec![]
            }
        );
    }

    #[test]
    fn underdetermined_fixes_first_free() {
        // x + 2y + z = 0
        let a = vec![vec![r(1), r(2), r(1), r(0)]];
        assert_eq!(
            solve_affine(a, 3),
            Solve::Solved {
                values: vec![r(-2), r(1), r(0)],
                free: vec![1, 2]
            }
        );
    }

    #[test]
    fn jet_pivot_of_positive_valuation() {
        use crate::scalar::Jet;
        // x + y = 1, t y = t^2
        let t = Jet::<Rational>::eps();
        let one = Jet::constant(r(1));
        let zero = Jet::constant(r(0));
        let a = vec![
            vec![one.clone(), one.clone(), one.clone()],
            vec![zero, t.clone(), t.clone() * t.clone()],
        ];
        let Solve::Solved { values, free } = solve_affine(a, 2) else {
            panic!("no solution");
        };
        assert!(free.is_empty());
        assert_eq!(values[1].coeff(1).unwrap(), r(1));
        assert_eq!(values[0].coeff(0).unwrap(), r(1));
        assert_eq!(values[0].coeff(1).unwrap(), r(-1));
    }

    #[test]
    fn inconsistent() {
        let a = vec![vec![r(1), r(1)], vec![r(2), r(3)]];
        assert_eq!(solve_affine(a, 1), Solve::Inconsistent);
    }
}
