//! PDA families: the MAN array, the two low-file-complexity grid families
//! and the trivial all-star array.
//!
//! Every constructor runs the full validator on its output and compares the
//! result with the family's closed-form parameter tuple; a mismatch is a
//! construction bug and is reported as [`ConstructionError::Internal`].

use std::collections::HashMap;

use thiserror::Error;

use crate::combinatorics::{binomial_u64, k_subsets, subset_rank};
use crate::pda::{Pda, PdaEntry, PdaParams};

/// Largest row count any constructor will materialize.
pub const MAX_ROWS: usize = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("construction would need {rows} rows (limit {MAX_ROWS})")]
    TooLarge { rows: u128 },
    #[error("construction produced an invalid array: {0}")]
    Internal(String),
}

/// Parameters of the MAN family: `K` nodes, rows are the size-`i` subsets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ManParams {
    pub k_nodes: usize,
    pub i: usize,
}

/// Parameters of the two grid families, `K = m * q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridFamilyParams {
    pub q: usize,
    pub m: usize,
}

impl GridFamilyParams {
    pub fn k_nodes(&self) -> usize {
        self.m * self.q
    }
}

/// Which constructor to call; used by the CLI and by [`build`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Man(ManParams),
    P1(GridFamilyParams),
    P2(GridFamilyParams),
    FullStar { k_nodes: usize, f_rows: usize },
}

pub fn build(family: Family) -> Result<Pda, ConstructionError> {
    match family {
        Family::Man(p) => man_pda(p.k_nodes, p.i),
        Family::P1(p) => p1_pda(p.q, p.m),
        Family::P2(p) => p2_pda(p.q, p.m),
        Family::FullStar { k_nodes, f_rows } => full_star_pda(k_nodes, f_rows),
    }
}

/// MAN array `P_i` over `K` nodes.
///
/// Rows are the size-`i` subsets `T` of the nodes in lexicographic order.
/// Entry `(T, k)` is a star if `k` is in `T`, otherwise the one-based
/// lexicographic rank of `T + {k}` among the size-`(i+1)` subsets.
pub fn man_pda(k_nodes: usize, i: usize) -> Result<Pda, ConstructionError> {
    if k_nodes == 0 || i == 0 || i > k_nodes {
        return Err(ConstructionError::InvalidParams(format!(
            "MAN array needs 1 <= i <= K, got K = {k_nodes}, i = {i}"
        )));
    }
    let rows_needed = binomial_u64(k_nodes, i).unwrap_or(u64::MAX);
    if rows_needed as u128 > MAX_ROWS as u128 {
        return Err(ConstructionError::TooLarge {
            rows: rows_needed as u128,
        });
    }
    let rows: Vec<Vec<PdaEntry>> = k_subsets(k_nodes, i)
        .map(|subset| {
            (0..k_nodes)
                .map(|col| {
                    if subset.contains(&col) {
                        PdaEntry::Star
                    } else {
                        let mut bigger = subset.clone();
                        bigger.push(col);
                        bigger.sort_unstable();
                        PdaEntry::Symbol(subset_rank(k_nodes, &bigger) as u32 + 1)
                    }
                })
                .collect()
        })
        .collect();
    let pda = finish(rows)?;

    let c = |n, r| binomial_u64(n, r).expect("small binomial") as usize;
    if i < k_nodes {
        let expected = PdaParams {
            k: k_nodes,
            f: c(k_nodes, i),
            t: k_nodes * c(k_nodes - 1, i - 1),
            s: c(k_nodes, i + 1),
        };
        check(&pda, expected, Some(i + 1), i)?;
    } else {
        check(
            &pda,
            PdaParams {
                k: k_nodes,
                f: 1,
                t: k_nodes,
                s: 0,
            },
            None,
            k_nodes,
        )?;
    }
    Ok(pda)
}

/// First grid family: an `m`-regular `(mq, q^(m-1), m q^(m-1), (q-1) q^(m-1))`
/// Comp-PDA with minimum storage number `m`.
///
/// Column `(i, j)` (with `i < m`, `j < q`) is column `i*q + j`. Rows are the
/// vectors `b` over `Z_q^m` with zero coordinate sum, lexicographically.
/// Entry `(b, (i, j))` is a star iff `b_i = j`; otherwise it is the symbol
/// named by `b` with coordinate `i` replaced by `j`.
pub fn p1_pda(q: usize, m: usize) -> Result<Pda, ConstructionError> {
    grid_guard(q, m)?;
    let rows: Vec<Vec<PdaEntry>> = {
        let mut labels = Labels::default();
        vectors(q, m)
            .filter(|b| b.iter().sum::<usize>() % q == 0)
            .map(|b| {
                let mut row = Vec::with_capacity(m * q);
                for i in 0..m {
                    for j in 0..q {
                        if b[i] == j {
                            row.push(PdaEntry::Star);
                        } else {
                            let mut sym = b.clone();
                            sym[i] = j;
                            row.push(labels.get(sym));
                        }
                    }
                }
                row
            })
            .collect()
    };
    let pda = finish(rows)?;
    let qm1 = q.pow(m as u32 - 1);
    check(
        &pda,
        PdaParams {
            k: m * q,
            f: qm1,
            t: m * qm1,
            s: (q - 1) * qm1,
        },
        Some(m),
        m,
    )?;
    Ok(pda)
}

/// Second grid family: an `m(q-1)`-regular
/// `(mq, (q-1) q^(m-1), m (q-1)^2 q^(m-1), q^(m-1))` Comp-PDA with minimum
/// storage number `m(q-1)`.
///
/// Same column indexing as [`p1_pda`]. Rows are the vectors with nonzero
/// coordinate sum. Entry `(b, (i, j))` is a star iff `b_i != j`; the entry
/// `(b, (i, b_i))` is the symbol named by `b` with coordinate `i` replaced by
/// the unique value that makes the sum vanish mod `q`.
pub fn p2_pda(q: usize, m: usize) -> Result<Pda, ConstructionError> {
    grid_guard(q, m)?;
    let rows: Vec<Vec<PdaEntry>> = {
        let mut labels = Labels::default();
        vectors(q, m)
            .filter(|b| b.iter().sum::<usize>() % q != 0)
            .map(|b| {
                let sum = b.iter().sum::<usize>() % q;
                let mut row = Vec::with_capacity(m * q);
                for i in 0..m {
                    for j in 0..q {
                        if b[i] != j {
                            row.push(PdaEntry::Star);
                        } else {
                            let mut sym = b.clone();
                            sym[i] = (b[i] + q - sum) % q;
                            row.push(labels.get(sym));
                        }
                    }
                }
                row
            })
            .collect()
    };
    let pda = finish(rows)?;
    let qm1 = q.pow(m as u32 - 1);
    check(
        &pda,
        PdaParams {
            k: m * q,
            f: (q - 1) * qm1,
            t: m * (q - 1) * (q - 1) * qm1,
            s: qm1,
        },
        Some(m * (q - 1)),
        m * (q - 1),
    )?;
    Ok(pda)
}

/// The trivial `F x K` all-star array.
pub fn full_star_pda(k_nodes: usize, f_rows: usize) -> Result<Pda, ConstructionError> {
    if k_nodes == 0 || f_rows == 0 {
        return Err(ConstructionError::InvalidParams(format!(
            "all-star array needs K >= 1 and F >= 1, got K = {k_nodes}, F = {f_rows}"
        )));
    }
    if f_rows > MAX_ROWS {
        return Err(ConstructionError::TooLarge {
            rows: f_rows as u128,
        });
    }
    finish(vec![vec![PdaEntry::Star; k_nodes]; f_rows])
}

fn grid_guard(q: usize, m: usize) -> Result<(), ConstructionError> {
    if q < 2 || m < 1 {
        return Err(ConstructionError::InvalidParams(format!(
            "grid families need q >= 2 and m >= 1, got q = {q}, m = {m}"
        )));
    }
    let total = (q as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if total > MAX_ROWS as u128 {
        return Err(ConstructionError::TooLarge { rows: total });
    }
    Ok(())
}

/// All vectors in `[0, q)^m`, lexicographic (coordinate 0 most significant).
fn vectors(q: usize, m: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = q.pow(m as u32);
    (0..total).map(move |mut x| {
        let mut v = vec![0; m];
        for slot in v.iter_mut().rev() {
            *slot = x % q;
            x /= q;
        }
        v
    })
}

/// Assigns labels to symbol vectors in first-use order.
#[derive(Default)]
struct Labels(HashMap<Vec<usize>, u32>);

impl Labels {
    fn get(&mut self, key: Vec<usize>) -> PdaEntry {
        let next = self.0.len() as u32 + 1;
        PdaEntry::Symbol(*self.0.entry(key).or_insert(next))
    }
}

fn finish(rows: Vec<Vec<PdaEntry>>) -> Result<Pda, ConstructionError> {
    Pda::from_rows(rows).map_err(|e| ConstructionError::Internal(e.to_string()))
}

fn check(
    pda: &Pda,
    params: PdaParams,
    regular: Option<usize>,
    tau: usize,
) -> Result<(), ConstructionError> {
    let stats = pda.stats();
    if pda.params() != params || stats.regular_g != regular || stats.tau != tau {
        return Err(ConstructionError::Internal(format!(
            "expected {params} regular {regular:?} tau {tau}, got {} regular {:?} tau {}",
            pda.params(),
            stats.regular_g,
            stats.tau
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pda::validate_pda;
    use PdaEntry::{Star as X, Symbol as N};

    #[test]
    fn man_4_2_is_example_one() {
        let p = man_pda(4, 2).unwrap();
        let expected =
            Pda::parse(b"6 4\n* * 1 2\n* 1 * 3\n* 2 3 *\n1 * * 4\n2 * 4 *\n3 4 * *\n").unwrap();
        assert_eq!(p, expected);
        // Lex ranks are already canonical: the raw grid validates untouched.
        assert!(validate_pda(&p.to_rows()).is_ok());
    }

    #[test]
    fn man_edge_cases() {
        let p = man_pda(3, 3).unwrap();
        assert_eq!(p.to_rows(), vec![vec![X, X, X]]);
        let p = man_pda(5, 2).unwrap();
        assert_eq!(
            p.params(),
            PdaParams {
                k: 5,
                f: 10,
                t: 20,
                s: 10
            }
        );
        let st = p.stats();
        assert_eq!((st.regular_g, st.tau), (Some(3), 2));
        assert!(man_pda(4, 0).is_err());
        assert!(man_pda(4, 5).is_err());
        assert!(man_pda(0, 0).is_err());
    }

    #[test]
    fn p1_small_grids() {
        let p = p1_pda(2, 2).unwrap();
        assert_eq!(
            p.to_rows(),
            vec![vec![X, N(1), X, N(2)], vec![N(2), X, N(1), X]]
        );
        assert_eq!(p.stats().regular_g, Some(2));

        let p = p1_pda(2, 3).unwrap();
        assert_eq!(
            p.params(),
            PdaParams {
                k: 6,
                f: 4,
                t: 12,
                s: 4
            }
        );
        assert_eq!((p.stats().regular_g, p.stats().tau), (Some(3), 3));

        let p = p1_pda(3, 2).unwrap();
        assert_eq!(
            p.params(),
            PdaParams {
                k: 6,
                f: 3,
                t: 6,
                s: 6
            }
        );
        assert_eq!(p.stats().regular_g, Some(2));
    }

    #[test]
    fn p2_small_grids() {
        let p = p2_pda(2, 2).unwrap();
        assert_eq!(
            p.to_rows(),
            vec![vec![N(1), X, X, N(2)], vec![X, N(2), N(1), X]]
        );

        let p = p2_pda(3, 2).unwrap();
        assert_eq!(
            p.params(),
            PdaParams {
                k: 6,
                f: 6,
                t: 24,
                s: 3
            }
        );
        assert_eq!((p.stats().regular_g, p.stats().tau), (Some(4), 4));

        let p = p2_pda(2, 3).unwrap();
        assert_eq!(
            p.params(),
            PdaParams {
                k: 6,
                f: 4,
                t: 12,
                s: 4
            }
        );
        assert_eq!(p.stats().regular_g, Some(3));
    }

    #[test]
    fn m_equals_one() {
        let p = p1_pda(3, 1).unwrap();
        assert_eq!(p.to_rows(), vec![vec![X, N(1), N(2)]]);
        let p = p2_pda(3, 1).unwrap();
        assert_eq!(
            p.params(),
            PdaParams {
                k: 3,
                f: 2,
                t: 4,
                s: 1
            }
        );
    }

    #[test]
    fn grid_param_errors() {
        assert!(matches!(
            p1_pda(1, 2),
            Err(ConstructionError::InvalidParams(_))
        ));
        assert!(matches!(
            p2_pda(2, 0),
            Err(ConstructionError::InvalidParams(_))
        ));
        assert!(matches!(
            p1_pda(16, 16),
            Err(ConstructionError::TooLarge { .. })
        ));
    }

    #[test]
    fn full_star() {
        assert_eq!(full_star_pda(3, 1).unwrap().render(), "1 3\n* * *\n");
        assert_eq!(
            full_star_pda(1, 2).unwrap().to_rows(),
            vec![vec![X], vec![X]]
        );
        let st = full_star_pda(4, 2).unwrap().stats();
        assert_eq!(st.tau, 4);
        assert_eq!(
            st.storage_load,
            num_rational::BigRational::from_integer(4.into())
        );
        assert!(full_star_pda(0, 1).is_err());
        assert!(full_star_pda(2, 0).is_err());
    }
}
