use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{check_letters, ElementKey, GroupError, GroupOracle};
use crate::automata::{Alphabet, Letter};

type Matrix = Vec<Vec<BigInt>>;

/// Subgroup of GL(d, ℤ) generated by unimodular integer matrices, with exact
/// arbitrary-precision arithmetic. Words multiply left to right.
#[derive(Debug, Clone)]
pub struct IntegerMatrixOracle {
    dim: usize,
    alphabet: Alphabet,
    gens: Vec<Matrix>,
}

fn identity(d: usize) -> Matrix {
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

fn multiply(a: &Matrix, b: &Matrix) -> Matrix {
    let d = a.len();
    let mut c = alloc::vec![alloc::vec![BigInt::zero(); d]; d];
    for i in 0..d {
        for k in 0..d {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..d {
                c[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    c
}

/// Fraction-free Gaussian elimination (Bareiss).
pub(crate) fn determinant(m: &Matrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

impl IntegerMatrixOracle {
    pub fn new(dim: usize, gens: Vec<(Letter, Matrix)>) -> Result<Self, GroupError> {
        let mut alphabet = Alphabet::default();
        let mut mats = Vec::new();
        for (l, m) in gens {
            if alphabet.contains(&l) {
                return Err(GroupError::DuplicateGenerator(l));
            }
            if m.len() != dim || m.iter().any(|r| r.len() != dim) {
                return Err(GroupError::InvalidGenerator {
                    letter: l,
                    reason: format!("not a {dim}x{dim} matrix"),
                });
            }
            if !determinant(&m).abs().is_one() {
                return Err(GroupError::InvalidGenerator {
                    letter: l,
                    reason: "determinant is not ±1".into(),
                });
            }
            alphabet.insert(l);
            mats.push(m);
        }
        Ok(IntegerMatrixOracle {
            dim,
            alphabet,
            gens: mats,
        })
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(dim: usize, gens: Vec<(Letter, Vec<Vec<i64>>)>) -> Result<Self, GroupError> {
        IntegerMatrixOracle::new(
            dim,
            gens.into_iter()
                .map(|(l, m)| {
                    (
                        l,
                        m.into_iter()
                            .map(|r| r.into_iter().map(BigInt::from).collect())
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    /// The integer Heisenberg group: `x`, `y` generate, `z = [x, y]` is
    /// central. Letters `x y z` with formal inverses.
    pub fn heisenberg() -> Self {
        let m = |a: i64, b: i64, c: i64| alloc::vec![alloc::vec![1, a, c], alloc::vec![0, 1, b], alloc::vec![0, 0, 1]];
        let l = Letter::from_token;
        IntegerMatrixOracle::from_i64(
            3,
            alloc::vec![
                (l("x"), m(1, 0, 0)),
                (l("x^-1"), m(-1, 0, 0)),
                (l("y"), m(0, 1, 0)),
                (l("y^-1"), m(0, -1, 0)),
                (l("z"), m(0, 0, 1)),
                (l("z^-1"), m(0, 0, -1)),
            ],
        )
        .expect("unimodular")
    }

    /// The infinite dihedral group as affine maps `[[±1, k], [0, 1]]`:
    /// translations `a`, `a^-1` and the reflection `s`.
    pub fn infinite_dihedral() -> Self {
        let l = Letter::from_token;
        IntegerMatrixOracle::from_i64(
            2,
            alloc::vec![
                (l("a"), alloc::vec![alloc::vec![1, 1], alloc::vec![0, 1]]),
                (l("a^-1"), alloc::vec![alloc::vec![1, -1], alloc::vec![0, 1]]),
                (l("s"), alloc::vec![alloc::vec![-1, 0], alloc::vec![0, 1]]),
            ],
        )
        .expect("unimodular")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> impl Iterator<Item = (&Letter, &Matrix)> {
        self.alphabet.iter().zip(&self.gens)
    }

    pub fn matrix(&self, w: &[Letter]) -> Result<Matrix, GroupError> {
        check_letters(&self.alphabet, w)?;
        let mut acc = identity(self.dim);
        for l in w {
            acc = multiply(&acc, &self.gens[self.alphabet.index_of(l).unwrap()]);
        }
        Ok(acc)
    }

    pub fn key_of(m: &Matrix) -> ElementKey {
        let rows: Vec<String> = m
            .iter()
            .map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        ElementKey::new(format!("M:{}", rows.join(";")))
    }

    /// Entries of a key produced by this oracle, row-major.
    pub fn entries_of(key: &ElementKey) -> Option<Vec<Vec<BigInt>>> {
        let body = key.as_str().strip_prefix("M:")?;
        body.split(';')
            .map(|r| r.split(',').map(|c| c.parse::<BigInt>().ok()).collect())
            .collect()
    }
}

impl GroupOracle for IntegerMatrixOracle {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn evaluate(&self, w: &[Letter]) -> Result<ElementKey, GroupError> {
        Ok(Self::key_of(&self.matrix(w)?))
    }

    fn identity_key(&self) -> ElementKey {
        Self::key_of(&identity(self.dim))
    }

    fn kind(&self) -> &'static str {
        "matrix"
    }
}
