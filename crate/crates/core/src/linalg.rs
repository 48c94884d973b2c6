//! Exact integer matrices, matrices over `Z/d`, elementary matrices and
//! principal congruence subgroup membership.
//!
//! Entries of [`IntMatrix`] are arbitrary precision. [`ModMatrix`] carries its
//! modulus alongside the entries, and arithmetic between different moduli is
//! rejected rather than coerced.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not invertible over the integers (determinant {0})")]
    NotUnimodular(BigInt),
    #[error("matrix is not invertible modulo {0}")]
    NotInvertibleMod(u32),
    #[error("elementary matrix needs distinct row and column, got ({0},{0})")]
    DiagonalElementary(usize),
    #[error("index ({0},{1}) out of range for dimension {2}")]
    IndexOutOfRange(usize, usize, usize),
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(i64),
    #[error("cannot parse matrix: {0}")]
    Parse(String),
}

/// Which principal congruence subgroup to test against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CongruenceVariant {
    /// `Gamma_d(n)`: determinant 1.
    Special,
    /// `hat Gamma_d(n)`: determinant +1 or -1.
    General,
}

/// Square matrix with exact integer entries, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "matrix dimension must be at least 1");
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = BigInt::one();
        }
        IntMatrix { n, data }
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self, LinalgError> {
        let n = rows.len();
        if n == 0 {
            return Err(LinalgError::EmptyMatrix);
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(LinalgError::NotSquare);
            }
            data.extend(row.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix { n, data })
    }

    /// Builds a matrix from its columns (column `j` is the image of basis vector `j`).
    pub fn from_columns(cols: &[Vec<BigInt>]) -> Result<Self, LinalgError> {
        let n = cols.len();
        if n == 0 {
            return Err(LinalgError::EmptyMatrix);
        }
        let mut data = vec![BigInt::zero(); n * n];
        for (j, col) in cols.iter().enumerate() {
            if col.len() != n {
                return Err(LinalgError::NotSquare);
            }
            for (i, v) in col.iter().enumerate() {
                data[i * n + j] = v.clone();
            }
        }
        Ok(IntMatrix { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry at zero-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> &BigInt {
        &self.data[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: BigInt) {
        self.data[row * self.n + col] = value;
    }

    pub fn column(&self, col: usize) -> Vec<BigInt> {
        (0..self.n).map(|i| self.get(i, col).clone()).collect()
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let v = self.get(i, j);
                if i == j {
                    v.is_one()
                } else {
                    v.is_zero()
                }
            })
        })
    }

    /// The elementary matrix `e_ij^k`: identity with `k` at one-based `(i, j)`.
    pub fn elementary(n: usize, i: usize, j: usize, k: i64) -> Result<Self, LinalgError> {
        if i == 0 || j == 0 || i > n || j > n {
            return Err(LinalgError::IndexOutOfRange(i, j, n));
        }
        if i == j {
            return Err(LinalgError::DiagonalElementary(i));
        }
        let mut m = IntMatrix::identity(n);
        m.set(i - 1, j - 1, BigInt::from(k));
        Ok(m)
    }

    pub fn multiply(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.n != other.n {
            return Err(LinalgError::DimensionMismatch(self.n, other.n));
        }
        let n = self.n;
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.data[k * n + j];
                    if !b.is_zero() {
                        data[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(IntMatrix { n, data })
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.n;
        let mut data = self.data.clone();
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j].clone();
            }
        }
        IntMatrix { n, data }
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.n;
        let mut a: Vec<Vec<BigInt>> = self.rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap(k, p);
                sign = -sign;
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

    /// Transpose of the cofactor matrix, so `A * adj(A) = det(A) * I`.
    pub fn adjugate(&self) -> IntMatrix {
        let n = self.n;
        if n == 1 {
            return IntMatrix::identity(1);
        }
        let mut out = IntMatrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                let minor_rows: Vec<Vec<BigInt>> = (0..n)
                    .filter(|&r| r != i)
                    .map(|r| {
                        (0..n)
                            .filter(|&c| c != j)
                            .map(|c| self.get(r, c).clone())
                            .collect()
                    })
                    .collect();
                let minor = IntMatrix::from_rows(&minor_rows).expect("square minor");
                let mut cof = minor.determinant();
                if (i + j) % 2 == 1 {
                    cof = -cof;
                }
                out.set(j, i, cof);
            }
        }
        out
    }

    pub fn inverse(&self) -> Result<IntMatrix, LinalgError> {
        let det = self.determinant();
        if !(det.is_one() || (-&det).is_one()) {
            return Err(LinalgError::NotUnimodular(det));
        }
        let mut adj = self.adjugate();
        if det.is_negative() {
            for v in adj.data.iter_mut() {
                *v = -std::mem::take(v);
            }
        }
        Ok(adj)
    }

    pub fn pow(&self, exp: i64) -> Result<IntMatrix, LinalgError> {
        let base = if exp < 0 { self.inverse()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = IntMatrix::identity(self.n);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.multiply(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.multiply(&sq)?;
            }
        }
        Ok(acc)
    }

    pub fn reduce_mod(&self, d: u32) -> Result<ModMatrix, LinalgError> {
        if d < 2 {
            return Err(LinalgError::BadModulus(d as i64));
        }
        let m = BigInt::from(d);
        let data = self
            .data
            .iter()
            .map(|v| v.mod_floor(&m).to_u32().expect("residue fits"))
            .collect();
        Ok(ModMatrix {
            n: self.n,
            modulus: d,
            data,
        })
    }

    /// Membership in `Gamma_d(n)` or `hat Gamma_d(n)`.
    pub fn congruence_member(&self, d: u32, variant: CongruenceVariant) -> Result<bool, LinalgError> {
        let reduced = self.reduce_mod(d)?;
        if !reduced.is_identity() {
            return Ok(false);
        }
        let det = self.determinant();
        Ok(match variant {
            CongruenceVariant::Special => det.is_one(),
            CongruenceVariant::General => det.is_one() || (-det).is_one(),
        })
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix[{self}]")
    }
}

/// Text format: rows separated by `;`, entries by `,`.
impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, row) in self.data.chunks(self.n).enumerate() {
            if r > 0 {
                f.write_str(";")?;
            }
            for (c, v) in row.iter().enumerate() {
                if c > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

fn parse_rows(s: &str) -> Result<Vec<Vec<BigInt>>, LinalgError> {
    s.trim()
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|e| {
                    e.trim()
                        .parse::<BigInt>()
                        .map_err(|_| LinalgError::Parse(format!("bad entry {:?}", e.trim())))
                })
                .collect()
        })
        .collect()
}

impl FromStr for IntMatrix {
    type Err = LinalgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        IntMatrix::from_rows(&parse_rows(s)?)
    }
}

/// JSON form: array of arrays of decimal strings.
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .data
            .chunks(self.n)
            .map(|r| r.iter().map(|v| v.to_string()).collect())
            .collect();
        let mut seq = serializer.serialize_seq(Some(rows.len()))?;
        for row in &rows {
            seq.serialize_element(row)?;
        }
        seq.end()
    }
}

/// Square matrix over `Z/modulus` with canonical residues in `[0, modulus)`.
///
/// Row-major entry lists double as hash keys for finite group closures.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModMatrix {
    n: usize,
    modulus: u32,
    data: Vec<u32>,
}

impl ModMatrix {
    pub fn identity(n: usize, modulus: u32) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1 % modulus;
        }
        ModMatrix { n, modulus, data }
    }

    pub fn from_entries(n: usize, modulus: u32, entries: &[i64]) -> Result<Self, LinalgError> {
        if modulus < 2 {
            return Err(LinalgError::BadModulus(modulus as i64));
        }
        if entries.len() != n * n || n == 0 {
            return Err(LinalgError::NotSquare);
        }
        let data = entries
            .iter()
            .map(|&v| v.rem_euclid(modulus as i64) as u32)
            .collect();
        Ok(ModMatrix { n, modulus, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.data[row * self.n + col]
    }

    /// Row-major residues.
    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    pub fn is_identity(&self) -> bool {
        *self == ModMatrix::identity(self.n, self.modulus)
    }

    pub fn multiply(&self, other: &ModMatrix) -> Result<ModMatrix, LinalgError> {
        if self.modulus != other.modulus {
            return Err(LinalgError::ModulusMismatch(self.modulus, other.modulus));
        }
        if self.n != other.n {
            return Err(LinalgError::DimensionMismatch(self.n, other.n));
        }
        Ok(self.mul_unchecked(other))
    }

    /// Product without the compatibility checks; callers guarantee matching shape.
    pub(crate) fn mul_unchecked(&self, other: &ModMatrix) -> ModMatrix {
        let n = self.n;
        let m = self.modulus as u64;
        let mut data = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u64;
                for k in 0..n {
                    acc += self.data[i * n + k] as u64 * other.data[k * n + j] as u64;
                }
                data[i * n + j] = (acc % m) as u32;
            }
        }
        ModMatrix {
            n,
            modulus: self.modulus,
            data,
        }
    }

    pub fn transpose(&self) -> ModMatrix {
        let n = self.n;
        let mut data = self.data.clone();
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j];
            }
        }
        ModMatrix {
            n,
            modulus: self.modulus,
            data,
        }
    }

    /// Canonical integer lift with entries in `[0, modulus)`.
    pub fn lift(&self) -> IntMatrix {
        IntMatrix {
            n: self.n,
            data: self.data.iter().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn inverse(&self) -> Result<ModMatrix, LinalgError> {
        let lifted = self.lift();
        let m = BigInt::from(self.modulus);
        let det = lifted.determinant().mod_floor(&m);
        let ext = det.extended_gcd(&m);
        if !ext.gcd.is_one() {
            return Err(LinalgError::NotInvertibleMod(self.modulus));
        }
        let det_inv = ext.x.mod_floor(&m);
        let adj = lifted.adjugate();
        let data = adj
            .data
            .iter()
            .map(|v| (v * &det_inv).mod_floor(&m).to_u32().expect("residue fits"))
            .collect();
        Ok(ModMatrix {
            n: self.n,
            modulus: self.modulus,
            data,
        })
    }

    pub fn pow(&self, exp: u64) -> ModMatrix {
        let mut acc = ModMatrix::identity(self.n, self.modulus);
        let mut sq = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul_unchecked(&sq);
            }
        }
        acc
    }
}

impl fmt::Debug for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModMatrix[{self} mod {}]", self.modulus)
    }
}

impl fmt::Display for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, row) in self.data.chunks(self.n).enumerate() {
            if r > 0 {
                f.write_str(";")?;
            }
            for (c, v) in row.iter().enumerate() {
                if c > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for ModMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .data
            .chunks(self.n)
            .map(|r| r.iter().map(|v| v.to_string()).collect())
            .collect();
        let mut seq = serializer.serialize_seq(Some(rows.len()))?;
        for row in &rows {
            seq.serialize_element(row)?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn identity_products() {
        let i = IntMatrix::identity(3);
        assert_eq!(i.multiply(&i).unwrap(), i);
        assert_eq!(i.inverse().unwrap(), i);
    }

    #[test]
    fn elementary_products_by_hand() {
        let e12 = IntMatrix::elementary(2, 1, 2, 1).unwrap();
        let e21 = IntMatrix::elementary(2, 2, 1, 1).unwrap();
        assert_eq!(e12.multiply(&e21).unwrap(), m(&[&[2, 1], &[1, 1]]));
        let e12 = IntMatrix::elementary(2, 1, 2, 3).unwrap();
        let e21 = IntMatrix::elementary(2, 2, 1, 3).unwrap();
        assert_eq!(e12.multiply(&e21).unwrap(), m(&[&[10, 3], &[3, 1]]));
    }

    #[test]
    fn slide_matrix_products() {
        // Phi(Y_{2,1})^{-1} Phi(Y_{1,2}) in genus 3
        let y21 = m(&[&[1, 0], &[2, -1]]);
        let y12 = m(&[&[-1, 2], &[0, 1]]);
        let prod = y21.inverse().unwrap().multiply(&y12).unwrap();
        assert_eq!(prod, m(&[&[-1, 2], &[-2, 3]]));
        assert_eq!(y12.inverse().unwrap(), y12);
        assert!(y12.multiply(&y12).unwrap().is_identity());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = IntMatrix::identity(2);
        let b = IntMatrix::identity(3);
        assert_eq!(a.multiply(&b), Err(LinalgError::DimensionMismatch(2, 3)));
    }

    #[test]
    fn elementary_cases() {
        assert_eq!(IntMatrix::elementary(2, 1, 2, 1).unwrap(), m(&[&[1, 1], &[0, 1]]));
        assert!(IntMatrix::elementary(4, 2, 3, 0).unwrap().is_identity());
        let e = IntMatrix::elementary(3, 2, 1, 4).unwrap();
        assert_eq!(e, m(&[&[1, 0, 0], &[4, 1, 0], &[0, 0, 1]]));
        assert_eq!(
            IntMatrix::elementary(3, 2, 2, 1),
            Err(LinalgError::DiagonalElementary(2))
        );
        let e = IntMatrix::elementary(3, 1, 3, 5).unwrap();
        assert_eq!(e.pow(3).unwrap().inverse().unwrap(), IntMatrix::elementary(3, 1, 3, -15).unwrap());
    }

    #[test]
    fn non_unimodular_inverse_fails() {
        let a = m(&[&[2, 0], &[0, 1]]);
        assert!(matches!(a.inverse(), Err(LinalgError::NotUnimodular(_))));
    }

    #[test]
    fn reductions() {
        assert!(IntMatrix::identity(3).reduce_mod(5).unwrap().is_identity());
        assert!(IntMatrix::elementary(3, 1, 2, 4).unwrap().reduce_mod(4).unwrap().is_identity());
        assert!(m(&[&[-1, 2], &[0, 1]]).reduce_mod(2).unwrap().is_identity());
        assert_eq!(IntMatrix::identity(2).reduce_mod(1), Err(LinalgError::BadModulus(1)));
    }

    #[test]
    fn congruence_membership() {
        use CongruenceVariant::*;
        for d in 2..7 {
            assert!(IntMatrix::identity(3).congruence_member(d, Special).unwrap());
            let e = IntMatrix::elementary(3, 1, 2, d as i64).unwrap();
            assert!(e.congruence_member(d, Special).unwrap());
        }
        let neg = m(&[&[-1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(neg.congruence_member(2, General).unwrap());
        assert!(!neg.congruence_member(2, Special).unwrap());
        assert!(!neg.congruence_member(3, General).unwrap());
    }

    #[test]
    fn text_format_round_trip() {
        let a: IntMatrix = "1,0;4,1".parse().unwrap();
        assert_eq!(a, IntMatrix::elementary(2, 2, 1, 4).unwrap());
        assert_eq!(a.to_string(), "1,0;4,1");
        assert!("1,0;4".parse::<IntMatrix>().is_err());
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"[["1","0"],["4","1"]]"#);
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let a = m(&[&[2, -1, 0, 3], &[1, 4, -2, 0], &[0, 5, 1, 1], &[-3, 0, 2, 2]]);
        // adjugate identity: A adj(A) = det(A) I
        let det = a.determinant();
        let prod = a.multiply(&a.adjugate()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { det.clone() } else { BigInt::zero() };
                assert_eq!(prod.get(i, j), &want);
            }
        }
        assert_eq!(det, BigInt::from(142));
    }

    #[test]
    fn mixing_moduli_is_an_error() {
        let a = ModMatrix::identity(2, 4);
        let b = ModMatrix::identity(2, 8);
        assert_eq!(a.multiply(&b), Err(LinalgError::ModulusMismatch(4, 8)));
    }

    fn elementary_word(n: usize, d: i64, word: &[(usize, usize, bool)]) -> IntMatrix {
        let mut acc = IntMatrix::identity(n);
        for &(i, j, inv) in word {
            let k = if inv { -d } else { d };
            acc = acc.multiply(&IntMatrix::elementary(n, i, j, k).unwrap()).unwrap();
        }
        acc
    }

    fn small_matrix(n: usize) -> impl Strategy<Value = IntMatrix> {
        proptest::collection::vec(-9i64..10, n * n).prop_map(move |v| {
            let rows: Vec<Vec<i64>> = v.chunks(n).map(|c| c.to_vec()).collect();
            IntMatrix::from_rows(&rows).unwrap()
        })
    }

    fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
        proptest::collection::vec((1..=n, 1..=n, -3i64..4, any::<bool>()), 0..12).prop_map(move |steps| {
            let mut acc = IntMatrix::identity(n);
            for (i, j, k, flip) in steps {
                if i != j {
                    acc = acc.multiply(&IntMatrix::elementary(n, i, j, k).unwrap()).unwrap();
                }
                if flip {
                    let mut d = IntMatrix::identity(n);
                    d.set(i - 1, i - 1, BigInt::from(-1));
                    acc = acc.multiply(&d).unwrap();
                }
            }
            acc
        })
    }

    proptest! {
        #[test]
        fn multiply_is_associative(a in small_matrix(3), b in small_matrix(3), c in small_matrix(3)) {
            let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn inverse_of_unimodular(a in unimodular(4)) {
            let inv = a.inverse().unwrap();
            prop_assert!(inv.multiply(&a).unwrap().is_identity());
            prop_assert!(a.multiply(&inv).unwrap().is_identity());
        }

        #[test]
        fn reduction_is_multiplicative(a in small_matrix(3), b in small_matrix(3), d in 2u32..13) {
            let lhs = a.multiply(&b).unwrap().reduce_mod(d).unwrap();
            let rhs = a.reduce_mod(d).unwrap().multiply(&b.reduce_mod(d).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn congruence_subgroup_closure(
            d in 2i64..7,
            w1 in proptest::collection::vec((1usize..=3, 1usize..=3, any::<bool>()), 0..8),
            w2 in proptest::collection::vec((1usize..=3, 1usize..=3, any::<bool>()), 0..8),
        ) {
            let w1: Vec<_> = w1.into_iter().filter(|(i, j, _)| i != j).collect();
            let w2: Vec<_> = w2.into_iter().filter(|(i, j, _)| i != j).collect();
            let a = elementary_word(3, d, &w1);
            let b = elementary_word(3, d, &w2);
            let du = d as u32;
            prop_assert!(a.congruence_member(du, CongruenceVariant::Special).unwrap());
            prop_assert!(b.congruence_member(du, CongruenceVariant::Special).unwrap());
            let ab = a.multiply(&b).unwrap();
            prop_assert!(ab.congruence_member(du, CongruenceVariant::Special).unwrap());
            prop_assert!(a.inverse().unwrap().congruence_member(du, CongruenceVariant::Special).unwrap());
        }

        #[test]
        fn variants_agree_above_two(a in unimodular(3), d in 3u32..9) {
            prop_assert_eq!(
                a.congruence_member(d, CongruenceVariant::Special).unwrap(),
                a.congruence_member(d, CongruenceVariant::General).unwrap()
            );
        }

        #[test]
        fn modular_inverse(a in unimodular(3), d in 2u32..17) {
            let r = a.reduce_mod(d).unwrap();
            prop_assert!(r.inverse().unwrap().multiply(&r).unwrap().is_identity());
        }
    }
}
