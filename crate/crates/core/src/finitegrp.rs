//! Finite quotients: closures of matrix groups over `Z/d`, normal closures,
//! Reidemeister–Schreier generators over a finite quotient, and Todd–Coxeter
//! coset enumeration.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use indexmap::IndexSet;
use rayon::prelude::*;
use serde_json::json;

use crate::automaton::{column, InverseAutomaton};
use crate::linalg::{LinalgError, ModMatrix};
use crate::words::McgWord;

pub const DEFAULT_CAP: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FiniteGroupError {
    #[error("element cap {cap} exceeded")]
    CapExceeded { cap: usize },
    #[error("generator has shape {got:?}, expected {want:?}")]
    Shape { want: (usize, u32), got: (usize, u32) },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A subgroup of `GL(n; Z/d)` held as an explicit element set.
#[derive(Debug, Clone)]
pub struct FiniteMatrixGroup {
    n: usize,
    modulus: u32,
    elements: IndexSet<ModMatrix>,
    generators: Vec<ModMatrix>,
    cap: usize,
}

impl FiniteMatrixGroup {
    pub fn trivial(n: usize, modulus: u32, cap: usize) -> Self {
        let mut elements = IndexSet::new();
        elements.insert(ModMatrix::identity(n, modulus));
        FiniteMatrixGroup {
            n,
            modulus,
            elements,
            generators: Vec::new(),
            cap,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn generators(&self) -> &[ModMatrix] {
        &self.generators
    }

    pub fn contains(&self, m: &ModMatrix) -> bool {
        self.elements.contains(m)
    }

    pub fn elements(&self) -> impl Iterator<Item = &ModMatrix> {
        self.elements.iter()
    }

    pub fn element_set(&self) -> HashSet<ModMatrix> {
        self.elements.iter().cloned().collect()
    }

    /// Same element set.
    pub fn same_elements(&self, other: &FiniteMatrixGroup) -> bool {
        self.order() == other.order() && self.elements.iter().all(|m| other.contains(m))
    }

    pub fn is_subgroup_of(&self, other: &FiniteMatrixGroup) -> bool {
        self.elements.iter().all(|m| other.contains(m))
    }

    /// Smallest `e` with `x^e = 1` for all elements.
    pub fn exponent(&self) -> u64 {
        let mut e: u64 = 1;
        for x in &self.elements {
            let mut k = 1u64;
            let mut p = x.clone();
            while !p.is_identity() {
                p = p.mul_unchecked(x);
                k += 1;
            }
            e = num_integer::lcm(e, k);
        }
        e
    }

    fn check_shape(&self, m: &ModMatrix) -> Result<(), FiniteGroupError> {
        if m.dim() != self.n || m.modulus() != self.modulus {
            return Err(FiniteGroupError::Shape {
                want: (self.n, self.modulus),
                got: (m.dim(), m.modulus()),
            });
        }
        Ok(())
    }

    /// Adds generators, extending the element set. Only paths leaving the
    /// current group through a new generator need exploring.
    pub fn extend(&mut self, gens: &[ModMatrix]) -> Result<(), FiniteGroupError> {
        for s in gens {
            self.check_shape(s)?;
            if self.elements.contains(s) {
                continue;
            }
            self.generators.push(s.clone());
            let seeds: Vec<ModMatrix> = self.elements.par_iter().map(|x| x.mul_unchecked(s)).collect();
            let mut frontier = Vec::new();
            for y in seeds {
                if self.elements.insert(y.clone()) {
                    frontier.push(y);
                }
            }
            self.guard()?;
            while !frontier.is_empty() {
                let gens = &self.generators;
                let products: Vec<ModMatrix> = frontier
                    .par_iter()
                    .flat_map_iter(|x| gens.iter().map(move |g| x.mul_unchecked(g)))
                    .collect();
                frontier.clear();
                for y in products {
                    if self.elements.insert(y.clone()) {
                        frontier.push(y);
                    }
                }
                self.guard()?;
            }
        }
        Ok(())
    }

    fn guard(&self) -> Result<(), FiniteGroupError> {
        if self.elements.len() > self.cap {
            Err(FiniteGroupError::CapExceeded { cap: self.cap })
        } else {
            Ok(())
        }
    }

    /// JSON dump; elements are listed only up to `threshold`.
    pub fn to_json(&self, threshold: usize) -> serde_json::Value {
        let mut v = json!({
            "dimension": self.n,
            "modulus": self.modulus,
            "order": self.order(),
            "generators": self.generators.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        });
        if self.order() <= threshold {
            v["elements"] = json!(self.elements.iter().map(|m| m.to_string()).collect::<Vec<_>>());
        }
        v
    }
}

pub fn bfs_closure(n: usize, d: u32, gens: &[ModMatrix], cap: usize) -> Result<FiniteMatrixGroup, FiniteGroupError> {
    let mut grp = FiniteMatrixGroup::trivial(n, d, cap);
    grp.extend(gens)?;
    Ok(grp)
}

/// Smallest subgroup containing `normal_gens` and normalized by `ambient_gens`.
pub fn normal_closure(
    n: usize,
    d: u32,
    ambient_gens: &[ModMatrix],
    normal_gens: &[ModMatrix],
    cap: usize,
) -> Result<FiniteMatrixGroup, FiniteGroupError> {
    let mut grp = bfs_closure(n, d, normal_gens, cap)?;
    let ambient: Vec<(ModMatrix, ModMatrix)> = ambient_gens
        .iter()
        .map(|a| {
            grp.check_shape(a)?;
            Ok((a.clone(), a.inverse()?))
        })
        .collect::<Result<_, FiniteGroupError>>()?;
    let mut done = 0;
    while done < grp.generators.len() {
        let h = grp.generators[done].clone();
        done += 1;
        let conj: Vec<ModMatrix> = ambient
            .iter()
            .map(|(a, ai)| a.mul_unchecked(&h).mul_unchecked(ai))
            .filter(|c| !grp.contains(c))
            .collect();
        grp.extend(&conj)?;
    }
    Ok(grp)
}

/// Words that can be multiplied and inverted, for Reidemeister–Schreier.
pub trait GroupWord: Clone + Eq + Hash {
    fn identity_like(&self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn inv(&self) -> Self;
    fn is_trivial(&self) -> bool;
}

impl GroupWord for McgWord {
    fn identity_like(&self) -> Self {
        McgWord::identity(self.genus())
    }

    fn times(&self, other: &Self) -> Self {
        self.mul(other).expect("words of equal genus")
    }

    fn inv(&self) -> Self {
        self.inverse()
    }

    fn is_trivial(&self) -> bool {
        self.is_identity()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RsError {
    #[error("transversal is not a section: entries {0} and {1} share a coset")]
    DuplicateCoset(usize, usize),
    #[error("transversal is not a section: no representative for the coset of a {0}")]
    MissingCoset(String),
    #[error("empty transversal")]
    Empty,
}

/// Schreier generators `y·x^{±1}·(overline{y·x^{±1}})^{-1}` for the subgroup
/// `quotient^{-1}(quotient(1))`.
///
/// Trivial outputs and outputs equal to an earlier output or its inverse are
/// dropped, so a trivial quotient yields the generators themselves.
pub fn rs_generators<W, K, Q>(quotient: Q, transversal: &[W], gens: &[W]) -> Result<Vec<W>, RsError>
where
    W: GroupWord,
    K: Eq + Hash,
    Q: Fn(&W) -> K,
{
    if transversal.is_empty() {
        return Err(RsError::Empty);
    }
    let mut table: HashMap<K, usize> = HashMap::with_capacity(transversal.len());
    for (i, y) in transversal.iter().enumerate() {
        if let Some(&j) = table.get(&quotient(y)) {
            return Err(RsError::DuplicateCoset(j, i));
        }
        table.insert(quotient(y), i);
    }
    let mut seen: HashSet<W> = HashSet::new();
    let mut out = Vec::new();
    for y in transversal {
        for x in gens {
            for xs in [x.clone(), x.inv()] {
                let yx = y.times(&xs);
                let Some(&bar) = table.get(&quotient(&yx)) else {
                    return Err(RsError::MissingCoset("product y·x".into()));
                };
                let bar = &transversal[bar];
                if *bar == yx {
                    continue;
                }
                let s = yx.times(&bar.inv());
                if s.is_trivial() || seen.contains(&s) || seen.contains(&s.inv()) {
                    continue;
                }
                seen.insert(s.clone());
                out.push(s);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TcError {
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("relator letter {0} outside the alphabet")]
    BadLetter(i32),
    #[error("enumeration finished with an incomplete table")]
    Incomplete,
    #[error("inconclusive: coset cap {cap} reached")]
    Inconclusive { cap: usize },
}

/// A completed coset table, renumbered so that coset 0 is the subgroup.
///
/// Columns are `2i` for generator `i` and `2i + 1` for its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetTable {
    rank: usize,
    rows: Vec<Vec<usize>>,
}

impl CosetTable {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cosets(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Coset reached from `start` by reading a word of signed 1-based letters.
    pub fn trace(&self, start: usize, word: &[i32]) -> usize {
        word.iter().fold(start, |c, &l| self.rows[c][column(l)])
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "rank": self.rank, "cosets": self.cosets(), "rows": self.rows })
    }
}

/// Enumerates the cosets of the trivial subgroup in
/// `⟨x_1, …, x_rank | relators⟩`, so the result size is the group order.
pub fn todd_coxeter(rank: usize, relators: &[Vec<i32>], cap: usize) -> Result<CosetTable, TcError> {
    if rank == 0 {
        return Err(TcError::ZeroRank);
    }
    let rels: Vec<Vec<usize>> = relators
        .iter()
        .map(|r| {
            r.iter()
                .map(|&l| {
                    if l == 0 || l.unsigned_abs() as usize > rank {
                        Err(TcError::BadLetter(l))
                    } else {
                        Ok(column(l))
                    }
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let cols = 2 * rank;
    let mut e = InverseAutomaton::new(rank, cap);
    let mut c = 0;
    while c < e.table.len() {
        let mut r = 0;
        while r < rels.len() && e.is_live(c) {
            if e.scan(c, &rels[r], true) {
                r += 1;
                continue;
            }
            e.lookahead(&rels);
            if e.at_cap() {
                return Err(TcError::Inconclusive { cap });
            }
        }
        let mut x = 0;
        while x < cols && e.is_live(c) {
            if e.table[c][x] == crate::automaton::NONE && e.define(c, x).is_none() {
                e.lookahead(&rels);
                if e.at_cap() {
                    return Err(TcError::Inconclusive { cap });
                }
                continue;
            }
            x += 1;
        }
        c += 1;
    }
    let table = CosetTable { rank, rows: e.compact() };
    let closed = table.rows.iter().all(|r| r.iter().all(|&t| t != crate::automaton::NONE))
        && (0..table.cosets()).all(|c| relators.iter().all(|r| table.trace(c, r) == c));
    if !closed {
        return Err(TcError::Incomplete);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{phi, SurfaceCtx};
    use crate::linalg::IntMatrix;
    use crate::words::{enum_family, transversal_2y, Family};

    fn m(entries: &[i64], d: u32) -> ModMatrix {
        let n = (entries.len() as f64).sqrt() as usize;
        ModMatrix::from_entries(n, d, entries).unwrap()
    }

    #[test]
    fn identity_closure() {
        let g = bfs_closure(2, 5, &[ModMatrix::identity(2, 5)], DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.exponent(), 1);
    }

    #[test]
    fn sl2_mod_3() {
        let gens = [m(&[1, 1, 0, 1], 3), m(&[1, 0, 1, 1], 3)];
        let g = bfs_closure(2, 3, &gens, DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 24);
        assert!(matches!(
            bfs_closure(2, 3, &gens, 10),
            Err(FiniteGroupError::CapExceeded { cap: 10 })
        ));
        let bad = m(&[1, 1, 0, 1], 5);
        assert!(bfs_closure(2, 3, &[bad], DEFAULT_CAP).is_err());
    }

    #[test]
    fn slide_and_d_images_mod_4() {
        let ctx = SurfaceCtx::new(4).unwrap();
        let mut gens = Vec::new();
        for f in [Family::Y, Family::D] {
            for e in enum_family(f, 4).unwrap() {
                gens.push(phi(&e.word, ctx).unwrap().reduce_mod(4).unwrap());
            }
        }
        let g = bfs_closure(3, 4, &gens, DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 512);
        assert_eq!(g.exponent(), 2);
    }

    #[test]
    fn normal_closure_examples() {
        let gens = [m(&[1, 1, 0, 1], 3), m(&[1, 0, 1, 1], 3)];
        let triv = normal_closure(2, 3, &gens, &[ModMatrix::identity(2, 3)], DEFAULT_CAP).unwrap();
        assert_eq!(triv.order(), 1);
        let central = normal_closure(2, 3, &gens, &[m(&[2, 0, 0, 2], 3)], DEFAULT_CAP).unwrap();
        assert_eq!(central.order(), 2);
        let n = normal_closure(2, 3, &gens, &[gens[0].clone()], DEFAULT_CAP).unwrap();
        let all = bfs_closure(2, 3, &gens, DEFAULT_CAP).unwrap();
        assert_eq!(all.order() % n.order(), 0);
        // the normal closure of a transvection in SL(2,3) is all of SL(2,3)
        assert_eq!(n.order(), 24);
    }

    #[test]
    fn rs_trivial_quotient() {
        let w = |s: &str| McgWord::parse(s, 4).unwrap();
        let gens = vec![w("Y(1,2)"), w("T(1,2)")];
        let out = rs_generators(|_: &McgWord| (), &[McgWord::identity(4)], &gens).unwrap();
        assert_eq!(out, gens);
    }

    #[test]
    fn rs_not_a_section() {
        let w = |s: &str| McgWord::parse(s, 4).unwrap();
        let key = |x: &McgWord| phi(x, SurfaceCtx::new(4).unwrap()).unwrap().reduce_mod(2).unwrap();
        let r = rs_generators(key, &[McgWord::identity(4), w("T(1,2)^2")], &[w("Y(1,2)")]);
        assert_eq!(r, Err(RsError::DuplicateCoset(0, 1)));
        let key3 = |x: &McgWord| phi(x, SurfaceCtx::new(4).unwrap()).unwrap().reduce_mod(3).unwrap();
        let r = rs_generators(key3, &[McgWord::identity(4)], &[w("Y(1,2)")]);
        assert!(matches!(r, Err(RsError::MissingCoset(_))));
    }

    #[test]
    fn rs_level_four_generators() {
        let ctx = SurfaceCtx::new(4).unwrap();
        let key = |x: &McgWord| phi(x, ctx).unwrap().reduce_mod(4).unwrap();
        let trans: Vec<McgWord> = transversal_2y(4).unwrap().collect();
        let mut gens: Vec<McgWord> = enum_family(Family::Y, 4).unwrap().into_iter().map(|e| e.word).collect();
        gens.extend(enum_family(Family::D, 4).unwrap().into_iter().map(|e| e.word));
        let out = rs_generators(key, &trans, &gens).unwrap();
        assert!(!out.is_empty());
        let id = IntMatrix::identity(3).reduce_mod(4).unwrap();
        for s in &out {
            assert_eq!(key(s), id);
        }
    }

    #[test]
    fn todd_coxeter_small() {
        assert_eq!(todd_coxeter(1, &[vec![1; 5]], 100).unwrap().cosets(), 5);
        let klein = [vec![1, 1], vec![2, 2], vec![1, 2, 1, 2]];
        let t = todd_coxeter(2, &klein, 100).unwrap();
        assert_eq!(t.cosets(), 4);
        for c in 0..4 {
            for r in &klein {
                assert_eq!(t.trace(c, r), c);
            }
        }
        let s3 = [vec![1, 1], vec![2, 2, 2], vec![1, 2, 1, 2]];
        assert_eq!(todd_coxeter(2, &s3, 100).unwrap().cosets(), 6);
        let a5 = [vec![1, 1], vec![2, 2, 2], vec![1, 2, 1, 2, 1, 2, 1, 2, 1, 2]];
        assert_eq!(todd_coxeter(2, &a5, 1000).unwrap().cosets(), 60);
        assert_eq!(todd_coxeter(2, &[vec![1, 2, -1, -2]], 50), Err(TcError::Inconclusive { cap: 50 }));
        assert_eq!(todd_coxeter(0, &[], 10), Err(TcError::ZeroRank));
        assert_eq!(todd_coxeter(1, &[vec![2]], 10), Err(TcError::BadLetter(2)));
    }

    #[test]
    fn todd_coxeter_matches_closure_on_klein() {
        let gens = [m(&[1, 0, 0, 2], 3), m(&[2, 0, 0, 1], 3)];
        let g = bfs_closure(2, 3, &gens, DEFAULT_CAP).unwrap();
        let t = todd_coxeter(2, &[vec![1, 1], vec![2, 2], vec![1, 2, 1, 2]], 100).unwrap();
        assert_eq!(g.order(), t.cosets());
    }
}
