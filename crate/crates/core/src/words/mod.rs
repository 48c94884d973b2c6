//! Words in the mapping class group alphabet.
//!
//! A word is a sequence of `(letter, exponent)` pairs. The written word `g f`
//! applies `f` first. Named family letters (`A`, `B`, `C`, `D`) expand to
//! their twist/slide realizations; boundary-curve letters are names only and
//! have no homology action.

mod families;
mod identities;
mod parse;
mod theorems;

use std::fmt;

pub use families::{
    d_trivial_signs, enum_family, family_size, named, transversal_2y, transversal_2y_word, transversal_2z, y_set, z_set, Family,
    NamedElement,
};
pub use identities::{
    commutator_lemma_identities, family_dual_identities, three_chain_identities, twist_square_identities, Identity,
};
pub use theorems::{
    h_set, thm_gen_n_sets, thm_main2_normal_generators, thm_main3_generators, BoundaryRange, GenNSets,
    Main2Record, Main3Stream,
};

use crate::homology::{Generator, HomologyError, TorelliTag};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(usize, usize),
    #[error("invalid indices for {family}: {indices:?} (genus {g})")]
    BadIndices { family: String, indices: Vec<usize>, g: usize },
    #[error("{0} is a boundary curve name and has no homology action")]
    NoHomologyAction(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("neither sign makes {0} act trivially")]
    NoTrivialSign(String),
    #[error(transparent)]
    Homology(#[from] Box<HomologyError>),
}

impl From<HomologyError> for WordError {
    fn from(e: HomologyError) -> Self {
        WordError::Homology(Box::new(e))
    }
}

/// Named elements of the families `𝒜, ℬ, 𝒞, 𝒟`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NamedLetter {
    A(usize, usize),
    B(usize, usize),
    C(usize, usize, usize),
    /// `D_{1,j,k,l}`.
    D(usize, usize, usize),
}

/// Curves that live on surfaces with boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryLetter {
    Delta(usize),
    Epsilon(usize, usize),
    Zeta(usize, usize),
    ZetaBar(usize, usize),
    Eta(usize, usize, usize),
    /// `α_{i;l}`.
    AlphaPunct(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Gen(Generator),
    Named(NamedLetter),
    Boundary(BoundaryLetter),
}

impl Letter {
    pub fn twist(set: &[usize]) -> Letter {
        Letter::Gen(Generator::Twist(set.to_vec()))
    }

    pub fn slide(a: usize, b: usize) -> Letter {
        Letter::Gen(Generator::Slide(a, b))
    }

    fn validate(&self, g: usize) -> Result<(), WordError> {
        let bad = |family: &str, indices: Vec<usize>| WordError::BadIndices {
            family: family.to_string(),
            indices,
            g,
        };
        let inrange = |xs: &[usize]| xs.iter().all(|&x| x >= 1 && x <= g);
        match *self {
            Letter::Gen(ref gen) => gen.validate(g).map_err(WordError::from),
            Letter::Named(NamedLetter::A(i, j)) => {
                if i < j && inrange(&[i, j]) {
                    Ok(())
                } else {
                    Err(bad("A", vec![i, j]))
                }
            }
            Letter::Named(NamedLetter::B(i, j)) => {
                if i != j && inrange(&[i, j]) {
                    Ok(())
                } else {
                    Err(bad("B", vec![i, j]))
                }
            }
            Letter::Named(NamedLetter::C(i, j, k)) => {
                if i < j && k != i && k != j && inrange(&[i, j, k]) {
                    Ok(())
                } else {
                    Err(bad("C", vec![i, j, k]))
                }
            }
            Letter::Named(NamedLetter::D(j, k, l)) => {
                if 1 < j && j < k && k < l && l <= g {
                    Ok(())
                } else {
                    Err(bad("D", vec![1, j, k, l]))
                }
            }
            Letter::Boundary(b) => {
                let idx: Vec<usize> = match b {
                    BoundaryLetter::Delta(k) => vec![k],
                    BoundaryLetter::Epsilon(j, k) => {
                        if j > g {
                            return Err(bad("eps", vec![j, k]));
                        }
                        vec![j, k]
                    }
                    BoundaryLetter::Zeta(k, l) | BoundaryLetter::ZetaBar(k, l) => {
                        if k >= l {
                            return Err(bad("zeta", vec![k, l]));
                        }
                        vec![k, l]
                    }
                    BoundaryLetter::Eta(i, j, k) => {
                        if !(i < j && j < g) {
                            return Err(bad("eta", vec![i, j, k]));
                        }
                        vec![i, j, k]
                    }
                    BoundaryLetter::AlphaPunct(i, l) => {
                        if i >= g {
                            return Err(bad("alpha", vec![i, l]));
                        }
                        vec![i, l]
                    }
                };
                if idx.iter().all(|&x| x >= 1) {
                    Ok(())
                } else {
                    Err(bad("boundary", idx))
                }
            }
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[usize]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            Letter::Gen(Generator::Twist(s)) => write!(f, "T({})", join(s)),
            Letter::Gen(Generator::Slide(a, b)) => write!(f, "Y({a},{b})"),
            Letter::Gen(Generator::Torelli(TorelliTag::Beta(i, j))) => write!(f, "Bname({i},{j})"),
            Letter::Gen(Generator::Torelli(TorelliTag::Gamma)) => write!(f, "Gamma"),
            Letter::Named(NamedLetter::A(i, j)) => write!(f, "A({i},{j})"),
            Letter::Named(NamedLetter::B(i, j)) => write!(f, "B({i},{j})"),
            Letter::Named(NamedLetter::C(i, j, k)) => write!(f, "C({i},{j};{k})"),
            Letter::Named(NamedLetter::D(j, k, l)) => write!(f, "D(1,{j},{k},{l})"),
            Letter::Boundary(BoundaryLetter::Delta(k)) => write!(f, "delta({k})"),
            Letter::Boundary(BoundaryLetter::Epsilon(j, k)) => write!(f, "eps({j},{k})"),
            Letter::Boundary(BoundaryLetter::Zeta(k, l)) => write!(f, "zeta({k},{l})"),
            Letter::Boundary(BoundaryLetter::ZetaBar(k, l)) => write!(f, "zetabar({k},{l})"),
            Letter::Boundary(BoundaryLetter::Eta(i, j, k)) => write!(f, "eta({i},{j};{k})"),
            Letter::Boundary(BoundaryLetter::AlphaPunct(i, l)) => write!(f, "alpha({i};{l})"),
        }
    }
}

/// A freely reduced word for a fixed genus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct McgWord {
    g: usize,
    letters: Vec<(Letter, i64)>,
}

impl McgWord {
    pub fn identity(g: usize) -> Self {
        McgWord { g, letters: Vec::new() }
    }

    pub fn from_letters(g: usize, letters: Vec<(Letter, i64)>) -> Result<Self, WordError> {
        for (l, _) in &letters {
            l.validate(g)?;
        }
        let mut w = McgWord { g, letters: Vec::new() };
        for (l, e) in letters {
            w.push(l, e);
        }
        Ok(w)
    }

    pub fn letter(g: usize, letter: Letter, exp: i64) -> Result<Self, WordError> {
        McgWord::from_letters(g, vec![(letter, exp)])
    }

    pub fn parse(text: &str, g: usize) -> Result<Self, WordError> {
        parse::parse_word(text, g)
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn letters(&self) -> &[(Letter, i64)] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Appends one letter and re-reduces the tail.
    fn push(&mut self, letter: Letter, exp: i64) {
        if exp == 0 {
            return;
        }
        if let Some((last, e)) = self.letters.last_mut() {
            if *last == letter {
                *e += exp;
                if *e == 0 {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push((letter, exp));
    }

    fn check_genus(&self, other: &McgWord) -> Result<(), WordError> {
        if self.g != other.g {
            Err(WordError::GenusMismatch(self.g, other.g))
        } else {
            Ok(())
        }
    }

    pub fn mul(&self, other: &McgWord) -> Result<McgWord, WordError> {
        self.check_genus(other)?;
        let mut w = self.clone();
        for (l, e) in &other.letters {
            w.push(l.clone(), *e);
        }
        Ok(w)
    }

    pub fn inverse(&self) -> McgWord {
        McgWord {
            g: self.g,
            letters: self.letters.iter().rev().map(|(l, e)| (l.clone(), -e)).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> McgWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut w = McgWord::identity(self.g);
        for _ in 0..n.unsigned_abs() {
            for (l, e) in &base.letters {
                w.push(l.clone(), *e);
            }
        }
        w
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    pub fn commutator(a: &McgWord, b: &McgWord) -> Result<McgWord, WordError> {
        a.mul(b)?.mul(&a.inverse())?.mul(&b.inverse())
    }

    /// `b a b⁻¹`.
    pub fn conjugate(a: &McgWord, b: &McgWord) -> Result<McgWord, WordError> {
        b.mul(a)?.mul(&b.inverse())
    }

    pub fn has_boundary_letters(&self) -> bool {
        self.letters.iter().any(|(l, _)| matches!(l, Letter::Boundary(_)))
    }

    /// Expands named letters into base generators.
    pub fn expand(&self) -> Result<Vec<(Generator, i64)>, WordError> {
        let mut out = Vec::new();
        self.expand_into(&mut out)?;
        Ok(out)
    }

    fn expand_into(&self, out: &mut Vec<(Generator, i64)>) -> Result<(), WordError> {
        for (l, e) in &self.letters {
            match l {
                Letter::Gen(gen) => out.push((gen.clone(), *e)),
                Letter::Named(n) => {
                    let real = families::realize(*n, self.g)?;
                    real.pow(*e).expand_into(out)?;
                }
                Letter::Boundary(_) => return Err(WordError::NoHomologyAction(l.to_string())),
            }
        }
        Ok(())
    }
}

impl fmt::Display for McgWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (idx, (l, e)) in self.letters.iter().enumerate() {
            if idx > 0 {
                f.write_str(" ")?;
            }
            if *e == 1 {
                write!(f, "{l}")?;
            } else {
                write!(f, "{l}^{e}")?;
            }
        }
        Ok(())
    }
}
