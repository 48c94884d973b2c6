//! The families `𝒴, 𝒜, ℬ, 𝒞, 𝒟` and the ordered transversals `2^𝒴`, `2^𝒵`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use super::{Letter, McgWord, NamedLetter, WordError};
use crate::homology::{same_h1_action, word_matrix, SurfaceCtx};
use crate::linalg::IntMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    Y,
    A,
    B,
    C,
    D,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Y => "Y",
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Family {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Y" => Ok(Family::Y),
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            _ => Err(WordError::OutOfRange(format!("unknown family {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedElement {
    pub family: Family,
    pub indices: Vec<usize>,
    /// The element as a single letter (`Y(i,j)`, `A(i,j)`, …).
    pub word: McgWord,
    /// Its expansion in twists and slides.
    pub realization: McgWord,
    /// The second published form, where one exists.
    pub alternate: Option<McgWord>,
    /// For `𝒟`: exponent of the conjugated twist.
    pub sign: Option<i64>,
}

fn word(g: usize, letters: Vec<(Letter, i64)>) -> McgWord {
    McgWord::from_letters(g, letters).expect("indices validated by caller")
}

fn t2(i: usize, j: usize) -> Letter {
    Letter::twist(&[i, j])
}

fn y(a: usize, b: usize) -> Letter {
    Letter::slide(a, b)
}

fn c_twist_form(g: usize, i: usize, j: usize, k: usize) -> McgWord {
    if i < k && k < j {
        // t^-2 · (Y_{k,i} t Y_{k,i}^-1)^2
        word(g, vec![(t2(i, j), -2), (y(k, i), 1), (t2(i, j), 2), (y(k, i), -1)])
    } else {
        // t^2 · (Y_{k,i}^-1 t Y_{k,i})^-2
        word(g, vec![(t2(i, j), 2), (y(k, i), -1), (t2(i, j), -2), (y(k, i), 1)])
    }
}

fn c_slide_form(g: usize, i: usize, j: usize, k: usize) -> McgWord {
    if i < k && k < j {
        word(g, vec![(y(k, j), 1), (y(k, i), 1)]).pow(2)
    } else {
        word(g, vec![(y(k, i), 1), (y(k, j), 1)]).pow(2)
    }
}

pub(crate) fn d_word(g: usize, j: usize, k: usize, l: usize, eps: i64) -> McgWord {
    let s = Letter::twist(&[1, j, k, l]);
    word(
        g,
        vec![(s.clone(), 1), (y(j, 1), 1), (y(k, l), -1), (s, eps), (y(k, l), 1), (y(j, 1), -1)],
    )
}

fn sign_cache() -> &'static Mutex<HashMap<(usize, usize, usize, usize), i64>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize, usize, usize), i64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Chooses the exponent of the conjugated twist in `D_{1,j,k,l}` so that the
/// whole word acts trivially on `H_1`; `+1` is tried first.
pub(crate) fn d_sign(g: usize, j: usize, k: usize, l: usize) -> Result<i64, WordError> {
    if let Some(&s) = sign_cache().lock().expect("cache lock").get(&(g, j, k, l)) {
        return Ok(s);
    }
    let ctx = SurfaceCtx::new(g)?;
    let id = IntMatrix::identity(g);
    for eps in [1, -1] {
        let m = word_matrix(&d_word(g, j, k, l, eps), ctx)?;
        if same_h1_action(&m, &id) {
            sign_cache().lock().expect("cache lock").insert((g, j, k, l), eps);
            return Ok(eps);
        }
    }
    Err(WordError::NoTrivialSign(format!("D(1,{j},{k},{l})")))
}

/// Both signs for `D_{1,j,k,l}` that give a trivial action.
pub fn d_trivial_signs(g: usize, j: usize, k: usize, l: usize) -> Result<Vec<i64>, WordError> {
    let ctx = SurfaceCtx::new(g)?;
    let id = IntMatrix::identity(g);
    let mut out = Vec::new();
    for eps in [1, -1] {
        if same_h1_action(&word_matrix(&d_word(g, j, k, l, eps), ctx)?, &id) {
            out.push(eps);
        }
    }
    Ok(out)
}

/// Expansion of a named letter into twists and slides.
pub(crate) fn realize(n: NamedLetter, g: usize) -> Result<McgWord, WordError> {
    Letter::Named(n).validate(g)?;
    Ok(match n {
        NamedLetter::A(i, j) => word(g, vec![(t2(i, j), 4)]),
        NamedLetter::B(i, j) => word(g, vec![(y(i, j), 2)]),
        NamedLetter::C(i, j, k) => c_twist_form(g, i, j, k),
        NamedLetter::D(j, k, l) => d_word(g, j, k, l, d_sign(g, j, k, l)?),
    })
}

/// `𝒴` in its total order: `Y_{i,j} < Y_{k,l}` iff `(i, j) < (k, l)`.
pub fn y_set(g: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..g {
        for j in 1..=g {
            if i != j {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn family_size(family: Family, g: usize) -> usize {
    let c2 = g * g.saturating_sub(1) / 2;
    match family {
        Family::Y => (g - 1) * (g - 1),
        Family::A | Family::B => c2,
        Family::C => c2 * g.saturating_sub(2),
        Family::D => {
            let m = g.saturating_sub(1);
            m * m.saturating_sub(1) * m.saturating_sub(2) / 6
        }
    }
}

pub fn named(family: Family, indices: &[usize], g: usize) -> Result<NamedElement, WordError> {
    let bad = || WordError::BadIndices {
        family: family.to_string(),
        indices: indices.to_vec(),
        g,
    };
    let (letter, alternate, sign) = match (family, indices) {
        (Family::Y, &[i, j]) => {
            if !(i >= 1 && i < g && j >= 1 && j <= g && i != j) {
                return Err(bad());
            }
            (y(i, j), None, None)
        }
        (Family::A, &[i, j]) => {
            let l = Letter::Named(NamedLetter::A(i, j));
            l.validate(g).map_err(|_| bad())?;
            let alt = word(g, vec![(y(j, i), -1), (y(i, j), 1)]).pow(2);
            (l, Some(alt), None)
        }
        (Family::B, &[i, j]) => {
            let l = Letter::Named(NamedLetter::B(i, j));
            if i >= j {
                return Err(bad());
            }
            l.validate(g).map_err(|_| bad())?;
            (l, Some(word(g, vec![(y(j, i), 2)])), None)
        }
        (Family::C, &[i, j, k]) => {
            let l = Letter::Named(NamedLetter::C(i, j, k));
            l.validate(g).map_err(|_| bad())?;
            (l, Some(c_slide_form(g, i, j, k)), None)
        }
        (Family::D, &[1, j, k, l]) => {
            let letter = Letter::Named(NamedLetter::D(j, k, l));
            letter.validate(g).map_err(|_| bad())?;
            (letter, None, Some(d_sign(g, j, k, l)?))
        }
        _ => return Err(bad()),
    };
    let single = word(g, vec![(letter.clone(), 1)]);
    let realization = match &letter {
        Letter::Named(n) => realize(*n, g)?,
        _ => single.clone(),
    };
    Ok(NamedElement {
        family,
        indices: indices.to_vec(),
        word: single,
        realization,
        alternate,
        sign,
    })
}

pub fn enum_family(family: Family, g: usize) -> Result<Vec<NamedElement>, WordError> {
    if g < 3 {
        return Err(WordError::OutOfRange(format!("families need genus >= 3, got {g}")));
    }
    let mut idx: Vec<Vec<usize>> = Vec::new();
    match family {
        Family::Y => idx.extend(y_set(g).into_iter().map(|(i, j)| vec![i, j])),
        Family::A | Family::B => {
            for i in 1..=g {
                for j in i + 1..=g {
                    idx.push(vec![i, j]);
                }
            }
        }
        Family::C => {
            for i in 1..=g {
                for j in i + 1..=g {
                    for k in 1..=g {
                        if k != i && k != j {
                            idx.push(vec![i, j, k]);
                        }
                    }
                }
            }
        }
        Family::D => {
            for j in 2..=g {
                for k in j + 1..=g {
                    for l in k + 1..=g {
                        idx.push(vec![1, j, k, l]);
                    }
                }
            }
        }
    }
    idx.iter().map(|ix| named(family, ix, g)).collect()
}

/// The element of `2^𝒴` whose factors are the set bits of `mask`.
pub fn transversal_2y_word(g: usize, mask: u64) -> McgWord {
    let ys = y_set(g);
    let letters = ys
        .iter()
        .enumerate()
        .filter(|(b, _)| mask >> b & 1 == 1)
        .map(|(_, &(i, j))| (y(i, j), 1))
        .collect();
    word(g, letters)
}

fn mask_count(bits: usize) -> Result<u64, WordError> {
    if bits > 40 {
        return Err(WordError::OutOfRange(format!("transversal of 2^{bits} elements is too large")));
    }
    Ok(1u64 << bits)
}

/// `2^𝒴` in bitmask order, starting with the empty word.
pub fn transversal_2y(g: usize) -> Result<impl Iterator<Item = McgWord>, WordError> {
    if g < 3 {
        return Err(WordError::OutOfRange(format!("2^Y needs genus >= 3, got {g}")));
    }
    let n = mask_count((g - 1) * (g - 1))?;
    Ok((0..n).map(move |m| transversal_2y_word(g, m)))
}

/// `𝒵` ordered with `A` elements before `C` elements, each lexicographically.
pub fn z_set(g: usize, l: u32) -> Result<Vec<McgWord>, WordError> {
    if l < 3 {
        return Err(WordError::OutOfRange(format!("Z needs l >= 3, got {l}")));
    }
    if g < 3 {
        return Err(WordError::OutOfRange(format!("Z needs genus >= 3, got {g}")));
    }
    let p = 1i64 << (l - 3);
    let mut out = Vec::new();
    for i in 1..=g - 2 {
        out.push(word(g, vec![(Letter::Named(NamedLetter::A(i, g - 1)), p)]));
    }
    for j in 1..g {
        for k in 1..g {
            if j != k {
                out.push(word(g, vec![(Letter::Named(NamedLetter::C(j, g, k)), p)]));
            }
        }
    }
    Ok(out)
}

/// `2^𝒵` in bitmask order over [`z_set`].
pub fn transversal_2z(g: usize, l: u32) -> Result<impl Iterator<Item = McgWord>, WordError> {
    let zs = z_set(g, l)?;
    let n = mask_count(zs.len())?;
    Ok((0..n).map(move |m| {
        let mut w = McgWord::identity(g);
        for (b, z) in zs.iter().enumerate() {
            if m >> b & 1 == 1 {
                w = w.mul(z).expect("same genus");
            }
        }
        w
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::phi;

    #[test]
    fn family_counts() {
        for g in 3..=6 {
            for f in [Family::Y, Family::A, Family::B, Family::C, Family::D] {
                assert_eq!(enum_family(f, g).unwrap().len(), family_size(f, g), "{f} g={g}");
            }
        }
        assert_eq!(family_size(Family::Y, 4), 9);
        assert_eq!(family_size(Family::A, 4), 6);
        assert_eq!(family_size(Family::C, 4), 12);
        assert_eq!(family_size(Family::D, 4), 1);
        assert_eq!(z_set(4, 3).unwrap().len(), 8);
        for g in 3..=6 {
            assert_eq!(z_set(g, 3).unwrap().len(), (g - 1) * (g - 1) - 1);
        }
    }

    #[test]
    fn transversal_order() {
        let mut t = transversal_2y(4).unwrap();
        assert!(t.next().unwrap().is_identity());
        assert_eq!(t.next().unwrap().to_string(), "Y(1,2)");
        assert_eq!(t.next().unwrap().to_string(), "Y(1,3)");
        assert_eq!(t.next().unwrap().to_string(), "Y(1,2) Y(1,3)");
        assert_eq!(transversal_2y(4).unwrap().count(), 512);
        assert_eq!(transversal_2z(4, 3).unwrap().count(), 256);
        assert!(z_set(4, 2).is_err());
    }

    #[test]
    fn named_constraints() {
        assert!(named(Family::Y, &[4, 1], 4).is_err());
        assert!(named(Family::A, &[2, 1], 4).is_err());
        assert!(named(Family::C, &[1, 2, 2], 4).is_err());
        assert!(named(Family::D, &[2, 3, 4, 5], 5).is_err());
        assert!(named(Family::D, &[1, 2, 3], 4).is_err());
    }

    #[test]
    fn a_under_phi() {
        let a = named(Family::A, &[1, 2], 3).unwrap();
        let c = SurfaceCtx::new(3).unwrap();
        let want = IntMatrix::from_rows(&[vec![-3i64, 4], vec![-4, 5]]).unwrap();
        assert_eq!(phi(&a.realization, c).unwrap(), want);
    }

    fn dual_forms_agree(f: Family, g: usize) {
        let c = SurfaceCtx::new(g).unwrap();
        for e in enum_family(f, g).unwrap() {
            let alt = e.alternate.as_ref().expect("dual form");
            let lhs = word_matrix(&e.realization, c).unwrap();
            let rhs = word_matrix(alt, c).unwrap();
            assert!(same_h1_action(&lhs, &rhs), "{f}{:?} g={g}", e.indices);
        }
    }

    #[test]
    fn dual_realizations() {
        for g in 3..=6 {
            dual_forms_agree(Family::A, g);
            dual_forms_agree(Family::B, g);
            dual_forms_agree(Family::C, g);
        }
    }

    #[test]
    fn b_acts_trivially() {
        for g in 3..=6 {
            let c = SurfaceCtx::new(g).unwrap();
            for e in enum_family(Family::B, g).unwrap() {
                assert!(same_h1_action(&word_matrix(&e.realization, c).unwrap(), &IntMatrix::identity(g)));
            }
        }
    }

    #[test]
    fn d_sign_choice() {
        // From genus 5 on exactly one sign works; in genus 4 the square of
        // the full twist is already trivial, so both do.
        assert_eq!(d_trivial_signs(4, 2, 3, 4).unwrap(), vec![1, -1]);
        for g in 5..=6 {
            for e in enum_family(Family::D, g).unwrap() {
                let (j, k, l) = (e.indices[1], e.indices[2], e.indices[3]);
                assert_eq!(d_trivial_signs(g, j, k, l).unwrap(), vec![1]);
                assert_eq!(e.sign, Some(1));
            }
        }
        let d = named(Family::D, &[1, 2, 3, 4], 4).unwrap();
        let c = SurfaceCtx::new(4).unwrap();
        assert!(same_h1_action(&word_matrix(&d.realization, c).unwrap(), &IntMatrix::identity(4)));
    }
}
