//! Enumerators for the normal generating set of `𝓜_d(N_{g,n})`, the finite
//! generating set of `𝓜_4(N_{g,0})`, and the sets `𝓔_n, 𝓕_l, 𝓖_l, 𝓗_n`.

use serde::Serialize;

use super::families::{enum_family, family_size, transversal_2y_word, Family};
use super::{BoundaryLetter, Letter, McgWord, NamedLetter, WordError};
use crate::homology::{Generator, TorelliTag};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Main2Record {
    pub name: String,
    #[serde(serialize_with = "serialize_word")]
    pub word: McgWord,
    /// False for boundary-curve entries, which have no homology action.
    pub realizable: bool,
}

fn serialize_word<S: serde::Serializer>(w: &McgWord, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&w.to_string())
}

/// Index range for the boundary twists `δ_k, ε_{g,k}, ζ_{k,l}, ζ̄_{k,l}`.
///
/// The theorem statement uses `k ≤ n - 1`; the list at the end of the
/// inductive argument uses `k ≤ n`. Both are exposed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum BoundaryRange {
    #[default]
    Statement,
    Conclusion,
}

fn one(g: usize, l: Letter, e: i64) -> McgWord {
    McgWord::letter(g, l, e).expect("validated indices")
}

pub fn thm_main2_normal_generators(
    g: usize,
    n: usize,
    d: u32,
    range: BoundaryRange,
) -> Result<Vec<Main2Record>, WordError> {
    if g < 4 {
        return Err(WordError::OutOfRange(format!("normal generators need genus >= 4, got {g}")));
    }
    if d < 2 {
        return Err(WordError::OutOfRange(format!("level must be >= 2, got {d}")));
    }
    let de = d as i64;
    let odd = d % 2 == 1;
    let mut out = Vec::new();
    let mut push = |name: String, word: McgWord| {
        let realizable = !word.has_boundary_letters();
        out.push(Main2Record { name, word, realizable });
    };
    if odd || n >= 1 {
        push(format!("t_a(1,2)^{d}"), one(g, Letter::twist(&[1, 2]), de));
    }
    if odd && g == 4 {
        push(format!("t_a(1,2,3,4)^{d}"), one(g, Letter::twist(&[1, 2, 3, 4]), de));
    }
    if !odd {
        // t_{α'} = Y_{3,2} t_{α} Y_{3,2}^{-1}, so t_α t_{α'}^{-1} = [t_α, Y_{3,2}]
        let t = one(g, Letter::twist(&[1, 2]), 1);
        let f = one(g, Letter::slide(3, 2), 1);
        let c = McgWord::commutator(&t, &f)?;
        push(format!("(t_a(1,2) t_a'(1,2)^-1)^{}", d / 2), c.pow(de / 2));
    }
    push(
        "t_a(1,2,3,4) t_a'(1,2,3,4)".into(),
        one(g, Letter::Named(NamedLetter::D(2, 3, 4)), 1),
    );
    push(
        "t_b(1,2)".into(),
        one(g, Letter::Gen(Generator::Torelli(TorelliTag::Beta(1, 2))), 1),
    );
    if g == 4 {
        push("t_gamma".into(), one(g, Letter::Gen(Generator::Torelli(TorelliTag::Gamma)), 1));
    }
    let (kmax, need_delta, need_zeta) = match range {
        BoundaryRange::Statement => (n.saturating_sub(1), n >= 2, n >= 3),
        BoundaryRange::Conclusion => (n, n >= 1, n >= 2),
    };
    if need_delta {
        for k in 1..=kmax {
            push(format!("t_delta({k})"), one(g, Letter::Boundary(BoundaryLetter::Delta(k)), 1));
            push(
                format!("t_eps({g},{k})"),
                one(g, Letter::Boundary(BoundaryLetter::Epsilon(g, k)), 1),
            );
        }
    }
    if need_zeta {
        for l in 1..=kmax {
            for k in 1..l {
                push(format!("t_zeta({k},{l})"), one(g, Letter::Boundary(BoundaryLetter::Zeta(k, l)), 1));
                push(
                    format!("t_zetabar({k},{l})"),
                    one(g, Letter::Boundary(BoundaryLetter::ZetaBar(k, l)), 1),
                );
            }
        }
    }
    Ok(out)
}

/// The conjugates `y x y^{-1}`, `x ∈ 𝒜 ∪ ℬ ∪ 𝒞 ∪ 𝒟`, `y ∈ 2^𝒴`, indexed as
/// `mask · |x-set| + position`.
#[derive(Debug, Clone)]
pub struct Main3Stream {
    g: usize,
    xs: Vec<McgWord>,
    masks: u64,
}

impl Main3Stream {
    pub fn len(&self) -> u64 {
        self.masks * self.xs.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x_count(&self) -> usize {
        self.xs.len()
    }

    pub fn xs(&self) -> &[McgWord] {
        &self.xs
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    /// `(y, x)` for a stream index.
    pub fn parts(&self, index: u64) -> Option<(McgWord, &McgWord)> {
        if index >= self.len() {
            return None;
        }
        let k = self.xs.len() as u64;
        let mask = index / k;
        let x = &self.xs[(index % k) as usize];
        Some((transversal_2y_word(self.g, mask), x))
    }

    pub fn get(&self, index: u64) -> Option<McgWord> {
        let (y, x) = self.parts(index)?;
        Some(McgWord::conjugate(x, &y).expect("same genus"))
    }

    pub fn iter(&self) -> impl Iterator<Item = McgWord> + '_ {
        (0..self.len()).map(move |i| self.get(i).expect("in range"))
    }
}

pub fn thm_main3_generators(g: usize) -> Result<Main3Stream, WordError> {
    if g < 4 {
        return Err(WordError::OutOfRange(format!("generating set needs genus >= 4, got {g}")));
    }
    let bits = family_size(Family::Y, g);
    if bits > 40 {
        return Err(WordError::OutOfRange(format!("2^{bits} transversal is too large")));
    }
    let mut xs = Vec::new();
    for f in [Family::A, Family::B, Family::C, Family::D] {
        xs.extend(enum_family(f, g)?.into_iter().map(|e| e.word));
    }
    Ok(Main3Stream {
        g,
        xs,
        masks: 1u64 << bits,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenNSets {
    /// Lifts of the closed-surface generators, by name.
    pub e_n: Vec<String>,
    /// `𝓕_l` for `l = 1..=n`.
    pub f: Vec<Vec<McgWord>>,
    /// `𝓖_l` for `l = 1..=n`.
    pub g_sets: Vec<Vec<McgWord>>,
    pub h: Vec<McgWord>,
}

const MAX_G_SET: u64 = 1 << 16;

fn f_set(g: usize, l: usize, d: i64) -> Vec<McgWord> {
    let mut out = Vec::new();
    for i in 1..g {
        out.push(one(g, Letter::twist(&[i, g]), d));
    }
    for i in 1..g {
        out.push(one(g, Letter::Boundary(BoundaryLetter::AlphaPunct(i, l)), d));
    }
    out.push(one(g, Letter::Boundary(BoundaryLetter::Delta(l)), 1));
    for j in 1..=g {
        out.push(one(g, Letter::Boundary(BoundaryLetter::Epsilon(j, l)), 1));
    }
    for k in 1..l {
        out.push(one(g, Letter::Boundary(BoundaryLetter::Zeta(k, l)), 1));
        out.push(one(g, Letter::Boundary(BoundaryLetter::ZetaBar(k, l)), 1));
    }
    for i1 in 1..g {
        for i2 in i1 + 1..g {
            out.push(one(g, Letter::Boundary(BoundaryLetter::Eta(i1, i2, l)), 1));
        }
    }
    out
}

fn g_set(g: usize, l: usize, d: u32) -> Result<Vec<McgWord>, WordError> {
    let count = (d as u64).checked_pow((g - 1) as u32).filter(|&c| c <= MAX_G_SET);
    let Some(count) = count else {
        return Err(WordError::OutOfRange(format!("d^(g-1) too large for d={d}, g={g}")));
    };
    let de = d as i64;
    let factors: Vec<McgWord> = (1..g)
        .map(|i| {
            McgWord::from_letters(
                g,
                vec![
                    (Letter::twist(&[i, g]), -de),
                    (Letter::Boundary(BoundaryLetter::AlphaPunct(i, l)), de),
                ],
            )
            .expect("validated indices")
        })
        .collect();
    let mut out = Vec::with_capacity(count as usize);
    for idx in 0..count {
        let mut rest = idx;
        let mut w = McgWord::identity(g);
        for f in &factors {
            let m = (rest % d as u64) as i64;
            rest /= d as u64;
            w = w.mul(&f.pow(m))?;
        }
        out.push(w);
    }
    Ok(out)
}

/// `𝓗_n`; empty for `n = 0`.
pub fn h_set(g: usize, n: usize, d: u32) -> Result<Vec<McgWord>, WordError> {
    if n == 0 {
        return Ok(Vec::new());
    }
    Ok(thm_gen_n_sets(g, n, d, &[])?.h)
}

pub fn thm_gen_n_sets(g: usize, n: usize, d: u32, base: &[String]) -> Result<GenNSets, WordError> {
    if n < 1 {
        return Err(WordError::OutOfRange("n must be >= 1".into()));
    }
    if d < 2 {
        return Err(WordError::OutOfRange(format!("level must be >= 2, got {d}")));
    }
    if g < 2 {
        return Err(WordError::OutOfRange(format!("genus must be >= 2, got {g}")));
    }
    let mut f = Vec::new();
    let mut gs = Vec::new();
    let mut h = Vec::new();
    for l in 1..=n {
        let fl = f_set(g, l, d as i64);
        let gl = g_set(g, l, d)?;
        for z in &gl {
            for y in &fl {
                h.push(McgWord::conjugate(y, z)?);
            }
        }
        f.push(fl);
        gs.push(gl);
    }
    Ok(GenNSets {
        e_n: base.to_vec(),
        f,
        g_sets: gs,
        h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{level_member, SurfaceCtx};

    fn names(g: usize, n: usize, d: u32) -> Vec<String> {
        thm_main2_normal_generators(g, n, d, BoundaryRange::Statement)
            .unwrap()
            .into_iter()
            .map(|r| r.name)
            .collect()
    }

    #[test]
    fn main2_conditional_entries() {
        let a = names(4, 0, 3);
        assert!(a.contains(&"t_a(1,2)^3".to_string()));
        assert!(a.contains(&"t_a(1,2,3,4)^3".to_string()));
        assert!(!a.iter().any(|s| s.starts_with("(t_a(1,2) t_a'")));
        assert!(a.contains(&"t_gamma".to_string()));
        let b = names(5, 0, 4);
        assert!(b.contains(&"(t_a(1,2) t_a'(1,2)^-1)^2".to_string()));
        assert!(!b.contains(&"t_gamma".to_string()));
        assert!(!b.iter().any(|s| s.starts_with("t_a(1,2)^")));
        let c = names(4, 2, 2);
        assert!(c.contains(&"t_delta(1)".to_string()));
        assert!(c.contains(&"t_eps(4,1)".to_string()));
        assert!(c.contains(&"t_a(1,2)^2".to_string()));
        assert!(!c.iter().any(|s| s.starts_with("t_zeta")));
        let c3 = names(4, 3, 2);
        assert!(c3.contains(&"t_zeta(1,2)".to_string()));
        assert!(thm_main2_normal_generators(3, 0, 2, BoundaryRange::Statement).is_err());
    }

    #[test]
    fn main2_conclusion_range() {
        let recs = thm_main2_normal_generators(4, 2, 2, BoundaryRange::Conclusion).unwrap();
        let names: Vec<_> = recs.iter().map(|r| r.name.as_str()).collect();
        assert!(names.contains(&"t_delta(2)"));
        assert!(names.contains(&"t_zeta(1,2)"));
        assert!(recs.iter().filter(|r| !r.realizable).all(|r| r.word.has_boundary_letters()));
    }

    #[test]
    fn closed_entries_are_level_members() {
        for g in [4, 5] {
            let c = SurfaceCtx::new(g).unwrap();
            for d in [2u32, 3, 4] {
                for r in thm_main2_normal_generators(g, 0, d, BoundaryRange::Statement).unwrap() {
                    assert!(r.realizable);
                    assert!(level_member(&r.word, d, c).unwrap(), "{} g={g} d={d}", r.name);
                }
            }
        }
    }

    #[test]
    fn main3_counts() {
        let s = thm_main3_generators(4).unwrap();
        assert_eq!(s.x_count(), 6 + 6 + 12 + 1);
        assert_eq!(s.len(), 512 * 25);
        assert_eq!(s.get(0).unwrap().to_string(), "A(1,2)");
        assert!(s.get(s.len()).is_none());
        let s5 = thm_main3_generators(5).unwrap();
        assert_eq!(s5.len(), (1u64 << 16) * (10 + 10 + 30 + 4));
    }

    #[test]
    fn gen_n_sets_shapes() {
        let sets = thm_gen_n_sets(4, 1, 2, &["E".into()]).unwrap();
        assert_eq!(sets.g_sets[0].len(), 8);
        assert!(sets.g_sets[0][0].is_identity());
        assert!(!sets.f[0].iter().any(|w| w.to_string().starts_with("zeta")));
        assert_eq!(sets.f[0].len(), 3 + 3 + 1 + 4 + 3);
        assert_eq!(sets.h.len(), 8 * 14);
        assert!(h_set(4, 0, 2).unwrap().is_empty());
        assert!(thm_gen_n_sets(4, 0, 2, &[]).is_err());
        let two = thm_gen_n_sets(4, 2, 3, &[]).unwrap();
        assert_eq!(two.g_sets[1].len(), 27);
        assert_eq!(two.f[1].iter().filter(|w| w.to_string().starts_with("zeta")).count(), 2);
    }
}
