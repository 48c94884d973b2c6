//! Free-group side: `π₁(N_{g,n-1}, *)` on `x_1..x_g, y_1..y_{n-1}`, its
//! two-sided subgroup `π₁⁺`, the rewriting into a free basis of `π₁⁺`, the
//! homomorphism `θ`, Stallings graphs and the `ker θ` generation checks.

use std::fmt;

use serde::Serialize;
use serde_json::json;

use crate::automaton::{column, InverseAutomaton, NONE};
use crate::finitegrp::{rs_generators, todd_coxeter, GroupWord, RsError, TcError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Pi1Error {
    #[error("need g >= 1 and n >= 1, got g={g}, n={n}")]
    BadContext { g: usize, n: usize },
    #[error("word is not in the two-sided subgroup")]
    NotTwoSided,
    #[error("letter index {0} outside the alphabet")]
    BadLetter(i32),
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("level must be >= 2, got {0}")]
    BadLevel(u32),
    #[error("d^(g-1) = {0} exceeds the desk-scale guard")]
    TooLarge(u64),
    #[error(transparent)]
    Rs(#[from] RsError),
}

/// A freely reduced word in signed 1-based letters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord(Vec<i32>);

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord(Vec::new())
    }

    pub fn new(letters: impl IntoIterator<Item = i32>) -> Self {
        let mut w = FreeWord::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    pub fn letter(l: i32) -> Self {
        FreeWord(vec![l])
    }

    fn push(&mut self, l: i32) {
        debug_assert!(l != 0);
        if self.0.last() == Some(&-l) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut w = self.clone();
        for &l in &other.0 {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn pow(&self, n: i64) -> FreeWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(FreeWord::identity(), |acc, _| acc.mul(&base))
    }

    /// `b a b^{-1}`.
    pub fn conjugate(a: &FreeWord, b: &FreeWord) -> FreeWord {
        b.mul(a).mul(&b.inverse())
    }

    /// Largest letter index used.
    pub fn max_letter(&self) -> usize {
        self.0.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Generic text form over `a1, a2, …`.
    pub fn format_with(&self, name: impl Fn(usize) -> String) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == l {
                run += 1;
            }
            let e = if l < 0 { -(run as i64) } else { run as i64 };
            let base = name(l.unsigned_abs() as usize);
            parts.push(if e == 1 { base } else { format!("{base}^{e}") });
            i += run;
        }
        parts.join(" ")
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(|i| format!("a{i}")))
    }
}

impl GroupWord for FreeWord {
    fn identity_like(&self) -> Self {
        FreeWord::identity()
    }

    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn inv(&self) -> Self {
        self.inverse()
    }

    fn is_trivial(&self) -> bool {
        self.is_empty()
    }
}

/// Integer vector of `δ_n`-coefficients reduced mod `d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ThetaVector {
    pub modulus: u32,
    pub coeffs: Vec<u32>,
}

impl ThetaVector {
    pub fn from_integral(v: &[i64], d: u32) -> Self {
        ThetaVector {
            modulus: d,
            coeffs: v.iter().map(|x| x.rem_euclid(d as i64) as u32).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn coordinate_sum(&self) -> u32 {
        (self.coeffs.iter().map(|&c| c as u64).sum::<u64>() % self.modulus as u64) as u32
    }
}

impl fmt::Display for ThetaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Which free basis element a rewriting letter denotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisLetter {
    /// `x_i x_g^{-1}`, `i < g`
    U(usize),
    /// `x_g x_i`
    V(usize),
    Y(usize),
    /// `x_g y_k x_g^{-1}`
    Z(usize),
}

/// The surface context `N_{g,n-1}` for `π₁`; `n ≥ 1` so there are `n - 1`
/// loops `y_k` around boundary components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pi1Ctx {
    g: usize,
    n: usize,
}

impl Pi1Ctx {
    pub fn new(g: usize, n: usize) -> Result<Self, Pi1Error> {
        if g < 1 || n < 1 {
            return Err(Pi1Error::BadContext { g, n });
        }
        Ok(Pi1Ctx { g, n })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rank of the ambient free group.
    pub fn rank(&self) -> usize {
        self.g + self.n - 1
    }

    /// Rank of the free group `π₁⁺`.
    pub fn basis_rank(&self) -> usize {
        2 * self.g + 2 * self.n - 3
    }

    pub fn x(&self, i: usize) -> FreeWord {
        assert!((1..=self.g).contains(&i));
        FreeWord::letter(i as i32)
    }

    pub fn y(&self, k: usize) -> FreeWord {
        assert!((1..self.n).contains(&k));
        FreeWord::letter((self.g + k) as i32)
    }

    /// `z_k = x_g y_k x_g^{-1}`.
    pub fn z(&self, k: usize) -> FreeWord {
        FreeWord::conjugate(&self.y(k), &self.x(self.g))
    }

    /// `x_{i_1,…,i_k} = x_{i_1} ⋯ x_{i_k}`.
    pub fn x_seq(&self, idx: &[usize]) -> FreeWord {
        idx.iter().fold(FreeWord::identity(), |w, &i| w.mul(&self.x(i)))
    }

    pub fn check(&self, w: &FreeWord) -> Result<(), Pi1Error> {
        match w.letters().iter().find(|l| l.unsigned_abs() as usize > self.rank()) {
            Some(&l) => Err(Pi1Error::BadLetter(l)),
            None => Ok(()),
        }
    }

    pub fn is_two_sided(&self, w: &FreeWord) -> bool {
        w.letters().iter().filter(|l| l.unsigned_abs() as usize <= self.g).count() % 2 == 0
    }

    pub fn basis_index(&self, b: BasisLetter) -> usize {
        let (g, n) = (self.g, self.n);
        match b {
            BasisLetter::U(i) => i,
            BasisLetter::V(i) => g - 1 + i,
            BasisLetter::Y(k) => 2 * g - 1 + k,
            BasisLetter::Z(k) => 2 * g - 1 + (n - 1) + k,
        }
    }

    pub fn basis_letter(&self, index: usize) -> BasisLetter {
        let (g, n) = (self.g, self.n);
        if index < g {
            BasisLetter::U(index)
        } else if index < 2 * g {
            BasisLetter::V(index - (g - 1))
        } else if index < 2 * g + n - 1 {
            BasisLetter::Y(index - (2 * g - 1))
        } else {
            BasisLetter::Z(index - (2 * g - 1) - (n - 1))
        }
    }

    /// Reidemeister–Schreier rewriting over the transversal `{1, x_g}`.
    pub fn rewrite(&self, w: &FreeWord) -> Result<FreeWord, Pi1Error> {
        self.check(w)?;
        let g = self.g;
        let mut odd = false;
        let mut out = FreeWord::identity();
        let mut emit = |b: BasisLetter, sign: i32| out.push(sign * self.basis_index(b) as i32);
        for &l in w.letters() {
            let a = l.unsigned_abs() as usize;
            let s = l.signum();
            if a <= g {
                match (odd, s > 0) {
                    (false, true) if a < g => emit(BasisLetter::U(a), 1),
                    (false, true) => {}
                    (true, true) => emit(BasisLetter::V(a), 1),
                    (false, false) => emit(BasisLetter::V(a), -1),
                    (true, false) if a < g => emit(BasisLetter::U(a), -1),
                    (true, false) => {}
                }
                odd = !odd;
            } else {
                let k = a - g;
                emit(if odd { BasisLetter::Z(k) } else { BasisLetter::Y(k) }, s);
            }
        }
        if odd {
            return Err(Pi1Error::NotTwoSided);
        }
        Ok(out)
    }

    /// Value of a basis letter in the ambient free group.
    pub fn basis_word(&self, b: BasisLetter) -> FreeWord {
        let xg = self.x(self.g);
        match b {
            BasisLetter::U(i) => self.x(i).mul(&xg.inverse()),
            BasisLetter::V(i) => xg.mul(&self.x(i)),
            BasisLetter::Y(k) => self.y(k),
            BasisLetter::Z(k) => self.z(k),
        }
    }

    /// Substitutes basis letters back into the ambient alphabet.
    pub fn expand(&self, basis: &FreeWord) -> FreeWord {
        basis.letters().iter().fold(FreeWord::identity(), |acc, &l| {
            let b = self.basis_word(self.basis_letter(l.unsigned_abs() as usize));
            acc.mul(&if l < 0 { b.inverse() } else { b })
        })
    }

    pub fn format(&self, w: &FreeWord) -> String {
        w.format_with(|i| if i <= self.g { format!("x{i}") } else { format!("y{}", i - self.g) })
    }

    pub fn format_basis(&self, w: &FreeWord) -> String {
        w.format_with(|i| match self.basis_letter(i) {
            BasisLetter::U(i) => format!("u{i}"),
            BasisLetter::V(i) => format!("v{i}"),
            BasisLetter::Y(k) => format!("y{k}"),
            BasisLetter::Z(k) => format!("z{k}"),
        })
    }

    /// Parses `x1 x2^-1 y1 z1 (x1 x4)^2`; `z_k` expands to `x_g y_k x_g^{-1}`.
    pub fn parse(&self, text: &str) -> Result<FreeWord, Pi1Error> {
        let mut p = FreeParser { src: text.as_bytes(), pos: 0, ctx: *self };
        let w = p.word()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected input"));
        }
        Ok(w)
    }

    /// Basis values of `θ̄` over `Z`: `u_i ↦ -e_i + e_g`, `v_i ↦ e_i - e_g`,
    /// `y_k, z_k ↦ 0`.
    pub fn basis_theta(&self, index: usize) -> Vec<i64> {
        let g = self.g;
        let mut v = vec![0i64; g];
        match self.basis_letter(index) {
            BasisLetter::U(i) => {
                v[i - 1] -= 1;
                v[g - 1] += 1;
            }
            BasisLetter::V(i) => {
                v[i - 1] += 1;
                v[g - 1] -= 1;
            }
            BasisLetter::Y(_) | BasisLetter::Z(_) => {}
        }
        v
    }

    /// `θ̄` of a word already written in the `π₁⁺` basis.
    pub fn theta_bar_basis(&self, basis: &FreeWord) -> Vec<i64> {
        let mut acc = vec![0i64; self.g];
        for &l in basis.letters() {
            let s = l.signum() as i64;
            for (a, b) in acc.iter_mut().zip(self.basis_theta(l.unsigned_abs() as usize)) {
                *a += s * b;
            }
        }
        acc
    }

    pub fn theta_bar(&self, w: &FreeWord) -> Result<Vec<i64>, Pi1Error> {
        Ok(self.theta_bar_basis(&self.rewrite(w)?))
    }

    pub fn theta(&self, w: &FreeWord, d: u32) -> Result<ThetaVector, Pi1Error> {
        if d < 2 {
            return Err(Pi1Error::BadLevel(d));
        }
        Ok(ThetaVector::from_integral(&self.theta_bar(w)?, d))
    }
}

struct FreeParser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: Pi1Ctx,
}

impl FreeParser<'_> {
    fn error(&self, msg: &str) -> Pi1Error {
        Pi1Error::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn int(&mut self) -> Result<i64, Pi1Error> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(Pi1Error::Syntax { pos: start, msg: "expected integer".into() })
    }

    fn word(&mut self) -> Result<FreeWord, Pi1Error> {
        let mut acc = FreeWord::identity();
        while !matches!(self.peek(), None | Some(b')')) {
            let atom = self.atom()?;
            let atom = if self.peek() == Some(b'^') {
                self.pos += 1;
                let e = if self.peek() == Some(b'(') {
                    self.pos += 1;
                    let e = self.int()?;
                    if self.peek() != Some(b')') {
                        return Err(self.error("expected ')'"));
                    }
                    self.pos += 1;
                    e
                } else {
                    self.int()?
                };
                atom.pow(e)
            } else {
                atom
            };
            acc = acc.mul(&atom);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<FreeWord, Pi1Error> {
        let start = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let w = self.word()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(w)
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(FreeWord::identity())
            }
            Some(c @ (b'x' | b'y' | b'z')) => {
                self.pos += 1;
                let digits = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let idx: usize = std::str::from_utf8(&self.src[digits..self.pos])
                    .ok()
                    .and_then(|s| s.parse().ok())
                    .ok_or(Pi1Error::Syntax { pos: digits, msg: "expected index".into() })?;
                let ctx = self.ctx;
                let ok = match c {
                    b'x' => (1..=ctx.g).contains(&idx),
                    _ => (1..ctx.n).contains(&idx),
                };
                if !ok {
                    return Err(Pi1Error::Syntax {
                        pos: start,
                        msg: format!("index {idx} out of range for g={}, n={}", ctx.g, ctx.n),
                    });
                }
                Ok(match c {
                    b'x' => ctx.x(idx),
                    b'y' => ctx.y(idx),
                    _ => ctx.z(idx),
                })
            }
            _ => Err(self.error("expected x, y, z, '(' or 1")),
        }
    }
}

/// Folded core graph of a finitely generated subgroup of a free group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StallingsGraph {
    rank: usize,
    rows: Vec<Vec<usize>>,
    gens: Vec<FreeWord>,
}

pub fn fold(rank: usize, gens: &[FreeWord]) -> StallingsGraph {
    let mut a = InverseAutomaton::new(rank, usize::MAX);
    for w in gens {
        assert!(w.max_letter() <= rank, "letter outside rank {rank}");
        let cols: Vec<usize> = w.letters().iter().map(|&l| column(l)).collect();
        a.scan(0, &cols, true);
    }
    a.trim();
    StallingsGraph {
        rank,
        rows: a.compact(),
        gens: gens.iter().filter(|w| !w.is_empty()).cloned().collect(),
    }
}

impl StallingsGraph {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertices(&self) -> usize {
        self.rows.len()
    }

    pub fn generators(&self) -> &[FreeWord] {
        &self.gens
    }

    /// Positive-label edges `(from, letter, to)`.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (v, row) in self.rows.iter().enumerate() {
            for x in 0..self.rank {
                if row[2 * x] != NONE {
                    out.push((v, x + 1, row[2 * x]));
                }
            }
        }
        out
    }

    pub fn contains(&self, w: &FreeWord) -> bool {
        let mut v = 0;
        for &l in w.letters() {
            if l.unsigned_abs() as usize > self.rank {
                return false;
            }
            v = self.rows[v][column(l)];
            if v == NONE {
                return false;
            }
        }
        v == 0
    }

    /// Index in the ambient free group; `None` when infinite.
    pub fn index(&self) -> Option<usize> {
        self.rows.iter().all(|r| r.iter().all(|&t| t != NONE)).then_some(self.vertices())
    }

    pub fn is_folded(&self) -> bool {
        // each column holds at most one target by construction; check the
        // inverse edges agree
        self.rows.iter().enumerate().all(|(v, r)| {
            r.iter().enumerate().all(|(x, &t)| t == NONE || self.rows[t][x ^ 1] == v)
        })
    }

    pub fn subgroups_equal(&self, other: &StallingsGraph) -> bool {
        self.rank == other.rank
            && self.gens.iter().all(|w| other.contains(w))
            && other.gens.iter().all(|w| self.contains(w))
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "rank": self.rank,
            "vertices": self.vertices(),
            "base": 0,
            "edges": self.edges(),
            "index": self.index(),
        })
    }
}

const MAX_TRANSVERSAL: u64 = 1 << 12;

fn guard(g: usize, d: u32) -> Result<u64, Pi1Error> {
    if d < 2 {
        return Err(Pi1Error::BadLevel(d));
    }
    let size = (d as u64).checked_pow(g.saturating_sub(1) as u32).unwrap_or(u64::MAX);
    if size > MAX_TRANSVERSAL {
        return Err(Pi1Error::TooLarge(size));
    }
    Ok(size)
}

/// `G̃ = {x_{1,g}^{m_1} ⋯ x_{g-1,g}^{m_{g-1}} : 0 ≤ m_i < d}`, `m_1` varying
/// fastest.
pub fn transversal_g_tilde(ctx: Pi1Ctx, d: u32) -> Result<Vec<FreeWord>, Pi1Error> {
    let size = guard(ctx.g, d)?;
    let g = ctx.g;
    let mut out = Vec::with_capacity(size as usize);
    for idx in 0..size {
        let mut rest = idx;
        let mut w = FreeWord::identity();
        for i in 1..g {
            let m = (rest % d as u64) as i64;
            rest /= d as u64;
            w = w.mul(&ctx.x_seq(&[i, g]).pow(m));
        }
        out.push(w);
    }
    Ok(out)
}

/// The generators `x_{i,g}, x_{j,j}, y_k, z_k` of `π₁⁺` used with `G̃`.
pub fn pi1plus_generators(ctx: Pi1Ctx) -> Vec<FreeWord> {
    let g = ctx.g;
    let mut out: Vec<FreeWord> = (1..g).map(|i| ctx.x_seq(&[i, g])).collect();
    out.extend((1..=g).map(|j| ctx.x_seq(&[j, j])));
    out.extend((1..ctx.n).map(|k| ctx.y(k)));
    out.extend((1..ctx.n).map(|k| ctx.z(k)));
    out
}

/// The claimed generating set of `ker θ`, in the ambient alphabet.
pub fn prop52_claimed_gens(g: usize, n: usize, d: u32) -> Result<Vec<FreeWord>, Pi1Error> {
    let ctx = Pi1Ctx::new(g, n)?;
    let trans = transversal_g_tilde(ctx, d)?;
    let mut cores = Vec::new();
    for i in 1..g {
        cores.push(ctx.x_seq(&[i, g]).pow(d as i64));
    }
    for j in 1..=g {
        cores.push(ctx.x_seq(&[j, j]));
    }
    for k in 1..n {
        cores.push(ctx.y(k));
    }
    for k in 1..n {
        cores.push(ctx.z(k));
    }
    for i1 in 1..g {
        for i2 in i1 + 1..g {
            cores.push(ctx.x_seq(&[i1, i2, g]).pow(2));
        }
    }
    let mut out = Vec::with_capacity(trans.len() * cores.len());
    for w in &trans {
        for c in &cores {
            out.push(FreeWord::conjugate(c, w));
        }
    }
    Ok(out)
}

/// The normal generators of `ker θ` in `π₁⁺`, ambient alphabet.
pub fn prop34_normal_gens(g: usize, n: usize, d: u32) -> Result<Vec<FreeWord>, Pi1Error> {
    let ctx = Pi1Ctx::new(g, n)?;
    if d < 2 {
        return Err(Pi1Error::BadLevel(d));
    }
    let mut out: Vec<FreeWord> = (1..=g).map(|i| ctx.x(i).pow(2)).collect();
    out.extend((1..n).map(|k| ctx.y(k)));
    out.extend((1..n).map(|k| ctx.z(k)));
    for i in 1..=g {
        for j in i + 1..g {
            out.push(ctx.x_seq(&[i, j, g]).pow(2));
        }
    }
    out.extend((1..=g).map(|i| ctx.x_seq(&[i, g]).pow(d as i64)));
    Ok(out)
}

/// [`prop34_normal_gens`] rewritten into the `π₁⁺` basis, as relators.
pub fn prop34_relators(g: usize, n: usize, d: u32) -> Result<Vec<FreeWord>, Pi1Error> {
    let ctx = Pi1Ctx::new(g, n)?;
    prop34_normal_gens(g, n, d)?
        .iter()
        .map(|w| ctx.rewrite(w))
        .filter(|r| !matches!(r, Ok(w) if w.is_empty()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KerThetaReport {
    pub g: usize,
    pub n: usize,
    pub d: u32,
    pub claimed: usize,
    pub schreier: usize,
    pub claimed_in_ker: bool,
    pub subgroups_equal: bool,
    pub index: Option<usize>,
    pub expected_index: u64,
    /// Coset count for the relators, or `None` when the cap was reached.
    pub coset_count: Option<usize>,
}

impl KerThetaReport {
    pub fn passed(&self) -> bool {
        self.claimed_in_ker
            && self.subgroups_equal
            && self.index.map(|i| i as u64) == Some(self.expected_index)
            && self.coset_count.map(|i| i as u64) == Some(self.expected_index)
    }
}

pub const DEFAULT_COSET_CAP: usize = 1 << 20;

/// Full certification of `ker θ` generation at one parameter set, over the
/// free basis of `π₁⁺`.
pub fn verify_ker_theta(g: usize, n: usize, d: u32) -> Result<KerThetaReport, Pi1Error> {
    let ctx = Pi1Ctx::new(g, n)?;
    let expected = guard(g, d)?;
    let claimed = prop52_claimed_gens(g, n, d)?
        .iter()
        .map(|w| ctx.rewrite(w))
        .collect::<Result<Vec<_>, _>>()?;
    let claimed_in_ker = claimed.iter().all(|w| ThetaVector::from_integral(&ctx.theta_bar_basis(w), d).is_zero());
    let trans = transversal_g_tilde(ctx, d)?
        .iter()
        .map(|w| ctx.rewrite(w))
        .collect::<Result<Vec<_>, _>>()?;
    let gens = pi1plus_generators(ctx)
        .iter()
        .map(|w| ctx.rewrite(w))
        .collect::<Result<Vec<_>, _>>()?;
    let key = |w: &FreeWord| ThetaVector::from_integral(&ctx.theta_bar_basis(w), d);
    let schreier = rs_generators(key, &trans, &gens)?;
    let rank = ctx.basis_rank();
    let gc = fold(rank, &claimed);
    let gs = fold(rank, &schreier);
    let relators = prop34_relators(g, n, d)?;
    let rels: Vec<Vec<i32>> = relators.iter().map(|w| w.letters().to_vec()).collect();
    let coset_count = match todd_coxeter(rank, &rels, DEFAULT_COSET_CAP) {
        Ok(t) => Some(t.cosets()),
        Err(TcError::Inconclusive { .. }) => None,
        Err(e) => panic!("coset enumeration failed: {e}"),
    };
    Ok(KerThetaReport {
        g,
        n,
        d,
        claimed: claimed.len(),
        schreier: schreier.len(),
        claimed_in_ker,
        subgroups_equal: gc.subgroups_equal(&gs),
        index: gc.index(),
        expected_index: expected,
        coset_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(g: usize, n: usize) -> Pi1Ctx {
        Pi1Ctx::new(g, n).unwrap()
    }

    #[test]
    fn two_sidedness() {
        let c = ctx(4, 2);
        assert!(c.is_two_sided(&c.x_seq(&[1, 4])));
        assert!(!c.is_two_sided(&c.x(1)));
        assert!(c.is_two_sided(&c.y(1)));
        assert!(c.is_two_sided(&c.z(1)));
        assert_eq!(c.rewrite(&c.x(1)), Err(Pi1Error::NotTwoSided));
    }

    #[test]
    fn rewriting_examples() {
        let c = ctx(4, 2);
        for i in 1..=4 {
            let r = c.rewrite(&c.x(i).pow(2)).unwrap();
            let want = if i < 4 {
                FreeWord::new([c.basis_index(BasisLetter::U(i)) as i32, c.basis_index(BasisLetter::V(i)) as i32])
            } else {
                FreeWord::letter(c.basis_index(BasisLetter::V(4)) as i32)
            };
            assert_eq!(r, want);
            assert_eq!(c.expand(&r), c.x(i).pow(2));
        }
        let z = c.rewrite(&c.z(1)).unwrap();
        assert_eq!(c.format_basis(&z), "z1");
        assert!(c.rewrite(&FreeWord::identity()).unwrap().is_empty());
        assert_eq!(c.basis_rank(), 2 * 4 + 2 * 2 - 3);
        for i in 1..=c.basis_rank() {
            assert_eq!(c.basis_index(c.basis_letter(i)), i);
        }
    }

    #[test]
    fn theta_values_from_constraints() {
        // solve for the basis values using only θ(x_i x_g) = -e_i + e_g,
        // θ(x_i^2) = 0 and θ(y_k) = θ(z_k) = 0
        let c = ctx(5, 2);
        let g = 5;
        let e = |i: usize| {
            let mut v = vec![0i64; g];
            v[i - 1] = 1;
            v
        };
        let sub = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>();
        // x_g^2 rewrites to v_g alone, so θ(v_g) = 0
        assert_eq!(c.rewrite(&c.x(g).pow(2)).unwrap().len(), 1);
        let v_g = vec![0i64; g];
        for i in 1..g {
            let u_i = sub(&sub(&e(g), &e(i)), &v_g);
            let v_i = sub(&vec![0; g], &u_i);
            assert_eq!(c.basis_theta(c.basis_index(BasisLetter::U(i))), u_i);
            assert_eq!(c.basis_theta(c.basis_index(BasisLetter::V(i))), v_i);
        }
        for i in 1..g {
            for j in i + 1..g {
                assert!(c.theta(&c.x_seq(&[i, j, g]).pow(2), 3).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn theta_examples() {
        let c = ctx(4, 1);
        assert_eq!(c.theta(&c.x_seq(&[1, 4]), 3).unwrap().coeffs, vec![2, 0, 0, 1]);
        for j in 1..=4 {
            assert!(c.theta(&c.x(j).pow(2), 3).unwrap().is_zero());
        }
        assert!(c.theta(&c.x_seq(&[1, 2, 4]).pow(2), 3).unwrap().is_zero());
        assert_eq!(c.theta(&c.x(1), 2), Err(Pi1Error::NotTwoSided));
        assert_eq!(c.theta(&c.x_seq(&[1, 4]), 1), Err(Pi1Error::BadLevel(1)));
    }

    #[test]
    fn image_is_sum_zero_lattice() {
        for (g, d) in [(4usize, 2u32), (4, 3), (3, 5)] {
            let c = ctx(g, 1);
            let images: std::collections::HashSet<ThetaVector> = transversal_g_tilde(c, d)
                .unwrap()
                .iter()
                .map(|w| c.theta(w, d).unwrap())
                .collect();
            assert_eq!(images.len() as u64, (d as u64).pow(g as u32 - 1));
            assert!(images.iter().all(|t| t.coordinate_sum() == 0));
        }
    }

    #[test]
    fn parse_and_format() {
        let c = ctx(4, 2);
        let w = c.parse("x1 x2^-1 y1").unwrap();
        assert_eq!(c.format(&w), "x1 x2^-1 y1");
        assert_eq!(c.parse("z1").unwrap(), c.z(1));
        assert_eq!(c.parse("(x1 x4)^2").unwrap(), c.x_seq(&[1, 4, 1, 4]));
        assert_eq!(c.parse("x1 x1^-1").unwrap(), FreeWord::identity());
        assert!(matches!(c.parse("x5"), Err(Pi1Error::Syntax { pos: 0, .. })));
        assert!(matches!(c.parse("x1 y2"), Err(Pi1Error::Syntax { pos: 3, .. })));
        assert_eq!(c.format(&FreeWord::identity()), "1");
    }

    #[test]
    fn stallings_examples() {
        let x = FreeWord::letter(1);
        let y = FreeWord::letter(2);
        let g = fold(2, &[x.pow(2), y.clone(), FreeWord::conjugate(&y, &x)]);
        assert!(g.is_folded());
        assert_eq!(g.index(), Some(2));
        let a = fold(2, &[x.clone()]);
        assert!(a.contains(&x.pow(3)));
        assert!(!a.contains(&y));
        assert_eq!(a.index(), None);
        let b = fold(2, &[FreeWord::new([1, 2, -1])]);
        assert_eq!(b.vertices(), 2);
        assert!(b.contains(&FreeWord::new([1, 2, 2, -1])));
        assert!(fold(2, &[x.pow(2), x.pow(3)]).subgroups_equal(&a));
    }

    #[test]
    fn claimed_counts() {
        let gens = prop52_claimed_gens(4, 1, 2).unwrap();
        assert_eq!(gens.len(), 80);
        let c = ctx(4, 1);
        assert!(gens.iter().all(|w| c.is_two_sided(w)));
        assert_eq!(prop52_claimed_gens(4, 2, 2).unwrap().len(), 8 * 12);
    }

    #[test]
    fn prop34_list() {
        for d in 2..6 {
            let gens = prop34_normal_gens(4, 1, d).unwrap();
            let c = ctx(4, 1);
            assert!(gens.contains(&c.x_seq(&[1, 4]).pow(d as i64)));
            assert!(gens.iter().all(|w| c.theta(w, d).unwrap().is_zero()));
        }
        assert_eq!(prop34_normal_gens(4, 1, 2).unwrap().len(), 4 + 3 + 4);
        assert_eq!(prop34_normal_gens(4, 2, 2).unwrap().len(), 4 + 2 + 3 + 4);
    }

    #[test]
    fn ker_theta_small() {
        let r = verify_ker_theta(4, 1, 2).unwrap();
        assert_eq!(r.claimed, 80);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.index, Some(8));
        let r = verify_ker_theta(3, 2, 3).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(matches!(verify_ker_theta(14, 1, 2), Err(Pi1Error::TooLarge(_))));
    }

    fn two_sided_word(g: usize, n: usize) -> impl Strategy<Value = FreeWord> {
        let rank = (g + n - 1) as i32;
        proptest::collection::vec((1..=rank, any::<bool>()), 0..12).prop_map(move |v| {
            let mut w = FreeWord::new(v.into_iter().map(|(l, s)| if s { l } else { -l }));
            if w.letters().iter().filter(|l| l.unsigned_abs() as usize <= g).count() % 2 == 1 {
                w = w.mul(&FreeWord::letter(g as i32));
            }
            w
        })
    }

    proptest! {
        #[test]
        fn rewrite_round_trips(w in two_sided_word(4, 3)) {
            let c = ctx(4, 3);
            prop_assert_eq!(c.expand(&c.rewrite(&w).unwrap()), w);
        }

        #[test]
        fn theta_additive(u in two_sided_word(4, 2), v in two_sided_word(4, 2), d in 2u32..7) {
            let c = ctx(4, 2);
            let tu = c.theta_bar(&u).unwrap();
            let tv = c.theta_bar(&v).unwrap();
            let tuv = c.theta_bar(&u.mul(&v)).unwrap();
            let sum: Vec<i64> = tu.iter().zip(&tv).map(|(a, b)| a + b).collect();
            prop_assert_eq!(ThetaVector::from_integral(&tuv, d), ThetaVector::from_integral(&sum, d));
            prop_assert_eq!(c.theta(&u, d).unwrap().coordinate_sum(), 0);
        }

        #[test]
        fn theta_conjugation_invariant(w in two_sided_word(4, 2), q in two_sided_word(4, 2)) {
            let c = ctx(4, 2);
            prop_assert_eq!(c.theta_bar(&FreeWord::conjugate(&w, &q)).unwrap(), c.theta_bar(&w).unwrap());
        }
    }
}
