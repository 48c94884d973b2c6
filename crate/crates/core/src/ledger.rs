//! A registry of named, parameterized verification checks with JSON and
//! markdown reports.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::finitegrp::{
    bfs_closure, normal_closure, rs_generators, todd_coxeter, FiniteGroupError, RsError, TcError,
    DEFAULT_CAP,
};
use crate::homology::{
    generator_matrix, level_member, level_member_matrix, lift_obstruction, phi, phi_of_matrix, preserves_form, psi,
    same_h1_action, word_matrix, Generator, HomologyError, LevelParity, LiftOutcome, SurfaceCtx, TorelliTag,
};
use crate::linalg::{IntMatrix, LinalgError, ModMatrix};
use crate::pi1free::{
    fold, prop34_normal_gens, prop34_relators, prop52_claimed_gens, transversal_g_tilde, verify_ker_theta, FreeWord,
    Pi1Ctx, Pi1Error, ThetaVector, DEFAULT_COSET_CAP,
};
use crate::words::{
    commutator_lemma_identities, d_trivial_signs, enum_family, family_dual_identities, h_set, thm_gen_n_sets,
    thm_main2_normal_generators, thm_main3_generators, three_chain_identities, transversal_2y_word,
    twist_square_identities, y_set, z_set, BoundaryLetter, BoundaryRange, Family, Identity, Letter, McgWord, WordError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        })
    }
}

/// Parameters shared by all checks; each check reads only the ones it lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckParams {
    pub g: usize,
    pub n: usize,
    pub d: u32,
    pub l: u32,
    pub seed: u64,
}

impl Default for CheckParams {
    fn default() -> Self {
        CheckParams { g: 4, n: 1, d: 2, l: 3, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LedgerError {
    #[error("unknown check id {0:?}")]
    UnknownId(String),
    #[error("bad parameter list: {0}")]
    BadParams(String),
}

impl FromStr for CheckParams {
    type Err = LedgerError;

    /// `g=4,d=2`; unspecified keys keep their defaults.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = CheckParams::default();
        for part in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| LedgerError::BadParams(format!("expected key=value, got {part:?}")))?;
            let bad = || LedgerError::BadParams(format!("bad value for {k}: {v:?}"));
            match k.trim() {
                "g" => p.g = v.trim().parse().map_err(|_| bad())?,
                "n" => p.n = v.trim().parse().map_err(|_| bad())?,
                "d" => p.d = v.trim().parse().map_err(|_| bad())?,
                "l" => p.l = v.trim().parse().map_err(|_| bad())?,
                "seed" => p.seed = v.trim().parse().map_err(|_| bad())?,
                other => return Err(LedgerError::BadParams(format!("unknown key {other:?}"))),
            }
        }
        Ok(p)
    }
}

impl CheckParams {
    fn value(&self, key: &str) -> Value {
        match key {
            "g" => json!(self.g),
            "n" => json!(self.n),
            "d" => json!(self.d),
            "l" => json!(self.l),
            "seed" => json!(self.seed),
            _ => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub params: BTreeMap<String, Value>,
    pub status: Status,
    pub details: Value,
    pub runtime_ms: u64,
    pub anchor: String,
}

impl CheckRecord {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    fn summary(&self) -> String {
        self.details
            .get("summary")
            .and_then(Value::as_str)
            .unwrap_or_default()
            .to_string()
    }
}

/// Why a check stopped before reaching a verdict.
#[derive(Debug)]
enum Halt {
    /// A desk-scale guard or explicit cap; reported as inconclusive.
    Guard(String),
    /// An unexpected library error; reported as a failure.
    Error(String),
}

macro_rules! halt_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Halt {
            fn from(e: $t) -> Self {
                Halt::Error(e.to_string())
            }
        }
    )*};
}

halt_from!(HomologyError, WordError, LinalgError, RsError);

impl From<FiniteGroupError> for Halt {
    fn from(e: FiniteGroupError) -> Self {
        match e {
            FiniteGroupError::CapExceeded { .. } => Halt::Guard(e.to_string()),
            other => Halt::Error(other.to_string()),
        }
    }
}

impl From<Pi1Error> for Halt {
    fn from(e: Pi1Error) -> Self {
        match e {
            Pi1Error::TooLarge(_) => Halt::Guard(e.to_string()),
            other => Halt::Error(other.to_string()),
        }
    }
}

impl From<TcError> for Halt {
    fn from(e: TcError) -> Self {
        match e {
            TcError::Inconclusive { .. } => Halt::Guard(e.to_string()),
            other => Halt::Error(other.to_string()),
        }
    }
}

fn guard(ok: bool, why: impl FnOnce() -> String) -> Result<(), Halt> {
    if ok {
        Ok(())
    } else {
        Err(Halt::Guard(why()))
    }
}

type Verdict = Result<(bool, Value), Halt>;

/// A catalog entry.
pub struct CheckSpec {
    pub id: &'static str,
    pub anchor: &'static str,
    pub params: &'static [&'static str],
    run: fn(&CheckParams) -> Verdict,
}

impl fmt::Debug for CheckSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CheckSpec").field("id", &self.id).finish()
    }
}

static CATALOG: &[CheckSpec] = &[
    CheckSpec {
        id: "EX21-MATRICES",
        anchor: "genus-3 matrices of Φ(t^d) and Φ(Y), and the general-genus entry formulas",
        params: &["g", "d"],
        run: ex21_matrices,
    },
    CheckSpec {
        id: "GEN-FIX-ONES",
        anchor: "every twist and crosscap slide fixes the class of α_{1,…,g}",
        params: &["g"],
        run: gen_fix_ones,
    },
    CheckSpec {
        id: "T2-EQ-YY",
        anchor: "t_{α_{a,b}}^2 = Y_{b,a}^{-1} Y_{a,b}",
        params: &["g"],
        run: t2_eq_yy,
    },
    CheckSpec {
        id: "THM23-ELEM",
        anchor: "Φ of [t_{α_{j,g}},Y_{i,j}]^{d/2}, [t_{α_{i,g}},Y_{j,i}]^{d/2}, t_{α_{1,k}}^d are e_ij^d, e_ji^d, e_k1 e_1k^d e_k1^{-1}",
        params: &["g", "d"],
        run: thm23_elem,
    },
    CheckSpec {
        id: "THM23-OBSTRUCT",
        anchor: "no lift of e_12^d preserves the mod-2 form when d is odd",
        params: &["g", "d"],
        run: thm23_obstruct,
    },
    CheckSpec {
        id: "THM23-KER",
        anchor: "ker Φ on the level-d subgroup is Torelli, extended by t_{α_{1,…,g}}^d exactly when g is even and d odd",
        params: &["g", "d"],
        run: thm23_ker,
    },
    CheckSpec {
        id: "PSI-O2",
        anchor: "O_2(g) is generated by Ψ(t_{α_{i,i+1}}) and Ψ(t_{α_{1,2,3,4}})",
        params: &["g"],
        run: psi_o2,
    },
    CheckSpec {
        id: "THM31-MEMBER",
        anchor: "closed-surface normal generators of the level-d subgroup",
        params: &["g", "d"],
        run: thm31_member,
    },
    CheckSpec {
        id: "LEM42-3CHAIN",
        anchor: "3-chain relation rewriting D_{1,j,k,l} and its conjugates",
        params: &["g"],
        run: lem42_3chain,
    },
    CheckSpec {
        id: "LEM43-COMM",
        anchor: "case table for [x_1, x_2] over pairs of crosscap slides",
        params: &["g"],
        run: lem43_comm,
    },
    CheckSpec {
        id: "FAMILY-DUAL",
        anchor: "twist and slide realizations of A, B, C agree; D acts trivially",
        params: &["g"],
        run: family_dual,
    },
    CheckSpec {
        id: "RS-GAMMA24",
        anchor: "Γ̂_2/Γ_4 ≅ (Z/2)^{|𝒴|}, and its commutator subgroup is Γ_4",
        params: &["g"],
        run: rs_gamma24,
    },
    CheckSpec {
        id: "RS-M4-SCHREIER",
        anchor: "Schreier generators of the level-4 subgroup over the transversal 2^𝒴",
        params: &["g"],
        run: rs_m4_schreier,
    },
    CheckSpec {
        id: "THM41-MEMBER",
        anchor: "y x y^{-1}, x ∈ 𝒜∪ℬ∪𝒞∪𝒟, y ∈ 2^𝒴 lie in the level-4 subgroup",
        params: &["g", "seed"],
        run: thm41_member,
    },
    CheckSpec {
        id: "THM41-MOD8",
        anchor: "Φ-images mod 8 of the level-4 generators generate Γ_4(g-1)/Γ_8(g-1)",
        params: &["g", "seed"],
        run: thm41_mod8,
    },
    CheckSpec {
        id: "TOWER-2L",
        anchor: "Γ_{2^{l-1}}/Γ_{2^l} ≅ (Z/2)^{(g-1)^2-1} with transversal 2^𝒵",
        params: &["g", "l"],
        run: tower_2l,
    },
    CheckSpec {
        id: "THETA-BASIS",
        anchor: "θ(x_i x_g) = -e_i + e_g; θ kills the normal generators of its kernel",
        params: &["g", "n", "d"],
        run: theta_basis,
    },
    CheckSpec {
        id: "PROP34-TC",
        anchor: "ker θ normally generated by x_i^2, y_k, z_k, (x_i x_j x_g)^2, (x_i x_g)^d",
        params: &["g", "n", "d"],
        run: prop34_tc,
    },
    CheckSpec {
        id: "PROP52-STALLINGS",
        anchor: "ker θ generated by conjugates over the transversal G̃",
        params: &["g", "n", "d"],
        run: prop52_stallings,
    },
    CheckSpec {
        id: "THM51-COUNTS",
        anchor: "cardinalities of 𝓕_l, 𝓖_l, 𝓗_n for the bounded-surface generating set",
        params: &["g", "n", "d"],
        run: thm51_counts,
    },
];

pub fn catalog() -> &'static [CheckSpec] {
    CATALOG
}

pub fn check_ids() -> Vec<&'static str> {
    let mut ids: Vec<_> = CATALOG.iter().map(|c| c.id).collect();
    ids.sort_unstable();
    ids
}

fn find(id: &str) -> Result<&'static CheckSpec, LedgerError> {
    CATALOG
        .iter()
        .find(|c| c.id.eq_ignore_ascii_case(id))
        .ok_or_else(|| LedgerError::UnknownId(id.to_string()))
}

pub fn run_check(id: &str, params: &CheckParams) -> Result<CheckRecord, LedgerError> {
    let spec = find(id)?;
    let start = Instant::now();
    let (status, mut details) = match (spec.run)(params) {
        Ok((true, d)) => (Status::Pass, d),
        Ok((false, d)) => (Status::Fail, d),
        Err(Halt::Guard(why)) => (Status::Inconclusive, json!({ "summary": why })),
        Err(Halt::Error(why)) => (Status::Fail, json!({ "summary": format!("error: {why}") })),
    };
    if !details.is_object() {
        details = json!({ "summary": details });
    }
    Ok(CheckRecord {
        id: spec.id.to_string(),
        params: spec.params.iter().map(|k| (k.to_string(), params.value(k))).collect(),
        status,
        details,
        runtime_ms: start.elapsed().as_millis() as u64,
        anchor: spec.anchor.to_string(),
    })
}

/// Runs `all`, a single id, or a comma-separated list of ids, in parallel;
/// records come back sorted by id.
pub fn run_suite(filter: &str, params: &CheckParams) -> Result<Vec<CheckRecord>, LedgerError> {
    let ids: Vec<&'static str> = if filter.trim().eq_ignore_ascii_case("all") {
        check_ids()
    } else {
        filter
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| find(s).map(|c| c.id))
            .collect::<Result<_, _>>()?
    };
    if ids.is_empty() {
        return Err(LedgerError::UnknownId(filter.to_string()));
    }
    let mut out: Vec<CheckRecord> = ids
        .par_iter()
        .map(|id| run_check(id, params))
        .collect::<Result<_, _>>()?;
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out.dedup_by(|a, b| a.id == b.id);
    Ok(out)
}

pub fn to_json(records: &[CheckRecord]) -> Value {
    serde_json::to_value(records).expect("records serialize")
}

pub fn to_markdown(records: &[CheckRecord]) -> String {
    let mut s = String::from("| id | params | status | runtime_ms | summary |\n|---|---|---|---|---|\n");
    for r in records {
        let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        s.push_str(&format!(
            "| {} | {} | {} | {} | {} |\n",
            r.id,
            params.join(","),
            r.status,
            r.runtime_ms,
            r.summary().replace('|', "\\|")
        ));
    }
    s
}

/// The overall status of a batch: fail beats inconclusive beats pass.
pub fn aggregate(records: &[CheckRecord]) -> Status {
    if records.iter().any(|r| r.status == Status::Fail) {
        Status::Fail
    } else if records.iter().any(|r| r.status == Status::Inconclusive) {
        Status::Inconclusive
    } else {
        Status::Pass
    }
}

// ---------------------------------------------------------------------------
// shared helpers

fn ctx(g: usize) -> Result<SurfaceCtx, Halt> {
    Ok(SurfaceCtx::new(g)?)
}

fn parse(text: &str, g: usize) -> Result<McgWord, Halt> {
    Ok(McgWord::parse(text, g)?)
}

fn mat(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(rows).expect("square literal")
}

fn e(n: usize, i: usize, j: usize, k: i64) -> IntMatrix {
    IntMatrix::elementary(n, i, j, k).expect("valid elementary index")
}

fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    a.multiply(b).expect("equal dimensions")
}

/// `e_ij^d` (`i ≠ j`) and `e_k1 e_1k^d e_k1^{-1}` (`2 ≤ k ≤ n`): generators
/// of the principal congruence subgroup of level `d` used throughout.
pub fn congruence_generators(n: usize, d: i64) -> Vec<IntMatrix> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                out.push(e(n, i, j, d));
            }
        }
    }
    for k in 2..=n {
        out.push(mul(&mul(&e(n, k, 1, 1), &e(n, 1, k, d)), &e(n, k, 1, -1)));
    }
    out
}

fn reduce_all(ms: &[IntMatrix], q: u32) -> Result<Vec<ModMatrix>, Halt> {
    ms.iter().map(|m| Ok(m.reduce_mod(q)?)).collect()
}

fn phi_mod(w: &McgWord, q: u32) -> Result<ModMatrix, Halt> {
    Ok(phi(w, ctx(w.genus())?)?.reduce_mod(q)?)
}

/// Twists about `α_{i,j}`, `α_{1,2,3,4}` and every crosscap slide: a
/// generating set for the homology image of the closed-surface group.
fn alphabet(g: usize) -> Result<Vec<McgWord>, Halt> {
    let mut out = Vec::new();
    for i in 1..=g {
        for j in i + 1..=g {
            out.push(McgWord::letter(g, Letter::twist(&[i, j]), 1)?);
        }
    }
    if g >= 4 {
        out.push(McgWord::letter(g, Letter::twist(&[1, 2, 3, 4]), 1)?);
    }
    for a in 1..=g {
        for b in 1..=g {
            if a != b {
                out.push(McgWord::letter(g, Letter::slide(a, b), 1)?);
            }
        }
    }
    Ok(out)
}

fn identity_suite(ids: &[Identity], g: usize) -> Verdict {
    let c = ctx(g)?;
    let results: Vec<(String, bool, bool)> = ids
        .par_iter()
        .map(|id| {
            let l = word_matrix(&id.lhs, c)?;
            let r = word_matrix(&id.rhs, c)?;
            Ok((id.label.clone(), same_h1_action(&l, &r), l == r))
        })
        .collect::<Result<_, HomologyError>>()?;
    let failed: Vec<&String> = results.iter().filter(|r| !r.1).map(|r| &r.0).collect();
    let exact = results.iter().filter(|r| r.2).count();
    Ok((
        failed.is_empty() && !ids.is_empty(),
        json!({
            "summary": format!("{}/{} identities hold on H_1", results.len() - failed.len(), results.len()),
            "identities": results.len(),
            "exact_integer_equalities": exact,
            "failed": failed,
        }),
    ))
}

// ---------------------------------------------------------------------------
// checks

fn ex21_matrices(p: &CheckParams) -> Verdict {
    let d = p.d as i64;
    guard((1..=64).contains(&d), || format!("level {d} outside 1..=64"))?;
    guard((3..=12).contains(&p.g), || format!("genus {} outside 3..=12", p.g))?;
    let mut failed = Vec::new();
    let mut compared = 0usize;

    // the displayed genus-3 matrices
    let c3 = ctx(3)?;
    let displayed: Vec<(String, IntMatrix)> = vec![
        (format!("T(1,2)^{d}"), mat(&[vec![1 - d, d], vec![-d, 1 + d]])),
        (format!("T(1,3)^{d}"), mat(&[vec![1, 0], vec![d, 1]])),
        (format!("T(2,3)^{d}"), mat(&[vec![1, d], vec![0, 1]])),
        ("Y(1,2)".into(), mat(&[vec![-1, 2], vec![0, 1]])),
        ("Y(2,1)".into(), mat(&[vec![1, 0], vec![2, -1]])),
        ("Y(1,3)".into(), mat(&[vec![-1, 0], vec![0, 1]])),
        ("Y(3,1)".into(), mat(&[vec![-1, 0], vec![-2, 1]])),
        ("Y(2,3)".into(), mat(&[vec![1, 0], vec![0, -1]])),
        ("Y(3,2)".into(), mat(&[vec![1, -2], vec![0, -1]])),
    ];
    for (word, want) in &displayed {
        compared += 1;
        if phi(&parse(word, 3)?, c3)? != *want {
            failed.push(format!("g=3 {word}"));
        }
    }

    // the general-genus formulas
    let g = p.g;
    let n = g - 1;
    let c = ctx(g)?;
    let base = |entries: &[(usize, usize, i64)]| {
        let mut rows = vec![vec![0i64; n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 1;
        }
        for &(i, j, v) in entries {
            rows[i - 1][j - 1] = v;
        }
        mat(&rows)
    };
    for i in 1..g {
        for j in i + 1..=g {
            let want = if j < g {
                base(&[(i, j, d), (j, i, -d), (i, i, 1 - d), (j, j, 1 + d)])
            } else {
                let col: Vec<_> = (1..g).filter(|&r| r != i).map(|r| (r, i, d)).collect();
                base(&col)
            };
            compared += 1;
            if phi(&parse(&format!("T({i},{j})^{d}"), g)?, c)? != want {
                failed.push(format!("T({i},{j})^{d}"));
            }
            let (yi, yj) = if j < g {
                (base(&[(i, j, 2), (i, i, -1)]), base(&[(j, i, 2), (j, j, -1)]))
            } else {
                let mut col: Vec<_> = (1..g).filter(|&r| r != i).map(|r| (r, i, -2)).collect();
                col.push((i, i, -1));
                (base(&[(i, i, -1)]), base(&col))
            };
            compared += 2;
            if phi(&parse(&format!("Y({i},{j})"), g)?, c)? != yi {
                failed.push(format!("Y({i},{j})"));
            }
            if phi(&parse(&format!("Y({j},{i})"), g)?, c)? != yj {
                failed.push(format!("Y({j},{i})"));
            }
        }
    }
    if g % 2 == 0 {
        let all: Vec<String> = (1..=g).map(|i| i.to_string()).collect();
        compared += 1;
        if !phi(&parse(&format!("T({})^{d}", all.join(",")), g)?, c)?.is_identity() {
            failed.push("T(1..g)^d".into());
        }
    }
    Ok((
        failed.is_empty(),
        json!({
            "summary": format!("{}/{compared} matrices match", compared - failed.len()),
            "compared": compared,
            "failed": failed,
        }),
    ))
}

fn even_subsets(g: usize) -> Vec<Vec<usize>> {
    (1u32..(1 << g))
        .filter(|m| m.count_ones() % 2 == 0)
        .map(|m| (0..g).filter(|b| m >> b & 1 == 1).map(|b| b + 1).collect())
        .collect()
}

fn gen_fix_ones(p: &CheckParams) -> Verdict {
    let g = p.g;
    guard((2..=10).contains(&g), || format!("genus {g} outside 2..=10"))?;
    let c = ctx(g)?;
    let ones = vec![num_bigint::BigInt::from(1); g];
    let mut gens: Vec<Generator> = even_subsets(g).into_iter().map(Generator::Twist).collect();
    for a in 1..=g {
        for b in 1..=g {
            if a != b {
                gens.push(Generator::Slide(a, b));
                gens.push(Generator::Torelli(TorelliTag::Beta(a, b)));
            }
        }
    }
    gens.push(Generator::Torelli(TorelliTag::Gamma));
    let mut failed = Vec::new();
    for gen in &gens {
        let m = generator_matrix(gen, 1, c)?;
        let image: Vec<_> = (0..g)
            .map(|i| (0..g).map(|j| m.get(i, j)).fold(num_bigint::BigInt::from(0), |a, b| a + b))
            .collect();
        if image != ones || !preserves_form(&m) {
            failed.push(format!("{gen:?}"));
        }
    }
    Ok((
        failed.is_empty(),
        json!({
            "summary": format!("{}/{} generators fix 𝟙 and preserve the form", gens.len() - failed.len(), gens.len()),
            "generators": gens.len(),
            "failed": failed,
        }),
    ))
}

fn t2_eq_yy(p: &CheckParams) -> Verdict {
    guard((2..=8).contains(&p.g), || format!("genus {} outside 2..=8", p.g))?;
    identity_suite(&twist_square_identities(p.g)?, p.g)
}

fn thm23_elem(p: &CheckParams) -> Verdict {
    let (g, d) = (p.g, p.d as i64);
    guard(d >= 2 && d % 2 == 0 && d <= 64, || format!("needs even level in 2..=64, got {d}"))?;
    guard((3..=8).contains(&g), || format!("genus {g} outside 3..=8"))?;
    let c = ctx(g)?;
    let n = g - 1;
    let h = d / 2;
    let mut failed = Vec::new();
    let mut compared = 0usize;
    for i in 1..g {
        for j in i + 1..g {
            let w1 = parse(&format!("[T({j},{g}),Y({i},{j})]^{h}"), g)?;
            let w2 = parse(&format!("[T({i},{g}),Y({j},{i})]^{h}"), g)?;
            compared += 2;
            if phi(&w1, c)? != e(n, i, j, d) {
                failed.push(w1.to_string());
            }
            if phi(&w2, c)? != e(n, j, i, d) {
                failed.push(w2.to_string());
            }
        }
    }
    for k in 2..g {
        let w = parse(&format!("T(1,{k})^{d}"), g)?;
        let want = mul(&mul(&e(n, k, 1, 1), &e(n, 1, k, d)), &e(n, k, 1, -1));
        compared += 1;
        if phi(&w, c)? != want {
            failed.push(w.to_string());
        }
    }
    Ok((
        failed.is_empty(),
        json!({
            "summary": format!("{}/{compared} identities exact", compared - failed.len()),
            "compared": compared,
            "failed": failed,
        }),
    ))
}

fn thm23_obstruct(p: &CheckParams) -> Verdict {
    let (g, d) = (p.g, p.d);
    guard((3..=12).contains(&g), || format!("genus {g} outside 3..=12"))?;
    guard((2..=64).contains(&d), || format!("level {d} outside 2..=64"))?;
    let c = ctx(g)?;
    let target = e(g - 1, 1, 2, d as i64);
    let parity = LevelParity::of(d);
    let outcome = lift_obstruction(&target, c, parity, d)?;
    Ok(match (parity, outcome) {
        (LevelParity::Odd, LiftOutcome::Obstructed { candidates }) => (
            true,
            json!({
                "summary": format!("all {candidates} lifts of e_12^{d} fail the form"),
                "candidates": candidates,
            }),
        ),
        (LevelParity::Even, LiftOutcome::Witness(m)) => {
            let ok = preserves_form(&m) && phi_of_matrix(&m)? == target;
            (
                ok,
                json!({
                    "summary": format!("form-preserving lift of e_12^{d} found"),
                    "witness": m.to_string(),
                }),
            )
        }
        (LevelParity::Odd, LiftOutcome::Witness(m)) => (
            false,
            json!({ "summary": "unexpected form-preserving lift at odd level", "witness": m.to_string() }),
        ),
        (LevelParity::Even, LiftOutcome::Obstructed { candidates }) => (
            false,
            json!({ "summary": "no form-preserving lift at even level", "candidates": candidates }),
        ),
    })
}

fn thm23_ker(p: &CheckParams) -> Verdict {
    let (g, d) = (p.g, p.d);
    guard((3..=12).contains(&g), || format!("genus {g} outside 3..=12"))?;
    guard((2..=64).contains(&d), || format!("level {d} outside 2..=64"))?;
    // lifts of Φ = I: α_j ↦ α_j + c_j 𝟙 with c_j ∈ {0, 1}, up to 2𝟙
    let mut survivors = Vec::new();
    for mask in 0u64..(1 << g) {
        let rows: Vec<Vec<i64>> = (0..g)
            .map(|i| (0..g).map(|j| i64::from(i == j) + (mask >> j & 1) as i64).collect())
            .collect();
        let m = mat(&rows);
        // 𝟙 ↦ (1 + Σc) 𝟙 must stay 𝟙 modulo 2𝟙
        let parity_ok = mask.count_ones() % 2 == 0;
        if parity_ok && preserves_form(&m) && level_member_matrix(&m, d)? {
            survivors.push(mask);
        }
    }
    let expect_extra = g % 2 == 0 && d % 2 == 1;
    let mut ok = survivors.len() == if expect_extra { 2 } else { 1 } && survivors.contains(&0);
    let mut details = json!({
        "summary": format!(
            "{} H_1-classes in the level-{d} kernel of Φ modulo Torelli (expected {})",
            survivors.len(),
            if expect_extra { 2 } else { 1 }
        ),
        "survivor_masks": survivors,
    });
    if g % 2 == 0 {
        let c = ctx(g)?;
        let all: Vec<String> = (1..=g).map(|i| i.to_string()).collect();
        let w = parse(&format!("T({})^{d}", all.join(",")), g)?;
        let m = word_matrix(&w, c)?;
        let in_level = level_member_matrix(&m, d)?;
        let phi_trivial = phi_of_matrix(&m)?.is_identity();
        let torelli = same_h1_action(&m, &IntMatrix::identity(g));
        ok &= in_level && phi_trivial && torelli != expect_extra;
        details["t_power"] = json!({
            "word": w.to_string(),
            "level_member": in_level,
            "phi_identity": phi_trivial,
            "torelli": torelli,
        });
    }
    Ok((ok, details))
}

/// All `g × g` matrices over `Z/2` with orthonormal columns, by backtracking.
pub fn brute_force_o2(g: usize) -> Vec<ModMatrix> {
    fn extend(g: usize, cols: &mut Vec<u32>, out: &mut Vec<ModMatrix>) {
        if cols.len() == g {
            let entries: Vec<i64> = (0..g)
                .flat_map(|i| cols.iter().map(move |c| (c >> i & 1) as i64))
                .collect();
            out.push(ModMatrix::from_entries(g, 2, &entries).expect("valid shape"));
            return;
        }
        for v in 1u32..(1 << g) {
            if v.count_ones() % 2 == 1 && cols.iter().all(|c| (c & v).count_ones() % 2 == 0) {
                cols.push(v);
                extend(g, cols, out);
                cols.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(g, &mut Vec::new(), &mut out);
    out
}

fn psi_o2(p: &CheckParams) -> Verdict {
    let g = p.g;
    guard((4..=5).contains(&g), || format!("genus {g} outside 4..=5"))?;
    let c = ctx(g)?;
    let mut words: Vec<McgWord> = (1..g).map(|i| parse(&format!("T({i},{})", i + 1), g)).collect::<Result<_, _>>()?;
    words.push(parse("T(1,2,3,4)", g)?);
    let gens: Vec<ModMatrix> = words.iter().map(|w| psi(w, c)).collect::<Result<_, _>>()?;
    let grp = bfs_closure(g, 2, &gens, DEFAULT_CAP)?;
    let brute = brute_force_o2(g);
    let brute_set: HashSet<ModMatrix> = brute.iter().cloned().collect();
    let orthogonal = brute.iter().all(|m| m.transpose().multiply(m).map(|x| x.is_identity()).unwrap_or(false));
    let equal = grp.element_set() == brute_set;
    Ok((
        equal && orthogonal,
        json!({
            "summary": format!("closure order {}, brute-force order {}", grp.order(), brute_set.len()),
            "closure_order": grp.order(),
            "brute_force_order": brute_set.len(),
            "equal": equal,
        }),
    ))
}

fn thm31_member(p: &CheckParams) -> Verdict {
    let (g, d) = (p.g, p.d);
    guard((4..=5).contains(&g), || format!("genus {g} outside 4..=5"))?;
    guard((2..=6).contains(&d), || format!("level {d} outside 2..=6"))?;
    let c = ctx(g)?;
    let records = thm_main2_normal_generators(g, 0, d, BoundaryRange::Statement)?;
    let words: Vec<&McgWord> = records.iter().filter(|r| r.realizable).map(|r| &r.word).collect();
    let mut not_member = Vec::new();
    for r in records.iter().filter(|r| r.realizable) {
        if !level_member(&r.word, d, c)? {
            not_member.push(r.name.clone());
        }
    }
    let n = g - 1;
    let q = 2 * d;
    let ambient: Vec<ModMatrix> = alphabet(g)?.iter().map(|w| phi_mod(w, q)).collect::<Result<_, _>>()?;
    let normal: Vec<ModMatrix> = words.iter().map(|w| phi_mod(w, q)).collect::<Result<_, _>>()?;
    let closure = normal_closure(n, q, &ambient, &normal, DEFAULT_CAP)?;
    let reference_gens = if d % 2 == 0 {
        reduce_all(&congruence_generators(n, d as i64), q)?
    } else {
        // x ≡ a (mod 2), x ≡ I (mod d): x = d·a + (d + 1)·I
        let di = d as i64;
        alphabet(g)?
            .iter()
            .map(|w| {
                let a = phi_mod(w, 2)?;
                let entries: Vec<i64> = (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .map(|(i, j)| di * a.get(i, j) as i64 + if i == j { di + 1 } else { 0 })
                    .collect();
                Ok(ModMatrix::from_entries(n, q, &entries)?)
            })
            .collect::<Result<_, Halt>>()?
    };
    let reference = bfs_closure(n, q, &reference_gens, DEFAULT_CAP)?;
    let equal = closure.same_elements(&reference);
    let mut details = json!({
        "summary": format!(
            "{} generators, {} outside level {d}; normal closure mod {q} order {}, reference order {}",
            words.len(),
            not_member.len(),
            closure.order(),
            reference.order()
        ),
        "generators": records.iter().map(|r| r.name.clone()).collect::<Vec<_>>(),
        "not_member": not_member,
        "closure_order": closure.order(),
        "reference_order": reference.order(),
        "equal": equal,
    });
    if d == 2 {
        // Φ of the level-2 subgroup also contains the crosscap slides
        let mut hat = reference_gens.clone();
        hat.push(phi_mod(&parse("Y(1,2)", g)?, q)?);
        let hat = bfs_closure(n, q, &hat, DEFAULT_CAP)?;
        details["level2_image_order"] = json!(hat.order());
    }
    Ok((not_member.is_empty() && equal, details))
}

fn lem42_3chain(p: &CheckParams) -> Verdict {
    guard((4..=8).contains(&p.g), || format!("genus {} outside 4..=8", p.g))?;
    identity_suite(&three_chain_identities(p.g)?, p.g)
}

fn lem43_comm(p: &CheckParams) -> Verdict {
    guard((4..=8).contains(&p.g), || format!("genus {} outside 4..=8", p.g))?;
    identity_suite(&commutator_lemma_identities(p.g)?, p.g)
}

fn family_dual(p: &CheckParams) -> Verdict {
    let g = p.g;
    guard((4..=8).contains(&g), || format!("genus {g} outside 4..=8"))?;
    let (ok, mut details) = identity_suite(&family_dual_identities(g)?, g)?;
    let mut signs = BTreeMap::new();
    for el in enum_family(Family::D, g)? {
        let (j, k, l) = (el.indices[1], el.indices[2], el.indices[3]);
        signs.insert(format!("D(1,{j},{k},{l})"), d_trivial_signs(g, j, k, l)?);
    }
    let all_signed = signs.values().all(|s| !s.is_empty());
    details["d_trivial_signs"] = json!(signs);
    Ok((ok && all_signed, details))
}

fn y_and_d(g: usize) -> Result<Vec<McgWord>, Halt> {
    let mut out = Vec::new();
    for f in [Family::Y, Family::D] {
        out.extend(enum_family(f, g)?.into_iter().map(|e| e.word));
    }
    Ok(out)
}

fn rs_gamma24(p: &CheckParams) -> Verdict {
    let g = p.g;
    guard((4..=5).contains(&g), || format!("genus {g} outside 4..=5"))?;
    let n = g - 1;
    let bits = y_set(g).len();
    let gens = y_and_d(g)?;
    let m4: Vec<ModMatrix> = gens.iter().map(|w| phi_mod(w, 4)).collect::<Result<_, _>>()?;
    let grp = bfs_closure(n, 4, &m4, DEFAULT_CAP)?;
    let exponent = grp.exponent();
    // oracle: the matrices I + 2A over Z/4
    let mut hat: HashSet<ModMatrix> = HashSet::new();
    for a in 0u64..(1 << (n * n)) {
        let entries: Vec<i64> = (0..n * n)
            .map(|k| 2 * (a >> k & 1) as i64 + i64::from(k / n == k % n))
            .collect();
        hat.insert(ModMatrix::from_entries(n, 4, &entries)?);
    }
    let equal_hat = grp.element_set() == hat;
    // 2^𝒴 is a section of the quotient
    let ys: Vec<ModMatrix> = y_set(g)
        .iter()
        .map(|&(i, j)| phi_mod(&parse(&format!("Y({i},{j})"), g)?, 4))
        .collect::<Result<_, _>>()?;
    let mut images = HashSet::new();
    for mask in 0u64..(1 << bits) {
        let mut m = ModMatrix::identity(n, 4);
        for (b, y) in ys.iter().enumerate() {
            if mask >> b & 1 == 1 {
                m = m.multiply(y)?;
            }
        }
        images.insert(m);
    }
    let section = images.len() == 1 << bits && images.iter().all(|m| grp.contains(m));
    // commutator subgroup mod 8 against Γ_4
    let m8: Vec<ModMatrix> = gens.iter().map(|w| phi_mod(w, 8)).collect::<Result<_, _>>()?;
    let mut comms = Vec::new();
    for a in &m8 {
        for b in &m8 {
            let c = a.multiply(b)?.multiply(&a.inverse()?)?.multiply(&b.inverse()?)?;
            if !c.is_identity() {
                comms.push(c);
            }
        }
    }
    let derived = normal_closure(n, 8, &m8, &comms, DEFAULT_CAP)?;
    let gamma4 = bfs_closure(n, 8, &reduce_all(&congruence_generators(n, 4), 8)?, DEFAULT_CAP)?;
    let derived_ok = derived.same_elements(&gamma4);
    let order_ok = grp.order() == 1 << bits;
    Ok((
        order_ok && exponent == 2 && equal_hat && section && derived_ok,
        json!({
            "summary": format!("order {} (expected 2^{bits}), exponent {exponent}", grp.order()),
            "order": grp.order(),
            "exponent": exponent,
            "equals_hat_gamma2_mod4": equal_hat,
            "transversal_is_section": section,
            "commutator_mod8_order": derived.order(),
            "gamma4_mod8_order": gamma4.order(),
            "commutator_is_gamma4": derived_ok,
        }),
    ))
}

fn rs_m4_schreier(p: &CheckParams) -> Verdict {
    let g = p.g;
    guard(g == 4, || format!("genus {g}: only g = 4 is within the desk-scale guard"))?;
    let bits = y_set(g).len();
    let trans: Vec<McgWord> = (0..1u64 << bits).map(|m| transversal_2y_word(g, m)).collect();
    let gens = y_and_d(g)?;
    let key = |w: &McgWord| phi_mod(w, 4).ok();
    let schreier = rs_generators(key, &trans, &gens)?;
    let c = ctx(g)?;
    let flags: Vec<bool> = schreier
        .par_iter()
        .map(|w| level_member(w, 4, c))
        .collect::<Result<_, _>>()?;
    let outside = flags.iter().filter(|f| !**f).count();
    Ok((
        outside == 0 && !schreier.is_empty(),
        json!({
            "summary": format!("{} Schreier generators, {outside} outside level 4", schreier.len()),
            "schreier_generators": schreier.len(),
            "outside_level4": outside,
        }),
    ))
}

/// Stream indices to check: the full stream at genus 4, a seeded sample of
/// 1000 otherwise.
fn main3_indices(g: usize, total: u64, seed: u64) -> (Vec<u64>, bool) {
    const SAMPLE: usize = 1000;
    if g == 4 || total <= SAMPLE as u64 {
        return ((0..total).collect(), true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<u64> = sample(&mut rng, total as usize, SAMPLE).into_iter().map(|i| i as u64).collect();
    idx.sort_unstable();
    (idx, false)
}

fn thm41_member(p: &CheckParams) -> Verdict {
    let g = p.g;
    guard((4..=6).contains(&g), || format!("genus {g} outside 4..=6"))?;
    let stream = thm_main3_generators(g)?;
    let (idx, full) = main3_indices(g, stream.len(), p.seed);
    let c = ctx(g)?;
    let outside: Vec<u64> = idx
        .par_iter()
        .map(|&i| Ok((i, level_member(&stream.get(i).expect("in range"), 4, c)?)))
        .collect::<Result<Vec<_>, HomologyError>>()?
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(i, _)| i)
        .collect();
    Ok((
        outside.is_empty(),
        json!({
            "summary": format!("{} of {} checked generators outside level 4", outside.len(), idx.len()),
            "stream_length": stream.len(),
            "checked": idx.len(),
            "full_stream": full,
            "outside_indices": outside,
        }),
    ))
}

fn thm41_mod8(p: &CheckParams) -> Verdict {
    let g = p.g;
    guard((4..=5).contains(&g), || format!("genus {g} outside 4..=5"))?;
    let n = g - 1;
    let stream = thm_main3_generators(g)?;
    let (idx, full) = main3_indices(g, stream.len(), p.seed);
    let images: Vec<ModMatrix> = idx
        .par_iter()
        .map(|&i| phi_mod(&stream.get(i).expect("in range"), 8))
        .collect::<Result<_, _>>()?;
    let distinct: Vec<ModMatrix> = images.into_iter().collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    let grp = bfs_closure(n, 8, &distinct, DEFAULT_CAP)?;
    let reference = bfs_closure(n, 8, &reduce_all(&congruence_generators(n, 4), 8)?, DEFAULT_CAP)?;
    let equal = grp.same_elements(&reference);
    let expected = 1usize << (n * n - 1);
    Ok((
        equal && reference.order() == expected,
        json!({
            "summary": format!("closure order {}, Γ_4 mod 8 order {} (expected {expected})", grp.order(), reference.order()),
            "checked": idx.len(),
            "full_stream": full,
            "distinct_images": distinct.len(),
            "closure_order": grp.order(),
            "reference_order": reference.order(),
            "equal": equal,
        }),
    ))
}

fn tower_2l(p: &CheckParams) -> Verdict {
    let (g, l) = (p.g, p.l);
    guard((4..=5).contains(&g), || format!("genus {g} outside 4..=5"))?;
    guard((3..=12).contains(&l), || format!("l = {l} outside 3..=12"))?;
    let n = g - 1;
    let (lo, hi) = (1u32 << (l - 1), 1u32 << l);
    let c = ctx(g)?;
    let zs = z_set(g, l)?;
    let mut not_member = Vec::new();
    for z in &zs {
        if !level_member(z, lo, c)? {
            not_member.push(z.to_string());
        }
    }
    let zm: Vec<ModMatrix> = zs.iter().map(|z| phi_mod(z, hi)).collect::<Result<_, _>>()?;
    let mut images = HashSet::new();
    for mask in 0u64..(1 << zm.len()) {
        let mut m = ModMatrix::identity(n, hi);
        for (b, z) in zm.iter().enumerate() {
            if mask >> b & 1 == 1 {
                m = m.multiply(z)?;
            }
        }
        images.insert(m);
    }
    let reference = bfs_closure(n, hi, &reduce_all(&congruence_generators(n, lo as i64), hi)?, DEFAULT_CAP)?;
    let expected = 1usize << (n * n - 1);
    let section = images.len() == expected && images.iter().all(|m| reference.contains(m));
    let exponent = reference.exponent();
    Ok((
        not_member.is_empty() && section && reference.order() == expected && exponent == 2,
        json!({
            "summary": format!(
                "Γ_{lo}/Γ_{hi} order {} (expected {expected}), {} distinct 2^𝒵 images",
                reference.order(),
                images.len()
            ),
            "quotient_order": reference.order(),
            "exponent": exponent,
            "z_set": zs.len(),
            "distinct_transversal_images": images.len(),
            "z_outside_level": not_member,
        }),
    ))
}

/// `θ̄` straight from the letters: a letter `x_i^{±1}` read after an even
/// (odd) number of `x`-letters contributes `-(e_i - e_g)` (`+(e_i - e_g)`).
pub fn theta_parity_oracle(ctx: Pi1Ctx, w: &FreeWord) -> Vec<i64> {
    let g = ctx.genus();
    let mut v = vec![0i64; g];
    let mut odd = false;
    for &l in w.letters() {
        let a = l.unsigned_abs() as usize;
        if a <= g {
            let s = if odd { 1 } else { -1 };
            v[a - 1] += s;
            v[g - 1] -= s;
            odd = !odd;
        }
    }
    v
}

fn theta_basis(p: &CheckParams) -> Verdict {
    let (g, n, d) = (p.g, p.n, p.d);
    guard((2..=12).contains(&g) && (1..=6).contains(&n), || format!("(g, n) = ({g}, {n}) outside the guard"))?;
    guard(d >= 2, || format!("level must be >= 2, got {d}"))?;
    let c = Pi1Ctx::new(g, n)?;
    let mut failed = Vec::new();
    for idx in 1..=c.basis_rank() {
        let w = c.expand(&FreeWord::letter(idx as i32));
        if theta_parity_oracle(c, &w) != c.basis_theta(idx) || c.theta_bar(&w)? != c.basis_theta(idx) {
            failed.push(format!("basis letter {idx}"));
        }
    }
    for i in 1..g {
        let mut want = vec![0i64; g];
        want[i - 1] = -1;
        want[g - 1] = 1;
        if c.theta_bar(&c.x_seq(&[i, g]))? != want {
            failed.push(format!("x{i} x{g}"));
        }
    }
    let killed: Vec<bool> = prop34_normal_gens(g, n, d)?
        .iter()
        .map(|w| Ok(c.theta(w, d)?.is_zero() && ThetaVector::from_integral(&theta_parity_oracle(c, w), d).is_zero()))
        .collect::<Result<_, Halt>>()?;
    let not_killed = killed.iter().filter(|k| !**k).count();
    // image of θ: the transversal hits each sum-zero vector once
    let trans = transversal_g_tilde(c, d)?;
    let images: HashSet<ThetaVector> = trans.iter().map(|w| c.theta(w, d)).collect::<Result<_, _>>()?;
    let sum_zero = images.iter().all(|v| v.coordinate_sum() == 0);
    let image_ok = images.len() == trans.len() && sum_zero;
    Ok((
        failed.is_empty() && not_killed == 0 && image_ok,
        json!({
            "summary": format!(
                "{} basis/oracle mismatches, {not_killed} normal generators with θ ≠ 0, |Im θ| = {}",
                failed.len(),
                images.len()
            ),
            "failed": failed,
            "image_size": images.len(),
            "image_sum_zero": sum_zero,
        }),
    ))
}

fn prop34_tc(p: &CheckParams) -> Verdict {
    let (g, n, d) = (p.g, p.n, p.d);
    guard((2..=12).contains(&g) && (1..=6).contains(&n), || format!("(g, n) = ({g}, {n}) outside the guard"))?;
    guard(d >= 2, || format!("level must be >= 2, got {d}"))?;
    let c = Pi1Ctx::new(g, n)?;
    let expected = transversal_g_tilde(c, d)?.len();
    let rels: Vec<Vec<i32>> = prop34_relators(g, n, d)?.iter().map(|w| w.letters().to_vec()).collect();
    let table = todd_coxeter(c.basis_rank(), &rels, DEFAULT_COSET_CAP)?;
    let claimed: Vec<FreeWord> = prop52_claimed_gens(g, n, d)?
        .iter()
        .map(|w| c.rewrite(w))
        .collect::<Result<_, _>>()?;
    let index = fold(c.basis_rank(), &claimed).index();
    Ok((
        table.cosets() == expected && index == Some(expected),
        json!({
            "summary": format!("{} cosets, Stallings index {}, expected {expected}", table.cosets(), index.map_or("infinite".to_string(), |i| i.to_string())),
            "relators": rels.len(),
            "cosets": table.cosets(),
            "stallings_index": index,
            "expected": expected,
        }),
    ))
}

fn prop52_stallings(p: &CheckParams) -> Verdict {
    let (g, n, d) = (p.g, p.n, p.d);
    guard((2..=12).contains(&g) && (1..=6).contains(&n), || format!("(g, n) = ({g}, {n}) outside the guard"))?;
    guard(d >= 2, || format!("level must be >= 2, got {d}"))?;
    let r = verify_ker_theta(g, n, d)?;
    let cores = (g - 1) + g + 2 * (n - 1) + (g - 1) * (g - 2) / 2;
    let count_ok = r.claimed as u64 == r.expected_index * cores as u64;
    let mut details = serde_json::to_value(&r).expect("report serializes");
    details["summary"] = json!(format!(
        "{} claimed generators, index {} (expected {}), subgroups equal: {}",
        r.claimed,
        r.index.map_or("infinite".to_string(), |i| i.to_string()),
        r.expected_index,
        r.subgroups_equal
    ));
    details["claimed_count_ok"] = json!(count_ok);
    if r.coset_count.is_none() {
        return Err(Halt::Guard(format!("coset cap {DEFAULT_COSET_CAP} reached")));
    }
    Ok((r.passed() && count_ok, details))
}

fn thm51_counts(p: &CheckParams) -> Verdict {
    let (g, n, d) = (p.g, p.n, p.d);
    guard((2..=8).contains(&g) && (1..=4).contains(&n), || format!("(g, n) = ({g}, {n}) outside the guard"))?;
    guard(d >= 2, || format!("level must be >= 2, got {d}"))?;
    let sets = thm_gen_n_sets(g, n, d, &[])?;
    let gl = (d as u64).pow((g - 1) as u32) as usize;
    let mut failed = Vec::new();
    let mut total = 0usize;
    for l in 1..=n {
        let f_expected = 2 * (g - 1) + 1 + g + 2 * (l - 1) + (g - 1) * (g - 2) / 2;
        let (f, gs) = (&sets.f[l - 1], &sets.g_sets[l - 1]);
        if f.len() != f_expected {
            failed.push(format!("|F_{l}| = {} (expected {f_expected})", f.len()));
        }
        let distinct: HashSet<&McgWord> = gs.iter().collect();
        if gs.len() != gl || distinct.len() != gl {
            failed.push(format!("|G_{l}| = {} (expected {gl})", distinct.len()));
        }
        let is_zeta = |w: &McgWord| {
            w.letters()
                .iter()
                .any(|(x, _)| matches!(x, Letter::Boundary(BoundaryLetter::Zeta(..) | BoundaryLetter::ZetaBar(..))))
        };
        if l == 1 && f.iter().any(is_zeta) {
            failed.push("F_1 contains a ζ entry".into());
        }
        total += f_expected * gl;
    }
    if sets.h.len() != total {
        failed.push(format!("|H_n| = {} (expected {total})", sets.h.len()));
    }
    if !h_set(g, 0, d)?.is_empty() {
        failed.push("H_0 is not empty".into());
    }
    Ok((
        failed.is_empty(),
        json!({
            "summary": format!("|H_{n}| = {} (expected {total}); {} count mismatches", sets.h.len(), failed.len()),
            "g_set": gl,
            "f_sets": sets.f.iter().map(Vec::len).collect::<Vec<_>>(),
            "h_set": sets.h.len(),
            "failed": failed,
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(s: &str) -> CheckParams {
        s.parse().unwrap()
    }

    #[test]
    fn ids_are_unique_and_sorted_lookup() {
        let ids = check_ids();
        assert_eq!(ids.len(), 20);
        let set: HashSet<_> = ids.iter().collect();
        assert_eq!(set.len(), 20);
        assert!(run_check("NOPE", &CheckParams::default()).is_err());
    }

    #[test]
    fn params_parse() {
        let p = params("g=5, d=3,seed=7");
        assert_eq!((p.g, p.n, p.d, p.l, p.seed), (5, 1, 3, 3, 7));
        assert!("g".parse::<CheckParams>().is_err());
        assert!("q=1".parse::<CheckParams>().is_err());
    }

    #[test]
    fn ex21_example() {
        let r = run_check("EX21-MATRICES", &params("g=3,d=2")).unwrap();
        assert_eq!(r.status, Status::Pass, "{:?}", r.details);
        assert_eq!(r.params.len(), 2);
    }

    #[test]
    fn rs_gamma24_example() {
        let r = run_check("RS-GAMMA24", &params("g=4")).unwrap();
        assert_eq!(r.status, Status::Pass, "{:?}", r.details);
        assert_eq!(r.details["order"], json!(512));
    }

    #[test]
    fn prop52_example() {
        let r = run_check("PROP52-STALLINGS", &params("g=4,n=1,d=2")).unwrap();
        assert_eq!(r.status, Status::Pass, "{:?}", r.details);
        assert_eq!(r.details["index"], json!(8));
    }

    #[test]
    fn guards_are_inconclusive() {
        let r = run_check("THM23-ELEM", &params("g=4,d=3")).unwrap();
        assert_eq!(r.status, Status::Inconclusive);
        let r = run_check("PSI-O2", &params("g=9")).unwrap();
        assert_eq!(r.status, Status::Inconclusive);
    }

    #[test]
    fn records_are_deterministic() {
        let p = params("g=4,d=3");
        let a = run_check("THM23-KER", &p).unwrap();
        let b = run_check("THM23-KER", &p).unwrap();
        assert_eq!((a.status, &a.details, &a.params), (b.status, &b.details, &b.params));
    }

    #[test]
    fn suite_is_sorted_and_reported() {
        let recs = run_suite("THM23-OBSTRUCT,EX21-MATRICES", &params("g=4,d=3")).unwrap();
        assert_eq!(recs[0].id, "EX21-MATRICES");
        assert_eq!(aggregate(&recs), Status::Pass);
        let md = to_markdown(&recs);
        assert_eq!(md.lines().count(), 4);
        let js = to_json(&recs);
        for key in ["id", "params", "status", "details", "runtime_ms", "anchor"] {
            assert!(js[0].get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn o2_brute_force_sizes() {
        // |O_2(2)| = 2, |O_2(3)| = 6
        assert_eq!(brute_force_o2(2).len(), 2);
        assert_eq!(brute_force_o2(3).len(), 6);
    }

    #[test]
    fn theta_oracle_example() {
        let c = Pi1Ctx::new(4, 1).unwrap();
        let w = c.x_seq(&[1, 4]);
        assert_eq!(ThetaVector::from_integral(&theta_parity_oracle(c, &w), 3).to_string(), c.theta(&w, 3).unwrap().to_string());
    }
}
