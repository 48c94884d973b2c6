//! Word identities from the level-4 generation argument, as `(lhs, rhs)`
//! pairs ready to be compared under the homology representation.

use super::families::{d_sign, d_word, enum_family, y_set, Family};
use super::{McgWord, WordError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub label: String,
    pub lhs: McgWord,
    pub rhs: McgWord,
}

/// Substitutes `X1`, `X2` and the single-letter indices `i, j, k, l` into a
/// word template.
fn instantiate(template: &str, x1: &str, x2: &str, idx: &[(char, usize)], g: usize) -> Result<McgWord, WordError> {
    let mut text = template.replace("X1", x1).replace("X2", x2);
    for &(c, v) in idx {
        text = text.replace(c, &v.to_string());
    }
    McgWord::parse(&text, g)
}

fn ident(label: String, lhs: McgWord, rhs: McgWord) -> Identity {
    Identity { label, lhs, rhs }
}

/// `t_{α_{a,b}}^2 = Y_{b,a}^{-1} Y_{a,b}` for all `a < b`.
pub fn twist_square_identities(g: usize) -> Result<Vec<Identity>, WordError> {
    let mut out = Vec::new();
    for a in 1..=g {
        for b in a + 1..=g {
            out.push(ident(
                format!("T({a},{b})^2"),
                McgWord::parse(&format!("T({a},{b})^2"), g)?,
                McgWord::parse(&format!("Y({b},{a})^-1 Y({a},{b})"), g)?,
            ));
        }
    }
    Ok(out)
}

/// Twist and slide forms of `A`, `B`, `C`, and `D` against the identity.
pub fn family_dual_identities(g: usize) -> Result<Vec<Identity>, WordError> {
    let mut out = Vec::new();
    for e in enum_family(Family::A, g)? {
        let (i, j) = (e.indices[0], e.indices[1]);
        let alt = e.alternate.clone().expect("A has a slide form");
        out.push(ident(format!("A({i},{j}) slide form"), e.realization.clone(), alt));
        out.push(ident(
            format!("A({i},{j}) reversed slide form"),
            e.realization.clone(),
            McgWord::parse(&format!("(Y({j},{i}) Y({i},{j})^-1)^2"), g)?,
        ));
    }
    for e in enum_family(Family::B, g)? {
        let (i, j) = (e.indices[0], e.indices[1]);
        let alt = e.alternate.clone().expect("B has a second form");
        out.push(ident(format!("B({i},{j}) = Y({j},{i})^2"), e.realization.clone(), alt));
        out.push(ident(format!("B({i},{j}) Torelli"), e.realization.clone(), McgWord::identity(g)));
    }
    for e in enum_family(Family::C, g)? {
        let ix = &e.indices;
        let alt = e.alternate.clone().expect("C has a slide form");
        out.push(ident(format!("C({},{};{}) slide form", ix[0], ix[1], ix[2]), e.realization.clone(), alt));
    }
    for e in enum_family(Family::D, g)? {
        let ix = &e.indices;
        out.push(ident(
            format!("D(1,{},{},{}) Torelli", ix[1], ix[2], ix[3]),
            e.realization.clone(),
            McgWord::identity(g),
        ));
    }
    Ok(out)
}

/// The 3-chain computation for `t_{α_{1,j,k,l}}^2`, every displayed line
/// against the next, for `1 < j < k < l ≤ g`.
pub fn three_chain_identities(g: usize) -> Result<Vec<Identity>, WordError> {
    let lines = [
        "(T(1,j) T(j,k) T(k,l))^4",
        "T(1,j)^2 T(j,k) T(1,j)^2 T(j,k) T(k,l) T(j,k) T(1,j)^2 T(j,k) T(k,l)",
        "T(1,j)^2 T(j,k)^2 T(j,k)^-1 T(1,j)^2 T(j,k) T(k,l)^2 T(k,l)^-1 T(j,k)^2 T(k,l) \
         T(k,l)^-1 T(j,k)^-1 T(1,j)^2 T(j,k) T(k,l)",
        "Y(j,1)^-1 Y(1,j) Y(k,j)^-1 Y(j,k) Y(j,1) Y(k,1)^-1 Y(1,k) Y(j,1)^-1 \
         Y(l,k)^-1 Y(k,l) Y(k,j) Y(l,j)^-1 Y(j,l) Y(k,j)^-1 Y(j,1) Y(k,l)^-1 Y(l,1)^-1 Y(1,l) Y(k,l) Y(j,1)^-1",
    ];
    let mut out = Vec::new();
    for j in 2..=g {
        for k in j + 1..=g {
            for l in k + 1..=g {
                let idx = [('j', j), ('k', k), ('l', l)];
                let eps = d_sign(g, j, k, l)?;
                // t_α t_{f(α)}^{-1} with f = Y_{j,1} Y_{k,l}^{-1}
                let head = d_word(g, j, k, l, -eps);
                let words = lines
                    .iter()
                    .map(|t| instantiate(t, "", "", &idx, g))
                    .collect::<Result<Vec<_>, _>>()?;
                out.push(ident(format!("chain({j},{k},{l}) line 0"), head.clone(), words[0].clone()));
                for s in 1..words.len() {
                    out.push(ident(format!("chain({j},{k},{l}) line {s}"), words[s - 1].clone(), words[s].clone()));
                }
                let square = McgWord::parse(&format!("T(1,{j},{k},{l})^2"), g)?;
                let d = McgWord::parse(&format!("D(1,{j},{k},{l})"), g)?;
                out.push(ident(format!("chain({j},{k},{l}) square"), square, head.mul(&d)?));
            }
        }
    }
    Ok(out)
}

/// Which row of the `[x_1, x_2]` lemma a pair `x_1 < x_2` falls under, with
/// the templates of every stated right-hand side.
fn commutator_row(i: usize, j: usize, k: usize, l: usize) -> (&'static str, Vec<&'static str>) {
    // (x1, x2) = (Y(i,j), Y(k,l)) with (i,j) < (k,l)
    if k == j && l == i {
        return ("(Y_ij,Y_ji)", vec!["Y(i,j)^2 (Y(i,j)^-1 Y(j,i))^2 Y(j,i)^-2", "B(i,j) A(i,j)^-1 B(i,j)^-1"]);
    }
    if k == i {
        // x2 = Y(i,l); rename l -> k in templates
        let first = "(Y(i,j) Y(i,k))^2 Y(i,k)^-2 Y(i,k) Y(i,j)^-2 Y(i,k)^-1";
        let k2 = l;
        return if i < j {
            ("(Y_ij,Y_ik) i<j<k", vec![first, "C(j,k;i) B(i,k)^-1 X2 B(i,j)^-1 X2^-1"])
        } else if i < k2 {
            ("(Y_ij,Y_ik) j<i<k", vec![first, "X1 C(j,k;i) X1^-1 B(i,k)^-1 X2 B(j,i)^-1 X2^-1"])
        } else {
            ("(Y_ij,Y_ik) j<k<i", vec![first, "C(j,k;i) B(k,i)^-1 X2 B(j,i)^-1 X2^-1"])
        };
    }
    if l == j {
        // x2 = Y(k,j), i < k
        return if j < i {
            ("(Y_ij,Y_kj) j<i<k", vec!["B(j,i)^-1 X1 B(i,k)^-1 X1^-1 B(j,i)"])
        } else if j < k {
            ("(Y_ij,Y_kj) i<j<k", vec!["X1 B(i,k)^-1 X1^-1"])
        } else {
            ("(Y_ij,Y_kj) i<k<j", vec!["B(i,j)^-1 X1 B(i,k)^-1 X1^-1 B(i,j)"])
        };
    }
    if k == j {
        // x2 = Y(j,l), i < j; rename l -> k
        let k2 = l;
        return if k2 < i {
            (
                "(Y_ij,Y_jk) k<i<j",
                vec!["Y(i,j) Y(i,k)^-2 Y(i,j)^-1 (Y(i,j) Y(i,k))^2", "X1 B(k,i)^-1 X1^-1 C(k,j;i)"],
            )
        } else if k2 < j {
            (
                "(Y_ij,Y_jk) i<k<j",
                vec![
                    "Y(i,j)^-2 Y(i,j) Y(i,k)^-2 Y(i,j)^-1 Y(i,j) (Y(i,k) Y(i,j))^2 Y(i,j)^-1 Y(i,j)^2",
                    "B(i,j)^-1 X1 B(i,k)^-1 X1^-1 X1 C(k,j;i) X1^-1 B(i,j)",
                ],
            )
        } else {
            (
                "(Y_ij,Y_jk) i<j<k",
                vec!["Y(i,j) Y(i,k)^-2 Y(i,j)^-1 (Y(i,j) Y(i,k))^2", "X1 B(i,k)^-1 X1^-1 C(j,k;i)"],
            )
        };
    }
    if l == i {
        // x2 = Y(k,i), i < k
        return if j < i {
            (
                "(Y_ij,Y_ki) j<i<k",
                vec![
                    "Y(k,i)^-2 Y(k,j)^-2 Y(k,j) Y(k,i)^-2 Y(k,j)^-1 (Y(k,j) Y(k,i))^2",
                    "B(i,k)^-1 B(j,k)^-1 Y(k,j) B(i,k)^-1 Y(k,j)^-1 C(j,i;k)",
                ],
            )
        } else if j < k {
            (
                "(Y_ij,Y_ki) i<j<k",
                vec!["(Y(k,i) Y(k,j))^-2 Y(k,i) Y(k,j)^2 Y(k,i)^-1", "C(i,j;k)^-1 X2 B(j,k) X2^-1"],
            )
        } else {
            (
                "(Y_ij,Y_ki) i<k<j",
                vec![
                    "Y(k,i)^-2 Y(k,i) (Y(k,j) Y(k,i))^-2 Y(k,i)^-1 Y(k,i) Y(k,j)^2 Y(k,i)^-1 Y(k,i)^2",
                    "B(i,k)^-1 X2 C(i,j;k)^-1 X2^-1 X2 B(k,j) X2^-1 B(i,k)",
                ],
            )
        };
    }
    // four distinct indices, i < k
    if i < k && k < j && j < l {
        (
            "(Y_ij,Y_kl) i<k<j<l",
            vec![
                "X1 B(i,l)^-1 X1^-1 X1 Y(i,l) B(i,k) Y(i,l)^-1 X1^-1 X1 B(i,l) X1^-1 \
                 X1 B(i,k) X1^-1 B(i,k)^-1 B(i,l)^-1 X1 B(i,k)^-1 X1^-1 B(i,l)",
            ],
        )
    } else if i < l && l < j && j < k {
        (
            "(Y_ij,Y_kl) i<l<j<k",
            vec![
                "X1 B(i,k)^-1 X1^-1 X1 B(i,l)^-1 X1^-1 [Y(i,l),Y(i,j)]^-1 Y(i,l) X1 B(i,k)^-1 X1^-1 Y(i,l)^-1 \
                 [Y(i,l),Y(i,j)] X1 B(i,l) X1^-1 B(i,l)^-1 Y(i,l) B(i,k) Y(i,l)^-1 B(i,l) B(i,k)",
            ],
        )
    } else if j < l && l < i && i < k {
        (
            "(Y_ij,Y_kl) j<l<i<k",
            vec![
                "X1 B(l,i)^-1 X1^-1 X1 Y(i,l) B(i,k) Y(i,l)^-1 X1^-1 X1 B(l,i) X1^-1 \
                 X1 B(i,k) X1^-1 B(i,k)^-1 B(l,i)^-1 X1 B(i,k)^-1 X1^-1 B(l,i)",
            ],
        )
    } else if l < i && i < k && k < j {
        (
            "(Y_ij,Y_kl) l<i<k<j",
            vec![
                "X1 B(l,i)^-1 X1^-1 [Y(i,l),Y(i,j)]^-1 Y(i,l) X1 B(i,k) X1^-1 Y(i,l)^-1 \
                 [Y(i,l),Y(i,j)] X1 B(l,i) X1^-1 X1 B(i,k) X1^-1 B(i,k)^-1 B(l,i)^-1 \
                 Y(i,l) B(i,k)^-1 Y(i,l)^-1 B(l,i)",
            ],
        )
    } else {
        ("(Y_ij,Y_kl) other", vec!["1"])
    }
}

/// Every case row of the `[x_1, x_2]` lemma over all `x_1 < x_2` in `𝒴`.
pub fn commutator_lemma_identities(g: usize) -> Result<Vec<Identity>, WordError> {
    let ys = y_set(g);
    let mut out = Vec::new();
    for (a, &(i, j)) in ys.iter().enumerate() {
        for &(k, l) in &ys[a + 1..] {
            let (row, templates) = commutator_row(i, j, k, l);
            let x1 = format!("Y({i},{j})");
            let x2 = format!("Y({k},{l})");
            let lhs = McgWord::parse(&format!("[{x1},{x2}]"), g)?;
            // rows with a shared index are stated with the shared slide
            // written Y(i,k); map their template letters accordingly
            let idx: Vec<(char, usize)> = if k == i || k == j {
                vec![('i', i), ('j', j), ('k', l)]
            } else if l == i || l == j {
                vec![('i', i), ('j', j), ('k', k)]
            } else {
                vec![('i', i), ('j', j), ('k', k), ('l', l)]
            };
            let idx = if k == j && l == i { vec![('i', i), ('j', j)] } else { idx };
            for (s, t) in templates.iter().enumerate() {
                let x1_t = "Y(i,j)";
                let rhs = instantiate(&t.replace("X1", x1_t), "", &x2_template(i, j, k, l), &idx, g)?;
                out.push(ident(format!("[{x1},{x2}] {row} #{s}"), lhs.clone(), rhs));
            }
        }
    }
    Ok(out)
}

/// `x_2` in template letters, matching the index map of
/// [`commutator_lemma_identities`].
fn x2_template(i: usize, j: usize, k: usize, l: usize) -> String {
    if k == j && l == i {
        "Y(j,i)".into()
    } else if k == i {
        "Y(i,k)".into()
    } else if l == j {
        "Y(k,j)".into()
    } else if k == j {
        "Y(j,k)".into()
    } else if l == i {
        "Y(k,i)".into()
    } else {
        "Y(k,l)".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{same_h1_action, word_matrix, SurfaceCtx};

    fn check(ids: &[Identity], g: usize) {
        let ctx = SurfaceCtx::new(g).unwrap();
        for id in ids {
            let a = word_matrix(&id.lhs, ctx).unwrap();
            let b = word_matrix(&id.rhs, ctx).unwrap();
            assert!(same_h1_action(&a, &b), "g={g}: {} | {} vs {}", id.label, id.lhs, id.rhs);
        }
    }

    #[test]
    fn twist_squares() {
        for g in 3..=6 {
            check(&twist_square_identities(g).unwrap(), g);
        }
    }

    #[test]
    fn duals() {
        for g in 4..=5 {
            check(&family_dual_identities(g).unwrap(), g);
        }
    }

    #[test]
    fn three_chain() {
        let ids = three_chain_identities(4).unwrap();
        assert_eq!(ids.len(), 5);
        check(&ids, 4);
        check(&three_chain_identities(5).unwrap(), 5);
    }

    #[test]
    fn commutator_rows() {
        let ids = commutator_lemma_identities(4).unwrap();
        // one lhs per pair of 𝒴 in order
        let pairs: std::collections::BTreeSet<_> = ids.iter().map(|i| i.lhs.to_string()).collect();
        assert_eq!(pairs.len(), 9 * 8 / 2);
        check(&ids, 4);
    }
}
