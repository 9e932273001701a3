//! Path-ordered exponentials as exact polynomials: the iterated-integral
//! solution of `∂_z g = y(z) g` with `g(0) = 1` inside a unital nilpotent
//! algebra, and the group-likeness check in a degree-truncated free tensor
//! model.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::Zero;

use crate::linalg::{GradedSpace, MultiMap, Parity, Scalar, Vector, Word};
use crate::report::CheckReport;

/// A unital associative algebra carried by a based space.
#[derive(Debug, Clone)]
pub struct Assoc {
    pub space: Arc<GradedSpace>,
    pub product: MultiMap,
    pub unit: Vector,
}

impl Assoc {
    pub fn mul(&self, x: &Vector, y: &Vector) -> Vector {
        self.product.apply(&[x, y])
    }
}

fn poly_is_zero(p: &[Vector]) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn poly_trim(mut p: Vec<Vector>) -> Vec<Vector> {
    while p.len() > 1 && p.last().map(|v| v.is_zero()) == Some(true) {
        p.pop();
    }
    p
}

fn poly_mul(alg: &Assoc, a: &[Vector], b: &[Vector]) -> Vec<Vector> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Vector::zero(&alg.space); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            let prod = alg.mul(ai, bj);
            if !prod.is_zero() {
                out[i + j] = out[i + j].add(&prod);
            }
        }
    }
    out
}

/// `∫_0^z p(t) dt` coefficientwise.
fn poly_integrate(alg: &Assoc, p: &[Vector]) -> Vec<Vector> {
    let mut out = vec![Vector::zero(&alg.space)];
    for (k, c) in p.iter().enumerate() {
        out.push(c.scale(&Scalar::from_integer(((k + 1) as i64).into()).recip()));
    }
    out
}

/// The path-ordered exponential
/// `g(z) = 1 + Σ_n ∫_{0 <= t_1 <= … <= t_n <= z} y(t_n) … y(t_1) Π dt`,
/// computed symbolically via the nested integrals
/// `I_1 = ∫ y`, `I_n = ∫ y · I_{n-1}`. The sum is finite in a nilpotent
/// algebra; `max_terms` caps the expansion as a safety bound.
pub fn path_ordered_exp(alg: &Assoc, y: &[Vector], max_terms: usize) -> Vec<Vector> {
    let mut g = vec![alg.unit.clone()];
    let mut layer = poly_integrate(alg, y);
    let mut n = 0;
    while !poly_is_zero(&layer) {
        // accumulate
        if g.len() < layer.len() {
            g.resize(layer.len(), Vector::zero(&alg.space));
        }
        for (k, c) in layer.iter().enumerate() {
            g[k] = g[k].add(c);
        }
        layer = poly_integrate(alg, &poly_mul(alg, y, &layer));
        n += 1;
        assert!(n <= max_terms, "path-ordered expansion did not terminate");
    }
    poly_trim(g)
}

/// Independent route: solve `∂_z g = y g`, `g(0) = 1` degree by degree.
pub fn solve_transport_ode(alg: &Assoc, y: &[Vector], max_degree: usize) -> Vec<Vector> {
    let mut g = vec![alg.unit.clone()];
    for k in 0..max_degree {
        // (k+1) g_{k+1} = Σ_{a+b=k} y_a g_b
        let mut acc = Vector::zero(&alg.space);
        for (a, ya) in y.iter().enumerate() {
            if a <= k && k - a < g.len() {
                acc = acc.add(&alg.mul(ya, &g[k - a]));
            }
        }
        let next = acc.scale(&Scalar::from_integer(((k + 1) as i64).into()).recip());
        if next.is_zero() && k + 1 >= y.len() + g.len() {
            break;
        }
        g.push(next);
    }
    while g.len() > 1 && g.last().map(|v| v.is_zero()) == Some(true) {
        g.pop();
    }
    g
}

/// Check `∂_z g = y g` and `g(0) = 1` coefficientwise.
pub fn verify_transport(alg: &Assoc, y: &[Vector], g: &[Vector]) -> CheckReport {
    let mut rep = CheckReport::new();
    rep.record(
        "g(0) = 1",
        g.first().map(|c| *c == alg.unit) == Some(true),
        None,
    );
    let rhs = poly_mul(alg, y, g);
    let deg = g.len().max(rhs.len() + 1);
    let mut ok = true;
    let mut detail = None;
    for k in 0..deg {
        let mut c = Vector::zero(&alg.space);
        if k + 1 < g.len() {
            c = c.add(&g[k + 1].scale(&Scalar::from_integer(((k + 1) as i64).into())));
        }
        if k < rhs.len() {
            c = c.sub(&rhs[k]);
        }
        if !c.is_zero() {
            ok = false;
            detail = Some(format!("z^{k} coefficient = {c}"));
            break;
        }
    }
    rep.record("∂_z g = y g", ok, detail);
    rep
}

/// The free associative algebra on two even generators, truncated above
/// total word length `max_len`. Words index the basis; the empty word is the
/// unit; products beyond the length bound are dropped, and all checks are
/// read degreewise below the bound.
#[derive(Debug, Clone)]
pub struct FreeModel {
    pub alg: Assoc,
    pub max_len: usize,
    words: Vec<Vec<u8>>,
}

pub fn free_tensor_model(max_len: usize) -> FreeModel {
    let mut words: Vec<Vec<u8>> = vec![vec![]];
    let mut layer: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for gen in 0..2u8 {
                let mut v = w.clone();
                v.push(gen);
                next.push(v);
            }
        }
        words.extend(next.iter().cloned());
        layer = next;
    }
    let name = |w: &[u8]| {
        if w.is_empty() {
            "e".to_string()
        } else {
            w.iter().map(|&g| if g == 0 { 'a' } else { 'b' }).collect()
        }
    };
    let space = GradedSpace::new(
        words
            .iter()
            .map(|w| (name(w), Parity::Even))
            .collect(),
    )
    .unwrap();
    let index: BTreeMap<Vec<u8>, usize> = words
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, w)| (w, i))
        .collect();
    let mut product = MultiMap::zero(&space, &space, 2, 1, Parity::Even);
    for (i, wi) in words.iter().enumerate() {
        for (j, wj) in words.iter().enumerate() {
            if wi.len() + wj.len() <= max_len {
                let mut cat = wi.clone();
                cat.extend_from_slice(wj);
                let k = index[&cat];
                product
                    .add_to(
                        Word::from_slice(&[k as u16]),
                        Word::from_slice(&[i as u16, j as u16]),
                        crate::linalg::scalar(1, 1),
                    )
                    .unwrap();
            }
        }
    }
    let unit = Vector::basis(&space, 0);
    FreeModel {
        alg: Assoc {
            space,
            product,
            unit,
        },
        max_len,
        words,
    }
}

impl FreeModel {
    pub fn generator(&self, g: u8) -> Vector {
        let idx = self
            .words
            .iter()
            .position(|w| w.as_slice() == [g])
            .unwrap();
        Vector::basis(&self.alg.space, idx)
    }

    /// Coproduct of a basis word: sum of ordered (subword, complement)
    /// splittings, the generators being primitive.
    fn coproduct_word(&self, idx: usize) -> Vec<(usize, usize, Scalar)> {
        let w = &self.words[idx];
        let n = w.len();
        let index = |v: &[u8]| self.words.iter().position(|u| u == v).unwrap();
        let mut out = Vec::new();
        for mask in 0..(1u32 << n) {
            let mut left = Vec::new();
            let mut right = Vec::new();
            for (p, &g) in w.iter().enumerate() {
                if mask & (1 << p) != 0 {
                    left.push(g);
                } else {
                    right.push(g);
                }
            }
            out.push((index(&left), index(&right), Scalar::from_integer(1.into())));
        }
        out
    }

    /// Coproduct of an element as a two-sided tensor.
    pub fn coproduct(&self, v: &Vector) -> BTreeMap<(u16, u16), Scalar> {
        let mut out: BTreeMap<(u16, u16), Scalar> = BTreeMap::new();
        for (i, c) in v.coords() {
            for (l, r, k) in self.coproduct_word(*i as usize) {
                let e = out.entry((l as u16, r as u16)).or_insert_with(Scalar::zero);
                *e += c * &k;
                if e.is_zero() {
                    out.remove(&(l as u16, r as u16));
                }
            }
        }
        out
    }
}

/// Verify `Δg = g ⊗ g` coefficientwise through the truncation order of the
/// model (both in `z` and in word length).
pub fn grouplike_check(model: &FreeModel, g: &[Vector]) -> CheckReport {
    let mut rep = CheckReport::new();
    let mut ok = true;
    let mut detail = None;
    let len = |i: u16| model.words[i as usize].len();
    for k in 0..g.len() {
        // Δ(g_k)
        let lhs = model.coproduct(&g[k]);
        // (g ⊗ g)_k = Σ_{a+b=k} g_a ⊗ g_b
        let mut rhs: BTreeMap<(u16, u16), Scalar> = BTreeMap::new();
        for a in 0..=k {
            let b = k - a;
            if a >= g.len() || b >= g.len() {
                continue;
            }
            for (i, ci) in g[a].coords() {
                for (j, cj) in g[b].coords() {
                    let e = rhs.entry((*i, *j)).or_insert_with(Scalar::zero);
                    *e += ci * cj;
                    if e.is_zero() {
                        rhs.remove(&(*i, *j));
                    }
                }
            }
        }
        // compare below the total word-length bound (beyond it the truncated
        // product loses terms, so those components are not meaningful)
        let keys: std::collections::BTreeSet<(u16, u16)> =
            lhs.keys().chain(rhs.keys()).cloned().collect();
        for key in keys {
            if len(key.0) + len(key.1) > model.max_len {
                continue;
            }
            let l = lhs.get(&key).cloned().unwrap_or_else(Scalar::zero);
            let r = rhs.get(&key).cloned().unwrap_or_else(Scalar::zero);
            if l != r {
                ok = false;
                detail = Some(format!("z^{k}, component {key:?}: {l} vs {r}"));
                break;
            }
        }
        if !ok {
            break;
        }
    }
    rep.record("Δg = g ⊗ g through truncation", ok, detail);
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::scalar;

    /// Strictly upper triangular 3 x 3 (all even) with an adjoined unit.
    fn upper3_unital() -> Assoc {
        let space =
            GradedSpace::from_pairs(&[("one", 0), ("e12", 0), ("e13", 0), ("e23", 0)]);
        let mut product = MultiMap::zero(&space, &space, 2, 1, Parity::Even);
        let mut put = |o: usize, a: usize, b: usize| {
            product
                .add_to(
                    Word::from_slice(&[o as u16]),
                    Word::from_slice(&[a as u16, b as u16]),
                    scalar(1, 1),
                )
                .unwrap();
        };
        for i in 0..4 {
            put(i, 0, i);
            if i != 0 {
                put(i, i, 0);
            }
        }
        put(2, 1, 3); // e12 e23 = e13
        let unit = Vector::basis(&space, 0);
        Assoc {
            space,
            product,
            unit,
        }
    }

    #[test]
    fn constant_path_gives_exponential() {
        let alg = upper3_unital();
        let a = Vector::from_coords(
            &alg.space,
            &[(1, scalar(2, 1)), (3, scalar(1, 1))],
        );
        let g = path_ordered_exp(&alg, &[a.clone()], 10);
        assert!(verify_transport(&alg, &[a.clone()], &g).pass());
        // exp(z a) = 1 + z a + z^2 a^2 / 2 (a^3 = 0)
        let a2 = alg.mul(&a, &a);
        assert_eq!(g.len(), 3);
        assert_eq!(g[0], alg.unit);
        assert_eq!(g[1], a);
        assert_eq!(g[2], a2.scale(&scalar(1, 2)));
    }

    #[test]
    fn commuting_values_give_exponential_of_integral() {
        let alg = upper3_unital();
        // y(z) = (1 + z) a has commuting values
        let a = Vector::basis(&alg.space, 1);
        let y = vec![a.clone(), a.clone()];
        let g = path_ordered_exp(&alg, &y, 10);
        assert!(verify_transport(&alg, &y, &g).pass());
        // exp(∫ y) with ∫y = (z + z^2/2) a and a^2 = 0
        assert_eq!(g[1], a);
        assert_eq!(g[2], a.scale(&scalar(1, 2)));
    }

    #[test]
    fn noncommuting_path_satisfies_ode_but_is_not_naive_exponential() {
        let alg = upper3_unital();
        let a = Vector::basis(&alg.space, 1); // e12
        let b = Vector::basis(&alg.space, 3); // e23
        let y = vec![a.clone(), b.clone()]; // y(z) = a + z b
        let g = path_ordered_exp(&alg, &y, 12);
        let rep = verify_transport(&alg, &y, &g);
        assert!(rep.pass(), "{rep}");
        // uniqueness: the degree-by-degree solution is identical
        let g2 = solve_transport_ode(&alg, &y, 12);
        assert_eq!(g, g2);
        // noncommutativity witness: compare with exp(∫ y)
        let int_y = vec![
            Vector::zero(&alg.space),
            a.clone(),
            b.scale(&scalar(1, 2)),
        ];
        // exp(u) = 1 + u + u^2/2 for u in the strictly upper part
        let u2 = poly_mul(&alg, &int_y, &int_y);
        let mut naive = vec![alg.unit.clone()];
        for (k, c) in int_y.iter().enumerate() {
            if naive.len() <= k {
                naive.resize(k + 1, Vector::zero(&alg.space));
            }
            naive[k] = naive[k].add(c);
        }
        for (k, c) in u2.iter().enumerate() {
            if naive.len() <= k {
                naive.resize(k + 1, Vector::zero(&alg.space));
            }
            naive[k] = naive[k].add(&c.scale(&scalar(1, 2)));
        }
        while naive.last().map(|v| v.is_zero()) == Some(true) {
            naive.pop();
        }
        assert_ne!(g, naive);
    }

    #[test]
    fn grouplike_for_single_generator() {
        let model = free_tensor_model(4);
        let a = model.generator(0);
        let g = path_ordered_exp(&model.alg, &[a], 8);
        assert!(verify_transport(&model.alg, &[model.generator(0)], &g).pass());
        assert!(grouplike_check(&model, &g).pass());
        // the unit itself is group-like
        assert!(grouplike_check(&model, &[model.alg.unit.clone()]).pass());
    }

    #[test]
    fn grouplike_for_noncommuting_two_generator_path() {
        let model = free_tensor_model(4);
        let y = vec![model.generator(0), model.generator(1)];
        let g = path_ordered_exp(&model.alg, &y, 10);
        let rep = verify_transport(&model.alg, &y, &g);
        assert!(rep.pass(), "{rep}");
        let rep = grouplike_check(&model, &g);
        assert!(rep.pass(), "{rep}");
    }

    #[test]
    fn non_grouplike_detected() {
        let model = free_tensor_model(4);
        // 1 + ab is not group-like
        let ab = model.alg.mul(&model.generator(0), &model.generator(1));
        let g = vec![model.alg.unit.add(&ab)];
        assert!(!grouplike_check(&model, &g).pass());
    }
}
