//! Hodge decompositions of differential graded spaces.
//!
//! A Hodge decomposition of `(V, d)` is a pair of operators: an odd `s` and an
//! even `t` with `s² = 0`, `t² = t`, `dt = td`, `st = ts = 0`, and
//! `ds + sd = id - t`. It is canonical when `dt = 0` (then `im t` is a copy of
//! the homology) and trivial when `t = id`. The constructions here are fully
//! deterministic: all complement choices are pivot-determined by row reduction
//! in the fixed basis order.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::Zero;
use thiserror::Error;

use crate::linalg::{solve, GradedMap, GradedSpace, LinError, Parity, Scalar, Vector};
use crate::report::CheckReport;

#[derive(Debug, Error)]
pub enum HodgeError {
    #[error("differential does not square to zero")]
    NotADifferential,
    #[error("differential must be odd")]
    WrongParity,
    #[error(transparent)]
    Lin(#[from] LinError),
    #[error("inner product is not graded-symmetric at ({0}, {1})")]
    NotSymmetric(String, String),
    #[error("inner product entry ({0}, {1}) violates the declared parity")]
    IpParity(String, String),
    #[error("inner product is degenerate")]
    Degenerate,
    #[error("differential incompatible with inner product at basis pair ({0}, {1})")]
    Incompatible(String, String),
}

/// A dg space: a based graded space with an odd square-zero operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DgSpace {
    space: Arc<GradedSpace>,
    d: GradedMap,
}

impl DgSpace {
    pub fn new(space: Arc<GradedSpace>, d: GradedMap) -> Result<DgSpace, HodgeError> {
        if d.parity() != Parity::Odd {
            return Err(HodgeError::WrongParity);
        }
        if d.source() != &space || d.target() != &space {
            return Err(HodgeError::Lin(LinError::DimensionMismatch(
                "differential must be an endomorphism".into(),
            )));
        }
        if !d.compose(&d)?.is_zero() {
            return Err(HodgeError::NotADifferential);
        }
        Ok(DgSpace { space, d })
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn d(&self) -> &GradedMap {
        &self.d
    }

    /// Dimension of the homology, computed by rank counts.
    pub fn homology_dim(&self) -> usize {
        let r = self.d.rref();
        self.space.dim() - 2 * r.rank()
    }
}

/// A Hodge decomposition of a dg space.
#[derive(Debug, Clone)]
pub struct HodgeData {
    pub base: DgSpace,
    pub s: GradedMap,
    pub t: GradedMap,
    pub canonical: bool,
}

/// A graded-symmetric nondegenerate bilinear form of fixed parity:
/// `⟨a, b⟩ = (-1)^{|a||b|} ⟨b, a⟩`, with `⟨a, b⟩ ≠ 0` only when
/// `|a| + |b|` equals the declared parity.
#[derive(Debug, Clone)]
pub struct InnerProduct {
    space: Arc<GradedSpace>,
    parity: Parity,
    entries: BTreeMap<(u16, u16), Scalar>,
}

impl InnerProduct {
    pub fn new(
        space: &Arc<GradedSpace>,
        parity: Parity,
        entries: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<InnerProduct, HodgeError> {
        let mut map = BTreeMap::new();
        for (a, b, c) in entries {
            if c.is_zero() {
                continue;
            }
            if space.parity(a) + space.parity(b) != parity {
                return Err(HodgeError::IpParity(
                    space.name(a).to_string(),
                    space.name(b).to_string(),
                ));
            }
            map.insert((a as u16, b as u16), c);
        }
        let ip = InnerProduct {
            space: Arc::clone(space),
            parity,
            entries: map,
        };
        // graded symmetry
        for a in 0..space.dim() {
            for b in 0..space.dim() {
                let lhs = ip.pair_basis(a, b);
                let sign = space.parity(a).koszul(space.parity(b));
                let rhs = ip.pair_basis(b, a) * Scalar::from_integer(sign.into());
                if lhs != rhs {
                    return Err(HodgeError::NotSymmetric(
                        space.name(a).to_string(),
                        space.name(b).to_string(),
                    ));
                }
            }
        }
        // nondegeneracy: full rank of the Gram matrix
        let gram = ip.gram_map()?;
        if gram.rank() != space.dim() {
            return Err(HodgeError::Degenerate);
        }
        Ok(ip)
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn entries(&self) -> &BTreeMap<(u16, u16), Scalar> {
        &self.entries
    }

    pub fn pair_basis(&self, a: usize, b: usize) -> Scalar {
        self.entries
            .get(&(a as u16, b as u16))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn pair(&self, x: &Vector, y: &Vector) -> Scalar {
        let mut acc = Scalar::zero();
        for (a, ca) in x.coords() {
            for (b, cb) in y.coords() {
                let g = self.pair_basis(*a as usize, *b as usize);
                if !g.is_zero() {
                    acc += ca * cb * g;
                }
            }
        }
        acc
    }

    /// The Gram matrix as a graded map `V → V` of the form's parity
    /// (rows pair against columns).
    fn gram_map(&self) -> Result<GradedMap, LinError> {
        GradedMap::from_entries(
            &self.space,
            &self.space,
            self.parity,
            self.entries
                .iter()
                .map(|((a, b), c)| (*b as usize, *a as usize, c.clone())),
        )
    }
}

/// Build a graded map out of explicit homogeneous columns. The abstract source
/// space carries the parities of the columns.
fn columns_map(cols: &[Vector], target: &Arc<GradedSpace>, prefix: &str) -> GradedMap {
    let basis: Vec<(String, Parity)> = cols
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let p = v.parity().unwrap_or(Parity::Even);
            (format!("{prefix}{i}"), p)
        })
        .collect();
    let src = GradedSpace::new(basis).expect("generated names are unique");
    let mut m = GradedMap::zero(&src, target, Parity::Even);
    for (j, col) in cols.iter().enumerate() {
        for (i, c) in col.coords() {
            m.set(*i as usize, j, c.clone()).expect("homogeneous column");
        }
    }
    m
}

/// Echelon basis of the span of the given vectors: row-reduce with rows in the
/// given order; the result has strictly increasing leading indices.
pub fn echelon_basis(vectors: &[Vector], space: &Arc<GradedSpace>) -> Vec<Vector> {
    let n = space.dim();
    let mut rows: Vec<Vec<Scalar>> = vectors
        .iter()
        .map(|v| (0..n).map(|i| v.coeff(i)).collect())
        .collect();
    let nr = rows.len();
    let mut prow = 0usize;
    for pc in 0..n {
        let Some(pr) = (prow..nr).find(|&r| !rows[r][pc].is_zero()) else {
            continue;
        };
        rows.swap(prow, pr);
        let inv = rows[prow][pc].recip();
        for c in 0..n {
            let v = &rows[prow][c] * &inv;
            rows[prow][c] = v;
        }
        for r in 0..nr {
            if r != prow && !rows[r][pc].is_zero() {
                let f = rows[r][pc].clone();
                for c in 0..n {
                    let v = &rows[r][c] - &f * &rows[prow][c];
                    rows[r][c] = v;
                }
            }
        }
        prow += 1;
        if prow == nr {
            break;
        }
    }
    rows.truncate(prow);
    rows.iter()
        .map(|row| {
            Vector::from_coords(
                space,
                &row.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (i, c.clone()))
                    .collect::<Vec<_>>(),
            )
        })
        .collect()
}

/// The canonical Hodge decomposition: `V = W ⊕ (U ⊕ U')` with `U = im d`,
/// `W` a pivot-determined complement of `U` in `ker d`, `U'` the span of the
/// pivot coordinates, `t` the projection onto `W`, and `s` inverting `d` from
/// `U` back to `U'`.
pub fn canonical_hodge(v: &DgSpace) -> HodgeData {
    let space = v.space();
    if space.dim() == 0 {
        return HodgeData {
            base: v.clone(),
            s: GradedMap::zero(space, space, Parity::Odd),
            t: GradedMap::zero(space, space, Parity::Even),
            canonical: true,
        };
    }
    let rr = v.d().rref();
    let u_basis: Vec<Vector> = rr.image.clone();
    let uprime_basis: Vec<Vector> = rr.pivots.iter().map(|&p| Vector::basis(space, p)).collect();
    let w_basis = pivot_complement(&u_basis, &rr.kernel, space);
    assemble(v, &u_basis, &w_basis, &uprime_basis)
}

/// Pivot-determined complement of `span(fixed)` inside `span(fixed ∪ pool)`,
/// returned as the subset of `pool` selected by row reduction.
fn pivot_complement(fixed: &[Vector], pool: &[Vector], space: &Arc<GradedSpace>) -> Vec<Vector> {
    let mut cols = fixed.to_vec();
    cols.extend(pool.iter().cloned());
    let m = columns_map(&cols, space, "c");
    let rr = m.rref();
    rr.pivots
        .iter()
        .filter(|&&p| p >= fixed.len())
        .map(|&p| pool[p - fixed.len()].clone())
        .collect()
}

/// Build `(s, t)` from the three homogeneous direct summands.
/// `s` sends `d(u'_j)` to `u'_j`, so the `U`-basis must be the image of the
/// `U'`-basis under `d` in matching order.
fn assemble(v: &DgSpace, u: &[Vector], w: &[Vector], uprime: &[Vector]) -> HodgeData {
    let space = v.space();
    let mut cols = Vec::new();
    cols.extend(u.iter().cloned());
    cols.extend(w.iter().cloned());
    cols.extend(uprime.iter().cloned());
    let c = columns_map(&cols, space, "b");
    let cinv = c.inverse().expect("U + W + U' spans V");
    let abstract_space = c.source();

    let nu = u.len();
    let nw = w.len();
    let mut diag_t = GradedMap::zero(abstract_space, abstract_space, Parity::Even);
    for j in nu..nu + nw {
        diag_t.set(j, j, Scalar::from_integer(1.into())).unwrap();
    }
    let t = c
        .compose(&diag_t)
        .and_then(|m| m.compose(&cinv))
        .expect("projection assembly");

    let mut shift = GradedMap::zero(abstract_space, abstract_space, Parity::Odd);
    for j in 0..nu {
        // U coordinate j maps to the matching U' coordinate
        shift
            .set(nu + nw + j, j, Scalar::from_integer(1.into()))
            .expect("d flips parity between U' and U");
    }
    let s = c
        .compose(&shift)
        .and_then(|m| m.compose(&cinv))
        .expect("homotopy assembly");

    HodgeData {
        base: v.clone(),
        s,
        t,
        canonical: true,
    }
}

/// The trivial decomposition `t = id`, `s = 0`.
pub fn trivial_hodge(v: &DgSpace) -> HodgeData {
    HodgeData {
        base: v.clone(),
        s: GradedMap::zero(v.space(), v.space(), Parity::Odd),
        t: GradedMap::identity(v.space()),
        canonical: v.d().is_zero(),
    }
}

/// Check all Hodge identities exactly, reporting each one.
pub fn verify_hodge(h: &HodgeData) -> CheckReport {
    let mut rep = CheckReport::new();
    let d = h.base.d();
    let id = GradedMap::identity(h.base.space());
    let check = |rep: &mut CheckReport, name: &str, m: Result<GradedMap, LinError>| {
        match m {
            Ok(m) => {
                let detail = m
                    .entries()
                    .iter()
                    .next()
                    .map(|((o, i), c)| format!("residual ({o}, {i}) = {c}"));
                rep.record(name, m.is_zero(), detail);
            }
            Err(e) => rep.record(name, false, Some(e.to_string())),
        }
    };
    check(&mut rep, "s.s = 0", h.s.compose(&h.s));
    check(
        &mut rep,
        "t.t = t",
        h.t.compose(&h.t).and_then(|m| m.sub(&h.t)),
    );
    check(
        &mut rep,
        "d.t = t.d",
        d.compose(&h.t).and_then(|m| m.sub(&h.t.compose(d)?)),
    );
    check(&mut rep, "s.t = 0", h.s.compose(&h.t));
    check(&mut rep, "t.s = 0", h.t.compose(&h.s));
    check(
        &mut rep,
        "d.s + s.d = id - t",
        (|| {
            let lhs = d.compose(&h.s)?.add(&h.s.compose(d)?)?;
            let rhs = id.sub(&h.t)?;
            lhs.sub(&rhs)
        })(),
    );
    if h.canonical {
        check(&mut rep, "d.t = 0 (canonical)", d.compose(&h.t));
    }
    rep
}

/// Check the two inner-product compatibilities of a Hodge decomposition:
/// `⟨s a, b⟩ = (-1)^{|a|} ⟨a, s b⟩` and `⟨t a, b⟩ = ⟨a, t b⟩`.
pub fn verify_cyclic(h: &HodgeData, ip: &InnerProduct) -> CheckReport {
    let mut rep = CheckReport::new();
    let space = h.base.space();
    let mut s_ok = true;
    let mut t_ok = true;
    let mut s_bad = None;
    let mut t_bad = None;
    for a in 0..space.dim() {
        let ea = Vector::basis(space, a);
        let sa = h.s.apply(&ea);
        let ta = h.t.apply(&ea);
        let sign = if space.parity(a).is_odd() { -1 } else { 1 };
        for b in 0..space.dim() {
            let eb = Vector::basis(space, b);
            let lhs_s = ip.pair(&sa, &eb);
            let rhs_s = ip.pair(&ea, &h.s.apply(&eb)) * Scalar::from_integer(sign.into());
            if lhs_s != rhs_s && s_ok {
                s_ok = false;
                s_bad = Some(format!("({}, {})", space.name(a), space.name(b)));
            }
            let lhs_t = ip.pair(&ta, &eb);
            let rhs_t = ip.pair(&ea, &h.t.apply(&eb));
            if lhs_t != rhs_t && t_ok {
                t_ok = false;
                t_bad = Some(format!("({}, {})", space.name(a), space.name(b)));
            }
        }
    }
    rep.record("<s a, b> = (-1)^|a| <a, s b>", s_ok, s_bad);
    rep.record("<t a, b> = <a, t b>", t_ok, t_bad);
    rep
}

/// Check that `d` acts as a graded derivation of the pairing:
/// `⟨d a, b⟩ + (-1)^{|a|} ⟨a, d b⟩ = 0`.
pub fn verify_frobenius_d(v: &DgSpace, ip: &InnerProduct) -> Result<(), HodgeError> {
    let space = v.space();
    for a in 0..space.dim() {
        let ea = Vector::basis(space, a);
        let da = v.d().apply(&ea);
        let sign = if space.parity(a).is_odd() { -1 } else { 1 };
        for b in 0..space.dim() {
            let eb = Vector::basis(space, b);
            let lhs = ip.pair(&da, &eb)
                + ip.pair(&ea, &v.d().apply(&eb)) * Scalar::from_integer(sign.into());
            if !lhs.is_zero() {
                return Err(HodgeError::Incompatible(
                    space.name(a).to_string(),
                    space.name(b).to_string(),
                ));
            }
        }
    }
    Ok(())
}

/// A canonical Hodge decomposition compatible with a nondegenerate pairing.
/// `W` is the pivot complement; `U'` is corrected to an isotropic complement
/// of `ker d` orthogonal to `W`, built greedily by subtracting projections
/// onto already-fixed vectors.
pub fn cyclic_hodge(v: &DgSpace, ip: &InnerProduct) -> Result<HodgeData, HodgeError> {
    if ip.space() != v.space() {
        return Err(HodgeError::Lin(LinError::DimensionMismatch(
            "inner product lives on a different space".into(),
        )));
    }
    verify_frobenius_d(v, ip)?;
    let space = v.space();
    if space.dim() == 0 {
        return Ok(canonical_hodge(v));
    }
    let rr = v.d().rref();
    let u_basis: Vec<Vector> = rr.image.clone();
    let w_basis = pivot_complement(&u_basis, &rr.kernel, space);
    let mut uprime: Vec<Vector> = rr.pivots.iter().map(|&p| Vector::basis(space, p)).collect();

    // Step 1: make U' orthogonal to W, correcting within W (same parity).
    for vj in uprime.iter_mut() {
        let pj = vj.parity().expect("pivot vector is homogeneous");
        let w_same: Vec<&Vector> = w_basis
            .iter()
            .filter(|w| w.parity() == Some(pj))
            .collect();
        if w_same.is_empty() {
            continue;
        }
        // rows: all W vectors; unknowns: coefficients over same-parity W
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for wl in &w_basis {
            rows.push(
                w_same
                    .iter()
                    .map(|wk| ip.pair(wk, wl))
                    .collect::<Vec<_>>(),
            );
            rhs.push(ip.pair(vj, wl));
        }
        let coeffs = solve_dense(&rows, &rhs).ok_or(HodgeError::Degenerate)?;
        for (wk, c) in w_same.iter().zip(coeffs) {
            if !c.is_zero() {
                *vj = vj.sub(&wk.scale(&c));
            }
        }
    }

    // Step 2: greedy isotropy, correcting within U (same parity).
    for j in 0..uprime.len() {
        let pj = uprime[j].parity().expect("homogeneous");
        let u_same: Vec<Vector> = u_basis
            .iter()
            .filter(|u| u.parity() == Some(pj))
            .cloned()
            .collect();
        if u_same.is_empty() {
            continue;
        }
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..=j {
            if i < j {
                rows.push(
                    u_same
                        .iter()
                        .map(|uk| ip.pair(&uprime[i], uk))
                        .collect::<Vec<_>>(),
                );
                rhs.push(ip.pair(&uprime[i], &uprime[j]));
            } else {
                // self-pairing: only constrains when it can be nonzero
                let self_pair = ip.pair(&uprime[j], &uprime[j]);
                if !self_pair.is_zero() {
                    rows.push(
                        u_same
                            .iter()
                            .map(|uk| {
                                ip.pair(&uprime[j], uk) * Scalar::from_integer(2.into())
                            })
                            .collect::<Vec<_>>(),
                    );
                    rhs.push(self_pair);
                }
            }
        }
        if rows.is_empty() {
            continue;
        }
        let coeffs = solve_dense(&rows, &rhs).ok_or(HodgeError::Degenerate)?;
        for (uk, c) in u_same.iter().zip(coeffs) {
            if !c.is_zero() {
                let corrected = uprime[j].sub(&uk.scale(&c));
                uprime[j] = corrected;
            }
        }
    }

    // d(corrected u'_j) still equals the original image column: corrections
    // live in ker d.
    let h = assemble(v, &u_basis, &w_basis, &uprime);
    debug_assert!(verify_hodge(&h).pass());
    debug_assert!(verify_cyclic(&h, ip).pass());
    Ok(h)
}

/// Dense exact solve for small systems given by rows; deterministic particular
/// solution with free unknowns set to zero.
fn solve_dense(rows: &[Vec<Scalar>], rhs: &[Scalar]) -> Option<Vec<Scalar>> {
    let nc = rows.first().map(|r| r.len()).unwrap_or(0);
    // express via linalg::solve by transposing into column vectors on an
    // ad-hoc even space
    let names: Vec<(String, Parity)> = (0..rows.len())
        .map(|i| (format!("r{i}"), Parity::Even))
        .collect();
    let space = GradedSpace::new(names).expect("unique");
    let columns: Vec<Vector> = (0..nc)
        .map(|c| {
            Vector::from_coords(
                &space,
                &rows
                    .iter()
                    .enumerate()
                    .map(|(r, row)| (r, row[c].clone()))
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let b = Vector::from_coords(
        &space,
        &rhs.iter().cloned().enumerate().collect::<Vec<_>>(),
    );
    solve(&columns, &b)
}

/// The splitting `(W, incl, proj)` of `im t`: `W` carries an echelon basis of
/// the image of `t`, `incl ∘ proj = t`, and `proj ∘ incl = id_W`. Basis
/// vectors are named after their leading coordinate.
pub fn splitting(h: &HodgeData) -> (Arc<GradedSpace>, GradedMap, GradedMap) {
    let space = h.base.space();
    let rr = h.t.rref();
    let w_vectors = echelon_basis(&rr.image, space);
    let basis: Vec<(String, Parity)> = w_vectors
        .iter()
        .map(|v| {
            let lead = *v.coords().keys().next().expect("nonzero") as usize;
            (
                space.name(lead).to_string(),
                v.parity().expect("homogeneous"),
            )
        })
        .collect();
    let w_space = GradedSpace::new(basis).expect("echelon leading names are distinct");
    let mut incl = GradedMap::zero(&w_space, space, Parity::Even);
    for (j, v) in w_vectors.iter().enumerate() {
        for (i, c) in v.coords() {
            incl.set(*i as usize, j, c.clone()).expect("homogeneous");
        }
    }
    let mut proj = GradedMap::zero(space, &w_space, Parity::Even);
    for i in 0..space.dim() {
        let ti = h.t.column(i);
        let coords = solve(&w_vectors, &ti).expect("t lands in im t");
        for (j, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                proj.set(j, i, c.clone()).expect("homogeneous");
            }
        }
    }
    debug_assert_eq!(incl.compose(&proj).unwrap(), h.t);
    (w_space, incl, proj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::scalar;

    fn two_dim() -> DgSpace {
        // span{x (odd), y (even)}, d(x) = y
        let v = GradedSpace::from_pairs(&[("x", 1), ("y", 0)]);
        let d = GradedMap::from_named(&v, &v, Parity::Odd, &[("y", "x", scalar(1, 1))]).unwrap();
        DgSpace::new(v, d).unwrap()
    }

    #[test]
    fn canonical_on_contractible_pair() {
        let v = two_dim();
        let h = canonical_hodge(&v);
        assert!(verify_hodge(&h).pass());
        assert!(h.t.is_zero());
        // s(y) = x, s(x) = 0
        assert_eq!(h.s.entry(0, 1), scalar(1, 1));
        assert_eq!(h.s.entry(1, 0), scalar(0, 1));
    }

    #[test]
    fn zero_differential_gives_trivial_decomposition() {
        let v = GradedSpace::from_pairs(&[("a", 0), ("b", 1)]);
        let dg = DgSpace::new(v.clone(), GradedMap::zero(&v, &v, Parity::Odd)).unwrap();
        let h = canonical_hodge(&dg);
        assert!(verify_hodge(&h).pass());
        assert_eq!(h.t, GradedMap::identity(&v));
        assert!(h.s.is_zero());
    }

    #[test]
    fn trivial_decomposition_passes() {
        let v = two_dim();
        let h = trivial_hodge(&v);
        let rep = verify_hodge(&h);
        assert!(rep.pass(), "{rep}");
    }

    #[test]
    fn tampered_s_fails_some_identity() {
        let v = two_dim();
        let mut h = canonical_hodge(&v);
        h.s.set(0, 1, scalar(2, 1)).unwrap();
        assert!(!verify_hodge(&h).pass());
    }

    #[test]
    fn rank_of_t_counts_homology() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let dg = crate::corpus::random_dg_space(&mut rng, 6);
            let h = canonical_hodge(&dg);
            assert!(verify_hodge(&h).pass());
            let rr = dg.d().rref();
            let homology = dg.space().dim() - rr.rank() - rr.rank();
            assert_eq!(h.t.rank(), homology);
            // im(t) + im(id - t) spans V and s contracts the second summand
            let id = GradedMap::identity(dg.space());
            let complement = id.sub(&h.t).unwrap();
            assert_eq!(h.t.rank() + complement.rank(), dg.space().dim());
        }
    }

    #[test]
    fn cyclic_on_contractible_pair_matches_forced_answer() {
        let v = two_dim();
        let ip = InnerProduct::new(
            v.space(),
            Parity::Odd,
            vec![(0, 1, scalar(1, 1)), (1, 0, scalar(1, 1))],
        )
        .unwrap();
        let h = cyclic_hodge(&v, &ip).unwrap();
        assert!(verify_hodge(&h).pass());
        assert!(verify_cyclic(&h, &ip).pass());
        assert!(h.t.is_zero());
        assert_eq!(h.s.entry(0, 1), scalar(1, 1));
    }

    #[test]
    fn cyclic_with_zero_differential_is_trivial() {
        let v = GradedSpace::from_pairs(&[("a", 0), ("b", 0)]);
        let dg = DgSpace::new(v.clone(), GradedMap::zero(&v, &v, Parity::Odd)).unwrap();
        let ip = InnerProduct::new(
            &v,
            Parity::Even,
            vec![(0, 0, scalar(1, 1)), (1, 1, scalar(1, 1))],
        )
        .unwrap();
        let h = cyclic_hodge(&dg, &ip).unwrap();
        assert_eq!(h.t, GradedMap::identity(&v));
        assert!(h.s.is_zero());
        assert!(verify_cyclic(&h, &ip).pass());
    }

    #[test]
    fn incompatible_pairing_is_rejected() {
        let v = two_dim();
        // flip the sign convention on one side: <dx, x> = <y, x> = 1 but the
        // compatible pairing needs <x, dx> matched; build a broken one
        let ip = InnerProduct::new(
            v.space(),
            Parity::Odd,
            vec![(0, 1, scalar(1, 1)), (1, 0, scalar(1, 1))],
        )
        .unwrap();
        // scale d to break compatibility: d(x) = 2y with the same pairing is
        // still compatible, so instead pair x with itself via parity-even form
        let bad = InnerProduct::new(
            v.space(),
            Parity::Even,
            vec![
                (0, 0, scalar(1, 1)),
                (1, 1, scalar(1, 1)),
            ],
        );
        // (0,0) pairs odd x with itself: graded symmetry makes <x,x> = -<x,x>
        assert!(bad.is_err());
        // and the odd pairing is fine
        assert!(cyclic_hodge(&v, &ip).is_ok());
    }

    #[test]
    fn splitting_reconstructs_t() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let dg = crate::corpus::random_dg_space(&mut rng, 5);
            let h = canonical_hodge(&dg);
            let (w, incl, proj) = splitting(&h);
            assert_eq!(w.dim(), dg.homology_dim());
            assert_eq!(incl.compose(&proj).unwrap(), h.t);
            assert_eq!(proj.compose(&incl).unwrap(), GradedMap::identity(&w));
        }
    }
}
