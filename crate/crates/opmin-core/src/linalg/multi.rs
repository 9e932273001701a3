//! Multilinear maps between tensor powers of based graded spaces.
//!
//! A [`MultiMap`] represents an exact map `S^{⊗k} → T^{⊗l}` of fixed parity.
//! All sign conventions derive from the single Koszul rule
//! `(f ⊗ g)(a ⊗ b) = (-1)^{|g||a|} f(a) ⊗ g(b)`, generalized left-to-right:
//! the factor `f_j` of a tensor product picks up the total parity of the
//! input blocks strictly to its left.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::Zero;
use smallvec::SmallVec;

use super::{GradedMap, GradedSpace, LinError, Parity, Result, Scalar, Vector};

/// A word of basis indices.
pub type Word = SmallVec<[u16; 4]>;

/// Koszul sign of rearranging a word of the given parities: the letter at old
/// position `a` moves to new position `perm[a]`. Each inverted pair of odd
/// letters contributes a factor of -1.
pub fn koszul_perm_sign(parities: &[Parity], perm: &[usize]) -> i32 {
    let n = parities.len();
    debug_assert_eq!(perm.len(), n);
    let mut sign = 1;
    for a in 0..n {
        for b in (a + 1)..n {
            if perm[a] > perm[b] && parities[a].is_odd() && parities[b].is_odd() {
                sign = -sign;
            }
        }
    }
    sign
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiMap {
    ins: Arc<GradedSpace>,
    outs: Arc<GradedSpace>,
    arity_in: usize,
    arity_out: usize,
    parity: Parity,
    entries: BTreeMap<(Word, Word), Scalar>, // (out word, in word)
}

impl MultiMap {
    pub fn zero(
        ins: &Arc<GradedSpace>,
        outs: &Arc<GradedSpace>,
        arity_in: usize,
        arity_out: usize,
        parity: Parity,
    ) -> MultiMap {
        MultiMap {
            ins: Arc::clone(ins),
            outs: Arc::clone(outs),
            arity_in,
            arity_out,
            parity,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(space: &Arc<GradedSpace>) -> MultiMap {
        let mut m = MultiMap::zero(space, space, 1, 1, Parity::Even);
        for i in 0..space.dim() as u16 {
            m.entries.insert(
                (SmallVec::from_slice(&[i]), SmallVec::from_slice(&[i])),
                Scalar::from_integer(1.into()),
            );
        }
        m
    }

    pub fn from_graded(g: &GradedMap) -> MultiMap {
        let mut m = MultiMap::zero(g.source(), g.target(), 1, 1, g.parity());
        for ((o, i), c) in g.entries() {
            m.entries.insert(
                (SmallVec::from_slice(&[*o]), SmallVec::from_slice(&[*i])),
                c.clone(),
            );
        }
        m
    }

    /// Inverse of [`from_graded`] for maps of arity (1, 1).
    pub fn to_graded(&self) -> Result<GradedMap> {
        if self.arity_in != 1 || self.arity_out != 1 {
            return Err(LinError::DimensionMismatch(
                "to_graded requires arity (1, 1)".into(),
            ));
        }
        GradedMap::from_entries(
            &self.ins,
            &self.outs,
            self.parity,
            self.entries
                .iter()
                .map(|((o, i), c)| (o[0] as usize, i[0] as usize, c.clone())),
        )
    }

    pub fn ins(&self) -> &Arc<GradedSpace> {
        &self.ins
    }

    pub fn outs(&self) -> &Arc<GradedSpace> {
        &self.outs
    }

    pub fn arity_in(&self) -> usize {
        self.arity_in
    }

    pub fn arity_out(&self) -> usize {
        self.arity_out
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn entries(&self) -> &BTreeMap<(Word, Word), Scalar> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn set(&mut self, out: Word, inp: Word, c: Scalar) -> Result<()> {
        if out.len() != self.arity_out || inp.len() != self.arity_in {
            return Err(LinError::DimensionMismatch("word length mismatch".into()));
        }
        if !c.is_zero()
            && self.outs.word_parity(&out) != self.ins.word_parity(&inp) + self.parity
        {
            return Err(LinError::ParityViolation {
                out: format!("{:?}", out),
                inp: format!("{:?}", inp),
            });
        }
        if c.is_zero() {
            self.entries.remove(&(out, inp));
        } else {
            self.entries.insert((out, inp), c);
        }
        Ok(())
    }

    pub fn add_to(&mut self, out: Word, inp: Word, c: Scalar) -> Result<()> {
        let cur = self
            .entries
            .get(&(out.clone(), inp.clone()))
            .cloned()
            .unwrap_or_else(Scalar::zero);
        self.set(out, inp, cur + c)
    }

    /// Named-entry constructor for structure maps `S^{⊗k} → S`.
    pub fn from_named(
        space: &Arc<GradedSpace>,
        arity: usize,
        parity: Parity,
        entries: &[(&str, &[&str], Scalar)],
    ) -> Result<MultiMap> {
        let mut m = MultiMap::zero(space, space, arity, 1, parity);
        for (out, ins, c) in entries {
            let o = space.index_of(out)? as u16;
            let mut w: Word = SmallVec::new();
            for name in ins.iter() {
                w.push(space.index_of(name)? as u16);
            }
            m.add_to(SmallVec::from_slice(&[o]), w, c.clone())?;
        }
        Ok(m)
    }

    pub fn scale(&self, c: &Scalar) -> MultiMap {
        if c.is_zero() {
            return MultiMap::zero(&self.ins, &self.outs, self.arity_in, self.arity_out, self.parity);
        }
        MultiMap {
            entries: self.entries.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
            ..self.clone()
        }
    }

    pub fn neg(&self) -> MultiMap {
        self.scale(&Scalar::from_integer((-1).into()))
    }

    pub fn add(&self, other: &MultiMap) -> Result<MultiMap> {
        if self.ins != other.ins
            || self.outs != other.outs
            || self.arity_in != other.arity_in
            || self.arity_out != other.arity_out
            || self.parity != other.parity
        {
            return Err(LinError::DimensionMismatch("add: shapes differ".into()));
        }
        let mut out = self.clone();
        for ((o, i), c) in &other.entries {
            out.add_to(o.clone(), i.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiMap) -> Result<MultiMap> {
        self.add(&other.neg())
    }

    /// Plain composition `self ∘ g`. Carries no Koszul sign: signs only arise
    /// from the tensor interchange, not from composing maps.
    pub fn compose(&self, g: &MultiMap) -> Result<MultiMap> {
        if g.outs != self.ins || g.arity_out != self.arity_in {
            return Err(LinError::DimensionMismatch(format!(
                "compose: inner output {}^{} vs outer input {}^{}",
                g.outs.dim(),
                g.arity_out,
                self.ins.dim(),
                self.arity_in
            )));
        }
        let mut out = MultiMap::zero(
            &g.ins,
            &self.outs,
            g.arity_in,
            self.arity_out,
            self.parity + g.parity,
        );
        let mut mine_by_in: BTreeMap<&Word, Vec<(&Word, &Scalar)>> = BTreeMap::new();
        for ((o, i), c) in &self.entries {
            mine_by_in.entry(i).or_default().push((o, c));
        }
        for ((mid, i), c) in &g.entries {
            if let Some(rows) = mine_by_in.get(mid) {
                for (o, d) in rows {
                    out.add_to((*o).clone(), i.clone(), c * *d)?;
                }
            }
        }
        Ok(out)
    }

    /// Tensor product of maps, left to right, with the Koszul sign rule.
    /// All factors must share input and output spaces.
    pub fn tensor(parts: &[&MultiMap]) -> Result<MultiMap> {
        if parts.is_empty() {
            return Err(LinError::EmptyTensor);
        }
        let ins = &parts[0].ins;
        let outs = &parts[0].outs;
        for p in parts {
            if &p.ins != ins || &p.outs != outs {
                return Err(LinError::DimensionMismatch(
                    "tensor: factors live on different spaces".into(),
                ));
            }
        }
        let arity_in = parts.iter().map(|p| p.arity_in).sum();
        let arity_out = parts.iter().map(|p| p.arity_out).sum();
        let parity = parts
            .iter()
            .fold(Parity::Even, |acc, p| acc + p.parity);
        let mut out = MultiMap::zero(ins, outs, arity_in, arity_out, parity);
        cartesian_entries(parts, |owords, iwords, coeff, sign| {
            let mut o: Word = SmallVec::new();
            let mut i: Word = SmallVec::new();
            for w in owords {
                o.extend_from_slice(w);
            }
            for w in iwords {
                i.extend_from_slice(w);
            }
            let c = if sign < 0 { -coeff } else { coeff };
            out.add_to(o, i, c).expect("tensor parity bookkeeping");
        });
        Ok(out)
    }

    /// Fused `outer ∘ (parts[0] ⊗ … ⊗ parts[k-1])`, avoiding the intermediate
    /// tensor map. This is the inner loop of every amplitude computation.
    pub fn compose_tensor(outer: &MultiMap, parts: &[&MultiMap]) -> Result<MultiMap> {
        if parts.is_empty() {
            return Err(LinError::EmptyTensor);
        }
        let ins = &parts[0].ins;
        let outs = &parts[0].outs;
        for p in parts {
            if &p.ins != ins || &p.outs != outs {
                return Err(LinError::DimensionMismatch(
                    "compose_tensor: factors live on different spaces".into(),
                ));
            }
        }
        let mid_arity: usize = parts.iter().map(|p| p.arity_out).sum();
        if outs != &outer.ins || mid_arity != outer.arity_in {
            return Err(LinError::DimensionMismatch(format!(
                "compose_tensor: middle arity {} vs outer input arity {}",
                mid_arity, outer.arity_in
            )));
        }
        let arity_in = parts.iter().map(|p| p.arity_in).sum();
        let parity = parts
            .iter()
            .fold(outer.parity, |acc, p| acc + p.parity);
        let mut out = MultiMap::zero(ins, &outer.outs, arity_in, outer.arity_out, parity);
        if outer.entries.is_empty() || parts.iter().any(|p| p.entries.is_empty()) {
            return Ok(out);
        }
        let mut outer_by_in: BTreeMap<&Word, Vec<(&Word, &Scalar)>> = BTreeMap::new();
        for ((o, i), c) in &outer.entries {
            outer_by_in.entry(i).or_default().push((o, c));
        }
        cartesian_entries(parts, |owords, iwords, coeff, sign| {
            let mut mid: Word = SmallVec::new();
            for w in owords {
                mid.extend_from_slice(w);
            }
            if let Some(rows) = outer_by_in.get(&mid) {
                let mut i: Word = SmallVec::new();
                for w in iwords {
                    i.extend_from_slice(w);
                }
                let c = if sign < 0 { -coeff } else { coeff };
                for (o, d) in rows {
                    out.add_to((*o).clone(), i.clone(), &c * *d)
                        .expect("compose_tensor parity bookkeeping");
                }
            }
        });
        Ok(out)
    }

    /// Operadic partial composition: substitute `inner` into input slot
    /// `position` (1-based) of `self`. Equivalent to
    /// `self ∘ (id^{⊗(position-1)} ⊗ inner ⊗ id^{⊗rest})`.
    pub fn plug(&self, position: usize, inner: &MultiMap) -> Result<MultiMap> {
        if position == 0 || position > self.arity_in {
            return Err(LinError::IndexOutOfRange(format!(
                "plug position {position} of {}",
                self.arity_in
            )));
        }
        if inner.outs != self.ins || inner.arity_out != 1 {
            return Err(LinError::DimensionMismatch(
                "plug: inner must output one factor of the outer input space".into(),
            ));
        }
        let id = MultiMap::identity(&self.ins);
        let mut parts: Vec<&MultiMap> = Vec::with_capacity(self.arity_in);
        for p in 1..=self.arity_in {
            parts.push(if p == position { inner } else { &id });
        }
        // inner.ins may differ from self.ins only when all slots are inner;
        // with identity fillers the input spaces must agree.
        if self.arity_in > 1 && inner.ins != self.ins {
            return Err(LinError::DimensionMismatch(
                "plug: inner input space must match outer".into(),
            ));
        }
        MultiMap::compose_tensor(self, &parts)
    }

    /// Precompose with the signed routing operator sending inputs
    /// `(x_1, …, x_n)` to `(x_{labels[0]+1}, …, x_{labels[n-1]+1})` (labels are
    /// 0-based). `labels` must be a permutation.
    pub fn precompose_route(&self, labels: &[usize]) -> MultiMap {
        assert_eq!(labels.len(), self.arity_in, "route length");
        let n = labels.len();
        // perm[old position in the new input word] = position in self's input
        let mut perm = vec![0usize; n];
        for (p, &l) in labels.iter().enumerate() {
            perm[l] = p;
        }
        let mut out = MultiMap::zero(&self.ins, &self.outs, n, self.arity_out, self.parity);
        for ((o, v), c) in &self.entries {
            let mut w: Word = SmallVec::from_elem(0u16, n);
            for (p, &l) in labels.iter().enumerate() {
                w[l] = v[p];
            }
            let parities: Vec<Parity> =
                w.iter().map(|&i| self.ins.parity(i as usize)).collect();
            let sign = koszul_perm_sign(&parities, &perm);
            let cc = if sign < 0 { -c.clone() } else { c.clone() };
            out.add_to(o.clone(), w, cc).expect("route parity");
        }
        out
    }

    /// Apply to a tuple of vectors (requires output arity 1).
    pub fn apply(&self, inputs: &[&Vector]) -> Vector {
        assert_eq!(self.arity_out, 1, "apply requires arity_out = 1");
        assert_eq!(inputs.len(), self.arity_in, "apply arity");
        let mut out = Vector::zero(&self.outs);
        for ((o, i), c) in &self.entries {
            let mut coeff = c.clone();
            for (p, &idx) in i.iter().enumerate() {
                match inputs[p].coords().get(&idx) {
                    Some(x) => coeff *= x,
                    None => {
                        coeff = Scalar::zero();
                        break;
                    }
                }
            }
            if !coeff.is_zero() {
                out.add_term(o[0], coeff);
            }
        }
        out
    }
}

/// Iterate over the cartesian product of the factors' entries, reporting the
/// out-words, in-words, coefficient product, and the Koszul interchange sign
/// `(-1)^{Σ_j |f_j| · |input blocks left of j|}`.
fn cartesian_entries<'a, F>(parts: &[&'a MultiMap], mut visit: F)
where
    F: FnMut(&[&'a Word], &[&'a Word], Scalar, i32),
{
    let lists: Vec<Vec<(&Word, &Word, &Scalar)>> = parts
        .iter()
        .map(|p| p.entries.iter().map(|((o, i), c)| (o, i, c)).collect())
        .collect();
    if lists.iter().any(|l| l.is_empty()) {
        return;
    }
    let k = lists.len();
    let mut idx = vec![0usize; k];
    loop {
        let mut owords: Vec<&Word> = Vec::with_capacity(k);
        let mut iwords: Vec<&Word> = Vec::with_capacity(k);
        let mut coeff = Scalar::from_integer(1.into());
        let mut sign = 1i32;
        let mut left_parity = Parity::Even;
        for j in 0..k {
            let (o, i, c) = lists[j][idx[j]];
            if parts[j].parity.is_odd() && left_parity.is_odd() {
                sign = -sign;
            }
            left_parity = left_parity + parts[j].ins.word_parity(i);
            owords.push(o);
            iwords.push(i);
            coeff *= c;
        }
        visit(&owords, &iwords, coeff, sign);
        // advance the multi-index
        let mut j = k;
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < lists[j].len() {
                break;
            }
            idx[j] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::scalar;

    fn space2() -> Arc<GradedSpace> {
        GradedSpace::from_pairs(&[("e", 0), ("o", 1)])
    }

    #[test]
    fn koszul_rule_forced_case() {
        // (s ⊗ s)(a ⊗ b) with a odd picks up a minus sign
        let v = space2();
        let s = MultiMap::from_named(
            &v,
            1,
            Parity::Odd,
            &[("o", &["e"], scalar(1, 1))], // s(e) = o
        )
        .unwrap();
        let ss = MultiMap::tensor(&[&s, &s]).unwrap();
        // input (o? no: s only acts on e) — use input (e, e): left block even, no sign
        let key = (
            Word::from_slice(&[1, 1]),
            Word::from_slice(&[0, 0]),
        );
        assert_eq!(ss.entries().get(&key), Some(&scalar(1, 1)));

        // now a map hitting odd inputs: f(o) = e, odd map
        let f = MultiMap::from_named(&v, 1, Parity::Odd, &[("e", &["o"], scalar(1, 1))]).unwrap();
        let ff = MultiMap::tensor(&[&f, &f]).unwrap();
        // (f ⊗ f)(o ⊗ o): second factor crosses the first (odd) input: -1
        let key = (Word::from_slice(&[0, 0]), Word::from_slice(&[1, 1]));
        assert_eq!(ff.entries().get(&key), Some(&scalar(-1, 1)));
    }

    #[test]
    fn identity_tensor_is_identity() {
        let v = space2();
        let id = MultiMap::identity(&v);
        let id2 = MultiMap::tensor(&[&id, &id]).unwrap();
        for w in [[0u16, 0], [0, 1], [1, 0], [1, 1]] {
            let key = (Word::from_slice(&w), Word::from_slice(&w));
            assert_eq!(id2.entries().get(&key), Some(&scalar(1, 1)));
        }
        assert_eq!(id2.entries().len(), 4);
    }

    #[test]
    fn plug_identity_is_noop() {
        let v = space2();
        let m2 = MultiMap::from_named(
            &v,
            2,
            Parity::Odd,
            &[
                ("o", &["e", "e"], scalar(2, 1)),
                ("e", &["o", "e"], scalar(1, 3)),
            ],
        )
        .unwrap();
        let id = MultiMap::identity(&v);
        assert_eq!(m2.plug(1, &id).unwrap(), m2);
        assert_eq!(m2.plug(2, &id).unwrap(), m2);
    }

    #[test]
    fn plug_matches_compose_tensor_definition() {
        let v = space2();
        let m2 = MultiMap::from_named(
            &v,
            2,
            Parity::Odd,
            &[
                ("o", &["e", "e"], scalar(1, 1)),
                ("e", &["e", "o"], scalar(-1, 2)),
                ("e", &["o", "e"], scalar(5, 1)),
            ],
        )
        .unwrap();
        let id = MultiMap::identity(&v);
        let lhs = m2.plug(2, &m2).unwrap();
        let rhs = m2
            .compose(&MultiMap::tensor(&[&id, &m2]).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn route_is_signed_permutation() {
        let v = space2();
        // m(x, y) with entries on all parity-valid words
        let m2 = MultiMap::from_named(
            &v,
            2,
            Parity::Even,
            &[
                ("e", &["o", "o"], scalar(1, 1)),
                ("e", &["e", "e"], scalar(7, 1)),
            ],
        )
        .unwrap();
        // swap inputs: labels = [1, 0]
        let sw = m2.precompose_route(&[1, 0]);
        // on (o, o): swapping two odd letters gives -1
        let key = (Word::from_slice(&[0]), Word::from_slice(&[1, 1]));
        assert_eq!(sw.entries().get(&key), Some(&scalar(-1, 1)));
        // on (e, e): no sign
        let key = (Word::from_slice(&[0]), Word::from_slice(&[0, 0]));
        assert_eq!(sw.entries().get(&key), Some(&scalar(7, 1)));
        // double swap is the identity routing
        assert_eq!(sw.precompose_route(&[1, 0]), m2);
    }
}
