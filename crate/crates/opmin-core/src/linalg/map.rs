//! Sparse parity-homogeneous linear maps between based graded spaces.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::Zero;

use super::{GradedSpace, LinError, Parity, Result, Scalar, Vector};

/// An exact-rational matrix between graded spaces, carrying a parity.
///
/// Every stored entry `(out, in)` satisfies
/// `parity(out) = parity(in) + parity(map)`; this is checked on construction
/// and preserved by every operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMap {
    source: Arc<GradedSpace>,
    target: Arc<GradedSpace>,
    parity: Parity,
    entries: BTreeMap<(u16, u16), Scalar>, // (target index, source index)
}

impl GradedMap {
    pub fn zero(source: &Arc<GradedSpace>, target: &Arc<GradedSpace>, parity: Parity) -> GradedMap {
        GradedMap {
            source: Arc::clone(source),
            target: Arc::clone(target),
            parity,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(space: &Arc<GradedSpace>) -> GradedMap {
        let mut m = GradedMap::zero(space, space, Parity::Even);
        for i in 0..space.dim() {
            m.entries
                .insert((i as u16, i as u16), Scalar::from_integer(1.into()));
        }
        m
    }

    pub fn from_entries(
        source: &Arc<GradedSpace>,
        target: &Arc<GradedSpace>,
        parity: Parity,
        entries: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<GradedMap> {
        let mut m = GradedMap::zero(source, target, parity);
        for (out, inp, c) in entries {
            m.set(out, inp, c)?;
        }
        Ok(m)
    }

    /// Named-entry constructor, convenient for tests and file loading.
    pub fn from_named(
        source: &Arc<GradedSpace>,
        target: &Arc<GradedSpace>,
        parity: Parity,
        entries: &[(&str, &str, Scalar)],
    ) -> Result<GradedMap> {
        let mut m = GradedMap::zero(source, target, parity);
        for (out, inp, c) in entries {
            let o = target.index_of(out)?;
            let i = source.index_of(inp)?;
            m.set(o, i, c.clone())?;
        }
        Ok(m)
    }

    pub fn set(&mut self, out: usize, inp: usize, c: Scalar) -> Result<()> {
        if out >= self.target.dim() || inp >= self.source.dim() {
            return Err(LinError::IndexOutOfRange(format!("({out}, {inp})")));
        }
        if self.target.parity(out) != self.source.parity(inp) + self.parity && !c.is_zero() {
            return Err(LinError::ParityViolation {
                out: self.target.name(out).to_string(),
                inp: self.source.name(inp).to_string(),
            });
        }
        if c.is_zero() {
            self.entries.remove(&(out as u16, inp as u16));
        } else {
            self.entries.insert((out as u16, inp as u16), c);
        }
        Ok(())
    }

    pub fn add_to(&mut self, out: usize, inp: usize, c: Scalar) -> Result<()> {
        let cur = self
            .entries
            .get(&(out as u16, inp as u16))
            .cloned()
            .unwrap_or_else(Scalar::zero);
        self.set(out, inp, cur + c)
    }

    pub fn source(&self) -> &Arc<GradedSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedSpace> {
        &self.target
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn entries(&self) -> &BTreeMap<(u16, u16), Scalar> {
        &self.entries
    }

    pub fn entry(&self, out: usize, inp: usize) -> Scalar {
        self.entries
            .get(&(out as u16, inp as u16))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Matrix product `self ∘ g`; parities add.
    pub fn compose(&self, g: &GradedMap) -> Result<GradedMap> {
        if g.target != self.source {
            return Err(LinError::DimensionMismatch(format!(
                "compose: inner target dim {} != outer source dim {}",
                g.target.dim(),
                self.source.dim()
            )));
        }
        let mut out = GradedMap::zero(&g.source, &self.target, self.parity + g.parity);
        // index g by target row for the join
        let mut g_by_out: BTreeMap<u16, Vec<(u16, &Scalar)>> = BTreeMap::new();
        for ((o, i), c) in &g.entries {
            g_by_out.entry(*o).or_default().push((*i, c));
        }
        for ((o, mid), c) in &self.entries {
            if let Some(cols) = g_by_out.get(mid) {
                for (i, d) in cols {
                    out.add_to(*o as usize, *i as usize, c * *d)?;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        if self.source != other.source || self.target != other.target || self.parity != other.parity
        {
            return Err(LinError::DimensionMismatch("add: map shapes differ".into()));
        }
        let mut out = self.clone();
        for ((o, i), c) in &other.entries {
            out.add_to(*o as usize, *i as usize, c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &GradedMap) -> Result<GradedMap> {
        self.add(&other.scale(&Scalar::from_integer((-1).into())))
    }

    pub fn scale(&self, c: &Scalar) -> GradedMap {
        if c.is_zero() {
            return GradedMap::zero(&self.source, &self.target, self.parity);
        }
        GradedMap {
            source: Arc::clone(&self.source),
            target: Arc::clone(&self.target),
            parity: self.parity,
            entries: self.entries.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        assert_eq!(v.space(), &self.source, "apply: wrong source space");
        let mut out = Vector::zero(&self.target);
        for ((o, i), c) in &self.entries {
            if let Some(x) = v.coords().get(i) {
                out.add_term(*o, c * x);
            }
        }
        out
    }

    /// Image of the `i`-th basis vector.
    pub fn column(&self, i: usize) -> Vector {
        self.apply(&Vector::basis(&self.source, i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::scalar;

    fn space3() -> Arc<GradedSpace> {
        GradedSpace::from_pairs(&[("x", 0), ("y", 1), ("z", 0)])
    }

    #[test]
    fn identity_composes_trivially() {
        let v = space3();
        let f = GradedMap::from_named(
            &v,
            &v,
            Parity::Odd,
            &[("y", "x", scalar(2, 1)), ("x", "y", scalar(-1, 3))],
        )
        .unwrap();
        let id = GradedMap::identity(&v);
        assert_eq!(id.compose(&f).unwrap(), f);
        assert_eq!(f.compose(&id).unwrap(), f);
    }

    #[test]
    fn parity_constraint_enforced() {
        let v = space3();
        let r = GradedMap::from_named(&v, &v, Parity::Even, &[("y", "x", scalar(1, 1))]);
        assert!(matches!(r, Err(LinError::ParityViolation { .. })));
    }

    #[test]
    fn compose_matches_dense_triple_loop() {
        // two pseudo-random 3x3 parity-odd maps, checked entrywise against a
        // naive dense oracle
        let v = space3();
        let odd_pairs = [("y", "x"), ("y", "z"), ("x", "y"), ("z", "y")];
        let f = GradedMap::from_named(
            &v,
            &v,
            Parity::Odd,
            &odd_pairs
                .iter()
                .enumerate()
                .map(|(k, (o, i))| (*o, *i, scalar(2 * k as i64 + 1, 3)))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let g = GradedMap::from_named(
            &v,
            &v,
            Parity::Odd,
            &odd_pairs
                .iter()
                .enumerate()
                .map(|(k, (o, i))| (*o, *i, scalar(5 - k as i64, 7)))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let fg = f.compose(&g).unwrap();
        for o in 0..3 {
            for i in 0..3 {
                let mut acc = Scalar::from_integer(0.into());
                for m in 0..3 {
                    acc += f.entry(o, m) * g.entry(m, i);
                }
                assert_eq!(fg.entry(o, i), acc);
            }
        }
        assert_eq!(fg.parity(), Parity::Even);
    }
}
