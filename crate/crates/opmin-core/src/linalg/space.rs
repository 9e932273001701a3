//! Based Z/2-graded vector spaces and their elements.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;
use std::sync::Arc;

use num::Zero;

use super::{LinError, Result, Scalar};

/// Parity of a homogeneous object: even or odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_u8(p: u8) -> Parity {
        if p % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// Sign `(-1)^{p q}` arising when an object of parity `self` moves past
    /// one of parity `other`.
    pub fn koszul(self, other: Parity) -> i32 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_u8(self.as_u8() ^ rhs.as_u8())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

/// A finite-dimensional Z/2-graded vector space with a fixed ordered basis.
///
/// Basis names are unique; the basis order is part of the data and makes all
/// downstream pivot choices deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSpace {
    basis: Vec<(String, Parity)>,
}

impl GradedSpace {
    pub fn new(basis: Vec<(String, Parity)>) -> Result<Arc<GradedSpace>> {
        let mut seen = std::collections::BTreeSet::new();
        for (name, _) in &basis {
            if !seen.insert(name.clone()) {
                return Err(LinError::DuplicateBasis(name.clone()));
            }
        }
        Ok(Arc::new(GradedSpace { basis }))
    }

    /// Convenience constructor from `(name, parity-as-0/1)` pairs.
    pub fn from_pairs(pairs: &[(&str, u8)]) -> Arc<GradedSpace> {
        GradedSpace::new(
            pairs
                .iter()
                .map(|(n, p)| (n.to_string(), Parity::from_u8(*p)))
                .collect(),
        )
        .expect("duplicate basis names")
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `(even dimension, odd dimension)`.
    pub fn dims(&self) -> (usize, usize) {
        let odd = self.basis.iter().filter(|(_, p)| p.is_odd()).count();
        (self.basis.len() - odd, odd)
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.basis[i].1
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis[i].0
    }

    pub fn basis(&self) -> &[(String, Parity)] {
        &self.basis
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.basis
            .iter()
            .position(|(n, _)| n == name)
            .ok_or_else(|| LinError::UnknownBasis(name.to_string()))
    }

    /// The parity reversion: same basis names, all parities flipped.
    pub fn parity_reverse(&self) -> Arc<GradedSpace> {
        Arc::new(GradedSpace {
            basis: self
                .basis
                .iter()
                .map(|(n, p)| (n.clone(), p.flip()))
                .collect(),
        })
    }

    /// Total parity of a word of basis indices.
    pub fn word_parity(&self, word: &[u16]) -> Parity {
        let mut p = Parity::Even;
        for &i in word {
            p = p + self.parity(i as usize);
        }
        p
    }
}

/// A sparse element of a graded space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vector {
    space: Arc<GradedSpace>,
    coords: BTreeMap<u16, Scalar>,
}

impl Vector {
    pub fn zero(space: &Arc<GradedSpace>) -> Vector {
        Vector {
            space: Arc::clone(space),
            coords: BTreeMap::new(),
        }
    }

    pub fn basis(space: &Arc<GradedSpace>, i: usize) -> Vector {
        let mut v = Vector::zero(space);
        v.add_term(i as u16, Scalar::from_integer(1.into()));
        v
    }

    pub fn from_coords(space: &Arc<GradedSpace>, coords: &[(usize, Scalar)]) -> Vector {
        let mut v = Vector::zero(space);
        for (i, c) in coords {
            v.add_term(*i as u16, c.clone());
        }
        v
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn coords(&self) -> &BTreeMap<u16, Scalar> {
        &self.coords
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coords.get(&(i as u16)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, i: u16, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.coords.entry(i).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.coords.remove(&i);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn scale(&self, c: &Scalar) -> Vector {
        if c.is_zero() {
            return Vector::zero(&self.space);
        }
        Vector {
            space: Arc::clone(&self.space),
            coords: self.coords.iter().map(|(i, v)| (*i, v * c)).collect(),
        }
    }

    pub fn add(&self, other: &Vector) -> Vector {
        let mut out = self.clone();
        for (i, c) in &other.coords {
            out.add_term(*i, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        let mut out = self.clone();
        for (i, c) in &other.coords {
            out.add_term(*i, -c.clone());
        }
        out
    }

    /// Parity of a homogeneous vector; `None` for zero or mixed-parity vectors.
    pub fn parity(&self) -> Option<Parity> {
        let mut p = None;
        for i in self.coords.keys() {
            let q = self.space.parity(*i as usize);
            match p {
                None => p = Some(q),
                Some(r) if r != q => return None,
                _ => {}
            }
        }
        p
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in &self.coords {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({})*{}", c, self.space.name(*i as usize))?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::scalar;

    #[test]
    fn parity_reverse_is_involution_and_swaps_dims() {
        let v = GradedSpace::from_pairs(&[("a", 0), ("b", 0), ("c", 1), ("d", 1), ("e", 1)]);
        assert_eq!(v.dims(), (2, 3));
        let pv = v.parity_reverse();
        assert_eq!(pv.dims(), (3, 2));
        let ppv = pv.parity_reverse();
        assert_eq!(*ppv, *v);
        // purely even space flips to purely odd
        let e = GradedSpace::from_pairs(&[("x", 0), ("y", 0)]);
        assert_eq!(e.parity_reverse().dims(), (0, 2));
    }

    #[test]
    fn duplicate_names_rejected() {
        let r = GradedSpace::new(vec![
            ("a".into(), Parity::Even),
            ("a".into(), Parity::Odd),
        ]);
        assert!(matches!(r, Err(LinError::DuplicateBasis(_))));
    }

    #[test]
    fn vector_arithmetic_cancels_exactly() {
        let v = GradedSpace::from_pairs(&[("a", 0), ("b", 1)]);
        let x = Vector::from_coords(&v, &[(0, scalar(1, 3)), (1, scalar(2, 1))]);
        let y = x.scale(&scalar(-1, 1));
        assert!(x.add(&y).is_zero());
        assert_eq!(x.parity(), None);
        assert_eq!(Vector::basis(&v, 1).parity(), Some(Parity::Odd));
    }
}
