use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{dix4_inv, dix4_mul, heis3_inv, heis3_mul, Dix4Element, Heis3Element};
use crate::error::{Error, Result};

/// Minimal group interface used by the multiplier samplers.
pub trait Group: Copy {
    fn identity() -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn inv(&self) -> Self;
}

impl Group for Heis3Element {
    fn identity() -> Self {
        Heis3Element::IDENTITY
    }
    fn mul(&self, other: &Self) -> Self {
        heis3_mul(self, other)
    }
    fn inv(&self) -> Self {
        heis3_inv(self)
    }
}

impl Group for Dix4Element {
    fn identity() -> Self {
        Dix4Element::IDENTITY
    }
    fn mul(&self, other: &Self) -> Self {
        dix4_mul(self, other)
    }
    fn inv(&self) -> Self {
        dix4_inv(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupKind {
    Z,
    Z2,
    R,
    Heis3,
    Dix4,
}

impl GroupKind {
    pub fn identity(self) -> GroupElement {
        match self {
            GroupKind::Z => GroupElement::Z(0),
            GroupKind::Z2 => GroupElement::Z2([0, 0]),
            GroupKind::R => GroupElement::R(0.0),
            GroupKind::Heis3 => GroupElement::Heis3(Heis3Element::IDENTITY),
            GroupKind::Dix4 => GroupElement::Dix4(Dix4Element::IDENTITY),
        }
    }

    /// Fixed generating set; words are formed from these and their inverses.
    pub fn generators(self) -> Vec<GroupElement> {
        match self {
            GroupKind::Z => vec![GroupElement::Z(1)],
            GroupKind::Z2 => vec![GroupElement::Z2([1, 0]), GroupElement::Z2([0, 1])],
            GroupKind::R => vec![GroupElement::R(1.0), GroupElement::R(std::f64::consts::SQRT_2 / 2.0)],
            GroupKind::Heis3 => {
                vec![GroupElement::Heis3(Heis3Element::new(1.0, 0.0, 0.0)), GroupElement::Heis3(Heis3Element::new(0.0, 1.0, 0.0))]
            }
            GroupKind::Dix4 => vec![
                GroupElement::Dix4(Dix4Element::new(1.0, 0.0, 0.0, 0.0)),
                GroupElement::Dix4(Dix4Element::new(0.0, 1.0, 0.0, 0.0)),
            ],
        }
    }

    /// A product of `len` generators or inverses, chosen uniformly.
    pub fn random_word(self, len: usize, rng: &mut impl Rng) -> GroupElement {
        let gens = self.generators();
        let mut acc = self.identity();
        for _ in 0..len {
            let g = gens[rng.random_range(0..gens.len())];
            let g = if rng.random_bool(0.5) { g } else { g.inv() };
            acc = acc.mul(&g).expect("generators share the group kind");
        }
        acc
    }

    /// `count` words with lengths drawn from `0..=max_len`.
    pub fn random_words(self, count: usize, max_len: usize, rng: &mut impl Rng) -> Vec<GroupElement> {
        (0..count)
            .map(|_| {
                let len = rng.random_range(0..=max_len);
                self.random_word(len, rng)
            })
            .collect()
    }
}

/// An element of one of the supported groups.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum GroupElement {
    Z(i64),
    Z2([i64; 2]),
    R(f64),
    Heis3(Heis3Element),
    Dix4(Dix4Element),
}

impl GroupElement {
    pub fn kind(&self) -> GroupKind {
        match self {
            GroupElement::Z(_) => GroupKind::Z,
            GroupElement::Z2(_) => GroupKind::Z2,
            GroupElement::R(_) => GroupKind::R,
            GroupElement::Heis3(_) => GroupKind::Heis3,
            GroupElement::Dix4(_) => GroupKind::Dix4,
        }
    }

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement> {
        Ok(match (self, other) {
            (GroupElement::Z(a), GroupElement::Z(b)) => GroupElement::Z(a + b),
            (GroupElement::Z2(a), GroupElement::Z2(b)) => GroupElement::Z2([a[0] + b[0], a[1] + b[1]]),
            (GroupElement::R(a), GroupElement::R(b)) => GroupElement::R(a + b),
            (GroupElement::Heis3(a), GroupElement::Heis3(b)) => GroupElement::Heis3(heis3_mul(a, b)),
            (GroupElement::Dix4(a), GroupElement::Dix4(b)) => GroupElement::Dix4(dix4_mul(a, b)),
            _ => {
                return Err(Error::domain(format!("cannot multiply {:?} by {:?} element", self.kind(), other.kind())));
            }
        })
    }

    pub fn inv(&self) -> GroupElement {
        match self {
            GroupElement::Z(a) => GroupElement::Z(-a),
            GroupElement::Z2(a) => GroupElement::Z2([-a[0], -a[1]]),
            GroupElement::R(a) => GroupElement::R(-a),
            GroupElement::Heis3(a) => GroupElement::Heis3(heis3_inv(a)),
            GroupElement::Dix4(a) => GroupElement::Dix4(dix4_inv(a)),
        }
    }
}
