//! Finite reflection groups as explicit lists of exact matrices.
//!
//! The group is the closure of the simple reflections under multiplication.
//! Elements are deduplicated by their entries, every element preserves the
//! realization's bilinear form, and each element's inverse is tracked by
//! index so counting loops never solve linear systems.

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::roots::RootSystem;
use crate::scalar::Scalar;
use std::collections::HashMap;

/// Default ceiling on the group order. H4 (14,400) fits comfortably;
/// E6 (51,840) still fits; E7 and E8 are formula-only.
pub const DEFAULT_GROUP_CAP: u64 = 60_000;

#[derive(Clone, Debug)]
pub struct ReflectionGroup {
    elements: Vec<Matrix>,
    inverse: Vec<usize>,
}

/// Enumerate the reflection group of `rs` under the default cap.
pub fn generate_group(rs: &RootSystem) -> Result<ReflectionGroup> {
    generate_group_with_cap(rs, DEFAULT_GROUP_CAP)
}

/// Enumerate the reflection group of `rs`, refusing to start when the
/// degree formula already puts the order over `cap`.
pub fn generate_group_with_cap(rs: &RootSystem, cap: u64) -> Result<ReflectionGroup> {
    let expected = rs.degrees()?.group_order();
    if expected > cap {
        return Err(Error::GroupTooLarge {
            order: expected,
            cap,
        });
    }
    let n = rs.ambient_dim();
    let generators: Vec<Matrix> = (0..rs.rank())
        .map(|i| rs.simple_reflection(i))
        .collect::<Result<_>>()?;

    let key = |m: &Matrix| -> Vec<Scalar> {
        let mut flat = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                flat.push(m.get(i, j).clone());
            }
        }
        flat
    };

    let mut elements: Vec<Matrix> = vec![Matrix::identity(n)];
    // Inverse matrices carried alongside: (g·s)⁻¹ = s·g⁻¹ for involutions s.
    let mut inverses: Vec<Matrix> = vec![Matrix::identity(n)];
    let mut index: HashMap<Vec<Scalar>, usize> = HashMap::new();
    index.insert(key(&elements[0]), 0);
    let mut frontier = vec![0usize];
    while let Some(at) = frontier.pop() {
        let (g, g_inv) = (elements[at].clone(), inverses[at].clone());
        for s in &generators {
            let h = g.mul(s)?;
            let k = key(&h);
            if index.contains_key(&k) {
                continue;
            }
            if elements.len() as u64 >= expected {
                return Err(Error::InvalidArgument(format!(
                    "group closure exceeded the expected order {expected}"
                )));
            }
            let h_inv = s.mul(&g_inv)?;
            index.insert(k, elements.len());
            frontier.push(elements.len());
            elements.push(h);
            inverses.push(h_inv);
        }
    }
    if elements.len() as u64 != expected {
        return Err(Error::InvalidArgument(format!(
            "group closure found {} elements, degree formula says {expected}",
            elements.len()
        )));
    }
    let inverse = inverses
        .iter()
        .map(|m| index[&key(m)])
        .collect();
    Ok(ReflectionGroup { elements, inverse })
}

impl ReflectionGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Matrix {
        &self.elements[i]
    }

    /// Index of the identity element.
    pub fn identity_index(&self) -> usize {
        0
    }

    /// Index of the inverse of element `i`.
    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn inverse(&self, i: usize) -> &Matrix {
        &self.elements[self.inverse[i]]
    }

    pub fn apply(&self, i: usize, x: &Vector) -> Result<Vector> {
        self.elements[i].mul_vec(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Family;

    fn group(f: Family) -> ReflectionGroup {
        generate_group(&RootSystem::of_family(f).unwrap()).unwrap()
    }

    #[test]
    fn orders_match_the_degree_products() {
        let expect = [
            (Family::A(1), 2),
            (Family::A(2), 6),
            (Family::A(3), 24),
            (Family::A(5), 720),
            (Family::B(2), 8),
            (Family::B(3), 48),
            (Family::B(4), 384),
            (Family::C(3), 48),
            (Family::D(4), 192),
            (Family::F4, 1152),
            (Family::G2, 12),
            (Family::H3, 120),
            (Family::I2(5), 10),
            (Family::I2(6), 12),
        ];
        for (f, order) in expect {
            assert_eq!(group(f).order(), order, "{f}");
        }
    }

    #[test]
    fn h4_reaches_its_full_order() {
        assert_eq!(group(Family::H4).order(), 14_400);
    }

    #[test]
    fn every_element_preserves_the_form() {
        for f in [Family::A(2), Family::B(2), Family::G2, Family::H3] {
            let rs = RootSystem::of_family(f).unwrap();
            let w = generate_group(&rs).unwrap();
            let g = rs.form();
            for m in w.elements() {
                let mtgm = m.transpose().mul(g).unwrap().mul(m).unwrap();
                assert_eq!(&mtgm, g, "{f}");
            }
        }
    }

    #[test]
    fn inverse_indices_are_correct() {
        for f in [Family::A(2), Family::B(2), Family::H3] {
            let rs = RootSystem::of_family(f).unwrap();
            let w = generate_group(&rs).unwrap();
            let id = Matrix::identity(rs.ambient_dim());
            for i in 0..w.order() {
                let product = w.element(i).mul(w.inverse(i)).unwrap();
                assert_eq!(product, id, "{f}: element {i}");
            }
            assert_eq!(w.inverse_index(w.identity_index()), 0);
        }
    }

    #[test]
    fn elements_are_pairwise_distinct_and_closed() {
        let rs = RootSystem::of_family(Family::B(2)).unwrap();
        let w = generate_group(&rs).unwrap();
        let mut seen = std::collections::HashSet::new();
        for m in w.elements() {
            let flat: Vec<Scalar> = (0..2)
                .flat_map(|i| (0..2).map(move |j| (i, j)))
                .map(|(i, j)| m.get(i, j).clone())
                .collect();
            assert!(seen.insert(flat), "duplicate element");
        }
        for a in w.elements() {
            for b in w.elements() {
                let c = a.mul(b).unwrap();
                let flat: Vec<Scalar> = (0..2)
                    .flat_map(|i| (0..2).map(move |j| (i, j)))
                    .map(|(i, j)| c.get(i, j).clone())
                    .collect();
                assert!(seen.contains(&flat), "product escaped the group");
            }
        }
    }

    #[test]
    fn oversized_groups_are_refused_up_front() {
        let rs = RootSystem::of_family(Family::E(7)).unwrap();
        match generate_group(&rs) {
            Err(Error::GroupTooLarge { order, cap }) => {
                assert_eq!(order, 2_903_040);
                assert_eq!(cap, DEFAULT_GROUP_CAP);
            }
            other => panic!("expected GroupTooLarge, got {other:?}"),
        }
    }
}
