//! The catalog of finite Coxeter families: named diagrams, degree data,
//! exact realizations of simple roots, and extended (affine) diagrams.
//!
//! # Realization convention
//!
//! All geometry lives in simple-root coordinates: the ambient space of a
//! rank-`n` family is spanned by the simple roots themselves, which are the
//! standard basis vectors (optionally rescaled). The geometry is carried by
//! an explicit symmetric bilinear form — the Gram matrix `G` of the simple
//! roots — and every inner product of vectors `u`, `v` is `uᵀGv`. This keeps
//! every coordinate inside ℚ(√5) for all supported labels (2, 3, 4, 5, 6),
//! which a literal Euclidean embedding cannot do at full rank (already for
//! the rank-2 label-3 system, the Gram determinant 3 is not a square in
//! ℚ(√5), so no 2×2 coordinate matrix over the field realizes it).
//!
//! Crystallographic families use the conventional squared lengths (long
//! roots 2; across a label-4 bond the length halves, across a label-6 bond
//! the far end is the short one starting from 6). Families containing a
//! label-5 bond use unit simple roots, so the 5-bond Gram entry is the exact
//! value −(1+√5)/4.

use crate::diagram::{classify_finite, CoxeterDiagram, FiniteType, TypeDecomposition};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{rat, Scalar};
use serde::Serialize;
use std::fmt;

/// A named finite Coxeter family. `B` and `C` share one Coxeter matrix but
/// are kept distinct: their realizations and extended diagrams differ.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Family {
    A(u32),
    B(u32),
    C(u32),
    D(u32),
    E(u32),
    F4,
    G2,
    H3,
    H4,
    I2(u32),
}

impl Family {
    /// Check the (family, rank) combination is on the finite list.
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Family::A(n) => n >= 1,
            Family::B(n) | Family::C(n) => n >= 2,
            Family::D(n) => n >= 4,
            Family::E(n) => (6..=8).contains(&n),
            Family::F4 | Family::G2 | Family::H3 | Family::H4 => true,
            Family::I2(m) => m >= 3,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidType(format!("{self} is not a finite type")))
        }
    }

    pub fn rank(&self) -> usize {
        match *self {
            Family::A(n) | Family::B(n) | Family::C(n) | Family::D(n) | Family::E(n) => n as usize,
            Family::F4 | Family::H4 => 4,
            Family::G2 | Family::I2(_) => 2,
            Family::H3 => 3,
        }
    }

    /// The irreducible Coxeter type of this family's diagram (C maps to B:
    /// their Coxeter matrices and degrees coincide).
    pub fn finite_type(&self) -> FiniteType {
        match *self {
            Family::A(n) => FiniteType::A(n),
            Family::B(n) | Family::C(n) => FiniteType::B(n),
            Family::D(n) => FiniteType::D(n),
            Family::E(n) => FiniteType::E(n),
            Family::F4 => FiniteType::F4,
            Family::G2 => FiniteType::G2,
            Family::H3 => FiniteType::H3,
            Family::H4 => FiniteType::H4,
            Family::I2(m) => match m {
                3 => FiniteType::A(2),
                4 => FiniteType::B(2),
                6 => FiniteType::G2,
                m => FiniteType::I2(m),
            },
        }
    }

    pub fn degrees(&self) -> DegreeMultiset {
        DegreeMultiset::new(self.finite_type().degrees())
    }

    /// Whether the root system admits an integral Cartan pairing. The
    /// dihedral families with labels 3, 4, 6 count as crystallographic
    /// (they coincide with A2, B2/C2, G2).
    pub fn is_crystallographic(&self) -> bool {
        match *self {
            Family::A(_)
            | Family::B(_)
            | Family::C(_)
            | Family::D(_)
            | Family::E(_)
            | Family::F4
            | Family::G2 => true,
            Family::H3 | Family::H4 => false,
            Family::I2(m) => matches!(m, 3 | 4 | 6),
        }
    }

    /// Parse a type name such as `A2`, `b3`, `I2(7)`.
    pub fn parse(text: &str) -> Result<Family> {
        let s = text.trim();
        let err = || {
            Error::InvalidType(format!(
                "cannot read `{s}` as a type name (expected e.g. A2, B3, D4, E6, F4, G2, H3, H4, I2(7))"
            ))
        };
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(err)?.to_ascii_uppercase();
        let rest: &str = &s[letter.len_utf8()..];
        let family = if letter == 'I' {
            let inner = rest
                .trim()
                .strip_prefix('2')
                .and_then(|t| t.trim().strip_prefix('('))
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(err)?;
            let m: u32 = inner.trim().parse().map_err(|_| err())?;
            Family::I2(m)
        } else {
            let n: u32 = rest.trim().parse().map_err(|_| err())?;
            match letter {
                'A' => Family::A(n),
                'B' => Family::B(n),
                'C' => Family::C(n),
                'D' => Family::D(n),
                'E' => Family::E(n),
                'F' if n == 4 => Family::F4,
                'G' if n == 2 => Family::G2,
                'H' if n == 3 => Family::H3,
                'H' if n == 4 => Family::H4,
                _ => return Err(err()),
            }
        };
        family.validate()?;
        Ok(family)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::A(n) => write!(f, "A{n}"),
            Family::B(n) => write!(f, "B{n}"),
            Family::C(n) => write!(f, "C{n}"),
            Family::D(n) => write!(f, "D{n}"),
            Family::E(n) => write!(f, "E{n}"),
            Family::F4 => write!(f, "F4"),
            Family::G2 => write!(f, "G2"),
            Family::H3 => write!(f, "H3"),
            Family::H4 => write!(f, "H4"),
            Family::I2(m) => write!(f, "I2({m})"),
        }
    }
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The sorted multiset of fundamental degrees of a finite reflection group.
/// Their product is the group order and the sum of (dᵢ − 1) is the number
/// of positive roots. A degree equal to 1 marks a direction of the ambient
/// space the roots do not span.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct DegreeMultiset(Vec<u64>);

impl DegreeMultiset {
    pub fn new(mut degrees: Vec<u64>) -> Self {
        assert!(degrees.iter().all(|&d| d >= 1), "degrees are positive");
        degrees.sort_unstable();
        DegreeMultiset(degrees)
    }

    pub fn values(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// ∏dᵢ — the order of the reflection group.
    pub fn group_order(&self) -> u64 {
        self.0.iter().product()
    }

    /// Σ(dᵢ−1) — the number of positive roots / reflections.
    pub fn exponent_sum(&self) -> u64 {
        self.0.iter().map(|d| d - 1).sum()
    }

    /// The exponents dᵢ − 1, sorted.
    pub fn exponents(&self) -> Vec<u64> {
        self.0.iter().map(|d| d - 1).collect()
    }

    /// Pad with degree-1 entries up to `ambient` slots, for systems whose
    /// roots span only part of the ambient space.
    pub fn padded(&self, ambient: usize) -> DegreeMultiset {
        assert!(ambient >= self.0.len());
        let mut v = vec![1u64; ambient - self.0.len()];
        v.extend_from_slice(&self.0);
        DegreeMultiset::new(v)
    }

    pub fn union(&self, other: &DegreeMultiset) -> DegreeMultiset {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        DegreeMultiset::new(v)
    }
}

impl fmt::Display for DegreeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Degrees of an arbitrary finite-type diagram: the multiset union of the
/// degrees of its irreducible components.
pub fn degrees(d: &CoxeterDiagram) -> Result<DegreeMultiset> {
    match classify_finite(d) {
        TypeDecomposition::NotFinite => Err(Error::NotFinite),
        TypeDecomposition::Finite(parts) => {
            let mut all = Vec::new();
            for p in parts {
                all.extend(p.degrees());
            }
            Ok(DegreeMultiset::new(all))
        }
    }
}

/// Degrees of a type decomposition already in hand.
pub fn degrees_of_decomposition(t: &TypeDecomposition) -> Result<DegreeMultiset> {
    match t {
        TypeDecomposition::NotFinite => Err(Error::NotFinite),
        TypeDecomposition::Finite(parts) => Ok(DegreeMultiset::new(
            parts.iter().flat_map(|p| p.degrees()).collect(),
        )),
    }
}

/// The standard Coxeter diagram of a family, nodes numbered 1..rank in the
/// text format. Conventions: B/C put the label-4 bond on the last edge;
/// D attaches nodes n−1 and n to node n−2; E uses the numbering with the
/// branch node 2 attached to node 4 of the path 1—3—4—…—n; H puts the
/// label-5 bond on the first edge.
pub fn build_diagram(family: Family) -> Result<CoxeterDiagram> {
    family.validate()?;
    let n = family.rank();
    let mut d = CoxeterDiagram::new(n);
    match family {
        Family::A(_) => {
            for i in 0..n - 1 {
                d.set_label(i, i + 1, 3);
            }
        }
        Family::B(_) | Family::C(_) => {
            for i in 0..n - 1 {
                d.set_label(i, i + 1, 3);
            }
            d.set_label(n - 2, n - 1, 4);
        }
        Family::D(_) => {
            for i in 0..n - 2 {
                d.set_label(i, i + 1, 3);
            }
            d.set_label(n - 3, n - 1, 3);
        }
        Family::E(_) => {
            d.set_label(0, 2, 3);
            for i in 2..n - 1 {
                d.set_label(i, i + 1, 3);
            }
            d.set_label(1, 3, 3);
        }
        Family::F4 => {
            d.set_label(0, 1, 3);
            d.set_label(1, 2, 4);
            d.set_label(2, 3, 3);
        }
        Family::G2 => d.set_label(0, 1, 6),
        Family::H3 | Family::H4 => {
            d.set_label(0, 1, 5);
            for i in 1..n - 1 {
                d.set_label(i, i + 1, 3);
            }
        }
        Family::I2(m) => d.set_label(0, 1, m),
    }
    Ok(d)
}

fn neg_cos_pi_5() -> Scalar {
    // −cos(π/5) = −(1+√5)/4.
    Scalar::new(rat(-1, 4), rat(-1, 4))
}

/// Gram matrix of simple roots realizing a finite-type diagram, with the
/// length conventions documented at module level. Fails on labels outside
/// {2,3,4,5,6} (their cosines leave ℚ(√5)) and on non-finite diagrams.
pub fn gram_from_diagram(d: &CoxeterDiagram) -> Result<Matrix> {
    if !classify_finite(d).is_finite() {
        return Err(Error::NotFinite);
    }
    let n = d.size();
    for i in 0..n {
        for j in i + 1..n {
            let m = d.label(i, j);
            if m != 2 && !(3..=6).contains(&m) {
                return Err(Error::UnsupportedLabel(m));
            }
        }
    }
    // Squared length per node, constant on label-3 bonds, halving across a
    // label-4 bond, dropping from 6 to 2 across a label-6 bond. Components
    // with a label-5 bond take unit lengths throughout.
    let mut len2: Vec<Option<Scalar>> = vec![None; n];
    for comp in d.components() {
        let labels_in: Vec<u32> = comp
            .iter()
            .flat_map(|&i| comp.iter().map(move |&j| (i, j)))
            .filter(|&(i, j)| i < j)
            .map(|(i, j)| d.label(i, j))
            .filter(|&m| m >= 3)
            .collect();
        if labels_in.contains(&5) {
            for &i in &comp {
                len2[i] = Some(Scalar::one());
            }
            continue;
        }
        let start = if labels_in.contains(&6) { 6 } else { 2 };
        len2[comp[0]] = Some(Scalar::from_int(start));
        let mut queue = vec![comp[0]];
        while let Some(v) = queue.pop() {
            let q = len2[v].clone().unwrap();
            for w in d.neighbors(v) {
                if len2[w].is_some() {
                    continue;
                }
                len2[w] = Some(match d.label(v, w) {
                    3 => q.clone(),
                    4 => &q / &Scalar::from_int(2),
                    6 => &q / &Scalar::from_int(3),
                    m => unreachable!("label {m} filtered above"),
                });
                queue.push(w);
            }
        }
    }
    let len2: Vec<Scalar> = len2.into_iter().map(Option::unwrap).collect();
    Ok(Matrix::from_fn(n, n, |i, j| {
        if i == j {
            return len2[i].clone();
        }
        match d.label(i, j) {
            2 => Scalar::zero(),
            5 => neg_cos_pi_5(),
            // For labels 3, 4, 6 with the lengths above, the entry is
            // −max(|αᵢ|², |αⱼ|²)/2 in every case.
            3 | 4 | 6 => {
                let q = if len2[i] >= len2[j] { &len2[i] } else { &len2[j] };
                -&(q / &Scalar::from_int(2))
            }
            m => unreachable!("label {m} filtered above"),
        }
    }))
}

/// An exact realization of a finite-type diagram: simple roots as the rows
/// of `simple` (standard basis vectors, possibly rescaled) together with the
/// bilinear form `form` giving all inner products as `uᵀ·form·v`.
#[derive(Clone, Debug)]
pub struct Realization {
    family: Option<Family>,
    diagram: CoxeterDiagram,
    simple: Matrix,
    form: Matrix,
}

impl Realization {
    pub fn from_diagram(diagram: CoxeterDiagram) -> Result<Realization> {
        let form = gram_from_diagram(&diagram)?;
        let n = diagram.size();
        Ok(Realization {
            family: None,
            diagram,
            simple: Matrix::identity(n),
            form,
        })
    }

    pub fn of_family(family: Family) -> Result<Realization> {
        let diagram = build_diagram(family)?;
        let mut r = Realization::from_diagram(diagram)?;
        if let Family::C(n) = family {
            // C takes the dual length convention: short roots along the
            // path, one long root of squared length 4 at the end.
            let n = n as usize;
            r.form = Matrix::from_fn(n, n, |i, j| {
                if i == j {
                    Scalar::from_int(if i == n - 1 { 4 } else { 2 })
                } else if i + 1 == j || j + 1 == i {
                    Scalar::from_int(if i.max(j) == n - 1 { -2 } else { -1 })
                } else {
                    Scalar::zero()
                }
            });
        }
        r.family = Some(family);
        Ok(r)
    }

    /// Assemble a realization from explicit parts, e.g. a simple system
    /// sitting inside a larger ambient space. The rows of `simple` are the
    /// simple roots; `form` is the ambient bilinear form.
    pub fn from_parts(
        diagram: CoxeterDiagram,
        simple: Matrix,
        form: Matrix,
    ) -> Result<Realization> {
        if !form.is_square() {
            return Err(Error::NotSquare {
                rows: form.rows(),
                cols: form.cols(),
            });
        }
        if form != form.transpose() {
            return Err(Error::InvalidArgument("form must be symmetric".into()));
        }
        if simple.cols() != form.rows() {
            return Err(Error::DimensionMismatch(format!(
                "simple roots have {} coordinates, form is {}x{}",
                simple.cols(),
                form.rows(),
                form.cols()
            )));
        }
        if simple.rows() != diagram.size() {
            return Err(Error::DimensionMismatch(format!(
                "{} simple roots for a diagram on {} nodes",
                simple.rows(),
                diagram.size()
            )));
        }
        Ok(Realization {
            family: None,
            diagram,
            simple,
            form,
        })
    }

    pub fn family(&self) -> Option<Family> {
        self.family
    }

    pub fn diagram(&self) -> &CoxeterDiagram {
        &self.diagram
    }

    /// Rows are the simple roots in ambient coordinates.
    pub fn simple_roots(&self) -> &Matrix {
        &self.simple
    }

    /// The bilinear form: inner products are `uᵀ·form·v`.
    pub fn form(&self) -> &Matrix {
        &self.form
    }

    pub fn rank(&self) -> usize {
        self.simple.rows()
    }

    /// Replace each simple root αᵢ by λᵢαᵢ (λᵢ > 0). The ambient space and
    /// form are untouched; only the chosen base is rescaled.
    pub fn rescaled(&self, scales: &[Scalar]) -> Result<Realization> {
        if scales.len() != self.simple.rows() {
            return Err(Error::DimensionMismatch(format!(
                "{} scales for {} simple roots",
                scales.len(),
                self.simple.rows()
            )));
        }
        if scales.iter().any(|s| !s.is_positive()) {
            return Err(Error::InvalidArgument(
                "base rescaling factors must be positive".into(),
            ));
        }
        let mut r = self.clone();
        r.simple = self.simple.scale_rows(scales);
        Ok(r)
    }
}

/// The extended (affine) diagram of a crystallographic family: one extra
/// node, index 0, bonded where the lowest root attaches.
#[derive(Clone, Debug)]
pub struct ExtendedDiagram {
    family: Family,
    full: CoxeterDiagram,
}

/// Affine-node attachments, as (base node in 1..rank, bond label). Verified
/// against the realized highest roots in the root-engine tests.
fn affine_attachments(family: Family) -> Result<Vec<(usize, u32)>> {
    let n = family.rank();
    let not_crystallographic = || {
        Err(Error::NoExtendedDiagram(
            family.to_string(),
            "not crystallographic".into(),
        ))
    };
    match family {
        Family::A(1) => Err(Error::NoExtendedDiagram(
            "A1".into(),
            "the rank-1 extension needs an infinite bond label, which the diagram model excludes"
                .into(),
        )),
        Family::A(_) => Ok(vec![(1, 3), (n, 3)]),
        Family::B(2) => Ok(vec![(2, 4)]),
        Family::B(_) => Ok(vec![(2, 3)]),
        Family::C(_) => Ok(vec![(1, 4)]),
        Family::D(_) => Ok(vec![(2, 3)]),
        Family::E(6) => Ok(vec![(2, 3)]),
        Family::E(7) => Ok(vec![(1, 3)]),
        Family::E(8) => Ok(vec![(8, 3)]),
        Family::E(_) => unreachable!("validated"),
        Family::F4 => Ok(vec![(1, 3)]),
        Family::G2 => Ok(vec![(1, 3)]),
        Family::I2(3) => Ok(vec![(1, 3), (2, 3)]),
        Family::I2(4) => Ok(vec![(1, 4)]),
        Family::I2(6) => Ok(vec![(1, 3)]),
        Family::H3 | Family::H4 | Family::I2(_) => not_crystallographic(),
    }
}

/// Build the extended diagram of an irreducible crystallographic family.
pub fn extended_diagram(family: Family) -> Result<ExtendedDiagram> {
    family.validate()?;
    let base = build_diagram(family)?;
    let attach = affine_attachments(family)?;
    let n = base.size();
    let mut full = CoxeterDiagram::new(n + 1);
    for (i, j, m) in base.edges() {
        full.set_label(i + 1, j + 1, m);
    }
    for (node, m) in attach {
        full.set_label(0, node, m);
    }
    Ok(ExtendedDiagram { family, full })
}

impl ExtendedDiagram {
    pub fn family(&self) -> Family {
        self.family
    }

    /// The full diagram on rank+1 nodes; the affine node has index 0.
    pub fn full(&self) -> &CoxeterDiagram {
        &self.full
    }

    pub fn size(&self) -> usize {
        self.full.size()
    }

    pub fn base(&self) -> CoxeterDiagram {
        self.full.delete_vertex(0)
    }

    /// Induced diagram after removing one node (0 = the affine node, which
    /// recovers the base diagram exactly).
    pub fn delete_node(&self, i: usize) -> Result<CoxeterDiagram> {
        if i >= self.full.size() {
            return Err(Error::InvalidArgument(format!(
                "node {i} out of range 0..={}",
                self.full.size() - 1
            )));
        }
        Ok(self.full.delete_vertex(i))
    }
}

impl fmt::Display for ExtendedDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.full)
    }
}

/// The roster of irreducible crystallographic families the affine identity
/// is verified over.
pub fn standard_crystallographic_families() -> Vec<Family> {
    let mut v = Vec::new();
    v.extend((2..=8).map(Family::A));
    v.extend((2..=5).map(Family::B));
    v.extend((2..=5).map(Family::C));
    v.extend((4..=6).map(Family::D));
    v.extend((6..=8).map(Family::E));
    v.push(Family::F4);
    v.push(Family::G2);
    v
}
